/** Image decoding and the fixed input preprocessing. */

import * as fs from 'fs';
import * as path from 'path';
import * as jpeg from 'jpeg-js';
import { PNG } from 'pngjs';
import { ImageDecodeError } from './errors';

export interface RgbImage {
  height: number;
  width: number;
  /** HWC RGB, values 0..255 */
  data: Float32Array;
}

export const IMAGE_EXTENSIONS = new Set(['.png', '.jpg', '.jpeg']);

/** Published VGG preprocessing: subtract the training-set mean RGB value
 * from raw 0..255 pixels.  Recorded in the manifest header so consumers
 * can tell how descriptors were produced. */
export const CHANNEL_MEAN: readonly [number, number, number] = [123.68, 116.779, 103.939];

export const PREPROCESSING_NOTE = `preprocessing: RGB 0-255 minus mean (${CHANNEL_MEAN.join(', ')})`;

function fromRgba(height: number, width: number, rgba: Uint8Array, source: string): RgbImage {
  if (rgba.length !== height * width * 4) {
    throw new ImageDecodeError(`${source}: decoder returned ${rgba.length} bytes for ${width}x${height} RGBA`);
  }
  const data = new Float32Array(height * width * 3);
  for (let i = 0, j = 0; i < rgba.length; i += 4, j += 3) {
    data[j] = rgba[i];
    data[j + 1] = rgba[i + 1];
    data[j + 2] = rgba[i + 2];
  }
  return { height, width, data };
}

export function decodeImageFile(filePath: string): RgbImage {
  const ext = path.extname(filePath).toLowerCase();
  if (!IMAGE_EXTENSIONS.has(ext)) {
    throw new ImageDecodeError(`${filePath}: unsupported image extension ${ext || '(none)'}`);
  }
  let raw: Buffer;
  try {
    raw = fs.readFileSync(filePath);
  } catch (err) {
    throw new ImageDecodeError(`${filePath}: ${(err as Error).message}`);
  }
  try {
    if (ext === '.png') {
      const png = PNG.sync.read(raw);
      return fromRgba(png.height, png.width, png.data, filePath);
    }
    const image = jpeg.decode(raw, { useTArray: true, formatAsRGBA: true });
    return fromRgba(image.height, image.width, image.data, filePath);
  } catch (err) {
    if (err instanceof ImageDecodeError) throw err;
    throw new ImageDecodeError(`${filePath}: ${(err as Error).message}`);
  }
}

/** Mean-subtracted copy, same HWC layout, ready to feed the network. */
export function preprocess(image: RgbImage): Float32Array {
  const out = new Float32Array(image.data.length);
  for (let i = 0; i < out.length; i += 3) {
    out[i] = image.data[i] - CHANNEL_MEAN[0];
    out[i + 1] = image.data[i + 1] - CHANNEL_MEAN[1];
    out[i + 2] = image.data[i + 2] - CHANNEL_MEAN[2];
  }
  return out;
}
