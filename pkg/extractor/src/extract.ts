/** Batch extraction: raw images in, one DDTD file per image plus a manifest. */

import * as fs from 'fs';
import * as path from 'path';
import { encodeDescriptorGrid, manifestText } from './ddtd';
import { DataError } from './errors';
import { IMAGE_EXTENSIONS, PREPROCESSING_NOTE, decodeImageFile } from './image';
import { Vgg19 } from './vgg';
import { readWeights } from './weights';

export interface ExtractConfig {
  imageDir: string;
  outDir: string;
  /** path to a VGGW weights artifact; missing or invalid is fatal */
  model: string;
  /** layer is fixed (conv5_4 rectified output); only the device is selectable */
  device: 'cpu' | 'accelerator';
}

export interface ExtractResult {
  /** (image_id, ddtd filename) pairs, in manifest order */
  written: Array<[string, string]>;
  /** image filenames skipped with a warning */
  skipped: string[];
  manifestPath: string;
}

export function listImageFiles(imageDir: string): string[] {
  let names: string[];
  try {
    names = fs.readdirSync(imageDir);
  } catch (err) {
    throw new DataError(`cannot list image directory ${imageDir}: ${(err as Error).message}`);
  }
  return names
    .filter((name) => IMAGE_EXTENSIONS.has(path.extname(name).toLowerCase()))
    .sort();
}

export async function extractDescriptors(
  config: ExtractConfig,
  log: (line: string) => void = (line) => console.error(line),
): Promise<ExtractResult> {
  if (config.device === 'accelerator') {
    log('warning: no accelerator backend is available here, using cpu');
  }
  await Vgg19.ready();
  const weights = readWeights(config.model);
  const files = listImageFiles(config.imageDir);
  if (files.length === 0) {
    throw new DataError(`no .png/.jpg/.jpeg images in ${config.imageDir}`);
  }
  fs.mkdirSync(config.outDir, { recursive: true });

  const network = new Vgg19(weights);
  const written: Array<[string, string]> = [];
  const skipped: string[] = [];
  const seenIds = new Set<string>();
  try {
    for (const filename of files) {
      const imageId = filename.slice(0, filename.length - path.extname(filename).length);
      if (seenIds.has(imageId)) {
        log(`warning: skipping ${filename}: image id ${imageId} already extracted`);
        skipped.push(filename);
        continue;
      }
      let grid;
      try {
        const image = decodeImageFile(path.join(config.imageDir, filename));
        const activation = network.forward(image);
        grid = {
          imageId,
          data: activation.data,
          h: activation.h,
          w: activation.w,
          d: activation.d,
          imgH: image.height,
          imgW: image.width,
        };
      } catch (err) {
        if (err instanceof DataError) {
          log(`warning: skipping ${filename}: ${err.message}`);
          skipped.push(filename);
          continue;
        }
        throw err;
      }
      const outName = `${imageId}.ddtd`;
      fs.writeFileSync(path.join(config.outDir, outName), encodeDescriptorGrid(grid));
      written.push([imageId, outName]);
      seenIds.add(imageId);
    }
  } finally {
    network.dispose();
  }

  if (written.length === 0) {
    throw new DataError(`all ${files.length} images were skipped, nothing to write`);
  }
  const manifestPath = path.join(config.outDir, 'manifest.tsv');
  const comments = [
    `extracted by ddtd-extractor: vgg-19 conv5_4 rectified activations`,
    `model: ${path.basename(config.model)}`,
    PREPROCESSING_NOTE,
  ];
  fs.writeFileSync(manifestPath, manifestText(written, comments));
  return { written, skipped, manifestPath };
}
