import * as fs from 'fs';
import * as jpeg from 'jpeg-js';
import * as os from 'os';
import * as path from 'path';
import { afterAll, describe, expect, it } from 'vitest';
import { ImageDecodeError } from '../src/errors';
import { CHANNEL_MEAN, decodeImageFile, preprocess } from '../src/image';
import { gradientPng } from './helpers';

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'img-'));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe('decodeImageFile', () => {
  it('decodes png to 0..255 rgb', () => {
    const file = path.join(tmp, 'g.png');
    fs.writeFileSync(file, gradientPng(4, 2));
    const image = decodeImageFile(file);
    expect([image.width, image.height, image.data.length]).toEqual([4, 2, 24]);
    // top-left pixel of the gradient is (0, 0, 0); top-right has red 255
    expect(image.data[0]).toBe(0);
    expect(image.data[3 * 3]).toBe(255);
  });

  it('decodes jpeg within lossy tolerance', () => {
    const width = 16;
    const height = 16;
    const rgba = Buffer.alloc(width * height * 4);
    for (let i = 0; i < rgba.length; i += 4) {
      rgba[i] = 200;
      rgba[i + 1] = 100;
      rgba[i + 2] = 50;
      rgba[i + 3] = 255;
    }
    const file = path.join(tmp, 'flat.jpg');
    fs.writeFileSync(file, jpeg.encode({ data: rgba, width, height }, 95).data);
    const image = decodeImageFile(file);
    expect([image.width, image.height]).toEqual([width, height]);
    expect(Math.abs(image.data[0] - 200)).toBeLessThanOrEqual(8);
    expect(Math.abs(image.data[1] - 100)).toBeLessThanOrEqual(8);
    expect(Math.abs(image.data[2] - 50)).toBeLessThanOrEqual(8);
  });

  it('rejects unsupported extensions', () => {
    expect(() => decodeImageFile(path.join(tmp, 'x.gif'))).toThrow(/extension/);
  });

  it('rejects corrupt bytes', () => {
    const file = path.join(tmp, 'broken.png');
    fs.writeFileSync(file, Buffer.from('not a png'));
    expect(() => decodeImageFile(file)).toThrow(ImageDecodeError);
  });

  it('rejects a missing file', () => {
    expect(() => decodeImageFile(path.join(tmp, 'absent.png'))).toThrow(ImageDecodeError);
  });
});

describe('preprocess', () => {
  it('subtracts the per-channel mean exactly', () => {
    const image = {
      height: 1,
      width: 2,
      data: new Float32Array([255, 255, 255, 0, 0, 0]),
    };
    const out = preprocess(image);
    expect(out[0]).toBeCloseTo(255 - CHANNEL_MEAN[0], 4);
    expect(out[1]).toBeCloseTo(255 - CHANNEL_MEAN[1], 4);
    expect(out[2]).toBeCloseTo(255 - CHANNEL_MEAN[2], 4);
    expect(out[3]).toBeCloseTo(-CHANNEL_MEAN[0], 4);
    expect(image.data[0]).toBe(255);
  });
});
