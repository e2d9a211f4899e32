import { PNG } from 'pngjs';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { RgbImage } from '../src/image';
import { Vgg19 } from '../src/vgg';
import { seededWeights } from '../src/weights';
import { gradientPng } from './helpers';

function decodeToRgb(buf: Buffer): RgbImage {
  const png = PNG.sync.read(buf);
  const data = new Float32Array(png.width * png.height * 3);
  for (let i = 0, j = 0; i < png.data.length; i += 4, j += 3) {
    data[j] = png.data[i];
    data[j + 1] = png.data[i + 1];
    data[j + 2] = png.data[i + 2];
  }
  return { height: png.height, width: png.width, data };
}

let network: Vgg19;

beforeAll(async () => {
  await Vgg19.ready();
  network = new Vgg19(seededWeights(7));
});

afterAll(() => network.dispose());

describe('Vgg19.forward', () => {
  it('emits a 1x1x512 grid for a 16x16 image', () => {
    const out = network.forward(decodeToRgb(gradientPng(16, 16)));
    expect([out.h, out.w, out.d]).toEqual([1, 1, 512]);
    expect(out.data.length).toBe(512);
  });

  it('emits one grid row per 16px of image height', () => {
    const out = network.forward(decodeToRgb(gradientPng(16, 32)));
    expect([out.h, out.w, out.d]).toEqual([2, 1, 512]);
  });

  it('floors partial strides, as the pooled activation dictates', () => {
    // 17px pools through 8, 4, 2, 1: same grid as 16px, not ceil(17/16) = 2
    const out = network.forward(decodeToRgb(gradientPng(16, 17)));
    expect([out.h, out.w]).toEqual([1, 1]);
  });

  it('emits only rectified (nonnegative) values, some positive', () => {
    const out = network.forward(decodeToRgb(gradientPng(16, 16)));
    let min = Infinity;
    let positives = 0;
    for (const v of out.data) {
      expect(Number.isFinite(v)).toBe(true);
      min = Math.min(min, v);
      if (v > 0) positives++;
    }
    expect(min).toBeGreaterThanOrEqual(0);
    expect(positives).toBeGreaterThan(0);
  });

  it('is bit-identical across repeated runs', () => {
    const image = decodeToRgb(gradientPng(16, 16));
    const a = network.forward(image);
    const b = network.forward(image);
    expect(Buffer.from(a.data.buffer).equals(Buffer.from(b.data.buffer))).toBe(true);
  });

  it('rejects images below the stride window', () => {
    expect(() => network.forward(decodeToRgb(gradientPng(15, 64)))).toThrow(/stride window/);
  });
});
