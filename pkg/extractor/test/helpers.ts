import { PNG } from 'pngjs';

/** Deterministic RGB gradient PNG; distinct per (width, height). */
export function gradientPng(width: number, height: number): Buffer {
  const png = new PNG({ width, height });
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const i = (y * width + x) * 4;
      png.data[i] = Math.round((x * 255) / Math.max(width - 1, 1));
      png.data[i + 1] = Math.round((y * 255) / Math.max(height - 1, 1));
      png.data[i + 2] = (x * 31 + y * 17) % 256;
      png.data[i + 3] = 255;
    }
  }
  return PNG.sync.write(png);
}
