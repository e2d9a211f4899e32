import { spawnSync } from 'child_process';
import * as fs from 'fs';
import * as jpeg from 'jpeg-js';
import * as os from 'os';
import * as path from 'path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { decodeDescriptorGrid } from '../src/ddtd';
import { DataError, WeightsFormatError } from '../src/errors';
import { extractDescriptors, listImageFiles } from '../src/extract';
import { seededWeights, writeWeights } from '../src/weights';
import { gradientPng } from './helpers';

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'extract-'));
const imageDir = path.join(tmp, 'images');
const outDir = path.join(tmp, 'out');
const modelPath = path.join(tmp, 'model.vggw');
const warnings: string[] = [];
const log = (line: string) => warnings.push(line);

beforeAll(() => {
  fs.mkdirSync(imageDir);
  fs.writeFileSync(path.join(imageDir, 'a.png'), gradientPng(32, 32));
  fs.writeFileSync(path.join(imageDir, 'b.png'), gradientPng(16, 32));
  fs.writeFileSync(path.join(imageDir, 'corrupt.png'), Buffer.from('junk'));
  fs.writeFileSync(path.join(imageDir, 'tiny.png'), gradientPng(8, 8));
  fs.writeFileSync(path.join(imageDir, 'note.txt'), 'not an image');
  writeWeights(modelPath, seededWeights(5));
});

afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe('listImageFiles', () => {
  it('keeps only image extensions, sorted', () => {
    expect(listImageFiles(imageDir)).toEqual(['a.png', 'b.png', 'corrupt.png', 'tiny.png']);
  });

  it('rejects a missing directory', () => {
    expect(() => listImageFiles(path.join(tmp, 'nope'))).toThrow(DataError);
  });
});

describe('extractDescriptors', () => {
  it('writes one ddtd per good image and skips bad ones with warnings', async () => {
    const result = await extractDescriptors(
      { imageDir, outDir, model: modelPath, device: 'cpu' },
      log,
    );
    expect(result.written).toEqual([
      ['a', 'a.ddtd'],
      ['b', 'b.ddtd'],
    ]);
    expect(result.skipped).toEqual(['corrupt.png', 'tiny.png']);
    expect(warnings.some((w) => w.includes('corrupt.png'))).toBe(true);
    expect(warnings.some((w) => w.includes('tiny.png'))).toBe(true);

    const a = decodeDescriptorGrid(fs.readFileSync(path.join(outDir, 'a.ddtd')));
    expect([a.h, a.w, a.d, a.imgH, a.imgW]).toEqual([2, 2, 512, 32, 32]);
    const b = decodeDescriptorGrid(fs.readFileSync(path.join(outDir, 'b.ddtd')));
    expect([b.h, b.w, b.d, b.imgH, b.imgW]).toEqual([2, 1, 512, 32, 16]);
    for (const v of b.data) expect(v).toBeGreaterThanOrEqual(0);
  });

  it('writes a commented manifest in directory order', () => {
    const lines = fs.readFileSync(path.join(outDir, 'manifest.tsv'), 'utf-8').trimEnd().split('\n');
    const comments = lines.filter((l) => l.startsWith('#'));
    expect(comments.some((l) => l.includes('preprocessing: RGB 0-255 minus mean'))).toBe(true);
    expect(comments.some((l) => l.includes('model.vggw'))).toBe(true);
    expect(lines.filter((l) => !l.startsWith('#'))).toEqual(['a\ta.ddtd', 'b\tb.ddtd']);
  });

  it('re-extracts bit-identically', async () => {
    const outDir2 = path.join(tmp, 'out2');
    await extractDescriptors({ imageDir, outDir: outDir2, model: modelPath, device: 'cpu' }, log);
    for (const name of ['a.ddtd', 'b.ddtd', 'manifest.tsv']) {
      const first = fs.readFileSync(path.join(outDir, name));
      const second = fs.readFileSync(path.join(outDir2, name));
      expect(first.equals(second)).toBe(true);
    }
  });

  it('treats missing weights as fatal', async () => {
    await expect(
      extractDescriptors(
        { imageDir, outDir, model: path.join(tmp, 'absent.vggw'), device: 'cpu' },
        log,
      ),
    ).rejects.toThrow(WeightsFormatError);
  });

  it('skips files whose id collides with an already extracted one', async () => {
    const dupDir = path.join(tmp, 'dup');
    fs.mkdirSync(dupDir);
    fs.writeFileSync(path.join(dupDir, 'same.png'), gradientPng(16, 16));
    const rgba = Buffer.alloc(16 * 16 * 4, 128);
    fs.writeFileSync(path.join(dupDir, 'same.jpg'), jpeg.encode({ data: rgba, width: 16, height: 16 }, 90).data);
    const result = await extractDescriptors(
      { imageDir: dupDir, outDir: path.join(tmp, 'dup-out'), model: modelPath, device: 'cpu' },
      log,
    );
    // sorted order puts same.jpg first, so the png is the duplicate
    expect(result.written).toEqual([['same', 'same.ddtd']]);
    expect(result.skipped).toEqual(['same.png']);
    expect(warnings.some((w) => w.includes('already extracted'))).toBe(true);
  });

  it('fails when every image is skipped', async () => {
    const badDir = path.join(tmp, 'all-bad');
    fs.mkdirSync(badDir);
    fs.writeFileSync(path.join(badDir, 'x.png'), Buffer.from('junk'));
    await expect(
      extractDescriptors({ imageDir: badDir, outDir, model: modelPath, device: 'cpu' }, log),
    ).rejects.toThrow(/skipped/);
  });
});

const ddtloc = spawnSync('ddtloc', ['--help'], { encoding: 'utf-8' });
const haveDdtloc = ddtloc.status === 0;

describe.skipIf(!haveDdtloc)('consumer interop', () => {
  it('feeds a co-localization run through the manifest', () => {
    const results = path.join(tmp, 'results.json');
    const run = spawnSync(
      'ddtloc',
      [
        'run',
        '--descriptor-dir',
        outDir,
        '--manifest',
        path.join(outDir, 'manifest.tsv'),
        '--method',
        'scda',
        '--output',
        results,
      ],
      { encoding: 'utf-8' },
    );
    expect(run.stderr).toBe('');
    expect(run.status).toBe(0);
    const payload = JSON.parse(fs.readFileSync(results, 'utf-8'));
    expect(payload.schema_version).toBe(1);
    expect(payload.method).toBe('scda');
    expect(payload.images.map((im: { image_id: string }) => im.image_id)).toEqual(['a', 'b']);
    for (const image of payload.images) {
      expect(Array.isArray(image.box)).toBe(true);
      expect(image.box).toHaveLength(4);
    }
  });
});
