import { describe, expect, it } from 'vitest';
import {
  decodeDescriptorGrid,
  DescriptorGrid,
  encodeDescriptorGrid,
  HEADER_SIZE,
  manifestText,
} from '../src/ddtd';
import { DdtdFormatError } from '../src/errors';

function sampleGrid(): DescriptorGrid {
  return {
    imageId: 'im0',
    data: new Float32Array([1, 2, 3, 4, 5, 6]),
    h: 1,
    w: 2,
    d: 3,
    imgH: 16,
    imgW: 32,
  };
}

describe('encodeDescriptorGrid', () => {
  it('lays out the header byte for byte', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    expect(buf.length).toBe(HEADER_SIZE + 3 + 6 * 4);
    expect(buf.toString('ascii', 0, 4)).toBe('DDTD');
    expect(buf.readUInt16LE(4)).toBe(1);
    expect(buf.readUInt16LE(6)).toBe(0);
    expect([8, 12, 16, 20, 24, 28].map((o) => buf.readUInt32LE(o))).toEqual([1, 2, 3, 16, 32, 3]);
    expect(buf.toString('utf-8', 32, 35)).toBe('im0');
    // float32 1.0 little-endian is 00 00 80 3f
    expect(buf.subarray(35, 39).toString('hex')).toBe('0000803f');
    expect(buf.readFloatLE(35 + 5 * 4)).toBe(6);
  });

  it('round-trips through decode', () => {
    const grid = sampleGrid();
    const back = decodeDescriptorGrid(encodeDescriptorGrid(grid));
    expect(back.imageId).toBe(grid.imageId);
    expect([back.h, back.w, back.d, back.imgH, back.imgW]).toEqual([1, 2, 3, 16, 32]);
    expect(Array.from(back.data)).toEqual(Array.from(grid.data));
  });

  it('round-trips a multi-byte utf-8 id', () => {
    const grid = { ...sampleGrid(), imageId: 'bild-äß' };
    const back = decodeDescriptorGrid(encodeDescriptorGrid(grid));
    expect(back.imageId).toBe(grid.imageId);
  });

  it('rejects grids larger than their image', () => {
    expect(() => encodeDescriptorGrid({ ...sampleGrid(), imgW: 1 })).toThrow(DdtdFormatError);
  });

  it('rejects non-finite values', () => {
    const grid = sampleGrid();
    grid.data[2] = Number.NaN;
    expect(() => encodeDescriptorGrid(grid)).toThrow(/non-finite/);
  });

  it('rejects length mismatches', () => {
    expect(() => encodeDescriptorGrid({ ...sampleGrid(), d: 4 })).toThrow(/expected 8 values/);
  });
});

describe('decodeDescriptorGrid', () => {
  it('rejects a bad magic', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    buf.write('XXXX', 0, 'ascii');
    expect(() => decodeDescriptorGrid(buf)).toThrow(/bad magic/);
  });

  it('rejects an unknown version', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    buf.writeUInt16LE(2, 4);
    expect(() => decodeDescriptorGrid(buf)).toThrow(/version 2/);
  });

  it('rejects a nonzero reserved field', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    buf.writeUInt16LE(7, 6);
    expect(() => decodeDescriptorGrid(buf)).toThrow(/reserved/);
  });

  it('rejects truncated payloads', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    expect(() => decodeDescriptorGrid(buf.subarray(0, buf.length - 1))).toThrow(/bytes total/);
  });

  it('rejects a zero dimension', () => {
    const buf = encodeDescriptorGrid(sampleGrid());
    buf.writeUInt32LE(0, 16);
    expect(() => decodeDescriptorGrid(buf)).toThrow(/zero dimension/);
  });
});

describe('manifestText', () => {
  it('writes comments then tab-separated entries', () => {
    const text = manifestText(
      [
        ['a', 'a.ddtd'],
        ['b', 'b.ddtd'],
      ],
      ['model: test'],
    );
    expect(text).toBe('# model: test\na\ta.ddtd\nb\tb.ddtd\n');
  });

  it('rejects embedded tabs', () => {
    expect(() => manifestText([['a\tb', 'x.ddtd']])).toThrow(/tab/);
  });

  it('rejects empty fields', () => {
    expect(() => manifestText([['', 'x.ddtd']])).toThrow(/non-empty/);
  });
});
