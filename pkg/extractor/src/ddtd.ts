/** DDTD binary format: one image's h x w grid of d-dimensional descriptors.
 *
 *   bytes 0..3    magic "DDTD"
 *   bytes 4..5    format version, uint16 little-endian (currently 1)
 *   bytes 6..7    reserved, must be zero
 *   bytes 8..31   grid height, grid width, descriptor dim, image height,
 *                 image width, image-id byte length: six uint32 little-endian
 *   next id_len   image id, UTF-8
 *   rest          float32 little-endian descriptors, row-major (row, col, channel)
 */

import * as os from 'os';
import { DdtdFormatError } from './errors';

export const DDTD_MAGIC = 'DDTD';
export const DDTD_VERSION = 1;
export const HEADER_SIZE = 32;

export interface DescriptorGrid {
  imageId: string;
  /** length h*w*d, row-major (row, col, channel) */
  data: Float32Array;
  h: number;
  w: number;
  d: number;
  imgH: number;
  imgW: number;
}

function checkGrid(grid: DescriptorGrid): void {
  const { imageId, data, h, w, d, imgH, imgW } = grid;
  if (!imageId) throw new DdtdFormatError('image id must be non-empty');
  for (const [name, value] of Object.entries({ h, w, d, imgH, imgW })) {
    if (!Number.isInteger(value) || value <= 0) {
      throw new DdtdFormatError(`${imageId}: ${name} must be a positive integer, got ${value}`);
    }
  }
  if (h > imgH || w > imgW) {
    throw new DdtdFormatError(`${imageId}: grid ${h}x${w} exceeds image ${imgH}x${imgW}`);
  }
  if (data.length !== h * w * d) {
    throw new DdtdFormatError(
      `${imageId}: expected ${h * w * d} values for a ${h}x${w}x${d} grid, got ${data.length}`,
    );
  }
  for (let i = 0; i < data.length; i++) {
    if (!Number.isFinite(data[i])) {
      throw new DdtdFormatError(`${imageId}: descriptors contain non-finite values`);
    }
  }
}

export function encodeDescriptorGrid(grid: DescriptorGrid): Buffer {
  checkGrid(grid);
  const idBytes = Buffer.from(grid.imageId, 'utf-8');
  const payloadBytes = grid.data.length * 4;
  const out = Buffer.alloc(HEADER_SIZE + idBytes.length + payloadBytes);
  out.write(DDTD_MAGIC, 0, 'ascii');
  out.writeUInt16LE(DDTD_VERSION, 4);
  out.writeUInt16LE(0, 6);
  out.writeUInt32LE(grid.h, 8);
  out.writeUInt32LE(grid.w, 12);
  out.writeUInt32LE(grid.d, 16);
  out.writeUInt32LE(grid.imgH, 20);
  out.writeUInt32LE(grid.imgW, 24);
  out.writeUInt32LE(idBytes.length, 28);
  idBytes.copy(out, HEADER_SIZE);
  const payloadStart = HEADER_SIZE + idBytes.length;
  if (os.endianness() === 'LE') {
    Buffer.from(grid.data.buffer, grid.data.byteOffset, payloadBytes).copy(out, payloadStart);
  } else {
    const view = new DataView(out.buffer, out.byteOffset + payloadStart, payloadBytes);
    for (let i = 0; i < grid.data.length; i++) view.setFloat32(i * 4, grid.data[i], true);
  }
  return out;
}

export function decodeDescriptorGrid(buf: Buffer): DescriptorGrid {
  if (buf.length < HEADER_SIZE) {
    throw new DdtdFormatError(`expected ${HEADER_SIZE} header bytes, got ${buf.length}`);
  }
  if (buf.toString('ascii', 0, 4) !== DDTD_MAGIC) {
    throw new DdtdFormatError(`bad magic ${JSON.stringify(buf.toString('ascii', 0, 4))}`);
  }
  const version = buf.readUInt16LE(4);
  if (version !== DDTD_VERSION) {
    throw new DdtdFormatError(`unsupported format version ${version}, expected ${DDTD_VERSION}`);
  }
  if (buf.readUInt16LE(6) !== 0) {
    throw new DdtdFormatError('reserved header field must be zero');
  }
  const h = buf.readUInt32LE(8);
  const w = buf.readUInt32LE(12);
  const d = buf.readUInt32LE(16);
  const imgH = buf.readUInt32LE(20);
  const imgW = buf.readUInt32LE(24);
  const idLen = buf.readUInt32LE(28);
  if (Math.min(h, w, d, imgH, imgW) === 0) throw new DdtdFormatError('zero dimension in header');
  if (idLen === 0) throw new DdtdFormatError('empty image id');
  const payloadStart = HEADER_SIZE + idLen;
  const expected = payloadStart + h * w * d * 4;
  if (buf.length !== expected) {
    throw new DdtdFormatError(`expected ${expected} bytes total, got ${buf.length}`);
  }
  const imageId = buf.toString('utf-8', HEADER_SIZE, payloadStart);
  const data = new Float32Array(h * w * d);
  const view = new DataView(buf.buffer, buf.byteOffset + payloadStart, data.length * 4);
  for (let i = 0; i < data.length; i++) data[i] = view.getFloat32(i * 4, true);
  const grid = { imageId, data, h, w, d, imgH, imgW };
  checkGrid(grid);
  return grid;
}

/** Manifest: optional '#' comment lines, then one image_id<TAB>filename per line. */
export function manifestText(entries: Array<[string, string]>, comments: string[] = []): string {
  const lines: string[] = [];
  for (const comment of comments) lines.push(`# ${comment}`);
  for (const [imageId, filename] of entries) {
    if (!imageId || !filename) {
      throw new DdtdFormatError(`manifest entries must be non-empty, got (${imageId}, ${filename})`);
    }
    if (imageId.includes('\t') || filename.includes('\t')) {
      throw new DdtdFormatError(`manifest entries must not contain tabs: (${imageId}, ${filename})`);
    }
    lines.push(`${imageId}\t${filename}`);
  }
  return lines.join('\n') + '\n';
}
