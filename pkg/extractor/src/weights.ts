/** VGG-19 convolutional weights: the fixed layer table and the VGGW container.
 *
 * VGGW file layout (all little-endian):
 *
 *   bytes 0..3    magic "VGGW"
 *   bytes 4..5    format version, uint16 (currently 1)
 *   bytes 6..7    reserved, must be zero
 *   bytes 8..11   total float32 value count, uint32
 *   rest          for each conv layer in VGG19_CONV_LAYERS order:
 *                 kernel float32 values in [ky][kx][in][out] index order
 *                 (3 x 3 x in x out), then bias float32 values (out).
 *
 * The architecture is fixed, so no shapes are stored; the total length is
 * fully determined and anything else is rejected.
 */

import * as fs from 'fs';
import * as os from 'os';
import seedrandom from 'seedrandom';
import { WeightsFormatError } from './errors';

export const VGGW_MAGIC = 'VGGW';
export const VGGW_VERSION = 1;
export const KERNEL_SIZE = 3;

export interface ConvSpec {
  name: string;
  inChannels: number;
  outChannels: number;
}

/** Conv layers through conv5_4; extraction stops at its rectified output. */
export const VGG19_CONV_LAYERS: ConvSpec[] = [
  { name: 'conv1_1', inChannels: 3, outChannels: 64 },
  { name: 'conv1_2', inChannels: 64, outChannels: 64 },
  { name: 'conv2_1', inChannels: 64, outChannels: 128 },
  { name: 'conv2_2', inChannels: 128, outChannels: 128 },
  { name: 'conv3_1', inChannels: 128, outChannels: 256 },
  { name: 'conv3_2', inChannels: 256, outChannels: 256 },
  { name: 'conv3_3', inChannels: 256, outChannels: 256 },
  { name: 'conv3_4', inChannels: 256, outChannels: 256 },
  { name: 'conv4_1', inChannels: 256, outChannels: 512 },
  { name: 'conv4_2', inChannels: 512, outChannels: 512 },
  { name: 'conv4_3', inChannels: 512, outChannels: 512 },
  { name: 'conv4_4', inChannels: 512, outChannels: 512 },
  { name: 'conv5_1', inChannels: 512, outChannels: 512 },
  { name: 'conv5_2', inChannels: 512, outChannels: 512 },
  { name: 'conv5_3', inChannels: 512, outChannels: 512 },
  { name: 'conv5_4', inChannels: 512, outChannels: 512 },
];

/** 2x2 stride-2 max pooling runs after these layers (pool5 never runs). */
export const POOL_AFTER = new Set(['conv1_2', 'conv2_2', 'conv3_4', 'conv4_4']);

export const DESCRIPTOR_DIM = VGG19_CONV_LAYERS[VGG19_CONV_LAYERS.length - 1].outChannels;

/** Input shrinks 2x at each of the four pools before the target layer. */
export const NETWORK_STRIDE = 16;

export interface VggWeights {
  /** layer name -> kernel values, [ky][kx][in][out] order, 9*in*out long */
  kernels: Map<string, Float32Array>;
  /** layer name -> bias values, out long */
  biases: Map<string, Float32Array>;
}

function kernelLength(spec: ConvSpec): number {
  return KERNEL_SIZE * KERNEL_SIZE * spec.inChannels * spec.outChannels;
}

export function expectedValueCount(): number {
  let total = 0;
  for (const spec of VGG19_CONV_LAYERS) total += kernelLength(spec) + spec.outChannels;
  return total;
}

function checkWeights(weights: VggWeights): void {
  for (const spec of VGG19_CONV_LAYERS) {
    const kernel = weights.kernels.get(spec.name);
    const bias = weights.biases.get(spec.name);
    if (!kernel || !bias) throw new WeightsFormatError(`missing weights for ${spec.name}`);
    if (kernel.length !== kernelLength(spec)) {
      throw new WeightsFormatError(
        `${spec.name}: kernel has ${kernel.length} values, expected ${kernelLength(spec)}`,
      );
    }
    if (bias.length !== spec.outChannels) {
      throw new WeightsFormatError(
        `${spec.name}: bias has ${bias.length} values, expected ${spec.outChannels}`,
      );
    }
  }
}

export function writeWeights(path: string, weights: VggWeights): void {
  checkWeights(weights);
  const total = expectedValueCount();
  const out = Buffer.alloc(12 + total * 4);
  out.write(VGGW_MAGIC, 0, 'ascii');
  out.writeUInt16LE(VGGW_VERSION, 4);
  out.writeUInt16LE(0, 6);
  out.writeUInt32LE(total, 8);
  let offset = 12;
  for (const spec of VGG19_CONV_LAYERS) {
    for (const values of [weights.kernels.get(spec.name)!, weights.biases.get(spec.name)!]) {
      if (os.endianness() === 'LE') {
        Buffer.from(values.buffer, values.byteOffset, values.length * 4).copy(out, offset);
      } else {
        const view = new DataView(out.buffer, out.byteOffset + offset, values.length * 4);
        for (let i = 0; i < values.length; i++) view.setFloat32(i * 4, values[i], true);
      }
      offset += values.length * 4;
    }
  }
  fs.writeFileSync(path, out);
}

export function readWeights(path: string): VggWeights {
  let buf: Buffer;
  try {
    buf = fs.readFileSync(path);
  } catch (err) {
    throw new WeightsFormatError(`cannot read weights file ${path}: ${(err as Error).message}`);
  }
  if (buf.length < 12 || buf.toString('ascii', 0, 4) !== VGGW_MAGIC) {
    throw new WeightsFormatError(`${path}: not a VGGW weights file`);
  }
  const version = buf.readUInt16LE(4);
  if (version !== VGGW_VERSION) {
    throw new WeightsFormatError(`${path}: unsupported version ${version}, expected ${VGGW_VERSION}`);
  }
  if (buf.readUInt16LE(6) !== 0) {
    throw new WeightsFormatError(`${path}: reserved header field must be zero`);
  }
  const total = expectedValueCount();
  if (buf.readUInt32LE(8) !== total) {
    throw new WeightsFormatError(
      `${path}: header declares ${buf.readUInt32LE(8)} values, VGG-19 needs ${total}`,
    );
  }
  if (buf.length !== 12 + total * 4) {
    throw new WeightsFormatError(`${path}: expected ${12 + total * 4} bytes, got ${buf.length}`);
  }
  const weights: VggWeights = { kernels: new Map(), biases: new Map() };
  let offset = 12;
  const readBlock = (length: number): Float32Array => {
    const values = new Float32Array(length);
    const view = new DataView(buf.buffer, buf.byteOffset + offset, length * 4);
    for (let i = 0; i < length; i++) values[i] = view.getFloat32(i * 4, true);
    offset += length * 4;
    return values;
  };
  for (const spec of VGG19_CONV_LAYERS) {
    weights.kernels.set(spec.name, readBlock(kernelLength(spec)));
    weights.biases.set(spec.name, readBlock(spec.outChannels));
  }
  return weights;
}

/** He-uniform random weights at the real architecture, for tests and demos.
 * Not pretrained: descriptors are meaningful only as deterministic features. */
export function seededWeights(seed: number): VggWeights {
  const rng = seedrandom(`vggw-${seed}`);
  const weights: VggWeights = { kernels: new Map(), biases: new Map() };
  for (const spec of VGG19_CONV_LAYERS) {
    const fanIn = KERNEL_SIZE * KERNEL_SIZE * spec.inChannels;
    const limit = Math.sqrt(6.0 / fanIn);
    const kernel = new Float32Array(kernelLength(spec));
    for (let i = 0; i < kernel.length; i++) kernel[i] = (rng() * 2 - 1) * limit;
    weights.kernels.set(spec.name, kernel);
    weights.biases.set(spec.name, new Float32Array(spec.outChannels));
  }
  return weights;
}
