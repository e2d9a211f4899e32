/** VGG-19 forward pass through the last convolution layer before the fifth
 * pooling stage, emitting the rectified activation grid. */

import * as tf from '@tensorflow/tfjs-core';
import '@tensorflow/tfjs-backend-cpu';
import { DataError } from './errors';
import { RgbImage, preprocess } from './image';
import { KERNEL_SIZE, NETWORK_STRIDE, POOL_AFTER, VGG19_CONV_LAYERS, VggWeights } from './weights';

export interface Activation {
  h: number;
  w: number;
  d: number;
  /** row-major (row, col, channel) */
  data: Float32Array;
}

export class Vgg19 {
  private kernels = new Map<string, tf.Tensor4D>();
  private biases = new Map<string, tf.Tensor1D>();

  constructor(weights: VggWeights) {
    for (const spec of VGG19_CONV_LAYERS) {
      this.kernels.set(
        spec.name,
        tf.tensor4d(weights.kernels.get(spec.name)!, [
          KERNEL_SIZE,
          KERNEL_SIZE,
          spec.inChannels,
          spec.outChannels,
        ]),
      );
      this.biases.set(spec.name, tf.tensor1d(weights.biases.get(spec.name)!));
    }
  }

  static async ready(): Promise<void> {
    await tf.setBackend('cpu');
    await tf.ready();
  }

  /** Grid dims are read from the activation actually produced, never computed. */
  forward(image: RgbImage): Activation {
    if (Math.min(image.height, image.width) < NETWORK_STRIDE) {
      throw new DataError(
        `image ${image.width}x${image.height} is smaller than the network's ` +
          `${NETWORK_STRIDE}px stride window`,
      );
    }
    const result = tf.tidy(() => {
      let x: tf.Tensor4D = tf.tensor4d(preprocess(image), [1, image.height, image.width, 3]);
      for (const spec of VGG19_CONV_LAYERS) {
        const conv = tf.conv2d(x, this.kernels.get(spec.name)!, 1, 'same');
        x = tf.relu(tf.add(conv, this.biases.get(spec.name)!)) as tf.Tensor4D;
        if (POOL_AFTER.has(spec.name)) {
          x = tf.maxPool(x, 2, 2, 'valid');
        }
      }
      return x;
    });
    const [, h, w, d] = result.shape;
    const data = new Float32Array(result.dataSync());
    result.dispose();
    return { h, w, d, data };
  }

  dispose(): void {
    for (const tensor of this.kernels.values()) tensor.dispose();
    for (const tensor of this.biases.values()) tensor.dispose();
    this.kernels.clear();
    this.biases.clear();
  }
}
