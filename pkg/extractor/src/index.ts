export {
  DDTD_MAGIC,
  DDTD_VERSION,
  DescriptorGrid,
  decodeDescriptorGrid,
  encodeDescriptorGrid,
  manifestText,
} from './ddtd';
export { DataError, DdtdFormatError, ImageDecodeError, UsageError, WeightsFormatError } from './errors';
export { CHANNEL_MEAN, PREPROCESSING_NOTE, RgbImage, decodeImageFile, preprocess } from './image';
export { Activation, Vgg19 } from './vgg';
export {
  DESCRIPTOR_DIM,
  NETWORK_STRIDE,
  VGG19_CONV_LAYERS,
  VggWeights,
  expectedValueCount,
  readWeights,
  seededWeights,
  writeWeights,
} from './weights';
export { ExtractConfig, ExtractResult, extractDescriptors, listImageFiles } from './extract';
