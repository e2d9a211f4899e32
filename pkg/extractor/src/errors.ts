/** Error taxonomy mirroring the consumer's exit-code convention:
 * usage problems exit 1, data problems exit 2. */

export class UsageError extends Error {}

/** Unreadable, malformed, or inconsistent input data. */
export class DataError extends Error {}

export class DdtdFormatError extends DataError {}

export class WeightsFormatError extends DataError {}

export class ImageDecodeError extends DataError {}
