#!/usr/bin/env node
/** ddtd-extract: images in, DDTD descriptor files plus manifest out.
 * Exit codes: 0 success, 1 usage error, 2 data error. */

import { parseArgs } from 'util';
import { extractDescriptors, ExtractConfig } from './extract';
import { DataError, UsageError } from './errors';

const USAGE = `usage: ddtd-extract --image-dir DIR --out-dir DIR --model WEIGHTS [--device cpu|accelerator]

Extract vgg-19 descriptors (conv5_4 rectified activations, original image
resolution) from every .png/.jpg/.jpeg in --image-dir.  Writes one .ddtd
file per image and a manifest.tsv to --out-dir.  --model must point to a
VGGW weights artifact; a missing or malformed artifact is fatal.`;

export function parseCliArgs(argv: string[]): ExtractConfig {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        'image-dir': { type: 'string' },
        'out-dir': { type: 'string' },
        model: { type: 'string' },
        device: { type: 'string', default: 'cpu' },
        help: { type: 'boolean', default: false },
      },
      allowPositionals: false,
    });
  } catch (err) {
    throw new UsageError((err as Error).message);
  }
  if (parsed.values.help) throw new UsageError('');
  for (const name of ['image-dir', 'out-dir', 'model'] as const) {
    if (!parsed.values[name]) throw new UsageError(`--${name} is required`);
  }
  const device = parsed.values.device as string;
  if (device !== 'cpu' && device !== 'accelerator') {
    throw new UsageError(`--device must be cpu or accelerator, got ${device}`);
  }
  return {
    imageDir: parsed.values['image-dir'] as string,
    outDir: parsed.values['out-dir'] as string,
    model: parsed.values.model as string,
    device,
  };
}

export async function runCli(argv: string[]): Promise<number> {
  let config: ExtractConfig;
  try {
    config = parseCliArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      if (err.message) console.error(`usage error: ${err.message}`);
      console.error(USAGE);
      return err.message ? 1 : 0;
    }
    throw err;
  }
  try {
    const result = await extractDescriptors(config);
    console.log(
      `wrote ${result.written.length} descriptor files` +
        (result.skipped.length ? ` (skipped ${result.skipped.length})` : '') +
        ` to ${config.outDir}`,
    );
    return 0;
  } catch (err) {
    if (err instanceof DataError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  runCli(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      console.error(`error: ${(err as Error).stack ?? err}`);
      process.exit(2);
    },
  );
}
