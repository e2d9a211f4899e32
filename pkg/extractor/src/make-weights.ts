#!/usr/bin/env node
/** Write a seeded random VGGW weights artifact (for tests and demos; real
 * pretrained weights come from the conversion snippet in the README). */

import { parseArgs } from 'util';
import { seededWeights, writeWeights } from './weights';

function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: { out: { type: 'string' }, seed: { type: 'string', default: '0' } },
      allowPositionals: false,
    });
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  const out = parsed.values.out;
  const seed = Number(parsed.values.seed);
  if (!out || !Number.isInteger(seed)) {
    console.error('usage: make-weights --out FILE [--seed N]');
    return 1;
  }
  writeWeights(out, seededWeights(seed));
  console.log(`wrote seeded vgg-19 weights (seed ${seed}) to ${out}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
