#!/usr/bin/env node
// Horn solver command built on the z3-solver WASM distribution.
//
// Usage: node z3horn.js FILE.smt2
// Prints exactly one of sat / unsat / unknown on the first line, which
// is the interface the chcadt backend expects from a solver command.
//
// fp.spacer.global widens Spacer's search with global guidance; without
// it several easy recursive instances diverge instead of closing.
const fs = require('fs');
(async () => {
  const path = process.argv[2];
  if (!path) {
    console.log('unknown');
    process.exit(0);
  }
  const text = fs.readFileSync(path, 'utf8');
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const prelude = '(set-option :fp.spacer.global true)\n';
  const out = await Z3.eval_smtlib2_string(ctx, prelude + text);
  const m = String(out)
    .split(/\r?\n/)
    .find((l) => /^(sat|unsat|unknown)$/.test(l.trim()));
  console.log(m ? m.trim() : 'unknown');
  process.exit(0);
})().catch(() => {
  console.log('unknown');
  process.exit(0);
});
