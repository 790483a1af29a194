#!/usr/bin/env python3
"""Paired BLER sweeps: plain CA-SCL vs the complete pipeline.

Runs both decoders on identical noise (same master seed, so every CCA
error is also a CA error) for the three headline configurations:

  nonsys4824   [64,48,24] non-systematic, L=4
  sys4824      [64,48,24] systematic,    L=16
  sys3120      [64,31,20] systematic,    L=4

Writes one CSV + JSON pair per (configuration, decoder) into --out and
prints the per-point summary lines.  Expect a few minutes per
configuration at the default budgets.
"""

import argparse
import pathlib
import sys

from capolar.cli import main as capolar

CONFIGS = {
    "nonsys4824": ("64,48,24", "no-systematic", "4", "5.0:0.25:8.0"),
    "sys4824": ("64,48,24", "systematic", "16", "4.5:0.25:7.0"),
    "sys3120": ("64,31,20", "systematic", "4", "4.0:0.25:6.5"),
}


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", choices=sorted(CONFIGS), action="append",
                    help="run a subset of the configurations")
    ap.add_argument("--outer", default="gcd", choices=["sogrand", "gcd"])
    ap.add_argument("--trials", default="2e5")
    ap.add_argument("--min-errors", default="100")
    ap.add_argument("--seed", default="2024")
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)
    pathlib.Path(args.out).mkdir(parents=True, exist_ok=True)

    for name in args.only or sorted(CONFIGS):
        dims, sysflag, lsize, grid = CONFIGS[name]
        for decoder in ("ca_scl", "cca_scl"):
            stem = f"{name}_{decoder}"
            print(f"== {stem}", flush=True)
            rc = capolar(["bler", "--dims", dims, f"--{sysflag}",
                          "--list", lsize, "--snr", grid,
                          "--decoder", decoder, "--outer", args.outer,
                          "--trials", args.trials,
                          "--min-errors", args.min_errors,
                          "--seed", args.seed, "--out", args.out,
                          "--stem", stem, "--emit", "plot"])
            if rc:
                return rc
    return 0


if __name__ == "__main__":
    sys.exit(run())
