"""Command line front end for the Monte Carlo harness.

Subcommands: bler, calibrate, uer, diag-llr, selftest.  Every SimConfig
field is reachable as a flag; a flat key=value config file supplies
defaults which explicit flags override.  Grids are compact strings:
``--snr 3:0.5:6`` is an inclusive range, ``--snr 2,3.5`` a list, and
epsilon values accept ``10^-1.5`` alongside plain floats.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .polar import CodeDims
from .selftest import run_selftest
from .sim import (SimConfig, run_bler_sweep, run_calibration, run_llr_profile,
                  run_uer_sweep)

__all__ = ["main", "cli_entry"]

_DEFAULT_EPSILON = "10^-1,10^-1.5,10^-2,10^-2.5,10^-3"


def _parse_dims(text: str) -> CodeDims:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"dims must be N,K,M; got {text!r}")
    return CodeDims(*(int(p) for p in parts))


def _parse_count(text: str) -> int:
    n = int(float(text))
    if float(text) != n:
        raise ValueError(f"{text!r} is not a whole number")
    return n


def _parse_value(tok: str) -> float:
    tok = tok.strip()
    if "^" in tok:
        base, exp = tok.split("^", 1)
        return float(base) ** float(exp)
    return float(tok)


def _parse_grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:step:stop; got {text!r}")
        start, step, stop = (_parse_value(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad range {text!r}: need step > 0 and stop >= start")
        n = int(round((stop - start) / step))
        grid = tuple(start + i * step for i in range(n + 1))
        return tuple(g for g in grid if g <= stop + 1e-9)
    return tuple(_parse_value(p) for p in text.split(","))


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


# one row per SimConfig field: flag/config key, parser, default
_FIELDS = {
    "dims": _parse_dims,
    "snr": _parse_grid,
    "systematic": _parse_bool,
    "list": int,
    "decoder": str,
    "epsilon": _parse_grid,
    "trials": _parse_count,
    "min_errors": int,
    "seed": int,
    "method": str,
    "outer": str,
    "outer_budget": _parse_count,
    "outer_list": int,
    "outer_max_weight": int,
    "retry": _parse_bool,
    "workers": int,
    "batch_size": int,
    "round_trials": int,
    "out": str,
    "stem": str,
}

_TO_SIMCONFIG = {
    "dims": "dims",
    "snr": "snr_grid_db",
    "systematic": "systematic",
    "list": "list_size",
    "decoder": "decoder",
    "epsilon": "epsilon_grid",
    "trials": "trials",
    "min_errors": "min_errors",
    "seed": "master_seed",
    "method": "method",
    "outer": "outer_decoder",
    "outer_budget": "outer_max_queries",
    "outer_list": "outer_list_size",
    "outer_max_weight": "outer_max_weight",
    "retry": "retry_on_threshold_fail",
    "workers": "workers",
    "batch_size": "batch_size",
    "round_trials": "round_trials",
    "out": "out_dir",
    "stem": "out_stem",
}


def _add_sim_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value file supplying flag defaults")
    p.add_argument("--dims", help="code dimensions N,K,M (e.g. 64,48,24)")
    p.add_argument("--snr", help="Eb/N0 grid in dB: start:step:stop or comma list")
    p.add_argument("--systematic", action=argparse.BooleanOptionalAction,
                   default=None, help="systematic inner code")
    p.add_argument("--list", help="inner list size L")
    p.add_argument("--decoder", choices=["ca_scl", "cca_scl"],
                   help="plain list decoding or the complete pipeline")
    p.add_argument("--epsilon", help="threshold grid (uer); accepts 10^-1.5 forms")
    p.add_argument("--trials", help="trial budget per point; accepts 1e6 forms")
    p.add_argument("--min-errors", dest="min_errors",
                   help="stop a point early after this many block errors")
    p.add_argument("--seed", help="master seed for the per-trial RNG keys")
    p.add_argument("--method", choices=["5g", "bhattacharyya"],
                   help="information-set construction")
    p.add_argument("--outer", choices=["sogrand", "gcd"],
                   help="outer decoder: pattern guessing or codeword guessing")
    p.add_argument("--outer-budget", dest="outer_budget",
                   help="max outer-decoder pattern queries")
    p.add_argument("--outer-list", dest="outer_list",
                   help="outer-decoder list size")
    p.add_argument("--outer-max-weight", dest="outer_max_weight",
                   help="cap on the outer pattern logistic weight")
    p.add_argument("--retry", action=argparse.BooleanOptionalAction, default=None,
                   help="retry threshold failures through the outer decoder")
    p.add_argument("--workers", help="process pool width (results do not depend on it)")
    p.add_argument("--batch-size", dest="batch_size", help="trials per batch")
    p.add_argument("--round-trials", dest="round_trials",
                   help="trials per stop-rule round")
    p.add_argument("--out", help="output directory (default $CAPOLAR_OUT_DIR or .)")
    p.add_argument("--stem", help="output file stem")
    p.add_argument("--emit", choices=["plot"],
                   help="also write gnuplot-ready .dat columns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capolar",
        description="Monte Carlo experiments for complete CRC-aided polar decoding")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (("bler", "block-error-rate sweep over an SNR grid"),
                       ("calibrate", "soft-output calibration histogram"),
                       ("uer", "undetected-error rate vs threshold"),
                       ("diag-llr", "sorted inner/outer LLR reliability profiles")):
        _add_sim_flags(sub.add_parser(name, help=desc))
    sub.add_parser("selftest", help="run the oracle-equivalence suite")
    return parser


def _build_simconfig(args: argparse.Namespace, need: tuple[str, ...],
                     defaults: dict) -> SimConfig:
    values = dict(defaults)
    if args.config:
        file_cfg = _read_config(args.config)
        unknown = set(file_cfg) - set(_FIELDS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, raw in file_cfg.items():
            values[key] = _FIELDS[key](raw)
    for key in _FIELDS:
        given = getattr(args, key, None)
        if given is None:
            continue
        values[key] = _FIELDS[key](given) if isinstance(given, str) else given
    for key in need:
        if values.get(key) is None:
            raise ValueError(f"missing required setting {key!r} (flag --{key.replace('_', '-')})")
    kwargs = {_TO_SIMCONFIG[k]: v for k, v in values.items() if v is not None}
    kwargs["emit_plot"] = args.emit == "plot"
    return SimConfig(**kwargs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        return run_selftest()
    try:
        if args.command == "bler":
            cfg = _build_simconfig(args, ("dims", "snr"), {})
            records = run_bler_sweep(cfg)
            for r in records:
                print(f"snr {r.snr_db:g} dB: trials {r.trials}, "
                      f"bler {r.bler:.3e}, rescues {r.outer_rescues}/{r.inner_crc_failures}")
        elif args.command == "calibrate":
            cfg = _build_simconfig(args, ("dims", "snr"), {"decoder": "ca_scl"})
            result = run_calibration(cfg)
            for b in result["so"]:
                if b.count:
                    print(f"bin ({b.lower:.2e}, {b.upper:.2e}]: n={b.count}, "
                          f"predicted {b.mean_predicted:.3e}, "
                          f"empirical {b.empirical_error_rate:.3e}")
        elif args.command == "uer":
            cfg = _build_simconfig(args, ("dims", "snr"),
                                   {"epsilon": _parse_grid(_DEFAULT_EPSILON)})
            records = run_uer_sweep(cfg)
            for r in records:
                print(f"snr {r.snr_db:g} dB eps {r.epsilon:.3e}: "
                      f"uer {r.uer:.3e}, erasure rate {r.erasures / r.trials:.3e}")
        elif args.command == "diag-llr":
            cfg = _build_simconfig(args, ("dims", "snr"), {"trials": 1000})
            profile = run_llr_profile(cfg)
            mid = {k: float(np.median(v)) for k, v in profile.items()}
            print(f"median |LLR|: inner {mid['inner']:.3f}, outer {mid['outer']:.3f}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


cli_entry = main

if __name__ == "__main__":
    sys.exit(main())
