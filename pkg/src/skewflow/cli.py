"""Command line: ``skewflow run <experiment> [--key value ...]`` and ``skewflow suite <config>``.

Each run writes ``<out_dir>/<experiment>.json`` with the fields
``experiment, params, estimate, ci_lo, ci_hi, target, pass`` and the raw data
as ``<out_dir>/<experiment>.csv``. The exit status is 0 when every check
passes, 1 when some check fails and 2 on invalid input.

A suite config is a flat ``key = value`` file. ``experiments`` lists the
experiments (comma separated); ``seed`` and ``out_dir`` apply to the whole
suite; ``name.key = value`` sets a parameter of one experiment and a bare
``key = value`` sets it for every listed experiment that has it (``beta`` is
not pushed onto the negative-beta experiments ``race-25`` and ``stage-22``).
Command-line ``--set key=value`` entries override the file.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .experiments import DEFAULTS, REGISTRY, run_experiment

_NEG_BETA = {"race-25", "stage-22"}


def _parse_pairs(tokens: list[str]) -> dict:
    """``--key value`` pairs into a dict."""
    out = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--") or len(tok) < 3:
            raise ValueError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_") if tok[2:] not in ("K",) else tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            try:
                val = next(it)
            except StopIteration:
                raise ValueError(f"missing value for {tok}") from None
        out[key] = val
    return out


def _write(out_dir: Path, name: str, params: dict, outcome) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {
        "experiment": name,
        "params": params,
        "estimate": float(outcome.estimate),
        "ci_lo": float(outcome.ci_lo),
        "ci_hi": float(outcome.ci_hi),
        "target": float(outcome.target),
        "pass": outcome.passed,
    }
    (out_dir / f"{name}.json").write_text(json.dumps(summary, indent=2, sort_keys=False) + "\n")
    with (out_dir / f"{name}.csv").open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(outcome.header)
        for row in outcome.rows:
            wr.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return summary


def _run_one(name: str, params: dict, out_dir: Path) -> tuple[dict, dict]:
    p, outcome = run_experiment(name, params)
    summary = _write(out_dir, name, p, outcome)
    return summary, {k: bool(v) for k, v in outcome.checks.items()}


def read_config(path) -> dict:
    cfg = {}
    text = Path(path).read_text()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise ValueError(f"{path}:{ln}: empty key")
        cfg[k] = v
    return cfg


def suite_plan(cfg: dict) -> tuple[list, int, Path, dict]:
    names = [s.strip() for s in cfg.get("experiments", "").split(",") if s.strip()]
    if not names:
        raise ValueError("config lists no experiments")
    for n in names:
        if n not in REGISTRY:
            raise ValueError(f"unknown experiment {n!r}")
    seed = int(cfg.get("seed", 1))
    out_dir = Path(cfg.get("out_dir", "results"))
    per = {n: {"seed": seed} for n in names}
    for k, v in cfg.items():
        if k in ("experiments", "seed", "out_dir"):
            continue
        if "." in k:
            n, key = k.split(".", 1)
            if n not in per:
                raise ValueError(f"parameter for unlisted experiment {n!r}")
            per[n][key] = v
    for k, v in cfg.items():
        if k in ("experiments", "seed", "out_dir") or "." in k:
            continue
        used = False
        for n in names:
            if k in DEFAULTS[n] and not (k == "beta" and n in _NEG_BETA):
                per[n].setdefault(k, v)
                used = True
        if not used and not any(k in DEFAULTS[n] for n in names):
            raise ValueError(f"no listed experiment takes parameter {k!r}")
    return names, seed, out_dir, per


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="skewflow", description="Run skew Brownian flow verification experiments.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    pr = sub.add_parser("run", help="run one experiment")
    pr.add_argument("experiment", help=", ".join(REGISTRY))
    pr.add_argument("--out-dir", default="results")
    ps = sub.add_parser("suite", help="run the experiments listed in a config file")
    ps.add_argument("config")
    ps.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config entry")
    sub.add_parser("list", help="list experiments and their default parameters")
    args, rest = ap.parse_known_args(argv)

    try:
        if args.cmd == "list":
            if rest:
                raise ValueError(f"unexpected arguments {rest}")
            for n, d in DEFAULTS.items():
                print(n, " ".join(f"{k}={v}" for k, v in d.items()))
            return 0
        if args.cmd == "run":
            if args.experiment not in REGISTRY:
                raise ValueError(f"unknown experiment {args.experiment!r}")
            params = _parse_pairs(rest)
            summary, checks = _run_one(args.experiment, params, Path(args.out_dir))
            print(json.dumps(summary))
            for k, v in checks.items():
                print(f"  {k}: {'pass' if v else 'FAIL'}")
            return 0 if summary["pass"] else 1
        if rest:
            raise ValueError(f"unexpected arguments {rest}")
        cfg = read_config(args.config)
        for item in args.set:
            if "=" not in item:
                raise ValueError(f"--set needs KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            cfg[k.strip()] = v.strip()
        names, _, out_dir, per = suite_plan(cfg)
        # validate everything before running anything
        from .experiments import validate

        for n in names:
            validate(n, per[n])
        all_ok = True
        print(f"{'experiment':18s} {'estimate':>12s} {'target':>12s}  result")
        for n in names:
            summary, _ = _run_one(n, per[n], out_dir)
            all_ok &= summary["pass"]
            print(f"{n:18s} {summary['estimate']:12.6g} {summary['target']:12.6g}  "
                  f"{'pass' if summary['pass'] else 'FAIL'}", flush=True)
        return 0 if all_ok else 1
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
