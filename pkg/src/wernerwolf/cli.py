"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 budget
exceeded.  Every JSON artifact carries ``"schema": 1`` and is written with
sorted keys, so identical flags and inputs give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import montecarlo, oracle, polytope, spectrum
from .boolfn import SignFunction, walsh_beta
from .errors import NotASignFunction, NumericalFailure, TooLarge

COMMANDS = ("transform", "optimize", "spectrum", "oracle-check", "polytope-check", "sample", "prop2", "szk", "mk")
SAMPLING = {"sample", "prop2", "szk"}
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_BUDGET = 0, 2, 3, 4


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    seed: int | None = None
    samples: int = 1000
    restarts: int = spectrum.DEFAULT_RESTARTS
    tol: float = spectrum.DEFAULT_TOL
    workers: int = 1
    out: str | None = None
    format: str = "json"
    grid: list = field(default_factory=list)

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.n is not None and self.n < 1:
            raise InputError("--n must be >= 1")
        if self.samples < 1 or self.restarts < 1 or self.workers < 1:
            raise InputError("--samples, --restarts and --workers must be >= 1")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.format not in ("json", "csv"):
            raise InputError(f"unknown format {self.format!r}")
        if self.format == "csv" and self.command != "sample":
            raise InputError("csv output is only available for 'sample'")
        if self.command in SAMPLING and self.seed is None:
            raise InputError(f"'{self.command}' requires --seed")
        if self.command in SAMPLING | {"mk"} and self.n is None:
            raise InputError(f"'{self.command}' requires --n")
        if self.seed is not None and self.seed < 0:
            raise InputError("--seed must be non-negative")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _function(payload, n) -> SignFunction:
    if payload is None:
        raise InputError("this command needs an input payload (--input or --hex)")
    f = SignFunction.from_dict(payload.get("f", payload))
    if n is not None and f.n != n:
        raise InputError(f"--n {n} does not match input with n={f.n}")
    return f


def _angles(payload, f, cfg):
    pairs = payload.get("angles") if isinstance(payload, dict) else None
    if pairs is None:
        return None
    angles = spectrum.AngleConfig.from_list(pairs)
    if angles.n != f.n:
        raise InputError(f"angles describe n={angles.n}, function has n={f.n}")
    return angles


def _optimized(f, cfg):
    return spectrum.maximize_norm(f, restarts=cfg.restarts, tol=cfg.tol, seed=cfg.seed or 0)


def _cmd_transform(cfg, payload):
    f = _function(payload, cfg.n)
    spec = walsh_beta(f)
    art = {"schema": 1, "n": f.n, "denominator": spec.denom, "numerators": [int(k) for k in spec.numer],
           "beta": [float(b) for b in spec.beta], "f_hex": f.to_hex()}
    return art, f"support={len(spec.support())} sum_beta2={spec.sum_of_squares()}"


def _cmd_optimize(cfg, payload):
    f = _function(payload, cfg.n)
    rep = _optimized(f, cfg)
    art = rep.to_dict()
    art["f_hex"] = f.to_hex()
    return art, f"best_norm={rep.best_norm!r} sweeps={rep.sweeps} converged={rep.converged}"


def _cmd_spectrum(cfg, payload):
    f = _function(payload, cfg.n)
    angles = _angles(payload, f, cfg)
    if angles is None:
        raise InputError("'spectrum' needs {\"f\": ..., \"angles\": [[t0, t1], ...]}")
    res = spectrum.full_spectrum(f, angles)
    art = res.to_dict()
    art["angles"] = angles.to_list()
    return art, f"norm={res.norm!r} argmax_omega={list(res.argmax_omega)}"


def _cmd_oracle_check(cfg, payload):
    f = _function(payload, cfg.n)
    angles = _angles(payload, f, cfg)
    if angles is None:
        angles = _optimized(f, cfg).best_angles
    dense = oracle.build_dense(f, angles)
    dense_mags = oracle.eigen_magnitudes(dense)
    analytic = np.sort(spectrum.full_spectrum(f, angles).magnitudes)[::-1]
    mismatch = float(np.abs(dense_mags - analytic).max())
    ghz = oracle.verify_ghz_eigenvectors(f, angles)
    separable = oracle.separable_bound_check(f, angles, samples=cfg.samples, seed=cfg.seed or 0)
    ok = mismatch <= 1e-10 and ghz <= 1e-10
    art = {"schema": 1, "n": f.n, "f_hex": f.to_hex(), "angles": angles.to_list(),
           "operator_norm": float(dense_mags[0]), "spectrum_max_abs_diff": mismatch,
           "ghz_max_residual": ghz, "separable_max_expectation": separable,
           "separable_samples": cfg.samples, "is_witness": bool(dense_mags[0] > 1 + 1e-9), "passed": ok}
    if not ok:
        raise NumericalFailure(f"oracle mismatch: spectrum diff {mismatch:.3g}, GHZ residual {ghz:.3g}")
    return art, f"norm={dense_mags[0]!r} diff={mismatch:.2e} ghz={ghz:.2e} separable={separable:.6f}"


def _cmd_polytope_check(cfg, payload):
    if payload is None or "q" not in payload:
        raise InputError("'polytope-check' needs {\"q\": [...]} with 2**n coordinates")
    q = payload["q"]
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in q):
        raise InputError("q entries must be numbers")
    if cfg.n is not None and len(q) != 2**cfg.n:
        raise InputError(f"--n {cfg.n} needs {2**cfg.n} coordinates, got {len(q)}")
    bad = polytope.first_violated_facet(q)
    art = {"schema": 1, "n": int(math.log2(len(q))), "inside": bad is None,
           "violated_facet": None if bad is None else bad.to_hex()}
    return art, "inside" if bad is None else bad.to_hex()


def _cmd_sample(cfg, payload):
    opts = montecarlo.OptimizerOpts(cfg.restarts, cfg.tol)
    records = montecarlo.sample_records(cfg.n, cfg.samples, cfg.seed, opts, cfg.workers)
    row = montecarlo.summarize(cfg.n, records, cfg.restarts)
    summary = f"n={cfg.n} median={row.median!r} max={row.max!r} unconverged={row.unconverged}"
    if cfg.format == "csv":
        return montecarlo.records_to_csv(records), summary
    art = {"schema": 1, "seed": cfg.seed, "row": row.to_dict(),
           "samples": [{"sample_index": r.sample_index, "f_hex": r.f_hex, "norm": r.norm, "sweeps": r.sweeps,
                        "restarts_used": r.restarts_used, "converged": r.converged} for r in records]}
    if cfg.grid:
        art["exceedance"] = [t.to_dict() for t in montecarlo.theorem1_exceedance([row], cfg.grid)]
    return art, summary


def _cmd_prop2(cfg, payload):
    grid = cfg.grid or [2.0, 3.0, 5.0]
    reports = montecarlo.prop2_tail(cfg.n, cfg.samples, grid, cfg.seed)
    art = {"schema": 1, "seed": cfg.seed, "reports": [r.to_dict() for r in reports]}
    ok = all(r.passed for r in reports)
    return art, f"n={cfg.n} " + " ".join(f"M={r.threshold:g}:{r.empirical_probability:.4f}" for r in reports) \
        + f" passed={ok}"


def _cmd_szk(cfg, payload):
    grid = cfg.grid or [1.0, 2.0, 4.0]
    opts = montecarlo.OptimizerOpts(cfg.restarts, cfg.tol)
    reports = montecarlo.szk_tail(cfg.n, cfg.samples, cfg.seed, grid, opts, cfg.workers)
    art = {"schema": 1, "seed": cfg.seed, "note": montecarlo.SZK_NOTE, "reports": [r.to_dict() for r in reports]}
    return art, f"n={cfg.n} ceiling={montecarlo.szk_ceiling(cfg.n):.3g} " + " ".join(
        f"C={r.params['C']:g}:{r.exceedances}/{r.samples}" for r in reports)


def _cmd_mk(cfg, payload):
    from .boolfn import mermin_klyshko_candidate

    f = mermin_klyshko_candidate(cfg.n)
    rep = spectrum.certify_mermin_klyshko(f, restarts=max(cfg.restarts, 64), seed=cfg.seed or 0)
    art = {"schema": 1, "n": cfg.n, "f_hex": f.to_hex(), "certified_norm": rep.best_norm,
           "target": spectrum.mermin_klyshko_norm(cfg.n), "best_angles": rep.best_angles.to_list()}
    return art, f"n={cfg.n} certified_norm={rep.best_norm:.10g} f_hex={f.to_hex()}"


HANDLERS = {
    "transform": _cmd_transform,
    "optimize": _cmd_optimize,
    "spectrum": _cmd_spectrum,
    "oracle-check": _cmd_oracle_check,
    "polytope-check": _cmd_polytope_check,
    "sample": _cmd_sample,
    "prop2": _cmd_prop2,
    "szk": _cmd_szk,
    "mk": _cmd_mk,
}


def run(cfg: RunConfig, payload=None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # non-convergence is reported in the artifact
            artifact, summary = HANDLERS[cfg.command](cfg, payload)
    except TooLarge as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_BUDGET
    except NumericalFailure as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NUMERIC
    except (InputError, NotASignFunction, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    text = artifact if isinstance(artifact, str) else _dump(artifact)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
        print(summary, file=stdout)
    else:
        stdout.write(text)
        print(summary, file=stderr)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wernerwolf", description="Werner-Wolf witness toolkit")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--restarts", type=int, default=spectrum.DEFAULT_RESTARTS)
    p.add_argument("--tol", type=float, default=spectrum.DEFAULT_TOL)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--input", help="JSON payload file, '-' for stdin")
    p.add_argument("--hex", help="sign function as hex (needs --n)")
    p.add_argument("--grid", type=float, nargs="+", default=[],
                   help="M values for prop2, C values for szk/sample")
    return p


def _load_payload(args):
    if args.input and args.hex:
        raise InputError("use either --input or --hex")
    if args.hex:
        if args.n is None:
            raise InputError("--hex needs --n")
        return {"hex": args.hex, "n": args.n}
    if not args.input:
        return None
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from exc


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    default_samples = {"oracle-check": 10_000, "prop2": 10_000}.get(args.command, 1000)
    cfg = RunConfig(args.command, args.n, args.seed,
                    args.samples if args.samples is not None else default_samples,
                    args.restarts, args.tol, args.workers, args.out, args.format, args.grid)
    try:
        payload = _load_payload(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if payload is not None and not isinstance(payload, dict):
        print("error: payload must be a JSON object", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg, payload)


if __name__ == "__main__":
    sys.exit(main())
