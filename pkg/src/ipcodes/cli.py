"""``ipcodes`` command-line front end.

Exit codes: 0 success, 1 invalid input (the message names the flag or
field), 2 decoding left erasures behind.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .asymptotic import (Profile, ProfileError, asymptotic_rate, de_check, de_trajectory,
                         design_alpha_from_beta, discretize)
from .distance import DistanceProfile, distance_bound, min_weight_oracle
from .distance import ProfileError as DistanceProfileError
from .galois import Field, FieldError
from .mds import ERASED
from .product import (CodeSpec, SpecError, build_code, dimension, encode, mark_schedule)
from .simulate import SimConfig, field_level_validate, run_sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RESIDUAL = 2


class CliError(Exception):
    """Bad user input; ``where`` is the flag or field to blame."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which we reserve for decode failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# Input files -------------------------------------------------------------------


def _read_text(path, flag):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(flag, f"cannot read {path}: {e.strerror}")


def _read_json(path, flag):
    try:
        doc = json.loads(_read_text(path, flag))
    except json.JSONDecodeError as e:
        raise CliError(flag, f"{path}: invalid JSON ({e.msg}, line {e.lineno})")
    if not isinstance(doc, dict):
        raise CliError(flag, f"{path}: expected a JSON object")
    return doc


def _int_field(doc, key, flag):
    if key not in doc:
        raise CliError(flag, f"missing field '{key}'")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise CliError(flag, f"field '{key}' must be an integer")
    return v


def _int_list(doc, key, flag):
    if key not in doc:
        raise CliError(flag, f"missing field '{key}'")
    v = doc[key]
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise CliError(flag, f"field '{key}' must be a list of integers")
    return v


def load_profile(path, flag="--beta") -> Profile:
    try:
        return Profile.from_text(_read_text(path, flag))
    except ProfileError as e:
        raise CliError(flag, f"{path}: {e}")


def load_spec(path, flag="--spec") -> CodeSpec:
    """Read a spec file: explicit ``a``/``b`` arrays or a ``design`` directive."""
    doc = _read_json(path, flag)
    m = _int_field(doc, "m", flag)
    n = _int_field(doc, "n", flag)
    field = None
    if "field" in doc:
        if not isinstance(doc["field"], dict):
            raise CliError(flag, "field 'field' must be an object")
        try:
            field = Field.from_config(doc["field"])
        except FieldError as e:
            raise CliError(flag, f"field: {e}")
    try:
        if "design" in doc:
            a, b = _design_arrays(doc["design"], m, n, Path(path).parent, flag)
        else:
            a, b = _int_list(doc, "a", flag), _int_list(doc, "b", flag)
        if field is None:
            if "design" not in doc:
                raise CliError(flag, "missing field 'field'")
            field = Field.smallest_at_least(max(m, n))
        return CodeSpec(field, m, n, a, b)
    except SpecError as e:
        raise CliError(flag, str(e))


def _design_arrays(d, m, n, base: Path, flag):
    if not isinstance(d, dict):
        raise CliError(flag, "field 'design' must be an object")
    if "beta" not in d or not isinstance(d["beta"], str):
        raise CliError(flag, "design.beta must name a profile file")
    eps = d.get("eps")
    if not isinstance(eps, (int, float)) or isinstance(eps, bool):
        raise CliError(flag, "design.eps must be a number")
    floors = d.get("min_dist", [1, 1])
    if (not isinstance(floors, list) or len(floors) != 2
            or not all(isinstance(x, int) for x in floors)):
        raise CliError(flag, "design.min_dist must be [rows, columns]")
    boosts = d.get("boosts", 0)
    if not isinstance(boosts, int) or boosts < 0:
        raise CliError(flag, "design.boosts must be a non-negative integer")
    beta_path = Path(d["beta"])
    if not beta_path.is_absolute():
        beta_path = base / beta_path
    beta = load_profile(beta_path, flag)
    return _design(beta, float(eps), m, n, tuple(floors), boosts, flag)


def _design(beta, eps, m, n, floors, boosts, flag):
    try:
        alpha = design_alpha_from_beta(beta, eps)
        return discretize(alpha, beta, m, n, floors, boosts)
    except ValueError as e:  # ProfileError included
        raise CliError(flag, str(e))


def read_symbols(path, flag, allow_erasures):
    out = []
    for tok in _read_text(path, flag).split():
        if tok == "?" and allow_erasures:
            out.append(ERASED)
            continue
        try:
            out.append(int(tok))
        except ValueError:
            raise CliError(flag, f"symbol {len(out)}: not an integer: {tok!r}")
    return np.array(out, dtype=np.int64)


def format_matrix(M) -> str:
    return "".join(" ".join("?" if x == ERASED else str(int(x)) for x in row) + "\n" for row in M)


def parse_eps_range(text: str, flag="--eps"):
    """``start:stop:step`` (endpoints inclusive), a comma list, or one value."""
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3:
                raise CliError(flag, "expected start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise CliError(flag, "step must be positive")
            if stop < start:
                raise CliError(flag, "stop is below start")
            count = int(math.floor((stop - start) / step + 1e-12 / step)) + 1
            vals = [round(start + k * step, 12) for k in range(count)]
        else:
            vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise CliError(flag, f"not a number in {text!r}")
    if any(not 0 <= e < 1 for e in vals):
        raise CliError(flag, "erasure probabilities must lie in [0, 1)")
    if vals != sorted(vals):
        raise CliError(flag, "values must be increasing")
    return vals


def _pair(text, flag):
    try:
        r, c = (int(x) for x in text.split(","))
    except ValueError:
        raise CliError(flag, f"expected R,C, got {text!r}")
    return r, c


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# Commands ------------------------------------------------------------------------


def cmd_dim(args):
    spec = load_spec(args.spec)
    print(dimension(spec))
    return EXIT_OK


def cmd_validate(args):
    spec = load_spec(args.spec)
    k = dimension(spec)
    print(f"ok: {spec.m}x{spec.n} over {spec.field}, dimension {k}, rate {k / spec.length:.6g}")
    if args.trials is None:
        return EXIT_OK
    if args.seed is None:
        raise CliError("--seed", "required together with --trials")
    if args.trials < 1:
        raise CliError("--trials", "must be positive")
    try:
        rep = field_level_validate(spec, args.trials, args.seed, args.eps)
    except ValueError as e:
        raise CliError("--spec", str(e))
    print(f"field-level: {rep.trials} trials, {rep.decoded_words} fully decoded, "
          f"{rep.position_mismatches} position mismatches, {rep.value_mismatches} value mismatches")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_mindist(args):
    doc = _read_json(args.profile, "--profile")
    try:
        p = DistanceProfile(_int_list(doc, "d", "--profile"), _int_list(doc, "dp", "--profile"))
        D = distance_bound(p)
    except DistanceProfileError as e:
        raise CliError("--profile", str(e))
    print(D)
    if args.witness:
        try:
            w, M = min_weight_oracle(p)
        except ValueError as e:
            raise CliError("--witness", str(e))
        assert w == D
        sys.stdout.write(format_matrix(M))
    return EXIT_OK


def cmd_encode(args):
    spec = load_spec(args.spec)
    sched = mark_schedule(spec)
    info = read_symbols(args.input, "--in", allow_erasures=False)
    k = len(sched.generating)
    if info.size != k:
        raise CliError("--in", f"expected {k} message symbols, got {info.size}")
    bad = np.flatnonzero((info < 0) | (info >= spec.field.q))
    if bad.size:
        raise CliError("--in", f"symbol {bad[0]} = {info[bad[0]]} outside [0, {spec.field.q})")
    _emit(format_matrix(encode(spec, sched, info)), args.out)
    return EXIT_OK


def cmd_decode(args):
    spec = load_spec(args.spec)
    sym = read_symbols(args.input, "--in", allow_erasures=True)
    if sym.size != spec.length:
        raise CliError("--in", f"expected {spec.length} symbols, got {sym.size}")
    bad = np.flatnonzero((sym != ERASED) & ((sym < 0) | (sym >= spec.field.q)))
    if bad.size:
        raise CliError("--in", f"symbol {bad[0]} = {sym[bad[0]]} outside [0, {spec.field.q})")
    code = build_code(spec)
    try:
        M, _ = code.iterative_decode(sym.reshape(spec.m, spec.n))
    except ValueError as e:  # known symbols inconsistent with the code
        raise CliError("--in", str(e))
    _emit(format_matrix(M), args.out)
    left = int(np.count_nonzero(M == ERASED))
    if left:
        print(f"residual erasures: {left}", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_design(args):
    beta = load_profile(args.beta, "--beta")
    floors = _pair(args.min_dist, "--min-dist")
    if args.m < 1:
        raise CliError("--m", "must be positive")
    if args.n < 1:
        raise CliError("--n", "must be positive")
    if args.boosts < 0:
        raise CliError("--boosts", "must be non-negative")
    a, b = _design(beta, args.eps, args.m, args.n, floors, args.boosts, "--eps")
    field = Field.smallest_at_least(max(args.m, args.n))
    spec = CodeSpec(field, args.m, args.n, a, b)
    _emit(json.dumps(spec.to_config()) + "\n", args.out)
    print(f"dimension {dimension(spec)}", file=sys.stderr)
    return EXIT_OK


def cmd_de_check(args):
    alpha = load_profile(args.alpha, "--alpha")
    beta = load_profile(args.beta, "--beta")
    if not 0 < args.eps < 1:
        raise CliError("--eps", "must lie in (0, 1)")
    v = de_check(alpha, beta, args.eps, grid=args.grid)
    tr = de_trajectory(alpha, beta, args.eps)
    if v:
        print("satisfied")
    else:
        print(f"violated from x={v.x:.10g}")
    print(f"trajectory: {tr.rounds} rounds, limit {tr.converged_to:.6g}")
    return EXIT_OK


def cmd_rate(args):
    alpha = load_profile(args.alpha, "--alpha")
    beta = load_profile(args.beta, "--beta")
    print(f"{asymptotic_rate(alpha, beta, args.quad):.10g}")
    return EXIT_OK


def cmd_simulate(args):
    if args.trials < 1:
        raise CliError("--trials", "must be positive")
    if args.threads is not None and args.threads < 1:
        raise CliError("--threads", "must be positive")
    eps = parse_eps_range(args.eps)
    if args.compare:
        if args.spec:
            raise CliError("--compare", "use either --spec or --compare")
        specs = [(p, load_spec(p, "--compare")) for p in args.compare]
        out_dir = Path(args.out or ".")
        stems = [Path(p).stem for p, _ in specs]
        if len(set(stems)) != len(stems):
            raise CliError("--compare", "spec file names must be distinct")
        out_dir.mkdir(parents=True, exist_ok=True)
        for (p, spec), stem in zip(specs, stems):
            res = run_sweep(SimConfig(spec, eps, args.trials, args.seed), threads=args.threads)
            target = out_dir / f"{stem}.csv"
            target.write_text(res.to_csv())
            print(target)
        return EXIT_OK
    if not args.spec:
        raise CliError("--spec", "required (or use --compare)")
    spec = load_spec(args.spec)
    res = run_sweep(SimConfig(spec, eps, args.trials, args.seed), threads=args.threads)
    _emit(res.to_csv(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ipcodes", description="Irregular product code toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dim", help="print the code dimension")
    s.add_argument("--spec", required=True)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("validate", help="check a spec file; optionally cross-check decoding")
    s.add_argument("--spec", required=True)
    s.add_argument("--trials", type=int, help="run this many field-level decoding trials")
    s.add_argument("--seed", type=int)
    s.add_argument("--eps", type=float, help="fixed erasure probability (default: random per trial)")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("mindist-bound", help="distance bound for a JSON {d, dp} profile")
    s.add_argument("--profile", required=True)
    s.add_argument("--witness", action="store_true", help="also print a minimum-weight pattern")
    s.set_defaults(func=cmd_mindist)

    s = sub.add_parser("encode", help="systematically encode a message file")
    s.add_argument("--spec", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode", help="iteratively decode a matrix with '?' erasures")
    s.add_argument("--spec", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("design-asymptotic", help="discretize a designed profile pair to a spec")
    s.add_argument("--beta", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--min-dist", default="1,1", help="distance floors R,C")
    s.add_argument("--boosts", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("de-check", help="density-evolution condition for (alpha, beta, eps)")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--grid", type=int, default=10_000)
    s.set_defaults(func=cmd_de_check)

    s = sub.add_parser("rate", help="asymptotic rate of (alpha, beta)")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--quad", type=int, help="midpoint rule with this many nodes")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("simulate", help="Monte Carlo WER sweep to CSV")
    s.add_argument("--spec")
    s.add_argument("--compare", nargs="+", metavar="SPEC",
                   help="several specs on shared seeds; --out names a directory")
    s.add_argument("--eps", required=True, help="start:stop:step, a,b,c or a single value")
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
