"""``son-expm`` command-line front end. Every command writes JSON to stdout."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import g2, sampling
from .bench import MIN_REPETITIONS, run_bench
from .closed_expm import expm_closed
from .conjugacy import torus_angles, trace_from_angles
from .errors import (DomainError, InvariantViolationError, NumericalFailureError,
                     SonExpmError)
from .invariants import (DEFAULT_REGION_TOL, compute_invariants, from_traces,
                         region_area_mc, region_contains)
from .reference_oracles import expm_companion, expm_taylor
from .skew_basis import MAX_N, MIN_N, AlgebraVector, assemble
from .spectral_roots import roots_for

EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 2, 3, 4


class UsageError(Exception):
    pass


def _numbers(text, what):
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{what}: expected a comma-separated list of numbers") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _vector(args) -> AlgebraVector:
    if args.input:
        doc = _load_json(args.input)
        if not isinstance(doc, dict) or "v" not in doc:
            raise UsageError('input must be an object like {"n": 3, "v": [...]}')
        return AlgebraVector.from_coefficients(doc["v"], doc.get("n", args.n))
    if args.v is None:
        raise UsageError("give --v or --input")
    return AlgebraVector.from_coefficients(_numbers(args.v, "--v"), args.n)


def _emit(doc):
    json.dump(doc, sys.stdout)
    sys.stdout.write("\n")


def cmd_exp(args):
    av = _vector(args)
    if args.method == "closed":
        res = expm_closed(av)
        R, method = res.R, res.method
        coef = res.coefficients.c.tolist()
        degenerate = res.degenerate
    else:
        R = expm_taylor(av) if args.method == "taylor" else expm_companion(av)
        method, coef, degenerate = args.method, None, None
    ortho = float(np.max(np.abs(R.T @ R - np.eye(av.n))))
    _emit({"R": R.tolist(), "method": method, "coefficients": coef,
           "degenerate": degenerate, "orthogonality": ortho})


def cmd_invariants(args):
    inv = compute_invariants(_vector(args))
    doc = inv.to_json()
    doc["region_contains"] = region_contains(inv, args.tolerance)
    _emit(doc)


def cmd_roots(args):
    if args.v is not None or args.input:
        inv = compute_invariants(_vector(args))
    else:
        if args.n is None or args.xi is None and args.n > 3:
            raise UsageError("give a vector, or --n with --xi/--zeta/--chi/--eta")
        try:
            inv = from_traces(args.n, 1.0, args.xi, args.zeta, args.chi, args.eta)
        except TypeError:
            raise UsageError(f"missing invariants for so({args.n})") from None
    rs = roots_for(inv)
    _emit({"n": rs.n, "roots": list(rs.roots), "psi": rs.psi,
           "degenerate": rs.degenerate})


def cmd_angles(args):
    av = _vector(args)
    ta = torus_angles(av)
    doc = ta.to_json(fold=args.fold_angles)
    doc["trace_closed"] = trace_from_angles(ta.n, ta.phi)
    doc["trace_direct"] = float(np.trace(expm_taylor(av)))
    _emit(doc)


def cmd_sample(args):
    if args.mode == "sphere":
        vs = sampling.sphere(args.n, args.count, args.seed, args.radius)
    else:
        vs = sampling.gaussian(args.n, args.count, args.seed)
    for v in vs:
        sys.stdout.write(json.dumps({"n": args.n, "v": v.tolist()}) + "\n")


def cmd_bench(args):
    ns = [int(x) for x in _numbers(args.ns, "--ns")]
    if args.repetitions < MIN_REPETITIONS:
        raise UsageError(f"--repetitions must be >= {MIN_REPETITIONS}")
    _emit(run_bench(ns, args.repetitions, args.seed))


def cmd_region(args):
    _emit(region_area_mc(args.n, args.samples, args.seed, args.workers).to_json())


def _w(args):
    w = _numbers(args.w, "--w")
    if len(w) != 14:
        raise UsageError(f"--w needs 14 numbers, got {len(w)}")
    return w


def cmd_g2_exp(args):
    R, _, rs, method = g2.expm_g2_details(_w(args))
    _emit({"R": R.tolist(), "method": method,
           "degenerate": bool(rs is not None and rs.degenerate)})


def cmd_g2_embed(args):
    _emit(g2.embed_g2(_w(args)).to_json())


def cmd_g2_check(args):
    if args.input:
        doc = _load_json(args.input)
    elif args.matrix:
        try:
            doc = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--matrix: {exc}") from None
    else:
        raise UsageError("give --matrix or --input")
    if isinstance(doc, dict):
        doc = doc.get("R", doc.get("v"))
    arr = np.asarray(doc, dtype=float)
    if arr.ndim == 1:
        av = AlgebraVector(7, arr)
        _emit({"kind": "algebra", "residual": g2.check_algebra_constraint(av)})
    else:
        if arr.shape == (7, 7) and np.allclose(arr, -arr.T):
            av = AlgebraVector(7, arr[np.triu_indices(7, 1)])
            _emit({"kind": "algebra", "residual": g2.check_algebra_constraint(av)})
        else:
            _emit({"kind": "group", "residual": g2.check_automorphism(arr)})


def _add_vector_args(p):
    p.add_argument("--n", type=int, choices=range(MIN_N, MAX_N + 1), metavar="N")
    p.add_argument("--v", help="comma-separated coefficients")
    p.add_argument("--input", help='JSON file {"n": .., "v": [..]}')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="son-expm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exp", help="rotation matrix exp(J.v)")
    _add_vector_args(p)
    p.add_argument("--method", choices=("closed", "taylor", "companion"), default="closed")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("invariants", help="trace/Pfaffian invariants")
    _add_vector_args(p)
    p.add_argument("--tolerance", type=float, default=DEFAULT_REGION_TOL)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("roots", help="roots of the reduced characteristic polynomial")
    _add_vector_args(p)
    for name in ("xi", "zeta", "chi", "eta"):
        p.add_argument(f"--{name}", type=float)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("angles", help="maximal-torus angles")
    _add_vector_args(p)
    p.add_argument("--fold-angles", action="store_true", help="reduce angles mod 2 pi")
    p.set_defaults(func=cmd_angles)

    p = sub.add_parser("sample", help="random coefficient vectors as JSON lines")
    p.add_argument("--n", type=int, choices=range(MIN_N, MAX_N + 1), required=True, metavar="N")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("gaussian", "sphere"), default="gaussian")
    p.add_argument("--radius", type=float, default=np.pi, help="norm V in sphere mode")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bench", help="timings of closed form vs oracles")
    p.add_argument("--ns", default="4,5,6,7,8,9")
    p.add_argument("--repetitions", type=int, default=MIN_REPETITIONS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("region", help="invariant-region Monte Carlo")
    rsub = p.add_subparsers(dest="region_command", required=True)
    q = rsub.add_parser("area")
    q.add_argument("--n", type=int, choices=(6, 7), required=True)
    q.add_argument("--samples", type=int, default=10 ** 6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=cmd_region)

    p = sub.add_parser("g2", help="G2 inside SO(7)")
    gsub = p.add_subparsers(dest="g2_command", required=True)
    for name, fn in (("exp", cmd_g2_exp), ("embed", cmd_g2_embed)):
        q = gsub.add_parser(name)
        q.add_argument("--w", required=True, help="14 comma-separated parameters")
        q.set_defaults(func=fn)
    q = gsub.add_parser("check", help="automorphism (7x7 group matrix) or derivation residual")
    q.add_argument("--matrix", help="JSON nested list, or a 21-vector")
    q.add_argument("--input")
    q.set_defaults(func=cmd_g2_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"son-expm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InvariantViolationError) as exc:
        print(f"son-expm: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NumericalFailureError, SonExpmError) as exc:
        print(f"son-expm: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
