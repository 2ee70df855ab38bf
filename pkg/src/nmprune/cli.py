"""Command-line front end: gen, prune, verify, eval, sweep.

Machine-readable output (JSON, CSV) goes to stdout; diagnostics go to
stderr. Exit codes: 0 success, 1 pipeline or verification failure, 2 bad
flags or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .errors import ConfigError, NMPruneError, VerificationError
from .graphs import (
    ENUM_VERTEX_LIMIT,
    brute_force_expansion,
    mask_to_graph,
    verify_degree_laws,
)
from .harness import (
    METHODS,
    PROFILES,
    _masked_error,
    compare_methods,
    gen_synthetic,
    norms_from_batch,
    prune_with_method,
    reports_to_csv,
    reports_to_json,
)
from .masks import PruneConfig, apply_mask, check_nm_pattern
from .metrics import ActivationNorms
from .permute import save_permutation, unpermute_mask
from .tensor_store import TensorBundle, load_bundle, save_bundle

GEN_SAMPLES = 32


def _parse_dims(text: str):
    try:
        rows, _, cols = text.lower().partition("x")
        return int(rows), int(cols)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}")


def _parse_b_range(text: str):
    lo, sep, hi = text.partition("..")
    if sep != "..":
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")


def _parse_fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if sep != "/":
        raise argparse.ArgumentTypeError(f"expected NUM/DEN, got {text!r}")
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected NUM/DEN, got {text!r}")


def _fetch(bundle: TensorBundle, name: str):
    if name not in bundle:
        raise NMPruneError(f"input bundle has no tensor named {name!r}")
    return bundle[name]


def _norms_from_entry(arr, alpha: float) -> ActivationNorms:
    if arr.ndim == 1:
        return ActivationNorms(arr, alpha)
    if arr.ndim == 2:
        return norms_from_batch(arr, alpha)
    raise NMPruneError("activation tensor must be a norms vector or a channels x samples batch")


def _cmd_gen(args) -> int:
    f_out, f_in = args.dims
    w, z = gen_synthetic(args.seed, f_out, f_in, profile=args.profile, k=args.k,
                         samples=GEN_SAMPLES)
    save_bundle(TensorBundle({args.weights: w, args.acts: z}), args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_prune(args) -> int:
    cfg = PruneConfig(args.n, args.m, args.b, args.alpha)
    bundle = load_bundle(args.infile)
    w = _fetch(bundle, args.weights)
    acts = None
    if args.method != "magnitude":
        acts = _norms_from_entry(_fetch(bundle, args.acts), args.alpha)
    res = prune_with_method(w, acts, cfg, args.method)
    pruned = apply_mask(res.weights, res.mask)
    entries = {
        "mask": res.mask.astype(np.uint8),
        "W_pruned": np.asarray(pruned, dtype=np.float32),
    }
    if res.permutation is not None:
        entries["W_perm"] = np.asarray(res.weights, dtype=np.float32)
        entries["mask_unpermuted"] = unpermute_mask(res.mask, res.permutation).astype(np.uint8)
    save_bundle(TensorBundle(entries), args.out)
    if res.permutation is not None:
        save_permutation(res.permutation, args.out + ".perm.json")
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _fraction_pair(value):
    return None if value is None else [value.numerator, value.denominator]


def _cmd_verify(args) -> int:
    cfg = PruneConfig(args.n, args.m, args.b)
    bundle = load_bundle(args.infile)
    mask = _fetch(bundle, "mask")
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise NMPruneError("mask tensor must be 2-D")
    f_out, f_in = arr.shape

    ok = True
    lemma_pass = True
    try:
        check_nm_pattern(arr, cfg.n, cfg.m)
        verify_degree_laws(arr, cfg)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        ok = False
        lemma_pass = False

    c_bound = min(Fraction(cfg.b, f_in), Fraction(f_in * (cfg.m - cfg.n), f_out * cfg.m))
    c = args.c if args.c is not None else (c_bound / 2 if c_bound > 0 else None)
    a_in = a_out = None
    if c is None or not 0 < c < 1:
        print("expansion enumeration skipped: no admissible subset fraction", file=sys.stderr)
        c = None
    elif f_in > ENUM_VERTEX_LIMIT or f_out > ENUM_VERTEX_LIMIT:
        print(
            f"expansion enumeration skipped: a side exceeds {ENUM_VERTEX_LIMIT} vertices",
            file=sys.stderr,
        )
    else:
        report = brute_force_expansion(mask_to_graph(arr), c)
        a_in, a_out = report.a_in, report.a_out
        if a_in is not None and a_in <= 1:
            ok = False
        if a_out is not None and a_out <= 1:
            ok = False

    in_deg = arr.astype(np.int64).sum(axis=0)
    out_deg = arr.astype(np.int64).sum(axis=1)
    print(json.dumps({
        "min_in_degree": int(in_deg.min()),
        "min_out_degree": int(out_deg.min()),
        "a_I": _fraction_pair(a_in),
        "a_O": _fraction_pair(a_out),
        "c": _fraction_pair(c),
        "lemma1_pass": lemma_pass,
    }))
    return 0 if ok else 1


def _cmd_eval(args) -> int:
    cfg = PruneConfig(args.n, args.m, args.b, args.alpha)
    methods = [s.strip() for s in args.methods.split(",") if s.strip()]
    if not methods:
        raise ConfigError("no methods requested")
    bundle = load_bundle(args.infile)
    w = _fetch(bundle, args.weights)
    acts = None
    if any(m != "magnitude" for m in methods):
        acts = _fetch(bundle, args.acts)
        if acts.ndim == 1:
            acts = ActivationNorms(acts, args.alpha)
    reports = compare_methods(w, acts, cfg, methods)
    print(reports_to_json(reports))
    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(reports_to_csv(reports))
        except OSError as exc:
            raise NMPruneError(f"cannot write {args.csv}: {exc}") from exc
    return 0


def _cmd_sweep(args) -> int:
    b_lo, b_hi = args.b_range
    if b_lo < 0 or b_hi < b_lo:
        raise ConfigError(f"bad block-count range {b_lo}..{b_hi}")
    bundle = load_bundle(args.infile)
    w = _fetch(bundle, args.weights)
    acts_arr = _fetch(bundle, args.acts)
    acts = _norms_from_entry(acts_arr, args.alpha)
    z_eval = np.asarray(acts_arr) if acts_arr.ndim == 2 else None

    rows = ["B,error,corrupted,min_in_degree,lemma1_pass"]
    for b in range(b_lo, b_hi + 1):
        cfg = PruneConfig(args.n, args.m, b, args.alpha)
        res = prune_with_method(w, acts, cfg, "eggs")
        z_m = None if z_eval is None else z_eval[res.permutation.forward, :]
        error = _masked_error(res.weights, res.mask, z_m)
        corrupted = int((res.mask.sum(axis=0) == 0).sum())
        min_in = int(res.mask.astype(np.int64).sum(axis=0).min())
        try:
            verify_degree_laws(res.mask, cfg)
            passed = True
        except VerificationError:
            passed = False
        rows.append(f"{b},{error!r},{corrupted},{min_in},{str(passed).lower()}")
    print("\n".join(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmprune",
        description="Build, verify, and evaluate hardware-aligned N:M pruning masks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_nm(p, b_default):
        p.add_argument("--n", type=int, required=True, help="zeros per window of M")
        p.add_argument("--m", type=int, required=True, help="window width (even)")
        p.add_argument("--b", type=int, default=b_default,
                       help="connectivity blocks per pruning group")

    def add_names(p):
        p.add_argument("--weights", default="W", help="weight tensor name in the bundle")
        p.add_argument("--acts", default="Z", help="activation tensor name in the bundle")

    p = sub.add_parser("gen", help="write a synthetic layer bundle")
    p.add_argument("--out", required=True)
    p.add_argument("--dims", type=_parse_dims, required=True, metavar="RxC")
    p.add_argument("--profile", choices=PROFILES, default="gaussian")
    p.add_argument("--k", type=int, default=1, help="dead column count for dead-columns")
    p.add_argument("--seed", type=int, default=0)
    add_names(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("prune", help="prune one layer bundle")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    add_nm(p, b_default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    add_names(p)
    p.set_defaults(func=_cmd_prune)

    p = sub.add_parser("verify", help="check a mask's window counts, degree laws, and expansion")
    p.add_argument("--in", dest="infile", required=True)
    add_nm(p, b_default=0)
    p.add_argument("--c", type=_parse_fraction, default=None, metavar="NUM/DEN",
                   help="subset fraction for expansion enumeration")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("eval", help="compare pruning methods on one layer")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--methods", default=",".join(METHODS))
    add_nm(p, b_default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--csv", default=None, help="also write a CSV summary here")
    add_names(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="run the connectivity method across a range of block counts")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--b-range", dest="b_range", type=_parse_b_range, required=True,
                   metavar="LO..HI")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    add_names(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NMPruneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
