"""Experiment driver emitting CSV on standard output.

Subcommands: approx-error, complexity, train, verify. Exit codes: 0 on
success, 1 on invariant failure, 2 on invalid arguments. When --seed is
absent the BUTTERFLY_DFT_SEED environment variable supplies the default.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np


def _set_threads(n: int | None) -> None:
    if n is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(n)


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("BUTTERFLY_DFT_SEED", "0"))


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v != ""]


def cmd_approx_error(args) -> int:
    from . import metrics
    from .factors import butterfly_init
    from .geometry import build_geometry

    print("N,K,K0,r,L,Lxi,admissible,eps1,eps2,epsInf,theorem3_bound_p2")
    for L in args.l:
        for lxi in args.lxi:
            g = build_geometry(args.n, args.k, args.k0, L, lxi, args.r)
            F = butterfly_init(g)
            eps = [metrics.rel_error(F, p) for p in (1, 2, np.inf)]
            bound = metrics.theorem3_bound(g, 2)
            print(
                f"{g.N},{g.K},{g.K0},{g.r},{L},{lxi},"
                f"{str(g.admissible).lower()},"
                f"{eps[0]:.6e},{eps[1]:.6e},{eps[2]:.6e},{bound:.6e}"
            )
    return 0


def cmd_complexity(args) -> int:
    from .complexity import complexity_table
    from .geometry import build_geometry

    geometries = []
    for n in args.n:
        L = args.l if args.l is not None else n.bit_length() - 1 - 2
        logk = args.k.bit_length() - 1
        for lxi in args.lxi:
            if lxi > logk or L > n.bit_length() - 1:
                continue
            geometries.append(build_geometry(n, args.k, args.k0, L, lxi, args.r))
    variants = (
        ("butterfly", "inflated") if args.variant == "both" else (args.variant,)
    )
    rows = complexity_table(geometries, variants)
    print("N,K,L,Lxi,r,variant,multiplicative,bias,total,empirical_total")
    for row in rows:
        print(
            f"{row['N']},{row['K']},{row['L']},{row['Lxi']},{row['r']},"
            f"{row['variant']},{row['multiplicative']},{row['bias']},"
            f"{row['total']},{row['empirical_total']}"
        )
    return 0


def cmd_train(args) -> int:
    from .dataset import PRESETS, DatasetSpec, generate, transfer_specs
    from .factors import butterfly_init, inflate, random_init, save
    from .geometry import build_geometry
    from .training import TrainConfig, evaluate, train

    seed = _default_seed(args)
    if args.preset is not None:
        base = PRESETS[args.preset]
        spec = DatasetSpec(args.n, base.g_center * args.n // base.N,
                           base.g_width, base.K0 * args.n // base.N,
                           args.k, seed=seed)
    else:
        spec = DatasetSpec(args.n, args.g_center, args.g_width, args.k0,
                           args.k, seed=seed)
    g = build_geometry(args.n, args.k, spec.K0, args.l, args.lxi, args.r)
    inflated = args.variant == "inflated"
    if args.init == "butterfly":
        F = butterfly_init(g)
        if inflated:
            F = inflate(F)
    else:
        F = random_init(g, seed + 1, inflated)
    lr = args.lr if args.lr is not None else (
        1e-4 if args.init == "butterfly" else 1e-3)
    config = TrainConfig(
        batch_size=args.batch_size, max_iters=args.iters, lr_init=lr,
        lr_decay_rate=args.decay_rate, lr_decay_steps=args.decay_steps,
        seed=seed,
    )
    trained, report = train(F, spec, config, test_size=args.test_size)
    if args.save_factors:
        save(trained, args.save_factors)
    if args.transfer:
        start, step, stop = (int(v) for v in args.transfer.split(":"))
        centers = list(range(start, stop + 1, step))
        print("g_center,mean_rel_error,std_rel_error")
        for tspec in transfer_specs(
            DatasetSpec(spec.N, 0, spec.g_width, spec.K0, spec.K,
                        seed=seed + 500, count=args.test_size), centers):
            mean, std = evaluate(trained, generate(tspec))
            print(f"{tspec.g_center},{mean:.6e},{std:.6e}")
        return 0
    print("metric,value")
    print(f"pre_train_rel_error,{report.pre_train_rel_error:.6e}")
    print(f"post_train_rel_error,{report.post_train_rel_error:.6e}")
    print(f"wall_time,{report.wall_time:.3f}")
    print(f"diverged,{str(report.diverged).lower()}")
    for (it, value), lr_v in zip(report.loss_curve, report.lr_curve):
        print(f"loss@{it},{value:.6e}")
    return 0


def cmd_verify(args) -> int:
    from . import metrics, oracle
    from .chebyshev import (Interval, lagrange_basis, lebesgue_bound,
                            lebesgue_constant, cheb_reference,
                            lowrank_residual)
    from .factors import butterfly_init, factor_norms, inflate, materialize
    from .geometry import build_geometry
    from .operator import apply_batch

    checks: list[tuple[str, bool]] = []
    rng = np.random.default_rng(_default_seed(args))

    for r in (2, 4, 8, 12, 16):
        nodes = cheb_reference(r)
        eye = lagrange_basis(nodes, nodes)
        checks.append((f"cardinality_r{r}",
                       bool(np.abs(eye - np.eye(r)).max() < 1e-12)))
        xs = rng.uniform(-0.5, 0.5, 1000)
        checks.append((f"partition_of_unity_r{r}",
                       bool(np.abs(lagrange_basis(nodes, xs).sum(0) - 1).max()
                            < 1e-10)))
        checks.append((f"lebesgue_bound_r{r}",
                       lebesgue_constant(r) <= lebesgue_bound(r) + 1e-9))

    full = (1, 2, np.inf)
    small = ((64, 16, 4, 1, 4), (256, 16, 4, 2, 4), (256, 32, 5, 2, 4))
    geoms = small if args.quick else small + (
        (1024, 64, 5, 2, 8), (1024, 64, 6, 1, 8))
    for (N, K, L, lxi, r) in geoms:
        g = build_geometry(N, K, 0, L, lxi, r)
        F = butterfly_init(g)
        checks.append((f"mask_containment_{N}_{K}_{L}_{lxi}",
                       F.mask_contained()))
        B = materialize(F)
        X = rng.standard_normal((4, N))
        rel = np.abs(apply_batch(F, X) - X @ B.T).max() / np.abs(X @ B.T).max()
        checks.append((f"apply_vs_materialize_{N}_{K}_{L}_{lxi}", rel < 1e-12))
        checks.append((f"inflate_identity_{N}_{K}_{L}_{lxi}",
                       bool(np.abs(materialize(inflate(F)) - B).max() < 1e-15)))
        lam = lebesgue_bound(r)
        bounds = {"V": None, "M": (r, r),
                  "U": (g.freq_per_leaf * lam, lam)}
        ok = True
        for rec in factor_norms(F):
            name = rec["factor"]
            if name.startswith("H"):
                b1, binf = 2 * lam, 2 * r * lam
            elif name.startswith("G"):
                b1, binf = 2 * r * lam, 2 * lam
            elif name in ("M", "U"):
                b1, binf = bounds[name]
            else:
                continue
            ok &= rec["norm1"] <= b1 + 1e-9 and rec["norminf"] <= binf + 1e-9
        checks.append((f"factor_norm_bounds_{N}_{K}_{L}_{lxi}", bool(ok)))
        if g.admissible:
            for p in full:
                checks.append((
                    f"theorem_bound_p{p}_{N}_{K}_{L}_{lxi}",
                    metrics.rel_error(F, p) <= metrics.theorem3_bound(g, p)))

    # oracle unitarity at K = N
    n = 64
    gsq = build_geometry(n, n, 0, 3, 1, 4)
    Kd = oracle.dense_kernel(gsq) / math.sqrt(n)
    checks.append(("oracle_unitary",
                   bool(np.abs(Kd @ Kd.conj().T - np.eye(n)).max() < 1e-10)))

    # low-rank interpolation bound on a few random admissible pairs
    for i in range(3 if args.quick else 10):
        r = int(rng.choice([4, 8, 12]))
        wA = float(rng.uniform(0.5, 4.0))
        wB = float(rng.uniform(0.01, r / (math.pi * math.e) / wA))
        A = Interval(0.0, wA)
        B_ = Interval(0.0, wB)
        for form in ("time", "freq"):
            res = lowrank_residual(A, B_, r, interpolate=form)
            checks.append((f"lowrank_{form}_{i}",
                           res.measured_sup_error <= res.theorem_bound))

    print("check,passed")
    failed = 0
    for name, ok in checks:
        print(f"{name},{str(bool(ok)).lower()}")
        failed += not ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="butterfly-dft",
        description="Butterfly-factorized windowed Fourier operators",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="cap BLAS/OpenMP worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx-error",
                       help="kernel approximation errors per (L, Lxi); CSV "
                            "columns N,K,K0,r,L,Lxi,admissible,eps1,eps2,"
                            "epsInf,theorem3_bound_p2")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--k", type=int, default=64)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--r", type=int, default=8)
    p.add_argument("--l", type=_int_list, default=[4, 5, 6])
    p.add_argument("--lxi", type=_int_list, default=[1, 2, 3])
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_approx_error)

    p = sub.add_parser("complexity",
                       help="parameter counts; CSV columns N,K,L,Lxi,r,"
                            "variant,multiplicative,bias,total,"
                            "empirical_total")
    p.add_argument("--n", type=_int_list, default=[1024])
    p.add_argument("--k", type=int, default=128)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--l", type=int, default=None,
                   help="depth; default log2(N) - 2")
    p.add_argument("--lxi", type=_int_list, default=[1, 2, 3])
    p.add_argument("--variant", choices=["butterfly", "inflated", "both"],
                   default="both")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("train",
                       help="train a factor chain on generated data; emits "
                            "metric,value CSV or a transfer-sweep CSV")
    p.add_argument("--preset", choices=["dft-lfreq", "dft-hfreq",
                                        "dftsmooth-lfreq", "dftsmooth-hfreq"],
                   default=None)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--k", type=int, default=32)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--g-center", type=float, default=0.0)
    p.add_argument("--g-width", type=float, default=10.0)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--l", type=int, default=8)
    p.add_argument("--lxi", type=int, default=1)
    p.add_argument("--init", choices=["butterfly", "random"],
                   default="butterfly")
    p.add_argument("--variant", choices=["butterfly", "inflated"],
                   default="butterfly")
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=256)
    p.add_argument("--lr", type=float, default=None,
                   help="default 1e-4 butterfly init, 1e-3 random init")
    p.add_argument("--decay-rate", type=float, default=0.985)
    p.add_argument("--decay-steps", type=int, default=100)
    p.add_argument("--test-size", type=int, default=1000)
    p.add_argument("--transfer", type=str, default=None,
                   metavar="START:STEP:STOP",
                   help="evaluate a trained net over shifted-center data")
    p.add_argument("--save-factors", type=str, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("verify",
                       help="run the invariant suite; CSV columns "
                            "check,passed; exit 1 on any failure")
    p.add_argument("--quick", action="store_true",
                   help="small-geometry subset, completes in under a minute")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _set_threads(args.threads)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
