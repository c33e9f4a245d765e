"""Command-line entry point: verification suites, solves, sweeps, oracles.

Exit codes: 0 success, 1 assertion/verification failure, 2 configuration
error.  All randomized suites take a seed and are reproducible from it.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .aux_functions import (
    canonical_defs,
    check_species_conjugation,
    check_y_relations,
    eval_aux,
    legacy_cross_relations,
)
from .errors import QtmChainError
from .kernels import kernel_system
from .oracle import (
    build_hamiltonian,
    finite_free_energy,
    qtm_eigenvalue,
    spin2_identity_residual,
    trotter_free_energy,
    ybe_residual,
)
from .solver import Grid, default_grid, free_energy, solve_nlie
from .spectral import (
    adjacency_matrix,
    bae_residuals,
    eaf_factorization,
    residue_check,
    solve_bethe_roots,
)
from .tableaux import EvalContext, RootData, check_functional_relation
from .thermo import parse_t_range, sweep, thermo_point

FMT = "%.12e"


def random_root_data(n, rng, max_roots=2, allow_mu=True):
    """Random draw used by every verification suite (seed-reproducible)."""
    N = int(rng.choice([0, 2, 4]))
    tau = float(rng.uniform(0.1, 0.8))
    roots = tuple(
        tuple(
            complex(rng.uniform(-1.5, 1.5), rng.uniform(-0.2, 0.2))
            for _ in range(int(rng.integers(0, max_roots + 1)))
        )
        for _ in range(n - 1)
    )
    mu = tuple(float(rng.uniform(-0.4, 0.4)) if allow_mu else 0.0 for _ in range(n))
    return RootData(n=n, N=N, tau=tau, mu=mu, beta=1.0, roots=roots)


def random_x(rng):
    return complex(rng.uniform(-2.0, 2.0), rng.uniform(0.85, 1.3))


def _suite_fusion(seed, draws=25, xs=5):
    rng = np.random.default_rng(seed)
    report = []
    for n in range(2, 6):
        worst = 0.0
        for _ in range(draws):
            data = random_root_data(n, rng)
            for _ in range(xs):
                x = random_x(rng)
                a = int(rng.integers(1, n))
                s = int(rng.integers(1, 4))
                worst = max(
                    worst, check_functional_relation(data, "t_system", x, a=a, s=s)
                )
        report.append(
            {"relation": "t_system", "n": n, "draws": draws, "max_residual": worst}
        )
    return report


def _suite_aux(seed, draws=12, xs=3):
    rng = np.random.default_rng(seed)
    report = []
    for n in range(2, 6):
        worst = 0.0
        for _ in range(draws):
            data = random_root_data(n, rng)
            ctx = EvalContext(data)
            for _ in range(xs):
                x = random_x(rng)
                for upper, lower in canonical_defs(n):
                    B = eval_aux(upper, data, x, ctx)
                    b = eval_aux(lower, data, x, ctx)
                    worst = max(worst, abs(B - 1.0 - b) / (1.0 + abs(B)))
        report.append(
            {"relation": "B=1+b", "n": n, "draws": draws, "max_residual": worst}
        )
    for n in (4, 5):
        worst = 0.0
        for _ in range(max(3, draws // 3)):
            data = random_root_data(n, rng, max_roots=1)
            res = check_y_relations(n, data, random_x(rng))
            worst = max(worst, max(res.values()))
        report.append(
            {"relation": "y_system", "n": n, "draws": max(3, draws // 3),
             "max_residual": worst}
        )
    worst = 0.0
    for _ in range(draws):
        data = random_root_data(4, rng)
        worst = max(worst, max(legacy_cross_relations(data, random_x(rng)).values()))
    report.append(
        {"relation": "legacy_f_relations", "n": 4, "draws": draws,
         "max_residual": worst}
    )
    for n in (3, 4, 5):
        worst = 0.0
        for _ in range(3):
            data = random_root_data(n, rng, max_roots=1)
            worst = max(
                worst, max(check_species_conjugation(n, data, random_x(rng)).values())
            )
        report.append(
            {"relation": "species_conjugation", "n": n, "draws": 3,
             "max_residual": worst}
        )
    return report


def _suite_eaf(seed):
    rng = np.random.default_rng(seed)
    report = []
    for n in (2, 3, 4, 5):
        data = solve_bethe_roots(n, 2, beta=float(rng.uniform(0.4, 0.9)))
        report.append(
            {"relation": "bae", "n": n, "draws": 1,
             "max_residual": max(bae_residuals(data))}
        )
        worst = 0.0
        for a in range(1, n):
            adj = adjacency_matrix(n, a)
            nv = len(adj.vertices)
            for start in range(nv):
                for stop in range(start + 1, nv + 1):
                    try:
                        fact = eaf_factorization(n, a, tuple(range(start, stop)))
                    except QtmChainError:
                        continue
                    worst = max(worst, residue_check(fact, data))
        report.append(
            {"relation": "eaf_residues", "n": n, "draws": 1, "max_residual": worst}
        )
    return report


def _suite_kernel(seed):
    rng = np.random.default_rng(seed)
    report = []
    for n in (4, 5):
        sy = kernel_system(n)
        ks = rng.uniform(-30, 30, size=50)
        worst = max(
            float(np.max(np.abs(sy.matrix(k) - sy.matrix(-k).T))) for k in ks
        )
        report.append(
            {"relation": "hermiticity", "n": n, "draws": 50, "max_residual": worst}
        )
        c_unif = sy.constants((1.0,) * n, 1.0)
        report.append(
            {"relation": "constants_sum_zero", "n": n, "draws": 1,
             "max_residual": float(np.max(np.abs(c_unif)))}
        )
        from .solver import asymptotic_constants

        mu = tuple(float(rng.uniform(-0.3, 0.3)) for _ in range(n))
        asymptotic_constants(n, T=1.3, mu=mu)  # raises on inconsistency
        report.append(
            {"relation": "asymptotic_fixed_point", "n": n, "draws": 1,
             "max_residual": 0.0}
        )
    return report


_SUITES = {
    "fusion": _suite_fusion,
    "aux": _suite_aux,
    "eaf": _suite_eaf,
    "kernel": _suite_kernel,
}

_SUITE_TOL = 1e-10


def cmd_verify(args):
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    report = []
    for name in names:
        report.extend(_SUITES[name](args.seed))
    failed = [r for r in report if r["max_residual"] > _SUITE_TOL]
    out = {
        "version": __version__,
        "seed": args.seed,
        "tolerance": _SUITE_TOL,
        "checks": report,
        "passed": not failed,
    }
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if not failed else 1


def cmd_solve(args):
    mu = tuple(float(v) for v in args.mu.split(",")) if args.mu else None
    grid = Grid(half_width=args.half_width, points=args.points) if args.half_width else default_grid(args.temp, points=args.points)
    state = solve_nlie(
        args.n, args.temp, mu=mu, J=args.J, grid=grid,
        damping=args.damping, tol=args.tol,
    )
    payload = state.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh)
    print(
        f"n={args.n} T={args.temp}: converged in {state.iterations} iterations, "
        f"residual {state.residual:.3e}, f = {payload['f']:.12f}"
    )
    return 0


def cmd_sweep(args):
    mu = tuple(float(v) for v in args.mu.split(",")) if args.mu else None
    temps = parse_t_range(args.temp)
    points, failures = sweep(
        args.n, temps, mu=mu, J=args.J,
        with_densities=args.densities, with_chi=args.chi,
    )
    n = args.n
    cols = ["T"] + [f"mu_{i+1}" for i in range(n)] + ["f", "S", "C"]
    if args.densities:
        cols += [f"n_{i+1}" for i in range(n)]
    if args.chi:
        cols += [f"chi_{i+1}{j+1}" for i in range(n) for j in range(n)]
    lines = [",".join(cols)]
    for pt in points:
        row = [pt.T, *pt.mu, pt.f, pt.S, pt.C]
        if args.densities:
            row += list(pt.n)
        if args.chi:
            row += list(pt.chi.ravel())
        lines.append(",".join(FMT % v for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for T, err in failures:
        print(f"FAILED at T={T}: {err}", file=sys.stderr)
    return 0 if not failures else 1


def cmd_oracle(args):
    out = {"oracle": args.which}
    ok = True
    if args.which == "ed":
        H = build_hamiltonian(args.n, args.L, periodic=not args.open)
        ev = np.linalg.eigvalsh(H.matrix)
        out.update(
            {
                "n": args.n, "L": args.L,
                "ground_energy_per_site": float(ev[0] / args.L),
                "f": finite_free_energy(
                    args.n, args.L, args.temp, J=args.J, periodic=not args.open
                ),
                "T": args.temp,
            }
        )
    elif args.which == "qtm":
        lam = qtm_eigenvalue(args.n, args.N, T=args.temp, J=args.J)
        out.update(
            {
                "n": args.n, "N": args.N, "T": args.temp,
                "eigenvalue": [lam.real, lam.imag],
                "trotter_f": trotter_free_energy(args.n, args.N, args.temp, J=args.J),
            }
        )
    elif args.which == "ybe":
        res = ybe_residual(args.n)
        out.update({"n": args.n, "residual": res})
        ok = res < 1e-12
    elif args.which == "spin2":
        res, const = spin2_identity_residual()
        out.update({"residual": res, "fitted_constant": const})
        ok = res < 1e-12
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if ok else 1


def cmd_dump_kernel(args):
    sy = kernel_system(args.n)
    K = sy.matrix(args.k)
    lines = [",".join(FMT % v for v in row) for row in K]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="qtmchain",
        description="Thermodynamics of sl(n)-invariant chains from "
        "nonlinear integral equations, with tableau and ED cross-checks",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run randomized identity suites")
    v.add_argument("--suite", choices=[*_SUITES, "all"], default="all")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="solve one NLIE system")
    s.add_argument("--n", type=int, choices=(4, 5), required=True)
    s.add_argument("--temp", type=float, required=True)
    s.add_argument("--mu", default=None, help="comma-separated chemical potentials")
    s.add_argument("--J", type=float, default=1.0)
    s.add_argument("--points", type=int, default=4096)
    s.add_argument("--half-width", type=float, default=None)
    s.add_argument("--damping", type=float, default=0.0)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="temperature sweep to CSV")
    w.add_argument("--n", type=int, choices=(4, 5), required=True)
    w.add_argument("--temp", required=True, help="min:max:COUNT{log|lin}")
    w.add_argument("--mu", default=None)
    w.add_argument("--J", type=float, default=1.0)
    w.add_argument("--densities", action="store_true")
    w.add_argument("--chi", action="store_true")
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="exact-diagonalization cross-checks")
    o.add_argument("which", choices=("ed", "qtm", "ybe", "spin2"))
    o.add_argument("--n", type=int, default=4)
    o.add_argument("--L", type=int, default=4)
    o.add_argument("--N", type=int, default=4)
    o.add_argument("--temp", type=float, default=1.0)
    o.add_argument("--J", type=float, default=1.0)
    o.add_argument("--open", action="store_true", help="open boundary conditions")
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("dump-kernel", help="kernel matrix at one k as CSV")
    d.add_argument("--n", type=int, choices=(4, 5), required=True)
    d.add_argument("--k", type=float, required=True)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_dump_kernel)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except QtmChainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
