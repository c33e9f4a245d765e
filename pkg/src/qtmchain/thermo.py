"""Observables from free-energy evaluations: S, C, densities, susceptibilities.

Everything is finite differences on top of the integral-equation solver.
Temperature derivatives act in log T so relative steps are uniform across
decades; S = -(1/T) f_u and C = -(1/T)(f_uu - f_u) with u = log T.  Species
densities are n_i = -df/dmu_i and the response matrix chi_ij = dn_j/dmu_i
= -d2f/dmu_i dmu_j collects the compressibility on the diagonal and minus
the convertibility off it.  All stencils are five-point (fourth order); the
mixed second derivatives use the four-corner formula with one Richardson
level.  Stencil solves share the center solution as a warm start and can
run concurrently; results are assembled deterministically.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, UnreachableDensityError
from .solver import default_grid, free_energy, solve_nlie

__all__ = [
    "ThermoPoint",
    "thermo_point",
    "sweep",
    "density_tuned_sweep",
    "parse_t_range",
]


def _max_workers():
    env = os.environ.get("QTM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class ThermoPoint:
    T: float
    mu: tuple
    f: float
    S: float
    C: float
    n: np.ndarray
    chi: np.ndarray | None = None
    meta: dict | None = None

    def row(self):
        out = [self.T, *self.mu, self.f, self.S, self.C]
        out.extend(self.n if self.n is not None else [])
        if self.chi is not None:
            out.extend(self.chi.ravel())
        return out


class _FreeEnergyTable:
    """Memoized f(T, mu) evaluations sharing one warm start."""

    def __init__(self, n, J, grid, center_state=None, tol=1e-12):
        self.n = n
        self.J = J
        self.grid = grid
        self.tol = tol
        self.warm = center_state.logb if center_state is not None else None
        self.cache = {}

    def _solve(self, T, mu):
        return solve_nlie(
            self.n, T, mu=mu, J=self.J, grid=self.grid, tol=self.tol,
            logb0=self.warm,
        )

    def request(self, points, workers=None):
        todo = [p for p in points if p not in self.cache]
        if todo:
            workers = workers or _max_workers()
            if workers > 1 and len(todo) > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    for p, st in zip(todo, pool.map(lambda q: self._solve(*q), todo)):
                        self.cache[p] = st
            else:
                for p in todo:
                    self.cache[p] = self._solve(*p)

    def f(self, T, mu):
        key = (T, tuple(mu))
        if key not in self.cache:
            self.request([key])
        return free_energy(self.cache[key])


def _d1(vals, h):
    """f'(0) from f(-2h), f(-h), f(h), f(2h), fourth order."""
    m2, m1, p1, p2 = vals
    return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)


def _d2(vals, f0, h):
    m2, m1, p1, p2 = vals
    return (-m2 + 16 * m1 - 30 * f0 + 16 * p1 - p2) / (12 * h * h)


def thermo_point(
    n,
    T,
    mu=None,
    J=1.0,
    fd_steps=None,
    with_chi=True,
    with_densities=True,
    workers=None,
    tol=1e-12,
):
    """One (T, mu) record of f, S, C, n_i and the response matrix.

    fd_steps: optional (dlogT, dmu_density, dmu_chi).  The chi step is kept
    larger than the density step so second differencing stays above solver
    noise.  Stencil failures propagate with the offending location attached.
    """
    if T <= 0:
        raise DomainError("temperature must be positive")
    if mu is None:
        mu = (0.0,) * n
    mu = tuple(float(v) for v in mu)
    hu, hd, hx = fd_steps or (1e-3, 1e-4 * max(T, 1.0), 3e-3 * max(T, 1.0))
    grid = default_grid(T)

    center = solve_nlie(n, T, mu=mu, J=J, grid=grid, tol=tol)
    table = _FreeEnergyTable(n, J, grid, center_state=center, tol=tol)
    f0 = free_energy(center)

    points = []
    t_pts = [(T * np.exp(s * hu), mu) for s in (-2, -1, 1, 2)]
    points += t_pts
    if with_densities:
        for i in range(n):
            for s in (-2, -1, 1, 2):
                m = list(mu)
                m[i] += s * hd
                points.append((T, tuple(m)))
    if with_chi:
        for i in range(n):
            for s in (-2, -1, 1, 2):
                m = list(mu)
                m[i] += s * hx
                points.append((T, tuple(m)))
        for i in range(n):
            for j in range(i + 1, n):
                for scale in (1.0, 0.5):
                    for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                        m = list(mu)
                        m[i] += si * scale * hx
                        m[j] += sj * scale * hx
                        points.append((T, tuple(m)))
    try:
        table.request(points, workers=workers)
    except ConvergenceError as err:
        raise ConvergenceError(
            f"stencil solve failed near T={T}, mu={mu}: {err}",
            residual=err.residual,
            iterations=err.iterations,
        ) from err

    fT = [table.f(*p) for p in t_pts]
    fu = _d1(fT, hu)
    fuu = _d2(fT, f0, hu)
    S = -fu / T
    C = -(fuu - fu) / T

    dens = None
    if with_densities:
        dens = np.empty(n)
        for i in range(n):
            vals = []
            for s in (-2, -1, 1, 2):
                m = list(mu)
                m[i] += s * hd
                vals.append(table.f(T, tuple(m)))
            dens[i] = -_d1(vals, hd)

    chi = None
    if with_chi:
        chi = np.empty((n, n))
        for i in range(n):
            vals = []
            for s in (-2, -1, 1, 2):
                m = list(mu)
                m[i] += s * hx
                vals.append(table.f(T, tuple(m)))
            chi[i, i] = -_d2(vals, f0, hx)
        for i in range(n):
            for j in range(i + 1, n):
                mixed = {}
                for scale in (1.0, 0.5):
                    acc = 0.0
                    for si, sj in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
                        m = list(mu)
                        m[i] += si * scale * hx
                        m[j] += sj * scale * hx
                        sign = 1.0 if si * sj > 0 else -1.0
                        acc += sign * table.f(T, tuple(m))
                    mixed[scale] = acc / (4 * (scale * hx) ** 2)
                d2 = (4 * mixed[0.5] - mixed[1.0]) / 3.0
                chi[i, j] = chi[j, i] = -d2

    return ThermoPoint(
        T=float(T),
        mu=mu,
        f=f0,
        S=float(S),
        C=float(C),
        n=dens,
        chi=chi,
        meta={"iterations": center.iterations, "residual": center.residual},
    )


def parse_t_range(spec):
    """'min:max:COUNTlog' or 'min:max:COUNTlin' -> array of temperatures."""
    lo, hi, cnt = spec.split(":")
    lo, hi = float(lo), float(hi)
    if cnt.endswith("log"):
        return np.geomspace(lo, hi, int(cnt[:-3]))
    if cnt.endswith("lin"):
        return np.linspace(lo, hi, int(cnt[:-3]))
    return np.geomspace(lo, hi, int(cnt))


def sweep(
    n,
    temperatures,
    mu=None,
    J=1.0,
    with_densities=False,
    with_chi=False,
    workers=None,
    tol=1e-12,
):
    """Ordered series of thermo points; per-point failures are recorded and
    the sweep continues.  Returns (points, failures)."""
    if isinstance(temperatures, str):
        temperatures = parse_t_range(temperatures)
    temps = sorted(float(t) for t in temperatures)
    points = {}
    failures = []
    for T in temps[::-1]:  # descending: warm starts flow from high T
        try:
            points[T] = thermo_point(
                n, T, mu=mu, J=J, with_chi=with_chi,
                with_densities=with_densities, workers=workers, tol=tol,
            )
        except Exception as err:  # noqa: BLE001 - recorded, sweep continues
            failures.append((T, repr(err)))
    return [points[T] for T in temps if T in points], failures


def density_tuned_sweep(
    n,
    target,
    temperatures,
    J=1.0,
    workers=None,
    mu0=None,
    newton_tol=1e-8,
    max_newton=40,
):
    """Per temperature, find mu with n_i(mu) = target_i, then record the point.

    Newton iteration on the density map with the response matrix as the
    Jacobian, reduced to the traceless mu subspace (a uniform shift of mu
    never changes densities).  The high-temperature closed form
    chi ~ beta (diag(n) - n n^T) seeds the first Jacobian.
    """
    target = np.asarray(target, dtype=float)
    if target.size != n or abs(target.sum() - 1.0) > 1e-8 or np.any(target <= 0):
        raise DomainError("target densities must be positive and sum to 1")
    if isinstance(temperatures, str):
        temperatures = parse_t_range(temperatures)
    temps = sorted(float(t) for t in temperatures)[::-1]

    out = []
    mu = np.zeros(n) if mu0 is None else np.asarray(mu0, dtype=float)
    for T in temps:
        beta = 1.0 / T
        for step in range(max_newton):
            pt = thermo_point(
                n, T, mu=tuple(mu), J=J, with_chi=False, workers=workers,
                fd_steps=(1e-3, 1e-3 * max(T, 1.0), None),
            )
            g = pt.n - target
            if np.max(np.abs(g)) < newton_tol:
                break
            # mean-field response as the Jacobian of n(mu); exact at beta->0
            chi0 = beta * (np.diag(pt.n) - np.outer(pt.n, pt.n))
            # reduce to the traceless subspace
            P = np.eye(n) - np.full((n, n), 1.0 / n)
            A = P @ chi0 @ P + np.full((n, n), 1.0 / n)
            dmu = np.linalg.solve(A, g)
            dmu = P @ dmu
            limit = 2.0 * max(T, 0.2)
            norm = np.max(np.abs(dmu))
            if norm > limit:
                dmu *= limit / norm
            mu = mu - dmu
        else:
            raise UnreachableDensityError(
                f"density Newton stalled at T={T}: worst residual "
                f"{np.max(np.abs(g)):.2e} for target {target}"
            )
        out.append(
            thermo_point(n, T, mu=tuple(mu), J=J, with_chi=True, workers=workers)
        )
    return out[::-1]
