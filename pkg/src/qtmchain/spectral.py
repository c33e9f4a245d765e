"""Pole-cancellation adjacency matrices, elementary analytic factors, Bethe roots.

Each term of the fused eigenvalue Lambda_{a,1} is a strictly increasing
a-tuple of species; two terms share a removable pole iff they differ in
exactly one row r where the entries are k and k+1, the pole sitting at the
zero set of q_k(x + i*delta) with delta = r - (a+1)/2.  Partial sums over
range-expressible groups of terms factor into a polynomial p(x) times the
unremoved poles divided by the common Phi zeros, which is what the
elementary-analytic-factor bookkeeping below records.

Shifts are tracked as integers in units of i/2 throughout, so common-zero
extraction never compares floating-point offsets.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConvergenceError, DomainError, UnsupportedSubsetError
from .tableaux import EvalContext, RangeTableau, RootData, eval_q, eval_range_tableau

__all__ = [
    "AdjacencyMatrix",
    "EafFactorization",
    "adjacency_matrix",
    "eaf_factorization",
    "eval_partial_sum",
    "eval_eaf_polynomial",
    "solve_bethe_roots",
    "bae_residuals",
    "residue_check",
    "eigenvalue_from_roots",
]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Vertices are the increasing a-tuples in lexicographic order; edges
    carry (level, delta_half) with delta_half = 2*delta an integer."""

    n: int
    a: int
    vertices: tuple
    edges: dict

    def label(self, i, j):
        """Edge label between vertex indices i and j, or None."""
        return self.edges.get((min(i, j), max(i, j)))

    def as_dict(self):
        """JSON-ready {vertices, edges: [{i, j, level, shift}]} form."""
        return {
            "n": self.n,
            "a": self.a,
            "vertices": [list(v) for v in self.vertices],
            "edges": [
                {"i": i, "j": j, "level": lvl, "shift": dh / 2.0}
                for (i, j), (lvl, dh) in sorted(self.edges.items())
            ],
        }


def adjacency_matrix(n, a):
    """Shared-pole structure of the a-th fundamental representation."""
    if not 1 <= a <= n - 1:
        raise DomainError(f"need 1 <= a <= {n - 1}, got a={a}")
    vertices = tuple(combinations(range(1, n + 1), a))
    index = {v: i for i, v in enumerate(vertices)}
    edges = {}
    for i, v in enumerate(vertices):
        for r in range(a):
            w = v[:r] + (v[r] + 1,) + v[r + 1:]
            if w in index and index[w] > i:
                # differ in row r+1 only, entries k, k+1
                edges[(i, index[w])] = (v[r], 2 * (r + 1) - (a + 1))
    return AdjacencyMatrix(n=n, a=a, vertices=vertices, edges=edges)


@dataclass(frozen=True)
class EafFactorization:
    """Bookkeeping for one partial tableau sum p(x).

    unremoved_poles: (level, delta_half) labels of edges leaving the subset.
    common_zeros: (sign, delta_half) Phi factors present in every term.
    The polynomial degree is a*N + sum(m_level) - (N/2)*len(common_zeros),
    recorded symbolically as the N/2 coefficient plus root counts.
    """

    n: int
    a: int
    subset: tuple
    ranges: tuple
    unremoved_poles: tuple
    common_zeros: tuple
    degree_half_n: int
    degree_roots: tuple

    def degree(self, data):
        return (data.N // 2) * self.degree_half_n + sum(
            data.m(lvl) for lvl in self.degree_roots
        )

    def tableau(self):
        return RangeTableau.column(self.ranges)


def _phi_multiset(n, a, tup):
    """Phi factors of one eigenvalue term, as (sign, delta_half) pairs."""
    out = []
    for r, k in enumerate(tup, start=1):
        dh = 2 * r - (a + 1)  # argument offset in units of i/2
        out.append(("-", dh - 2) if k == 1 else ("-", dh))
        out.append(("+", dh + 2) if k == n else ("+", dh))
    return out


def eaf_factorization(n, a, subset):
    """Analytic factorization of the partial sum over a vertex subset.

    The subset must be range-expressible: equal to the set of admissible
    tuples lying between its elementwise minimum and maximum.
    """
    adj = adjacency_matrix(n, a)
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise UnsupportedSubsetError("subset must be nonempty")
    if subset[0] < 0 or subset[-1] >= len(adj.vertices):
        raise UnsupportedSubsetError("vertex index out of range")
    chosen = [adj.vertices[i] for i in subset]
    lo = tuple(min(v[r] for v in chosen) for r in range(a))
    hi = tuple(max(v[r] for v in chosen) for r in range(a))
    box = {
        v
        for v in adj.vertices
        if all(lo[r] <= v[r] <= hi[r] for r in range(a))
    }
    if box != set(chosen):
        raise UnsupportedSubsetError(
            "subset is not the admissible box of its elementwise bounds"
        )
    inside = set(subset)
    unremoved = set()
    for (i, j), label in adj.edges.items():
        if (i in inside) != (j in inside):
            unremoved.add(label)
    # common Phi zeros: minimum multiset over all terms
    common = None
    for idx in subset:
        term = {}
        for key in _phi_multiset(n, a, adj.vertices[idx]):
            term[key] = term.get(key, 0) + 1
        if common is None:
            common = term
        else:
            common = {
                k: min(cnt, term.get(k, 0))
                for k, cnt in common.items()
                if term.get(k, 0) > 0
            }
    zeros = tuple(
        sorted(key for key, cnt in common.items() for _ in range(cnt))
    )
    ranges = tuple((lo[r], hi[r]) for r in range(a))
    return EafFactorization(
        n=n,
        a=a,
        subset=subset,
        ranges=ranges,
        unremoved_poles=tuple(sorted(unremoved)),
        common_zeros=zeros,
        degree_half_n=2 * a - len(zeros),
        degree_roots=tuple(lvl for lvl, _ in sorted(unremoved)),
    )


def eval_partial_sum(fact, data, x, ctx=None):
    """The raw tableau sum of the factorization's range column."""
    return eval_range_tableau(data, fact.tableau(), x, ctx)


def eval_eaf_polynomial(fact, data, x, ctx=None):
    """p(x) = (prod unremoved q / prod common Phi) * partial sum."""
    x = complex(x)
    val = eval_partial_sum(fact, data, x, ctx)
    for lvl, dh in fact.unremoved_poles:
        val *= eval_q(data, lvl, x + 0.5j * dh)
    for sign, dh in fact.common_zeros:
        lvl = data.n if sign == "+" else 0
        val /= eval_q(data, lvl, x + 0.5j * dh)
    return val


# ----------------------------------------------------------------------
# Bethe roots of the dominant sector

def _bae_lhs(data, level, x):
    """e^{b mu_j} q_{j-1}(x-i) q_j(x+i) q_{j+1}(x)
       + e^{b mu_{j+1}} q_{j-1}(x) q_j(x-i) q_{j+1}(x+i);  zero at roots."""
    j = level
    t1 = (
        np.exp(data.beta * data.mu[j - 1])
        * eval_q(data, j - 1, x - 1j)
        * eval_q(data, j, x + 1j)
        * eval_q(data, j + 1, x)
    )
    t2 = (
        np.exp(data.beta * data.mu[j])
        * eval_q(data, j - 1, x)
        * eval_q(data, j, x - 1j)
        * eval_q(data, j + 1, x + 1j)
    )
    return t1 + t2


def bae_residuals(data):
    """|lambda_j/lambda_{j+1} + 1| at every stored root (pole-free ratio form)."""
    res = []
    for j in range(1, data.n):
        for x in data.roots[j - 1]:
            num = (
                eval_q(data, j - 1, x - 1j)
                * eval_q(data, j, x + 1j)
                * eval_q(data, j + 1, x)
            )
            den = (
                eval_q(data, j - 1, x)
                * eval_q(data, j, x - 1j)
                * eval_q(data, j + 1, x + 1j)
            )
            ratio = num / den * np.exp(data.beta * (data.mu[j - 1] - data.mu[j]))
            res.append(abs(ratio + 1.0))
    return res


def _pack(roots):
    flat = []
    for level in roots:
        for r in level:
            flat.extend((r.real, r.imag))
    return np.array(flat)


def _unpack(vec, shape):
    roots = []
    pos = 0
    for m in shape:
        level = []
        for _ in range(m):
            level.append(complex(vec[pos], vec[pos + 1]))
            pos += 2
        roots.append(tuple(level))
    return tuple(roots)


def solve_bethe_roots(n, N, beta, mu=None, J=1.0, tol=1e-12, max_iter=80):
    """Roots of the dominant sector m_1 = ... = m_{n-1} = N/2.

    Newton iteration on the pole-free form of the Bethe equations, starting
    from the near-origin symmetric guess and following the chemical
    potentials homotopically.  Small even N only; robustness beyond N ~ 6
    is best effort.

    The Trotter coupling enters the Phi factors as tau = -beta*J/N: with
    this sign the reconstructed eigenvalue sum matches the staggered
    quantum-transfer-matrix product (checked against dense diagonalization;
    the opposite sign describes the J -> -J chain).
    """
    if N <= 0 or N % 2:
        raise DomainError("need a positive even Trotter number")
    if mu is None:
        mu = (0.0,) * n
    tau = -beta * J / N
    m = N // 2
    shape = (m,) * (n - 1)

    # symmetric initial guess: roots near the origin, split per level and
    # per root index to break degeneracy
    init = []
    for j in range(1, n):
        level = []
        for k in range(m):
            spread = 0.35 * (k - (m - 1) / 2.0)
            level.append(complex(spread, 1e-3 * (j - n / 2.0)))
        init.append(tuple(level))
    roots = tuple(init)

    def newton(mu_now, roots):
        data_of = lambda rt: RootData(
            n=n, N=N, tau=tau, mu=mu_now, beta=beta, roots=rt
        )

        def residual_vec(rt):
            data = data_of(rt)
            out = []
            for j in range(1, n):
                for x in rt[j - 1]:
                    val = _bae_lhs(data, j, x)
                    out.extend((val.real, val.imag))
            return np.array(out)

        vec = _pack(roots)
        for _ in range(max_iter):
            rt = _unpack(vec, shape)
            F = residual_vec(rt)
            scale = np.max(np.abs(F)) if F.size else 0.0
            # numerical Jacobian
            Jm = np.empty((F.size, vec.size))
            h = 1e-7
            for c in range(vec.size):
                pert = vec.copy()
                pert[c] += h
                Jm[:, c] = (residual_vec(_unpack(pert, shape)) - F) / h
            try:
                step = np.linalg.solve(Jm, -F)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(Jm, -F, rcond=None)[0]
            lam = 1.0
            base = np.linalg.norm(F)
            for _ in range(30):
                trial = vec + lam * step
                if np.linalg.norm(residual_vec(_unpack(trial, shape))) < base:
                    break
                lam *= 0.5
            vec = vec + lam * step
            data = data_of(_unpack(vec, shape))
            if max(bae_residuals(data), default=0.0) < tol:
                return _unpack(vec, shape)
        data = data_of(_unpack(vec, shape))
        raise ConvergenceError(
            "Bethe Newton iteration stalled",
            residual=max(bae_residuals(data), default=np.inf),
            iterations=max_iter,
        )

    # homotopy in mu from the symmetric point
    mu = tuple(float(v) for v in mu)
    steps = 1 if all(abs(v) < 1e-14 for v in mu) else 4
    for s in range(1, steps + 1):
        mu_now = tuple(v * s / steps for v in mu)
        roots = newton(mu_now, roots)
    return RootData(n=n, N=N, tau=tau, mu=mu, beta=beta, roots=roots)


# ----------------------------------------------------------------------
# analyticity checks

def _circle_mean(fun, center, radius, points):
    vals = []
    for t in range(points):
        z = center + radius * np.exp(2j * np.pi * (t + 0.5) / points)
        vals.append(fun(z))
    return np.mean(vals), np.max(np.abs(vals))


def residue_check(fact, data, radius=0.02, points=16):
    """Largest relative residue of the partial sum at its removed poles.

    For every internal (removed) pole position the circle mean of
    (x - x0) * sum(x) estimates the residue exactly; it is normalized by
    the magnitude scale of (x - x0) * sum on the same circle.  Solved
    Bethe roots make every removed pole vanish.
    """
    adj = adjacency_matrix(fact.n, fact.a)
    inside = set(fact.subset)
    removed = set()
    for (i, j), label in adj.edges.items():
        if i in inside and j in inside:
            removed.add(label)
    worst = 0.0
    ctx = EvalContext(data)
    tab = fact.tableau()
    for lvl, dh in sorted(removed):
        for root in data.roots[lvl - 1]:
            x0 = root - 0.5j * dh
            fun = lambda z: (z - x0) * eval_range_tableau(data, tab, z, ctx)
            mean, scale = _circle_mean(fun, x0, radius, points)
            if scale == 0.0:
                continue
            worst = max(worst, abs(mean) / scale)
    return worst


def eigenvalue_from_roots(data, x, a=1, radius=0.05, points=16):
    """Lambda_{a,1}(x) via the circle mean, safe on top of Bethe roots.

    The circle mean of an analytic function equals its center value; the
    individual eigenvalue terms have poles at the roots but the full sum
    does not once the Bethe equations hold.
    """
    x = complex(x)
    ctx = EvalContext(data)
    tab = RangeTableau.full(a, 1, data.n)
    pole_dist = min(
        (abs(x + 0.5j * dh - r) for level in data.roots for r in level
         for dh in range(-data.n, data.n + 1)),
        default=np.inf,
    )
    if pole_dist > 10 * radius:
        return eval_range_tableau(data, tab, x, ctx)
    mean, _ = _circle_mean(
        lambda z: eval_range_tableau(data, tab, z, ctx), x, radius, points
    )
    return mean
