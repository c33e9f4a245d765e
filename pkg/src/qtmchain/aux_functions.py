"""Canonical auxiliary functions B_{a,j}, b_{a,j} and their functional relations.

The canonical pair for a j-vector (j_1 < ... < j_a) is built from single-column
range tableaux over the consecutive ranges

    (1,j_1), (j_1,j_2), ..., (j_{a-1},j_a), (j_a,n)

as the ratio

    B = C_a^top(x - i/2) * C_a^bot(x + i/2) / ( C_{a+1}(x) * C_{a-1}(x) )
    b = R(x) / ( C_{a+1}(x) * C_{a-1}(x) ),

where C_a^top drops the last range, C_a^bot drops the first, C_{a+1} keeps
all, C_{a-1} keeps only the middle ranges, and R is the a x 2 rectangle whose
row k is fixed to j_k in both columns.  The restricted fusion move makes
B = 1 + b an identity for arbitrary root data.

Function order within each representation follows the kernel-row order used
by the integral-equation tables: plain lexicographic for n <= 4 (and n = 6),
while for n = 5 the a = 2, 3 sectors interleave differently; the explicit
sequences below match the printed constants and kernel blocks.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import DomainError
from .tableaux import (
    EvalContext,
    RangeTableau,
    RootData,
    conjugate_data,
    eval_range_tableau,
    fused_eigenvalue,
)

__all__ = [
    "AuxFunctionDef",
    "function_order",
    "canonical_defs",
    "canonical_pair",
    "legacy_defs",
    "eval_aux",
    "eval_f",
    "eval_f_conjugate",
    "check_y_relations",
    "counting_values",
]

_ORDER5_A2 = (
    (1, 2), (1, 3), (2, 3), (1, 4), (1, 5),
    (2, 4), (2, 5), (3, 4), (3, 5), (4, 5),
)
_ORDER5_A3 = (
    (1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5),
    (2, 3, 4), (2, 3, 5), (1, 4, 5), (2, 4, 5), (3, 4, 5),
)


def function_order(n, a):
    """j-vectors of representation a in kernel-row order."""
    if not 1 <= a <= n - 1:
        raise DomainError(f"representation index must lie in 1..{n - 1}")
    if n == 5 and a == 2:
        return _ORDER5_A2
    if n == 5 and a == 3:
        return _ORDER5_A3
    return tuple(combinations(range(1, n + 1), a))


@dataclass(frozen=True)
class AuxFunctionDef:
    """One auxiliary function as a ratio of shifted range-tableau products."""

    a: int
    jvec: tuple
    kind: str  # "upper" | "lower"
    numerator: tuple
    denominator: tuple

    @property
    def label(self):
        return (self.a, self.jvec)


def _consecutive_ranges(n, jvec):
    lead = (1, jvec[0])
    mids = tuple((jvec[i], jvec[i + 1]) for i in range(len(jvec) - 1))
    tail = (jvec[-1], n)
    return lead, mids, tail


def canonical_pair(n, jvec):
    """(uppercase, lowercase) definitions for one j-vector."""
    jvec = tuple(jvec)
    a = len(jvec)
    if any(jvec[i] >= jvec[i + 1] for i in range(a - 1)):
        raise DomainError("j-vector must be strictly increasing")
    if jvec[0] < 1 or jvec[-1] > n:
        raise DomainError(f"j-vector entries must lie in 1..{n}")
    lead, mids, tail = _consecutive_ranges(n, jvec)
    col = RangeTableau.column
    top = col((lead,) + mids, shift=-0.5j)
    bottom = col(mids + (tail,), shift=+0.5j)
    tall = col((lead,) + mids + (tail,))
    den = (tall,) if not mids else (tall, col(mids))
    rect = RangeTableau(tuple(((jk, jk), (jk, jk)) for jk in jvec))
    upper = AuxFunctionDef(a, jvec, "upper", (top, bottom), den)
    lower = AuxFunctionDef(a, jvec, "lower", (rect,), den)
    return upper, lower


def canonical_defs(n):
    """All 2^n - 2 canonical pairs, ordered a = 1..n-1 then kernel-row order."""
    if not 2 <= n <= 6:
        raise DomainError(f"canonical construction implemented for 2 <= n <= 6, got {n}")
    pairs = []
    for a in range(1, n):
        for jvec in function_order(n, a):
            pairs.append(canonical_pair(n, jvec))
    assert len(pairs) == 2**n - 2
    assert all(
        sum(1 for u, _ in pairs if u.a == a) == comb(n, a) for a in range(1, n)
    )
    return pairs


def eval_aux(defn, data, x, ctx=None):
    """Numerator product over denominator product at spectral parameter x."""
    if ctx is None:
        ctx = EvalContext(data)
    num = 1.0 + 0j
    for t in defn.numerator:
        num *= eval_range_tableau(data, t, x, ctx)
    den = 1.0 + 0j
    for t in defn.denominator:
        den *= eval_range_tableau(data, t, x, ctx)
    if den == 0:
        raise ZeroDivisionError(
            f"denominator of {defn.kind} {defn.label} vanished at x={x}"
        )
    return num / den


# ----------------------------------------------------------------------
# the function f relating the canonical set to the Y-system

_F4_NUM = (((1, 2), (2, 4)), ((1, 3), (3, 4)))
_F4_DEN = (((1, 3), (2, 4)), ((1, 2), (3, 4)))
_F5_NUM = (((1, 2), (2, 5)), ((1, 3), (3, 5)), ((1, 4), (4, 5)))
_F5_DEN = (((1, 4), (2, 5)), ((1, 2), (3, 5)), ((1, 3), (4, 5)))


def eval_f(n, data, x, ctx=None):
    """Y-system dressing function f for n = 4 or 5 (self-conjugated for n=4)."""
    if n not in (4, 5):
        raise DomainError("f is defined for n in {4, 5}")
    if data.n != n:
        raise DomainError("data rank does not match requested n")
    if ctx is None:
        ctx = EvalContext(data)
    num_rows, den_rows = (_F4_NUM, _F4_DEN) if n == 4 else (_F5_NUM, _F5_DEN)
    num = den = 1.0 + 0j
    for rows in num_rows:
        num *= eval_range_tableau(data, RangeTableau.column(rows), x, ctx)
    for rows in den_rows:
        den *= eval_range_tableau(data, RangeTableau.column(rows), x, ctx)
    return num / den


# Representation conjugate of f^(5): every two-row factor is replaced by the
# three-row column whose fillings are exactly the complements of the original
# fillings inside {1..5}.  The ratio needs no extra normalization; this was
# pinned down against the conjugate-representation ratio Y_4 / prod(B_4).
_F5BAR_NUM = (
    ((1, 3), (3, 4), (4, 5)),
    ((1, 2), (2, 4), (4, 5)),
    ((1, 2), (2, 3), (3, 5)),
)
_F5BAR_DEN = (
    ((1, 3), (2, 4), (3, 5)),
    ((1, 2), (3, 4), (4, 5)),
    ((1, 2), (2, 3), (4, 5)),
)


def eval_f_conjugate(n, data, x, ctx=None):
    """Representation conjugate of f (distinct from f only for n = 5)."""
    if n == 4:
        return eval_f(4, data, x, ctx)
    if n != 5:
        raise DomainError("conjugate f is defined for n in {4, 5}")
    if ctx is None:
        ctx = EvalContext(data)
    num = den = 1.0 + 0j
    for rows in _F5BAR_NUM:
        num *= eval_range_tableau(data, RangeTableau.column(rows), x, ctx)
    for rows in _F5BAR_DEN:
        den *= eval_range_tableau(data, RangeTableau.column(rows), x, ctx)
    return num / den


def _y_value(data, a, x, ctx):
    num = fused_eigenvalue(data, a, 1, x - 0.5j, ctx) * fused_eigenvalue(
        data, a, 1, x + 0.5j, ctx
    )
    den = fused_eigenvalue(data, a - 1, 1, x, ctx) * fused_eigenvalue(
        data, a + 1, 1, x, ctx
    )
    return num / den


def check_y_relations(n, data, x, ctx=None):
    """Residuals of Y_a against the f-dressed products of uppercase functions.

    Y_a is built directly from fused eigenvalues; the right-hand sides use
    the canonical uppercase functions in their defining (unshifted) form.
    Returns {a: residual}.
    """
    if n not in (4, 5):
        raise DomainError("Y-relations implemented for n in {4, 5}")
    if ctx is None:
        ctx = EvalContext(data)
    x = complex(x)
    products = {}
    for a in range(1, n):
        prod = 1.0 + 0j
        for jvec in function_order(n, a):
            upper, _ = canonical_pair(n, jvec)
            prod *= eval_aux(upper, data, x, ctx)
        products[a] = prod

    f0 = eval_f(n, data, x, ctx)
    fp = eval_f(n, data, x + 0.5j, ctx)
    fm = eval_f(n, data, x - 0.5j, ctx)
    if n == 4:
        rhs = {
            1: f0 * products[1],
            2: products[2] / (fm * fp),
            3: f0 * products[3],
        }
    else:
        fb0 = eval_f_conjugate(n, data, x, ctx)
        fbp = eval_f_conjugate(n, data, x + 0.5j, ctx)
        fbm = eval_f_conjugate(n, data, x - 0.5j, ctx)
        rhs = {
            1: f0 * products[1],
            2: fb0 / (fp * fm) * products[2],
            3: f0 / (fbp * fbm) * products[3],
            4: fb0 * products[4],
        }
    out = {}
    for a in range(1, n):
        y = _y_value(data, a, x, ctx)
        out[a] = abs(y - rhs[a]) / (1.0 + abs(y))
    return out


# ----------------------------------------------------------------------
# previously published auxiliary-function sets (uppercase only)

def _col(rows, shift=0j):
    return RangeTableau.column(rows, shift=shift)


def _legacy_sl2():
    B1 = AuxFunctionDef(1, (1,), "upper", (_col([(1, 2)]),), (_col([(2, 2)]),))
    B2 = AuxFunctionDef(1, (2,), "upper", (_col([(1, 2)]),), (_col([(1, 1)]),))
    return [B1, B2]


def _legacy_sl3():
    p, m = +0.5j, -0.5j
    defs = [
        ((1, 1), (_col([(1, 3)], p),), (_col([(2, 3)], p),)),
        (
            (1, 2),
            (_col([(1, 1), (2, 3)]), _col([(1, 2), (3, 3)])),
            (_col([(1, 1), (3, 3)]), _col([(1, 2), (2, 3)])),
        ),
        ((1, 3), (_col([(1, 3)], m),), (_col([(1, 2)], m),)),
        ((2, 1), (_col([(1, 2), (2, 3)], p),), (_col([(1, 2), (3, 3)], p),)),
        (
            (2, 2),
            (_col([(1, 2)]), _col([(2, 3)])),
            (_col([(2, 2)]), _col([(1, 3)])),
        ),
        ((2, 3), (_col([(1, 2), (2, 3)], m),), (_col([(1, 1), (2, 3)], m),)),
    ]
    return [
        AuxFunctionDef(label[0], (label[1],), "upper", num, den)
        for label, num, den in defs
    ]


def _legacy_sl4():
    p, m = +0.5j, -0.5j
    defs = [
        ((1, 1), (_col([(1, 4)], p),), (_col([(2, 4)], p),)),
        (
            (1, 2),
            (_col([(1, 1), (2, 4)]), _col([(1, 3), (3, 4)])),
            (_col([(1, 1), (3, 4)]), _col([(1, 3), (2, 4)])),
        ),
        (
            (1, 3),
            (_col([(1, 3), (4, 4)]), _col([(1, 1), (3, 4)])),
            (_col([(1, 1), (4, 4)]), _col([(1, 3), (3, 4)])),
        ),
        ((1, 4), (_col([(1, 4)], m),), (_col([(1, 3)], m),)),
        ((2, 1), (_col([(1, 3), (2, 4)], m),), (_col([(1, 3), (3, 4)], m),)),
        (
            (2, 2),
            (_col([(2, 3), (4, 4)], p), _col([(1, 3), (3, 4)], p)),
            (_col([(1, 3), (4, 4)], p), _col([(2, 3), (3, 4)], p)),
        ),
        (
            (2, 3),
            (_col([(1, 3)]), _col([(2, 4)])),
            (_col([(1, 4)]), _col([(2, 3)])),
        ),
        (
            (2, 4),
            (_col([(1, 1), (2, 3), (3, 4)]), _col([(1, 2), (2, 3), (4, 4)])),
            (_col([(1, 1), (2, 3), (4, 4)]), _col([(1, 2), (2, 3), (3, 4)])),
        ),
        (
            (2, 5),
            (_col([(1, 1), (2, 3)], m), _col([(1, 2), (2, 4)], m)),
            (_col([(1, 1), (2, 4)], m), _col([(1, 2), (2, 3)], m)),
        ),
        ((2, 6), (_col([(1, 3), (2, 4)], m),), (_col([(1, 2), (2, 4)], m),)),
        ((3, 1), (_col([(1, 2), (2, 3), (3, 4)], p),), (_col([(1, 2), (2, 3), (4, 4)], p),)),
        (
            (3, 2),
            (_col([(2, 2), (3, 4)]), _col([(1, 2), (2, 3)])),
            (_col([(2, 2), (3, 3)]), _col([(1, 2), (2, 4)])),
        ),
        (
            (3, 3),
            (_col([(2, 3), (3, 4)]), _col([(1, 2), (2, 4)])),
            (_col([(2, 2), (3, 4)]), _col([(1, 3), (2, 4)])),
        ),
        ((3, 4), (_col([(1, 2), (2, 3), (3, 4)], m),), (_col([(1, 1), (2, 3), (3, 4)], m),)),
    ]
    return [
        AuxFunctionDef(label[0], (label[1],), "upper", num, den)
        for label, num, den in defs
    ]


def legacy_defs(n):
    """Uppercase auxiliary-function sets from earlier formulations (n = 2, 3, 4)."""
    if n == 2:
        return _legacy_sl2()
    if n == 3:
        return _legacy_sl3()
    if n == 4:
        return _legacy_sl4()
    raise DomainError(f"legacy sets exist for n in {{2, 3, 4}}, got {n}")


def species_conjugation_index(n, jvec):
    """Image of a j-vector under the species flip k -> n+1-k."""
    return tuple(sorted(n + 1 - j for j in jvec))


def check_species_conjugation(n, data, x, ctx=None):
    """Residuals of B_{a,j}(x; data*) = conj(B_{a,sigma(j)}(conj x; data)).

    data* carries complex-conjugated, level-reversed roots and reversed
    chemical potentials; sigma flips every index k -> n+1-k.  Exact for
    arbitrary root data.
    """
    dstar = conjugate_data(data)
    ctx_star = EvalContext(dstar)
    if ctx is None:
        ctx = EvalContext(data)
    x = complex(x)
    out = {}
    for a in range(1, n):
        for jvec in function_order(n, a):
            upper, _ = canonical_pair(n, jvec)
            mirror, _ = canonical_pair(n, species_conjugation_index(n, jvec))
            lhs = eval_aux(upper, dstar, x, ctx_star)
            rhs = np.conj(eval_aux(mirror, data, np.conj(x), ctx))
            out[(a, jvec)] = abs(lhs - rhs) / (1.0 + abs(lhs))
    return out


def legacy_cross_relations(data, x, ctx=None):
    """Residuals tying the n=4 legacy set to the canonical set through f.

    The valid relations on arbitrary root data are

        legacy B_{1,2}(x) = f(x) * B_{1,2}(x)
        legacy B_{3,3}(x) = f(x) * B_{3,3}(x)
        legacy B_{2,1}(x) = B_{2,1}(x - i) / f(x - i/2)
        legacy B_{2,6}(x) = B_{2,6}(x)     / f(x - i/2)

    with the canonical functions in their defining (unshifted) form.  The
    last two differ from the printed argument bookkeeping; the forms above
    are the ones that close numerically and map into each other under the
    species-conjugation symmetry.
    """
    if data.n != 4:
        raise DomainError("legacy cross relations are an n=4 statement")
    if ctx is None:
        ctx = EvalContext(data)
    x = complex(x)
    legacy = {d.label: d for d in legacy_defs(4)}
    f0 = eval_f(4, data, x, ctx)
    fm = eval_f(4, data, x - 0.5j, ctx)

    def canon(jvec, xx):
        upper, _ = canonical_pair(4, jvec)
        return eval_aux(upper, data, xx, ctx)

    pairs = {
        "B12": (eval_aux(legacy[(1, (2,))], data, x, ctx), f0 * canon((2,), x)),
        "B33": (eval_aux(legacy[(3, (3,))], data, x, ctx), f0 * canon((1, 3, 4), x)),
        "B21": (eval_aux(legacy[(2, (1,))], data, x, ctx), canon((1, 2), x - 1j) / fm),
        "B26": (eval_aux(legacy[(2, (6,))], data, x, ctx), canon((3, 4), x) / fm),
    }
    return {
        name: abs(lhs - rhs) / (1.0 + abs(lhs)) for name, (lhs, rhs) in pairs.items()
    }


def counting_values(n, beta=0.0, mu=None):
    """mu-weighted large-x limits (b_inf, B_inf) of the canonical pairs.

    Evaluates every definition on root-free N=0 data, where each box j
    contributes exp(beta*mu_j) and tableau values become weighted filling
    counts; the spectral parameter drops out.
    """
    data = RootData.free(n, beta=beta, mu=mu)
    ctx = EvalContext(data)
    binf = []
    Binf = []
    for upper, lower in canonical_defs(n):
        binf.append(eval_aux(lower, data, 0.0, ctx).real)
        Binf.append(eval_aux(upper, data, 0.0, ctx).real)
    return np.array(binf), np.array(Binf)
