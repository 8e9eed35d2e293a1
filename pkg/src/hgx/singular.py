"""Singular sets of the hypergeometric systems.

The level-L resultant curves f_L, the catalogue of singular components
(coordinate and unit hyperplanes, the curved sum-zero and sum-one loci,
the braid-arrangement diagonals at level zero), numeric membership tests
and exact rational parametrizations.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ShapeError
from .param_core import Shape

# A bivariate integer polynomial: {(deg_x, deg_y): coeff}.
Poly2 = dict


def poly_eval(poly: Poly2, x, y):
    """Evaluate a bivariate coefficient map at a point (Horner-free; the
    supports here are tiny)."""
    total = 0
    for (i, j), c in poly.items():
        total = total + c * x ** i * y ** j
    return total


def poly_equal(a: Poly2, b: Poly2) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, 0) == b.get(k, 0) for k in keys)


def _poly_mul(a: Poly2, b: Poly2) -> Poly2:
    out: Poly2 = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + c * d
    return {k: v for k, v in out.items() if v != 0}


def _poly_sub(a: Poly2, b: Poly2) -> Poly2:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v != 0}


def _poly_pow(a: Poly2, n: int) -> Poly2:
    out: Poly2 = {(0, 0): 1}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _bareiss_det(mat: list) -> int:
    """Fraction-free determinant of a square integer matrix."""
    m = [row[:] for row in mat]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update: division is exact over the integers
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials given by coefficient lists in
    increasing degree order."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    df, dg = len(f) - 1, len(g) - 1
    if df < 0 or dg < 0:
        return 0
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    size = df + dg
    mat = [[0] * size for _ in range(size)]
    frow = f[::-1]
    grow = g[::-1]
    for i in range(dg):
        for j, c in enumerate(frow):
            mat[i][i + j] = c
    for i in range(df):
        for j, c in enumerate(grow):
            mat[dg + i][i + j] = c
    return _bareiss_det(mat)


def _resultant_at(L: int, x0: int, y0: int) -> int:
    # coefficients of x0*(1+t)^L - 1 and y0*(1+t)^L - t^L in t
    binom = [math.comb(L, k) for k in range(L + 1)]
    f = [x0 * b for b in binom]
    f[0] -= 1
    g = [y0 * b for b in binom]
    g[L] -= 1
    return sylvester_resultant(f, g)


def _interp_1d(nodes: Sequence[int], values: Sequence) -> list:
    """Newton interpolation; returns coefficients in increasing degree."""
    n = len(nodes)
    divided = [Fraction(v) if isinstance(v, int) else v for v in values]
    table = list(divided)
    coeffs = [table[0]]
    for level in range(1, n):
        table = [
            (table[i + 1] - table[i]) / (nodes[i + level] - nodes[i])
            for i in range(n - level)
        ]
        coeffs.append(table[0])
    # expand the Newton form to the monomial basis
    poly = [Fraction(0)] * n
    basis = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k, c in enumerate(coeffs):
        for d in range(n):
            poly[d] += c * basis[d]
        if k < n - 1:
            nxt = [Fraction(0)] * n
            for d in range(n):
                if basis[d] == 0:
                    continue
                nxt[d] -= nodes[k] * basis[d]
                if d + 1 < n:
                    nxt[d + 1] += basis[d]
            basis = nxt
    return poly


def f_L(L: int) -> Poly2:
    """The defining polynomial of the curved divisor at level L, computed as
    the resultant in t of x(1+t)^L - 1 and y(1+t)^L - t^L, normalized so that
    the constant term is f_L(0,0) = 1.

    f_0 = 1 by convention; for L < 0 the polynomial part of f_{-L}(1/x, 1/y)
    is returned.
    """
    if L == 0:
        return {(0, 0): 1}
    if L < 0:
        pos = f_L(-L)
        dx = max(i for i, _ in pos)
        dy = max(j for _, j in pos)
        return {(dx - i, dy - j): c for (i, j), c in pos.items()}
    nodes = list(range(2, L + 3))
    cols = []
    for x0 in nodes:
        vals = [_resultant_at(L, x0, y0) for y0 in nodes]
        cols.append(_interp_1d(nodes, vals))
    poly: Poly2 = {}
    for j in range(L + 1):
        row = [cols[k][j] for k in range(L + 1)]
        xcoeffs = _interp_1d(nodes, row)
        for i, c in enumerate(xcoeffs):
            if c != 0:
                if c.denominator != 1:
                    raise ArithmeticError("resultant interpolation not integral")
                poly[(i, j)] = int(c)
    unit = poly.get((0, 0), 0)
    if unit not in (1, -1):
        raise ArithmeticError("resultant constant term is not a unit")
    if unit == -1:
        poly = {k: -v for k, v in poly.items()}
    return poly


def f_L_string(L: int) -> str:
    """Render f_L in the compact form (1-x-y)^L - xy * (cofactor)."""
    poly = f_L(L)
    if L in (0,):
        return "1"
    base = {(0, 0): 1, (1, 0): -1, (0, 1): -1}
    diff = _poly_sub(_poly_pow(base, abs(L)), poly)
    if not diff:
        return "1-x-y" if abs(L) == 1 else f"(1-x-y)^{abs(L)}"
    if all(i >= 1 and j >= 1 for i, j in diff):
        cof = {(i - 1, j - 1): c for (i, j), c in diff.items()}
        if list(cof) == [(0, 0)]:
            return f"(1-x-y)^{abs(L)}-{cof[(0, 0)]}xy"
        return f"(1-x-y)^{abs(L)}-xy*({poly_string(cof)})"
    return poly_string(poly)


def poly_string(poly: Poly2) -> str:
    """Expanded form, graded lexicographic descending."""
    if not poly:
        return "0"
    keys = sorted(poly, key=lambda k: (-(k[0] + k[1]), -k[0]))
    parts = []
    for i, j in keys:
        c = poly[(i, j)]
        mono = ""
        if i:
            mono += "x" if i == 1 else f"x^{i}"
        if j:
            mono += "y" if j == 1 else f"y^{j}"
        if not mono:
            term = str(abs(c))
        elif abs(c) == 1:
            term = mono
        else:
            term = f"{abs(c)}{mono}"
        parts.append(("-" if c < 0 else "+") + term)
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


# ---------------------------------------------------------------------------
# component catalogue


@dataclass(frozen=True)
class SingularComponent:
    """One irreducible component of the singular locus.

    kind is one of "coordinate", "unit", "sum-zero", "sum-one", "diagonal".
    For the curved kinds, index_set lists the active variables and the locus
    is the polynomial part of the product over |L|-th root choices of
    sum_{i in I} w_i x_i^(1/L) (sum-zero) or 1 - sum w_i x_i^(1/L) (sum-one).
    """

    kind: str
    level: int
    index_set: tuple = ()
    condition: str = ""

    def contains(self, point: Sequence[complex], tol: float = 1e-9) -> bool:
        x = [complex(v) for v in point]
        if self.kind == "coordinate":
            (i,) = self.index_set
            return abs(x[i]) <= tol
        if self.kind == "unit":
            (i,) = self.index_set
            return abs(x[i] - 1) <= tol
        if self.kind == "diagonal":
            i, j = self.index_set
            return abs(x[i] - x[j]) <= tol
        L = self.level
        if any(abs(x[i]) <= tol for i in self.index_set):
            # the polynomial-part monomial factors vanish on coordinate
            # hyperplanes, credited to the coordinate components instead
            return False
        roots = [_all_roots(x[i], L) for i in self.index_set]
        if self.kind == "sum-zero":
            # homogeneous: fix the first root choice
            for combo in itertools.product(*roots[1:]):
                if abs(roots[0][0] + sum(combo)) <= tol * _scale(x):
                    return True
            return False
        if self.kind == "sum-one":
            for combo in itertools.product(*roots):
                if abs(1 - sum(combo)) <= tol * _scale(x):
                    return True
            return False
        raise ValueError(f"unknown component kind {self.kind!r}")

    def describe(self) -> str:
        names = _var_names(max(self.index_set, default=0) + 1)
        if self.kind == "coordinate":
            return f"{names[self.index_set[0]]} = 0"
        if self.kind == "unit":
            return f"{names[self.index_set[0]]} = 1"
        if self.kind == "diagonal":
            i, j = self.index_set
            return f"{names[i]} = {names[j]}"
        L = self.level
        terms = " + ".join(f"w_{names[i]} {names[i]}^(1/{L})" for i in self.index_set)
        if self.kind == "sum-zero":
            return f"p.p. prod ({terms}) = 0 over |{L}|-th roots of unity"
        return f"p.p. prod (1 - ({terms})) = 0 over |{L}|-th roots of unity"


def _scale(x) -> float:
    return max(1.0, max(abs(v) for v in x))


def _all_roots(z: complex, L: int) -> list:
    """All values of z^(1/L), L any nonzero integer."""
    m = abs(L)
    if z == 0:
        return [0.0]
    base = cmath.exp(cmath.log(z) / L)
    turn = cmath.exp(2j * cmath.pi / m)
    return [base * turn ** k for k in range(m)]


def _var_names(n: int) -> list:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def singular_components(shape: Shape) -> list:
    """Catalogue of irreducible singular components for the system of the
    given shape, each with its activation condition already enforced."""
    if not shape.condition_F:
        raise ShapeError("singular catalogue requires matching row degrees")
    n = shape.n
    L = shape.level
    p = shape.p
    comps = [
        SingularComponent("coordinate", L, (i,), "always") for i in range(n)
    ]
    for i in range(n):
        others = math.prod(p[j] for j in range(n) if j != i)
        if others > 0:
            comps.append(
                SingularComponent("unit", L, (i,), "prod_{j!=i} p_j > 0")
            )
    if L == 0:
        for i in range(n):
            for j in range(i + 1, n):
                comps.append(SingularComponent("diagonal", 0, (i, j), "L = 0"))
        return comps
    for size in range(2, n + 1):
        for I in itertools.combinations(range(n), size):
            outside = math.prod(p[j] for j in range(n) if j not in I)
            if outside <= 0:
                continue
            if shape.r_dash > 0:
                comps.append(
                    SingularComponent(
                        "sum-zero", L, I, "r' > 0 and prod_{i not in I} p_i > 0"
                    )
                )
            comps.append(
                SingularComponent("sum-one", L, I, "prod_{i not in I} p_i > 0")
            )
    return comps


def on_singular(shape: Shape, point: Sequence[complex], tol: float = 1e-9):
    """Membership test against the full catalogue.

    Returns (flag, component): the first catalogued component containing the
    point, or (False, None).
    """
    for comp in singular_components(shape):
        if comp.contains(point, tol):
            return True, comp
    return False, None


# ---------------------------------------------------------------------------
# rational parametrizations


def parametrize_curve(L: int, t):
    """The point (1/(1+t)^L, t^L/(1+t)^L) on the level-L curve f_L = 0.

    Exact when t is a Fraction."""
    if L == 0:
        raise ValueError("the level-zero locus is not a curve")
    one = Fraction(1) if isinstance(t, (int, Fraction)) else 1.0
    s = one + t
    if s == 0:
        raise ZeroDivisionError("parametrization pole at t = -1")
    return (one / s ** L, t ** L / s ** L)


def parametrize_sum_zero(L: int, epsilon: int, ts: Sequence):
    """eq-style parametrization of the sum-zero locus in C^I: the image of
    (t_i) under (eps * (sum t_i)^L, (t_i^L))."""
    total = sum(ts)
    return (epsilon * total ** L,) + tuple(t ** L for t in ts)


def parametrize_sum_one(L: int, ts: Sequence):
    """Parametrization of the sum-one locus: first coordinate 1/(1+sum t)^L,
    the rest (t_i/(1+sum t))^L."""
    one = Fraction(1) if all(isinstance(t, (int, Fraction)) for t in ts) else 1.0
    s = one + sum(ts)
    if s == 0:
        raise ZeroDivisionError("parametrization pole")
    return (one / s ** L,) + tuple((t / s) ** L for t in ts)
