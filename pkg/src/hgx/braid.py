"""Pure-braid monodromy for shapes with p_i = p_i' and r = r'.

In this case the singular locus is the braid arrangement, so the
complement is the configuration space of n+3 marked points
[x_0, x_1, ..., x_n, x_{n+1}, x_{n+2}] = [1, x_1, ..., x_n, 0, oo]
on the projective line and the monodromy representation factors through
the pure braid group P_{n+3}.  Generating loops gamma_{ij} wind once
around the divisor {x_i = x_j}.

Every local solution at a fan vertex is a monomial prefactor times a
power series in the chart monomials, so rotating one coordinate of the
vertex region acts diagonally with exponent equal to the prefactor
degree.  A rotation taken where the coordinate is innermost (or
outermost, giving the loop around infinity reversed) realizes a single
gamma_{ij}; the remaining generators are quotients of two rotations.
All matrices are pulled back to a fixed base vertex by the connection
matrices of the connect module, so entries are finite products of
Gamma values and exponentials.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from .connect import HEXAGON, VERTEX_OF_PERM, local_basis, transport
from .errors import NotAdjacentDivisor, NotBraidCase, ShapeError
from .param_core import Params, Shape

__all__ = [
    "LoopLabel",
    "loop_divisor",
    "generators",
    "local_monodromy",
    "braid_generator_matrix",
    "representation",
    "BASE_VERTEX",
]

BASE_VERTEX = "(0,0^2)"  # the region |y| << |x| << 1


@dataclass(frozen=True)
class LoopLabel:
    """Generator gamma_{ij} of P_{n+3}: a loop around {x_i = x_j}.

    Excluded pairs (0,n+1), (0,n+2), (n+1,n+2) wind around divisors
    absent from the arrangement (1, 0 and oo never collide).
    """

    i: int
    j: int

    def validate(self, n):
        i, j = self.i, self.j
        if not 0 <= i < j <= n + 2:
            raise ShapeError(f"loop indices ({i},{j}) out of range")
        if i == 0 and j in (n + 1, n + 2) or (i, j) == (n + 1, n + 2):
            raise ShapeError(f"({i},{j}) is not an arrangement divisor")


def _check_braid_case(shape: Shape):
    if shape.p != shape.p_dash or shape.r != shape.r_dash:
        raise NotBraidCase("braid monodromy needs p = p' and r = r'")


def generators(shape: Shape):
    """All loop labels, (n+3)(n+2)/2 - 3 of them."""
    n = shape.n
    out = []
    for i in range(n + 3):
        for j in range(i + 1, n + 3):
            if i == 0 and j in (n + 1, n + 2) or (i, j) == (n + 1, n + 2):
                continue
            out.append(LoopLabel(i, j))
    return out


def loop_divisor(loop: LoopLabel, n: int) -> str:
    """Human name of the divisor of a loop, e.g. "x1=0" or "x1=x2"."""
    def pt(k):
        if k == 0:
            return "1"
        if k == n + 1:
            return "0"
        if k == n + 2:
            return "oo"
        return f"x{k}"
    return f"{pt(loop.i)}={pt(loop.j)}"


# ---------------------------------------------------------------------------
# Local (diagonal) monodromy at a vertex.

def _label_degrees(label, n):
    """Per-variable prefactor degree of a local solution label."""
    degs = []
    for v in range(n):
        d = 0
        for b, cm in zip(label.beta, label.chart):
            if len(cm) == 3:           # bivariate chart (c, ex, ey)
                d += b * cm[1 + v]
            else:                      # multivariate chart (c, powers)
                d += b * cm[1][v]
        degs.append(d)
    return tuple(degs)


# Divisors meeting the closure of each bivariate vertex region, with the
# variable whose rotation reads the exponent off and the sign (negative
# exponents for loops around infinity, which are inverse rotations).
_BIV_DIVISORS = {
    "(0,0^2)": {"x=0": (0, 1), "y=0": (1, 1)},
    "(0^2,0)": {"x=0": (0, 1), "y=0": (1, 1)},
    "(0,oo)": {"x=0": (0, 1), "y=oo": (1, -1)},
    "(oo,0)": {"x=oo": (0, -1), "y=0": (1, 1)},
    "(oo,oo^2)": {"x=oo": (0, -1), "y=oo": (1, -1)},
    "(oo^2,oo)": {"x=oo": (0, -1), "y=oo": (1, -1)},
}


def _rotation_exponents(shape, params, vertex, var):
    """Exponents of the full rotation of variable `var` at a vertex."""
    basis = local_basis(shape, params, vertex)
    return [_label_degrees(lbl, shape.n)[var] for lbl in basis]


def _diag(exponents, sign=1):
    vals = [cmath.exp(2j * cmath.pi * sign * complex(e)) for e in exponents]
    return np.diag(vals)


def local_monodromy(shape: Shape, params: Params, vertex, divisor: str):
    """Diagonal monodromy of the local basis along an adjacent divisor.

    The matrix is the action of the loop rotating the divisor's chart
    coordinate once: diag(exp(2 pi i e)) over the label exponents e,
    negated for divisors at infinity.
    """
    _check_braid_case(shape)
    if isinstance(vertex, tuple) and shape.n == 2:
        vertex = VERTEX_OF_PERM[vertex]
    if shape.n == 2:
        table = _BIV_DIVISORS.get(vertex)
        if table is None:
            raise ShapeError(f"unknown vertex {vertex!r}")
        if divisor not in table:
            raise NotAdjacentDivisor(
                f"divisor {divisor} does not meet vertex {vertex}")
        var, sign = table[divisor]
        return _diag(_rotation_exponents(shape, params, vertex, var), sign)
    if vertex not in ("id", "(01)"):
        raise ShapeError(f"unknown vertex {vertex!r}")
    for v in range(shape.n):
        inner = f"x{v + 1}=0"
        if vertex == "(01)" and v == 0:
            inner = "x1=oo"
        if divisor == inner:
            sign = -1 if divisor.endswith("oo") else 1
            return _diag(_rotation_exponents(shape, params, vertex, v), sign)
    raise NotAdjacentDivisor(
        f"divisor {divisor} does not meet vertex {vertex}")


# ---------------------------------------------------------------------------
# Generator assembly (n = 2).
#
# Writing R_x(V) for the full rotation of x in the region of vertex V,
# based there, the hexagon gives:
#   R_y(0,0^2)   = gamma_23                     (y innermost)
#   R_x(0^2,0)   = gamma_13                     (x innermost)
#   R_x(0,oo)    = gamma_13                     (x inside everything)
#   R_y(0,oo)    = (gamma_24)^{-1}              (y outside everything)
#   R_x(oo,0)    = (gamma_14)^{-1}
#   R_y(oo^2,oo) = gamma_23 * gamma_02 product  (y encircles 0 and 1)
#   R_x(oo,oo^2) = gamma_13 * gamma_01 product
#   R_x(0,0^2)   = gamma_13 * gamma_12 product  (x encircles 0 and y)
# The two-divisor rotations are split by dividing out the single-divisor
# loop transported along the same chain of regions; the quotient is
# taken on the side fixed by the orientation convention below, checked
# against the pure-braid commutation relations.

_CHAINS = {
    (1, 3): ("(0^2,0)",),
    (2, 4): ("(0^2,0)", "(0,oo)"),
    (1, 4): ("(oo,0)",),
}


def _chain_matrix(shape, params, chain):
    """Continuation matrix from the base basis to the chain's end."""
    ent = None
    prev = BASE_VERTEX
    for v in chain:
        step = np.array(transport(shape, params, prev, v).entries,
                        dtype=complex)
        ent = step if ent is None else ent @ step
        prev = v
    if ent is None:
        n = len(local_basis(shape, params, BASE_VERTEX))
        ent = np.eye(n, dtype=complex)
    return ent


def _conjugated_rotation(shape, params, chain, var, sign):
    E = _chain_matrix(shape, params, chain)
    vertex = chain[-1] if chain else BASE_VERTEX
    D = _diag(_rotation_exponents(shape, params, vertex, var), sign)
    return E @ D @ np.linalg.inv(E)


def braid_generator_matrix(shape: Shape, params: Params, loop: LoopLabel,
                           base_vertex: str = BASE_VERTEX):
    """Monodromy matrix of one pure-braid generator in the base basis."""
    _check_braid_case(shape)
    if shape.n != 2:
        raise ShapeError("generator assembly is implemented for n = 2")
    if base_vertex != BASE_VERTEX:
        raise ShapeError("the base vertex is fixed to " + BASE_VERTEX)
    loop.validate(shape.n)
    ij = (loop.i, loop.j)
    if ij == (2, 3):
        return _conjugated_rotation(shape, params, (), 1, 1)
    if ij in _CHAINS:
        sign = -1 if loop.j == 4 else 1
        return _conjugated_rotation(shape, params, _CHAINS[ij],
                                    loop.i - 1, sign)
    if ij == (1, 2):
        g13 = braid_generator_matrix(shape, params, LoopLabel(1, 3))
        rx = _conjugated_rotation(shape, params, (), 0, 1)
        return np.linalg.inv(g13) @ rx
    if ij == (0, 1):
        chain = ("(oo,0)", "(oo^2,oo)", "(oo,oo^2)")
        rx = _conjugated_rotation(shape, params, chain, 0, 1)
        g13 = _conjugated_rotation(shape, params, chain + ("(0,oo)",), 0, 1)
        return np.linalg.inv(g13) @ rx
    if ij == (0, 2):
        chain = ("(oo,0)", "(oo^2,oo)")
        ry = _conjugated_rotation(shape, params, chain, 1, 1)
        g23 = _conjugated_rotation(shape, params, ("(oo,0)",), 1, 1)
        return np.linalg.inv(g23) @ ry
    raise ShapeError(f"({loop.i},{loop.j}) is not an arrangement divisor")


def representation(shape: Shape, params: Params):
    """All generator matrices at the base vertex, keyed by LoopLabel."""
    return {g: braid_generator_matrix(shape, params, g)
            for g in generators(shape)}
