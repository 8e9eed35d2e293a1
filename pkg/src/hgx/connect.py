"""Local solution bases at fan vertices and their connection matrices.

Bivariate systems carry twelve families of local series solutions spread
over the six vertices of the blown-up hexagon at infinity; for n variables
the canonical vertices p_id and p_(01) carry F-type and signed G-type
families.  Connection matrices between adjacent vertices are products of
Gamma-function values, assembled here from the one-variable coefficients
of ode1 applied to boundary systems.
"""

import cmath
from dataclasses import dataclass
from itertools import product

from .errors import (AdjacencyError, ConvergenceError, ResonanceError,
                     ShapeError)
from .ode1 import (OneVarSystem, _PowerTail, connection_coeff,
                   continue_derivatives)
from .param_core import Params, Shape, near_integer, rank
from .series import eval_series, principal_power, series_G

# ---------------------------------------------------------------------------
# The twelve bivariate families.
#
# Each family is a coordinate transform of the system: three column blocks
# (given by keys into the original parameter pack) over three lower blocks,
# together with the two chart monomials.  A chart monomial (c, ex, ey)
# stands for c * x^ex * y^ey with c either 1 or "e" (the parity sign
# epsilon = (-1)^(r-r')).  Solutions of the family are labelled by an entry
# of each of the first two lower blocks.

FAMILY_DATA = {
    1: ("F", ("a", "b", "g"), ("a'", "b'", "g'"),
        ((1, 1, 0), (1, 0, 1)), "(0,0)"),
    2: ("F", ("a'", "b'", "g'"), ("a", "b", "g"),
        ((1, -1, 0), (1, 0, -1)), "(oo,oo)"),
    3: ("F", ("g", "b'", "a"), ("g'", "b", "a'"),
        ((1, 1, 0), ("e", 1, -1)), "x=0"),
    4: ("F", ("a'", "g", "b"), ("a", "g'", "b'"),
        (("e", -1, 1), (1, 0, 1)), "y=0"),
    5: ("F", ("a", "g'", "b'"), ("a'", "g", "b"),
        (("e", 1, -1), (1, 0, -1)), "y=oo"),
    6: ("F", ("g'", "b", "a'"), ("g", "b'", "a"),
        ((1, -1, 0), ("e", -1, 1)), "x=oo"),
    7: ("G", ("a", "b'", "g"), ("a'", "b", "g'"),
        ((1, 1, 0), ("e", 0, -1)), "(0,oo)"),
    8: ("G", ("a'", "b", "g'"), ("a", "b'", "g"),
        ((1, -1, 0), ("e", 0, 1)), "(oo,0)"),
    9: ("G", ("a", "g", "b'"), ("a'", "g'", "b"),
        (("e", 1, -1), ("e", 0, 1)), "(0^2,0)"),
    10: ("G", ("g", "b", "a"), ("g'", "b'", "a'"),
         ((1, 1, 0), (1, -1, 1)), "(0,0^2)"),
    11: ("G", ("g'", "b'", "a'"), ("g", "b", "a"),
         ((1, -1, 0), (1, 1, -1)), "(oo,oo^2)"),
    12: ("G", ("a'", "g'", "b"), ("a", "g", "b'"),
         (("e", -1, 0), ("e", 1, -1)), "(oo^2,oo)"),
}

# Prefactor base signs relative to the chart monomials, chosen so that on
# the continuation region {0 < x << -y} each base is a positive real.
# Only the families entering the canonical connection path need them; the
# rest default to +1.
_PATH_SIGNS = {1: (1, -1), 3: (1, "-e"), 5: ("-e", -1),
               7: (1, "-e"), 9: ("-e", "-e")}

VERTEX_FAMILIES = {
    "(0^2,0)": (1, 3, 9),
    "(0,oo)": (7, 5, 3),
    "(oo,oo^2)": (5, 11, 2),
    "(oo^2,oo)": (6, 12, 2),
    "(oo,0)": (8, 6, 4),
    "(0,0^2)": (1, 4, 10),
}

HEXAGON = ("(0^2,0)", "(0,oo)", "(oo,oo^2)", "(oo^2,oo)", "(oo,0)", "(0,0^2)")

# Vertices named by permutations of the size order of (1, |y|, |x|):
# sigma = (s0, s1, s2) means t_{s2} << t_{s1} << t_{s0}.
VERTEX_OF_PERM = {
    (0, 1, 2): "(0^2,0)", (1, 0, 2): "(0,oo)", (0, 2, 1): "(0,0^2)",
    (2, 0, 1): "(oo,0)", (1, 2, 0): "(oo,oo^2)", (2, 1, 0): "(oo^2,oo)",
}


def _blocks(params: Params):
    return {"a": params.alpha[0], "b": params.alpha[1], "g": params.gamma,
            "a'": params.alpha_dash[0], "b'": params.alpha_dash[1],
            "g'": params.gamma_dash}


def _sign_value(tag, eps):
    if tag == "e":
        return eps
    if tag == "-e":
        return -eps
    return tag


@dataclass(frozen=True)
class LocalSolutionLabel:
    """One local series solution at a vertex.

    indices picks an entry of each of the first two lower blocks of the
    transformed system (first n blocks for the multivariate families);
    beta is the resulting exponent shift, signs the prefactor base signs
    relative to the chart, and chart the monomial transforms of x.
    """

    vertex: str
    family: object
    indices: tuple
    beta: tuple
    signs: tuple
    chart: tuple

    def describe(self) -> str:
        return (f"vertex {self.vertex} family {self.family} "
                f"indices {self.indices} exponents {self.beta}")


def family_system(shape: Shape, params: Params, fam: int):
    """Transformed (shape, params, eps) triple for a bivariate family."""
    if shape.n != 2:
        raise ShapeError("the twelve families are bivariate")
    kind, up, lo, _, _ = FAMILY_DATA[fam]
    blk = _blocks(params)
    u1, u2, u3 = (blk[k] for k in up)
    l1, l2, l3 = (blk[k] for k in lo)
    fshape = Shape((len(u1), len(u2)), len(u3), (len(l1), len(l2)), len(l3))
    fparams = Params(fshape, (u1, u2), u3, (l1, l2), l3)
    eps = (1, 1) if kind == "F" else (1, -1)
    return fshape, fparams, eps


def _shifted(fshape, fparams, eps, i1, i2):
    b1 = fparams.alpha_dash[0][i1]
    b2 = fparams.alpha_dash[1][i2]
    s = eps[0] * b1 + eps[1] * b2
    return Params(
        fshape,
        (tuple(v + b1 for v in fparams.alpha[0]),
         tuple(v + b2 for v in fparams.alpha[1])),
        tuple(v + s for v in fparams.gamma),
        (tuple(v - b1 for v in fparams.alpha_dash[0]),
         tuple(v - b2 for v in fparams.alpha_dash[1])),
        tuple(v - s for v in fparams.gamma_dash)), (b1, b2)


def _check_nonresonant(block, name):
    for i in range(len(block)):
        for j in range(i + 1, len(block)):
            if near_integer(block[i] - block[j]) is not None:
                raise ResonanceError(
                    f"{name} entries {i} and {j} differ by an integer")


def _biv_label(shape, params, fam, i1, i2):
    kind, _, _, chart, _ = FAMILY_DATA[fam]
    _, fparams, _ = family_system(shape, params, fam)
    beta = (fparams.alpha_dash[0][i1], fparams.alpha_dash[1][i2])
    raw = _PATH_SIGNS.get(fam, (1, 1))
    eps = shape.epsilon
    signs = tuple(_sign_value(t, eps) for t in raw)
    cm = tuple((_sign_value(c, eps), ex, ey) for c, ex, ey in chart)
    vertex = FAMILY_DATA[fam][4]
    return LocalSolutionLabel(vertex, fam, (i1, i2), beta, signs, cm)


def local_basis(shape: Shape, params: Params, vertex) -> list:
    """All local solution labels at a vertex; rank(shape) of them."""
    if isinstance(vertex, tuple) and shape.n == 2:
        vertex = VERTEX_OF_PERM[vertex]
    if shape.n == 2 and vertex in VERTEX_FAMILIES:
        out = []
        for fam in VERTEX_FAMILIES[vertex]:
            _, fparams, _ = family_system(shape, params, fam)
            _check_nonresonant(fparams.alpha_dash[0],
                               f"family {fam} first lower block")
            _check_nonresonant(fparams.alpha_dash[1],
                               f"family {fam} second lower block")
            for i1 in range(len(fparams.alpha_dash[0])):
                for i2 in range(len(fparams.alpha_dash[1])):
                    lbl = _biv_label(shape, params, fam, i1, i2)
                    out.append(LocalSolutionLabel(vertex, fam, (i1, i2),
                                                  lbl.beta, lbl.signs,
                                                  lbl.chart))
        return out
    if vertex in ("id", "(01)"):
        return _mv_basis(shape, params, vertex)
    raise ShapeError(f"unknown vertex {vertex!r}")


# ---------------------------------------------------------------------------
# Multivariate families at p_id and p_(01).

def _mv_family_system(shape: Shape, params: Params, fam):
    """(shape, params, eps, chart) of a multivariate family.

    fam is "F", "F01", "G1", "G1_01" or ("G", k) with 2 <= k <= n.  Charts
    are monomial maps given as tuples (c, powers) with c in {1, "e"}.
    """
    n = shape.n
    al, ald = params.alpha, params.alpha_dash

    def mono(c, pows):
        return (c, tuple(pows))

    def e(j, v=1):
        pw = [0] * n
        pw[j] = v
        return pw

    if fam == "F":
        chart = tuple(mono(1, e(j)) for j in range(n))
        return shape, params, (1,) * n, chart
    if fam == "F01":
        up = (params.gamma_dash,) + al[1:]
        lo = (params.gamma,) + ald[1:]
        fshape = Shape(tuple(len(b) for b in up), len(ald[0]),
                       tuple(len(b) for b in lo), len(al[0]))
        fparams = Params(fshape, up, ald[0], lo, al[0])
        pw0 = e(0, -1)
        chart = (mono(1, pw0),) + tuple(
            mono("e", [v - w for v, w in zip(e(j), e(0))]) for j in range(1, n))
        return fshape, fparams, (1,) * n, chart
    if fam == "G1":
        up = (params.gamma,) + al[1:]
        lo = (params.gamma_dash,) + ald[1:]
        fshape = Shape(tuple(len(b) for b in up), len(al[0]),
                       tuple(len(b) for b in lo), len(ald[0]))
        fparams = Params(fshape, up, al[0], lo, ald[0])
        eps = (1,) + (-1,) * (n - 1)
        chart = (mono(1, e(0)),) + tuple(
            mono(1, [v - w for v, w in zip(e(j), e(0))]) for j in range(1, n))
        return fshape, fparams, eps, chart
    if fam == "G1_01":
        up = (ald[0],) + al[1:]
        lo = (al[0],) + ald[1:]
        fshape = Shape(tuple(len(b) for b in up), shape.r_dash,
                       tuple(len(b) for b in lo), shape.r)
        fparams = Params(fshape, up, params.gamma_dash, lo, params.gamma)
        eps = (1,) + (-1,) * (n - 1)
        chart = (mono(1, e(0, -1)),) + tuple(
            mono("e", e(j)) for j in range(1, n))
        return fshape, fparams, eps, chart
    kind, k = fam
    if kind != "G" or not 2 <= k <= n:
        raise ShapeError(f"unknown family {fam!r}")
    k0 = k - 1
    up = tuple(ald[j] for j in range(k0)) + (params.gamma,) + al[k0 + 1:]
    lo = tuple(al[j] for j in range(k0)) + (params.gamma_dash,) + ald[k0 + 1:]
    fshape = Shape(tuple(len(b) for b in up), len(al[k0]),
                   tuple(len(b) for b in lo), len(ald[k0]))
    fparams = Params(fshape, up, al[k0], lo, ald[k0])
    eps = (1,) * k + (-1,) * (n - k)
    chart = tuple(mono("e", [v - w for v, w in zip(e(k0), e(j))])
                  for j in range(k0)) + (mono(1, e(k0)),) + tuple(
        mono(1, [v - w for v, w in zip(e(j), e(k0))])
        for j in range(k0 + 1, n))
    return fshape, fparams, eps, chart


def _mv_path_signs(fam, n, eps_val):
    """Prefactor base signs on the canonical path (x1 < 0, other x small > 0)."""
    me = -eps_val
    if fam == "F":
        return (-1,) + (1,) * (n - 1)
    if fam == "F01":
        return (-1,) + (me,) * (n - 1)
    if fam == "G1":
        return (-1,) * n
    if fam == "G1_01":
        return (-1,) + (eps_val,) * (n - 1)
    k = fam[1]
    return (me,) + (eps_val,) * (k - 2) + (1,) * (n - k + 1)


def _mv_basis(shape, params, vertex):
    n = shape.n
    fams = (["F01", "G1_01"] if vertex == "(01)" else ["F", "G1"])
    fams += [("G", k) for k in range(2, n + 1)]
    out = []
    for fam in fams:
        fshape, fparams, eps, chart = _mv_family_system(shape, params, fam)
        for j, blk in enumerate(fparams.alpha_dash):
            _check_nonresonant(blk, f"family {fam} lower block {j}")
        ranges = [range(len(b)) for b in fparams.alpha_dash]
        signs = _mv_path_signs(fam, n, shape.epsilon)
        for idx in product(*ranges):
            beta = tuple(fparams.alpha_dash[j][idx[j]] for j in range(n))
            cm = tuple((_sign_value(c, shape.epsilon), pw) for c, pw in chart)
            out.append(LocalSolutionLabel(vertex, fam, idx, beta, signs, cm))
    return out


def _mv_shifted(fshape, fparams, eps, idx):
    beta = tuple(fparams.alpha_dash[j][idx[j]] for j in range(fshape.n))
    s = sum(e * b for e, b in zip(eps, beta))
    return Params(
        fshape,
        tuple(tuple(v + b for v in blk)
              for blk, b in zip(fparams.alpha, beta)),
        tuple(v + s for v in fparams.gamma),
        tuple(tuple(v - b for v in blk)
              for blk, b in zip(fparams.alpha_dash, beta)),
        tuple(v - s for v in fparams.gamma_dash)), beta


def label_series(shape: Shape, params: Params, label: LocalSolutionLabel,
                 N: int = 40):
    """Truncated series of a labelled solution in its own chart."""
    if isinstance(label.family, int):
        fshape, fparams, eps = family_system(shape, params, label.family)
        shifted, beta = _shifted(fshape, fparams, eps, *label.indices)
    else:
        fshape, fparams, eps, _ = _mv_family_system(shape, params,
                                                    label.family)
        shifted, beta = _mv_shifted(fshape, fparams, eps, label.indices)
    return series_G(fshape, shifted, eps, N, beta=beta, signs=label.signs)


def _chart_values(label, point, eps_val):
    out = []
    for spec in label.chart:
        if len(spec) == 3:
            c, ex, ey = spec
            out.append(c * point[0] ** ex * point[1] ** ey)
        else:
            c, pows = spec
            v = complex(c)
            for xj, pw in zip(point, pows):
                if pw:
                    v *= complex(xj) ** pw
            out.append(v)
    return tuple(out)


def eval_local(shape: Shape, params: Params, label: LocalSolutionLabel,
               point, N: int = 40, check_convergence: bool = True):
    """Value of a labelled solution at a point of the original coordinates."""
    s = label_series(shape, params, label, N)
    xi = _chart_values(label, tuple(complex(v) for v in point),
                       shape.epsilon)
    return eval_series(s, xi, check_convergence=check_convergence)


# ---------------------------------------------------------------------------
# Connection coefficients.

def boundary_system(shape: Shape, params: Params, fixed) -> OneVarSystem:
    """One-variable system governing the connection block at a fixed index.

    For n = 2, fixed is the index i of an entry of alpha'; the system lives
    in the second variable.  For n >= 3, fixed = (i_2, ..., i_n) picks one
    entry of each of alpha'_2, ..., alpha'_n and the system lives in x_1.
    """
    if shape.n == 2 and isinstance(fixed, int):
        ai = params.alpha_dash[0][fixed]
        up = tuple(params.alpha[1]) + tuple(g + ai for g in params.gamma)
        lo = tuple(params.alpha_dash[1]) + tuple(g - ai
                                                 for g in params.gamma_dash)
        return OneVarSystem(up, lo)
    fixed = tuple(fixed)
    if len(fixed) != shape.n - 1:
        raise ShapeError("fixed index tuple must pick one entry per "
                         "variable after the first")
    delta = sum(params.alpha_dash[j + 1][fixed[j]]
                for j in range(shape.n - 1))
    up = tuple(params.alpha[0]) + tuple(g + delta for g in params.gamma)
    lo = tuple(params.alpha_dash[0]) + tuple(g - delta
                                             for g in params.gamma_dash)
    return OneVarSystem(up, lo)


def connection_coefficients(shape: Shape, params: Params, fixed):
    """The four Gamma-product coefficient families a, b, c, d of the block
    at a fixed exponent index, as matrices indexed like the local bases."""
    sys = boundary_system(shape, params, fixed)
    if shape.n == 2 and isinstance(fixed, int):
        q, r = shape.p[1], shape.r
        qd, rd = shape.p_dash[1], shape.r_dash
    else:
        q, r = shape.p[0], shape.r
        qd, rd = shape.p_dash[0], shape.r_dash
    a = [[connection_coeff(sys, j, q + k) for k in range(r)]
         for j in range(qd)]
    b = [[connection_coeff(sys, j, m) for m in range(q)] for j in range(qd)]
    c = [[connection_coeff(sys, qd + k, q + m) for m in range(r)]
         for k in range(rd)]
    d = [[connection_coeff(sys, qd + k, j) for j in range(q)]
         for k in range(rd)]
    return {"a": a, "b": b, "c": c, "d": d, "system": sys}


@dataclass
class ConnectionMatrix:
    source: str
    target: str
    path: str
    row_labels: list
    col_labels: list
    entries: list

    @property
    def size(self):
        return len(self.row_labels)

    def entry(self, i, j):
        return self.entries[i][j]

    def block_diagonal_over_first_index(self) -> bool:
        """Nonzero entries connect labels sharing the preserved exponent."""
        for i, rl in enumerate(self.row_labels):
            for j, cl in enumerate(self.col_labels):
                if abs(self.entries[i][j]) > 0 and rl.family != 3 and \
                        cl.family != 3 and rl.indices[0] != cl.indices[0]:
                    return False
        return True


def connection_matrix(shape: Shape, params: Params) -> ConnectionMatrix:
    """Canonical bivariate connection matrix from (0^2,0) to (0,oo)."""
    if shape.n != 2:
        raise ShapeError("use transport for n > 2")
    rows = local_basis(shape, params, "(0^2,0)")
    cols = local_basis(shape, params, "(0,oo)")
    col_pos = {(l.family, l.indices): j for j, l in enumerate(cols)}
    pd = shape.p_dash[0]
    ent = [[0j for _ in cols] for _ in rows]
    coeffs = [connection_coefficients(shape, params, i) for i in range(pd)]
    for ri, lbl in enumerate(rows):
        if lbl.family == 1:
            i, j = lbl.indices
            cc = coeffs[i]
            for k in range(shape.r):
                ent[ri][col_pos[(5, (i, k))]] = cc["a"][j][k]
            for m in range(shape.p[1]):
                ent[ri][col_pos[(7, (i, m))]] = cc["b"][j][m]
        elif lbl.family == 9:
            i, k = lbl.indices
            cc = coeffs[i]
            for m in range(shape.r):
                ent[ri][col_pos[(5, (i, m))]] = cc["c"][k][m]
            for j in range(shape.p[1]):
                ent[ri][col_pos[(7, (i, j))]] = cc["d"][k][j]
        else:
            ent[ri][col_pos[(3, lbl.indices)]] = 1.0 + 0j
    return ConnectionMatrix("(0^2,0)", "(0,oo)", "C0", rows, cols, ent)


# ---------------------------------------------------------------------------
# Transport between adjacent vertices.

_VERTEX_ACTION = {
    "s": {"(0^2,0)": "(0,0^2)", "(0,0^2)": "(0^2,0)",
          "(0,oo)": "(oo,0)", "(oo,0)": "(0,oo)",
          "(oo,oo^2)": "(oo^2,oo)", "(oo^2,oo)": "(oo,oo^2)"},
    "i": {"(0^2,0)": "(oo^2,oo)", "(oo^2,oo)": "(0^2,0)",
          "(0,oo)": "(oo,0)", "(oo,0)": "(0,oo)",
          "(0,0^2)": "(oo,oo^2)", "(oo,oo^2)": "(0,0^2)"},
    "t": {"(0^2,0)": "(0,oo)", "(0,oo)": "(0^2,0)",
          "(0,0^2)": "(oo,oo^2)", "(oo,oo^2)": "(0,0^2)",
          "(oo,0)": "(oo^2,oo)", "(oo^2,oo)": "(oo,0)"},
}


def _apply_generator(shape, params, gen):
    if gen == "s":
        return shape.permuted((1, 0)), params.permuted((1, 0))
    if gen == "i":
        return shape.swap_rows(), params.swap_rows()
    # t: (x, y) -> (x/y, 1/y), the transform behind family 5
    al, bl, gl = params.alpha[0], params.alpha[1], params.gamma
    ald, bld, gld = (params.alpha_dash[0], params.alpha_dash[1],
                     params.gamma_dash)
    ns = Shape((len(al), len(gld)), len(bld), (len(ald), len(gl)), len(bl))
    return ns, Params(ns, (al, gld), bld, (ald, gl), bl)


def _identity_matrix(shape, params, vertex):
    labels = local_basis(shape, params, vertex)
    ent = [[1.0 + 0j if i == j else 0j for j in range(len(labels))]
           for i in range(len(labels))]
    return ConnectionMatrix(str(vertex), str(vertex), "trivial",
                            labels, labels, ent)


def _invert_entries(entries):
    import numpy as np
    inv = np.linalg.inv(np.array(entries, dtype=complex))
    return [[inv[i, j] for j in range(inv.shape[1])]
            for i in range(inv.shape[0])]


def transport(shape: Shape, params: Params, sigma1, sigma2):
    """Connection matrix between two adjacent vertices.

    Vertices may be given by name or, for n = 2, by a size-order
    permutation of (1, |y|, |x|).  The pair is mapped onto the canonical
    ((0^2,0), (0,oo)) pair by the hexagon symmetries; reversed orientation
    returns the inverse matrix.  For n >= 3 only the canonical pair
    ("id", "(01)") and its reverse are supported.
    """
    def name(v):
        if isinstance(v, tuple) and shape.n == 2:
            return VERTEX_OF_PERM[tuple(v)]
        return v

    v1, v2 = name(sigma1), name(sigma2)
    if v1 == v2:
        return _identity_matrix(shape, params, v1)
    if shape.n != 2:
        if (v1, v2) == ("id", "(01)"):
            return _mv_connection_matrix(shape, params)
        if (v1, v2) == ("(01)", "id"):
            m = _mv_connection_matrix(shape, params)
            return ConnectionMatrix(v1, v2, "C0 reversed", m.col_labels,
                                    m.row_labels, _invert_entries(m.entries))
        raise AdjacencyError(f"unsupported vertex pair ({v1}, {v2})")
    if v1 not in HEXAGON or v2 not in HEXAGON:
        raise ShapeError(f"unknown vertex pair ({v1}, {v2})")
    k1, k2 = HEXAGON.index(v1), HEXAGON.index(v2)
    if (k1 - k2) % 6 not in (1, 5):
        raise AdjacencyError(f"vertices {v1} and {v2} are not adjacent")
    # breadth-first search for a word in the generators landing the ordered
    # pair on the canonical edge, possibly reversed
    start = (v1, v2)
    canon = ("(0^2,0)", "(0,oo)")
    seen = {start: ""}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        if cur == canon or cur == canon[::-1]:
            word, reversed_ = seen[cur], cur != canon
            break
        for gen in "sit":
            nxt = (_VERTEX_ACTION[gen][cur[0]], _VERTEX_ACTION[gen][cur[1]])
            if nxt not in seen:
                seen[nxt] = seen[cur] + gen
                queue.append(nxt)
    gs, gp = shape, params
    for gen in word:
        gs, gp = _apply_generator(gs, gp, gen)
    m = connection_matrix(gs, gp)
    if reversed_:
        return ConnectionMatrix(v1, v2, f"C0 via '{word}' reversed",
                                m.col_labels, m.row_labels,
                                _invert_entries(m.entries))
    return ConnectionMatrix(v1, v2, f"C0 via '{word}'", m.row_labels,
                            m.col_labels, m.entries)


def _mv_connection_matrix(shape, params):
    rows = local_basis(shape, params, "id")
    cols = local_basis(shape, params, "(01)")
    col_pos = {(l.family, l.indices): j for j, l in enumerate(cols)}
    ent = [[0j for _ in cols] for _ in rows]
    tails = {}
    for ri, lbl in enumerate(rows):
        if lbl.family == "F":
            idx = lbl.indices
            rest = idx[1:]
            if rest not in tails:
                tails[rest] = connection_coefficients(shape, params, rest)
            cc = tails[rest]
            for k in range(shape.r):
                ent[ri][col_pos[("F01", (k,) + rest)]] = cc["a"][idx[0]][k]
            for m in range(shape.p[0]):
                ent[ri][col_pos[("G1_01", (m,) + rest)]] = cc["b"][idx[0]][m]
        elif lbl.family == "G1":
            idx = lbl.indices
            rest = idx[1:]
            if rest not in tails:
                tails[rest] = connection_coefficients(shape, params, rest)
            cc = tails[rest]
            for m in range(shape.r):
                ent[ri][col_pos[("F01", (m,) + rest)]] = cc["c"][idx[0]][m]
            for j in range(shape.p[0]):
                ent[ri][col_pos[("G1_01", (j,) + rest)]] = cc["d"][idx[0]][j]
        else:
            ent[ri][col_pos[(lbl.family, lbl.indices)]] = 1.0 + 0j
    return ConnectionMatrix("id", "(01)", "C0", rows, cols, ent)


# ---------------------------------------------------------------------------
# Numeric verification of the connection formulas.

class _PowerLocal:
    """f(y) = sum_k c_k (s*y)^{mu+k}; the 0-side analogue of _PowerTail."""

    def __init__(self, sign, mu, coeffs):
        self.sign = sign
        self.mu = mu
        self.c = list(coeffs)

    def derivative(self):
        out = _PowerLocal(self.sign, self.mu - 1, [])
        out.c = [ck * self.sign * (self.mu + k)
                 for k, ck in enumerate(self.c)]
        return out

    def eval(self, y):
        w = self.sign * complex(y)
        lw = cmath.log(w)
        return sum(ck * cmath.exp((self.mu + k) * lw)
                   for k, ck in enumerate(self.c) if ck != 0)


def _layer_value(kind, mu, coeffs, sys_m, y):
    """Value at y of one x-order layer, by direct series or continuation."""
    if kind == "recip":
        tail = _PowerTail(-1, mu, coeffs)
        if abs(y) >= 1.6:
            return tail.eval(y)
        anchor = -2.0
    else:
        tail = _PowerLocal(-1, mu, coeffs)
        if abs(y) <= 0.55:
            return tail.eval(y)
        anchor = -0.5
    derivs = []
    t = tail
    for _ in range(sys_m.p):
        derivs.append(t.eval(anchor))
        t = t.derivative()
    return continue_derivatives(sys_m, anchor, derivs, y)


def _float_params(params):
    return Params(params.shape,
                  tuple(tuple(float(v) for v in b) for b in params.alpha),
                  tuple(float(v) for v in params.gamma),
                  tuple(tuple(float(v) for v in b)
                        for b in params.alpha_dash),
                  tuple(float(v) for v in params.gamma_dash))


def verify_connection(shape: Shape, params: Params, point, N: int = 80,
                      orders: int = 7) -> float:
    """Max relative residual of the connection formula at a path point.

    point = (x_1, ..., x_n) with x_1 negative real and the remaining
    coordinates small and positive, as on the canonical continuation path.
    Both sides are evaluated order by order in the small coordinates; the
    coefficient functions of the large coordinate are local solutions of
    one-variable boundary systems and are continued by Taylor steps when
    their series do not converge at x_1.
    """
    if len(point) != shape.n:
        raise ShapeError("point dimension mismatch")
    if not (point[0].real if isinstance(point[0], complex) else point[0]) < 0:
        raise ConvergenceError("x_1 must be negative real on the path")
    if any(not 0 < v < 1 for v in point[1:]):
        raise ConvergenceError("x_2, ..., x_n must lie in (0, 1)")
    params = _float_params(params)
    if shape.n == 2:
        return _verify_biv(shape, params, point, N, orders)
    return _verify_mv(shape, params, point, N, orders)


def _verify_biv(shape, params, point, N, orders):
    x1, x2 = point
    x, y = float(x2), float(x1)   # section coordinates: 0 < x << -y
    eps = shape.epsilon
    q, r = shape.p[1], shape.r
    qd, rd = shape.p_dash[1], shape.r_dash
    ald = params.alpha_dash[0]
    bl, bld = params.alpha[1], params.alpha_dash[1]
    gl, gld = params.gamma, params.gamma_dash
    worst = 0.0
    for i in range(shape.p_dash[0]):
        cc = connection_coefficients(shape, params, i)
        ai = ald[i]
        sys_m = [OneVarSystem(tuple(bl) + tuple(g + ai + m for g in gl),
                              tuple(bld) + tuple(g - ai - m for g in gld))
                 for m in range(orders)]

        def total(fam, i2, mu_of, fac):
            lbl = _biv_label(shape, params, fam, i, i2)
            s = label_series(shape, params, lbl, N)
            acc = 0j
            for m in range(orders):
                coeffs = [fac(m, m2) * complex(s.coeff((m, m2)))
                          for m2 in range(N - m + 1)]
                kind = "recip" if fam in (5, 7) else "direct"
                v = _layer_value(kind, mu_of(m), coeffs, sys_m[m], y)
                acc += principal_power(x, ai) * x ** m * v
            return acc

        rhs5 = [total(5, k, lambda m, k=k: ai + gl[k] + m,
                      lambda m, m2: (-eps) ** m * (-1) ** m2)
                for k in range(r)]
        rhs7 = [total(7, j, lambda m, j=j: bl[j],
                      lambda m, m2: (-eps) ** m2) for j in range(q)]
        scale = max([1.0] + [abs(v) for v in rhs5 + rhs7])
        for j in range(qd):
            lhs = total(1, j, lambda m, j=j: bld[j],
                        lambda m, m2: (-1) ** m2)
            rhs = sum(cc["a"][j][k] * rhs5[k] for k in range(r)) + \
                sum(cc["b"][j][m] * rhs7[m] for m in range(q))
            worst = max(worst, abs(lhs - rhs) / scale)
        for k in range(rd):
            lhs = total(9, k, lambda m, k=k: gld[k] - ai - m,
                        lambda m, m2: (-eps) ** (m + m2))
            rhs = sum(cc["c"][k][m] * rhs5[m] for m in range(r)) + \
                sum(cc["d"][k][j] * rhs7[j] for j in range(q))
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _verify_mv(shape, params, point, N, orders):
    n = shape.n
    x1 = float(point[0])
    small = [float(v) for v in point[1:]]
    eps = shape.epsilon
    al1, ald1 = params.alpha[0], params.alpha_dash[0]
    gl, gld = params.gamma, params.gamma_dash
    mcut = min(orders, 3)
    worst = 0.0
    rest_ranges = [range(len(b)) for b in params.alpha_dash[1:]]
    layer_idx = [m for m in product(range(mcut + 1), repeat=n - 1)
                 if sum(m) <= mcut]
    for rest in product(*rest_ranges):
        cc = connection_coefficients(shape, params, rest)
        delta = sum(params.alpha_dash[j + 1][rest[j]] for j in range(n - 1))
        sys_m = {tm: OneVarSystem(
            tuple(al1) + tuple(g + delta + tm for g in gl),
            tuple(ald1) + tuple(g - delta - tm for g in gld))
            for tm in range(mcut + 1)}
        small_pw = {}
        for M in layer_idx:
            v = 1.0
            for j in range(n - 1):
                b = params.alpha_dash[j + 1][rest[j]]
                v *= principal_power(small[j], b).real * small[j] ** M[j]
            small_pw[M] = v

        def total(fam, first, mu_of, fac, kind):
            lbl_idx = (first,) + rest
            lbl = [l for l in local_basis(shape, params,
                                          "(01)" if fam in ("F01", "G1_01")
                                          else "id")
                   if l.family == fam and l.indices == lbl_idx][0]
            s = label_series(shape, params, lbl, N)
            acc = 0j
            for M in layer_idx:
                tm = sum(M)
                coeffs = [fac(M, m1) * complex(s.coeff((m1,) + M))
                          for m1 in range(N - tm + 1)]
                acc += small_pw[M] * _layer_value(kind, mu_of(M), coeffs,
                                                  sys_m[tm], x1)
            return acc

        rhs_f = [total("F01", k,
                       lambda M, k=k: gl[k] + delta + sum(M),
                       lambda M, m1: (-eps) ** sum(M) * (-1) ** m1, "recip")
                 for k in range(shape.r)]
        rhs_g = [total("G1_01", m,
                       lambda M, m=m: al1[m],
                       lambda M, m1: eps ** sum(M) * (-1) ** m1, "recip")
                 for m in range(shape.p[0])]
        scale = max([1.0] + [abs(v) for v in rhs_f + rhs_g])
        for i1 in range(shape.p_dash[0]):
            lhs = total("F", i1, lambda M, i1=i1: ald1[i1],
                        lambda M, m1: (-1) ** m1, "direct")
            rhs = sum(cc["a"][i1][k] * rhs_f[k] for k in range(shape.r)) + \
                sum(cc["b"][i1][m] * rhs_g[m] for m in range(shape.p[0]))
            worst = max(worst, abs(lhs - rhs) / scale)
        for k in range(shape.r_dash):
            lhs = total("G1", k,
                        lambda M, k=k: gld[k] - delta - sum(M),
                        lambda M, m1: (-1) ** (sum(M) + m1), "direct")
            rhs = sum(cc["c"][k][m] * rhs_f[m] for m in range(shape.r)) + \
                sum(cc["d"][k][j] * rhs_g[j] for j in range(shape.p[0]))
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# ---------------------------------------------------------------------------
# Classical two-variable identities used as cross checks.

def _eval_f(p, q, r, pd, qd, rd, alpha, beta, gamma, alpha_d, beta_d,
            gamma_d, x, y, N):
    sh = Shape((p, q), r, (pd, qd), rd)
    pr = Params(sh, (tuple(alpha), tuple(beta)), tuple(gamma),
                (tuple(alpha_d), tuple(beta_d)), tuple(gamma_d))
    s = series_G(sh, pr, (1, 1), N)
    v, _ = eval_series(s, (complex(x), complex(y)), check_convergence=False)
    return v


def _f1(a, b, g, gd, x, y, N):
    # F(alpha, beta, gamma | 0, 0, gamma')
    return _eval_f(1, 1, 1, 1, 1, 1, (a,), (b,), (g,), (0,), (0,), (gd,),
                   x, y, N)


def _f2(a, b, bd, c, cd, x, y, N):
    # Appell F_2(a; b, b'; c, c')
    return _eval_f(1, 1, 1, 2, 2, 0, (b,), (bd,), (a,), (0, 1 - c),
                   (0, 1 - cd), (), x, y, N)


def _fp(a, b, bd, c, cd, x, y, N):
    """Olsson's F_P, by its double series in x and 1 - y."""
    from .param_core import pochhammer as ph
    total = 0j
    u = complex(x)
    w = 1 - complex(y)
    for m in range(N + 1):
        for nn in range(N + 1 - m):
            from math import factorial
            t = (ph(a, m + nn) * ph(a - cd + 1, m) * ph(b, m) * ph(bd, nn)
                 / (ph(a + bd - cd + 1, m + nn) * ph(c, m)
                    * factorial(m) * factorial(nn)))
            total += t * u ** m * w ** nn
    return total


def kummer_identities_check(params=None, point=(0.2, 0.1), N=36) -> dict:
    """Residuals of the classical fractional-linear identities.

    params may override the default generic parameter pack as a dict with
    keys "f1" (alpha, beta, gamma, gamma'), "f2" and "olsson"
    (a, b, b', c, c').
    """
    params = params or {}
    x, y = float(point[0]), float(point[1])
    out = {}
    a, b, g, gd = params.get("f1", (0.3, 0.45, 0.27, 0.61))
    lhs = _f1(a, b, g, gd, x, y, N)
    rhs = ((1 - x) ** -a * (1 - y) ** -b
           * _f1(a, b, 1 - g - gd, gd, x / (x - 1), y / (y - 1), N))
    out["f1_two_factor"] = abs(lhs - rhs)
    rhs = (1 - y) ** -g * _f1(a, 1 - a - b - gd, g, gd,
                              (y - x) / (y - 1), y / (y - 1), N)
    out["f1_one_factor"] = abs(lhs - rhs)
    a, b, bd, c, cd = params.get("f2", (0.35, 0.21, 0.44, 1.31, 1.17))
    lhs = _f2(a, b, bd, c, cd, x, y, N)
    rhs = (1 - y) ** -a * _f2(a, b, cd - bd, c, cd,
                              x / (1 - y), y / (y - 1), N)
    out["f2_reflect_y"] = abs(lhs - rhs)
    rhs = (1 - x) ** -a * _f2(a, c - b, bd, c, cd,
                              x / (x - 1), y / (1 - x), N)
    out["f2_reflect_x"] = abs(lhs - rhs)
    rhs = (1 - x - y) ** -a * _f2(a, c - b, cd - bd, c, cd,
                                  x / (x + y - 1), y / (x + y - 1), N)
    out["f2_reflect_xy"] = abs(lhs - rhs)
    a, b, bd, c, cd = params.get("olsson", (0.23, 0.41, 0.37, 1.29, 1.53))
    xo, yo = 0.08, 0.92
    lhs = _fp(a, b, bd, c, cd, xo, yo, N)
    sh = Shape((1, 0), 2, (2, 1), 1)
    pr = Params(sh, ((b,), ()), (a, a - cd + 1), ((1 - c, 0), (0,)),
                (cd - a - bd,))
    s = series_G(sh, pr, (1, 1), N)
    v, _ = eval_series(s, (xo / yo, 1 - 1 / yo), check_convergence=False)
    out["olsson"] = abs(lhs - yo ** -a * v)
    return out
