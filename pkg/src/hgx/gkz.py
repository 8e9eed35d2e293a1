"""Toric and secondary-fan combinatorics of the hypergeometric systems.

A shape determines a lattice configuration: the index set {alpha_ij,
gamma_k, alpha'_ij, gamma'_k}, a rank-n sublattice L of M = Z^N, the
projection A : M -> M/L and its Gale dual of b-vectors.  This module
builds the configuration, the binomial generators of the toric ideal
with a Groebner certificate, the regular triangulation attached to the
term order, the secondary fan with its permutohedron adjacency, and the
facet-wise irreducibility test.  A lift check verifies the monomial
correspondence between series solutions and the associated torus
functions.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from .errors import ConvergenceError, DegenerateShape, ShapeError
from .param_core import Shape, is_exact, near_integer
from .series import coeff_F

__all__ = [
    "LatticeConfig",
    "ToricBinomial",
    "Triangulation",
    "Cone",
    "index_set",
    "build_config",
    "toric_generators",
    "grobner_check",
    "regular_triangulation",
    "triangulation_unimodular",
    "secondary_fan",
    "cone_lookup",
    "cones_adjacent",
    "adjacency_graph",
    "cofacets",
    "facet_certificate",
    "irreducible",
    "nonresonant",
    "gkz_lift_check",
]


def index_set(shape: Shape):
    """Index labels in lattice order: alpha blocks, gamma, alpha'
    blocks, gamma'.  Labels are ("a", i, j), ("g", k), ("ad", i, j),
    ("gd", k) with 1-based positions."""
    labels = []
    for i in range(shape.n):
        labels += [("a", i + 1, j + 1) for j in range(shape.p[i])]
    labels += [("g", k + 1) for k in range(shape.r)]
    for i in range(shape.n):
        labels += [("ad", i + 1, j + 1) for j in range(shape.p_dash[i])]
    labels += [("gd", k + 1) for k in range(shape.r_dash)]
    return tuple(labels)


def _b_vector(label, n):
    kind = label[0]
    if kind == "a":
        return tuple(-1 if i == label[1] - 1 else 0 for i in range(n))
    if kind == "ad":
        return tuple(1 if i == label[1] - 1 else 0 for i in range(n))
    if kind == "g":
        return (-1,) * n
    return (1,) * n


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice data of a shape: index labels, the rank-n sublattice L
    (rows), the integer projection A : M -> M/L (rows, a lattice basis
    of the annihilator of L), and the Gale b-vectors per label."""

    shape: Shape
    labels: tuple
    L_basis: tuple
    A: tuple
    b: tuple

    @property
    def size(self):
        return len(self.labels)

    @property
    def quotient_rank(self):
        return len(self.A)

    def column(self, pos):
        return tuple(row[pos] for row in self.A)


def _unit(n, pos, val=1):
    v = [0] * n
    v[pos] = val
    return v


def build_config(shape: Shape) -> LatticeConfig:
    """Lattice configuration of a shape; exact duality verified.

    The sublattice generator for variable i carries +1 on the alpha_i
    and gamma entries and -1 on the alpha'_i and gamma' entries.  The
    projection rows are in-block differences plus one pairing vector
    per variable and one gamma-type closing vector; that they form a
    lattice basis of the annihilator is certified by unit invariant
    factors (so M/L is torsion-free).
    """
    if not shape.condition_F:
        raise ShapeError("lattice configuration needs condition (F)")
    labels = index_set(shape)
    pos = {lab: t for t, lab in enumerate(labels)}
    N = len(labels)
    n = shape.n
    L_rows = []
    for i in range(n):
        row = [0] * N
        for lab in labels:
            if lab[0] in ("a", "g"):
                sign = 1
            else:
                sign = -1
            if lab[0] in ("g", "gd") or lab[1] == i + 1:
                row[pos[lab]] = sign
        L_rows.append(tuple(row))

    rows = []
    for i in range(n):
        for j in range(1, shape.p[i]):
            rows.append(_sum_units(N, [pos[("a", i + 1, j + 1)]],
                                   [pos[("a", i + 1, 1)]]))
        for j in range(1, shape.p_dash[i]):
            rows.append(_sum_units(N, [pos[("ad", i + 1, j + 1)]],
                                   [pos[("ad", i + 1, 1)]]))
    for k in range(1, shape.r):
        rows.append(_sum_units(N, [pos[("g", k + 1)]], [pos[("g", 1)]]))
    for k in range(1, shape.r_dash):
        rows.append(_sum_units(N, [pos[("gd", k + 1)]], [pos[("gd", 1)]]))
    for i in range(n):
        if shape.p[i] and shape.p_dash[i]:
            rows.append(_sum_units(N, [pos[("a", i + 1, 1)],
                                       pos[("ad", i + 1, 1)]], []))
    if shape.r and shape.r_dash:
        rows.append(_sum_units(N, [pos[("g", 1)], pos[("gd", 1)]], []))
    if shape.r_dash:
        plus = [pos[("gd", 1)]] + [pos[("a", i + 1, 1)] for i in range(n)]
        rows.append(_sum_units(N, plus, []))
    elif shape.r:
        plus = [pos[("g", 1)]] + [pos[("ad", i + 1, 1)] for i in range(n)]
        rows.append(_sum_units(N, plus, []))

    if len(rows) != N - n:
        raise ShapeError("quotient rank mismatch; degenerate blocks")
    amat = Matrix(rows)
    if any(f != 1 for f in invariant_factors(amat)):
        raise ShapeError("projection rows are not a lattice basis")
    if any(f != 1 for f in invariant_factors(Matrix(L_rows))):
        raise ShapeError("M/L has torsion")
    # duality with the Gale configuration: A annihilates the b-columns
    b = tuple(_b_vector(lab, n) for lab in labels)
    for row in rows:
        for i in range(n):
            if sum(x * b[t][i] for t, x in enumerate(row)) != 0:
                raise ShapeError("Gale duality violated")
    return LatticeConfig(shape, labels, tuple(L_rows), tuple(
        tuple(r) for r in rows), b)


def _sum_units(N, plus, minus):
    row = [0] * N
    for t in plus:
        row[t] += 1
    for t in minus:
        row[t] -= 1
    return tuple(row)


@dataclass(frozen=True)
class ToricBinomial:
    """Binomial z^{u_plus} - z^{u_minus} with A.u_plus = A.u_minus;
    u_plus is the underlined (leading) monomial."""

    name: str
    u_plus: tuple
    u_minus: tuple


def toric_generators(shape: Shape):
    """The n + n(n-1)/2 binomial generators g_i, g_ij of the toric
    ideal, with the primed monomials leading."""
    labels = index_set(shape)
    pos = {lab: t for t, lab in enumerate(labels)}
    N = len(labels)
    n = shape.n

    def block(kind, i=None):
        return [pos[lab] for lab in labels
                if lab[0] == kind and (i is None or lab[1] == i)]

    gens = []
    for i in range(1, n + 1):
        gens.append(ToricBinomial(
            "g_%d" % i,
            _sum_units(N, block("ad", i) + block("gd"), []),
            _sum_units(N, block("a", i) + block("g"), []),
        ))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            gens.append(ToricBinomial(
                "g_%d%d" % (i, j),
                _sum_units(N, block("ad", i) + block("a", j), []),
                _sum_units(N, block("ad", j) + block("a", i), []),
            ))
    return gens


def _term_weights(shape: Shape):
    """Weight vector making every underlined monomial strictly heavier
    than its tail.

    A closed-form two-level vector covers the standing case; degenerate
    blocks fall back to a small rational feasibility problem whose
    solution is rescaled to integers and re-verified exactly.
    """
    labels = index_set(shape)
    n = shape.n
    base = max(shape.p_dash + (1,)) + 1
    big = base ** (n + 1) * (n + sum(shape.p) + shape.r + 1)
    w = []
    for lab in labels:
        if lab[0] == "ad":
            w.append(big * base ** (n - lab[1]))
        elif lab[0] == "gd":
            w.append(big * base ** n)
        elif lab[0] == "a":
            w.append(lab[1])
        else:
            w.append(0)
    gens = [g for g in toric_generators(shape) if g.u_plus != g.u_minus]
    if _weights_valid(w, gens):
        return tuple(w)
    w = _weights_by_lp(len(labels), gens)
    if w is None or not _weights_valid(w, gens):
        raise ShapeError("no compatible term order found")
    return tuple(w)


def _weights_valid(w, gens):
    return all(
        sum(wi * (up - um) for wi, up, um in zip(w, g.u_plus, g.u_minus)) > 0
        for g in gens)


def _weights_by_lp(N, gens):
    from scipy.optimize import linprog
    rows = [[-(up - um) for up, um in zip(g.u_plus, g.u_minus)]
            for g in gens]
    res = linprog([1.0] * N, A_ub=rows, b_ub=[-1.0] * len(gens),
                  bounds=[(0, None)] * N, method="highs")
    if not res.success:
        return None
    return [int(round(x * 1000)) for x in res.x]


def _mono_key(w, m):
    # weight, then graded reverse lexicographic
    return (sum(wi * u for wi, u in zip(w, m)), sum(m),
            tuple(-u for u in reversed(m)))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _reduce(poly, gens, w):
    """Multivariate division remainder of a {monomial: coeff} dict."""
    poly = dict(poly)
    while True:
        target = None
        for m in sorted(poly, key=lambda m: _mono_key(w, m), reverse=True):
            if poly[m] == 0:
                continue
            for g in gens:
                if _divides(g.u_plus, m):
                    target = (m, g)
                    break
            if target:
                break
        if target is None:
            return {m: c for m, c in poly.items() if c != 0}
        m, g = target
        c = poly[m]
        q = _mono_div(m, g.u_plus)
        poly[m] = 0
        t = _mono_mul(q, g.u_minus)
        poly[t] = poly.get(t, 0) + c


def grobner_check(shape: Shape) -> bool:
    """Buchberger S-pair criterion for the binomial generators under
    the constructed term order: every S-polynomial reduces to zero."""
    gens = [g for g in toric_generators(shape) if g.u_plus != g.u_minus]
    w = _term_weights(shape)
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            f, g = gens[a], gens[b]
            lcm = _mono_lcm(f.u_plus, g.u_plus)
            spoly = {}
            t1 = _mono_mul(_mono_div(lcm, f.u_plus), f.u_minus)
            t2 = _mono_mul(_mono_div(lcm, g.u_plus), g.u_minus)
            spoly[t2] = spoly.get(t2, 0) + 1
            spoly[t1] = spoly.get(t1, 0) - 1
            if _reduce(spoly, gens, w):
                return False
    return True


@dataclass(frozen=True)
class Triangulation:
    """Regular triangulation: simplices as sorted tuples of labels."""

    shape: Shape
    simplices: tuple

    def __len__(self):
        return len(self.simplices)


def regular_triangulation(shape: Shape) -> Triangulation:
    """The triangulation attached to the term order: complements of a
    primed transversal, and of the mixed transversals with the cut at
    each variable in turn."""
    labels = index_set(shape)
    n = shape.n
    simplices = []

    def comp(removed):
        removed = set(removed)
        return tuple(lab for lab in labels if lab not in removed)

    for choice in product(*[range(1, shape.p_dash[i] + 1)
                            for i in range(n)]):
        simplices.append(comp(("ad", i + 1, choice[i]) for i in range(n)))
    for ell in range(1, n + 1):
        ranges = []
        for i in range(1, ell):
            ranges.append([("a", i, j + 1) for j in range(shape.p[i - 1])])
        ranges.append([("gd", k + 1) for k in range(shape.r_dash)])
        for i in range(ell + 1, n + 1):
            ranges.append([("ad", i, j + 1)
                           for j in range(shape.p_dash[i - 1])])
        for removed in product(*ranges):
            simplices.append(comp(removed))
    return Triangulation(shape, tuple(simplices))


def triangulation_unimodular(shape: Shape, tri: Triangulation = None):
    """Every simplex spans the quotient lattice: determinant +-1."""
    cfg = build_config(shape)
    tri = tri or regular_triangulation(shape)
    pos = {lab: t for t, lab in enumerate(cfg.labels)}
    for simplex in tri.simplices:
        cols = Matrix([cfg.column(pos[lab]) for lab in simplex]).T
        if cols.shape[0] != cols.shape[1] or abs(cols.det()) != 1:
            return False
    return True


@dataclass(frozen=True)
class Cone:
    """Maximal secondary-fan cone.

    With r.r' != 0: sigma is a permutation of {0..n} and the cone is
    {y_sigma(0) <= ... <= y_sigma(n)} with y_0 = 0.  With r.r' = 0:
    support is the subset I and sigma orders it; the cone is
    {y_i <= 0 (i not in I), y_sigma ascending on I} (signs mirrored
    when r' = 0 instead of r = 0).
    """

    sigma: tuple
    support: tuple = None


def secondary_fan(shape: Shape):
    """All maximal cones of the secondary fan."""
    n = shape.n
    if any(p * q == 0 for p, q in zip(shape.p, shape.p_dash)):
        raise DegenerateShape("secondary fan needs p_i * p_i' != 0")
    if shape.r and shape.r_dash:
        from itertools import permutations
        return tuple(Cone(sig) for sig in permutations(range(n + 1)))
    from itertools import combinations, permutations
    cones = []
    for a in range(n + 1):
        for support in combinations(range(1, n + 1), a):
            for sig in permutations(support):
                cones.append(Cone(sig, support))
    return tuple(cones)


def cone_lookup(shape: Shape, y):
    """The maximal cone containing y; ties resolved toward the
    lexicographically smallest ordering."""
    y = tuple(Fraction(v) if is_exact(v) else v for v in y)
    if len(y) != shape.n:
        raise ShapeError("need one coordinate per variable")
    if any(p * q == 0 for p, q in zip(shape.p, shape.p_dash)):
        raise DegenerateShape("secondary fan needs p_i * p_i' != 0")
    if shape.r and shape.r_dash:
        vals = (0,) + y
        sigma = tuple(sorted(range(shape.n + 1), key=lambda i: (vals[i], i)))
        return Cone(sigma)
    if shape.r_dash == 0 and shape.r:
        y = tuple(-v for v in y)
    support = tuple(i + 1 for i in range(shape.n) if y[i] > 0)
    sigma = tuple(sorted(support, key=lambda i: (y[i - 1], i)))
    return Cone(sigma, support)


def cones_adjacent(c1: Cone, c2: Cone) -> bool:
    """Cones share a facet iff the orderings differ by a consecutive
    transposition (Cayley-graph edges of the permutohedron)."""
    if c1.support is not None or c2.support is not None:
        raise ShapeError("adjacency is defined for the permutohedron fan")
    s1, s2 = c1.sigma, c2.sigma
    diff = [t for t in range(len(s1)) if s1[t] != s2[t]]
    return len(diff) == 2 and diff[1] == diff[0] + 1 and (
        s1[diff[0]], s1[diff[1]]) == (s2[diff[1]], s2[diff[0]])


def adjacency_graph(shape: Shape):
    """Permutohedron edge graph: cone -> tuple of adjacent cones."""
    cones = secondary_fan(shape)
    if shape.r == 0 or shape.r_dash == 0:
        raise DegenerateShape("adjacency graph needs r, r' > 0")
    return {c: tuple(d for d in cones if cones_adjacent(c, d))
            for c in cones}


def cofacets(shape: Shape):
    """The four families of facet complements, with the parameter sum
    each one constrains: yields (family, label tuple)."""
    n = shape.n
    for choice in product(*[range(1, shape.p[i] + 1) for i in range(n)]):
        for k in range(1, shape.r_dash + 1):
            yield ("alpha+gamma'", tuple(
                ("a", i + 1, choice[i]) for i in range(n)) + (("gd", k),))
    for choice in product(*[range(1, shape.p_dash[i] + 1)
                            for i in range(n)]):
        for k in range(1, shape.r + 1):
            yield ("alpha'+gamma", tuple(
                ("ad", i + 1, choice[i]) for i in range(n)) + (("g", k),))
    for i in range(1, n + 1):
        for j1 in range(1, shape.p[i - 1] + 1):
            for j2 in range(1, shape.p_dash[i - 1] + 1):
                yield ("alpha+alpha'", (("a", i, j1), ("ad", i, j2)))
    for k1 in range(1, shape.r + 1):
        for k2 in range(1, shape.r_dash + 1):
            yield ("gamma+gamma'", (("g", k1), ("gd", k2)))


def facet_certificate(shape: Shape, cofacet):
    """Primitive supporting vector of the facet complementary to the
    cofacet: psi = -1 on the cofacet, 0 elsewhere; verified to kill L
    and to be strictly negative exactly on the cofacet."""
    cfg = build_config(shape)
    pos = {lab: t for t, lab in enumerate(cfg.labels)}
    psi = [0] * cfg.size
    for lab in cofacet:
        psi[pos[lab]] = -1
    for row in cfg.L_basis:
        if sum(p * v for p, v in zip(psi, row)) != 0:
            raise ShapeError("certificate does not annihilate L")
    return tuple(psi)


def _param_entry(params, label):
    kind = label[0]
    if kind == "a":
        return params.alpha[label[1] - 1][label[2] - 1]
    if kind == "ad":
        return params.alpha_dash[label[1] - 1][label[2] - 1]
    if kind == "g":
        return params.gamma[label[1] - 1]
    return params.gamma_dash[label[1] - 1]


def irreducible(shape: Shape, params):
    """Facet-wise irreducibility test.

    Returns (flag, violations); a violation records the cofacet family,
    its labels and the offending integral parameter sum.  Exact for
    rational parameters, 1e-9 integrality window otherwise.
    """
    violations = []
    for family, labs in cofacets(shape):
        total = sum(_param_entry(params, lab) for lab in labs)
        if near_integer(total) is not None:
            violations.append((family, labs, total))
    return (not violations), violations


def nonresonant(shape: Shape, params) -> bool:
    """Non-resonance of c = -Av.

    Resonance along a face implies resonance along a containing facet
    (spans are nested), so only the facet conditions matter; these are
    exactly the cofacet sums of the irreducibility test.
    """
    flag, _ = irreducible(shape, params)
    return flag


def _exponent(params, labels, m, msum):
    """Exponent vector of the lifted monomial at series order m, with
    the base exponents -v = -(alpha, gamma, alpha', gamma')."""
    out = []
    for lab in labels:
        v = -_param_entry(params, lab)
        if lab[0] == "a":
            out.append(v - m[lab[1] - 1])
        elif lab[0] == "ad":
            out.append(v + m[lab[1] - 1])
        elif lab[0] == "g":
            out.append(v - msum)
        else:
            out.append(v + msum)
    return tuple(out)


def gkz_lift_check(shape: Shape, params, point, degree=20, sign=True):
    """Residual of the torus lift of the series solution.

    The series u(x) = sum coeff_F(m) x^m is lifted with monomial
    prefactor z^{-v}, v the parameter vector, and arguments
    x_i = (-1)^(p_i + r) z(alpha'_i) z(gamma') / (z(alpha_i) z(gamma)).
    Euler operators annihilate the lift exactly order by order; the
    binomial generators are applied coefficientwise and the residual
    is the largest term of the resulting series at `point`, orders up
    to `degree`.  Set sign=False to drop the alternating factor (the
    residual then certifies that the factor is required).
    """
    n = shape.n
    if len(point) != n:
        raise ShapeError("need one coordinate per variable")
    if any(abs(complex(x)) >= 1 for x in point):
        raise ConvergenceError("lift check needs |x_i| < 1")
    labels = index_set(shape)
    cfg = build_config(shape)

    orders = [m for m in product(range(degree + 1), repeat=n)
              if sum(m) <= degree]
    coeffs = {}
    for m in orders:
        c = coeff_F(shape, params, m)
        if sign:
            flip = sum((shape.p[i] + shape.r) * m[i] for i in range(n))
            if flip % 2:
                c = -c
        coeffs[m] = c

    # Euler operators: <psi, E(m)> is independent of m for psi in L-perp
    e0 = _exponent(params, labels, (0,) * n, 0)
    for m in orders:
        em = _exponent(params, labels, m, sum(m))
        for psi in cfg.A:
            d0 = sum(p * v for p, v in zip(psi, e0))
            dm = sum(p * v for p, v in zip(psi, em))
            if is_exact(d0) and is_exact(dm):
                if dm != d0:
                    return float("inf")
            elif abs(complex(dm) - complex(d0)) > 1e-12:
                return float("inf")

    def falling(em, u):
        out = 1
        for v, k in zip(em, u):
            for t in range(k):
                out = out * (v - t)
        return out

    residual = 0.0
    scale = [abs(complex(x)) for x in point]
    for g in toric_generators(shape):
        # E(m) - u_plus = E(m - shift) - u_minus per variable block
        shift = []
        for i in range(n):
            tot = sum(
                (gp - gm) * (1 if lab[0] == "ad" else -1)
                for gp, gm, lab in zip(g.u_plus, g.u_minus, labels)
                if lab[0] in ("a", "ad") and lab[1] == i + 1)
            blk = shape.p[i] + shape.p_dash[i]
            shift.append(tot // blk if blk else 0)
        shift = tuple(shift)
        for m in orders:
            prev = tuple(mi - si for mi, si in zip(m, shift))
            if any(t < 0 for t in prev) or sum(prev) > degree:
                continue
            em = _exponent(params, labels, m, sum(m))
            ep = _exponent(params, labels, prev, sum(prev))
            term = (complex(coeffs[m]) * complex(falling(em, g.u_plus))
                    - complex(coeffs[prev]) * complex(falling(ep, g.u_minus)))
            weight = 1.0
            for mi, s in zip(m, scale):
                weight *= s ** mi
            residual = max(residual, abs(term) * weight)
    return residual
