"""KZ-type residue systems over exact rationals.

A system of KZ type on marked points x_0, ..., x_{m+1} (the last one at
infinity) is a family of commuting-in-the-appropriate-sense symmetric
residue matrices A[i][j].  This module provides the construction kit:
additions, the 3N-size convolution, middle convolution by exact quotient,
index permutations, simultaneous spectra, spectral types and rigidity
indices, plus the inductive builders for the rank pq+qr+rp system behind
F^{p,q,r} and the rank pq system behind the F2-type family I_{p,q}.

All arithmetic is exact; floats are refused.
"""

import itertools
from fractions import Fraction

import numpy as np

from . import ratlin
from .errors import (
    ExactnessError,
    GenericityError,
    NotCommuting,
    NotReducible,
    ShapeError,
)

__all__ = [
    "KZSystem",
    "addition",
    "convolution_tilde",
    "middle_convolution",
    "permute_indices",
    "build_F_system",
    "build_I_system",
    "eigen_data",
    "simultaneous_spectrum",
    "spectrum_change_check",
    "spectral_type",
    "spectral_table",
    "rigidity_index",
    "reduction_number",
    "katz_reduce",
]


class KZSystem:
    """Residue matrices of a KZ-type system.

    ``blocks`` maps finite index pairs (i, j), 0 <= i < j <= npoints-2,
    to exact N x N matrices.  The entries coupled to the last marked
    point (infinity) are determined by the row-sum convention
    A[i][m+1] = -sum_nu A[i][nu] and are computed on demand.
    """

    def __init__(self, npoints, blocks):
        if npoints < 3:
            raise ShapeError("need at least 3 marked points")
        self.npoints = npoints
        finite = npoints - 1
        data = {}
        size = None
        for i in range(finite):
            for j in range(i + 1, finite):
                if (i, j) not in blocks:
                    raise ShapeError("missing block A[%d][%d]" % (i, j))
                m = ratlin.mat(blocks[(i, j)])
                nm = len(m)
                if any(len(row) != nm for row in m):
                    raise ShapeError("block A[%d][%d] is not square" % (i, j))
                if size is None:
                    size = nm
                elif nm != size:
                    raise ShapeError("blocks of unequal size")
                data[(i, j)] = m
        self.size = size if size is not None else 0
        self._blocks = data

    def A(self, i, j):
        np_ = self.npoints
        if not (0 <= i < np_ and 0 <= j < np_):
            raise ShapeError("marked-point index out of range")
        if i == j:
            return ratlin.zeros(self.size)
        if i > j:
            i, j = j, i
        if j == np_ - 1:
            total = ratlin.zeros(self.size)
            for nu in range(np_ - 1):
                if nu != i:
                    total = ratlin.madd(total, self.A(i, nu))
            return ratlin.mneg(total)
        return self._blocks[(i, j)]

    def finite_pairs(self):
        f = self.npoints - 1
        return [(i, j) for i in range(f) for j in range(i + 1, f)]

    def all_pairs(self):
        return [
            (i, j)
            for i in range(self.npoints)
            for j in range(i + 1, self.npoints)
        ]

    def A_set(self, indices):
        indices = sorted(set(indices))
        total = ratlin.zeros(self.size)
        for i, j in itertools.combinations(indices, 2):
            total = ratlin.madd(total, self.A(i, j))
        return total

    def is_compatible(self):
        """Commutator test: [A_I, A_J] = 0 for disjoint pairs and for a
        pair inside a triple."""
        pts = range(self.npoints)
        for pa, pb in itertools.combinations(itertools.combinations(pts, 2), 2):
            if set(pa) & set(pb):
                continue
            if not ratlin.is_zero(
                ratlin.commutator(self.A(*pa), self.A(*pb))
            ):
                return False
        for triple in itertools.combinations(pts, 3):
            at = self.A_set(triple)
            for pa in itertools.combinations(triple, 2):
                if not ratlin.is_zero(ratlin.commutator(self.A(*pa), at)):
                    return False
        return True

    def is_homogeneous(self):
        total = ratlin.zeros(self.size)
        for pair in self.finite_pairs():
            total = ratlin.madd(total, self.A(*pair))
        return ratlin.is_zero(total)

    def __eq__(self, other):
        return (
            isinstance(other, KZSystem)
            and self.npoints == other.npoints
            and self.size == other.size
            and self._blocks == other._blocks
        )

    def __repr__(self):
        return "KZSystem(npoints=%d, size=%d)" % (self.npoints, self.size)

    def to_text(self):
        lines = ["kzsystem", "points %d" % self.npoints, "size %d" % self.size]
        for (i, j) in self.finite_pairs():
            lines.append("block %d %d" % (i, j))
            for row in self._blocks[(i, j)]:
                lines.append(" ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "kzsystem":
            raise ShapeError("not a serialized KZ system")
        npoints = int(lines[1].split()[1])
        size = int(lines[2].split()[1])
        blocks = {}
        k = 3
        while k < len(lines):
            head = lines[k].split()
            if head[0] != "block":
                raise ShapeError("malformed block header: %r" % lines[k])
            i, j = int(head[1]), int(head[2])
            rows = []
            for rline in lines[k + 1 : k + 1 + size]:
                rows.append([Fraction(tok) for tok in rline.split()])
            blocks[(i, j)] = rows
            k += 1 + size
        return cls(npoints, blocks)


def addition(kz, pair, lam):
    """Ad((x_i - x_j)^lam): shifts A[i][j] by lam; the two entries coupled
    to infinity pick up -lam through the row-sum convention."""
    i, j = sorted(pair)
    if j >= kz.npoints - 1:
        raise ShapeError("addition pair must consist of finite points")
    lam = ratlin.to_fraction(lam)
    blocks = dict(kz._blocks)
    blocks[(i, j)] = ratlin.shift(blocks[(i, j)], lam)
    return KZSystem(kz.npoints, blocks)


def convolution_tilde(kz, tau, lam):
    """Size-3N convolution in the x_0 direction relative to x_3 = 0.

    The output residue matrices are the explicit 3x3 block matrices of
    the composite Ad((x0-x3)^tau) . mc_{-tau-lam} . Ad((x0-x3)^lam).
    Requires exactly five marked points.
    """
    if kz.npoints != 5:
        raise ShapeError(
            "convolution needs 5 marked points, got %d" % kz.npoints
        )
    tau = ratlin.to_fraction(tau)
    lam = ratlin.to_fraction(lam)
    n = kz.size
    a01, a02, a03 = kz.A(0, 1), kz.A(0, 2), kz.A(0, 3)
    a12, a13, a23 = kz.A(1, 2), kz.A(1, 3), kz.A(2, 3)
    z = ratlin.zeros(n)
    a03l = ratlin.shift(a03, lam)
    blocks = {
        (0, 1): ratlin.block(
            [
                [ratlin.shift(a01, -tau - lam), a02, a03l],
                [z, z, z],
                [z, z, z],
            ]
        ),
        (0, 2): ratlin.block(
            [
                [z, z, z],
                [a01, ratlin.shift(a02, -tau - lam), a03l],
                [z, z, z],
            ]
        ),
        (0, 3): ratlin.block(
            [
                [ratlin.eye(n, tau), z, z],
                [z, ratlin.eye(n, tau), z],
                [a01, a02, a03],
            ]
        ),
        (1, 2): ratlin.block(
            [
                [ratlin.madd(a12, a02), ratlin.mneg(a02), z],
                [ratlin.mneg(a01), ratlin.madd(a12, a01), z],
                [z, z, a12],
            ]
        ),
        (1, 3): ratlin.block(
            [
                [ratlin.shift(ratlin.madd(a13, a03), lam), z, ratlin.mneg(a03l)],
                [z, a13, z],
                [ratlin.mneg(a01), z, ratlin.madd(a01, a13)],
            ]
        ),
        (2, 3): ratlin.block(
            [
                [a23, z, z],
                [z, ratlin.shift(ratlin.madd(a03, a23), lam), ratlin.mneg(a03l)],
                [z, ratlin.mneg(a02), ratlin.madd(a02, a23)],
            ]
        ),
    }
    return KZSystem(5, blocks)


def _unit_rows(vectors, slot, n):
    """Embed n-vectors into the `slot`-th block of a 3n-vector."""
    rows = []
    pad_l = (Fraction(0),) * (slot * n)
    pad_r = (Fraction(0),) * ((2 - slot) * n)
    for v in vectors:
        rows.append(pad_l + tuple(v) + pad_r)
    return rows


def convolution_subspace(kz, tau, lam):
    """The tilde system plus the invariant subspace to quotient by.

    Returns (tilde, rows, dims) where rows spans the subspace and dims
    records (dim ker A01, dim ker A02, dim ker(A03+lam),
    dim ker(Atilde04+tau)).
    """
    tilde = convolution_tilde(kz, tau, lam)
    n = kz.size
    k1 = ratlin.nullspace(kz.A(0, 1))
    k2 = ratlin.nullspace(kz.A(0, 2))
    k3 = ratlin.nullspace(ratlin.shift(kz.A(0, 3), lam))
    k4 = ratlin.nullspace(ratlin.shift(tilde.A(0, 4), ratlin.to_fraction(tau)))
    rows = (
        _unit_rows(k1, 0, n)
        + _unit_rows(k2, 1, n)
        + _unit_rows(k3, 2, n)
        + list(k4)
    )
    basis = ratlin.span_basis(tuple(rows))
    return tilde, basis, (len(k1), len(k2), len(k3), len(k4))


def _quotient(kz, rows):
    """Quotient system in the deterministic complement basis: standard
    coordinates away from the leftmost pivots of the subspace span."""
    if not rows:
        return kz
    n3 = kz.size
    d = len(rows)
    piv = set(ratlin.pivot_coordinates(rows))
    comp = [j for j in range(n3) if j not in piv]
    blocks = {}
    if not comp:
        for pair in kz.finite_pairs():
            blocks[pair] = ()
        return KZSystem(kz.npoints, blocks)
    cols = [tuple(v) for v in rows] + [
        tuple(Fraction(1) if i == j else Fraction(0) for i in range(n3))
        for j in comp
    ]
    trans = ratlin.from_columns(cols)
    for pair in kz.finite_pairs():
        b = kz.A(*pair)
        bcols = tuple(tuple(row[j] for j in comp) for row in b)
        x = ratlin.solve(trans, bcols)
        blocks[pair] = tuple(x[d:])
    return KZSystem(kz.npoints, blocks)


def middle_convolution(kz, tau, lam, strict=True):
    """Convolution followed by the exact quotient.

    With ``strict`` the genericity condition (trivial kernels of
    A03 + lam and of Atilde04 + tau) is verified by exact rank and a
    violation raises GenericityError carrying the kernel dimensions;
    otherwise the full invariant subspace including those kernels is
    quotiented out, which is how Katz reduction steps shrink the rank.
    """
    tilde, rows, dims = convolution_subspace(kz, tau, lam)
    if strict and (dims[2] or dims[3]):
        raise GenericityError(
            "degenerate kernels: dim ker(A03+lam)=%d, "
            "dim ker(Atilde04+tau)=%d" % (dims[2], dims[3])
        )
    return _quotient(tilde, rows)


def permute_indices(kz, sigma):
    """Relabel marked points: the new A[sigma(i)][sigma(j)] is the old
    A[i][j]."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(kz.npoints)):
        raise ShapeError("sigma is not a permutation of the marked points")
    inv = [0] * kz.npoints
    for i, s in enumerate(sigma):
        inv[s] = i
    blocks = {}
    for (i, j) in kz.finite_pairs():
        blocks[(i, j)] = kz.A(inv[i], inv[j])
    return KZSystem(kz.npoints, blocks)


def _conjugated_step(kz, tau, lam, sigma=None, strict=True, steps=None):
    if sigma is not None:
        kz = permute_indices(kz, sigma)
    if steps is not None:
        steps.append((kz, ratlin.to_fraction(tau), ratlin.to_fraction(lam)))
    kz = middle_convolution(kz, tau, lam, strict=strict)
    if sigma is not None:
        kz = permute_indices(kz, sigma)
    return kz


_SWAP_XY = (1, 0, 2, 3, 4)
_SWAP_X1 = (2, 1, 0, 3, 4)
_SWAP_XY_03 = (1, 0, 3, 2, 4)


def _param_seq(params, key, length):
    try:
        seq = params[key]
    except (TypeError, KeyError):
        seq = getattr(params, key, None)
    if seq is None:
        raise ShapeError("missing parameter block %r" % key)
    if length == 1 and not hasattr(seq, "__len__"):
        seq = (seq,)
    seq = tuple(ratlin.to_fraction(x) for x in seq)
    if len(seq) != length:
        raise ShapeError(
            "parameter block %r must have %d entries" % (key, length)
        )
    return seq


def build_F_system(p, q, r, params, steps=None):
    """Rank pq+qr+rp KZ-type system of the two-variable hypergeometric
    family with shape numbers (p, q, r).

    ``params`` supplies alpha/alpha_dash (length p), beta/beta_dash
    (length q) and gamma/gamma_dash (length r) as exact rationals.
    Built inductively from the rank-1 seed by one convolution step per
    added parameter pair, in the x, y and third directions.
    """
    if min(p, q) < 1 or r < 0:
        raise ShapeError("need p, q >= 1 and r >= 0")
    al = _param_seq(params, "alpha", p)
    ald = _param_seq(params, "alpha_dash", p)
    be = _param_seq(params, "beta", q)
    bed = _param_seq(params, "beta_dash", q)
    ga = _param_seq(params, "gamma", r)
    gad = _param_seq(params, "gamma_dash", r)
    a, ad, b, bd = al[0], ald[0], be[0], bed[0]
    one = [[Fraction(0)]]
    seed = KZSystem(
        5,
        {
            (0, 1): one,
            (0, 2): [[-a - ad]],
            (0, 3): [[ad]],
            (1, 2): [[-b - bd]],
            (1, 3): [[bd]],
            (2, 3): [[a + b]],
        },
    )
    kz = seed
    for i in range(1, p):
        kz = _conjugated_step(kz, ald[i], al[i], steps=steps)
    for j in range(1, q):
        kz = _conjugated_step(kz, bed[j], be[j], _SWAP_XY, steps=steps)
    for k in range(r):
        kz = _conjugated_step(kz, ga[k], gad[k], _SWAP_X1, steps=steps)
    return kz


def build_I_system(p, q, params, steps=None):
    """Rank pq KZ-type system of the F2-type family I_{p,q} in the
    coordinates (x, 1-y).

    ``params`` supplies alpha/alpha_dash (length p-1), beta/beta_dash
    (length q-1) and the scalar gamma.  The seed is the rank-1 system of
    (x_1 - x_0)^(-gamma), i.e. of (1-x-y)^(-gamma) in (x, 1-y).
    """
    if min(p, q) < 1:
        raise ShapeError("need p, q >= 1")
    al = _param_seq(params, "alpha", p - 1)
    ald = _param_seq(params, "alpha_dash", p - 1)
    be = _param_seq(params, "beta", q - 1)
    bed = _param_seq(params, "beta_dash", q - 1)
    (ga,) = _param_seq(params, "gamma", 1)
    zero = [[Fraction(0)]]
    seed = KZSystem(
        5,
        {
            (0, 1): [[-ga]],
            (0, 2): zero,
            (0, 3): zero,
            (1, 2): zero,
            (1, 3): zero,
            (2, 3): [[ga]],
        },
    )
    kz = seed
    for i in range(p - 1):
        kz = _conjugated_step(kz, ald[i], al[i], steps=steps)
    for j in range(q - 1):
        kz = _conjugated_step(kz, bed[j], be[j], _SWAP_XY_03, steps=steps)
    return kz


def _denominator_lcm(m):
    d = 1
    for row in m:
        for x in row:
            g = x.denominator
            d = d * g // _gcd(d, g)
    return d


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def minimal_polynomial(m):
    """Monic minimal polynomial coefficients (low degree first) by the
    first linear dependence among the flattened matrix powers."""
    n = len(m)
    if n == 0:
        return (Fraction(1),)
    powers = [ratlin.eye(n)]
    while True:
        cols = [tuple(x for row in pk for x in row) for pk in powers]
        ns = ratlin.nullspace(ratlin.from_columns(cols))
        if ns:
            c = ns[0]
            lead = next(
                c[k] for k in range(len(c) - 1, -1, -1) if c[k] != 0
            )
            return tuple(x / lead for x in c)
        powers.append(ratlin.mmul(powers[-1], m))


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _numeric_candidates(m):
    """Exact rational eigenvalue candidates.

    A rational eigenvalue lies on the grid (1/den)*Z for den the lcm of
    the entry denominators, so a float hint refined by exact Newton steps
    on the minimal polynomial and snapped to that grid is certified or
    discarded by exact evaluation.
    """
    n = len(m)
    if n == 0:
        return set()
    den = _denominator_lcm(m)
    mp = minimal_polynomial(m)
    dmp = tuple(k * mp[k] for k in range(1, len(mp)))
    fm = np.array([[float(x) for x in row] for row in m], dtype=float)
    cands = {Fraction(0)}
    for w in np.linalg.eigvals(fm):
        if abs(w.imag) > 1e-6 * (1.0 + abs(w)):
            continue
        x = Fraction(w.real).limit_denominator(10**30)
        for _ in range(12):
            snapped = Fraction(round(x * den), den)
            if _poly_eval(mp, snapped) == 0:
                cands.add(snapped)
                break
            fx = _poly_eval(mp, x)
            dfx = _poly_eval(dmp, x)
            if dfx == 0:
                break
            x = (x - fx / dfx).limit_denominator(10**60)
    return cands


def eigen_data(m, candidates=()):
    """Exact (eigenvalue, multiplicity) pairs of a rational matrix.

    Candidates come from closed-form parameter combinations supplied by
    the caller plus numerically hinted rationals on the denominator grid
    of the matrix; each is certified by an exact rank computation.  The
    geometric multiplicities must exhaust the size, otherwise the
    spectrum is not rational semisimple and ExactnessError is raised.
    """
    n = len(m)
    if n == 0:
        return ()
    cands = _numeric_candidates(m)
    cands.update(ratlin.to_fraction(c) for c in candidates)
    out = []
    total = 0
    for c in sorted(cands):
        mult = n - ratlin.rank(ratlin.shift(m, -c))
        if mult > 0:
            out.append((c, mult))
            total += mult
    if total != n:
        raise ExactnessError(
            "could not certify a complete rational spectrum "
            "(%d of %d)" % (total, n)
        )
    return tuple(out)


def simultaneous_spectrum(kz, pair_a, pair_b, candidates_a=(), candidates_b=()):
    """Simultaneous eigenvalues with multiplicities for two commuting
    residue matrices, by exact nullspace intersection."""
    a = kz.A(*pair_a)
    b = kz.A(*pair_b)
    if not ratlin.is_zero(ratlin.commutator(a, b)):
        raise NotCommuting(
            "residue matrices A%s and A%s do not commute"
            % (tuple(pair_a), tuple(pair_b))
        )
    out = _sim_matrices(a, b, candidates_a, candidates_b)
    total = sum(m for _, _, m in out)
    if total != kz.size:
        raise ExactnessError(
            "simultaneous multiplicities sum to %d, expected %d"
            % (total, kz.size)
        )
    return out


def _sim_matrices(a, b, candidates_a=(), candidates_b=()):
    ea = eigen_data(a, candidates_a)
    eb = eigen_data(b, candidates_b)
    kernels_a = {
        lam: ratlin.nullspace(ratlin.shift(a, -lam)) for lam, _ in ea
    }
    kernels_b = {
        mu: ratlin.nullspace(ratlin.shift(b, -mu)) for mu, _ in eb
    }
    out = []
    for lam, _ in ea:
        for mu, _ in eb:
            mult = ratlin.intersection_dim(kernels_a[lam], kernels_b[mu])
            if mult > 0:
                out.append((lam, mu, mult))
    return tuple(sorted(out))


def spectral_type(kz, pair, candidates=()):
    """Partition of N by eigenvalue multiplicities of one residue matrix,
    sorted decreasingly."""
    data = eigen_data(kz.A(*pair), candidates)
    return tuple(sorted((m for _, m in data), reverse=True))


def spectral_table(kz):
    """Spectral types of all residue pairs, keyed by (i, j)."""
    return {pair: spectral_type(kz, pair) for pair in kz.all_pairs()}


def _disjoint_pair_pairs():
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    out = []
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            if not set(pairs[a]) & set(pairs[b]):
                out.append((pairs[a], pairs[b]))
    return out


def _predicted_tilde_spectrum(kz, tau, lam, pair_a, pair_b):
    """Closed-form simultaneous spectrum of convolution_tilde(kz, tau,
    lam) at one commuting residue pair, as a union of spectra of the
    input blocks with explicit tau/lam shifts."""
    eig = lambda p: eigen_data(kz.A(*p))
    sim = lambda p, q: _sim_matrices(kz.A(*p), kz.A(*q))

    def const(c, pairs, db=Fraction(0)):
        return [(c, v + db, m) for v, m in pairs]

    def shifted(entries, da, db=Fraction(0)):
        return [(a + da, b + db, m) for a, b, m in entries]

    mu = -tau - lam
    zero = Fraction(0)
    pa, pb = pair_a, pair_b
    if 0 in pa and 4 not in pa and 4 not in pb:
        # [0k : ij], {i,j,k} = {1,2,3}
        k = pa[1]
        if k == 3:
            return list(sim(pa, pb)) + const(tau, eig(pb)) + const(
                tau, eig((3, 4))
            )
        return (
            shifted(sim(pa, pb), mu)
            + const(zero, eig(pb))
            + const(zero, eig((k, 4)), lam)
        )
    if pa == (0, 4):
        # [04 : ij]
        k = ({1, 2, 3} - set(pb)).pop()
        if k == 3:
            return list(sim(pa, pb)) + const(lam, eig(pb)) + const(
                lam, eig((3, 4))
            )
        return list(sim(pa, pb)) + const(lam, eig(pb)) + const(
            lam, eig((k, 4)), lam
        )
    if 0 in pa and 4 in pb:
        # [0k : i4]
        k, i = pa[1], pb[0]
        j = ({1, 2, 3} - {i, k}).pop()
        if k == 3:
            return (
                list(sim(pa, pb))
                + const(tau, eig(pb))
                + const(tau, eig(tuple(sorted((j, 3)))), -lam - mu)
            )
        if i != 3:
            return (
                shifted(sim(pa, pb), mu)
                + const(zero, eig(pb))
                + const(zero, eig((k, 3)), -lam - mu)
            )
        return (
            shifted(sim(pa, pb), mu, mu)
            + const(zero, eig((3, 4)), mu)
            + const(zero, eig((1, 2)))
        )
    # [k4 : ij]; normalize to the (k,4)-first orientation
    ka, ij = (pa, pb) if 4 in pa else (pb, pa)
    k = ka[0]
    if k == 3:
        entries = (
            [(v, v, m) for v, m in eig(ij)]
            + shifted(sim(ka, ij), mu)
            + [(v + mu, v, m) for v, m in eig(ka)]
        )
    else:
        entries = (
            list(sim(ka, ij))
            + [(v, v + lam, m) for v, m in eig(ka)]
            + [(v - lam - mu, v, m) for v, m in eig(ij)]
        )
    if 4 in pa:
        return entries
    return [(b, a, m) for a, b, m in entries]


def spectrum_change_check(kz, tau, lam, restrictions=True):
    """Verify the closed-form spectrum change under convolution_tilde.

    The simultaneous spectrum of every commuting residue pair of
    convolution_tilde(kz, tau, lam) is predicted as an explicit union of
    spectra of the input system and compared exactly, as multisets.
    With restrictions=True the predictions for the three kernel
    summands of the invariant subspace are checked as well, keyed by
    (pair_a, pair_b, nu).  Returns a dict of booleans.
    """
    tau = ratlin.to_fraction(tau)
    lam = ratlin.to_fraction(lam)
    tilde = convolution_tilde(kz, tau, lam)

    def tally(entries):
        acc = {}
        for a, b, m in entries:
            acc[(a, b)] = acc.get((a, b), 0) + m
        return acc

    report = {}
    for pa, pb in _disjoint_pair_pairs():
        predicted = _predicted_tilde_spectrum(kz, tau, lam, pa, pb)
        report[(pa, pb)] = tally(predicted) == tally(
            simultaneous_spectrum(tilde, pa, pb)
        )
    if not restrictions:
        return report
    n = kz.size
    kernels = {
        1: ratlin.nullspace(kz.A(0, 1)),
        2: ratlin.nullspace(kz.A(0, 2)),
        3: ratlin.nullspace(ratlin.shift(kz.A(0, 3), lam)),
    }
    for k in (1, 2, 3):
        i, j = sorted({1, 2, 3} - {k})
        for nu in (1, 2, 3):
            ker = kernels[nu]
            if not ker:
                continue
            rows = tuple(_unit_rows(ker, nu - 1, n))
            got = _sim_matrices(
                ratlin.restricted_matrix(tilde.A(0, k), rows),
                ratlin.restricted_matrix(tilde.A(i, j), rows),
            )
            if nu == k:
                pairs = eigen_data(ratlin.restricted_matrix(kz.A(i, j), ker))
                c = -lam if k == 3 else -tau - lam
                db = Fraction(0)
            elif k == 3:
                pairs = eigen_data(ratlin.restricted_matrix(kz.A(3, 4), ker))
                c, db = tau, Fraction(0)
            else:
                pairs = eigen_data(ratlin.restricted_matrix(kz.A(k, 4), ker))
                c, db = Fraction(0), lam
            predicted = [(c, v + db, m) for v, m in pairs]
            report[((0, k), (i, j), nu)] = tally(predicted) == tally(got)
    return report


def _direction_partitions(kz, direction):
    if not 0 <= direction < kz.npoints:
        raise ShapeError("direction out of range")
    parts = []
    for j in range(kz.npoints):
        if j != direction:
            parts.append(spectral_type(kz, (direction, j)))
    return parts


def rigidity_index(kz, direction=0):
    """idx = sum of squared multiplicities over the residue matrices of
    one variable, minus (npoints-3) * N^2."""
    parts = _direction_partitions(kz, direction)
    n = kz.size
    return sum(m * m for part in parts for m in part) - (
        kz.npoints - 3
    ) * n * n


def reduction_number(kz, direction=0):
    """d = sum of maximal multiplicities minus (npoints-3) * N; the rank
    drop available to one addition + middle convolution step."""
    parts = _direction_partitions(kz, direction)
    return sum(max(part) for part in parts if part) - (
        kz.npoints - 3
    ) * kz.size


_DIRECTION_SWAP = {0: None, 1: _SWAP_XY, 2: _SWAP_X1}


def katz_reduce(kz, direction=0):
    """One addition + middle convolution step lowering the rank by the
    reduction number of the chosen direction."""
    d = reduction_number(kz, direction)
    if d <= 0:
        raise NotReducible(
            "reduction number %d in direction %d" % (d, direction)
        )
    sigma = _DIRECTION_SWAP.get(direction)
    if direction not in _DIRECTION_SWAP:
        raise ShapeError("direction must be one of 0, 1, 2")
    work = permute_indices(kz, sigma) if sigma else kz
    e03 = eigen_data(work.A(0, 3))
    e04 = eigen_data(work.A(0, 4))
    m03 = max(m for _, m in e03)
    m04 = max(m for _, m in e04)
    cand_a = sorted(lam for lam, m in e03 if m == m03)
    cand_b = sorted(lam for lam, m in e04 if m == m04)
    for a in cand_a:
        for b in cand_b:
            reduced = middle_convolution(work, -b, -a, strict=False)
            if reduced.size == kz.size - d:
                if sigma:
                    reduced = permute_indices(reduced, sigma)
                return reduced
    raise GenericityError(
        "no eigenvalue pair achieves the reduction number %d" % d
    )
