"""Exact linear algebra over the rationals.

Matrices are immutable tuples of tuples of :class:`fractions.Fraction`.
Everything here uses fraction-free-ish Gaussian elimination with the
leftmost available pivot, so results (pivot positions, nullspace bases,
complement choices) are deterministic.
"""

from fractions import Fraction

from .errors import ExactnessError

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x):
    """Exact conversion; floats are refused."""
    if isinstance(x, float) or isinstance(x, complex):
        raise ExactnessError("exact rational required, got %r" % (x,))
    return Fraction(x)


def mat(rows):
    return tuple(tuple(to_fraction(x) for x in row) for row in rows)


def zeros(n, m=None):
    m = n if m is None else m
    return tuple((ZERO,) * m for _ in range(n))


def eye(n, scale=ONE):
    scale = to_fraction(scale)
    return tuple(
        tuple(scale if i == j else ZERO for j in range(n)) for i in range(n)
    )


def shape(a):
    return len(a), (len(a[0]) if a else 0)


def madd(a, b):
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def msub(a, b):
    return tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mneg(a):
    return tuple(tuple(-x for x in row) for row in a)


def smul(c, a):
    c = to_fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def shift(a, c):
    """a + c*I for square a."""
    c = to_fraction(c)
    return tuple(
        tuple(x + c if i == j else x for j, x in enumerate(row))
        for i, row in enumerate(a)
    )


def mmul(a, b):
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def transpose(a):
    return tuple(zip(*a))


def commutator(a, b):
    return msub(mmul(a, b), mmul(b, a))


def is_zero(a):
    return all(x == 0 for row in a for x in row)


def hstack(*mats):
    mats = [m for m in mats if m and m[0]]
    if not mats:
        return ()
    return tuple(
        tuple(x for m in mats for x in m[i]) for i in range(len(mats[0]))
    )


def vstack(*mats):
    return tuple(row for m in mats if m for row in m)


def block(grid):
    """Assemble a matrix from a 2-D grid of blocks."""
    return vstack(*(hstack(*row) for row in grid))


def rref(a):
    """Reduced row echelon form.  Returns (rref_matrix, pivot_columns)."""
    m = [list(row) for row in a]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in m), tuple(pivots)


def rank(a):
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Columns spanning ker(a), as a tuple of column vectors (tuples)."""
    if not a:
        return ()
    ncols = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def columns(a):
    return tuple(zip(*a)) if a else ()


def from_columns(cols, nrows=None):
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(zip(*cols))


def solve(a, b):
    """Solve a X = b for square invertible a; b is a matrix."""
    n = len(a)
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    for c in range(n):
        pr = None
        for i in range(c, n):
            if aug[i][c] != 0:
                pr = i
                break
        if pr is None:
            raise ZeroDivisionError("singular matrix in solve")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def inverse(a):
    return solve(a, eye(len(a)))


def column_space_basis(cols):
    """Independent subset of the given column vectors (leftmost kept),
    plus the pivot coordinate of each chosen column."""
    if not cols:
        return (), ()
    _, pivots = rref(from_columns(cols))
    # pivots of the column matrix's RREF index the independent columns
    chosen = tuple(cols[p] for p in pivots)
    return chosen, pivots


def pivot_coordinates(vectors):
    """Coordinate indices hit by leftmost-pivot elimination on the span
    of the given vectors (one vector per row)."""
    if not vectors:
        return ()
    return rref(vectors)[1]


def span_basis(vectors):
    """Deterministic basis of the span of the given row vectors: RREF rows."""
    if not vectors:
        return ()
    r, piv = rref(vectors)
    return tuple(r[i] for i in range(len(piv)))


def intersection_dim(basis_a, basis_b):
    """dim(span a ∩ span b) for row-vector bases."""
    if not basis_a or not basis_b:
        return 0
    ra = len(span_basis(basis_a))
    rb = len(span_basis(basis_b))
    rs = len(span_basis(tuple(basis_a) + tuple(basis_b)))
    return ra + rb - rs


def restricted_matrix(a, basis):
    """Matrix of the action of `a` on an invariant subspace.

    `basis` is a tuple of column vectors spanning the subspace; returns M
    with a·K = K·M where K has the basis vectors as columns.
    """
    if not basis:
        return ()
    k = from_columns(basis)
    ak = mmul(a, k)
    # solve K M = AK in the least-structure way: extend K to a square
    # system via its pivot rows
    _, piv = rref(basis)  # pivot coordinates of the basis vectors
    kk = tuple(k[i] for i in piv)
    bb = tuple(ak[i] for i in piv)
    return solve(kk, bb)
