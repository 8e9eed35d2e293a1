"""Shapes, parameter sets, Pochhammer arithmetic, rank and validity checks.

A system is indexed by its integer profile (n; p_1..p_n; r; p'_1..p'_n; r'),
called a Shape here, together with complex parameter vectors alpha_i (length
p_i), gamma (length r), alpha_dash_i (length p'_i) and gamma_dash (length
r').  Entries may be exact (int / Fraction) or inexact (float / complex);
operations that need exactness check via `is_exact`.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import PoleError, ShapeError

_INT_TOL = 1e-9


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def near_integer(x, tol=_INT_TOL):
    """Return the nearby integer if x is (numerically) integral, else None."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    if isinstance(x, int):
        return x
    z = complex(x)
    if abs(z.imag) > tol:
        return None
    n = round(z.real)
    return n if abs(z.real - n) <= tol else None


@dataclass(frozen=True)
class Shape:
    """Integer profile (n; p; r; p'; r') with condition (F): p_i + r = p'_i + r'."""

    p: tuple
    r: int
    p_dash: tuple
    r_dash: int

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(v) for v in self.p))
        object.__setattr__(self, "p_dash", tuple(int(v) for v in self.p_dash))
        if len(self.p) != len(self.p_dash):
            raise ShapeError("p and p_dash must have the same length")
        if len(self.p) == 0:
            raise ShapeError("need at least one variable")
        if any(v < 0 for v in self.p + self.p_dash) or self.r < 0 or self.r_dash < 0:
            raise ShapeError("profile entries must be non-negative")
        for i, (pi, qi) in enumerate(zip(self.p, self.p_dash)):
            plus = pi + self.r == qi + self.r_dash
            minus = pi - self.r == qi - self.r_dash
            if not (plus or minus):
                raise ShapeError(f"compatibility fails at index {i}: "
                                 f"{pi}+-{self.r} != {qi}+-{self.r_dash}")

    @property
    def condition_F(self) -> bool:
        """Plain compatibility p_i + r = p'_i + r' in every slot."""
        return all(pi + self.r == qi + self.r_dash
                   for pi, qi in zip(self.p, self.p_dash))

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def level(self) -> int:
        return self.r - self.r_dash

    @property
    def epsilon(self) -> int:
        return -1 if self.level % 2 else 1

    @property
    def nontrivial(self):
        """Flags (p_i + p'_i > 1 for each i, r + r' > 0); informational only."""
        return (tuple(pi + qi > 1 for pi, qi in zip(self.p, self.p_dash)),
                self.r + self.r_dash > 0)

    def swap_rows(self) -> "Shape":
        """Exchange upper and lower profiles (inversion of all variables)."""
        return Shape(self.p_dash, self.r_dash, self.p, self.r)

    def permuted(self, sigma) -> "Shape":
        return Shape(tuple(self.p[s] for s in sigma), self.r,
                     tuple(self.p_dash[s] for s in sigma), self.r_dash)


def shape2(p, q, r, p_dash, q_dash, r_dash) -> Shape:
    """Bivariate shape in the (p,q,r; p',q',r') notation."""
    return Shape((p, q), r, (p_dash, q_dash), r_dash)


@dataclass(frozen=True)
class Params:
    """Parameter vectors attached to a Shape.

    For n = 2 the blocks are alpha[0] = alpha, alpha[1] = beta, gamma,
    alpha_dash[0] = alpha', alpha_dash[1] = beta', gamma_dash = gamma'.
    """

    shape: Shape
    alpha: tuple
    gamma: tuple
    alpha_dash: tuple
    gamma_dash: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(tuple(v) for v in self.alpha))
        object.__setattr__(self, "alpha_dash",
                           tuple(tuple(v) for v in self.alpha_dash))
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "gamma_dash", tuple(self.gamma_dash))
        s = self.shape
        if len(self.alpha) != s.n or len(self.alpha_dash) != s.n:
            raise ShapeError("need one alpha block per variable")
        for i in range(s.n):
            if len(self.alpha[i]) != s.p[i]:
                raise ShapeError(f"alpha[{i}] must have length {s.p[i]}")
            if len(self.alpha_dash[i]) != s.p_dash[i]:
                raise ShapeError(f"alpha_dash[{i}] must have length {s.p_dash[i]}")
        if len(self.gamma) != s.r:
            raise ShapeError(f"gamma must have length {s.r}")
        if len(self.gamma_dash) != s.r_dash:
            raise ShapeError(f"gamma_dash must have length {s.r_dash}")

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.all_entries())

    def all_entries(self):
        for blk in self.alpha:
            yield from blk
        yield from self.gamma
        for blk in self.alpha_dash:
            yield from blk
        yield from self.gamma_dash

    def condition_T(self) -> bool:
        """Each lower block alpha_dash[i] contains a zero entry."""
        return all(any(near_integer(v) == 0 for v in blk)
                   for blk in self.alpha_dash)

    def swap_rows(self) -> "Params":
        return Params(self.shape.swap_rows(), self.alpha_dash, self.gamma_dash,
                      self.alpha, self.gamma)

    def permuted(self, sigma) -> "Params":
        return Params(self.shape.permuted(sigma),
                      tuple(self.alpha[s] for s in sigma), self.gamma,
                      tuple(self.alpha_dash[s] for s in sigma), self.gamma_dash)


def params2(shape, alpha, beta, gamma, alpha_dash, beta_dash, gamma_dash):
    """Bivariate parameter pack."""
    return Params(shape, (tuple(alpha), tuple(beta)), tuple(gamma),
                  (tuple(alpha_dash), tuple(beta_dash)), tuple(gamma_dash))


def pochhammer(a, m: int):
    """(a)_m = Gamma(a+m)/Gamma(a), by stable products.

    For m < 0 uses (a)_{-k} = 1/((a-k)(a-k+1)...(a-1)), the convention
    equivalent to (1-a)_{-m} = (-1)^m/(a)_m.
    """
    if m == 0:
        return 1 if is_exact(a) else 1.0
    if m > 0:
        acc = 1 if is_exact(a) else (1.0 + 0.0j if isinstance(a, complex) else 1.0)
        for k in range(m):
            acc = acc * (a + k)
        return acc
    acc = 1 if is_exact(a) else (1.0 + 0.0j if isinstance(a, complex) else 1.0)
    for k in range(1, -m + 1):
        f = a - k
        if f == 0 or (not is_exact(f) and abs(complex(f)) < 1e-300):
            raise PoleError(f"({a})_{m} hits a pole at factor {f}")
        acc = acc * f
    if is_exact(acc):
        return Fraction(1, acc) if isinstance(acc, int) else 1 / acc
    return 1 / acc


def poch_vec(vec, m: int):
    """Componentwise product prod_i (vec_i)_m."""
    acc = 1
    for a in vec:
        acc = acc * pochhammer(a, m)
    return acc


def rank(shape: Shape) -> int:
    """Holonomic rank: prod p'_i + r' * sum_k p_1..p_{k-1} p'_{k+1}..p'_n.

    For level != 0 this equals (prod p'_i * r - prod p_i * r') / L; for
    n = 2, level 0 it equals pq + qr + rp.
    """
    if not shape.condition_F:
        raise ShapeError("rank needs plain compatibility in every slot")
    n = shape.n
    prod_dash = 1
    for v in shape.p_dash:
        prod_dash *= v
    total = prod_dash
    for k in range(n):
        term = shape.r_dash
        for j in range(k):
            term *= shape.p[j]
        for j in range(k + 1, n):
            term *= shape.p_dash[j]
        total += term
    L = shape.level
    if L != 0:
        prod_up = 1
        for v in shape.p:
            prod_up *= v
        alt, rem = divmod(prod_dash * shape.r - prod_up * shape.r_dash, L)
        if rem == 0 and alt != total:
            raise ShapeError(f"rank formulas disagree: {total} vs {alt}")
    return total


def resonances(params: Params, tol=_INT_TOL):
    """Integer differences among exponents that break generic solution bases.

    Returns a list of human-readable warnings; empty means generic.
    """
    out = []

    def check_block(name, vec):
        for i in range(len(vec)):
            for j in range(i + 1, len(vec)):
                if near_integer(vec[i] - vec[j], tol) is not None:
                    out.append(f"resonant exponents: {name}[{i}] - {name}[{j}] "
                               f"is an integer")

    for i, blk in enumerate(params.alpha_dash):
        check_block(f"alpha_dash[{i}]", blk)
    for i, blk in enumerate(params.alpha):
        check_block(f"alpha[{i}]", blk)
    check_block("gamma", params.gamma)
    check_block("gamma_dash", params.gamma_dash)
    # mixed: exponents at a coordinate divisor also involve gamma blocks
    for i in range(params.shape.n):
        for a in params.alpha_dash[i]:
            for g in params.gamma_dash:
                if near_integer(a - g, tol) is not None:
                    out.append(f"resonant exponents: alpha_dash[{i}] vs gamma_dash")
    return out


def validate(shape: Shape, params: Params) -> dict:
    """Report-style validation: (F), (T), nontriviality, genericity."""
    report = {
        "condition_F": True,  # enforced by Shape construction
        "condition_T": params.condition_T(),
        "nontrivial_p": shape.nontrivial[0],
        "nontrivial_r": shape.nontrivial[1],
        "warnings": resonances(params),
    }
    report["generic"] = not report["warnings"]
    return report
