"""One-variable generalized hypergeometric layer.

The equation is  prod_i (theta - a'_i) u = x prod_i (theta + a_i) u  with
theta = x d/dx.  Local solutions at 0 are (sign*x)^{a'_i} F(a + a'_i;
a' - a'_i; x); at infinity the same construction applies to the swapped
system in 1/x.  The 0 -> infinity connection coefficients are Gamma
products; the numeric identity check continues the infinity-side series
into the unit disc by an exact Taylor recurrence of the equation about an
ordinary point.
"""

import cmath
from dataclasses import dataclass

from .errors import ConvergenceError, ResonanceError, ShapeError
from .gammafn import gamma_quotient
from .param_core import near_integer, pochhammer
from .series import principal_power


@dataclass(frozen=True)
class OneVarSystem:
    alpha: tuple
    alpha_dash: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "alpha_dash", tuple(self.alpha_dash))
        if len(self.alpha) != len(self.alpha_dash):
            raise ShapeError("alpha and alpha_dash must have equal length")

    @property
    def p(self) -> int:
        return len(self.alpha)

    def swap(self) -> "OneVarSystem":
        return OneVarSystem(self.alpha_dash, self.alpha)

    def resonant(self) -> list:
        out = []
        for name, vec in (("alpha", self.alpha), ("alpha_dash", self.alpha_dash)):
            for i in range(len(vec)):
                for j in range(i + 1, len(vec)):
                    if near_integer(vec[i] - vec[j]) is not None:
                        out.append((name, i, j))
        return out

    def irreducible(self) -> bool:
        """No a'_i + a_j integral."""
        return all(near_integer(ad + a) is None
                   for ad in self.alpha_dash for a in self.alpha)


def seq_coeff(sys: OneVarSystem, n: int):
    """n-th coefficient of F(alpha; alpha'; x) = sum (alpha)_n/(1-alpha')_n x^n."""
    return seq_coeffs(sys, n)[n]


def seq_coeffs(sys: OneVarSystem, N: int):
    """Coefficients 0..N by the term-ratio recurrence (overflow-safe)."""
    from fractions import Fraction
    exact = all(isinstance(v, (int, Fraction))
                for v in sys.alpha + sys.alpha_dash)
    c = Fraction(1) if exact else 1.0
    out = [c]
    for n in range(N):
        num = 1
        den = 1
        for a in sys.alpha:
            num = num * (a + n)
        for ad in sys.alpha_dash:
            den = den * (1 - ad + n)
        if exact:
            c = c * Fraction(num) / Fraction(den)
        else:
            c = c * num / den
        out.append(c)
    return out


def shifted_system(sys: OneVarSystem, i: int) -> OneVarSystem:
    """System whose canonical series is the exponent-a'_i solution at 0."""
    e = sys.alpha_dash[i]
    return OneVarSystem(tuple(a + e for a in sys.alpha),
                        tuple(ad - e for ad in sys.alpha_dash))


def local_solution_0(sys: OneVarSystem, i: int, sign: int, x, N: int):
    """(sign*x)^{a'_i} F(alpha + a'_i; alpha' - a'_i; x), truncated at N."""
    for nu, ad in enumerate(sys.alpha_dash):
        if nu != i and near_integer(sys.alpha_dash[i] - ad) is not None:
            raise ResonanceError(f"a'_{i} - a'_{nu} is an integer")
    shifted = shifted_system(sys, i)
    x = complex(x)
    coeffs = seq_coeffs(shifted, N)
    total = 0.0 + 0.0j
    term_abs = []
    xn = 1.0 + 0.0j
    for n in range(N + 1):
        t = complex(coeffs[n]) * xn
        total += t
        term_abs.append(abs(t))
        xn *= x
    if max(term_abs[-5:]) > 1e8 * (1 + abs(total)):
        raise ConvergenceError(f"series at 0 not converging at x = {x}")
    return principal_power(sign * x, sys.alpha_dash[i]) * total


def local_solution_inf(sys: OneVarSystem, j: int, sign: int, x, N: int):
    """(sign/x)^{a_j} F(alpha' + a_j; alpha - a_j; 1/x): the solution at
    infinity, evaluated by its own series (needs |x| > 1)."""
    return local_solution_0(sys.swap(), j, sign, 1.0 / complex(x), N)


def connection_coeff(sys: OneVarSystem, i: int, j: int):
    """c(0: a'_i -> oo: a_j) as a Gamma-function product."""
    a, ad = sys.alpha, sys.alpha_dash
    num, den = [], []
    for nu in range(sys.p):
        if nu != i:
            num.append(1 + ad[i] - ad[nu])
        den.append(1 - ad[nu] - a[j]) if nu != i else None
    for nu in range(sys.p):
        if nu != j:
            num.append(a[nu] - a[j])
            den.append(ad[i] + a[nu])
    # the skipped nu == i factor in the first denominator product
    # (the formula's products both run over nu != i / nu != j)
    return gamma_quotient(num, den)


def connection_matrix(sys: OneVarSystem):
    return [[connection_coeff(sys, i, j) for j in range(sys.p)]
            for i in range(sys.p)]


def riemann_scheme(sys: OneVarSystem) -> dict:
    """Exponents at 0, 1, infinity; delta makes the Fuchs sum p - 1."""
    p = sys.p
    delta = p - 1 - sum(sys.alpha) - sum(sys.alpha_dash)
    return {
        "at_0": tuple(sys.alpha_dash),
        "at_1": tuple(range(p - 1)) + (delta,),
        "at_inf": tuple(sys.alpha),
    }


# ---------------------------------------------------------------------------
# analytic continuation by Taylor recurrence about an ordinary point

def _stirling2(pmax):
    S = [[0] * (pmax + 1) for _ in range(pmax + 1)]
    S[0][0] = 1
    for k in range(1, pmax + 1):
        for j in range(1, k + 1):
            S[k][j] = S[k - 1][j - 1] + j * S[k - 1][j]
    return S


def _poly_from_roots(roots, flip):
    """Coefficients of prod (t - r) (flip=False) or prod (t + r) (flip=True)."""
    coeffs = [1]
    for r in roots:
        shift = r if flip else -r
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] += c * shift
        coeffs = nxt
    return coeffs


def _operator_terms(sys: OneVarSystem):
    """The equation as sum of terms c * x^e * d^j, via theta^k expansion."""
    p = sys.p
    S = _stirling2(p)
    a = _poly_from_roots(sys.alpha_dash, flip=False)   # prod (t - a'_i)
    b = _poly_from_roots(sys.alpha, flip=True)         # prod (t + a_i)
    terms = []
    for j in range(p + 1):
        A = sum(a[k] * S[k][j] for k in range(j, p + 1))
        B = sum(b[k] * S[k][j] for k in range(j, p + 1))
        if A != 0:
            terms.append((complex(A), j, j))        # A x^j d^j
        if B != 0:
            terms.append((-complex(B), j + 1, j))   # -B x^{j+1} d^j
    return terms


def _falling(a, j):
    acc = 1
    for k in range(j):
        acc *= a - k
    return acc


def taylor_step(sys: OneVarSystem, x0, init, M: int):
    """Taylor coefficients u_0..u_M about ordinary x0 from u_0..u_{p-1}."""
    from math import comb
    p = sys.p
    x0 = complex(x0)
    if abs(x0) < 1e-12 or abs(x0 - 1) < 1e-12:
        raise ShapeError("expansion point must be ordinary")
    terms = _operator_terms(sys)
    u = list(init) + [0j] * (M + 1 - p)
    lead = x0 ** p * (1 - x0)
    for Mdeg in range(0, M + 1 - p):
        K = Mdeg + p
        acc = 0j
        for c, e, j in terms:
            for i in range(0, min(e, Mdeg + j) + 1):
                idx = Mdeg - i + j
                if idx == K or idx < 0 or idx > M:
                    continue
                acc += c * comb(e, i) * x0 ** (e - i) * u[idx] * _falling(idx, j)
        u[K] = -acc / (lead * _falling(K, p))
    return u


class _PowerTail:
    """f(x) = sum_k c_k w^{mu+k} with w = sign/x; supports d/dx and eval."""

    def __init__(self, sign, mu, coeffs):
        self.sign = sign
        self.mu = mu
        self.c = dict(enumerate(coeffs))

    def derivative(self):
        # w = sign/x  =>  dw/dx = -sign/x^2 = -(1/sign) w^2 = -sign w^2
        out = _PowerTail(self.sign, self.mu, [])
        out.c = {}
        for k, ck in self.c.items():
            if ck != 0:
                out.c[k + 1] = out.c.get(k + 1, 0) - self.sign * ck * (self.mu + k)
        return out

    def eval(self, x):
        w = self.sign / complex(x)
        lw = cmath.log(w)
        return sum(ck * cmath.exp((self.mu + k) * lw) for k, ck in self.c.items())


def sol_inf_derivatives(sys: OneVarSystem, j: int, sign: int, x0, N: int,
                        orders: int):
    """Values f(x0), f'(x0), ..., f^{(orders-1)}(x0) of the infinity solution."""
    shifted = shifted_system(sys.swap(), j)
    # series variable is 1/x but the power base is w = sign/x, so absorb
    # sign^n into the coefficients: c_n (1/x)^n = (sign^n c_n) w^n
    coeffs = [sign ** n * c for n, c in enumerate(seq_coeffs(shifted, N))]
    tail = _PowerTail(sign, sys.alpha[j], coeffs)
    out = []
    for _ in range(orders):
        out.append(tail.eval(x0))
        tail = tail.derivative()
    return out


def local_solution_inf_continued(sys: OneVarSystem, j: int, sign: int, x,
                                 N: int = 80, M: int = 140):
    """Infinity solution at a point with |x| <= 1, reached by one or more
    Taylor steps from an anchor on the same ray at modulus 2."""
    x = complex(x)
    if abs(x) > 1.9:
        return local_solution_inf(sys, j, sign, x, N)
    ray = x / abs(x)
    x0 = 2.0 * ray
    derivs = sol_inf_derivatives(sys, j, sign, x0, N, sys.p)
    return continue_derivatives(sys, x0, derivs, x)


def continue_derivatives(sys: OneVarSystem, x0, derivs, x, M: int = 140):
    """Value at x of the solution with the given derivatives [f, f', ...]
    at the ordinary point x0, reached by Taylor steps that stay well inside
    each disc of analyticity."""
    from math import factorial
    x0 = complex(x0)
    x = complex(x)
    while True:
        radius = min(abs(x0), abs(x0 - 1))
        target = x if abs(x - x0) < 0.72 * radius else x0 + 0.7 * radius * (
            (x - x0) / abs(x - x0))
        init = [derivs[k] / factorial(k) for k in range(sys.p)]
        u = taylor_step(sys, x0, init, M)
        s = target - x0
        if abs(u[-1] * s ** M) > 1e-8:
            raise ConvergenceError("Taylor step did not converge; "
                                   "target too close to a singular point")
        vals = []
        for d in range(sys.p):
            acc = 0j
            for k in range(d, M + 1):
                acc += u[k] * _falling(k, d) * s ** (k - d)
            vals.append(acc)
        if target == x:
            return vals[0]
        x0, derivs = target, [vals[k] * 1.0 for k in range(sys.p)]


def connection_residual(sys: OneVarSystem, x, N: int = 80) -> float:
    """max_i relative error of sol0_i(x) vs sum_j c_ij * (oo-solution_j)(x),
    with the minus-sign decorations, for x on the negative real axis."""
    worst = 0.0
    inf_vals = [local_solution_inf_continued(sys, j, -1, x, N)
                for j in range(sys.p)]
    for i in range(sys.p):
        lhs = local_solution_0(sys, i, -1, x, N)
        rhs = 0j
        for j in range(sys.p):
            rhs += connection_coeff(sys, i, j) * inf_vals[j]
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-30))
    return worst
