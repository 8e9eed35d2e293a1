"""Multivariate F and G series: coefficients, truncation, evaluation.

The F series attached to (shape, params) is

    sum_m  prod_i (alpha_i)_{m_i} (gamma)_{|m|}
           / ( prod_i (1-alpha'_i)_{m_i} (1-gamma')_{|m|} )  x^m,

Pochhammers of vectors meaning componentwise products.  The G variant
replaces |m| by the signed sum eps.m and requires the sign-twisted
compatibility p_i + eps_i r = p'_i + eps_i r'.  Local solutions carry a
power prefactor prod (sign_i * xi_i)^{beta_i} in chart coordinates xi.
"""

import cmath
from dataclasses import dataclass, field

from .errors import BranchError, ConvergenceError, ShapeError
from .param_core import Params, Shape, is_exact, poch_vec

DEFAULT_N = 40


def iter_indices(n, N):
    """All multi-indices m in Z_{>=0}^n with |m| <= N, graded order."""
    if n == 1:
        for k in range(N + 1):
            yield (k,)
        return
    for total in range(N + 1):
        yield from _compositions(n, total)


def _compositions(n, total):
    if n == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(n - 1, total - head):
            yield (head,) + tail


def check_eps_compat(shape: Shape, eps) -> None:
    eps = tuple(eps)
    if len(eps) != shape.n or any(e not in (1, -1) for e in eps):
        raise ShapeError("eps must be a vector of +-1 per variable")
    for i in range(shape.n):
        if shape.p[i] + eps[i] * shape.r != shape.p_dash[i] + eps[i] * shape.r_dash:
            raise ShapeError(f"sign compatibility fails at variable {i} "
                             f"for eps = {eps}")


def coeff_F(shape: Shape, params: Params, m):
    """Series coefficient at multi-index m."""
    return coeff_G(shape, params, (1,) * shape.n, m)


def coeff_G(shape: Shape, params: Params, eps, m):
    """G-series coefficient: gamma blocks indexed by the signed sum eps.m."""
    check_eps_compat(shape, eps)
    m = tuple(m)
    s = sum(e * k for e, k in zip(eps, m))
    num = poch_vec(params.gamma, s)
    den = poch_vec([1 - g for g in params.gamma_dash], s)
    for i in range(shape.n):
        num = num * poch_vec(params.alpha[i], m[i])
        den = den * poch_vec([1 - a for a in params.alpha_dash[i]], m[i])
    if is_exact(num) and is_exact(den):
        from fractions import Fraction
        return Fraction(num, den) if isinstance(num, int) and isinstance(
            den, int) else Fraction(num) / Fraction(den)
    return num / den


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients up to total degree N with an optional power prefactor.

    The represented germ is prod_i (signs_i * xi_i)^{beta_i} * sum c_m xi^m
    in its chart coordinates xi.  eps is the G-signature of the underlying
    series (all +1 for F-type); it matters to the differential operators,
    not to evaluation.
    """

    shape: Shape
    coeffs: dict
    N: int
    beta: tuple = None
    signs: tuple = None
    eps: tuple = None
    dropped_shells: tuple = ()

    def __post_init__(self):
        n = self.shape.n
        if self.beta is None:
            object.__setattr__(self, "beta", (0,) * n)
        if self.signs is None:
            object.__setattr__(self, "signs", (1,) * n)
        if self.eps is None:
            object.__setattr__(self, "eps", (1,) * n)

    def coeff(self, m):
        return self.coeffs.get(tuple(m), 0)

    def shells(self):
        """Sum of |coeff| per total degree, for convergence diagnostics."""
        out = [0.0] * (self.N + 1)
        for m, c in self.coeffs.items():
            out[sum(m)] += abs(complex(c))
        return out


def series_F(shape: Shape, params: Params, N=DEFAULT_N, beta=None, signs=None):
    return series_G(shape, params, (1,) * shape.n, N, beta=beta, signs=signs)


def series_G(shape: Shape, params: Params, eps, N=DEFAULT_N, beta=None,
             signs=None):
    """Canonical truncated G series; coefficients by the shell recurrence."""
    check_eps_compat(shape, eps)
    coeffs = {m: coeff_G(shape, params, eps, m) for m in iter_indices(shape.n, N)}
    return TruncatedSeries(shape, coeffs, N, beta=beta, signs=signs,
                           eps=tuple(eps))


def principal_power(base, expo):
    """base**expo on the principal branch; BranchError on the cut."""
    b = complex(base)
    if b.real <= 0 and b.imag == 0:
        raise BranchError(f"power base {base} lies on the branch cut")
    if expo == 0:
        return 1.0 + 0.0j
    return cmath.exp(complex(expo) * cmath.log(b))


def eval_series(series: TruncatedSeries, xi, check_convergence=True):
    """Evaluate at chart coordinates xi; returns (value, tail_estimate).

    The convergence test is heuristic: every |xi_i| < 0.75 and the ratio of
    consecutive weighted shells stays below 0.95 over the last five shells.
    """
    xi = tuple(complex(v) for v in xi)
    n = series.shape.n
    if len(xi) != n:
        raise ShapeError("point dimension mismatch")
    prefactor = 1.0 + 0.0j
    for i in range(n):
        if series.beta[i] != 0:
            prefactor *= principal_power(series.signs[i] * xi[i], series.beta[i])
    shells = [0.0] * (series.N + 1)
    total = 0.0 + 0.0j
    for m, c in series.coeffs.items():
        term = complex(c)
        for i in range(n):
            if m[i]:
                term *= xi[i] ** m[i]
        total += term
        shells[sum(m)] += abs(term)
    if check_convergence:
        if any(abs(v) >= 0.75 for v in xi):
            raise ConvergenceError(f"point {xi} outside the accepted chart "
                                   "region (|xi| >= 0.75)")
        tail = _tail_estimate(shells)
    else:
        tail = _tail_estimate(shells, strict=False)
    return prefactor * total, abs(prefactor) * tail


def _tail_estimate(shells, strict=True):
    last = [s for s in shells[-6:] if True]
    ratios = []
    for a, b in zip(last, last[1:]):
        if a > 0:
            ratios.append(b / a)
    if not ratios:
        return 0.0
    ratio = max(ratios)
    if ratio >= 0.95:
        if strict:
            raise ConvergenceError(f"series shells are not decaying "
                                   f"(shell ratio {ratio:.3f})")
        ratio = 0.95
    return shells[-1] * ratio / (1.0 - ratio)


def transform_coefficientwise(kind, mu, lam, series: TruncatedSeries, var=0):
    """Multiply coefficients by the integral-transform factor.

    kind "K":        (lam_1)_{m_1} ... (lam_n)_{m_n} / (mu)_{|m|}
    kind "L":        reciprocal of "K"
    kind "Ktilde":   (lam)_{|m|} / (mu)_{|m|}
    kind "K_single": (lam)_{m_var} / (mu)_{m_var}
    """
    from .param_core import pochhammer
    n = series.shape.n
    out = {}
    for m, c in series.coeffs.items():
        tot = sum(m)
        if kind == "K" or kind == "L":
            fac = 1
            for i in range(n):
                fac = fac * pochhammer(lam[i], m[i])
            fac = fac / pochhammer(mu, tot)
            out[m] = c * fac if kind == "K" else c / fac
        elif kind == "Ktilde":
            out[m] = c * pochhammer(lam, tot) / pochhammer(mu, tot)
        elif kind == "K_single":
            out[m] = c * pochhammer(lam, m[var]) / pochhammer(mu, m[var])
        else:
            raise ShapeError(f"unknown transform kind {kind!r}")
    return TruncatedSeries(series.shape, out, series.N, beta=series.beta,
                           signs=series.signs, eps=series.eps,
                           dropped_shells=series.dropped_shells)


def binomial_seed(shape: Shape, exponents, N, joint=None):
    """Coefficients of prod_i (1-x_i)^{-e_i} or of (1-x_1-...-x_n)^{-g}.

    With joint=None the factors are independent; with joint=g the seed is
    the single power of (1 - sum x_i), whose coefficient at m is
    (g)_{|m|} / prod m_i!.
    """
    from .param_core import pochhammer
    from math import factorial
    coeffs = {}
    for m in iter_indices(shape.n, N):
        if joint is not None:
            c = pochhammer(joint, sum(m))
            for k in m:
                c = c / factorial(k)
        else:
            c = 1
            for e, k in zip(exponents, m):
                c = c * pochhammer(e, k) / factorial(k)
        coeffs[m] = c
    return TruncatedSeries(shape, coeffs, N)
