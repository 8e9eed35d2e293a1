"""The operators P_i and P_ij acting on truncated series, contiguity
shifts, and the coordinate-transformation group action on systems.

Everything acts on coefficient arrays through Euler-operator eigenvalues:
theta_{x_i} multiplies the coefficient at m by (m_i + beta_i), beta being
the prefactor exponent of the series.  The signed sum eps.theta replaces
theta_x + theta_y for G-type (sign-twisted) systems, so one operator
family covers the M systems and their N-type chart transforms.
"""

from dataclasses import dataclass

from .errors import ShapeError
from .param_core import Params, Shape
from .series import TruncatedSeries


@dataclass(frozen=True)
class SystemDescriptor:
    shape: Shape
    params: Params
    signs: tuple = None  # +1/-1 per variable; all +1 is the plain M system

    def __post_init__(self):
        if self.signs is None:
            object.__setattr__(self, "signs", (1,) * self.shape.n)
        s = self.shape
        for i, e in enumerate(self.signs):
            if s.p[i] + e * s.r != s.p_dash[i] + e * s.r_dash:
                raise ShapeError(f"signs incompatible with profile at slot {i}")


def _theta(series, i):
    """Eigenvalue of theta_{x_i} at index m."""
    return lambda m: m[i] + series.beta[i]


def _sum_theta(series, signs):
    return lambda m: sum(s * (mi + b)
                         for s, mi, b in zip(signs, m, series.beta))


def _diag(series, fn):
    return {m: fn(m) * c for m, c in series.coeffs.items()}


def _diag_product(series, factors):
    out = dict(series.coeffs)
    for fn in factors:
        out = {m: fn(m) * c for m, c in out.items()}
    return out


def _shift(coeffs, i, n):
    """Multiply by x_i: index shift by e_i."""
    out = {}
    for m, c in coeffs.items():
        mm = list(m)
        mm[i] += 1
        out[tuple(mm)] = c
    return out


def apply_P(desc: SystemDescriptor, i: int, series: TruncatedSeries):
    """Image under P_i; output shells above N-1 are dropped and flagged."""
    sh, pa, signs = desc.shape, desc.params, desc.signs
    if series.eps != signs:
        raise ShapeError("series signature does not match the descriptor")
    st = _sum_theta(series, signs)
    th = _theta(series, i)
    if signs[i] == 1:
        left_g = [(lambda m, g=g: st(m) - g) for g in pa.gamma_dash]
        right_g = [(lambda m, g=g: st(m) + g) for g in pa.gamma]
    else:
        left_g = [(lambda m, g=g: st(m) + g) for g in pa.gamma]
        right_g = [(lambda m, g=g: st(m) - g) for g in pa.gamma_dash]
    left = _diag_product(series, [(lambda m, a=a: th(m) - a)
                                  for a in pa.alpha_dash[i]] + left_g)
    right = _diag_product(series, [(lambda m, a=a: th(m) + a)
                                   for a in pa.alpha[i]] + right_g)
    right = _shift(right, i, sh.n)
    out = {}
    for m in set(left) | set(right):
        if sum(m) <= series.N - 1:
            out[m] = left.get(m, 0) - right.get(m, 0)
    return TruncatedSeries(sh, out, series.N - 1, beta=series.beta,
                           signs=series.signs, eps=series.eps,
                           dropped_shells=series.dropped_shells + (series.N,))


def apply_P_pair(desc: SystemDescriptor, i: int, j: int,
                 series: TruncatedSeries):
    """Image under the pair operator.

    Equal signs: P_ij = x_i (th_i+alpha_i)(th_j-alpha'_j)
                      - x_j (th_j+alpha_j)(th_i-alpha'_i).
    Mixed signs (s_i = +1, s_j = -1) additionally carry the gamma blocks,
    since incrementing m_i and m_j moves the signed sum in opposite
    directions:
      x_i (th_i+alpha_i)(th_j-alpha'_j)(s.th+gamma)(s.th+gamma+1)
    - x_j (th_i-alpha'_i)(th_j+alpha_j)(s.th-gamma')(s.th-gamma'-1).
    """
    sh, pa = desc.shape, desc.params
    if series.eps != desc.signs:
        raise ShapeError("series signature does not match the descriptor")
    si, sj = desc.signs[i], desc.signs[j]
    if si == -1 and sj == 1:
        return _negate(apply_P_pair(desc, j, i, series))
    th_i, th_j = _theta(series, i), _theta(series, j)
    if si == sj:
        t1 = _diag_product(series, [(lambda m, a=a: th_i(m) + a)
                                    for a in pa.alpha[i]]
                           + [(lambda m, a=a: th_j(m) - a)
                              for a in pa.alpha_dash[j]])
        t2 = _diag_product(series, [(lambda m, a=a: th_j(m) + a)
                                    for a in pa.alpha[j]]
                           + [(lambda m, a=a: th_i(m) - a)
                              for a in pa.alpha_dash[i]])
    else:
        st = _sum_theta(series, desc.signs)
        t1 = _diag_product(
            series,
            [(lambda m, a=a: th_i(m) + a) for a in pa.alpha[i]]
            + [(lambda m, a=a: th_j(m) - a) for a in pa.alpha_dash[j]]
            + [(lambda m, g=g: st(m) + g) for g in pa.gamma]
            + [(lambda m, g=g: st(m) + g + 1) for g in pa.gamma])
        t2 = _diag_product(
            series,
            [(lambda m, a=a: th_i(m) - a) for a in pa.alpha_dash[i]]
            + [(lambda m, a=a: th_j(m) + a) for a in pa.alpha[j]]
            + [(lambda m, g=g: st(m) - g) for g in pa.gamma_dash]
            + [(lambda m, g=g: st(m) - g - 1) for g in pa.gamma_dash])
    t1 = _shift(t1, i, sh.n)
    t2 = _shift(t2, j, sh.n)
    out = {}
    for m in set(t1) | set(t2):
        if sum(m) <= series.N - 1:
            out[m] = t1.get(m, 0) - t2.get(m, 0)
    return TruncatedSeries(sh, out, series.N - 1, beta=series.beta,
                           signs=series.signs, eps=series.eps,
                           dropped_shells=series.dropped_shells + (series.N,))


def _negate(series: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(series.shape, {m: -c for m, c in
                                          series.coeffs.items()},
                           series.N, beta=series.beta, signs=series.signs,
                           eps=series.eps, dropped_shells=series.dropped_shells)


def max_abs(series: TruncatedSeries) -> float:
    return max((abs(complex(c)) for c in series.coeffs.values()), default=0.0)


def is_zero(series: TruncatedSeries) -> bool:
    return all(c == 0 for c in series.coeffs.values())


# ---------------------------------------------------------------------------
# coordinate group action on descriptors

def transform_system(desc: SystemDescriptor, g):
    """Apply a coordinate transformation (or a sequence of them).

    Atoms:
      ("permute", sigma)   variable relabeling x_i -> x_{sigma(i)}
      ("invert",)          all x_i -> 1/x_i: upper/lower swap
      ("twist",)           (eps*x_1/x_n, ..., eps*x_{n-1}/x_n, 1/x_n)
      ("ntype",)           bivariate (x, eps/y): N-type signed system
    """
    if g and isinstance(g[0], (tuple, list)):
        for atom in g:
            desc = transform_system(desc, atom)
        return desc
    kind = g[0]
    sh, pa = desc.shape, desc.params
    if kind == "permute":
        sigma = tuple(g[1])
        return SystemDescriptor(sh.permuted(sigma), pa.permuted(sigma),
                                tuple(desc.signs[s] for s in sigma))
    if kind == "invert":
        return SystemDescriptor(sh.swap_rows(), pa.swap_rows(), desc.signs)
    if kind == "twist":
        n = sh.n
        if desc.signs != (1,) * n:
            raise ShapeError("twist is defined on plain M systems")
        new_alpha = pa.alpha[:n - 1] + (pa.gamma_dash,)
        new_alpha_dash = pa.alpha_dash[:n - 1] + (pa.gamma,)
        new_gamma = pa.alpha_dash[n - 1]
        new_gamma_dash = pa.alpha[n - 1]
        new_shape = Shape(sh.p[:n - 1] + (sh.r_dash,), sh.p_dash[n - 1],
                          sh.p_dash[:n - 1] + (sh.r,), sh.p[n - 1])
        return SystemDescriptor(new_shape,
                                Params(new_shape, new_alpha, new_gamma,
                                       new_alpha_dash, new_gamma_dash),
                                desc.signs)
    if kind == "ntype":
        if sh.n != 2:
            raise ShapeError("the (x, eps/y) transform is bivariate")
        new_shape = Shape((sh.p[0], sh.p_dash[1]), sh.r,
                          (sh.p_dash[0], sh.p[1]), sh.r_dash)
        new_params = Params(new_shape,
                            (pa.alpha[0], pa.alpha_dash[1]), pa.gamma,
                            (pa.alpha_dash[0], pa.alpha[1]), pa.gamma_dash)
        new_signs = (desc.signs[0], -desc.signs[1])
        return SystemDescriptor(new_shape, new_params, new_signs)
    raise ShapeError(f"unknown transformation {g!r}")


def bivariate_generator(desc: SystemDescriptor, name: str):
    """The generators of the coordinate symmetry group on bivariate M.

    "yx":    (x,y) -> (y,x)
    "inv":   (x,y) -> (1/x, 1/y)
    "xy_y":  (x,y) -> (eps*x/y, 1/y)
    """
    if desc.shape.n != 2:
        raise ShapeError("bivariate only")
    if name == "yx":
        return transform_system(desc, ("permute", (1, 0)))
    if name == "inv":
        return transform_system(desc, ("invert",))
    if name == "xy_y":
        return transform_system(desc, ("twist",))
    raise ShapeError(f"unknown generator {name!r}")


# ---------------------------------------------------------------------------
# contiguity

def contiguity_shift(desc: SystemDescriptor, which, series: TruncatedSeries):
    """Apply the raising Euler factor named by `which`:

      ("alpha", i, k)       theta_i + alpha_{ik}    -> alpha_{ik} + 1
      ("gamma", k)          eps.theta + gamma_k     -> gamma_k + 1
      ("alpha_dash", i, k)  theta_i - alpha'_{ik}   -> alpha'_{ik} + 1
      ("gamma_dash", k)     eps.theta - gamma'_k    -> gamma'_k + 1

    Returns (shifted descriptor, image series).
    """
    pa = desc.params
    st = _sum_theta(series, desc.signs)
    kind = which[0]
    if kind == "alpha":
        _, i, k = which
        val = pa.alpha[i][k]
        fn = lambda m: (m[i] + series.beta[i]) + val
        new_alpha = _bump(pa.alpha, i, k)
        new_pa = Params(desc.shape, new_alpha, pa.gamma, pa.alpha_dash,
                        pa.gamma_dash)
    elif kind == "alpha_dash":
        _, i, k = which
        val = pa.alpha_dash[i][k]
        fn = lambda m: (m[i] + series.beta[i]) - val
        new_pa = Params(desc.shape, pa.alpha, pa.gamma,
                        _bump(pa.alpha_dash, i, k), pa.gamma_dash)
    elif kind == "gamma":
        _, k = which
        val = pa.gamma[k]
        fn = lambda m: st(m) + val
        new_pa = Params(desc.shape, pa.alpha,
                        _bump_flat(pa.gamma, k), pa.alpha_dash, pa.gamma_dash)
    elif kind == "gamma_dash":
        _, k = which
        val = pa.gamma_dash[k]
        fn = lambda m: st(m) - val
        new_pa = Params(desc.shape, pa.alpha, pa.gamma, pa.alpha_dash,
                        _bump_flat(pa.gamma_dash, k))
    else:
        raise ShapeError(f"unknown contiguity direction {which!r}")
    out = TruncatedSeries(desc.shape, _diag(series, fn), series.N,
                          beta=series.beta, signs=series.signs,
                          eps=series.eps, dropped_shells=series.dropped_shells)
    return SystemDescriptor(desc.shape, new_pa, desc.signs), out


def _bump(blocks, i, k):
    blk = list(blocks[i])
    blk[k] = blk[k] + 1
    return blocks[:i] + (tuple(blk),) + blocks[i + 1:]


def _bump_flat(vec, k):
    v = list(vec)
    v[k] = v[k] + 1
    return tuple(v)
