"""One-sided stable subordinator densities and their identities.

The central object is the density phi_{s,alpha} on (0, infty) defined by

    integral_0^infty exp(-lam*t) phi_{s,alpha}(lam) dlam = exp(-s*t**alpha)

for 0 < alpha < 1 and s > 0.  Evaluation routes:

* ``closed_half``      -- the explicit formula at alpha = 1/2,
* ``bromwich``         -- numerical inversion of exp(-s*z**alpha) on a
                          deformed (cotangent) or vertical contour,
* ``scaled_from_unit`` -- the dilation identity through phi_{1,alpha},
* ``convolution``      -- the product rule phi_{1,alpha*beta} from an
                          outer integral over phi_{1,beta}.

s-derivatives of the density are obtained by multiplying the inversion
integrand by (-z**alpha)**j, which keeps them at quadrature accuracy;
finite differences and the dilation identity serve as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, ParameterError
from .quadrature import log_panel_nodes

_EPS = np.finfo(float).eps
_SQRT_PI = math.sqrt(math.pi)

# Contour inversion is ill-conditioned near the endpoints of (0, 1).
ALPHA_MIN = 0.05
ALPHA_MAX = 0.95


def _check_alpha(alpha: float, *, bromwich: bool = False) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    if bromwich and not ALPHA_MIN <= alpha <= ALPHA_MAX:
        raise ParameterError(
            f"contour inversion supports alpha in [{ALPHA_MIN}, {ALPHA_MAX}]"
        )
    return alpha


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise ParameterError(f"{name} must be a positive finite real")
    return value


@dataclass(frozen=True)
class SubordinatorParams:
    """Index (alpha) and subordination time (s) of phi_{s,alpha}."""

    alpha: float
    s: float = 1.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_positive("s", self.s)


@dataclass(frozen=True)
class BromwichSpec:
    """Contour parameters for the numerical inverse Laplace transform.

    ``n_nodes`` counts nodes on the full contour; the cotangent
    deformation pairs them by conjugate symmetry, so n_nodes = 64 means
    32 evaluated points on the upper half.  ``sigma`` and ``im_cutoff``
    only enter the vertical-line deformation; sigma defaults to
    max(1, s**(-1/alpha)).
    """

    sigma: Optional[float] = None
    n_nodes: int = 64
    im_cutoff: Optional[float] = None
    deformation: str = "talbot_like"

    def __post_init__(self):
        if self.n_nodes < 16:
            raise ParameterError("n_nodes must be at least 16")
        if self.sigma is not None and not self.sigma > 0:
            raise ParameterError("sigma must be positive")
        if self.im_cutoff is not None and not self.im_cutoff > 0:
            raise ParameterError("im_cutoff must be positive")
        if self.deformation not in ("talbot_like", "vertical_line"):
            raise ParameterError("deformation must be talbot_like or vertical_line")


def _talbot_once(alpha, s, lam, m, order=0, contour_scale=None):
    """Cotangent-contour inversion with m upper-half trapezoid nodes.

    The contour z(theta) = r*theta*(cot(theta) + i) with
    r = 0.4*contour_scale/lam keeps exp(z*lam) bounded by
    exp(0.4*contour_scale) while exp(-s*z^alpha) decays; an overflow of
    the combined exponent signals that (s, lam) left the resolvable
    region.  contour_scale defaults to m; refining m at a fixed
    contour_scale is a pure quadrature refinement on a fixed contour,
    which keeps roundoff flat and makes node-doubling a meaningful
    convergence check.  Returns (value, floor) with floor a roundoff
    estimate from the largest term; vectorized over lam.
    """
    lam = np.asarray(lam, dtype=float)
    if contour_scale is None:
        contour_scale = m
    r = 0.4 * contour_scale / lam
    theta = np.arange(1, m) * (np.pi / m)
    cot = np.cos(theta) / np.sin(theta)
    zu = theta * (cot + 1j)                       # z / r on the contour
    sig = theta + (theta * cot - 1.0) * cot
    z = r[..., None] * zu
    za = z ** alpha
    expo = lam[..., None] * z.real - s * za.real
    if np.max(expo) > 650.0:
        raise ConvergenceError(
            "contour integrand overflows; (s, lambda) outside the "
            "resolvable range for this alpha"
        )
    f = np.exp(expo + 1j * (lam[..., None] * z.imag - s * za.imag))
    if order:
        f = f * (-za) ** order
    terms = f * (1.0 + 1j * sig)
    ra = r ** alpha
    t0 = 0.5 * np.exp(0.4 * contour_scale - s * ra) * ((-ra) ** order if order else 1.0)
    scale = r / m
    value = (t0 + np.sum(terms.real, axis=-1)) * scale
    peak = np.maximum(np.abs(t0), np.max(np.abs(terms), axis=-1)) * scale
    floor = peak * (_EPS * m)
    return value, floor


def _vertical_once(alpha, s, lam, sigma, n_nodes, im_cutoff, order=0):
    """Trapezoid inversion on the vertical segment sigma + i[-Y, Y].

    The full symmetric contour is summed so the imaginary part is a
    genuine numerical residual (it cancels exactly in arithmetic).
    Returns (value, imag_residue, floor), vectorized over lam.
    """
    lam = np.asarray(lam, dtype=float)
    y = np.linspace(-im_cutoff, im_cutoff, 2 * n_nodes - 1)
    z = sigma + 1j * y
    za = z ** alpha
    f = np.exp(-s * za)
    if order:
        f = f * (-za) ** order
    w = np.full(y.size, im_cutoff / (n_nodes - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    core = np.exp(1j * np.multiply.outer(lam, y)) * f
    integral = (core @ w) / (2.0 * np.pi)
    value = np.exp(sigma * lam) * integral.real
    resid = np.exp(sigma * lam) * np.abs(integral.imag)
    peak = np.exp(sigma * lam) * np.max(np.abs(core), axis=-1) * im_cutoff / np.pi
    return value, resid, peak * _EPS * n_nodes


def default_sigma(alpha: float, s: float) -> float:
    return max(1.0, s ** (-1.0 / alpha))


def density_bromwich(alpha, s, lam, spec: Optional[BromwichSpec] = None,
                     rtol: float = 1e-8, order: int = 0):
    """Invert exp(-s*z**alpha) at lam (vectorized over lam).

    order >= 1 returns the order-th s-derivative of the density (the
    integrand gains a factor (-z**alpha)**order).  Raises
    ConvergenceError when doubling the node count moves the result by
    more than rtol relative (or the roundoff floor, whichever is
    larger), and when the vertical contour leaves an excessive
    imaginary residue.
    """
    alpha = _check_alpha(alpha, bromwich=True)
    s = _check_positive("s", s)
    spec = spec or BromwichSpec()
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ParameterError("lambda must be positive")
    if spec.deformation == "talbot_like":
        m = max(8, spec.n_nodes // 2)
        v1, f1 = _talbot_once(alpha, s, lam_arr, m, order)
        v2, f2 = _talbot_once(alpha, s, lam_arr, 2 * m, order, contour_scale=m)
        tol = np.maximum(10.0 * (f1 + f2), rtol * np.abs(v2))
        if np.any(np.abs(v1 - v2) > tol):
            raise ConvergenceError(
                "doubling the contour nodes changed the inversion beyond tolerance"
            )
        out = v2
    else:
        sigma = spec.sigma if spec.sigma is not None else default_sigma(alpha, s)
        # |exp(-s z^alpha)| ~ exp(-s cos(a pi/2) y^alpha) sets the cutoff
        decay = s * math.cos(alpha * math.pi / 2.0)
        cutoff = spec.im_cutoff if spec.im_cutoff is not None \
            else (36.0 / max(decay, 1e-3)) ** (1.0 / alpha)
        n = spec.n_nodes
        v1, r1, f1 = _vertical_once(alpha, s, lam_arr, sigma, n, cutoff, order)
        v2, r2, f2 = _vertical_once(alpha, s, lam_arr, sigma, 2 * n, cutoff, order)
        tol = np.maximum(10.0 * (f1 + f2), rtol * np.abs(v2))
        if np.any(np.abs(v1 - v2) > tol):
            raise ConvergenceError(
                "doubling the contour nodes changed the inversion beyond tolerance"
            )
        resid_tol = np.maximum(np.abs(v2) * 1e-6, 100.0 * f2)
        if np.any(r2 > resid_tol):
            raise ConvergenceError("excessive imaginary residue on the vertical contour")
        out = v2
    return float(out) if np.isscalar(lam) else out


def _closed_half(s, lam, order=0):
    """Closed form at alpha = 1/2; s and lam broadcast elementwise."""
    s = np.asarray(s, dtype=float)
    lam = np.asarray(lam, dtype=float)
    core = np.exp(-s * s / (4.0 * lam)) * lam ** (-1.5) / (2.0 * _SQRT_PI)
    if order == 0:
        return s * core
    if order == 1:
        return (1.0 - s * s / (2.0 * lam)) * core
    if order == 2:
        return (s ** 3 / (4.0 * lam ** 2) - 3.0 * s / (2.0 * lam)) * core
    raise ParameterError("closed-form derivatives implemented for order <= 2")


def density_closed_half(s, lam, order: int = 0):
    """phi_{s,1/2}(lam) = s * exp(-s^2/(4 lam)) * lam^(-3/2) / (2 sqrt(pi)).

    order in {0, 1, 2} selects the s-derivative of that order.
    """
    s = _check_positive("s", s)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ParameterError("lambda must be positive")
    out = _closed_half(s, lam_arr, order)
    return float(out) if np.isscalar(lam) else out


def unit_density(alpha, v, n_nodes: int = 64, order: int = 0):
    """phi_{1,alpha} on v (vectorized); closed form at alpha = 1/2."""
    if float(alpha) == 0.5:
        return density_closed_half(1.0, v, order)
    value, _ = _talbot_once(_check_alpha(alpha, bromwich=True), 1.0,
                            np.asarray(v, dtype=float), max(8, n_nodes // 2), order)
    return float(value) if np.isscalar(v) else value


def density_scaled(alpha, s, lam, base: Optional[Callable] = None):
    """Dilation identity phi_{s,alpha}(lam) = s^(-1/a) phi_{1,alpha}(s^(-1/a) lam).

    ``base`` evaluates phi_{1,alpha}; defaults to the unit-density route.
    """
    alpha = _check_alpha(alpha)
    s = _check_positive("s", s)
    if base is None:
        base = lambda v: unit_density(alpha, v)
    scale = s ** (-1.0 / alpha)
    if np.isscalar(lam):
        return scale * base(scale * float(lam))
    return scale * base(scale * np.asarray(lam, dtype=float))


# --- quadrature against the density -----------------------------------------


def left_tail_cut(alpha: float, drop: float = 37.0) -> float:
    """v below which phi_{1,alpha}(v) < ~exp(-drop) (steepest-descent bound)."""
    c1 = (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))
    return (c1 / drop) ** ((1.0 - alpha) / alpha)


def right_tail_mass(alpha: float, v: float) -> float:
    """First-order tail mass: integral_v^infty phi_{1,alpha} ~ v^-a / Gamma(1-a)."""
    return v ** (-alpha) * math.exp(-gammaln(1.0 - alpha))


def right_tail_cut(alpha: float, mass_tol: float = 1e-9) -> float:
    return (1.0 / (mass_tol * math.exp(gammaln(1.0 - alpha)))) ** (1.0 / alpha)


@dataclass(frozen=True)
class DensityGrid:
    """Quadrature nodes with phi-weighted weights for phi_{1,alpha} dv."""

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray          # phi(nodes) * GL weight (Jacobian included)
    tail_mass: float             # analytic estimate of the omitted right tail
    v_min: float
    v_max: float

    def integrate(self, g):
        """integral of phi_{1,alpha}(v) g(v) dv over the core window."""
        vals = np.asarray(g(self.nodes))
        if vals.ndim == 1:
            return float(vals @ self.weights)
        return np.tensordot(self.weights, vals, axes=(0, 0))


def density_grid(alpha, *, mass_tol: float = 1e-9, drop: float = 37.0,
                 panel_width: float = 0.4, order: int = 12,
                 n_nodes: int = 64) -> DensityGrid:
    alpha = _check_alpha(alpha)
    v_min = left_tail_cut(alpha, drop)
    v_max = right_tail_cut(alpha, mass_tol)
    nodes, w = log_panel_nodes(v_min, v_max, panel_width, order)
    phi = np.maximum(unit_density(alpha, nodes, n_nodes=n_nodes), 0.0)
    return DensityGrid(alpha, nodes, phi * w, right_tail_mass(alpha, v_max),
                       v_min, v_max)


def normalization(alpha, s: float = 1.0, **kw) -> float:
    """integral_0^infty phi_{s,alpha} dlam (dilation-invariant, so s drops out)."""
    grid = density_grid(alpha, **kw)
    return grid.integrate(np.ones_like) + grid.tail_mass


def laplace_transform(alpha, s, t, **kw):
    """integral exp(-lam t) phi_{s,alpha}(lam) dlam; target exp(-s t^alpha)."""
    alpha = _check_alpha(alpha)
    s = _check_positive("s", s)
    grid = density_grid(alpha, **kw)
    t_arr = np.asarray(t, dtype=float)
    scale = s ** (1.0 / alpha)
    vals = grid.integrate(lambda v: np.exp(-np.multiply.outer(v * scale, t_arr)))
    return float(vals) if np.isscalar(t) else np.asarray(vals)


def log_moment(alpha, s: float = 1.0, **kw) -> float:
    """u(alpha) = integral |ln(s^(-1/a) u)| phi_{s,alpha}(u) du.

    Dilation makes the value independent of s, which the tests exercise.
    """
    alpha = _check_alpha(alpha)
    _check_positive("s", s)
    grid = density_grid(alpha, **kw)
    core = grid.integrate(lambda v: np.abs(np.log(v)))
    v = grid.v_max
    tail = (v ** (-alpha) * (math.log(v) + 1.0 / alpha)) * math.exp(-gammaln(1.0 - alpha))
    if not math.isfinite(core + tail):
        raise ConvergenceError("log-moment tail failed to converge")
    return core + tail


def density_convolve(alpha, beta, lam, *, mass_tol: float = 1e-9, **kw):
    """phi_{1,alpha*beta}(lam) as an outer integral over phi_{1,beta}.

    Inner densities use the closed form at alpha = 1/2, the contour
    route otherwise; far outside the contour's window the inner density
    is replaced by its first tail term (right) or zero (left, where it
    is sub-machine).
    """
    alpha = _check_alpha(alpha)
    beta = float(beta)
    if not 0.0 < beta < ALPHA_MAX:
        raise ParameterError(f"beta must lie in (0, {ALPHA_MAX})")
    lam_in = np.asarray(lam, dtype=float)
    lam_arr = np.atleast_1d(lam_in)
    if np.any(lam_arr <= 0):
        raise ParameterError("lambda must be positive")
    grid = density_grid(beta, mass_tol=mass_tol, **kw)
    v_lo = left_tail_cut(alpha, 40.0)
    v_hi = right_tail_cut(alpha, 1e-14)
    tail_coef = math.sin(math.pi * alpha) / math.pi * math.exp(gammaln(alpha + 1.0))

    def inner(svals):
        scale = svals ** (-1.0 / alpha)
        pts = np.multiply.outer(scale, lam_arr)          # (s, lam)
        flat = pts.ravel()
        out = np.zeros_like(flat)
        mask = (flat >= v_lo) & (flat <= v_hi)
        if np.any(mask):
            out[mask] = np.maximum(unit_density(alpha, flat[mask]), 0.0)
        big = flat > v_hi
        if np.any(big):
            out[big] = tail_coef * flat[big] ** (-1.0 - alpha)
        return out.reshape(pts.shape) * scale[:, None]

    res = np.asarray(grid.integrate(inner))
    return float(res[0]) if np.isscalar(lam) else res


# --- s-derivatives ----------------------------------------------------------


def density_s_derivative(alpha, s, lam, order: int = 1,
                         spec: Optional[BromwichSpec] = None):
    """order-th s-derivative of phi_{s,alpha}(lam).

    Computed from the inversion integrand (closed form at alpha = 1/2);
    see s_derivative_routes for the finite-difference / dilation-identity
    cross-check on the first derivative.
    """
    if order < 1:
        raise ParameterError("derivative order must be >= 1")
    if float(alpha) == 0.5 and order <= 2:
        return density_closed_half(s, lam, order)
    return density_bromwich(alpha, s, lam, spec, order=order)


@dataclass(frozen=True)
class SDerivativeRoutes:
    """First s-derivative by three routes plus their spread."""

    exact: float          # derivative of the inversion integrand
    finite_difference: float
    identity: float       # -(phi + lam d_lam phi) / (alpha s)
    spread: float

    @property
    def agree(self) -> bool:
        scale = max(abs(self.exact), abs(self.finite_difference),
                    abs(self.identity), 1e-12)
        return self.spread <= 1e-4 * scale


def s_derivative_routes(alpha, s, lam) -> SDerivativeRoutes:
    """Cross-check d/ds phi via finite differences and the dilation identity.

    Central differences use step 1e-4 * max(1, |s|) with one Richardson
    extrapolation; a spread beyond 1e-4 of the local scale flags an
    evaluator bug.
    """
    alpha = _check_alpha(alpha)
    s = _check_positive("s", s)
    lam = _check_positive("lam", lam)

    def phi(ss, ll):
        if alpha == 0.5:
            return float(_closed_half(ss, ll))
        return unit_density(alpha, ll * ss ** (-1.0 / alpha)) * ss ** (-1.0 / alpha)

    exact = float(np.asarray(density_s_derivative(alpha, s, lam, 1)))
    h = 1e-4 * max(1.0, abs(s))
    if h >= s / 4.0:
        h = s / 8.0
    if h <= 0 or s - 2 * h <= 0:
        raise ParameterError("step size underflows the positivity of s")
    d_h = (phi(s + h, lam) - phi(s - h, lam)) / (2.0 * h)
    d_2h = (phi(s + 2 * h, lam) - phi(s - 2 * h, lam)) / (4.0 * h)
    fd = (4.0 * d_h - d_2h) / 3.0
    hl = 1e-4 * lam
    dl_h = (phi(s, lam + hl) - phi(s, lam - hl)) / (2.0 * hl)
    dl_2h = (phi(s, lam + 2 * hl) - phi(s, lam - 2 * hl)) / (4.0 * hl)
    dlam = (4.0 * dl_h - dl_2h) / 3.0
    ident = -(phi(s, lam) + lam * dlam) / (alpha * s)
    vals = (exact, fd, ident)
    return SDerivativeRoutes(exact, fd, ident, max(vals) - min(vals))


# --- evaluator facade -------------------------------------------------------


@dataclass
class DensityEvaluator:
    """Callable facade over the evaluation routes.

    method is one of closed_half | bromwich | scaled_from_unit |
    convolution; closed_half requires alpha = 1/2 exactly, convolution
    represents alpha = (alpha/beta) * beta through the product identity.
    Instances are immutable in practice and safe for concurrent reads.
    """

    params: SubordinatorParams
    method: str = "bromwich"
    spec: BromwichSpec = field(default_factory=BromwichSpec)
    beta: Optional[float] = None

    def __post_init__(self):
        if self.method not in ("closed_half", "bromwich", "scaled_from_unit",
                               "convolution"):
            raise ParameterError(f"unknown evaluation method {self.method!r}")
        if self.method == "closed_half" and self.params.alpha != 0.5:
            raise ParameterError("closed_half requires alpha = 1/2 exactly")
        if self.method == "convolution":
            if self.beta is None:
                raise ParameterError("convolution requires a beta factor")
            if not 0.0 < self.beta < ALPHA_MAX:
                raise ParameterError(f"beta must lie in (0, {ALPHA_MAX})")
            if not 0.0 < self.params.alpha / self.beta < 1.0:
                raise ParameterError("alpha/beta must lie in (0,1) for convolution")

    def __call__(self, lam):
        a, s = self.params.alpha, self.params.s
        if self.method == "closed_half":
            return density_closed_half(s, lam)
        if self.method == "bromwich":
            return density_bromwich(a, s, lam, self.spec)
        if self.method == "scaled_from_unit":
            return density_scaled(a, s, lam)
        scale = s ** (-1.0 / a)
        if np.isscalar(lam):
            return scale * density_convolve(a / self.beta, self.beta, scale * lam)
        return scale * density_convolve(a / self.beta, self.beta,
                                        scale * np.asarray(lam, dtype=float))

    def s_derivative(self, lam, order: int = 1):
        return density_s_derivative(self.params.alpha, self.params.s, lam, order,
                                    self.spec if self.method == "bromwich" else None)


# --- inequality report ------------------------------------------------------


def k_index(alpha: float, i: int) -> int:
    """Least integer K with K/(K+i) >= alpha."""
    k = 1
    while k / (k + i) + 1e-12 < alpha:
        k += 1
    return k


@dataclass
class InequalityResult:
    inequality_id: str
    grid_spec: dict
    worst_margin: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "grid_spec": self.grid_spec,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
        }


@dataclass
class DensityInequalityReport:
    alpha: float
    c: float
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "c": self.c,
            "pass": self.passed,
            "inequalities": [r.to_dict() for r in self.results],
        }


def _margin(lhs, rhs, tol_scale=1e-9):
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
    rel = (rhs - lhs) / scale
    worst = float(np.min(rel))
    return worst, worst >= -tol_scale


def _sderiv_grid(alpha, S, lam, j):
    """order-j s-derivative of phi_{s,alpha}(lam) on a broadcast (s, lam) grid."""
    if alpha == 0.5 and j <= 2:
        return _closed_half(np.broadcast_to(S, lam.shape), lam, j)
    flat_s = np.broadcast_to(S, lam.shape).ravel()
    flat_l = lam.ravel()
    out = np.empty_like(flat_l)
    for svalue in np.unique(flat_s):
        mask = flat_s == svalue
        val, _ = _talbot_once(alpha, float(svalue), flat_l[mask], 32, order=j)
        out[mask] = val
    return out.reshape(lam.shape)


def verify_density_inequalities(alpha, c, s_grid=None, lam_scaled_grid=None,
                                j_max: int = 2, seed: Optional[int] = None,
                                n_points: int = 20) -> DensityInequalityReport:
    """Pointwise checks of the density comparison inequalities.

    Checks, on an (s, lam) grid with margins normalized by local scale:

    * csf1      c^K1 phi_{s,a} <= phi_{cs,a}
    * csfla     d/dlam (lam^(1 + a K1) phi_{s,a}) >= 0
    * cdsf_c_j  |s^j d_s^j phi| <= max(j K1/c^K1, j/(c^K2 (1-c) a))^j phi_{cs,a}
    * cdsf(3)   |s^j d_s^j phi| <= (10 j / (1-a))^j phi_{a s, a}

    The lambda grid lives in the dilation-invariant variable
    lam' = s**(-1/alpha) lam so every point stays inside the range the
    contour quadrature resolves; passing seed jitters both grids.
    """
    alpha = _check_alpha(alpha, bromwich=True)
    c = float(c)
    if not 0.0 < c < 1.0:
        raise ParameterError("c must lie in (0,1)")
    k1 = k_index(alpha, 1)
    k2 = k_index(alpha, 2)
    rng = np.random.default_rng(seed)
    if s_grid is None:
        s_grid = np.geomspace(0.25, 4.0, n_points)
        if seed is not None:
            s_grid = s_grid * np.exp(rng.uniform(-0.05, 0.05, s_grid.shape))
    else:
        s_grid = np.asarray(s_grid, dtype=float)
    if lam_scaled_grid is None:
        lo = max(1.3 * left_tail_cut(alpha, 30.0), 0.05)
        lam_scaled_grid = np.geomspace(lo, 30.0, n_points)
        if seed is not None:
            lam_scaled_grid = lam_scaled_grid * np.exp(
                rng.uniform(-0.05, 0.05, lam_scaled_grid.shape))
    else:
        lam_scaled_grid = np.asarray(lam_scaled_grid, dtype=float)

    grid_spec = {
        "s": [float(s_grid.min()), float(s_grid.max()), int(s_grid.size)],
        "lam_scaled": [float(lam_scaled_grid.min()), float(lam_scaled_grid.max()),
                       int(lam_scaled_grid.size)],
        "seed": seed,
    }

    S = s_grid[:, None]
    lam = S ** (1.0 / alpha) * lam_scaled_grid[None, :]

    def phi(ss, ll):
        sc = ss ** (-1.0 / alpha)
        return np.maximum(unit_density(alpha, ll * sc) * sc, 0.0)

    phi_s = phi(S, lam)
    phi_cs = phi(c * S, lam)
    phi_as = phi(alpha * S, lam)

    results = []

    worst, ok = _margin(c ** k1 * phi_s, phi_cs)
    results.append(InequalityResult("csf1", grid_spec, worst, ok))

    # d/dlam (lam^p phi) >= 0 by Richardson-extrapolated central differences
    p = 1.0 + alpha * k1

    def weighted(ll):
        return ll ** p * phi(S, ll)

    h = 1e-3 * lam
    d1 = (weighted(lam + h) - weighted(lam - h)) / (2 * h)
    d2 = (weighted(lam + 2 * h) - weighted(lam - 2 * h)) / (4 * h)
    deriv = (4.0 * d1 - d2) / 3.0
    scale = np.maximum(np.abs(weighted(lam)) / lam, 1e-300)
    worst = float(np.min(deriv / scale))
    results.append(InequalityResult("csfla", grid_spec, worst, worst >= -1e-7))

    for j in range(1, max(1, j_max) + 1):
        lhs = np.abs(S ** j * _sderiv_grid(alpha, S, lam, j))
        const_c = max(j * k1 / c ** k1, j / (c ** k2 * (1.0 - c) * alpha)) ** j
        worst, ok = _margin(lhs, const_c * phi_cs)
        results.append(InequalityResult(f"cdsf_c_j{j}", grid_spec, worst, ok))
        const_a = (10.0 * j / (1.0 - alpha)) ** j
        worst, ok = _margin(lhs, const_a * phi_as)
        results.append(
            InequalityResult("cdsf" if j == 1 else f"cdsf3_j{j}", grid_spec, worst, ok))

    return DensityInequalityReport(alpha, c, results)
