"""Sectorial H-infinity functional calculus by contour integration.

For a sectorial L and a symbol Phi bounded and holomorphic on the
sector S_eta, Phi(L) is the Cauchy-type integral

    Phi(L) = (1/2 pi i) integral_{gamma_theta} Phi(z) (z - L)^{-1} dz

over the sector boundary at an admissible angle theta (operator type
< theta < eta), traversed counterclockwise around the spectrum: out
along arg z = -theta, back along arg z = +theta.  Symbols with the
H^infty_0 decay |Phi| <= c|z|^r/(1+|z|)^{2r} integrate directly;
general bounded symbols go through the regularization
Phi(L) = psi(L)^{-1} (Phi psi)(L) with psi(z) = z/(1+z)^2.

Imaginary powers come from the subordinated-resolvent integral

    L^{i a s} = Gamma(1-is)^{-1} integral t^{-is} L^a e^{-t L^a} dt,

evaluated with the Balakrishnan fractional power and Pade exponentials
so the spectral oracle stays independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gamma as complex_gamma

from .errors import ConvergenceError, ParameterError
from .quadrature import panel_nodes
from .semigroup import MatrixGenerator, fractional_power_balakrishnan
from scipy.linalg import expm


# --- symbols -------------------------------------------------------------------


@dataclass
class HolomorphicSymbol:
    """A function analytic and bounded on the sector S_eta.

    decay_class "h_infty_zero" additionally asserts the two-sided decay
    |Phi(z)| <= c |z|^r / (1+|z|)^{2r}; spot_check_decay samples rays to
    validate the user's claim.
    """

    name: str
    eta: float
    fn: Callable
    decay_class: str = "h_infty"
    decay_r: float = 0.0
    decay_c: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.eta < math.pi:
            raise ParameterError("eta must lie in (0, pi)")
        if self.decay_class not in ("h_infty", "h_infty_zero"):
            raise ParameterError("decay_class must be h_infty or h_infty_zero")
        if self.decay_class == "h_infty_zero" and self.decay_r <= 0:
            raise ParameterError("h_infty_zero needs a positive decay exponent")

    def __call__(self, z):
        return self.fn(np.asarray(z, dtype=complex))

    def spot_check_decay(self, n_samples: int = 120, angle_frac: float = 0.98) -> bool:
        r = np.geomspace(1e-8, 1e8, n_samples)
        ok = True
        for ang in (-angle_frac * self.eta, 0.0, angle_frac * self.eta):
            vals = np.abs(self(r * np.exp(1j * ang)))
            if self.decay_class == "h_infty_zero":
                bound = self.decay_c * r ** self.decay_r / (1 + r) ** (2 * self.decay_r)
                ok &= bool(np.all(vals <= bound + 1e-12))
            else:
                ok &= bool(np.all(vals < 1e6))
        return ok


def symbol_psi() -> HolomorphicSymbol:
    # sup over S_eta of |psi(z)| (1+|z|)^2/|z| = 4/(2+2cos(eta)), at |z|=1
    eta = 0.9 * math.pi
    return HolomorphicSymbol("psi", eta, lambda z: z / (1 + z) ** 2,
                             "h_infty_zero", decay_r=1.0,
                             decay_c=4.2 / (2.0 + 2.0 * math.cos(eta)))


def symbol_power(alpha: float) -> HolomorphicSymbol:
    """z**alpha (principal). Polynomially bounded, admitted via regularization."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError("power symbol supports exponents in (0,1)")
    return HolomorphicSymbol(f"power({alpha})", 0.9 * math.pi,
                             lambda z: z ** alpha, "h_infty")


def symbol_imaginary(s: float) -> HolomorphicSymbol:
    return HolomorphicSymbol(f"imaginary({s})", 0.8 * math.pi,
                             lambda z: z ** (1j * s), "h_infty")


def symbol_exp_decay() -> HolomorphicSymbol:
    # |z e^-z| (1+|z|)^2/|z| peaks near r = 2/cos(eta) - 1 on the eta-ray
    return HolomorphicSymbol("exp_decay", 0.45 * math.pi,
                             lambda z: z * np.exp(-z), "h_infty_zero",
                             decay_r=1.0, decay_c=30.0)


def symbol_inv_log() -> HolomorphicSymbol:
    return HolomorphicSymbol("inv_log", 0.9 * math.pi,
                             lambda z: 1.0 / np.log(2.0 + z), "h_infty")


SYMBOLS = {
    "psi": symbol_psi,
    "power": symbol_power,
    "imaginary": symbol_imaginary,
    "exp_decay": symbol_exp_decay,
    "inv_log": symbol_inv_log,
}


def make_symbol(name: str, **params) -> HolomorphicSymbol:
    if name not in SYMBOLS:
        raise ParameterError(f"unknown symbol {name!r}; have {sorted(SYMBOLS)}")
    return SYMBOLS[name](**params)


# --- contours ------------------------------------------------------------------


@dataclass(frozen=True)
class ContourSpec:
    """Two-ray sector boundary, log-spaced radially around the spectral scale."""

    theta: Optional[float] = None
    nodes_per_decade: int = 40
    r_lo_factor: float = 1e-9
    r_hi_factor: float = 1e9

    def __post_init__(self):
        if self.r_lo_factor > 1e-6 or self.r_hi_factor < 1e6:
            raise ParameterError("contour must span at least [1e-6, 1e6] x scale")
        if self.nodes_per_decade < 8:
            raise ParameterError("need at least 8 radial nodes per decade")


def operator_type_angle(gen: MatrixGenerator) -> float:
    """Numerical sectoriality angle: max |arg lambda| over the spectrum."""
    w, _, _ = gen._eig
    w = w[np.abs(w) > 1e-14 * max(1.0, np.max(np.abs(w)))]
    if w.size == 0:
        return 0.0
    return float(np.max(np.abs(np.angle(w))))


def resolvent(gen: MatrixGenerator, z: complex) -> np.ndarray:
    """(z - L)^{-1} by direct solve; near-singular systems are flagged."""
    A = z * np.eye(gen.dim) - gen.L
    try:
        out = np.linalg.solve(A, np.eye(gen.dim))
    except np.linalg.LinAlgError as exc:
        raise ParameterError(f"z={z} is on the spectrum") from exc
    resid = np.linalg.norm(A @ out - np.eye(gen.dim))
    if not np.all(np.isfinite(out)) or resid > 1e-6:
        raise ParameterError(f"resolvent solve near-singular at z={z}")
    return out


def _contour_nodes(gen: MatrixGenerator, spec: ContourSpec, eta: float):
    omega = operator_type_angle(gen)
    theta = spec.theta
    if theta is None:
        theta = min(0.85 * eta, omega + 0.75 * (eta - omega))
    if not omega < theta < eta:
        raise ParameterError(
            f"contour angle {theta:.3f} must lie strictly between the operator "
            f"type {omega:.3f} and the symbol sector {eta:.3f}")
    rho = max(gen.spectral_scale(), 1e-12)
    lo, hi = spec.r_lo_factor * rho, spec.r_hi_factor * rho
    span = math.log(hi) - math.log(lo)
    n = max(16, int(math.ceil(math.log10(hi / lo) * spec.nodes_per_decade)))
    w, wt = panel_nodes(math.log(lo), math.log(hi),
                        panel_width=8.0 * span / n, order=8)
    r = np.exp(w)
    return theta, r, wt * r        # weights carry the dr = r dw Jacobian


def phi_of_L_contour(gen: MatrixGenerator, symbol: HolomorphicSymbol,
                     contour: Optional[ContourSpec] = None,
                     check: bool = True) -> np.ndarray:
    """Direct Cauchy-integral calculus for H^infty_0 symbols.

    Counterclockwise sector boundary: out along e^{-i theta}, in along
    e^{+i theta}.  With check=True the node count is doubled once and a
    relative movement beyond 1e-8 raises ConvergenceError.
    """
    if symbol.decay_class != "h_infty_zero":
        raise ParameterError("direct contour calculus needs an H^infty_0 symbol")
    contour = contour or ContourSpec()

    def evaluate(spec: ContourSpec) -> np.ndarray:
        theta, r, wts = _contour_nodes(gen, spec, symbol.eta)
        acc = np.zeros((gen.dim, gen.dim), dtype=complex)
        for rr, ww in zip(r, wts):
            z_lo = rr * np.exp(-1j * theta)
            z_hi = rr * np.exp(1j * theta)
            acc += ww * (symbol(z_lo) * np.exp(-1j * theta) * resolvent(gen, z_lo)
                         - symbol(z_hi) * np.exp(1j * theta) * resolvent(gen, z_hi))
        return acc / (2j * math.pi)

    out = evaluate(contour)
    if check:
        fine = ContourSpec(contour.theta, contour.nodes_per_decade * 2,
                           contour.r_lo_factor, contour.r_hi_factor)
        out2 = evaluate(fine)
        scale = max(np.max(np.abs(out2)), 1e-300)
        if np.max(np.abs(out - out2)) > 1e-8 * scale + 1e-14:
            raise ConvergenceError("contour quadrature did not converge under "
                                   "node doubling")
        out = out2
    if np.isrealobj(gen.L) and np.max(np.abs(out.imag)) < 1e-9 * max(
            1.0, np.max(np.abs(out.real))):
        return out.real
    return out


def _kernel_basis(gen: MatrixGenerator) -> Optional[np.ndarray]:
    """Orthonormal basis of ker L, or None when L is injective."""
    _, sv, vt = np.linalg.svd(gen.L)
    scale = max(sv[0], 1.0)
    null = vt[sv <= 1e-12 * scale].conj().T
    return null if null.shape[1] else None


def phi_of_L_regularized(gen: MatrixGenerator, symbol: HolomorphicSymbol,
                         contour: Optional[ContourSpec] = None,
                         kernel_mode: str = "deflate",
                         eps_shift: float = 1e-6,
                         regularizer_order: int = 1) -> np.ndarray:
    """Phi(L) = psi(L)^{-k} (Phi psi^k)(L) with psi(z) = z/(1+z)^2.

    k = regularizer_order is 1 for bounded symbols; polynomially growing
    symbols (the power family) need k = 2 so the product still decays at
    infinity.  Generators with nontrivial kernel are deflated onto the
    complement of the kernel first (the returned operator acts as zero
    there); kernel_mode="shift" replaces L by L + eps_shift instead.
    """
    k = regularizer_order
    if k not in (1, 2):
        raise ParameterError("regularizer_order must be 1 or 2")
    null = _kernel_basis(gen)
    if null is not None:
        if kernel_mode == "shift":
            shifted = MatrixGenerator(gen.L + eps_shift * np.eye(gen.dim),
                                      gen.name + "+eps")
            return phi_of_L_regularized(shifted, symbol, contour, "deflate",
                                        regularizer_order=k)
        if kernel_mode != "deflate":
            raise ParameterError("kernel_mode must be deflate or shift")
        u_basis, sv, _ = np.linalg.svd(np.eye(gen.dim) - null @ null.conj().T)
        q = u_basis[:, sv > 0.5]
        reduced = MatrixGenerator(q.conj().T @ gen.L @ q, gen.name + "|range")
        inner = phi_of_L_regularized(reduced, symbol, contour, "deflate",
                                     regularizer_order=k)
        return q @ inner @ q.conj().T
    eye = np.eye(gen.dim)
    psi_L = np.linalg.matrix_power(gen.L, k) @ np.linalg.matrix_power(
        eye + gen.L, -2 * k)
    product = HolomorphicSymbol(
        f"({symbol.name})*psi^{k}", symbol.eta,
        lambda z: symbol.fn(z) * (z / (1 + z) ** 2) ** k,
        "h_infty_zero", decay_r=1.0, decay_c=1e6)
    phi_psi = phi_of_L_contour(gen, product, contour)
    out = np.linalg.solve(psi_L.astype(complex), phi_psi.astype(complex))
    if np.isrealobj(gen.L) and np.max(np.abs(out.imag)) < 1e-9 * max(
            1.0, np.max(np.abs(out.real))):
        return out.real
    return out


def spectral_oracle(gen: MatrixGenerator, symbol_or_fn) -> np.ndarray:
    """V Phi(Lambda) V^{-1} for diagonalizable test generators."""
    fn = symbol_or_fn.fn if isinstance(symbol_or_fn, HolomorphicSymbol) \
        else symbol_or_fn
    return gen.spectral_map(lambda w: np.asarray(fn(np.asarray(w, dtype=complex))))


# --- imaginary powers ------------------------------------------------------------


def imaginary_power_spectral(gen: MatrixGenerator, s: float) -> np.ndarray:
    def fn(w):
        w = np.asarray(w, dtype=complex)
        out = np.ones_like(w)
        nz = np.abs(w) > 0
        out[nz] = w[nz] ** (1j * s)
        return out
    return gen.spectral_map(fn)


def imaginary_power(gen: MatrixGenerator, s: float, alpha: float = 0.5,
                    eps: float = 1e-6) -> np.ndarray:
    """L^{is} = Gamma(1 - is/alpha)^{-1} int_0^inf t^{-is/alpha} A e^{-tA} dt,
    A = L^alpha.

    A comes from the Balakrishnan integral and e^{-tA} from Pade, so the
    eigendecomposition remains an independent oracle.  |s|/alpha beyond
    ~20 makes the log-oscillation outrun the panel resolution.
    """
    if abs(s) / alpha > 20.0:
        raise ConvergenceError("oscillatory quadrature unreliable for |s|/alpha > 20")
    null = _kernel_basis(gen)
    if null is not None:
        raise ParameterError("imaginary powers need an injective generator "
                             "(deflate or shift first)")
    u = s / alpha
    A = np.column_stack([
        fractional_power_balakrishnan(gen, alpha, e)
        for e in np.eye(gen.dim)])
    # settle time: ||e^{-TA}|| decays like exp(-T lambda_min(A))
    T = 1.0
    for _ in range(60):
        if np.max(np.abs(expm(-T * A))) < 1e-14:
            break
        T *= 2.0
    w_nodes, w_wts = panel_nodes(math.log(eps), math.log(T),
                                 panel_width=min(0.5, 1.5 / max(abs(u), 1.0)),
                                 order=12)
    out = np.zeros((gen.dim, gen.dim), dtype=complex)
    for w, wt in zip(w_nodes, w_wts):
        t = math.exp(w)
        out += wt * t ** (1.0 - 1j * u) * (A @ expm(-t * A))
    # analytic [0, eps] slice: A t^{-iu} (I - tA + ...) integrates to
    out += A * eps ** (1.0 - 1j * u) / (1.0 - 1j * u)
    out -= (A @ A) * eps ** (2.0 - 1j * u) / (2.0 - 1j * u)
    return out / complex_gamma(1.0 - 1j * u)


# --- sign-averaged operator M_a ---------------------------------------------------


@dataclass(frozen=True)
class SignFunction:
    """Piecewise-constant a(t) on finite breakpoints, compact support."""

    breakpoints: np.ndarray      # increasing, >= 0, length m+1
    values: np.ndarray           # length m

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0) or b[0] < 0:
            raise ParameterError("breakpoints must be increasing and nonnegative")
        if v.shape != (b.size - 1,):
            raise ParameterError("need one value per interval")
        if not np.isfinite(b[-1]):
            raise ParameterError("a(t) must have compact support")

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.zeros_like(t)
        out[inside] = self.values[idx[inside]]
        return out


def constant_sign(value: float = 1.0, t0: float = 0.0, t1: float = 1.0) -> SignFunction:
    return SignFunction(np.array([t0, t1]), np.array([value]))


def dyadic_sign_pattern(signs: Sequence[float], t0: float = 0.01,
                        start_at_zero: bool = True) -> SignFunction:
    """Signs on dyadic blocks t0*2^k; an optional [0, t0) head block."""
    signs = np.asarray(signs, dtype=float)
    edges = t0 * 2.0 ** np.arange(signs.size if start_at_zero else signs.size + 1)
    if start_at_zero:
        edges = np.concatenate([[0.0], edges])
    return SignFunction(edges, signs)


def a_condition_constant(a: SignFunction, n_grid: int = 400) -> float:
    """c_a = sup_s sqrt( s * int_s^inf |a(v-s)|^2 v^-2 dv ).

    Piecewise-constant a gives the closed form
    s * sum_i |a_i|^2 (1/(s+b_i) - 1/(s+b_{i+1})); the sup adds the
    analytic s->0+ limit |a(0+)|^2 (nonzero only when the support
    touches 0) to the log-spaced grid maximum.
    """
    b = a.breakpoints
    v2 = np.abs(a.values) ** 2

    def g(svals):
        svals = np.atleast_1d(np.asarray(svals, dtype=float))
        terms = v2[None, :] * (1.0 / (svals[:, None] + b[None, :-1])
                               - 1.0 / (svals[:, None] + b[None, 1:]))
        return svals * terms.sum(axis=1)

    hi = max(b[-1], 1.0)
    lo = max(b[b > 0].min() if np.any(b > 0) else 1.0, 1e-12)
    s_grid = np.geomspace(lo * 1e-6, hi * 1e6, n_grid)
    vals = g(s_grid)
    best = float(np.max(vals))
    # two rounds of local refinement around the grid argmax
    idx = int(np.argmax(vals))
    lo_i, hi_i = max(idx - 1, 0), min(idx + 1, s_grid.size - 1)
    window = (s_grid[lo_i], s_grid[hi_i])
    for _ in range(2):
        fine = np.geomspace(window[0], window[1], 200)
        fvals = g(fine)
        j = int(np.argmax(fvals))
        best = max(best, float(fvals[j]))
        window = (fine[max(j - 1, 0)], fine[min(j + 1, fine.size - 1)])
    if b[0] == 0.0:
        best = max(best, float(v2[0]))
    return math.sqrt(max(best, 0.0))


def m_a_operator(gen: MatrixGenerator, alpha: float, a: SignFunction,
                 f: np.ndarray) -> np.ndarray:
    """M_a f = int a(t) d/dt T_{t,alpha} f dt over the support of a.

    Piecewise-constant a telescopes exactly:
    sum_i a_i (T_{b_{i+1},alpha} f - T_{b_i,alpha} f).
    """
    if not 0.0 < alpha <= 1.0:
        raise ParameterError("alpha must lie in (0,1]")
    f = np.asarray(f)
    from .semigroup import subordinated_action
    cache = {}

    def T(t):
        if t not in cache:
            cache[t] = subordinated_action(gen, alpha, t, f)
        return cache[t]

    out = np.zeros_like(np.asarray(f, dtype=float))
    for a_i, b0, b1 in zip(a.values, a.breakpoints[:-1], a.breakpoints[1:]):
        if a_i == 0.0:
            continue
        out = out + a_i * (T(b1) - T(b0))
    return out


# --- scalar symbol tables -----------------------------------------------------------


def word_length_symbol_table(symbol: HolomorphicSymbol, max_length: int):
    """Phi(k) for word lengths k = 0..max_length (scalar multiplier level)."""
    if max_length < 0:
        raise ParameterError("max_length must be nonnegative")
    ks = np.arange(max_length + 1, dtype=float)
    vals = symbol(ks)
    vals = np.real_if_close(vals, tol=1e6)
    return [{"length": int(k), "value": complex(v).real if np.isreal(v) else complex(v)}
            for k, v in zip(ks, np.asarray(vals))]
