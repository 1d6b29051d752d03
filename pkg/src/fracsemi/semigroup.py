"""Concrete positivity-preserving semigroups and their fractional variants.

Two families of sources:

* ``MatrixGenerator`` -- a dense negative generator L with T_t = e^{-tL};
  spectral actions for diagonalizable L, Pade scaling-and-squaring
  (scipy expm) for quadrature routes so dual-route checks stay
  independent of the eigendecomposition.
* ``KernelSemigroup`` -- 1-D heat, Ornstein-Uhlenbeck (Mehler kernel) and
  translation semigroups discretized on a uniform grid; kernel rows are
  truncated Gaussians, and each application reports the interior region
  unaffected by that truncation.

The subordinated semigroup T_{t,alpha} = e^{-t L^alpha} is realized by
quadrature of T_u f against the subordinator density (substituting
u = t^{1/alpha} v so the weight is t-independent), with the fat right
tail folded into a projection-style correction; a spectral route exists
for matrices and serves as the oracle partner.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np
from scipy.linalg import expm

from .errors import GridError, ParameterError
from .quadrature import panel_nodes
from . import subordinator as sub

_FLAG_TOL = 1e-12


# --- grids and grid functions -----------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D grid; periodic grids exclude the right endpoint."""

    n: int
    x_min: float
    x_max: float
    periodic: bool = False

    def __post_init__(self):
        if self.n < 2 or not self.x_max > self.x_min:
            raise GridError("grid needs n >= 2 and x_max > x_min")

    @property
    def spacing(self) -> float:
        length = self.x_max - self.x_min
        return length / self.n if self.periodic else length / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        if self.periodic:
            return self.x_min + self.spacing * np.arange(self.n)
        return np.linspace(self.x_min, self.x_max, self.n)


@dataclass
class GridFunction:
    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.n,):
            raise GridError("value vector does not match the grid")

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


# --- matrix generators --------------------------------------------------------


@dataclass
class MatrixGenerator:
    """Dense negative generator L of T_t = e^{-tL} with structure flags."""

    L: np.ndarray
    name: str = "matrix"

    def __post_init__(self):
        self.L = np.asarray(self.L, dtype=complex)
        if self.L.ndim != 2 or self.L.shape[0] != self.L.shape[1]:
            raise ParameterError("generator must be a square matrix")
        if np.allclose(self.L.imag, 0.0):
            self.L = self.L.real.astype(float)

    @property
    def dim(self) -> int:
        return self.L.shape[0]

    @cached_property
    def flags(self) -> dict:
        L = self.L
        off = L.copy()
        np.fill_diagonal(off, 0.0)
        real = np.isrealobj(L)
        return {
            "off_diag_nonpositive": bool(real and np.all(off.real <= _FLAG_TOL)),
            "row_sums_nonneg": bool(real and np.all(L.sum(axis=1).real >= -_FLAG_TOL)),
            "symmetric": bool(np.allclose(L, L.conj().T)),
            "markov": bool(real and np.all(np.abs(L.sum(axis=1)) <= _FLAG_TOL)
                           and np.all(off.real <= _FLAG_TOL)),
        }

    @cached_property
    def _eig(self):
        if self.flags["symmetric"] and np.isrealobj(self.L):
            w, v = np.linalg.eigh(self.L)
            return w.astype(complex), v.astype(complex), v.T.astype(complex)
        w, v = np.linalg.eig(self.L)
        return w, v, np.linalg.inv(v)

    def spectral_map(self, fn) -> np.ndarray:
        """V fn(Lambda) V^-1 for a scalar map fn on the spectrum."""
        w, v, vinv = self._eig
        out = (v * fn(w)[None, :]) @ vinv
        if np.isrealobj(self.L) and np.max(np.abs(out.imag)) < 1e-10 * max(
                1.0, np.max(np.abs(out.real))):
            return out.real
        return out

    def semigroup(self, t: float) -> np.ndarray:
        """e^{-tL} via the spectral route."""
        if t < 0:
            raise ParameterError("t must be nonnegative")
        return self.spectral_map(lambda w: np.exp(-t * w))

    def semigroup_pade(self, t: float) -> np.ndarray:
        """e^{-tL} via scaling-and-squaring, independent of _eig."""
        if t < 0:
            raise ParameterError("t must be nonnegative")
        return expm(-t * self.L)

    def power_spectral(self, alpha: float, j: int = 1) -> np.ndarray:
        """(L^alpha)^j through the eigendecomposition, principal branch."""
        return self.spectral_map(lambda w: _principal_power(w, alpha) ** j)

    def subordinated_spectral(self, alpha: float, t: float) -> np.ndarray:
        """e^{-t L^alpha} through the eigendecomposition."""
        if t < 0:
            raise ParameterError("t must be nonnegative")
        return self.spectral_map(lambda w: np.exp(-t * _principal_power(w, alpha)))

    def spectral_scale(self) -> float:
        w, _, _ = self._eig
        return float(np.max(np.abs(w)))


def _principal_power(w: np.ndarray, alpha: float) -> np.ndarray:
    """w**alpha with the principal branch and 0**alpha = 0.

    Eigenvalues within 1e-12 of zero (relative to the spectral scale)
    are clamped to zero first: the fractional power amplifies kernel
    noise eps to eps**alpha, which would pollute Markov constants.
    """
    w = np.asarray(w, dtype=complex)
    out = np.zeros_like(w)
    nz = np.abs(w) > 1e-12 * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    out[nz] = w[nz] ** alpha
    return out


# --- kernel semigroups --------------------------------------------------------


@dataclass
class KernelSemigroup:
    """heat1d | ornstein_uhlenbeck1d | translation1d on a uniform grid.

    Kernel quadrature truncates each Gaussian row at the grid boundary;
    valid_mask(t) marks the points whose rows keep >= 8 standard
    deviations inside the grid, and reports should take sups there.
    """

    kind: str
    grid: GridSpec
    name: str = ""

    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        kinds = ("heat1d", "ornstein_uhlenbeck1d", "translation1d")
        if self.kind not in kinds:
            raise ParameterError(f"kind must be one of {kinds}")
        if self.kind == "translation1d" and not self.grid.periodic:
            raise GridError("translation1d needs a periodic grid")
        if not self.name:
            self.name = self.kind

    def matrix(self, t: float) -> np.ndarray:
        if t < 0:
            raise ParameterError("t must be nonnegative")
        key = round(float(t), 14)
        if key in self._cache:
            return self._cache[key]
        x = self.grid.points
        h = self.grid.spacing
        if t == 0.0:
            mat = np.eye(self.grid.n)
        elif self.kind == "heat1d":
            mat = np.exp(-(x[:, None] - x[None, :]) ** 2 / (4.0 * t)) \
                * (h / math.sqrt(4.0 * math.pi * t))
        elif self.kind == "ornstein_uhlenbeck1d":
            e = math.exp(-t)
            var = 1.0 - e * e
            mat = np.exp(-(e * x[:, None] - x[None, :]) ** 2 / var) \
                * (h / math.sqrt(math.pi * var))
        else:
            shift = int(round(t / h))
            mat = np.roll(np.eye(self.grid.n), shift, axis=1)
        if len(self._cache) > 16:
            self._cache.clear()
        self._cache[key] = mat
        return mat

    def apply(self, t: float, values: np.ndarray) -> np.ndarray:
        if self.kind == "translation1d":
            return np.roll(values, int(round(t / self.grid.spacing)))
        return self.matrix(t) @ values

    def apply_at(self, t: float, x_eval: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Kernel quadrature at arbitrary evaluation points (non-translation)."""
        if self.kind == "translation1d":
            raise ParameterError("translation1d evaluates on its own grid only")
        if t <= 0:
            raise ParameterError("off-grid evaluation needs t > 0")
        x = self.grid.points
        h = self.grid.spacing
        if self.kind == "heat1d":
            rows = np.exp(-(x_eval[:, None] - x[None, :]) ** 2 / (4.0 * t)) \
                * (h / math.sqrt(4.0 * math.pi * t))
        else:
            e = math.exp(-t)
            var = 1.0 - e * e
            rows = np.exp(-(e * x_eval[:, None] - x[None, :]) ** 2 / var) \
                * (h / math.sqrt(math.pi * var))
        return rows @ values

    def kernel_width(self, t: float) -> float:
        """Standard deviation of the kernel row as a function of y."""
        if self.kind == "heat1d":
            return math.sqrt(2.0 * t)
        if self.kind == "ornstein_uhlenbeck1d":
            return math.sqrt((1.0 - math.exp(-2.0 * t)) / 2.0)
        return 0.0

    def valid_mask(self, t: float, n_sigma: float = 8.0) -> np.ndarray:
        """Points whose kernel row keeps n_sigma deviations inside the grid."""
        x = self.grid.points
        if self.kind == "translation1d" or t == 0.0:
            return np.ones(self.grid.n, dtype=bool)
        w = self.kernel_width(t)
        if self.kind == "heat1d":
            centers = x
        else:
            centers = math.exp(-t) * x
        return (centers - n_sigma * w >= self.grid.x_min) & \
               (centers + n_sigma * w <= self.grid.x_max)

    def boundary_margin(self, t: float) -> float:
        """Largest truncated row mass over the grid (one-sided erfc bound)."""
        if self.kind == "translation1d" or t == 0.0:
            return 0.0
        x = self.grid.points
        w = self.kernel_width(t)
        centers = x if self.kind == "heat1d" else math.exp(-t) * x
        d = np.minimum(centers - self.grid.x_min, self.grid.x_max - centers)
        from scipy.special import erfc
        return float(np.max(erfc(np.maximum(d, 0.0) / (w * math.sqrt(2.0)))))

    def min_generator_step(self) -> float:
        """Smallest FD step whose kernel the grid still resolves."""
        h = self.grid.spacing
        if self.kind == "heat1d":
            return 0.75 * (1.2 * h) ** 2    # width sqrt(2t) >= 1.2 h
        if self.kind == "ornstein_uhlenbeck1d":
            return 1.5 * (1.2 * h) ** 2     # width ~ sqrt(t)
        return h                            # translation: one-site shift

    def generator_apply(self, values: np.ndarray, h: float = 1e-4) -> np.ndarray:
        """L f from the semigroup itself: Richardson on (f - T_h f)/h.

        The step is floored so the step-h kernel stays wider than the
        grid spacing; below that the discretized kernel aliases.
        """
        h = max(h, self.min_generator_step())
        a1 = (values - self.apply(h, values)) / h
        a2 = (values - self.apply(2.0 * h, values)) / (2.0 * h)
        return 2.0 * a1 - a2


GeneratorLike = Union[MatrixGenerator, KernelSemigroup]


# --- subordinated actions ------------------------------------------------------


def subordination_weights(alpha: float, *, mass_tol: float = 1e-10,
                          panel_width: float = 0.4, order: int = 12):
    """Nodes v_i and weights phi_{1,alpha}(v_i) w_i plus the tail mass."""
    grid = sub.density_grid(alpha, mass_tol=mass_tol, panel_width=panel_width,
                            order=order)
    return grid.nodes, grid.weights, grid.tail_mass


def subordinated_action(gen: MatrixGenerator, alpha: float, t: float,
                        f: np.ndarray, route: str = "spectral",
                        mass_tol: float = 1e-10) -> np.ndarray:
    """T_{t,alpha} f for a matrix generator.

    route="spectral" maps the eigenvalues; route="quadrature" integrates
    e^{-uL}f (Pade route) against the subordinator density with
    u = t^{1/alpha} v, adding tail_mass * T_{u_max} f for the omitted
    fat tail.
    """
    if not 0.0 < alpha <= 1.0:
        raise ParameterError("alpha must lie in (0,1]")
    if t < 0:
        raise ParameterError("t must be nonnegative")
    if alpha == 1.0:
        mat = gen.semigroup(t) if route == "spectral" else gen.semigroup_pade(t)
        return mat @ f
    if route == "spectral":
        return gen.subordinated_spectral(alpha, t) @ f
    if t == 0.0:
        return np.asarray(f, dtype=float).copy()
    nodes, weights, tail = subordination_weights(alpha, mass_tol=mass_tol)
    scale = t ** (1.0 / alpha)
    # past the settling time the Pade route overflows and T_u f is a
    # constant vector anyway; freeze it there
    u_cap = 2.0 * _tail_start(gen, f)
    settled = expm(-u_cap * gen.L) @ f
    out = np.zeros(gen.dim, dtype=complex)
    for v, w in zip(nodes, weights):
        u = scale * v
        out += w * (settled if u >= u_cap else expm(-u * gen.L) @ f)
    last = scale * nodes[-1]
    out += tail * (settled if last >= u_cap else expm(-last * gen.L) @ f)
    return out.real if np.isrealobj(gen.L) else out


@dataclass
class SemigroupOperator:
    """T_{t,alpha} acting on grid functions / vectors; alpha=1 is T_t."""

    source: GeneratorLike
    alpha: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError("alpha must lie in (0,1]")
        if self.t < 0:
            raise ParameterError("t must be nonnegative")

    def apply(self, f, route: str = "spectral"):
        values = f.values if isinstance(f, GridFunction) else np.asarray(f)
        if isinstance(self.source, MatrixGenerator):
            out = subordinated_action(self.source, self.alpha, self.t, values,
                                      route=route)
        else:
            if self.alpha == 1.0:
                out = self.source.apply(self.t, values)
            elif self.t == 0.0:
                out = values.copy()
            else:
                nodes, weights, tail = subordination_weights(self.alpha)
                scale = self.t ** (1.0 / self.alpha)
                out = np.zeros_like(values, dtype=np.result_type(values, float))
                for v, w in zip(nodes, weights):
                    out = out + w * self.source.apply(scale * v, values)
                out = out + tail * self.source.apply(scale * nodes[-1], values)
        if isinstance(f, GridFunction):
            return GridFunction(out, f.grid)
        return out


def apply(op: SemigroupOperator, f, route: str = "spectral"):
    """Functional form of SemigroupOperator.apply."""
    return op.apply(f, route=route)


# --- fractional powers ----------------------------------------------------------


def _tail_start(gen: MatrixGenerator, f: np.ndarray, tol: float = 1e-10) -> float:
    """Smallest power-of-two T with ||T_T f - T_{2T} f|| <= tol ||f||."""
    norm_f = max(np.max(np.abs(f)), 1e-300)
    T = 1.0
    for _ in range(60):
        d = gen.semigroup_pade(T) @ f - gen.semigroup_pade(2.0 * T) @ f
        if np.max(np.abs(d)) <= tol * norm_f:
            return T
        T *= 2.0
    raise ParameterError("semigroup does not settle; tail truncation failed")


def fractional_power_balakrishnan(gen: MatrixGenerator, alpha: float,
                                  f: np.ndarray, eps: float = 1e-3,
                                  panel_width: float = 0.35,
                                  order: int = 12) -> np.ndarray:
    """L^alpha f = Gamma(-alpha)^{-1} integral (T_t - id) f t^{-1-alpha} dt.

    [0, eps] uses the Taylor slice (-tLf + t^2 L^2 f / 2) integrated in
    closed form; [eps, T] is log-space Gauss-Legendre on Pade semigroup
    actions; the tail adds (T_T f - f) T^-alpha / alpha once the
    semigroup has settled (adaptive doubling).  Everything avoids the
    eigendecomposition, so the spectral route is an independent oracle.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    f = np.asarray(f, dtype=float)
    Lf = (gen.L @ f).real if np.isrealobj(gen.L) else gen.L @ f
    L2f = (gen.L @ Lf).real if np.isrealobj(gen.L) else gen.L @ Lf
    near = -Lf * eps ** (1.0 - alpha) / (1.0 - alpha) \
        + L2f * eps ** (2.0 - alpha) / (2.0 * (2.0 - alpha))
    T = max(_tail_start(gen, f), 4.0 * eps)
    w_nodes, w_weights = panel_nodes(math.log(eps), math.log(T), panel_width, order)
    acc = np.zeros_like(f, dtype=float)
    for w, wt in zip(w_nodes, w_weights):
        u = math.exp(w)
        acc += wt * (u ** (-alpha)) * (gen.semigroup_pade(u) @ f - f)
    gT = gen.semigroup_pade(T) @ f
    tail = (gT - f) * T ** (-alpha) / alpha
    return (near + acc + tail) / math.gamma(-alpha)


def fractional_power_spectral(gen: MatrixGenerator, alpha: float,
                              f: Optional[np.ndarray] = None):
    mat = gen.power_spectral(alpha)
    return mat if f is None else mat @ np.asarray(f)


# --- time derivatives -------------------------------------------------------------


@dataclass
class RouteComparison:
    """Two computations of the same vector plus their disagreement."""

    primary: np.ndarray
    secondary: np.ndarray
    label_primary: str
    label_secondary: str

    @property
    def disagreement(self) -> float:
        scale = max(np.max(np.abs(self.primary)), np.max(np.abs(self.secondary)), 1e-300)
        return float(np.max(np.abs(self.primary - self.secondary)) / scale)

    @property
    def agree(self) -> bool:
        return self.disagreement <= 1e-4


def time_derivative(gen: MatrixGenerator, alpha: float, t: float,
                    f: np.ndarray, j: int = 1,
                    dual_route: bool = False):
    """d^j/dt^j T_{t,alpha} f.

    The spectral route applies (-L^alpha)^j e^{-t L^alpha}.  With
    dual_route=True a subordinator-side computation (quadrature of
    T_u f against the j-th time derivative of the density, obtained by
    differentiating the inversion integrand) is returned alongside for
    the stability flag.
    """
    if j < 1:
        raise ParameterError("derivative order must be >= 1")
    if t <= 0:
        raise ParameterError("time derivative needs t > 0")
    f = np.asarray(f)
    spectral = gen.spectral_map(
        lambda w: (-_principal_power(w, alpha)) ** j * np.exp(
            -t * _principal_power(w, alpha))) @ f
    spectral = spectral.real if np.isrealobj(gen.L) else spectral
    if not dual_route:
        return spectral
    if alpha == 1.0:
        raise ParameterError("the subordinator route needs alpha < 1")
    v_min = sub.left_tail_cut(alpha, 37.0)
    v_max = sub.right_tail_cut(alpha, 1e-10)
    scale = t ** (1.0 / alpha)
    u_nodes, u_weights = panel_nodes(math.log(scale * v_min),
                                     math.log(scale * v_max), 0.4, 12)
    u = np.exp(u_nodes)
    dphi, _ = sub._talbot_once(alpha, t, u, 32, order=j)
    u_cap = 2.0 * _tail_start(gen, np.asarray(f, dtype=float))
    settled = gen.semigroup_pade(u_cap) @ f
    other = np.zeros_like(np.asarray(f, dtype=float))
    for ui, wi, di in zip(u, u_weights, dphi):
        tf = settled if ui >= u_cap else gen.semigroup_pade(ui) @ f
        other = other + (wi * ui * di) * tf
    if j == 1:
        # tail of d_t phi_{t,a}(u) ~ a u^{-1-a} / Gamma(1-a), t-independent
        tail = u[-1] ** (-alpha) / math.gamma(1.0 - alpha)
        other = other + tail * settled
    return RouteComparison(spectral, other, "spectral", "subordinator")


# --- pointwise inequality reports ----------------------------------------------


@dataclass
class SemigroupCheck:
    check: str
    params: dict
    worst_margin: float
    passed: bool
    monitored: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"check": self.check, "worst_margin": self.worst_margin,
             "pass": self.passed}
        d.update(self.params)
        if self.monitored:
            d["monitored"] = self.monitored
        return d


def check_quasi_monotone(gen: MatrixGenerator, alpha: float, c: float,
                         t_grid, f: np.ndarray,
                         tol: float = 1e-9) -> SemigroupCheck:
    """Entrywise c^K1 T_{s,alpha} f <= T_{cs,alpha} f for f >= 0."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise ParameterError("quasi-monotonicity needs f >= 0 entrywise")
    if not 0.0 < c < 1.0:
        raise ParameterError("c must lie in (0,1)")
    k1 = sub.k_index(alpha, 1)
    worst = math.inf
    for s in np.asarray(t_grid, dtype=float):
        lhs = c ** k1 * subordinated_action(gen, alpha, s, f)
        rhs = subordinated_action(gen, alpha, c * s, f)
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
        worst = min(worst, float(np.min((rhs - lhs) / scale)))
    return SemigroupCheck("quasi_monotone",
                          {"generator": gen.name, "alpha": alpha, "c": c,
                           "k1": k1},
                          worst, worst >= -tol)


def check_derivative_bound(gen: MatrixGenerator, alpha: float, t_grid,
                           j: int, f: np.ndarray,
                           tol: float = 1e-9) -> SemigroupCheck:
    """|s^j d_s^j T_{s,alpha} f| <= (10 j/(1-alpha))^j T_{alpha s, alpha} f."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise ParameterError("the derivative bound needs f >= 0 entrywise")
    const = (10.0 * j / (1.0 - alpha)) ** j
    worst = math.inf
    for s in np.asarray(t_grid, dtype=float):
        lhs = np.abs(s ** j * time_derivative(gen, alpha, s, f, j))
        rhs = const * subordinated_action(gen, alpha, alpha * s, f)
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
        worst = min(worst, float(np.min((rhs - lhs) / scale)))
    return SemigroupCheck("derivative_bound",
                          {"generator": gen.name, "alpha": alpha, "j": j,
                           "constant": const},
                          worst, worst >= -tol)


def kadison_schwarz_check(source: GeneratorLike, t: float, f,
                          tol: float = 1e-10) -> SemigroupCheck:
    """|T f|^2 <= ||T 1||_inf T(|f|^2) entrywise for the positive map T_t."""
    if isinstance(source, MatrixGenerator):
        T = source.semigroup(t)
        values = np.asarray(f)
        tf = T @ values
        tf2 = (T @ (np.abs(values) ** 2)).real
        t1 = (T @ np.ones(source.dim)).real
        mask = np.ones(values.shape, dtype=bool)
        name = source.name
    else:
        values = f.values if isinstance(f, GridFunction) else np.asarray(f)
        tf = source.apply(t, values)
        tf2 = source.apply(t, np.abs(values) ** 2)
        t1 = source.apply(t, np.ones_like(values, dtype=float))
        mask = source.valid_mask(t)
        name = source.name
    bound = float(np.max(np.abs(t1[mask])))
    lhs = np.abs(tf) ** 2
    rhs = bound * tf2
    scale = np.maximum(np.maximum(lhs, np.abs(rhs)), 1e-300)
    worst = float(np.min(((rhs - lhs) / scale)[mask]))
    return SemigroupCheck("kadison_schwarz", {"generator": name, "t": t},
                          worst, worst >= -tol)


# --- named registry and config --------------------------------------------------


def two_point() -> MatrixGenerator:
    return MatrixGenerator(np.array([[1.0, -1.0], [-1.0, 1.0]]), "two_point")


def cycle(n: int) -> MatrixGenerator:
    """Shift generator I - S on Z_n, (Sf)(x) = f(x-1)."""
    if n < 2:
        raise ParameterError("cycle needs n >= 2")
    S = np.zeros((n, n))
    for i in range(n):
        S[i, (i - 1) % n] = 1.0      # (Sf)(i) = f(i-1)
    return MatrixGenerator(np.eye(n) - S, f"cycle({n})")


def cycle_sym(n: int) -> MatrixGenerator:
    c = cycle(n).L
    return MatrixGenerator((c + c.T) / 2.0, f"cycle_sym({n})")


def metzler(dim: int = 6, seed: int = 0, shift: float = 0.0) -> MatrixGenerator:
    """Seeded symmetric graph-Laplacian-type generator (+ optional shift)."""
    rng = np.random.default_rng(seed)
    W = rng.uniform(0.1, 1.0, (dim, dim))
    W = (W + W.T) / 2.0
    np.fill_diagonal(W, 0.0)
    L = np.diag(W.sum(axis=1)) - W + shift * np.eye(dim)
    return MatrixGenerator(L, f"metzler{dim}(seed={seed})" +
                           (f"+{shift}" if shift else ""))


def diag_generator(entries) -> MatrixGenerator:
    return MatrixGenerator(np.diag(np.asarray(entries, dtype=float)),
                           f"diag({list(np.asarray(entries, dtype=float))})")


def heat1d(extent: float = 10.0, n: int = 801) -> KernelSemigroup:
    return KernelSemigroup("heat1d", GridSpec(n, -extent, extent))


def ou1d(extent: float = 8.0, n: int = 1601) -> KernelSemigroup:
    return KernelSemigroup("ornstein_uhlenbeck1d", GridSpec(n, -extent, extent))


def translation1d(extent: float = 1.0, n: int = 256) -> KernelSemigroup:
    return KernelSemigroup("translation1d", GridSpec(n, 0.0, extent, periodic=True))


_CALL_RE = re.compile(r"^([a-z_0-9]+)\s*(?:\(([^)]*)\))?$")


def make_generator(spec: str) -> GeneratorLike:
    """Resolve names like 'two_point', 'cycle(8)', 'ou1d(8, 1601)'."""
    m = _CALL_RE.match(spec.strip())
    if not m:
        raise ParameterError(f"cannot parse generator spec {spec!r}")
    name, args = m.group(1), m.group(2)
    argv = [float(a) for a in args.split(",")] if args else []
    if name == "two_point":
        return two_point()
    if name == "cycle":
        return cycle(int(argv[0]) if argv else 8)
    if name == "cycle_sym":
        return cycle_sym(int(argv[0]) if argv else 8)
    if name == "metzler":
        return metzler(int(argv[0]) if argv else 6,
                       int(argv[1]) if len(argv) > 1 else 0,
                       argv[2] if len(argv) > 2 else 0.0)
    if name == "heat1d":
        return heat1d(argv[0] if argv else 10.0,
                      int(argv[1]) if len(argv) > 1 else 801)
    if name == "ou1d":
        return ou1d(argv[0] if argv else 8.0,
                    int(argv[1]) if len(argv) > 1 else 1601)
    if name == "translation1d":
        return translation1d(argv[0] if argv else 1.0,
                             int(argv[1]) if len(argv) > 1 else 256)
    if name == "diag":
        return diag_generator(argv)
    raise ParameterError(f"unknown generator {name!r}")


def parse_generator_config(text: str) -> MatrixGenerator:
    """Flat key-value config: dim = d, entries = row-major floats, name = ...

    Lines starting with # are comments; entries may span multiple lines
    by repeating the key or separating values with whitespace/commas.
    """
    dim = None
    entries: list = []
    name = "config"
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line without '=': {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "dim":
            dim = int(value)
        elif key == "entries":
            entries.extend(float(v) for v in re.split(r"[,\s]+", value) if v)
        elif key == "name":
            name = value
        else:
            raise ParameterError(f"unknown config key {key!r}")
    if dim is None:
        raise ParameterError("config must set dim")
    if len(entries) != dim * dim:
        raise ParameterError(f"expected {dim * dim} entries, got {len(entries)}")
    return MatrixGenerator(np.asarray(entries, dtype=float).reshape(dim, dim), name)
