"""Coefficient machinery for derivatives of exp(-s*t**alpha).

The n-th t-derivative of exp(-c*t**alpha) expands as

    (-1)**n * t**(-n) * sum_k c**k * a(n,k) * t**(k*alpha) * exp(-c*t**alpha)

with the triangular coefficient family a(n,k) generated by

    a(1,1) = alpha,   a(n+1,k) = (n - k*alpha) * a(n,k) + alpha * a(n,k-1).

Everything here certifies sign statements about such expansions on
finite n-ranges and finite grids; report metadata says so explicitly.
Entries grow like (n-1)!, which keeps max_n <= 60 inside double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError

MAX_N_CAP = 60
SIGN_TOL = 1e-9


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    return alpha


def k_index(alpha: float, i: int) -> int:
    """Least integer K with K/(K+i) >= alpha."""
    k = 1
    while k / (k + i) + 1e-12 < alpha:
        k += 1
    return k


@dataclass(frozen=True)
class KIndices:
    alpha: float
    k1: int
    k2: int


def k_indices(alpha: float) -> KIndices:
    alpha = _check_alpha(alpha)
    k1 = k_index(alpha, 1)
    k2 = k_index(alpha, 2)
    assert k2 >= k1 and k1 <= math.ceil(1.0 / (1.0 - alpha)) + 1
    return KIndices(alpha, k1, k2)


@dataclass(frozen=True)
class CoeffTable:
    """Triangular array a(n,k), 1 <= k <= n <= max_n; zero outside."""

    alpha: float
    max_n: int
    a: np.ndarray          # shape (max_n+1, max_n+2); a[n, k]

    def entry(self, n: int, k: int) -> float:
        if k <= 0 or k > n or n > self.max_n:
            return 0.0
        return float(self.a[n, k])

    def row(self, n: int) -> np.ndarray:
        """Coefficients a(n, 1..n)."""
        return self.a[n, 1:n + 1]


def build_coeff_table(alpha: float, max_n: int) -> CoeffTable:
    alpha = _check_alpha(alpha)
    if not 1 <= max_n <= MAX_N_CAP:
        raise ParameterError(f"max_n must lie in [1, {MAX_N_CAP}] (factorial growth)")
    a = np.zeros((max_n + 1, max_n + 2))
    a[1, 1] = alpha
    for n in range(1, max_n):
        k = np.arange(1, n + 2)
        a[n + 1, 1:n + 2] = (n - k * alpha) * a[n, 1:n + 2] + alpha * a[n, 0:n + 1]
    if not np.all(np.isfinite(a)):
        raise ParameterError("coefficient table overflows double range")
    return CoeffTable(alpha, max_n, a)


def signed_derivative_exp(table: CoeffTable, coef: float, t, n: int):
    """(-1)^n d^n/dt^n exp(-coef * t^alpha), via the exact expansion.

    coef > 0 collects c*s of exp(-c*s*t^alpha) in one place (dilation).
    Vectorized over t; fsum keeps the alternating-free sum compensated.
    """
    if n > table.max_n:
        raise ParameterError("n exceeds the table size")
    t_arr = np.asarray(t, dtype=float)
    x = coef * t_arr ** table.alpha
    ks = np.arange(1, n + 1)
    powers = x[..., None] ** ks
    terms = powers * table.row(n)
    if terms.ndim == 1:
        total = math.fsum(terms)
    else:
        total = np.array([math.fsum(row) for row in terms.reshape(-1, n)])
        total = total.reshape(terms.shape[:-1])
    out = t_arr ** (-float(n)) * total * np.exp(-x)
    return float(out) if np.isscalar(t) else out


def nth_derivative_exact(alpha: float, c: float, s: float, t, n: int,
                         table: Optional[CoeffTable] = None):
    """d^n/dt^n exp(-c*s*t^alpha) by the coefficient expansion."""
    if table is None:
        table = build_coeff_table(alpha, max(n, 1))
    if table.alpha != float(alpha):
        raise ParameterError("table was built for a different alpha")
    sign = -1.0 if n % 2 else 1.0
    return sign * signed_derivative_exp(table, c * s, t, n)


def _euler_falling(coeffs: np.ndarray, j: int) -> np.ndarray:
    """Apply E(E-1)...(E-j+1) to p(x)e^{-x} coefficient vector.

    E[p e^{-x}] = (x p' - x p) e^{-x}: coefficients c_k -> k c_k - c_{k-1}.
    """
    c = np.concatenate([coeffs, np.zeros(j)])
    for i in range(j):
        k = np.arange(c.size, dtype=float)
        ec = k * c
        ec[1:] -= c[:-1]
        c = ec - float(i) * c
    return c


def weighted_signed_derivative(table: CoeffTable, s: float, t, n: int, j: int = 1):
    """(-1)^n d^n/dt^n [ s^j t^(j alpha) exp(-s t^alpha) ], exact expansion."""
    if n > table.max_n:
        raise ParameterError("n exceeds the table size")
    base = np.zeros(n + 2)
    base[1:n + 1] = table.row(n)
    coeffs = _euler_falling(base, j)
    sign = -1.0 if j % 2 else 1.0
    t_arr = np.asarray(t, dtype=float)
    x = s * t_arr ** table.alpha
    ks = np.arange(coeffs.size)
    powers = x[..., None] ** ks
    terms = powers * coeffs
    if terms.ndim == 1:
        total = math.fsum(terms)
    else:
        total = np.array([math.fsum(row) for row in terms.reshape(-1, coeffs.size)])
        total = total.reshape(terms.shape[:-1])
    out = sign * t_arr ** (-float(n)) * total * np.exp(-x)
    return float(out) if np.isscalar(t) else out


def eval_F(table: CoeffTable, n: int, K: int, x):
    """F_n(x) = x^-K * sum_{j=1..n} a(n,j) x^j; requires K >= K1."""
    if K < k_index(table.alpha, 1):
        raise ParameterError("K must be at least K1 for F_n")
    if n > table.max_n:
        raise ParameterError("n exceeds the table size")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise ParameterError("x must be positive")
    js = np.arange(1, n + 1)
    out = (x_arr[..., None] ** (js - K) * table.row(n)).sum(axis=-1)
    return float(out) if np.isscalar(x) else out


def eval_G(table: CoeffTable, n: int, K: int, x):
    """G_n(x) = x^-K * sum_j (a(n,j) - j a(n,j+1)) x^j; requires K >= K2."""
    if K < k_index(table.alpha, 2):
        raise ParameterError("K must be at least K2 for G_n")
    if n > table.max_n:
        raise ParameterError("n exceeds the table size")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise ParameterError("x must be positive")
    js = np.arange(1, n + 1)
    coeffs = np.array([table.entry(n, j) - j * table.entry(n, j + 1) for j in js])
    out = (x_arr[..., None] ** (js - K) * coeffs).sum(axis=-1)
    return float(out) if np.isscalar(x) else out


# --- reports -----------------------------------------------------------------


@dataclass
class MonotoneReport:
    """Finite-n, finite-grid certificate for one sign-check family."""

    check: str
    alpha: float
    max_n: int
    params: dict
    grid: dict
    failures: list = field(default_factory=list)
    monitored: list = field(default_factory=list)
    worst_margin: float = math.inf

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = {
            "check": self.check,
            "alpha": self.alpha,
            "max_n": self.max_n,
            "grid": self.grid,
            "pass": self.passed,
            "worst_margin": None if math.isinf(self.worst_margin) else self.worst_margin,
            "failures": self.failures,
            "certificate": "finite n and finite grids only",
        }
        d.update(self.params)
        if self.monitored:
            d["monitored"] = self.monitored
        return d


def recursion_residual(table: CoeffTable) -> float:
    """Largest normalized defect of the recursion across the table."""
    worst = 0.0
    for n in range(1, table.max_n):
        k = np.arange(1, n + 2)
        expect = (n - k * table.alpha) * table.a[n, 1:n + 2] \
            + table.alpha * table.a[n, 0:n + 1]
        got = table.a[n + 1, 1:n + 2]
        scale = max(float(np.max(np.abs(expect))), 1.0)
        worst = max(worst, float(np.max(np.abs(got - expect))) / scale)
    return worst


def check_discrete_signs(alpha: float, max_n: int = 30, j_max: int = 10,
                         table: Optional[CoeffTable] = None) -> MonotoneReport:
    """Verify the two coefficient-difference inequality families.

    With k = K1:  a(n,k+j) - (j+1) a(n,k+j+1) >= 0.
    With k = K2:  (j+1)(a(n,k+j+1) - (j+2) a(n,k+j+2))
                    <= a(n,k+j) - (j+1) a(n,k+j+1).
    Margins are normalized by the largest entry involved; the table's
    recursion residual is re-verified first.
    """
    if table is None:
        table = build_coeff_table(alpha, max_n)
    if table.alpha != float(alpha) or table.max_n < max_n:
        raise ParameterError("table does not match the requested check")
    ki = k_indices(alpha)
    rep = MonotoneReport("discrete_signs", alpha, max_n,
                         {"k1": ki.k1, "k2": ki.k2},
                         {"n": [1, max_n], "j": [0, j_max]})
    resid = recursion_residual(table)
    if resid > SIGN_TOL:
        rep.failures.append({"family": "recursion", "residual": resid})
    worst = math.inf
    for n in range(1, max_n + 1):
        for j in range(0, j_max + 1):
            e0 = table.entry(n, ki.k1 + j)
            e1 = table.entry(n, ki.k1 + j + 1)
            scale = max(e0, (j + 1) * e1, 1.0)
            m = (e0 - (j + 1) * e1) / scale
            worst = min(worst, m)
            if m < -SIGN_TOL:
                rep.failures.append({"family": "key", "n": n, "j": j, "margin": m})
            f0 = table.entry(n, ki.k2 + j)
            f1 = table.entry(n, ki.k2 + j + 1)
            f2 = table.entry(n, ki.k2 + j + 2)
            lhs = (j + 1) * (f1 - (j + 2) * f2)
            rhs = f0 - (j + 1) * f1
            scale = max(abs(lhs), abs(rhs), 1.0)
            m = (rhs - lhs) / scale
            worst = min(worst, m)
            if m < -SIGN_TOL:
                rep.failures.append({"family": "key2", "n": n, "j": j, "margin": m})
    rep.worst_margin = worst
    return rep


def remark_sign_probe(alpha: float, max_n: int = 20, i_max: int = 2) -> MonotoneReport:
    """Probe (-1)^i D^i f_n(j) >= 0 for k with k/(k+i) <= alpha.

    The source remark is ambiguous about the k-range, so this only
    flags violations (monitored), never asserts.
    """
    table = build_coeff_table(alpha, max_n)
    rep = MonotoneReport("remark_sign_probe", alpha, max_n, {"i_max": i_max},
                         {"n": [1, max_n]})
    for i in (1, 2):
        if i > i_max:
            break
        # largest k with k/(k+i) <= alpha
        k = max(1, math.floor(i * alpha / (1 - alpha) + 1e-12))
        if k / (k + i) > alpha + 1e-12:
            continue
        for n in range(1, max_n + 1):
            fs = [table.entry(n, k + j) * math.factorial(j) for j in range(0, n + 3)]
            d = np.diff(np.asarray(fs), i)
            bad = float(np.min((-1.0) ** i * d))
            if bad < -SIGN_TOL * max(1.0, float(np.max(np.abs(fs)))):
                rep.monitored.append({"i": i, "k": k, "n": n, "margin": bad})
    return rep


def check_cm_theorem(alpha: float, c: float, s: float, item: str,
                     max_n: int = 20, t_grid=None, j: int = 1) -> MonotoneReport:
    """Sign-certify one item of the exponential-difference theorem.

    item i:   exp(-c s t^a) - c^K1 exp(-s t^a)
    item ii:  K1 exp(-s t^a) + s t^a exp(-s t^a)
    item iii: exp(-c s t^a)/(c^K2 (1-c)) - s t^a exp(-s t^a)
    item iv:  A^j exp(-c s t^a) +/- s^j t^(j a) exp(-s t^a),
              A = max(j K1 / c^K1, j / (c^K2 (1-c)))

    For each n <= max_n and t in the grid the signed n-th derivative is
    evaluated from the exact expansions and required to be
    >= -1e-9 * scale, scale being the largest magnitude involved.
    Item i also certifies the derivative-ratio lower bound c^K1.
    """
    alpha = _check_alpha(alpha)
    if not 0.0 < c < 1.0:
        raise ParameterError("c must lie in (0,1)")
    if s <= 0:
        raise ParameterError("s must be positive")
    if item not in ("i", "ii", "iii", "iv"):
        raise ParameterError("item must be one of i, ii, iii, iv")
    if item == "iv" and j < 1:
        raise ParameterError("item iv needs j >= 1")
    table = build_coeff_table(alpha, max_n)
    ki = k_indices(alpha)
    if t_grid is None:
        t_grid = np.geomspace(0.05, 20.0, 30)
    t_grid = np.asarray(t_grid, dtype=float)
    rep = MonotoneReport(
        "cm_theorem", alpha, max_n,
        {"theorem_item": item, "c": c, "s": s, "j": j if item == "iv" else None,
         "k1": ki.k1, "k2": ki.k2},
        {"t": [float(t_grid.min()), float(t_grid.max()), int(t_grid.size)]})
    worst = math.inf
    for n in range(1, max_n + 1):
        d_cs = signed_derivative_exp(table, c * s, t_grid, n)
        d_s = signed_derivative_exp(table, s, t_grid, n)
        if item == "i":
            vals = d_cs - c ** ki.k1 * d_s
            scale = np.maximum(np.abs(d_cs), np.abs(c ** ki.k1 * d_s))
            ratio = d_cs / d_s
            rmarg = float(np.min(ratio - c ** ki.k1))
            worst = min(worst, rmarg / max(c ** ki.k1, 1e-12))
            if rmarg < -SIGN_TOL * c ** ki.k1:
                rep.failures.append({"n": n, "kind": "ratio", "margin": rmarg})
        elif item == "ii":
            w = weighted_signed_derivative(table, s, t_grid, n, 1)
            vals = ki.k1 * d_s + w
            scale = np.maximum(ki.k1 * np.abs(d_s), np.abs(w))
        elif item == "iii":
            w = weighted_signed_derivative(table, s, t_grid, n, 1)
            lead = d_cs / (c ** ki.k2 * (1.0 - c))
            vals = lead - w
            scale = np.maximum(np.abs(lead), np.abs(w))
        else:
            w = weighted_signed_derivative(table, s, t_grid, n, j)
            const = max(j * ki.k1 / c ** ki.k1, j / (c ** ki.k2 * (1.0 - c))) ** j
            lead = const * d_cs
            vals = np.minimum(lead + w, lead - w)
            scale = np.maximum(np.abs(lead), np.abs(w))
        scale = np.maximum(scale, 1e-300)
        margins = vals / scale
        m = float(np.min(margins))
        worst = min(worst, m)
        if m < -SIGN_TOL:
            idx = int(np.argmin(margins))
            rep.failures.append({"n": n, "t": float(t_grid[idx]), "margin": m})
    rep.worst_margin = worst
    return rep


# --- Bell polynomials --------------------------------------------------------


@dataclass(frozen=True)
class BellInput:
    """Arguments x_j = -s * (alpha)_j * t^(alpha-j) of the Bell expansion."""

    alpha: float
    s: float
    t: float
    n: int
    x: np.ndarray

    @property
    def x1(self) -> float:
        return float(self.x[0])


def bell_input(alpha: float, s: float, t: float, n: int) -> BellInput:
    alpha = _check_alpha(alpha)
    if s <= 0 or t <= 0:
        raise ParameterError("s and t must be positive")
    ff = np.empty(n)
    acc = 1.0
    for jj in range(n):
        acc *= alpha - jj
        ff[jj] = acc
    js = np.arange(1, n + 1)
    x = -s * ff * t ** (alpha - js)
    return BellInput(alpha, s, t, n, x)


def bell_polynomial(n: int, x: Sequence[float]) -> float:
    """Complete Bell polynomial B_n via the binomial recurrence."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    x = np.asarray(x, dtype=float)
    if x.size < n:
        raise ParameterError("need at least n arguments")
    b = np.empty(n + 1)
    b[0] = 1.0
    for m in range(n):
        terms = [math.comb(m, jj) * b[m - jj] * x[jj] for jj in range(m + 1)]
        b[m + 1] = math.fsum(terms)
    if not np.all(np.isfinite(b)):
        raise ParameterError("Bell recurrence overflowed")
    return float(b[n])


def check_bell_inequality(alpha: float, c: float, s: float, t: float,
                          max_n: int = 15) -> MonotoneReport:
    """exp((1-c) s t^a) * B_n(c x) / B_n(x) >= c^K1 for n <= max_n."""
    alpha = _check_alpha(alpha)
    if not 0.0 < c < 1.0:
        raise ParameterError("c must lie in (0,1)")
    ki = k_indices(alpha)
    binp = bell_input(alpha, s, t, max_n)
    rep = MonotoneReport("bell_inequality", alpha, max_n,
                         {"c": c, "s": s, "t": t, "k1": ki.k1},
                         {"n": [1, max_n]})
    bound = c ** ki.k1
    pref = math.exp((1.0 - c) * s * t ** alpha)
    worst = math.inf
    for n in range(1, max_n + 1):
        bn = bell_polynomial(n, binp.x)
        bcn = bell_polynomial(n, c * binp.x)
        ratio = pref * bcn / bn
        m = (ratio - bound) / bound
        worst = min(worst, m)
        if m < -SIGN_TOL:
            rep.failures.append({"n": n, "ratio": ratio, "margin": m})
    rep.worst_margin = worst
    return rep
