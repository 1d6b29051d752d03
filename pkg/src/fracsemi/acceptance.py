"""The acceptance suite: ten property-based criteria at desk scale.

Each criterion returns an AcceptanceResult with pass/fail, runtime and
a detail payload; run_acceptance executes a selection and aggregates.
A fault can be injected (fault="corrupt_coeff_table") to exercise the
failure path end to end.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import calculus as hc
from . import gradient_bmo as gb
from . import monotone as mono
from . import semigroup as sg
from . import subordinator as sub

ALPHAS_COEFF = (0.3, 0.5, 0.7, 0.9)
ALPHAS_DENSITY = (0.3, 0.5, 0.7)
MASTER_SEED = 20240801


@dataclass
class AcceptanceResult:
    criterion: int
    name: str
    passed: bool
    runtime_s: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.criterion}: {self.name} " \
               f"({self.runtime_s:.2f}s)"

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "name": self.name,
                "pass": self.passed, "runtime_s": self.runtime_s,
                "detail": self.detail}


def _crit1_coefficients(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    for alpha in ALPHAS_COEFF:
        table = mono.build_coeff_table(alpha, 30)
        if fault == "corrupt_coeff_table":
            table.a[5, 2] *= 1.01
        rep = mono.check_discrete_signs(alpha, 30, 10, table=table)
        detail[f"alpha={alpha}"] = {"pass": rep.passed,
                                    "worst_margin": rep.worst_margin,
                                    "n_failures": len(rep.failures)}
        ok = ok and rep.passed
    dt = time.time() - t0
    detail["runtime_budget_s"] = 1.0
    ok = ok and dt < 1.0
    return AcceptanceResult(1, "coefficient recursion and sign families",
                            ok, dt, detail)


def _crit2_cm_theorem(fault=None) -> AcceptanceResult:
    t0 = time.time()
    t_grid = np.geomspace(0.05, 20.0, 30)
    detail = {"worst": {}}
    ok = True
    for alpha in ALPHAS_COEFF:
        worst = math.inf
        for c in (0.25, 0.5, 0.9):
            for s in (0.5, 1.0, 2.0):
                for item in ("i", "ii", "iii", "iv"):
                    rep = mono.check_cm_theorem(alpha, c, s, item,
                                                max_n=20, t_grid=t_grid,
                                                j=1 if item == "iv" else 1)
                    worst = min(worst, rep.worst_margin)
                    ok = ok and rep.passed
        detail["worst"][f"alpha={alpha}"] = worst
    dt = time.time() - t0
    detail["runtime_budget_s"] = 10.0
    ok = ok and dt < 10.0
    return AcceptanceResult(2, "exponential-difference theorem items i-iv",
                            ok, dt, detail)


def _crit3_subordinator(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    norms = {a: abs(sub.normalization(a) - 1.0) for a in (0.25,) + ALPHAS_DENSITY}
    detail["normalization_err"] = {str(a): v for a, v in norms.items()}
    ok = ok and max(norms.values()) < 1e-6

    s_grid = np.geomspace(0.25, 4.0, 20)
    lam_scaled = np.geomspace(0.05, 20.0, 20)
    worst = 0.0
    for s in s_grid:
        lam = s ** 2 * lam_scaled
        t = sub.density_bromwich(0.5, s, lam)
        c = sub.density_closed_half(s, lam)
        worst = max(worst, float(np.max(np.abs(t - c) / c)))
    detail["closed_vs_bromwich_rel"] = worst
    ok = ok and worst < 1e-6

    # dilation identity, exact for the closed form, quadrature-exact for talbot
    scal_closed = 0.0
    for s, lam in ((2.0, 1.0), (4.0, 1.0), (0.5, 3.0)):
        direct = sub.density_closed_half(s, lam)
        scaled = sub.density_scaled(0.5, s, lam,
                                    base=lambda v: sub.density_closed_half(1.0, v))
        scal_closed = max(scal_closed, abs(direct - scaled) / direct)
    scal_talbot = 0.0
    for s, lam in ((2.0, 1.0), (0.5, 2.0)):
        direct = sub.density_bromwich(0.7, s, lam)
        scaled = sub.density_scaled(0.7, s, lam)
        scal_talbot = max(scal_talbot, abs(direct - scaled) / abs(direct))
    detail["scaling_closed"] = scal_closed
    detail["scaling_talbot"] = scal_talbot
    ok = ok and scal_closed < 5e-14 and scal_talbot < 1e-8

    conv = 0.0
    for lam in (0.3, 1.0, 3.0, 10.0):
        cv = sub.density_convolve(0.5, 0.5, lam)
        br = sub.density_bromwich(0.25, 1.0, lam)
        conv = max(conv, abs(cv - br) / abs(br))
    detail["convolution_vs_bromwich_rel"] = conv
    ok = ok and conv < 1e-5

    rt = 0.0
    for a in ALPHAS_DENSITY:
        for s in (0.5, 1.0, 2.0):
            tg = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
            lt = sub.laplace_transform(a, s, tg)
            rt = max(rt, float(np.max(np.abs(lt - np.exp(-s * tg ** a)))))
    detail["laplace_roundtrip_err"] = rt
    ok = ok and rt < 1e-6
    return AcceptanceResult(3, "subordinator density identities",
                            ok, time.time() - t0, detail)


def _crit4_inequalities(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {"density": {}, "semigroup": {}}
    ok = True
    for alpha in ALPHAS_DENSITY:
        rep = sub.verify_density_inequalities(alpha, 0.5, seed=MASTER_SEED)
        detail["density"][f"alpha={alpha}"] = {
            "pass": rep.passed,
            "worst": min(r.worst_margin for r in rep.results)}
        ok = ok and rep.passed
    rng = np.random.default_rng(MASTER_SEED)
    t_grid = np.geomspace(0.1, 5.0, 10)
    for gen in (sg.two_point(), sg.cycle(8), sg.metzler(6, seed=MASTER_SEED % 997)):
        f = rng.uniform(0.1, 2.0, gen.dim)
        entry = {}
        for alpha in ALPHAS_DENSITY:
            for c in (0.25, 0.9):
                r = sg.check_quasi_monotone(gen, alpha, c, t_grid, f)
                entry[f"qm a={alpha} c={c}"] = r.worst_margin
                ok = ok and r.passed
            for j in (1, 2):
                r = sg.check_derivative_bound(gen, alpha, t_grid, j, f)
                entry[f"db a={alpha} j={j}"] = r.worst_margin
                ok = ok and r.passed
        detail["semigroup"][gen.name] = entry
    return AcceptanceResult(4, "density and semigroup comparison inequalities",
                            ok, time.time() - t0, detail)


def _crit5_fractional_oracle(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {"balakrishnan": {}, "subordinated": {}}
    ok = True
    rng = np.random.default_rng(MASTER_SEED + 5)
    gens = (sg.metzler(6, seed=11), sg.metzler(4, seed=3, shift=0.4),
            sg.diag_generator([0.5, 1.0, 3.0]))
    for gen in gens:
        f = rng.normal(size=gen.dim)
        for alpha in ALPHAS_DENSITY:
            b = sg.fractional_power_balakrishnan(gen, alpha, f)
            s = sg.fractional_power_spectral(gen, alpha, f)
            rel = float(np.max(np.abs(b - s)) / max(np.max(np.abs(s)), 1e-300))
            detail["balakrishnan"][f"{gen.name} a={alpha}"] = rel
            ok = ok and rel < 1e-5
    for gen in (sg.two_point(), sg.metzler(6, seed=11)):
        f = rng.normal(size=gen.dim)
        for alpha in ALPHAS_DENSITY:
            for t in (0.5, 2.0):
                q = sg.subordinated_action(gen, alpha, t, f, route="quadrature")
                s = sg.subordinated_action(gen, alpha, t, f, route="spectral")
                rel = float(np.max(np.abs(q - s)) / max(np.max(np.abs(s)), 1e-300))
                key = f"{gen.name} a={alpha} t={t}"
                detail["subordinated"][key] = rel
                ok = ok and rel < 1e-6
    return AcceptanceResult(5, "fractional powers: Balakrishnan and "
                            "subordination vs spectral",
                            ok, time.time() - t0, detail)


def _crit6_meyer(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    rng = np.random.default_rng(MASTER_SEED + 6)
    for gen in (sg.two_point(), sg.cycle(8), sg.metzler(6, seed=MASTER_SEED % 997)):
        f = rng.normal(size=gen.dim)
        for alpha in (0.5, 1.0):
            for s in (0.1, 1.0, 10.0):
                r = gb.meyer_identity_check(gen, alpha, s, f)
                detail[f"{gen.name} a={alpha} s={s}"] = r.params["relative_gap"]
                ok = ok and r.passed
    return AcceptanceResult(6, "Meyer gradient-form identity",
                            ok, time.time() - t0, detail)


def _crit7_gamma2(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    rng = np.random.default_rng(MASTER_SEED + 7)
    tg = np.geomspace(0.05, 3.0, 10)
    for gen in (sg.two_point(), sg.cycle(8)):
        f = rng.normal(size=gen.dim)
        for beta in (1.0, 0.5):
            r = gb.check_gamma2(gen, beta, tg, tg, f, v_list=(0.2,), tol=1e-9)
            detail[f"{gen.name} b={beta}"] = r.worst_margin
            ok = ok and r.passed
    hk = sg.heat1d(10.0, 801)
    x = hk.grid.points
    fh = np.exp(-x ** 2 / 2) * np.sin(x)
    th = np.geomspace(0.01, 0.25, 10)
    r = gb.check_gamma2(hk, 1.0, th, th, fh, v_list=(0.05,))
    detail["heat1d"] = r.worst_margin
    ok = ok and r.passed
    ou = sg.ou1d(8.0, 801)
    xo = ou.grid.points
    fo = np.exp(-xo ** 2 / 4) * np.cos(xo)
    to = np.geomspace(0.05, 2.0, 10)
    r = gb.check_gamma2(ou, 1.0, to, to, fo, v_list=(0.1,))
    detail["ou1d"] = r.worst_margin
    ok = ok and r.passed
    return AcceptanceResult(7, "Gamma^2 >= 0 convexity displays",
                            ok, time.time() - t0, detail)


def _crit8_examples(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    tr = sg.translation1d(1.0, 256)
    rng = np.random.default_rng(MASTER_SEED + 8)
    t_grid = np.linspace(1.0 / 256, 0.5, 24)
    worst_bmo = 0.0
    for _ in range(20):
        f = rng.normal(size=256)
        rep = gb.bmo_seminorm(tr, 1.0, f, t_grid, "bmo")
        worst_bmo = max(worst_bmo, rep.seminorm)
    detail["translation_bmo_max"] = worst_bmo
    ok = ok and worst_bmo <= 1e-12
    step = (tr.grid.points < 0.5).astype(float)
    rep = gb.bmo_seminorm(tr, 1.0, step, t_grid, "BMO")
    detail["translation_BMO_step"] = rep.seminorm
    ok = ok and rep.seminorm > 0.1

    res = gb.ou_separation_experiment((100.0, 400.0))
    detail["ou_separation"] = {
        "ratio_100": res["per_s"][0]["ratio"],
        "ratio_400": res["per_s"][1]["ratio"],
        "growth": res["growth"][0]["growth"],
    }
    ok = ok and res["per_s"][0]["ratio"] >= 1.0
    ok = ok and res["growth"][0]["growth"] >= 1.5
    return AcceptanceResult(8, "translation and Ornstein-Uhlenbeck examples",
                            ok, time.time() - t0, detail)


def _crit9_hcalc(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    gens = (sg.diag_generator([1.0, 4.0]),
            sg.metzler(5, seed=MASTER_SEED % 991, shift=0.6))
    psi = hc.symbol_psi()
    ed = hc.symbol_exp_decay()
    for gen in gens:
        for sym in (psi, ed):
            direct = hc.phi_of_L_contour(gen, sym)
            oracle = hc.spectral_oracle(gen, sym)
            rel = float(np.max(np.abs(direct - oracle))
                        / max(np.max(np.abs(oracle)), 1e-300))
            detail[f"contour {sym.name} {gen.name}"] = rel
            ok = ok and rel < 1e-5
        reg = hc.phi_of_L_regularized(gen, psi)
        oracle = hc.spectral_oracle(gen, psi)
        rel = float(np.max(np.abs(reg - oracle))
                    / max(np.max(np.abs(oracle)), 1e-300))
        detail[f"regularized psi {gen.name}"] = rel
        ok = ok and rel < 1e-5
        for s in (0.5, 1.0, 2.0):
            im = hc.imaginary_power(gen, s, alpha=0.5)
            oracle = hc.imaginary_power_spectral(gen, s)
            rel = float(np.max(np.abs(im - oracle))
                        / max(np.max(np.abs(oracle)), 1e-300))
            detail[f"imaginary s={s} {gen.name}"] = rel
            ok = ok and rel < 1e-5
    gen = gens[1]
    prod_sym = hc.HolomorphicSymbol("psi*exp_decay", ed.eta,
                                    lambda z: psi.fn(z) * ed.fn(z),
                                    "h_infty_zero", decay_r=2.0, decay_c=50.0)
    lhs = hc.phi_of_L_contour(gen, psi) @ hc.phi_of_L_contour(gen, ed)
    rhs = hc.phi_of_L_contour(gen, prod_sym)
    rel = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))
    detail["multiplicativity"] = rel
    ok = ok and rel < 1e-6
    o1 = hc.phi_of_L_contour(gen, psi, hc.ContourSpec(theta=0.30 * math.pi))
    o2 = hc.phi_of_L_contour(gen, psi, hc.ContourSpec(theta=0.45 * math.pi))
    rel = float(np.max(np.abs(o1 - o2)) / max(np.max(np.abs(o1)), 1e-300))
    detail["angle_independence"] = rel
    ok = ok and rel < 1e-6
    return AcceptanceResult(9, "H-infinity calculus routes vs spectral oracle",
                            ok, time.time() - t0, detail)


def _crit10_ma_sweep(fault=None) -> AcceptanceResult:
    t0 = time.time()
    detail = {}
    ok = True
    gen = sg.two_point()
    f = np.array([2.0, -1.0])
    tele = hc.m_a_operator(gen, 0.5, hc.constant_sign(1.0, 0.01, 10.0), f)
    expect = sg.subordinated_action(gen, 0.5, 10.0, f) \
        - sg.subordinated_action(gen, 0.5, 0.01, f)
    tele_err = float(np.max(np.abs(tele - expect)))
    detail["telescoping_err"] = tele_err
    ok = ok and tele_err < 1e-12

    rng = np.random.default_rng(MASTER_SEED + 10)
    t_grid = np.geomspace(1e-2, 1e2, 40)
    sup_ratios = []
    bmo_ratios = []
    f_bmo = gb.bmo_seminorm(gen, 0.5, f, t_grid, "bmo").seminorm
    ca_vals = []
    for _ in range(50):
        signs = rng.choice([-1.0, 1.0], size=15)
        pat = hc.dyadic_sign_pattern(signs, 0.01)
        ca_vals.append(hc.a_condition_constant(pat))
        mf = hc.m_a_operator(gen, 0.5, pat, f)
        sup_ratios.append(float(np.max(np.abs(mf)) / np.max(np.abs(f))))
        bmo_m = gb.bmo_seminorm(gen, 0.5, mf, t_grid, "bmo").seminorm
        bmo_ratios.append(bmo_m / f_bmo)
    detail["c_a_min"] = min(ca_vals)
    detail["c_a_max"] = max(ca_vals)
    ok = ok and abs(min(ca_vals) - 1.0) < 1e-12 and abs(max(ca_vals) - 1.0) < 1e-12
    detail["sup_ratio_max"] = max(sup_ratios)
    ok = ok and max(sup_ratios) <= 10.0
    detail["bmo_ratio_max"] = max(bmo_ratios)
    ok = ok and math.isfinite(max(bmo_ratios))
    return AcceptanceResult(10, "sign-averaged operator sweep",
                            ok, time.time() - t0, detail)


CRITERIA = {
    1: _crit1_coefficients,
    2: _crit2_cm_theorem,
    3: _crit3_subordinator,
    4: _crit4_inequalities,
    5: _crit5_fractional_oracle,
    6: _crit6_meyer,
    7: _crit7_gamma2,
    8: _crit8_examples,
    9: _crit9_hcalc,
    10: _crit10_ma_sweep,
}


def run_acceptance(criteria=None, fault=None, echo=print) -> dict:
    """Run the selected criteria (default: all) and aggregate results."""
    chosen = sorted(criteria) if criteria else sorted(CRITERIA)
    results = []
    for cid in chosen:
        if cid not in CRITERIA:
            raise ValueError(f"unknown acceptance criterion {cid}")
        res = CRITERIA[cid](fault=fault)
        results.append(res)
        if echo:
            echo(res.line())
    summary = {
        "pass": all(r.passed for r in results),
        "fault": fault,
        "criteria": [r.to_dict() for r in results],
        "total_runtime_s": sum(r.runtime_s for r in results),
    }
    return summary
