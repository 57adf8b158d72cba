"""Acceptance criteria, one check per criterion at its stated tolerance.

Each check prints a single ``PASS``/``FAIL`` line (also when pytest captures
output). Run directly with ``python tests/test_acceptance.py`` for the
summary alone.
"""

import math
import sys
import time

import mpmath
import numpy as np
import pytest

from superfluid_om.acoustics import AcousticModeIndex, closed_form_effective_volume, enumerate_modes, make_mode, match_frequency
from superfluid_om.config import RunConfig
from superfluid_om.coupling import MicrowaveCavityParams, dp_sql, dwc_dP, overlap_omega, single_quantum_shift
from superfluid_om.dissipation import (
    WallLossParams,
    combine_budget,
    number_state_lifetime,
    q_three_phonon,
    q_wall,
)
from superfluid_om.electromagnetics import TE011, em_frequency, te0np_intensity
from superfluid_om.explorer import SweepAxis, sweep
from superfluid_om.materials import CONSTANTS, CylinderGeometry, HeliumProperties, cavity_volume, helium_mass
from superfluid_om.measurement import (
    PumpConfig,
    cavity_heating,
    displacement_sensitivity,
    helium_heating,
    noise_temperature,
    strain_sensitivity,
    thermal_displacement,
)
from superfluid_om.numerics import bessel_j_roots, bessel_jprime_roots
from superfluid_om.report import riemann_overlap
from superfluid_om.ringdown import decay_time, fit_ringdown, synthesize_ringdown

TWO_PI = 2 * math.pi
GEOM = CylinderGeometry()
HE = HeliumProperties()
OMEGA_C = TWO_PI * 10.60e9
OMEGA_M = TWO_PI * 1e4
V_EFF_REF = 19.5e-6


def rel(a, b):
    return abs(a - b) / abs(b)


def c01_volume_and_mass():
    v, m = cavity_volume(GEOM) * 1e6, helium_mass(GEOM, HE) * 1e3
    return rel(v, 39.3) <= 0.005 and rel(m, 5.70) <= 0.005, f"V = {v:.4f} cm^3, m = {m:.4f} g"


def c02_te011():
    vac, filled = em_frequency(GEOM, 1.0, TE011) / 1e9, em_frequency(GEOM, HE.eps_R, TE011) / 1e9
    return rel(vac, 10.89) <= 0.01 and rel(filled, 10.60) <= 0.01, f"{vac:.4f} GHz vacuum, {filled:.4f} GHz filled"


def c03_spectrum():
    modes = enumerate_modes(GEOM, HE.c4, 12400.0)
    hits = {t: match_frequency(modes, t, 0.01) for t in (6020.0, 10138.0, 12201.0)}
    detail = ", ".join(f"{t:.0f} Hz -> ({h[0].index}) {h[0].frequency:.1f} Hz" if h else f"{t:.0f} Hz -> none"
                       for t, h in hits.items())
    return all(hits.values()), detail


def c04_overlap():
    acoustic = make_mode(GEOM, HE.c4, AcousticModeIndex(0, 1, 2))
    em = te0np_intensity(GEOM, TE011, HE.eps_R)
    omega = overlap_omega(acoustic, em, HE.eps_R)
    oracle = riemann_overlap(acoustic, em, HE.eps_R)
    ok = rel(omega, -0.083) <= 0.05 and rel(omega, oracle) <= 1e-4
    return ok, f"Omega = {omega:.6f}, midpoint oracle {oracle:.6f} (rel {rel(omega, oracle):.1e})"


def c05_zero_point_and_g0():
    zpf = dp_sql(OMEGA_M, HE, V_EFF_REF)
    g0 = single_quantum_shift(dwc_dP(OMEGA_C, HE, -0.083), zpf)
    return rel(zpf, 2e-9) <= 0.20 and rel(g0, 3.3e-8) <= 0.10, f"dP_SQL = {zpf:.4g} Pa, g0 = {g0:.4g} rad/s"


def c06_three_phonon():
    q = q_three_phonon(0.010, TWO_PI * 5e3, HE)
    freq_indep = all(q_three_phonon(0.010, TWO_PI * f, HE) == q for f in (1e3, 1e4, 5e4, 1e5))
    t4 = all(q_three_phonon(0.010 * s, TWO_PI * 5e3, HE) * s**4 == pytest.approx(q, rel=1e-14) for s in (0.5, 2.0, 4.0))
    return rel(q, 5e10) <= 0.10 and freq_indep and t4, f"Q = {q:.4g}, frequency independent {freq_indep}, T^-4 {t4}"


def c07_lifetime():
    tau = number_state_lifetime(q_three_phonon(0.010, TWO_PI * 5e3, HE), 0.010)
    return rel(tau, 36.0) <= 0.10, f"tau_N = {tau:.3f} s"


def c08_wall():
    q = q_wall(WallLossParams())
    return q == 1e11, f"Q_wall = {q!r}"


def c09_heating():
    cav = MicrowaveCavityParams.reference_default()
    pc = cavity_heating(PumpConfig(4.5e8), cav)
    ph = helium_heating(PumpConfig(4.5e8), cav.omega_c, HE)
    return rel(pc, 0.6e-12) <= 0.05 and ph <= 2e-14, f"cavity {pc * 1e12:.4f} pW, helium bound {ph:.4g} W"


def c10_noise_temperature():
    tn = noise_temperature(3e-3, HE, V_EFF_REF)
    t_sql = noise_temperature(dp_sql(OMEGA_M, HE, V_EFF_REF), HE, V_EFF_REF)
    target = CONSTANTS.hbar * OMEGA_M / CONSTANTS.k_B
    ok = rel(tn, 1.5e6) <= 0.05 and rel(t_sql, target) <= 4 * np.finfo(float).eps
    return ok, f"T_n = {tn:.4g} K, T_n(dP_SQL) / (hbar w / k_B) - 1 = {t_sql / target - 1:.1e}"


def c11_inertial():
    mass = helium_mass(GEOM, HE)
    x_th = thermal_displacement(0.1, mass, OMEGA_M)
    x0_warm = displacement_sensitivity(x_th, 3e6)
    x0_cold = displacement_sensitivity(thermal_displacement(0.010, mass, OMEGA_M), 1e11)
    h = strain_sensitivity(x0_cold, GEOM.length)
    ok = rel(x_th, 2e-16) <= 0.30 and rel(x0_warm, 8e-23) <= 0.10 and rel(x0_cold, 8e-28) <= 0.10 and rel(h, 2e-26) <= 0.10
    return ok, f"x_th = {x_th:.3g} m, x0 = {x0_warm:.3g} m, x0 = {x0_cold:.3g} m, h = {h:.3g}"


def c12_ringdown():
    omega = TWO_PI * 12201
    tau = decay_time(7e6, omega)
    fit = fit_ringdown(synthesize_ringdown(7e6, omega, 1.0, 10.0, 2 * tau, noise=0.01, seed=2013), omega)
    return rel(fit.q, 7e6) <= 0.01, f"fitted Q = {fit.q:.5g} +/- {fit.q_stderr:.2g}"


def c13_properties():
    # Root oracle: mpmath zeros at 30 digits, 10^-8 absolute.
    root_err = 0.0
    for m in range(6):
        # mpmath also counts x = 0 as the first zero of J'_0.
        ours = bessel_jprime_roots(m, 6).roots
        ref = [float(mpmath.besseljzero(m, k, derivative=1)) for k in range(1, len(ours) + 1)]
        root_err = max(root_err, max(abs(a - b) for a, b in zip(ours, ref)))
        ref_j = [float(mpmath.besseljzero(m, k)) for k in range(1, 6)]
        root_err = max(root_err, max(abs(a - b) for a, b in zip(bessel_j_roots(m, 5).roots, ref_j)))
    # Quadrature against closed-form mode integrals.
    vol_err = 0.0
    for m in range(3):
        for n in range(3):
            for k in range(5):
                if (n == 0 and m != 0) or (m, n, k) == (0, 0, 0):
                    continue
                i = AcousticModeIndex(m, n, k)
                vol_err = max(vol_err, rel(make_mode(GEOM, HE.c4, i).v_eff, closed_form_effective_volume(i, GEOM)))
    # Azimuthal selection rule.
    em = te0np_intensity(GEOM, TE011, HE.eps_R)
    az = [overlap_omega(make_mode(GEOM, HE.c4, AcousticModeIndex(m, 1, k)), em, HE.eps_R) for m in (1, 2, 3) for k in (0, 2)]
    # Sweep determinism.
    axes = [SweepAxis.grid("length", 0.035, 0.045, 3), SweepAxis("c4", (238.0, 357.0))]
    csv_a = sweep(axes, RunConfig(), "fixed", "g0_magnitude").to_csv()
    csv_b = sweep(axes, RunConfig(), "fixed", "g0_magnitude").to_csv()
    # Reciprocal-sum monotonicity.
    rng = np.random.default_rng(7)
    mono = True
    for _ in range(200):
        qs = list(10 ** rng.uniform(3, 14, size=rng.integers(1, 6)))
        base = combine_budget([(str(i), q) for i, q in enumerate(qs)]).q_total
        more = combine_budget([(str(i), q) for i, q in enumerate(qs)] + [("x", 10 ** rng.uniform(3, 14))]).q_total
        mono &= more <= base <= min(qs) * (1 + 1e-15)
    ok = root_err <= 1e-8 and vol_err <= 1e-6 and all(o == 0.0 for o in az) and csv_a == csv_b and mono
    return ok, (f"roots {root_err:.1e}, V_eff {vol_err:.1e}, Omega(m>=1) all zero {all(o == 0.0 for o in az)}, "
                f"sweep identical {csv_a == csv_b}, monotone {mono}")


CRITERIA = [
    (1, "cavity volume and helium mass", c01_volume_and_mass),
    (2, "TE011 frequency vacuum and filled", c02_te011),
    (3, "acoustic spectrum matches measured modes", c03_spectrum),
    (4, "overlap Omega and midpoint oracle", c04_overlap),
    (5, "zero-point pressure and g0", c05_zero_point_and_g0),
    (6, "three-phonon Q at 10 mK", c06_three_phonon),
    (7, "number-state lifetime", c07_lifetime),
    (8, "wall-limited Q", c08_wall),
    (9, "cavity and helium heating", c09_heating),
    (10, "noise temperature", c10_noise_temperature),
    (11, "thermal motion and inertial sensitivity", c11_inertial),
    (12, "ringdown round trip", c12_ringdown),
    (13, "property suites", c13_properties),
]


def evaluate_criterion(func):
    start = time.perf_counter()
    try:
        ok, detail = func()
    except Exception as exc:  # report, then fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return bool(ok), detail, time.perf_counter() - start


def format_line(number, name, ok, detail, seconds):
    return f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail} [{seconds:.2f} s]"


@pytest.mark.parametrize("number, name, func", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, name, func, capsys):
    ok, detail, seconds = evaluate_criterion(func)
    with capsys.disabled():
        print("\n" + format_line(number, name, ok, detail, seconds))
    assert ok, detail
    assert seconds < 60


if __name__ == "__main__":
    failures = 0
    for number, name, func in CRITERIA:
        ok, detail, seconds = evaluate_criterion(func)
        failures += not ok
        print(format_line(number, name, ok, detail, seconds))
    sys.exit(1 if failures else 0)
