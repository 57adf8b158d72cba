"""Evaluate the full model chain for one configuration and mode pair."""

from __future__ import annotations

import math

from .acoustics import AcousticModeIndex, enumerate_modes, make_mode, match_frequency
from .coupling import MicrowaveCavityParams, couple
from .dissipation import He3LossModel, WallLossParams, loss_budget
from .electromagnetics import EmModeIndex, em_frequency, te0np_intensity
from .materials import CONSTANTS, helium_mass
from .measurement import PhaseNoiseSpec, PumpConfig, sensitivity_report

ROW_COLUMNS = (
    "acoustic_index",
    "em_index",
    "acoustic_frequency_hz",
    "has_radial_node",
    "v_eff_m3",
    "em_frequency_hz",
    "omega_c_rad_s",
    "omega_overlap",
    "dwc_dp_hz_per_pa",
    "dp_sql_pa",
    "g0_rad_s",
    "sideband_resolved",
    "sideband_margin",
    "q_three_phonon",
    "q_he3",
    "q_wall",
    "q_total",
    "tau_n_s",
    "p_min_pa",
    "t_noise_k",
    "x_th_m",
    "x0_min_m",
    "strain_h",
)


def cavity_params(config, em_index=None):
    cav = config.cavity
    two_pi = 2 * math.pi
    if cav.omega_c_source == "model":
        idx = em_index or EmModeIndex.parse(config.modes.em)
        omega_c = two_pi * em_frequency(config.geometry, config.helium.eps_R, idx)
    else:
        omega_c = two_pi * cav.f_c_hz
    return MicrowaveCavityParams(
        omega_c, two_pi * cav.kappa_int_hz, two_pi * cav.kappa_in_hz, two_pi * cav.kappa_out_hz
    )


def wall_params(config):
    if not config.losses.wall:
        return None
    q_sub = config.losses.q_substrate
    if q_sub is None:
        q_sub = config.niobium.q_mech
    return WallLossParams(q_sub, config.losses.energy_fraction)


def he3_model(config):
    if not config.losses.he3:
        return None
    return He3LossModel(config.losses.he3_coefficient, enabled=True)


def budget_for(config, omega_m, temperature=None):
    T = config.measurement.temperature if temperature is None else temperature
    return loss_budget(
        T,
        omega_m,
        config.helium,
        wall=wall_params(config),
        he3=he3_model(config),
        three_phonon=config.losses.three_phonon,
    )


def phase_noise(config, acoustic_frequency):
    meas = config.measurement
    if meas.bandwidth_hz is None:
        return None
    offset = meas.phase_noise_offset_hz or acoustic_frequency
    return PhaseNoiseSpec(meas.phase_noise_dbc, offset, meas.bandwidth_hz)


def select_modes(config, rule, target_hz=None):
    """Acoustic indices picked by the selection rule; empty list if tracking fails."""
    geom, c4 = config.geometry, config.helium.c4
    if rule == "fixed":
        return [AcousticModeIndex.parse(config.modes.acoustic)]
    if rule == "track":
        hits = match_frequency(enumerate_modes(geom, c4, 1.01 * target_hz), target_hz)
        return [hits[0].index] if hits else []
    if rule == "all":
        return [mode.index for mode in enumerate_modes(geom, c4, config.modes.fmax_hz)]
    raise ValueError(f"unknown selection rule {rule!r}")


def evaluate(config, acoustic_index, em_index=None):
    """Flat result row (keys in ROW_COLUMNS) for one mode pair."""
    em_index = em_index or EmModeIndex.parse(config.modes.em)
    geom, he = config.geometry, config.helium
    acoustic = make_mode(geom, he.c4, acoustic_index)
    em = te0np_intensity(geom, em_index, he.eps_R)
    cavity = cavity_params(config, em_index)
    spec = config.quadrature.spec()
    result = couple(acoustic, em, he, cavity, spec=spec)
    budget = budget_for(config, acoustic.omega)
    meas = config.measurement
    q_acoustic = meas.q_acoustic or budget.q_total
    sense = sensitivity_report(
        pump=PumpConfig(meas.n_photons, 2 * math.pi * meas.detuning_hz),
        cavity=cavity,
        he=he,
        mass=helium_mass(geom, he),
        omega_m=acoustic.omega,
        temperature=meas.temperature,
        q_acoustic=q_acoustic,
        baseline=meas.strain_baseline or geom.length,
        v_eff=acoustic.v_eff,
        dwc_dp=result.dwc_dP if result.dwc_dP != 0 else None,
        noise=phase_noise(config, acoustic.frequency),
        consts=CONSTANTS,
    )
    return {
        "acoustic_index": str(acoustic_index),
        "em_index": str(em_index),
        "acoustic_frequency_hz": acoustic.frequency,
        "has_radial_node": acoustic.has_radial_node,
        "v_eff_m3": acoustic.v_eff,
        "em_frequency_hz": em.frequency,
        "omega_c_rad_s": cavity.omega_c,
        "omega_overlap": result.omega_overlap,
        "dwc_dp_hz_per_pa": result.dwc_dp_hz_per_pa,
        "dp_sql_pa": result.dP_sql,
        "g0_rad_s": result.g0,
        "sideband_resolved": result.sideband_resolved,
        "sideband_margin": acoustic.omega / cavity.kappa_tot,
        "q_three_phonon": budget.q_three_phonon,
        "q_he3": budget.q_he3,
        "q_wall": budget.q_wall,
        "q_total": budget.q_total,
        "tau_n_s": budget.tau_n,
        "p_min_pa": sense.p_min,
        "t_noise_k": sense.t_noise,
        "x_th_m": sense.x_th,
        "x0_min_m": sense.x0_min,
        "strain_h": sense.strain_h,
    }


def figure_of_merit(row, fom):
    """Scalar to maximise; None when the row lacks the needed quantity."""
    if fom == "g0_magnitude":
        return row["g0_rad_s"]
    if fom == "q_total":
        return row["q_total"]
    if fom == "sideband_margin":
        return row["sideband_margin"]
    if fom == "noise_temperature_inverse":
        t = row["t_noise_k"]
        return None if not t else 1.0 / t
    raise ValueError(f"unknown figure of merit {fom!r}")
