"""Shared helpers: random physical states and analytic truth for simulations."""

import numpy as np
import pytest

from hccm.detector import ExperimentConfig
from hccm.gaussian import (
    apply_loss,
    complex_moments,
    from_quadrature_variances,
    normal_ordered_signal_moments,
)
from hccm.splitter import splitter_coefficients


def random_physical_state(rng, r_max=1.0, alpha_max=3.0, impure=True):
    """Random displaced squeezed state, optionally with extra thermal noise."""
    r = rng.uniform(0.0, r_max)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    extra = rng.uniform(1.0, 2.0) if impure else 1.0
    alpha = alpha_max * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) / np.sqrt(2)
    return from_quadrature_variances(
        extra * np.exp(-2 * r), extra * np.exp(2 * r), theta, alpha
    )


def degraded_signal_moments(cfg: ExperimentConfig, phi: float):
    """Moment triple of the signal as seen behind uniform detection loss."""
    det = cfg.detector
    assert det.eta1 == det.eta2, "analytic truth requires equal efficiencies"
    state = apply_loss(cfg.signal.state(), det.eta1)
    return normal_ordered_signal_moments(state, phi)


def analytic_truth(cfg: ExperimentConfig):
    """Exact Fourier coefficients of the offset-corrected correlation C(phi).

    Valid for equal detector efficiencies: uniform loss on both outputs equals
    the same loss on both inputs, so the effective interfering LO strength is
    sqrt(eta) * visibility * E_L on the loss-degraded signal.

    Returns a dict with a0..b2 of the corrected data, c_block (including any
    correlated dark-noise contamination), and the blocked-signal offset.
    """
    det = cfg.detector
    assert det.eta1 == det.eta2
    eta = det.eta1
    k_gain = det.gain1 * det.gain2
    state = apply_loss(cfg.signal.state(), eta)
    alpha_v, m_mat, n_mat = complex_moments(state)
    a, m, n = alpha_v[0], m_mat[0, 0], n_mat[0, 0].real
    coeff = splitter_coefficients(cfg.splitter)
    e_int = np.sqrt(eta) * cfg.visibility * cfg.e_l

    var_i = 2.0 * (np.conj(a) ** 2 * m).real + 2.0 * abs(a) ** 2 * n + abs(m) ** 2 + n**2
    big_a = np.conj(a) * m + a * n
    k = k_gain * coeff.tt
    a1 = 2.0 * k * coeff.t1 * e_int * big_a.real
    b1 = 2.0 * k * coeff.t1 * e_int * big_a.imag
    a2 = 2.0 * k * coeff.t2 * e_int**2 * m.real
    b2 = 2.0 * k * coeff.t2 * e_int**2 * m.imag
    c_block = k * coeff.t0 * var_i + k_gain * det.dark_corr
    lo_flux = (
        np.array([det.eta1, det.eta2])
        * cfg.e_l**2
        * np.array([cfg.splitter.rl2, cfg.splitter.tl2])
    )
    offset = k_gain * (det.dark_corr + det.lo_excess * lo_flux[0] * lo_flux[1])
    a0 = k * coeff.t0 * var_i + k * coeff.t2 * e_int**2 * 2.0 * n
    return {
        "a0": a0,
        "a1": a1,
        "b1": b1,
        "a2": a2,
        "b2": b2,
        "c_block": c_block,
        "offset": offset,
        "var_i": var_i,
    }


def truth_correlation(cfg: ExperimentConfig, phi: float) -> float:
    """Exact offset-corrected correlation at one phase."""
    t = analytic_truth(cfg)
    return (
        t["a0"]
        + t["a1"] * np.cos(phi)
        + t["b1"] * np.sin(phi)
        + t["a2"] * np.cos(2 * phi)
        + t["b2"] * np.sin(2 * phi)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
