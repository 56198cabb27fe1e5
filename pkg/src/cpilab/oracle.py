"""Two-photon coincidence reference built from a discrete joint spectral amplitude.

Detunings are in rad/fs about the degenerate frequency w0, delays in fs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from .errors import ConfigurationError, ResolutionError
from .spectra import BlockMask, EdgeMask, omega_to_wavelength, wavelength_to_omega

FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))


@dataclass(frozen=True)
class GaussianFilter:
    """Bandpass with Gaussian intensity transmission (FWHM in rad/fs) at a detuning."""

    center_detuning: float
    fwhm: float

    def amplitude(self, detuning: np.ndarray) -> np.ndarray:
        return np.exp(-2.0 * np.log(2.0) * (detuning - self.center_detuning) ** 2 / self.fwhm**2)


Filter = Optional[Union[GaussianFilter, BlockMask, EdgeMask]]


def _filter_amplitude(filt: Filter, detuning: np.ndarray, carrier: float) -> np.ndarray:
    if filt is None:
        return np.ones_like(detuning)
    if isinstance(filt, GaussianFilter):
        return filt.amplitude(detuning)
    return filt.transmission(omega_to_wavelength(carrier + detuning))


@dataclass(frozen=True, eq=False)
class JointSpectralAmplitude:
    detuning: np.ndarray
    delta_omega: float
    carrier: float
    amplitude: np.ndarray  # filtered, normalized f(w1, w2)
    source: np.ndarray  # unfiltered, normalized
    filter1: np.ndarray
    filter2: np.ndarray
    pump_fwhm: float
    marginal_fwhm: float

    @property
    def m(self) -> int:
        return len(self.detuning)

    @property
    def max_delay_fs(self) -> float:
        return np.pi / self.delta_omega


def build_jsa(
    pump_fwhm: float | None,
    marginal_fwhm: float,
    filter1: Filter = None,
    filter2: Filter = None,
    m: int = 256,
    span: float | None = None,
    center_wavelength_nm: float = 790.0,
) -> JointSpectralAmplitude:
    """Gaussian-pump, Gaussian-marginal JSA with optional per-detector filters.

    ``pump_fwhm`` defaults to marginal_fwhm / 50.  A pump narrower than the
    grid step collapses onto the anti-diagonal, which is the intended
    narrow-pump limit.
    """
    if m < 64:
        raise ConfigurationError("JSA grid needs m >= 64")
    if not marginal_fwhm > 0:
        raise ConfigurationError("marginal_fwhm must be positive")
    if pump_fwhm is None:
        pump_fwhm = marginal_fwhm / 50
    if not pump_fwhm > 0:
        raise ConfigurationError("pump_fwhm must be positive")
    if span is None:
        span = 6.0 * marginal_fwhm
        for f in (filter1, filter2):
            if isinstance(f, GaussianFilter):
                span = max(span, 2.0 * (abs(f.center_detuning) + 2.0 * f.fwhm))
    dw = span / m
    if marginal_fwhm < 4 * dw:
        raise ResolutionError(f"marginal width {marginal_fwhm:.3g} rad/fs unresolved by step {dw:.3g}")
    w = (np.arange(m) - m // 2) * dw
    carrier = float(wavelength_to_omega(center_wavelength_nm))
    sp, sm = pump_fwhm * FWHM_TO_SIGMA, marginal_fwhm * FWHM_TO_SIGMA
    w1, w2 = np.meshgrid(w, w, indexing="ij")
    source = np.exp(-((w1 + w2) ** 2) / (4 * sp**2)) * np.exp(-(w1**2 + w2**2) / (4 * sm**2))
    norm = np.sqrt(np.sum(np.abs(source) ** 2) * dw**2)
    if norm == 0:
        raise ResolutionError("JSA vanishes on the grid")
    source = source / norm
    f1 = _filter_amplitude(filter1, w, carrier)
    f2 = _filter_amplitude(filter2, w, carrier)
    filtered = source * np.outer(f1, f2)
    fnorm = np.sqrt(np.sum(np.abs(filtered) ** 2) * dw**2)
    if fnorm == 0:
        raise ResolutionError("filters block the whole JSA")
    return JointSpectralAmplitude(w, dw, carrier, filtered / fnorm, source, f1, f2, pump_fwhm, marginal_fwhm)


def marginal_peaks(jsa: JointSpectralAmplitude) -> tuple[float, float]:
    """Mean detunings of the two filtered single-photon spectra."""
    p = np.abs(jsa.amplitude) ** 2
    m1, m2 = p.sum(axis=1), p.sum(axis=0)
    w = jsa.detuning
    return float(np.sum(m1 * w) / m1.sum()), float(np.sum(m2 * w) / m2.sum())


def _check_delays(delays_fs: np.ndarray, limit: float):
    if np.any(np.abs(delays_fs) > limit):
        raise ResolutionError(f"delays exceed the +/-{limit:.4g} fs range resolved by the grid")


def interference_term(jsa: JointSpectralAmplitude, delays_fs) -> np.ndarray:
    """Normalized exchange overlap V(tau).

    Filters act on the detectors, so both exchange amplitudes at detector
    frequencies (w1, w2) share the weight |F1(w1) F2(w2)|^2.
    """
    tau = np.atleast_1d(np.asarray(delays_fs, float))
    _check_delays(tau, jsa.max_delay_fs)
    s = jsa.source
    weight = np.abs(np.outer(jsa.filter1, jsa.filter2)) ** 2
    kernel = weight * s * np.conj(s.T)
    norm = 0.5 * np.sum(weight * (np.abs(s) ** 2 + np.abs(s.T) ** 2))
    phase = np.exp(1j * np.outer(jsa.detuning, tau))
    # sum_ij K_ij e^{i w_i tau} e^{-i w_j tau}
    return np.sum(phase * (kernel @ np.conj(phase)), axis=0) / norm


def coincidence_scan(
    jsa: JointSpectralAmplitude, delays_fs, port_mode: Literal["opposite", "same"] = "opposite"
) -> np.ndarray:
    """Normalized coincidence probability: opposite ports dip, same port peaks."""
    # |V| <= 1 analytically; clip rounding so probabilities stay in [0, 1]
    v = np.clip(interference_term(jsa, delays_fs).real, -1.0, 1.0)
    if port_mode == "opposite":
        return 0.5 * (1.0 - v)
    if port_mode == "same":
        return 0.5 * (1.0 + v)
    raise ConfigurationError(f"unknown port_mode {port_mode!r}")


def noon_scan(
    marginal_fwhm: float,
    delays_fs,
    center_wavelength_nm: float = 790.0,
    m: int = 256,
    span: float | None = None,
) -> np.ndarray:
    """Two-photon NOON fringes P = (1 - env cos(2 w0 tau)) / 2."""
    span = span or 6.0 * marginal_fwhm
    dw = span / m
    if marginal_fwhm < 4 * dw:
        raise ResolutionError("marginal spectrum unresolved")
    tau = np.atleast_1d(np.asarray(delays_fs, float))
    _check_delays(tau, np.pi / (2 * dw))
    w = (np.arange(m) - m // 2) * dw
    power = np.exp(-4.0 * np.log(2.0) * w**2 / marginal_fwhm**2)
    power /= np.sum(power) * dw
    env = np.abs(np.exp(2j * np.outer(tau, w)) @ power * dw)
    w0 = float(wavelength_to_omega(center_wavelength_nm))
    return 0.5 * (1.0 - env * np.cos(2 * w0 * tau))
