"""Frequency grids, chirped pulse synthesis, spectral masks and delays.

Fields are complex baseband envelopes sampled on a uniform detuning grid
about a carrier.  Units: wavelengths in nm at the interface, angular
frequencies in rad/fs, times in fs.  The time convention is exp(-i*w*t),
so a delay tau multiplies the spectrum by exp(+i*w*tau).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from scipy.special import erf, ndtr

from .errors import (
    AliasingError,
    ConfigurationError,
    GridMismatchError,
    MaskOutsideGridWarning,
    ResolutionError,
    UndefinedStatsError,
)

C_UM_PER_FS = 0.299792458
C_NM_PER_FS = C_UM_PER_FS * 1e3
FWHM_GAUSS_INTENSITY = 4.0 * np.log(2.0)  # time-bandwidth product in rad


def wavelength_to_omega(wavelength_nm):
    return 2.0 * np.pi * C_NM_PER_FS / np.asarray(wavelength_nm, dtype=float)


def omega_to_wavelength(omega):
    return 2.0 * np.pi * C_NM_PER_FS / np.asarray(omega, dtype=float)


def bandwidth_nm_to_omega(fwhm_nm: float, center_nm: float) -> float:
    """Linearized conversion of a wavelength FWHM to an angular-frequency FWHM."""
    return 2.0 * np.pi * C_NM_PER_FS * fwhm_nm / center_nm**2


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class FrequencyGrid:
    n: int
    delta_omega: float
    carrier: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)) or self.n < 16:
            raise ConfigurationError(f"grid size n={self.n} must be a power of two >= 16")
        if not self.delta_omega > 0 or not self.carrier > 0:
            raise ConfigurationError("delta_omega and carrier must be positive")
        if self.n * self.delta_omega >= 2.0 * self.carrier:
            raise ConfigurationError(
                f"span {self.n * self.delta_omega:.4g} rad/fs exceeds twice the carrier; baseband invalid"
            )

    @property
    def span(self) -> float:
        return self.n * self.delta_omega

    @property
    def detuning(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.delta_omega

    @property
    def time_window(self) -> float:
        return 2.0 * np.pi / self.delta_omega

    @property
    def dt(self) -> float:
        return self.time_window / self.n

    @property
    def times(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dt

    @property
    def center_wavelength_nm(self) -> float:
        return float(omega_to_wavelength(self.carrier))

    def absolute_omega(self, carrier_multiple: int = 1) -> np.ndarray:
        return carrier_multiple * self.carrier + self.detuning

    def wavelengths_nm(self, carrier_multiple: int = 1) -> np.ndarray:
        return omega_to_wavelength(self.absolute_omega(carrier_multiple))


def make_grid(n: int, center_wavelength_nm: float, span_rad_per_fs: float) -> FrequencyGrid:
    if center_wavelength_nm <= 0:
        raise ConfigurationError("center wavelength must be positive")
    if span_rad_per_fs <= 0:
        raise ConfigurationError("span must be positive")
    if not isinstance(n, (int, np.integer)) or n < 16 or not _is_power_of_two(int(n)):
        raise ConfigurationError(f"grid size n={n} must be a power of two >= 16")
    return FrequencyGrid(int(n), span_rad_per_fs / n, float(wavelength_to_omega(center_wavelength_nm)))


def _check_multiple(m: int):
    if m not in (1, 2):
        raise ConfigurationError(f"carrier_multiple must be 1 or 2, got {m}")


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: FrequencyGrid
    amps: np.ndarray
    carrier_multiple: int = 1

    def __post_init__(self):
        _check_multiple(self.carrier_multiple)
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.grid.n,):
            raise ConfigurationError(f"expected {self.grid.n} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ConfigurationError("spectral amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2) * self.grid.delta_omega)

    def with_amps(self, amps) -> "SpectralField":
        return SpectralField(self.grid, amps, self.carrier_multiple)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        check_compatible(self, other)
        return self.with_amps(self.amps + other.amps)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        check_compatible(self, other)
        return self.with_amps(self.amps - other.amps)

    def __mul__(self, z) -> "SpectralField":
        return self.with_amps(self.amps * z)

    __rmul__ = __mul__

    def __truediv__(self, z) -> "SpectralField":
        return self.with_amps(self.amps / z)


@dataclass(frozen=True, eq=False)
class TemporalField:
    grid: FrequencyGrid
    samples: np.ndarray
    carrier_multiple: int = 1

    def __post_init__(self):
        _check_multiple(self.carrier_multiple)
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n,):
            raise ConfigurationError(f"expected {self.grid.n} samples, got shape {samples.shape}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.dt)


def zero_field(grid: FrequencyGrid, carrier_multiple: int = 1) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.n, complex), carrier_multiple)


def check_compatible(a: SpectralField, b: SpectralField):
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different frequency grids")
    if a.carrier_multiple != b.carrier_multiple:
        raise GridMismatchError("fields have different carrier multiples")


# -- transforms -------------------------------------------------------------
# Centered unitary DFT pair: s_j = dw/sqrt(2pi) sum_k a_k exp(-i w_k t_j),
# so that sum |s|^2 dt == sum |a|^2 dw.

def spectrum_to_samples(amps: np.ndarray, grid: FrequencyGrid) -> np.ndarray:
    return grid.delta_omega / np.sqrt(2 * np.pi) * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(amps)))


def samples_to_spectrum(samples: np.ndarray, grid: FrequencyGrid) -> np.ndarray:
    n = grid.n
    return grid.dt * n / np.sqrt(2 * np.pi) * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(samples)))


def to_time(field: SpectralField) -> TemporalField:
    return TemporalField(field.grid, spectrum_to_samples(field.amps, field.grid), field.carrier_multiple)


def to_frequency(field: TemporalField) -> SpectralField:
    return SpectralField(field.grid, samples_to_spectrum(field.samples, field.grid), field.carrier_multiple)


def transform(field: Union[SpectralField, TemporalField], direction: Literal["to-time", "to-frequency"]):
    if direction == "to-time":
        if not isinstance(field, SpectralField):
            raise TypeError("to-time expects a SpectralField")
        return to_time(field)
    if direction == "to-frequency":
        if not isinstance(field, TemporalField):
            raise TypeError("to-frequency expects a TemporalField")
        return to_frequency(field)
    raise ConfigurationError(f"unknown direction {direction!r}")


# -- pulses -----------------------------------------------------------------

@dataclass(frozen=True)
class PulseSpec:
    center_wavelength_nm: float = 790.0
    fwhm_bandwidth_nm: float = 10.0
    gdd_fs2: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.center_wavelength_nm > 0:
            raise ConfigurationError("center_wavelength_nm must be positive")
        if not self.fwhm_bandwidth_nm > 0:
            raise ConfigurationError("fwhm_bandwidth_nm must be positive")


def stretched_duration(transform_limited_fs: float, gdd_fs2: float) -> float:
    """Intensity FWHM of a Gaussian pulse after quadratic spectral phase."""
    t0 = transform_limited_fs
    return t0 * np.sqrt(1.0 + (FWHM_GAUSS_INTENSITY * gdd_fs2 / t0**2) ** 2)


def transform_limited_duration(fwhm_bandwidth_nm: float, center_wavelength_nm: float) -> float:
    return FWHM_GAUSS_INTENSITY / bandwidth_nm_to_omega(fwhm_bandwidth_nm, center_wavelength_nm)


def apply_chirp(field: SpectralField, gdd_fs2: float) -> SpectralField:
    """Multiply by exp(i*gdd*w^2/2); a pure phase."""
    w = field.grid.detuning
    return field.with_amps(field.amps * np.exp(0.5j * gdd_fs2 * w**2))


def synthesize_pulse(grid: FrequencyGrid, spec: PulseSpec) -> SpectralField:
    dw_fwhm = bandwidth_nm_to_omega(spec.fwhm_bandwidth_nm, spec.center_wavelength_nm)
    offset = float(wavelength_to_omega(spec.center_wavelength_nm)) - grid.carrier
    w = grid.detuning
    x = w - offset
    # Intensity FWHM dw_fwhm -> amplitude exp(-2 ln2 x^2 / dw^2)
    amps = spec.amplitude * np.exp(-2.0 * np.log(2.0) * x**2 / dw_fwhm**2)
    # Analytic out-of-span weight: the Gaussian intensity tail beyond each grid edge.
    sigma = dw_fwhm / np.sqrt(8.0 * np.log(2.0))
    lo, hi = w[0] - 0.5 * grid.delta_omega, w[-1] + 0.5 * grid.delta_omega
    outside = ndtr((lo - offset) / sigma) + ndtr(-(hi - offset) / sigma)
    if outside > 1e-6:
        raise ResolutionError(
            f"pulse spectrum clipped by grid: {outside:.2e} of the intensity lies outside the span"
        )
    amps = amps * np.exp(0.5j * spec.gdd_fs2 * w**2)
    return SpectralField(grid, amps, 1)


# -- masks ------------------------------------------------------------------

@dataclass(frozen=True)
class BlockMask:
    """Opaque band |lambda - center| < width/2 (e.g. an Allen key in the stretcher)."""

    center_nm: float
    width_nm: float
    transition_nm: float = 0.0

    def __post_init__(self):
        if not self.width_nm > 0:
            raise ConfigurationError("block width_nm must be positive")
        if self.transition_nm < 0:
            raise ConfigurationError("transition_nm must be >= 0")

    def transmission(self, wavelength_nm: np.ndarray) -> np.ndarray:
        d = np.abs(np.asarray(wavelength_nm) - self.center_nm) - 0.5 * self.width_nm
        if self.transition_nm == 0:
            return (d >= 0).astype(float)
        return 0.5 * (1.0 + erf(d / self.transition_nm))

    def bounds(self):
        return self.center_nm - 0.5 * self.width_nm, self.center_nm + 0.5 * self.width_nm


@dataclass(frozen=True)
class EdgeMask:
    """Razor-blade cut: keep wavelengths on one side of ``cutoff_nm``.

    ``transition_nm`` > 0 gives an erf-shaped amplitude edge of that scale
    instead of a one-bin hard edge.
    """

    cutoff_nm: float
    keep: Literal["red-side", "blue-side"]
    transition_nm: float = 0.0

    def __post_init__(self):
        if self.keep not in ("red-side", "blue-side"):
            raise ConfigurationError(f"edge keep must be 'red-side' or 'blue-side', got {self.keep!r}")
        if self.transition_nm < 0:
            raise ConfigurationError("transition_nm must be >= 0")

    def transmission(self, wavelength_nm: np.ndarray) -> np.ndarray:
        d = np.asarray(wavelength_nm) - self.cutoff_nm
        if self.keep == "blue-side":
            d = -d
        if self.transition_nm == 0:
            return (d > 0).astype(float)
        return 0.5 * (1.0 + erf(d / self.transition_nm))

    def bounds(self):
        return self.cutoff_nm, self.cutoff_nm


MaskSpec = Union[BlockMask, EdgeMask]


def apply_mask(field: SpectralField, mask: MaskSpec) -> SpectralField:
    """Zero (or attenuate) the masked spectral region.

    A mask entirely outside the grid leaves the field unchanged and emits a
    :class:`MaskOutsideGridWarning`.
    """
    lam = field.grid.wavelengths_nm(field.carrier_multiple)
    lo_nm, hi_nm = float(lam.min()), float(lam.max())
    m_lo, m_hi = mask.bounds()
    if m_hi < lo_nm or m_lo > hi_nm:
        warnings.warn(
            f"mask {mask} lies outside the grid span [{lo_nm:.2f}, {hi_nm:.2f}] nm; ignored",
            MaskOutsideGridWarning,
            stacklevel=2,
        )
        return field
    return field.with_amps(field.amps * mask.transmission(lam))


# -- delay ------------------------------------------------------------------

def delay_field(field: SpectralField, tau_fs: float, duration_fs: float | None = None) -> SpectralField:
    """Delay by tau, including the carrier phase.

    ``duration_fs`` is the pulse duration used by the window guard; it is
    measured from the field when omitted.
    """
    grid = field.grid
    if tau_fs != 0:
        if duration_fs is None:
            duration_fs = field_stats(field)["temporal_fwhm_fs"] if field.energy > 0 else 0.0
        if abs(tau_fs) + duration_fs > 0.9 * grid.time_window:
            raise AliasingError(
                f"delay {tau_fs:.4g} fs plus pulse duration {duration_fs:.4g} fs overflows "
                f"90% of the {grid.time_window:.4g} fs time window"
            )
    w = field.carrier_multiple * grid.carrier + grid.detuning
    return field.with_amps(field.amps * np.exp(1j * w * tau_fs))


# -- statistics -------------------------------------------------------------

def _half_max_crossings(x, y):
    k = int(np.argmax(y))
    half = 0.5 * y[k]
    above = np.nonzero(y >= half)[0]
    i0, i1 = above[0], above[-1]
    if i0 == 0 or i1 == len(y) - 1:
        raise UndefinedStatsError("profile does not fall below half maximum inside the window")
    left = x[i0 - 1] + (half - y[i0 - 1]) * (x[i0] - x[i0 - 1]) / (y[i0] - y[i0 - 1])
    right = x[i1] + (half - y[i1]) * (x[i1 + 1] - x[i1]) / (y[i1 + 1] - y[i1])
    return left, right


def fwhm_linear(x: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum from linearly interpolated half-max crossings."""
    left, right = _half_max_crossings(x, y)
    return float(right - left)


def _peak_offset(y: np.ndarray, k: int) -> float:
    if k == 0 or k == len(y) - 1 or y[k - 1] == 0 or y[k + 1] == 0:
        return 0.0
    den = y[k - 1] - 2 * y[k] + y[k + 1]
    return 0.0 if den == 0 else 0.5 * (y[k - 1] - y[k + 1]) / den


def spectral_peak_omega(field: SpectralField) -> float:
    """Absolute angular frequency of the spectral intensity maximum (sub-bin interpolated)."""
    spec = np.abs(field.amps) ** 2
    k = int(np.argmax(spec))
    return float(field.grid.absolute_omega(field.carrier_multiple)[k] + _peak_offset(spec, k) * field.grid.delta_omega)


def field_stats(field: SpectralField) -> dict:
    """Energy, spectral/temporal FWHM and peak wavelength of a field."""
    energy = field.energy
    if not energy > 0:
        raise UndefinedStatsError("statistics of a zero field are undefined")
    grid = field.grid
    w_abs = grid.absolute_omega(field.carrier_multiple)
    spec = np.abs(field.amps) ** 2
    left, right = _half_max_crossings(w_abs, spec)
    spectral_fwhm_nm = float(omega_to_wavelength(left) - omega_to_wavelength(right))
    w_peak = spectral_peak_omega(field)

    # Zero-pad the spectrum until the pulse spans >= 32 time samples.
    pad = 1
    while True:
        n = grid.n * pad
        amps = np.zeros(n, complex)
        amps[(n - grid.n) // 2 : (n + grid.n) // 2] = field.amps
        dt = grid.time_window / n
        s = grid.delta_omega / np.sqrt(2 * np.pi) * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(amps)))
        t = (np.arange(n) - n // 2) * dt
        temporal_fwhm = fwhm_linear(t, np.abs(s) ** 2)
        if temporal_fwhm >= 32 * dt or pad >= 64:
            break
        pad *= 2
    return {
        "energy": energy,
        "spectral_fwhm_nm": spectral_fwhm_nm,
        "temporal_fwhm_fs": temporal_fwhm,
        "peak_wavelength_nm": float(omega_to_wavelength(w_peak)),
        "peak_omega": float(w_peak),
    }


def instantaneous_frequency(field: TemporalField) -> np.ndarray:
    """Instantaneous detuning -d(phase)/dt for the exp(-i w t) convention."""
    phase = np.unwrap(np.angle(field.samples))
    return -np.gradient(phase, field.grid.dt)
