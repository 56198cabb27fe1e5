"""Linear optical elements and the sum-frequency product."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ResolutionError
from .spectra import (
    SpectralField,
    check_compatible,
    samples_to_spectrum,
    spectrum_to_samples,
)

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True, eq=False)
class PolarizedPair:
    """Horizontal and vertical components of one spatial mode."""

    h: SpectralField
    v: SpectralField

    def __post_init__(self):
        check_compatible(self.h, self.v)

    @property
    def energy(self) -> float:
        return self.h.energy + self.v.energy

    def swapped(self) -> "PolarizedPair":
        return PolarizedPair(self.v, self.h)


def beamsplitter(a: SpectralField, b: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Lossless 50:50 splitter, symmetric convention out1 = (a + ib)/sqrt2, out2 = (ia + b)/sqrt2."""
    check_compatible(a, b)
    out1 = a.with_amps(SQRT_HALF * (a.amps + 1j * b.amps))
    out2 = a.with_amps(SQRT_HALF * (1j * a.amps + b.amps))
    return out1, out2


def half_wave_plate(p: PolarizedPair, theta_deg: float) -> PolarizedPair:
    t = np.deg2rad(2.0 * theta_deg)
    c, s = np.cos(t), np.sin(t)
    h = p.h.with_amps(c * p.h.amps + s * p.v.amps)
    v = p.v.with_amps(s * p.h.amps - c * p.v.amps)
    return PolarizedPair(h, v)


def polarizer(p: PolarizedPair, theta_deg: float) -> SpectralField:
    t = np.deg2rad(theta_deg)
    return p.h.with_amps(np.cos(t) * p.h.amps + np.sin(t) * p.v.amps)


def sfg_fields(h: SpectralField, v: SpectralField, check: bool = True) -> SpectralField:
    """Instantaneous chi(2) product of two fundamental envelopes, tagged at 2*carrier.

    Phase matching is taken as flat across the grid.
    """
    check_compatible(h, v)
    if h.carrier_multiple != 1:
        raise ConfigurationError("SFG inputs must be fundamental fields (carrier_multiple 1)")
    grid = h.grid
    product = spectrum_to_samples(h.amps, grid) * spectrum_to_samples(v.amps, grid)
    amps = samples_to_spectrum(product, grid)
    if check:
        check_band_guard(amps)
    return SpectralField(grid, amps, 2)


def sfg_product(p: PolarizedPair) -> SpectralField:
    return sfg_fields(p.h, p.v)


def check_band_guard(amps: np.ndarray, fraction: float = 0.1, limit: float = 1e-6):
    """Require the energy in the outer ``fraction`` of bins to be below ``limit`` of the total."""
    power = np.abs(amps) ** 2
    total = power.sum()
    if total == 0:
        return
    n = len(amps)
    edge = max(1, int(round(0.5 * fraction * n)))
    outer = power[:edge].sum() + power[-edge:].sum()
    if outer > limit * total:
        raise ResolutionError(
            f"SFG spectrum overflows the grid: {outer / total:.2e} of its energy sits in the outer bins"
        )
