"""Chirped-pulse interferometer pipelines and delay scans.

Each preset wires the chirped (C) and anti-chirped (A) beams through a
50:50 correlator beamsplitter, delays arm 2, recombines the arms as H/V
at a polarizing beamsplitter and detects either a narrow band of the
sum-frequency light or the fundamental power.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .elements import PolarizedPair, beamsplitter, half_wave_plate, polarizer, sfg_fields
from .errors import ConfigurationError, UndersamplingError
from .spectra import (
    C_UM_PER_FS,
    BlockMask,
    EdgeMask,
    FrequencyGrid,
    PulseSpec,
    SpectralField,
    apply_chirp,
    apply_mask,
    bandwidth_nm_to_omega,
    delay_field,
    field_stats,
    make_grid,
    omega_to_wavelength,
    spectral_peak_omega,
    synthesize_pulse,
    wavelength_to_omega,
    zero_field,
)

PRESETS = ("dip", "peak", "peak_block", "beat", "psr", "whitelight")
TERM_SELECTIONS = ("all", "cross-only", "self-only")

DEFAULT_GDD_FS2 = 1.79e6
DEFAULT_BANDWIDTH_NM = 10.0
DEFAULT_CENTER_NM = 790.0
# 48 ps anti-chirped vs 54 ps chirped at equal chirp rate
PAPER_ANTICHIRPED_BANDWIDTH_NM = DEFAULT_BANDWIDTH_NM * 48.0 / 54.0
BEAT_EDGE_TRANSITION_NM = 0.66
HWP_ANGLE_DEG = 22.5
POLARIZER_ANGLE_DEG = 45.0


@dataclass(frozen=True)
class DetectorSpec:
    mode: Literal["sfg-narrowband", "fundamental-power"] = "sfg-narrowband"
    center_wavelength_nm: float = 395.0
    fwhm_nm: float = 0.4
    shape: Literal["gaussian", "rect"] = "gaussian"

    def __post_init__(self):
        if self.mode not in ("sfg-narrowband", "fundamental-power"):
            raise ConfigurationError(f"detector.mode: unknown mode {self.mode!r}")
        if self.shape not in ("gaussian", "rect"):
            raise ConfigurationError(f"detector.shape: unknown shape {self.shape!r}")
        if not self.fwhm_nm > 0:
            raise ConfigurationError("detector.fwhm_nm must be positive")
        if not self.center_wavelength_nm > 0:
            raise ConfigurationError("detector.center_wavelength_nm must be positive")


@dataclass(frozen=True)
class ScanSpec:
    start_um: float
    stop_um: float
    step_um: float
    mode: Literal["fringe", "envelope"] = "fringe"

    def __post_init__(self):
        if not self.step_um > 0:
            raise ConfigurationError("scan.step_um must be positive")
        if not self.stop_um > self.start_um:
            raise ConfigurationError("scan range is empty (stop_um <= start_um)")
        if self.mode not in ("fringe", "envelope"):
            raise ConfigurationError(f"scan.mode: unknown mode {self.mode!r}")

    def delays_um(self) -> np.ndarray:
        count = int(np.floor((self.stop_um - self.start_um) / self.step_um + 1e-9)) + 1
        return self.start_um + self.step_um * np.arange(count)


@dataclass(frozen=True)
class GridSpec:
    n: int = 8192
    span_rad_per_fs: float = 0.24
    center_wavelength_nm: float = DEFAULT_CENTER_NM

    def build(self) -> FrequencyGrid:
        return make_grid(self.n, self.center_wavelength_nm, self.span_rad_per_fs)


@dataclass(frozen=True)
class ExperimentSpec:
    preset: str
    chirped: PulseSpec
    antichirped: PulseSpec
    detector: DetectorSpec
    scan: ScanSpec
    masks_chirped: tuple = ()
    masks_antichirped: tuple = ()
    term_selection: str = "all"
    grid: GridSpec = field(default_factory=GridSpec)
    arm_gdd_fs2: float = 0.0

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigurationError(f"preset: unknown preset {self.preset!r}")
        if self.term_selection not in TERM_SELECTIONS:
            raise ConfigurationError(f"term_selection: unknown value {self.term_selection!r}")
        object.__setattr__(self, "masks_chirped", tuple(self.masks_chirped))
        object.__setattr__(self, "masks_antichirped", tuple(self.masks_antichirped))
        want = "fundamental-power" if self.preset == "whitelight" else "sfg-narrowband"
        if self.detector.mode != want:
            raise ConfigurationError(
                f"detector.mode: preset {self.preset!r} requires a {want!r} detector, got {self.detector.mode!r}"
            )

    def replace(self, **changes) -> "ExperimentSpec":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Interferogram:
    delays_um: np.ndarray
    signal: np.ndarray
    envelope_low: np.ndarray | None = None
    envelope_high: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        d = np.asarray(self.delays_um, float)
        s = np.asarray(self.signal, float)
        if d.shape != s.shape or d.ndim != 1:
            raise ValueError("delays and signal must be 1-d arrays of equal length")
        if len(d) > 1 and not np.all(np.diff(d) > 0):
            raise ValueError("delays must be strictly increasing")
        object.__setattr__(self, "delays_um", d)
        object.__setattr__(self, "signal", s)
        for name in ("envelope_low", "envelope_high"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, float)
                if val.shape != d.shape:
                    raise ValueError(f"{name} length differs from delays")
                object.__setattr__(self, name, val)

    @property
    def is_envelope(self) -> bool:
        return self.envelope_low is not None


# -- detection --------------------------------------------------------------

def detector_response(grid: FrequencyGrid, det: DetectorSpec, carrier_multiple: int) -> np.ndarray:
    w = grid.absolute_omega(carrier_multiple)
    wc = float(wavelength_to_omega(det.center_wavelength_nm))
    width = bandwidth_nm_to_omega(det.fwhm_nm, det.center_wavelength_nm)
    lo, hi = w[0], w[-1]
    if not (lo <= wc - 0.5 * width and wc + 0.5 * width <= hi):
        raise ConfigurationError(
            f"detector window {det.center_wavelength_nm} nm +/- {det.fwhm_nm / 2} nm lies outside the grid span"
        )
    if det.shape == "gaussian":
        return np.exp(-4.0 * np.log(2.0) * (w - wc) ** 2 / width**2)
    return (np.abs(w - wc) <= 0.5 * width).astype(float)


def detect_power(field: SpectralField, det: DetectorSpec, response: np.ndarray | None = None) -> float:
    """Filtered spectral energy; ``fundamental-power`` integrates everything."""
    power = np.abs(field.amps) ** 2
    if det.mode == "fundamental-power":
        return float(np.sum(power) * field.grid.delta_omega)
    if response is None:
        response = detector_response(field.grid, det, field.carrier_multiple)
    return float(np.sum(power * response) * field.grid.delta_omega)


# -- pipelines --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Pipeline:
    spec: ExperimentSpec
    grid: FrequencyGrid
    chirped: SpectralField
    antichirped: SpectralField
    stages: tuple
    duration_fs: float
    response: np.ndarray | None
    fringe_period_um: float | None

    def linear_stage(self, c: SpectralField, a: SpectralField, tau_fs: float):
        """Propagate (C, A) to the detector plane; returns a PolarizedPair or a fundamental field."""
        preset = self.spec.preset
        if preset in ("peak", "peak_block"):
            pre, _ = beamsplitter(c, a)
            in1, in2 = pre, zero_field(self.grid)
        else:
            in1, in2 = c, a
        arm1, arm2 = beamsplitter(in1, in2)
        if self.spec.arm_gdd_fs2:
            arm2 = apply_chirp(arm2, self.spec.arm_gdd_fs2)
        arm2 = delay_field(arm2, tau_fs, duration_fs=self.duration_fs)
        pair = PolarizedPair(arm1, arm2)
        if preset == "psr":
            return half_wave_plate(pair, HWP_ANGLE_DEG)
        if preset == "whitelight":
            return polarizer(pair, POLARIZER_ANGLE_DEG)
        return pair

    def term_fields(self, tau_fs: float) -> dict:
        """Detector-plane contributions sorted by beam origin (linearity)."""
        zero = zero_field(self.grid)
        from_c = self.linear_stage(self.chirped, zero, tau_fs)
        from_a = self.linear_stage(zero, self.antichirped, tau_fs)
        if self.spec.preset == "whitelight":
            return {"c": from_c, "a": from_a}
        return {
            "cc": sfg_fields(from_c.h, from_c.v),
            "aa": sfg_fields(from_a.h, from_a.v),
            "cross": sfg_fields(from_c.h, from_a.v) + sfg_fields(from_a.h, from_c.v),
        }

    def _detect(self, f: SpectralField) -> float:
        return detect_power(f, self.spec.detector, self.response)

    def evaluate(self, tau_fs: float, term_selection: str | None = None) -> float:
        """Detected signal averaged over the relative phase of the two input beams.

        The chirped and anti-chirped pulses come from separate stretcher and
        compressor paths, so their relative optical phase is not stable. Terms
        carrying different powers of that phase (CC, CA, AA) do not interfere
        on average and their detected powers simply add.
        """
        terms = self.term_fields(tau_fs)
        mode = term_selection or self.spec.term_selection
        if self.spec.preset == "whitelight":
            if mode == "cross-only":
                return 0.0
            return self._detect(terms["c"]) + self._detect(terms["a"])
        self_part = self._detect(terms["cc"]) + self._detect(terms["aa"])
        if mode == "self-only":
            return self_part
        cross = self._detect(terms["cross"])
        return cross if mode == "cross-only" else self_part + cross


def _stages(spec: ExperimentSpec) -> tuple:
    stages = []
    if spec.masks_chirped or spec.masks_antichirped:
        stages.append("masks")
    if spec.preset in ("peak", "peak_block"):
        stages.append("pre-beamsplitter")
    stages.append("beamsplitter")
    if spec.arm_gdd_fs2:
        stages.append("arm-dispersion")
    stages += ["delay", "pbs"]
    if spec.preset == "psr":
        stages.append(f"hwp@{HWP_ANGLE_DEG}")
    if spec.preset == "whitelight":
        stages.append(f"polarizer@{POLARIZER_ANGLE_DEG}")
    else:
        stages.append("sfg")
    stages.append(f"detect:{spec.detector.mode}")
    return tuple(stages)


def masked_beams(spec: ExperimentSpec, grid: FrequencyGrid | None = None):
    grid = grid or spec.grid.build()
    c = synthesize_pulse(grid, spec.chirped)
    a = synthesize_pulse(grid, spec.antichirped)
    for m in spec.masks_chirped:
        c = apply_mask(c, m)
    for m in spec.masks_antichirped:
        a = apply_mask(a, m)
    return c, a


def peak_difference_rad_per_ps(c: SpectralField, a: SpectralField) -> float:
    """Anti-chirped minus chirped spectral peak frequency."""
    return 1e3 * (spectral_peak_omega(a) - spectral_peak_omega(c))


def expected_fringe_period_um(spec: ExperimentSpec, grid: FrequencyGrid, c=None, a=None) -> float | None:
    lam0_um = 2 * np.pi * C_UM_PER_FS / grid.carrier
    if spec.preset == "psr":
        return lam0_um / 2
    if spec.preset == "whitelight":
        return lam0_um
    if spec.preset == "beat":
        dw = abs(peak_difference_rad_per_ps(c, a)) * 1e-3
        return 2 * np.pi * C_UM_PER_FS / dw if dw > 0 else None
    return None


def build_pipeline(spec: ExperimentSpec) -> Pipeline:
    grid = spec.grid.build()
    c, a = masked_beams(spec, grid)
    duration = max(field_stats(f)["temporal_fwhm_fs"] for f in (c, a) if f.energy > 0)
    if spec.detector.mode == "sfg-narrowband":
        response = detector_response(grid, spec.detector, 2)
    else:
        response = None
    period = expected_fringe_period_um(spec, grid, c, a)
    return Pipeline(spec, grid, c, a, _stages(spec), duration, response, period)


def evaluate_delay(pipeline: Pipeline, tau_fs: float) -> float:
    return pipeline.evaluate(tau_fs)


def _quadrature_fit(values: np.ndarray) -> tuple[float, float]:
    """Least-squares a + p cos(phi) + q sin(phi) at phases 0, pi/4, pi/2, 3pi/4."""
    phases = 2 * np.pi * np.array([0.0, 1 / 8, 1 / 4, 3 / 8])
    design = np.column_stack([np.ones(4), np.cos(phases), np.sin(phases)])
    (offset, p, q), *_ = np.linalg.lstsq(design, values, rcond=None)
    return float(offset), float(np.hypot(p, q))


def engine_metadata(spec: ExperimentSpec) -> dict:
    from .config import spec_to_dict

    return {"preset": spec.preset, "engine_version": __version__, "spec": spec_to_dict(spec)}


def scan(spec: ExperimentSpec, pipeline: Pipeline | None = None) -> Interferogram:
    """Evaluate the pipeline over the scan's path delays (um, arm 2)."""
    pipeline = pipeline or build_pipeline(spec)
    delays = spec.scan.delays_um()
    period = pipeline.fringe_period_um
    to_fs = 1.0 / C_UM_PER_FS
    if spec.scan.mode == "fringe":
        if period is not None and spec.scan.step_um > period / 8 * (1 + 1e-9):
            raise UndersamplingError(
                f"scan step {spec.scan.step_um} um exceeds 1/8 of the {period:.4g} um fringe period"
            )
        signal = np.array([pipeline.evaluate(x * to_fs) for x in delays])
        return Interferogram(delays, signal, metadata=engine_metadata(spec))
    if period is None:
        raise ConfigurationError(f"scan.mode: envelope mode needs a fringe component; preset {spec.preset!r} has none")
    offsets = period * np.array([0.0, 1 / 8, 1 / 4, 3 / 8])
    mean, low, high = [], [], []
    for x in delays:
        vals = np.array([pipeline.evaluate((x + o) * to_fs) for o in offsets])
        a0, amp = _quadrature_fit(vals)
        mean.append(a0)
        low.append(a0 - amp)
        high.append(a0 + amp)
    return Interferogram(delays, np.array(mean), np.array(low), np.array(high), metadata=engine_metadata(spec))


# -- presets ----------------------------------------------------------------

def beat_masks(
    delta_rad_per_ps: float,
    grid: FrequencyGrid | None = None,
    chirped: PulseSpec | None = None,
    antichirped: PulseSpec | None = None,
    transition_nm: float = BEAT_EDGE_TRANSITION_NM,
) -> tuple[tuple[EdgeMask], tuple[EdgeMask]]:
    """Symmetric razor-blade cuts whose filtered spectral peaks differ by ``delta_rad_per_ps``.

    The chirped beam keeps the red side and the anti-chirped beam the blue
    side of cutoffs placed symmetrically about the carrier.
    """
    grid = grid or GridSpec().build()
    chirped = chirped or PulseSpec(gdd_fs2=DEFAULT_GDD_FS2)
    antichirped = antichirped or PulseSpec(gdd_fs2=-DEFAULT_GDD_FS2)
    c0 = synthesize_pulse(grid, chirped)
    a0 = synthesize_pulse(grid, antichirped)
    w0 = grid.carrier

    def masks(x):
        mc = EdgeMask(float(omega_to_wavelength(w0 - x)), "red-side", transition_nm)
        ma = EdgeMask(float(omega_to_wavelength(w0 + x)), "blue-side", transition_nm)
        return mc, ma

    def mismatch(x):
        mc, ma = masks(x)
        return peak_difference_rad_per_ps(apply_mask(c0, mc), apply_mask(a0, ma)) - delta_rad_per_ps

    x = brentq(mismatch, -0.02, 0.06, xtol=1e-9)
    mc, ma = masks(x)
    mc = dataclasses.replace(mc, cutoff_nm=round(mc.cutoff_nm, 4))
    ma = dataclasses.replace(ma, cutoff_nm=round(ma.cutoff_nm, 4))
    return (mc,), (ma,)


def preset_spec(name: str, beat_delta_rad_per_ps: float = 17.0) -> ExperimentSpec:
    """Complete default experiment for a preset (ideal, matched beams)."""
    if name not in PRESETS:
        raise ConfigurationError(f"preset: unknown preset {name!r}")
    chirped = PulseSpec(DEFAULT_CENTER_NM, DEFAULT_BANDWIDTH_NM, DEFAULT_GDD_FS2, 1.0)
    antichirped = PulseSpec(DEFAULT_CENTER_NM, DEFAULT_BANDWIDTH_NM, -DEFAULT_GDD_FS2, 1.0)
    sfg_center = DEFAULT_CENTER_NM / 2
    kwargs = dict(masks_chirped=(), masks_antichirped=())
    if name in ("dip", "peak"):
        detector = DetectorSpec("sfg-narrowband", sfg_center, 0.4, "gaussian")
        scan_ = ScanSpec(-150.0, 150.0, 1.5, "fringe")
    elif name == "peak_block":
        detector = DetectorSpec("sfg-narrowband", sfg_center, 0.4, "gaussian")
        scan_ = ScanSpec(-200.0, 200.0, 2.0, "fringe")
        kwargs["masks_chirped"] = (BlockMask(DEFAULT_CENTER_NM, 2.0),)
    elif name == "beat":
        detector = DetectorSpec("sfg-narrowband", sfg_center, 0.3, "gaussian")
        scan_ = ScanSpec(-1000.0, 1000.0, 3.0, "fringe")
        mc, ma = beat_masks(beat_delta_rad_per_ps, GridSpec().build(), chirped, antichirped)
        kwargs["masks_chirped"], kwargs["masks_antichirped"] = mc, ma
    elif name == "psr":
        detector = DetectorSpec("sfg-narrowband", sfg_center, 0.09, "gaussian")
        scan_ = ScanSpec(-30000.0, 30000.0, 500.0, "envelope")
    else:
        # reference fringes come from the chirped beam alone; the other port is dark
        antichirped = dataclasses.replace(antichirped, amplitude=0.0)
        detector = DetectorSpec("fundamental-power", DEFAULT_CENTER_NM, DEFAULT_BANDWIDTH_NM, "rect")
        scan_ = ScanSpec(-100.0, 100.0, 2.0, "envelope")
    return ExperimentSpec(name, chirped, antichirped, detector, scan_, **kwargs)
