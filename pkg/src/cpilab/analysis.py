"""Interferogram metrics: visibility, fringe period, envelope width, curve distance."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import hilbert

from .errors import MetricError, NoFringeError, UndefinedStatsError
from .spectra import fwhm_linear


@dataclass(frozen=True)
class Metric:
    name: str
    value: float
    uncertainty: float
    window: tuple[float, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


@dataclass(frozen=True)
class CurveDistance:
    l_inf: float
    l2: float
    n_points: int

    def to_dict(self) -> dict:
        return asdict(self)


def _xy(curve):
    """Accept an Interferogram-like object or an (x, y) pair."""
    if hasattr(curve, "delays_um"):
        return np.asarray(curve.delays_um, float), np.asarray(curve.signal, float)
    x, y = curve
    return np.asarray(x, float), np.asarray(y, float)


def _windowed(x, y, window):
    if window is None:
        return x, y, (float(x[0]), float(x[-1])) if len(x) else (np.nan, np.nan)
    a, b = window
    sel = (x >= a) & (x <= b)
    if not sel.any():
        raise MetricError(f"window [{a}, {b}] contains no samples")
    return x[sel], y[sel], (float(a), float(b))


def _vertex(y, k):
    """Quadratic 3-point vertex (offset in samples, value) around index k."""
    if k == 0 or k == len(y) - 1:
        return 0.0, float(y[k])
    den = y[k - 1] - 2 * y[k] + y[k + 1]
    if den == 0:
        return 0.0, float(y[k])
    d = 0.5 * (y[k - 1] - y[k + 1]) / den
    return d, float(y[k] - 0.25 * (y[k - 1] - y[k + 1]) * d)


def visibility(curve, window=None) -> Metric:
    x, y, win = _windowed(*_xy(curve), window)
    if len(y) == 0:
        raise MetricError("empty window")
    kmax, kmin = int(np.argmax(y)), int(np.argmin(y))
    ymax = _vertex(y, kmax)[1]
    ymin = -_vertex(-y, kmin)[1]
    if ymax + ymin <= 0:
        raise MetricError("visibility undefined for a non-positive curve")
    v = (ymax - ymin) / (ymax + ymin)
    raw = (y[kmax] - y[kmin]) / (y[kmax] + y[kmin])
    return Metric("visibility", float(v), float(abs(v - raw)), win)


def _dominant_frequency(x, y, pad=16):
    """Dominant non-DC spatial frequency (cycles per x unit) and its spectral contrast."""
    if len(x) < 8:
        raise NoFringeError("too few samples for a fringe spectrum")
    step = float(np.mean(np.diff(x)))
    resid = y - np.polyval(np.polyfit(x, y, 1), x)
    resid = resid * np.hanning(len(resid))
    n = len(resid) * pad
    mag = np.abs(np.fft.rfft(resid, n))
    k0 = 2 * pad  # skip the DC main lobe of the Hann window
    if len(mag) <= k0 + 2:
        raise NoFringeError("curve too short")
    search = mag[k0:]
    k = int(np.argmax(search)) + k0
    median = float(np.median(mag[pad::pad])) if len(mag[pad::pad]) else 0.0
    if mag[k] == 0 or mag[k] < 3 * median:
        raise NoFringeError("no fringe peak stands out of the spectrum")
    d, _ = _vertex(mag, k)
    return (k + d) / (n * step), k / (n * step)


def fringe_period(curve, window=None) -> Metric:
    """Period of the dominant fringe component, in the curve's delay units."""
    x, y, win = _windowed(*_xy(curve), window)
    f, f_bin = _dominant_frequency(x, y)
    if f <= 0:
        raise NoFringeError("dominant component is at zero frequency")
    span = x[-1] - x[0]
    if span * f < 4 * (1 - 1e-6):
        raise NoFringeError(f"only {span * f:.1f} fringes in the window; need at least 4")
    period = 1.0 / f
    return Metric("fringe_period", float(period), float(abs(period - 1.0 / f_bin)), win)


def envelope(curve) -> tuple[np.ndarray, np.ndarray]:
    """Fringe envelope (upper minus lower) versus delay.

    Envelope-mode interferograms carry it directly; fringe-resolved curves
    are demodulated with an analytic signal after removing a running mean
    over one fringe period.
    """
    if getattr(curve, "envelope_low", None) is not None:
        return np.asarray(curve.delays_um), np.asarray(curve.envelope_high) - np.asarray(curve.envelope_low)
    x, y = _xy(curve)
    period = fringe_period((x, y)).value
    step = float(np.mean(np.diff(x)))
    size = max(1, int(round(period / step)))
    base = uniform_filter1d(y, size, mode="nearest")
    return x, 2.0 * np.abs(hilbert(y - base))


def envelope_fwhm(curve, window=None) -> Metric:
    x, env = envelope(curve)
    x, env, win = _windowed(x, env, window)
    try:
        width = fwhm_linear(x, env)
    except UndefinedStatsError as exc:
        raise MetricError(str(exc)) from exc
    step = float(np.mean(np.diff(x)))
    return Metric("envelope_fwhm", width, step / 2, win)


def normalize(y: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(y)), float(np.max(y))
    if hi - lo <= 1e-300 or hi - lo <= 1e-12 * max(abs(hi), abs(lo)):
        raise MetricError("constant curve: affine normalization undefined")
    return (y - lo) / (hi - lo)


def curve_distance(a, b) -> CurveDistance:
    """L-inf and RMS distance of two curves after affine normalization to [0, 1].

    ``b`` is linearly resampled onto ``a``'s delays within the common domain.
    """
    xa, ya = _xy(a)
    xb, yb = _xy(b)
    lo, hi = max(xa[0], xb[0]), min(xa[-1], xb[-1])
    if hi < lo:
        raise MetricError("curves have disjoint delay domains")
    sel = (xa >= lo - 1e-9) & (xa <= hi + 1e-9)
    if not sel.any():
        raise MetricError("no samples in the common delay domain")
    na = normalize(ya)[sel]
    nb = np.interp(xa[sel], xb, normalize(yb))
    diff = na - nb
    return CurveDistance(float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff**2))), int(sel.sum()))
