"""Independent reference calculations used by the test-suite.

None of these call into the cpilab engine; they re-derive the physics by a
different route so that agreement is meaningful.
"""
import numpy as np

C = 0.299792458  # um/fs


def omega_of_nm(lam_nm):
    return 2 * np.pi * C * 1e3 / lam_nm


def full_carrier_peak_scan(
    delays_um,
    block_nm=2.0,
    center_nm=790.0,
    bandwidth_nm=10.0,
    gdd=1.79e6,
    det_fwhm_nm=0.4,
    d_omega=0.24 / 8192,
    half_band=0.07,
    preset="peak",
    phases=4,
):
    """Real-valued optical fields with explicit carriers, sampled in time.

    Builds the chirped/anti-chirped spectra on an absolute frequency axis,
    combines them at beamsplitters, forms the real SFG product E1(t) E2(t)
    and integrates |SFG|^2 through a Gaussian filter around twice the
    carrier.  No baseband envelopes and no carrier bookkeeping.  The
    unlocked relative phase of the two input beams is averaged by explicit
    sampling at ``phases`` equally spaced values.
    """
    w0 = omega_of_nm(center_nm)
    nyquist_needed = 2 * (w0 + half_band) * 1.02
    m = 1 << int(np.ceil(np.log2(2 * nyquist_needed / d_omega)))
    k = np.arange(m // 2 + 1)
    w = k * d_omega
    band = np.abs(w - w0) < half_band
    dw_fwhm = 2 * np.pi * C * 1e3 * bandwidth_nm / center_nm**2
    env = np.where(band, np.exp(-2 * np.log(2) * (w - w0) ** 2 / dw_fwhm**2), 0.0)
    chirp = np.where(band, 0.5 * gdd * (w - w0) ** 2, 0.0)
    c = env * np.exp(1j * chirp)
    a = env * np.exp(-1j * chirp)
    if block_nm:
        with np.errstate(divide="ignore"):
            lam = np.where(w > 0, 2 * np.pi * C * 1e3 / np.maximum(w, 1e-30), np.inf)
        c = c * (np.abs(lam - center_nm) >= 0.5 * block_nm)

    def real_field(spec):
        # exp(-i w t) convention: conj spectrum into numpy's exp(+i...) inverse
        return np.fft.irfft(np.conj(spec), m) * m

    w_det = 2 * w0
    det_width = 2 * np.pi * C * 1e3 * det_fwhm_nm / (center_nm / 2) ** 2
    response = np.exp(-4 * np.log(2) * (w - w_det) ** 2 / det_width**2)
    delays = np.atleast_1d(delays_um)
    out = np.zeros(len(delays))
    for phi in 2 * np.pi * np.arange(phases) / phases:
        ap = a * np.exp(1j * phi)
        if preset == "peak":
            p = (c + 1j * ap) / np.sqrt(2)
            arm1, arm2 = p / np.sqrt(2), 1j * p / np.sqrt(2)
        else:
            arm1, arm2 = (c + 1j * ap) / np.sqrt(2), (1j * c + ap) / np.sqrt(2)
        e1 = real_field(arm1)
        for i, x in enumerate(delays):
            e2 = real_field(arm2 * np.exp(1j * w * x / C))
            s = np.fft.rfft(e1 * e2)
            out[i] += np.sum(np.abs(s) ** 2 * response) / phases
    return out


def gaussian_beat_visibility(tau, sigma_p, sigma_m, mu1, mu2, sigma_f):
    """Closed-form V(tau) for a Gaussian JSA with Gaussian detector filters.

    Integrand |f0(a,b)|^2 |F1(a)|^2 |F2(b)|^2 exp(i(a-b)tau), a 2-d Gaussian
    integral exp(-x^T M x / 2 + J^T x) evaluated analytically.
    sigma_* are intensity standard deviations of the amplitude factors
    exp(-(a+b)^2/4sp^2), exp(-(a^2+b^2)/4sm^2), exp(-(w-mu)^2/4sf^2).
    """
    tau = np.atleast_1d(np.asarray(tau, float))
    p, q, r = 1 / sigma_p**2, 1 / sigma_m**2, 1 / sigma_f**2
    mat = np.array([[p + q + r, p], [p, p + q + r]])
    inv = np.linalg.inv(mat)
    lin0 = np.array([mu1 * r, mu2 * r])

    def integral(j):
        # 2-d Gaussian integral up to the common prefactor 2pi/sqrt(det M)
        return np.exp(0.5 * j @ inv @ j)

    exchange = np.array([1.0, -1.0])
    return np.array([integral(lin0 + 1j * t * exchange) for t in tau]) / integral(lin0)


def local_minima(x, y):
    """Interior strict local minima with quadratic refinement: (positions, values)."""
    idx = [i for i in range(1, len(y) - 1) if y[i] < y[i - 1] and y[i] <= y[i + 1]]
    pos, val = [], []
    for i in idx:
        den = y[i - 1] - 2 * y[i] + y[i + 1]
        d = 0.5 * (y[i - 1] - y[i + 1]) / den if den else 0.0
        pos.append(x[i] + d * (x[1] - x[0]))
        val.append(y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d)
    return np.array(pos), np.array(val)
