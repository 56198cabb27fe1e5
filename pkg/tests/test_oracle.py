import numpy as np
import pytest

from cpilab.errors import ConfigurationError, ResolutionError
from cpilab.oracle import GaussianFilter, build_jsa, marginal_peaks, coincidence_scan, interference_term, noon_scan
from cpilab.spectra import C_UM_PER_FS
from oracles import gaussian_beat_visibility

SIGMA = 1 / (2 * np.sqrt(2 * np.log(2)))
MARGINAL = 0.0302  # 10 nm at 790 nm, rad/fs


def test_narrow_pump_anticorrelated():
    jsa = build_jsa(None, MARGINAL)
    w1, w2 = np.meshgrid(jsa.detuning, jsa.detuning, indexing="ij")
    weight = np.abs(jsa.amplitude) ** 2
    spread_sum = np.sqrt(np.sum(weight * (w1 + w2) ** 2) / np.sum(weight))
    spread_diff = np.sqrt(np.sum(weight * (w1 - w2) ** 2) / np.sum(weight))
    assert spread_sum < 0.05 * spread_diff


def test_unfiltered_jsa_exchange_symmetric():
    jsa = build_jsa(MARGINAL / 5, MARGINAL)
    assert np.array_equal(jsa.amplitude, jsa.amplitude.T)
    assert np.sum(np.abs(jsa.amplitude) ** 2) * jsa.delta_omega**2 == pytest.approx(1.0, rel=1e-12)


def test_offset_filters_break_symmetry():
    jsa = build_jsa(None, MARGINAL, GaussianFilter(-0.008, 0.01), GaussianFilter(0.008, 0.01))
    assert not np.allclose(jsa.amplitude, jsa.amplitude.T)


def test_build_jsa_guards():
    with pytest.raises(ConfigurationError):
        build_jsa(None, MARGINAL, m=32)
    with pytest.raises(ConfigurationError):
        build_jsa(None, -1.0)
    with pytest.raises(ResolutionError):
        build_jsa(None, MARGINAL, span=100 * MARGINAL)


def test_dip_and_peak_at_zero():
    jsa = build_jsa(None, MARGINAL)
    assert coincidence_scan(jsa, 0.0, "opposite")[0] == pytest.approx(0.0, abs=1e-12)
    assert coincidence_scan(jsa, 0.0, "same")[0] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "filters",
    [(None, None), (GaussianFilter(-0.008, 0.01), GaussianFilter(0.008, 0.01))],
    ids=["bare", "filtered"],
)
def test_probabilities_and_complementarity(filters):
    jsa = build_jsa(None, MARGINAL, *filters)
    tau = np.linspace(-0.9, 0.9, 301) * jsa.max_delay_fs
    opp = coincidence_scan(jsa, tau, "opposite")
    same = coincidence_scan(jsa, tau, "same")
    assert np.all((opp >= 0) & (opp <= 1)) and np.all((same >= 0) & (same <= 1))
    assert np.allclose(same - opp, interference_term(jsa, tau).real, rtol=0, atol=1e-15)


def test_visibility_decays():
    jsa = build_jsa(None, MARGINAL)
    coherence = 4 * np.log(2) / MARGINAL
    tau = 10 * coherence
    assert tau < jsa.max_delay_fs
    assert abs(interference_term(jsa, tau)[0]) < 1e-3


def test_delay_guard():
    jsa = build_jsa(None, MARGINAL)
    with pytest.raises(ResolutionError):
        interference_term(jsa, 1.1 * jsa.max_delay_fs)


def test_unknown_port():
    with pytest.raises(ConfigurationError):
        coincidence_scan(build_jsa(None, MARGINAL), 0.0, "diagonal")


def test_beat_period_matches_closed_form():
    delta = 0.017
    f1, f2 = GaussianFilter(-delta / 2, 0.01), GaussianFilter(delta / 2, 0.01)
    jsa = build_jsa(None, MARGINAL, f1, f2)
    tau = np.linspace(-2500, 2500, 501)
    v = interference_term(jsa, tau)
    ref = gaussian_beat_visibility(tau, jsa.pump_fwhm * SIGMA, MARGINAL * SIGMA, -delta / 2, delta / 2, 0.01 * SIGMA)
    assert np.max(np.abs(v - ref)) < 1e-3
    # the beat frequency is the separation of the filtered single-photon spectra
    mu1, mu2 = marginal_peaks(jsa)
    period = 2 * np.pi / abs(mu2 - mu1)
    for curve in (v, ref):
        sel = np.abs(curve) > 0.05
        assert np.sum(sel) > 50
        slope = np.polyfit(tau[sel], np.unwrap(np.angle(curve[sel])), 1)[0]
        assert 2 * np.pi / abs(slope) == pytest.approx(period, rel=0.01)


def test_noon_zero_and_period():
    p = noon_scan(MARGINAL, [0.0])
    assert p[0] == pytest.approx(0.0, abs=1e-12)
    x = np.arange(-5.0, 5.0, 0.02)
    curve = noon_scan(MARGINAL, x / C_UM_PER_FS)
    spec = np.abs(np.fft.rfft((curve - curve.mean()) * np.hanning(len(x)), 16 * len(x)))
    freq = np.fft.rfftfreq(16 * len(x), 0.02)
    assert 1 / freq[np.argmax(spec)] == pytest.approx(0.395, rel=0.01)


def test_noon_envelope_half_of_one_photon():
    tau = np.linspace(-300, 300, 3001)
    p = noon_scan(MARGINAL, tau, m=512)
    w0 = 2 * np.pi * C_UM_PER_FS / 0.790
    env = np.abs(1 - 2 * p) / np.maximum(np.abs(np.cos(2 * w0 * tau)), 1e-300)
    sel = np.abs(np.cos(2 * w0 * tau)) > 0.5
    t, e = tau[sel], env[sel]
    fwhm_two = 2 * np.interp(0.5, e[t >= 0][::-1], t[t >= 0][::-1])
    # one-photon coherence envelope of the same Gaussian power spectrum
    fwhm_one = 4 * np.log(2) / MARGINAL * 2
    assert fwhm_two == pytest.approx(fwhm_one / 2, rel=0.02)
