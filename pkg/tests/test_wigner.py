import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from twophoton import gf, wigner
from twophoton.distribution import PhotonDistribution
from twophoton.errors import DomainError
from twophoton.specfun import bessel_i0_scaled, bessel_j0

XS = np.linspace(0, 8, 161)
betas = st.floats(0, 1)
radii = st.floats(0.05, 12)


def test_fock_origin():
    assert wigner.wigner_fock_radial(0, 0.0) == 2
    assert wigner.wigner_fock_radial(1, 0.0) == -2


@pytest.mark.parametrize("n", range(11))
def test_fock_normalization(n):
    assert wigner.radial_norm(lambda x: wigner.wigner_fock_radial(n, x)) == \
        pytest.approx(1.0, abs=1e-6)


def test_vacuum_mixture_and_decay():
    vac = PhotonDistribution.fock(0, 5)
    assert np.allclose(wigner.wigner_mixture_radial(vac, XS), 2 * np.exp(-XS**2), atol=1e-15)
    thermal = gf.negbin_limit(0.5).distribution
    assert abs(wigner.wigner_mixture_radial(thermal, 30.0)) < 1e-12


def test_mixture_normalization():
    d = gf.negbin_limit(0.4, 1.0).distribution
    assert wigner.radial_norm(lambda x: wigner.wigner_mixture_radial(d, x)) == \
        pytest.approx(1.0, abs=1e-6)


@settings(max_examples=40)
@given(betas, radii)
def test_origin_law(beta, r):
    w0 = wigner.wigner_paeos_radial(gf.PaeosParams(beta, r), 0.0)
    assert w0 == pytest.approx(2 * (1 - 2 * beta), abs=1e-12)


@settings(max_examples=40)
@given(betas, radii)
def test_beta_linearity(beta, r):
    w = lambda b: wigner.wigner_paeos_radial(gf.PaeosParams(b, r), XS)
    w0, w1, wh, wb = w(0.0), w(1.0), w(0.5), w(beta)
    assert np.max(np.abs(wb + w(1 - beta) - 2 * wh)) < 1e-12
    assert np.max(np.abs(wb - ((1 - beta) * w0 + beta * w1))) < 1e-12


@settings(max_examples=15)
@given(betas, st.floats(0.2, 10))
def test_closed_form_matches_laguerre_sum(beta, r):
    p = gf.PaeosParams(beta, r)
    lag = wigner.wigner_mixture_radial(gf.paeos_probabilities(p), XS)
    assert np.max(np.abs(wigner.wigner_paeos_radial(p, XS) - lag)) < 1e-6


def test_closed_form_against_unscaled_formula():
    # direct evaluation where nothing overflows
    r, beta = 1.5, 0.3
    x = np.linspace(0, 5, 21)
    y = math.sqrt(8 * r) * x
    d = 1 - 2 * beta
    i0 = bessel_i0_scaled(y) * np.exp(y)
    direct = np.exp(-x**2) / math.sinh(2 * r) * (
        (1 - d * math.exp(-2 * r)) * i0 + (d * math.exp(2 * r) - 1) * bessel_j0(y))
    assert np.allclose(wigner.wigner_paeos_radial(gf.PaeosParams(beta, r), x), direct,
                       rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("r", [1.0, 5.0, 10.0])
@pytest.mark.parametrize("sign,beta", [(1, 0.0), (-1, 1.0)])
def test_phase_average_matches_closed_form(r, sign, beta):
    p = gf.PaeosParams(beta, r)
    for x in (0.0, 0.5, 1.0, 2.3, 4.47, 7.0):
        # the radial function does not depend on the direction of (q, p)
        avg = wigner.phase_average(r, sign, x * math.cos(0.7), x * math.sin(0.7))
        assert avg == pytest.approx(wigner.wigner_paeos_radial(p, x), abs=1e-6)


def test_phase_average_origin():
    assert wigner.phase_average(1.0, 1, 0.0, 0.0) == pytest.approx(2.0, abs=1e-14)


class TestPureStates:
    def test_even_at_zero_amplitude_is_vacuum(self):
        p = wigner.PureEocsParams(0.0, 0.0, 1)
        assert p.norm_sq == 0.25
        q, pp = np.meshgrid(np.linspace(-2, 2, 9), np.linspace(-2, 2, 9))
        assert np.allclose(wigner.wigner_pure_eocs(p, q, pp), 2 * np.exp(-q**2 - pp**2),
                           atol=1e-15)

    @given(st.floats(-4, 4), st.floats(-4, 4), st.sampled_from([1, -1]))
    def test_origin_values(self, qb, pb, sign):
        assume(qb * qb + pb * pb > 0)     # alpha must not underflow to zero
        w = wigner.wigner_pure_eocs(wigner.PureEocsParams(qb, pb, sign), 0.0, 0.0)
        assert w == pytest.approx(2.0 * sign, abs=1e-12)

    def test_odd_undefined_at_zero(self):
        with pytest.raises(DomainError):
            wigner.PureEocsParams(0.0, 0.0, -1)


class TestFigures:
    def test_even_state_is_negative_near_origin(self):
        w = wigner.wigner_paeos_radial(gf.PaeosParams(0.0, 10.0), XS)
        assert w[0] == pytest.approx(2.0, abs=1e-12)
        assert w[XS < math.sqrt(5)].min() < 0

    def test_odd_state(self):
        w = wigner.wigner_paeos_radial(gf.PaeosParams(1.0, 10.0), XS)
        assert w[0] == pytest.approx(-2.0, abs=1e-12)
        assert w[XS < math.sqrt(5)].min() < 0

    def test_mixed_state_positive_with_ring(self):
        xs = np.linspace(0, 8, 801)
        w = wigner.wigner_paeos_radial(gf.PaeosParams(0.5, 10.0), xs)
        assert w.min() >= -1e-9
        assert xs[np.argmax(w)] == pytest.approx(math.sqrt(20), abs=0.5)

    def test_mirror_region_soft_check(self):
        # W(x;0) + W(x;1) = 2 W(x;1/2) = 2 e^{-x^2} (I0 - J0)(sqrt(8r) x) / sinh 2r, so the
        # mirror defect is bounded by the I0 envelope 10 e^{-2r} e^{sqrt(8r) x - x^2} max|W|
        r = 10.0
        xs = np.linspace(0, math.sqrt(r / 2), 200, endpoint=False)
        w0 = wigner.wigner_paeos_radial(gf.PaeosParams(0.0, r), xs)
        w1 = wigner.wigner_paeos_radial(gf.PaeosParams(1.0, r), xs)
        scale = max(np.abs(w0).max(), np.abs(w1).max())
        envelope = 10 * np.exp(-2 * r + math.sqrt(8 * r) * xs - xs**2) * scale
        assert np.all(np.abs(w0 + w1) <= envelope)
        assert np.max(np.abs(w0 + w1)) < 1e-2 * scale

    def test_near_zero_band_informational(self):
        r = 10.0
        mid = 0.5 * (math.sqrt(r / 2) + math.sqrt(2 * r))
        w = wigner.wigner_paeos_radial(gf.PaeosParams(0.0, r), mid)
        assert abs(w) < 0.05

    def test_large_r_no_overflow(self):
        w = wigner.wigner_paeos_radial(gf.PaeosParams(0.3, 100.0), np.linspace(0, 20, 101))
        assert np.all(np.isfinite(w))


class TestPurity:
    def test_reference_values(self, ref):
        for r, v in ref["purity"].items():
            r = float(r)
            assert wigner.purity_paeos(gf.PaeosParams(0.0, r)) == pytest.approx(v["even"], rel=1e-12)
            assert wigner.purity_paeos(gf.PaeosParams(1.0, r)) == pytest.approx(v["odd"], rel=1e-12)

    @settings(max_examples=40)
    @given(betas, st.floats(0.01, 40))
    def test_matches_probabilities(self, beta, r):
        p = gf.PaeosParams(beta, r)
        mu = wigner.purity_paeos(p)
        assert mu == pytest.approx(gf.paeos_probabilities(p, eps=1e-15).purity(), abs=1e-10)
        assert 0 < mu < 1

    def test_small_r_limit(self):
        assert wigner.purity_paeos(gf.PaeosParams(0.0, 1e-4)) == pytest.approx(1.0, abs=1e-7)
        assert wigner.purity_paeos(gf.PaeosParams(0.3, 0.0)) == pytest.approx(0.49 + 0.09)

    def test_large_r_asymptote(self):
        mu = wigner.purity_paeos(gf.PaeosParams(0.0, 10.0))
        assert abs(mu / (1 / math.sqrt(math.pi * 10)) - 1) < 0.15

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
    def test_decreasing_in_r(self, beta):
        mus = [wigner.purity_paeos(gf.PaeosParams(beta, r)) for r in np.linspace(0.05, 30, 120)]
        assert np.all(np.diff(mus) < 0)

    def test_purity_from_probs(self):
        assert wigner.purity_from_probs(PhotonDistribution.fock(0, 3)) == 1
        assert wigner.purity_from_probs(PhotonDistribution.from_values([0.5, 0.5])) == 0.5


def test_radial_curve_and_validation():
    curve = wigner.radial_curve(gf.PaeosParams(0.5, 2.0), xmax=3, points=31)
    assert curve.xs[0] == 0 and curve.xs[-1] == 3 and len(curve.ws) == 31
    with pytest.raises(DomainError):
        wigner.radial_curve(gf.PaeosParams(0.5, 2.0), points=1)
    with pytest.raises(DomainError):
        wigner.wigner_paeos_radial(gf.PaeosParams(0.5, 0.0), 1.0)


@pytest.mark.parametrize("beta,r", [(0.0, 1.0), (0.5, 5.0), (1.0, 10.0), (0.3, 3.0)])
def test_paeos_normalization(beta, r):
    p = gf.PaeosParams(beta, r)
    assert wigner.radial_norm(lambda x: wigner.wigner_paeos_radial(p, x)) == \
        pytest.approx(1.0, abs=1e-6)
