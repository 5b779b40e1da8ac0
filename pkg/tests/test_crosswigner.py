import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import rel_err, sampled
from xwigner import crosswigner as cw
from xwigner import oracle as orc
from xwigner.errors import ConfigError, DegenerateOverlapError
from xwigner.propagation import (aging_time, free_evolve, free_state, screen_state,
                                 slit_evolve, slit_state)
from xwigner.states import NEUTRON, gaussian_overlap, make_initial_state

SIG = NEUTRON.sigma0
slow = settings(max_examples=12, deadline=None,
                suppress_health_check=[HealthCheck.too_slow])


def _grid(xa, ka):
    return xa[:, None], ka[None, :]


# -- field container -----------------------------------------------------------

def test_field_validation():
    x, k = np.linspace(0, 1, 5), np.linspace(-1, 1, 3)
    f = cw.PhaseSpaceField(x, k, np.ones((5, 3)))
    assert f.dx == pytest.approx(0.25) and f.dk == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        cw.PhaseSpaceField(np.array([0, 1, 3.0]), k, np.ones((3, 3)))
    with pytest.raises(ConfigError):
        cw.PhaseSpaceField(x, k, np.ones((3, 5)))
    with pytest.raises(ConfigError):
        cw.PhaseSpaceField(x, k, np.ones((5, 3)), provenance="guess")
    with pytest.raises(ConfigError):
        cw.PhaseSpaceField(x[::-1], k, np.ones((5, 3)))


def test_normalized_is_max_abs():
    x, k = np.linspace(0, 1, 4), np.linspace(0, 1, 4)
    v = np.arange(16).reshape(4, 4) * (1 - 2j)
    f = cw.PhaseSpaceField(x, k, v).normalized()
    assert f.peak() == pytest.approx(1.0)
    assert f.meta["normalization"] == "max-abs"
    assert f.provenance == "analytic"


def test_quasi_prob():
    x, k = np.linspace(0, 1, 4), np.linspace(0, 1, 4)
    f = cw.PhaseSpaceField(x, k, np.full((4, 4), 2.0 + 0j), "oracle")
    r = cw.quasi_prob(f, 2j)
    np.testing.assert_allclose(r.values, -1j)
    assert r.provenance == "oracle"
    with pytest.raises(DegenerateOverlapError):
        cw.quasi_prob(f, 1e-13)


def test_slit_pair_overlap_is_degenerate():
    # the two slit packets barely overlap, so rho for that pair is undefined
    ov = gaussian_overlap(slit_state(NEUTRON, "plus"), slit_state(NEUTRON, "minus"))
    assert abs(ov) < cw.OVERLAP_FLOOR


# -- free evolution ------------------------------------------------------------

@pytest.mark.parametrize("g", [0.0, -1.0, 1.5])
def test_free_reduces_to_wigner_at_zero(g):
    c = NEUTRON.with_(gamma=g)
    xa, ka = np.linspace(-4, 4, 41) * SIG, np.linspace(-4, 4, 41) / SIG
    v = cw.eval_cw_free(cw.cw_free_params(c, 0.0), *_grid(xa, ka))
    assert np.max(np.abs(v.imag)) < 1e-12 * np.max(np.abs(v))
    x, k = _grid(xa, ka)
    want = np.exp(-x * x / SIG**2 - (k + g * x / SIG**2) ** 2 * SIG**2) / math.pi
    np.testing.assert_allclose(v.real, want, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(1e-4, 0.1))
def test_free_param_invariants(g, t):
    c = NEUTRON.with_(gamma=g)
    p = cw.cw_free_params(c, t)
    assert p.a1 > 0 and p.a3 > 0 and p.A > 0
    assert p.delta_mu == p.xi - p.mu
    assert p.mu == free_evolve(c, t).mu


def test_gouy_free_zero_at_origin():
    for g in (0.0, -1.0, 2.0):
        assert cw.gouy_delta_free(NEUTRON.with_(gamma=g), 0.0) == 0.0


def test_gouy_free_frozen():
    # xi - mu from the printed arctangents in 40-digit arithmetic
    assert cw.gouy_delta_free(NEUTRON, 0.05) == pytest.approx(0.76613867938651183, rel=1e-13)


@slow
@given(st.floats(-2, 2), st.floats(0.3, 30))
def test_free_closed_form_matches_oracle(g, mult):
    c = NEUTRON.with_(gamma=g)
    t = mult * aging_time(c)
    b = free_evolve(c, t).b
    xa, ka = cw.default_axes(c.with_(t=t), "free", 25, 25)
    phi = sampled(free_state(c, t), xa, 12 * max(b, SIG), 0.25e-6)
    psi = orc.SampledWavefunction(phi.x_axis, make_initial_state(c)(phi.x_axis))
    num = orc.cw_quadrature(phi, psi, xa, ka)
    ref = cw.eval_cw_free(cw.cw_free_params(c, t), *_grid(xa, ka))
    assert rel_err(ref, num) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(1e-3, 0.1))
def test_gouy_is_pure_phase_free(g, t):
    c = NEUTRON.with_(gamma=g)
    p = cw.cw_free_params(c, t)
    xa, ka = cw.default_axes(c.with_(t=t), "free", 31, 31)
    on = cw.eval_cw_free(p, *_grid(xa, ka), gouy=True)
    off = cw.eval_cw_free(p, *_grid(xa, ka), gouy=False)
    np.testing.assert_allclose(np.abs(on), np.abs(off), rtol=1e-12, atol=0)
    peak = np.max(np.abs(off))
    np.testing.assert_allclose(on, off * np.exp(1j * p.delta_mu), rtol=0, atol=1e-13 * peak)


def test_free_conjugate_symmetry_of_rho():
    c = NEUTRON.with_(gamma=-1.0)
    xa, ka = cw.default_axes(c, "free", 41, 41)
    phi = sampled(free_state(c, c.t), xa, 12 * free_evolve(c, c.t).b, 0.5e-6)
    psi = orc.SampledWavefunction(phi.x_axis, make_initial_state(c)(phi.x_axis))
    ov = orc.overlap(phi, psi)
    a = cw.quasi_prob(orc.cw_field(phi, psi, xa, ka), ov)
    b = cw.quasi_prob(orc.cw_field(psi, phi, xa, ka), np.conj(ov))
    np.testing.assert_allclose(a.values, np.conj(b.values), rtol=0, atol=1e-12 * a.peak())


# -- double slit ---------------------------------------------------------------

def test_slits_closed_form_matches_oracle():
    c = NEUTRON
    xa, ka = cw.default_axes(c, "slits", 41, 41)
    big_b = slit_evolve(c).B
    p = sampled(slit_state(c, "plus"), xa, 12 * big_b + c.d)
    m = orc.SampledWavefunction(p.x_axis, slit_state(c, "minus")(p.x_axis))
    num = orc.cw_quadrature(p, m, xa, ka)
    assert rel_err(cw.cw_slits(c, *_grid(xa, ka)), num) < 1e-6


def test_slits_independent_of_gamma_phase_offset():
    # both packets share the same Gouy phase, so it cancels in the pair
    xa, ka = cw.default_axes(NEUTRON, "slits", 21, 21)
    v = cw.cw_slits(NEUTRON, *_grid(xa, ka))
    se = slit_evolve(NEUTRON)
    assert np.max(np.abs(v)) == pytest.approx(1 / math.pi, rel=1e-12)
    assert np.all(np.isfinite(v)) and se.mu_prime != 0


@slow
@given(st.floats(-2, 2), st.floats(0.02, 0.08), st.floats(0.02, 0.08),
       st.floats(0, 150e-6), st.floats(4e-6, 12e-6))
def test_screen_closed_form_matches_oracle(g, t, tau, d, beta):
    c = NEUTRON.with_(gamma=g, t=t, tau=tau, d=d, beta=beta)
    big_b = slit_evolve(c).B
    xa, ka = cw.default_axes(c, "screen", 21, 21)
    psi = sampled(lambda x: screen_state(c, x), xa, 12 * big_b + d)
    phi = orc.SampledWavefunction(psi.x_axis, make_initial_state(c)(psi.x_axis))
    num = orc.cw_quadrature(psi, phi, xa, ka)
    ref = cw.eval_cw_screen(cw.cw_screen_params(c), *_grid(xa, ka))
    assert rel_err(ref, num) < 1e-5


@pytest.mark.parametrize("g", [0.0, -1.0])
def test_gouy_is_pure_phase_screen(g):
    c = NEUTRON.with_(gamma=g)
    p = cw.cw_screen_params(c)
    xa, ka = cw.default_axes(c, "screen")
    on = cw.eval_cw_screen(p, *_grid(xa, ka), gouy=True)
    off = cw.eval_cw_screen(p, *_grid(xa, ka), gouy=False)
    np.testing.assert_allclose(np.abs(on), np.abs(off), rtol=1e-12, atol=0)
    assert p.delta_mu_prime == cw.gouy_delta_slit(c)


def test_gouy_slit_extended_precision():
    # xi' and mu' from the printed arctangents, with the tau0**2 correction in mu'
    mp.mp.dps = 40
    hb, m, s0 = mp.mpf(NEUTRON.hbar), mp.mpf(NEUTRON.mass), mp.mpf(NEUTRON.sigma0)
    be, t, tau = s0, mp.mpf(NEUTRON.t), mp.mpf(NEUTRON.tau)
    t0 = m * s0**2 / hb
    se = slit_evolve(NEUTRON)
    xi = -mp.atan2(m / (2 * hb * mp.mpf(se.R)), 1 / (2 * mp.mpf(se.B) ** 2) + 1 / (2 * s0**2)) / 2
    num = t + tau * (1 + s0**2 / be**2)
    den = t0 * (1 - t * tau * s0**2 / (t0**2 * be**2))
    mu = -mp.atan2(num, den) / 2
    assert cw.gouy_delta_slit(NEUTRON) == pytest.approx(float(xi - mu), abs=1e-13)


def test_screen_field_finite_for_short_flight():
    c = NEUTRON.with_(tau=5e-4)
    xa, ka = cw.default_axes(c, "screen", 31, 31)
    assert np.all(np.isfinite(cw.eval_cw_screen(cw.cw_screen_params(c), *_grid(xa, ka))))


# -- grids ---------------------------------------------------------------------

def test_default_axes():
    xa, ka = cw.default_axes(NEUTRON, "free")
    assert xa.size == ka.size == 201
    assert xa[-1] == pytest.approx(4 * free_evolve(NEUTRON, NEUTRON.t).b)
    assert ka[-1] == pytest.approx(4 / SIG)
    xa, _ = cw.default_axes(NEUTRON, "slits", x_span=1e-3)
    assert xa[-1] == 1e-3
    with pytest.raises(ConfigError):
        cw.default_axes(NEUTRON, "box")


@pytest.mark.parametrize("scenario", ["free", "slits", "screen"])
def test_resolved_axes_bounds(scenario):
    xa, ka = cw.resolved_axes(NEUTRON, scenario)
    assert 201 <= xa.size < 4000 and 201 <= ka.size < 4000
    assert xa[0] == -xa[-1] and ka[0] == -ka[-1]


def test_total_integral_free():
    c = NEUTRON.with_(gamma=-1.0)
    xa, ka = cw.resolved_axes(c, "free")
    f = cw.free_cw_field(c, c.t, xa, ka)
    ov = gaussian_overlap(free_state(c, c.t), make_initial_state(c))
    assert abs(f.total() - ov) < 1e-4 * abs(ov)
