import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st
from numpy.polynomial import polynomial as npoly

from excitonmem import fano
from excitonmem.errors import (
    PoleError,
    SingularConfigurationError,
    ValidationError,
)
from excitonmem.fano import BareResonancePair, Resonance

widths = st.floats(0.01, 2.0)
energies = st.floats(-3.0, 3.0)
qs = st.floats(-10.0, 10.0)


@st.composite
def resonance_sets(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    es = sorted(draw(st.lists(energies, min_size=n, max_size=n, unique=True)))
    if n > 1 and np.min(np.diff(es)) < 0.05:
        es = [es[0] + 0.3 * i for i in range(n)]
    return [Resonance(e, draw(widths), draw(qs)) for e in es]


# --- dressed levels -----------------------------------------------------------

def _sympy_levels(e1, e2, g1, g2, d1, d2, d12):
    """Exact-arithmetic oracle: roots of the secular quadratic, then the width map."""
    E = sp.symbols("E")
    a, b = e1 + d1, e2 + d2
    roots = sorted(sp.solve(sp.Eq((E - a) * (E - b), d12**2 / 4), E), key=lambda r: float(r))
    den1 = roots[0] - e2 - d2
    den2 = roots[1] - e1 - d1
    w1 = g1 * (1 + d12 / den1 * sp.sqrt(g2 / g1)) ** 2 * den1**2 / (den1**2 + d12**2)
    w2 = g2 * (1 + d12 / den2 * sp.sqrt(g1 / g2)) ** 2 * den2**2 / (den2**2 + d12**2)
    return [float(r) for r in roots], [float(sp.nsimplify(w1).evalf(30)), float(w2.evalf(30))]


def test_effective_levels_match_exact_oracle():
    R = sp.Rational
    e_ref, g_ref = _sympy_levels(R(0), R(1), R(1, 5), R(1, 5), R(1, 20), R(1, 20), R(1, 10))
    pair = BareResonancePair(0.0, 1.0, 0.2, 0.2, 0.05, 0.05, 0.1)
    e, g = fano.effective_levels(pair)
    np.testing.assert_allclose(e, e_ref, rtol=1e-14)
    np.testing.assert_allclose(g, g_ref, rtol=1e-13)


def test_effective_levels_without_mixing_are_bare():
    e, g = fano.effective_levels(BareResonancePair(0.3, 1.2, 0.1, 0.4, 0.02, -0.01))
    np.testing.assert_allclose(e, [0.32, 1.19], rtol=1e-15)
    np.testing.assert_allclose(g, [0.1, 0.4], rtol=1e-15)


def test_effective_levels_degenerate_raises():
    with pytest.raises(SingularConfigurationError):
        fano.effective_levels(BareResonancePair(1.0, 1.0, 0.1, 0.1))


@given(st.floats(0.05, 2), st.floats(0, 1), st.floats(0, 1), st.floats(-1, 1))
def test_effective_levels_trace_preserved(gap, g1, g2, d12):
    e, g = fano.effective_levels(BareResonancePair(0.0, gap, g1, g2, 0.0, 0.0, d12))
    assert e[0] <= e[1]
    assert e.sum() == pytest.approx(gap, abs=1e-12)
    assert np.all(g >= 0)


# --- resonances and poles -----------------------------------------------------

@pytest.mark.parametrize("gamma", [0.0, -1.0, np.nan])
def test_resonance_rejects_bad_width(gamma):
    with pytest.raises(ValidationError):
        Resonance(0.0, gamma, 1.0)


def test_single_pole_exact():
    ps = fano.poles([Resonance(0.4, 0.3, 2.0)])
    assert ps.poles[0] == pytest.approx(0.4 + 0.15j, abs=1e-15)


def test_three_pole_against_sympy():
    res = [Resonance(0.0, 0.2, 1.0), Resonance(1.0, 0.3, 2.0), Resonance(2.5, 0.1, -1.0)]
    lam = sp.symbols("lam")
    poly = sp.Integer(1)
    for r in res:
        poly *= lam - sp.nsimplify(r.e_tilde)
    b1 = 0
    for v, r in enumerate(res):
        term = sp.nsimplify(r.gamma_tilde)
        for k, o in enumerate(res):
            if k != v:
                term *= lam - sp.nsimplify(o.e_tilde)
        b1 += term
    ref = sorted((complex(s) for s in sp.Poly(sp.expand(poly - sp.I / 2 * b1), lam).nroots(n=30)),
                 key=lambda s: s.real)
    np.testing.assert_allclose(fano.poles(res).poles, ref, rtol=0, atol=1e-13)


@given(resonance_sets())
def test_poles_upper_half_plane_and_vieta(res):
    ps = fano.poles(res)
    assert len(ps) == len(res)
    assert np.all(ps.poles.imag > 0)
    e = sum(r.e_tilde for r in res)
    g = sum(r.gamma_tilde for r in res)
    assert ps.poles.sum() == pytest.approx(e + 0.5j * g, abs=1e-9 * max(1, abs(e) + g))


@given(resonance_sets(), st.floats(-5, 5))
def test_profile_denominator_identity(res, lam):
    # |P(lam)|^2 = A^2 + B1^2/4 on the real axis
    a, b1, _ = fano.structure_polynomials(res)
    prod = np.prod(np.abs(lam - fano.poles(res).poles) ** 2)
    ref = npoly.polyval(lam, a) ** 2 + 0.25 * npoly.polyval(lam, b1) ** 2
    assert prod == pytest.approx(ref, rel=1e-8, abs=1e-14)


def test_near_singular_flag():
    assert fano.poles([Resonance(0, 1e-8, 1.0), Resonance(1, 0.1, 1.0)]).near_singular
    assert not fano.poles([Resonance(0, 0.1, 1.0), Resonance(1, 0.1, 1.0)]).near_singular


# --- phase shift and profiles -------------------------------------------------

def test_phase_shift_on_resonance_raises():
    with pytest.raises(PoleError):
        fano.phase_shift(1.0, [Resonance(1.0, 0.2, 0.0)])


@given(resonance_sets(), st.floats(-5, 5))
def test_phase_shift_sum_rule(res, lam):
    if min(abs(lam - r.e_tilde) for r in res) < 1e-6:
        return
    ps = fano.phase_shift(lam, res)
    assert np.tan(ps.delta) == pytest.approx(np.sum(np.tan(ps.deltas)), rel=1e-9, abs=1e-12)
    assert np.tan(ps.delta) == pytest.approx(-np.pi / ps.z, rel=1e-9, abs=1e-12)


@given(st.floats(-2, 2), st.floats(0.05, 2), st.floats(-10, 10), st.floats(-20, 20))
def test_single_resonance_is_beutler_fano(e0, gamma, q, lam):
    eps = 2 * (lam - e0) / gamma
    got = fano.fano_profile(lam, [Resonance(e0, gamma, q)])
    assert got == pytest.approx((eps + q) ** 2 / (eps**2 + 1), rel=1e-10, abs=1e-12)


@given(resonance_sets(), st.floats(-5, 5))
def test_profile_nonnegative_and_tends_to_one(res, lam):
    assert fano.fano_profile(lam, res) >= 0
    assert fano.fano_profile(1e7, res) == pytest.approx(1.0, rel=1e-4)


def test_single_window():
    (w,) = fano.fano_windows([Resonance(0.5, 0.2, 3.0)])
    assert w == pytest.approx(0.5 - 3.0 * 0.1, abs=1e-14)


@given(resonance_sets(max_n=3))
def test_windows_are_profile_zeros(res):
    ws = fano.fano_windows(res)
    assert len(ws) <= len(res)
    for w in ws:
        assert fano.fano_profile(w, res) < 1e-12


def test_control_profile_uses_mismatched_asymmetry():
    r = Resonance(0.0, 0.2, 4.0, zeta=0.25)
    (w,) = fano.fano_windows([r], "control")
    assert w == pytest.approx(-5.0 * 0.1, abs=1e-14)
