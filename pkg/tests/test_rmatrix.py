from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncspheres.errors import (CommutativityViolated, MalformedNumber,
                              ParamsNotOnSphere)
from ncspheres.quatlin import Mat, j_plus
from ncspheres.rmatrix import (ABCDForm, DeformParams, build_BigR,
                               build_R_general, build_R_quaternionic,
                               check_abcd_form, check_all_conditions,
                               check_yang_baxter, invert_16x16,
                               two_deformation_form)
from ncspheres.scalars import EXACT, GaussRational, float_backend

CONDITION_NAMES = ("reality", "symmetry_chain", "quadratic_1", "quadratic_2",
                   "involutive", "yang_baxter")


def test_params_parse_and_validate():
    p = DeformParams.parse("3/5,4/5,0")
    p.validate()
    assert p.label() == "3/5,4/5,0"
    with pytest.raises(MalformedNumber):
        DeformParams.parse("1,2")
    with pytest.raises(ParamsNotOnSphere):
        DeformParams.parse("1,1,0").validate()


def test_classical_tensor_is_the_identity_exchange():
    """At u = (1,0,0) the exchange is plain transposition."""
    R = build_R_quaternionic(DeformParams.parse("1,0,0"), EXACT)
    for lam in range(4):
        for alpha in range(4):
            for beta in range(4):
                for mu in range(4):
                    want = EXACT.one if (lam == mu and alpha == beta) else EXACT.zero
                    assert R.entry(lam, alpha, beta, mu) == want


def test_all_conditions_at_two_points():
    for label in ("3/5,4/5,0", "1/3,2/3,2/3"):
        R = build_R_quaternionic(DeformParams.parse(label), EXACT)
        reports = check_all_conditions(R)
        assert [r.name for r in reports] == list(CONDITION_NAMES)
        assert all(r.passed for r in reports)
        assert all(r.max_residual == 0.0 for r in reports)


def test_general_builder_agrees_with_direct():
    p = DeformParams.parse("3/5,0,4/5")
    form = two_deformation_form(p.u0, (p.u1, p.u2, Fraction(0)))
    R1 = build_R_general(form)
    R2 = build_R_quaternionic(p, EXACT)
    assert R1 == R2


def test_abcd_form_rejects_noncommuting_family():
    Jp = j_plus(EXACT)
    ident = Mat.identity(4, EXACT.one, EXACT.zero)
    bad = ABCDForm(A=[ident], B=[ident],
                   C=[Jp[0], Jp[1]], D=[Jp[0], Jp[1]], backend=EXACT)
    with pytest.raises(CommutativityViolated):
        check_abcd_form(bad)


def test_off_sphere_v_vector_rejected():
    with pytest.raises(ParamsNotOnSphere):
        two_deformation_form(Fraction(1), (0, 0), v_vec=(1, 1, 0))


def test_perturbed_tensor_fails_yang_baxter():
    """Fault injection: a single entry off by 1/7 must be caught."""
    R = build_R_quaternionic(DeformParams.parse("3/5,4/5,0"), EXACT)
    R.data[1][2][2][1] = R.data[1][2][2][1] + GaussRational(Fraction(1, 7), 0)
    R._items = None
    reports = check_all_conditions(R)
    assert not all(r.passed for r in reports)
    ybe = check_yang_baxter(R)
    assert not ybe.passed
    assert ybe.witness is not None
    assert ybe.max_residual > 0


def test_inverse_contraction_is_identity():
    R = build_R_quaternionic(DeformParams.parse("7/25,24/25,0"), EXACT)
    rinv = invert_16x16(R)
    for lam in range(4):
        for alpha in range(4):
            for lam2 in range(4):
                for alpha2 in range(4):
                    acc = EXACT.zero
                    for beta in range(4):
                        for mu in range(4):
                            acc = acc + R.entry(lam, alpha, beta, mu) \
                                * rinv(beta, mu, lam2, alpha2)
                    want = EXACT.one if (lam, alpha) == (lam2, alpha2) else EXACT.zero
                    assert acc == want


def test_big_r_is_involutive_on_words():
    """Applying the doubled exchange twice returns every pair unchanged."""
    R = build_R_quaternionic(DeformParams.parse("7/25,24/25,0"), EXACT)
    rows = build_BigR(R)
    for a in range(8):
        for b in range(8):
            acc = {}
            for (c, d), coeff in rows[(a, b)]:
                for (e, f), coeff2 in rows[(c, d)]:
                    key = (e, f)
                    acc[key] = acc.get(key, EXACT.zero) + coeff * coeff2
            for key, v in acc.items():
                want = EXACT.one if key == (a, b) else EXACT.zero
                assert v == want, (a, b, key)


@st.composite
def pythagorean_params(draw):
    """Rational points u = ((1-t^2)/(1+t^2), 2t/(1+t^2), 0) on the circle."""
    t = draw(st.fractions(min_value=-3, max_value=3, max_denominator=12))
    d = 1 + t * t
    return DeformParams((1 - t * t) / d, 2 * t / d, Fraction(0))


@settings(max_examples=12, deadline=None)
@given(pythagorean_params())
def test_conditions_on_random_circle_points(p):
    p.validate()
    R = build_R_quaternionic(p, EXACT)
    assert all(r.passed for r in check_all_conditions(R))


def test_float_backend_residuals_small():
    be = float_backend(1e-9)
    R = build_R_quaternionic(DeformParams.parse("3/5,4/5,0"), be)
    for r in check_all_conditions(R):
        assert r.passed
        assert r.max_residual <= 1e-9
