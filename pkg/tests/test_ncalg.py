import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncspheres.errors import (DegreeOverflow, MalformedNumber, NotCentral)
from ncspheres.ncalg import (Algebra, NCPoly, ReductionContext,
                             basis_monomials, basis_size, confluence_check,
                             format_poly, hilbert_dimensions, is_central,
                             mono_key, parse_poly)
from ncspheres.rmatrix import DeformParams, build_R_quaternionic
from ncspheres.scalars import EXACT, GaussRational

from conftest import make_point


def _random_poly(alg, rng, degree=2, terms=3):
    out = alg.zero()
    for _ in range(terms):
        f = alg.scalar(Fraction(rng.randint(-4, 4)))
        for _ in range(rng.randint(0, degree)):
            f = f * alg.generator(rng.randrange(8))
        out = out + f
    return out


def test_basis_size_is_stars_and_bars():
    for n in range(7):
        assert basis_size(n) == math.comb(n + 7, 7)
        assert len(basis_monomials(n)) == basis_size(n)


def test_cross_relation_normal_form(pyth):
    """x2^a x1^l rewrites to the conjugated-tensor combination."""
    p, alg, s, ys = pyth
    R = alg.R
    for lam in range(4):
        for alpha in range(4):
            lhs = alg.x2(alpha) * alg.x1(lam)
            rhs = alg.zero()
            for beta in range(4):
                for mu in range(4):
                    c = R.conj_entry(lam, alpha, beta, mu)
                    if not EXACT.is_zero(c):
                        rhs = rhs + alg.x1(mu) * alg.x2(beta) * c
            assert (lhs - rhs).is_zero()


def test_within_family_generators_commute(pyth):
    _, alg, _, _ = pyth
    for i in range(4):
        for j in range(4):
            assert alg.x1(i).commutator(alg.x1(j)).is_zero()
            assert alg.x2(i).commutator(alg.x2(j)).is_zero()


def test_confluence_certificate(pyth, mixed):
    for point in (pyth, mixed):
        _, alg, _, _ = point
        rep = confluence_check(alg, max_len=4, trials=50, seed=1)
        assert rep["passed"]
        dims = hilbert_dimensions(alg, 5)
        assert dims == [math.comb(n + 7, 7) for n in range(1, 6)]


def test_reduction_order_agreement(pyth):
    _, alg, _, _ = pyth
    rng = random.Random(7)
    for _ in range(60):
        w = tuple(rng.randrange(8) for _ in range(rng.randint(2, 5)))
        left = alg.word_normal_form(w, "leftmost")
        right = alg.word_normal_form(w, "rightmost")
        assert (left - right).is_zero()


def test_product_associativity_random(pyth):
    _, alg, _, _ = pyth
    rng = random.Random(3)
    for _ in range(15):
        f = _random_poly(alg, rng)
        g = _random_poly(alg, rng)
        h = _random_poly(alg, rng)
        assert ((f * g) * h - f * (g * h)).is_zero()


def test_star_is_an_antihomomorphism(pyth):
    _, alg, _, _ = pyth
    rng = random.Random(11)
    for _ in range(15):
        f = _random_poly(alg, rng)
        g = _random_poly(alg, rng)
        assert ((f * g).star() - g.star() * f.star()).is_zero()
        assert (f.star().star() - f).is_zero()


def test_generators_are_hermitian(pyth):
    _, alg, _, _ = pyth
    for g in range(8):
        x = alg.generator(g)
        assert (x.star() - x).is_zero()


def test_casimirs_are_central(pyth, mixed, classical):
    for point in (pyth, mixed, classical):
        _, alg, _, _ = point
        assert is_central(alg, alg.casimir())
        assert is_central(alg, alg.family_casimir(1))
        assert is_central(alg, alg.family_casimir(2))


def test_single_generator_not_central(pyth):
    _, alg, _, _ = pyth
    assert not is_central(alg, alg.x1(0))


def test_reduction_context_rejects_noncentral():
    _, alg, _, _ = make_point("3/5,4/5,0")
    with pytest.raises(NotCentral):
        ReductionContext(alg, [(alg.x1(0) * alg.x1(0), 1)])


def test_reduction_kills_ideal_elements(pyth):
    """(x^2 - 1) * m must reduce to zero for arbitrary monomial cofactors."""
    _, alg, s, _ = pyth
    rng = random.Random(5)
    rel = alg.casimir() - alg.one()
    for _ in range(20):
        cof = _random_poly(alg, rng, degree=2, terms=2)
        assert s.context.reduce(rel * cof).is_zero()
        assert s.context.reduce(cof * rel).is_zero()


def test_reduce_is_idempotent_and_linear(pyth):
    _, alg, s, _ = pyth
    rng = random.Random(13)
    for _ in range(10):
        f = _random_poly(alg, rng, degree=3)
        g = _random_poly(alg, rng, degree=3)
        rf = s.context.reduce(f)
        assert (s.context.reduce(rf) - rf).is_zero()
        lhs = s.context.reduce(f + g)
        rhs = s.context.reduce(f) + s.context.reduce(g)
        assert (lhs - rhs).is_zero()


def test_reduce_fast_matches_reduce(pyth):
    _, alg, s, _ = pyth
    rng = random.Random(17)
    for _ in range(10):
        f = _random_poly(alg, rng, degree=3)
        assert (s.context.reduce_fast(f) - s.context.reduce(f)).is_zero()


def test_degree_cap_enforced(pyth):
    p, alg, _, _ = pyth
    ctx = ReductionContext(alg, [(alg.casimir(), 1)], degree_cap=4)
    f = alg.one()
    for _ in range(6):
        f = f * alg.x1(1)
    with pytest.raises(DegreeOverflow):
        ctx.reduce(f)


def test_poly_parse_format_round_trip(pyth):
    _, alg, _, _ = pyth
    f = alg.x1(0) * alg.x2(3) * GaussRational(Fraction(2, 3), Fraction(-1, 5)) \
        + alg.casimir()
    text = format_poly(f)
    g = parse_poly(alg, text)
    assert (f - g).is_zero()


def test_parse_poly_rejects_malformed(pyth):
    _, alg, _, _ = pyth
    with pytest.raises(MalformedNumber):
        parse_poly(alg, "frog * x1_0")


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
def test_mono_key_orders_by_degree_first(i, j):
    m1 = tuple(1 if k == i else 0 for k in range(8))
    m2 = tuple(1 if k == j else 0 for k in range(8)) \
        if i != j else tuple(2 if k == j else 0 for k in range(8))
    if sum(m1) < sum(m2):
        assert mono_key(m1) < mono_key(m2)
