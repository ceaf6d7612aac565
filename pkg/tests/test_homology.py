"""Chain complex sanity: boundary identities, traces, Chern components."""

import random
from fractions import Fraction

import pytest

from ncspheres.errors import DegreeZero, NotUnitaryEnough
from ncspheres.homology import (B_boundary, ChainContext, TensorChain,
                                b_boundary, chain_from_slots, chern_even,
                                chern_odd, check_vanzz_equivalence,
                                matrix_half_shift, trace_chain)
from ncspheres.quatlin import Mat, embed_M2
from ncspheres.spheres import build_projection, three_sphere_context


@pytest.fixture(scope="module")
def chain_ctx(pyth):
    _, _, s, _ = pyth
    return ChainContext(s)


@pytest.fixture(scope="module")
def chain_ctx3(pyth):
    _, _, s, ys = pyth
    return ChainContext(three_sphere_context(s, ys))


def _random_poly(alg, rng, degree=2, terms=2):
    out = alg.zero()
    for _ in range(terms):
        f = alg.scalar(Fraction(rng.randint(-3, 3)))
        for _ in range(rng.randint(0, degree)):
            f = f * alg.generator(rng.randrange(8))
        out = out + f
    return out


def _random_chain(ctx, rng, degree):
    slots = [_random_poly(ctx.alg, rng) for _ in range(degree + 1)]
    return chain_from_slots(ctx, slots, coeff=Fraction(rng.randint(1, 3)))


def test_boundary_identities_on_random_chains(chain_ctx):
    rng = random.Random(20240601)
    for _ in range(12):
        c = _random_chain(chain_ctx, rng, rng.randint(1, 3))
        assert b_boundary(B_boundary(c)) + B_boundary(b_boundary(c)) == \
            TensorChain(chain_ctx, c.degree, {})
        assert B_boundary(B_boundary(c)).is_zero()
        if c.degree >= 2:
            assert b_boundary(b_boundary(c)).is_zero()


def test_b_squared_drops_to_zero_from_degree_zero_too(chain_ctx):
    rng = random.Random(7)
    c = _random_chain(chain_ctx, rng, 0)
    # bB alone must vanish where Bb is not defined
    assert b_boundary(B_boundary(c)).is_zero()


def test_b_rejects_degree_zero(chain_ctx):
    c = chain_from_slots(chain_ctx, [chain_ctx.alg.one()])
    with pytest.raises(DegreeZero):
        b_boundary(c)


def test_slots_after_first_are_normalized(chain_ctx):
    alg = chain_ctx.alg
    f = alg.x1(0) + alg.one()
    c = chain_from_slots(chain_ctx, [alg.one(), f])
    # the unit component of slot 1 is quotiented away
    assert c == chain_from_slots(chain_ctx, [alg.one(), alg.x1(0)])
    assert c.n_terms() == 1


def test_trace_chain_matches_slotwise_expansion(chain_ctx):
    alg = chain_ctx.alg
    A = Mat([[alg.x1(0), alg.x1(1)], [alg.x2(2), alg.one()]])
    B = Mat([[alg.x2(0), alg.zero()], [alg.x1(3), alg.x2(1) + alg.one()]])
    got = trace_chain(chain_ctx, [A, B])
    want = TensorChain(chain_ctx, 1, {})
    for i in range(2):
        for j in range(2):
            want = want + chain_from_slots(
                chain_ctx, [A.rows[i][j], B.rows[j][i]])
    assert got == want


def test_b_of_trace_contracts_matrix_products(chain_ctx):
    """b<A x B x C> = <AB x C> - <A x BC> + <CA x B>."""
    alg = chain_ctx.alg
    rng = random.Random(99)
    mats = []
    for _ in range(3):
        mats.append(Mat([[_random_poly(alg, rng, degree=1) for _ in range(2)]
                         for _ in range(2)]))
    A, B, C = mats
    lhs = b_boundary(trace_chain(chain_ctx, [A, B, C]))
    rhs = trace_chain(chain_ctx, [A @ B, C]) \
        - trace_chain(chain_ctx, [A, B @ C]) \
        + trace_chain(chain_ctx, [C @ A, B])
    assert lhs == rhs


def test_trace_invariant_under_constant_conjugation(chain_ctx):
    alg = chain_ctx.alg
    one, zero = alg.one(), alg.zero()
    S = Mat([[one, one], [zero, one]])
    Sinv = Mat([[one, -one], [zero, one]])
    rng = random.Random(5)
    A = Mat([[_random_poly(alg, rng, degree=1) for _ in range(2)]
             for _ in range(2)])
    B = Mat([[_random_poly(alg, rng, degree=1) for _ in range(2)]
             for _ in range(2)])
    lhs = trace_chain(chain_ctx, [S @ A @ Sinv, S @ B @ Sinv])
    assert lhs == trace_chain(chain_ctx, [A, B])


def test_low_chern_components_vanish(pyth, chain_ctx, chain_ctx3):
    _, _, s, ys = pyth
    p = build_projection(s)
    ch0 = chern_even(chain_ctx, p, 0)
    ch1 = chern_even(chain_ctx, p, 1)
    assert ch0.is_zero()
    assert ch1.is_zero()
    assert B_boundary(ch0) == b_boundary(ch1)
    U = embed_M2(ys.Y, s.base.backend.i)
    assert chern_odd(chain_ctx3, U, 0).is_zero()


def test_chern_scale_factor_does_not_change_verdict(pyth, chain_ctx):
    _, _, s, _ = pyth
    p = build_projection(s)
    a = chern_even(chain_ctx, p, 1, lam=7)
    b = chern_even(chain_ctx, p, 1, lam=1)
    assert a == b.scale(7)
    assert a.is_zero() == b.is_zero()


def test_half_shift_subtracts_half_on_diagonal(pyth, chain_ctx):
    _, alg, s, _ = pyth
    p = build_projection(s)
    q = matrix_half_shift(chain_ctx, p)
    half = alg.scalar(Fraction(1, 2))
    for a in range(4):
        for b in range(4):
            want = p.rows[a][b] - half if a == b else p.rows[a][b]
            assert (q.rows[a][b] - want).is_zero()


def test_chern_odd_rejects_triangular_matrix(pyth, chain_ctx):
    _, alg, _, _ = pyth
    U = Mat([[alg.x1(0), alg.x2(0)], [alg.zero(), alg.x1(0)]])
    with pytest.raises(NotUnitaryEnough):
        chern_odd(chain_ctx, U, 0)


def test_chern_odd_unit_requirement_is_stricter(pyth, chain_ctx):
    # |x1|^2 is central but not 1 on the big sphere, so the embedded
    # first-family quaternion is unitary only up to a central factor
    _, alg, s, _ = pyth
    U = embed_M2(tuple(alg.x1(m) for m in range(4)), s.base.backend.i)
    chern_odd(chain_ctx, U, 0)
    with pytest.raises(NotUnitaryEnough):
        chern_odd(chain_ctx, U, 0, require_unit=True)


def test_digest_is_canonical(chain_ctx):
    alg = chain_ctx.alg
    f, g = alg.x1(0), alg.x2(1) * alg.x2(2)
    c1 = chain_from_slots(chain_ctx, [f, g]) + chain_from_slots(
        chain_ctx, [g, f])
    c2 = chain_from_slots(chain_ctx, [g, f]) + chain_from_slots(
        chain_ctx, [f, g])
    assert c1.digest() == c2.digest()
    d = c1.digest()
    assert d["degree"] == 1 and d["n_terms"] == c1.n_terms()
    assert len(d["sha256"]) == 64 and not d["is_zero"]
    assert c1.digest() != (c1 + c1).digest()


def test_vanzz_equivalence_agrees(pyth, classical, chain_ctx):
    _, _, _, ys = pyth
    rep = check_vanzz_equivalence(chain_ctx, ys)
    assert rep["agree"] and rep["chain_vanishes"]
    assert rep["lambda_symmetric_unitary"]
    assert rep["chain_terms"] == 0
    _, _, s0, ys0 = classical
    rep0 = check_vanzz_equivalence(ChainContext(s0), ys0)
    assert rep0["agree"] and rep0["chain_vanishes"]
