"""Sphere and torus quotients of the quadratic algebra, and the Y system.

The seven-sphere is the quotient by the central relation x^2 = 1; the torus
quotients by both family norms.  On the seven-sphere the pair (x2, x1) of
quaternion-valued generators gives the projection p = |psi><psi| and the
degree-2 coordinate functions

    Y = 2 x2 conj(x1)   (quaternion product, components Y^0..Y^3),
    Y4 = ||x2||^2 - ||x1||^2,

whose star structure is encoded by a symmetric unitary matrix Lambda with
Y^{mu*} = Lambda^mu_nu Y^nu.  Lambda is recovered here by solving the linear
system exactly from the computed stars, independently of its closed form,
so the closed-form comparison is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidSpec, IrrationalEigenvalue, NotCentral
from .ncalg import Algebra, NCPoly, ReductionContext, is_central, mono_key
from .quatlin import Mat, embed_M2, epsilon, quat_conjugate, quat_multiply
from .rmatrix import ConditionReport, DeformParams
from .scalars import EXACT, Backend, GaussRational, is_perfect_square, sqrt_exact


@dataclass
class SphereAlgebra:
    kind: str
    base: Algebra
    context: ReductionContext
    params: DeformParams | None = None

    def reduce(self, f: NCPoly) -> NCPoly:
        return self.context.reduce_fast(f)

    def is_zero(self, f: NCPoly) -> bool:
        return self.context.is_zero(f)

    def residual(self, f: NCPoly) -> float:
        return self.context.residual(f)


def build_sphere(alg: Algebra, kind: str, params: DeformParams | None = None,
                 degree_cap: int = 12) -> SphereAlgebra:
    """Quotient context for 'seven_sphere' (x^2 = 1) or 'torus' (both norms 1).

    Raises NotCentral if a relation element fails to commute with every
    generator (possible for fault-injected exchange tensors).
    """
    if kind == "seven_sphere":
        rels = [(alg.casimir(), 1)]
    elif kind == "torus":
        rels = [(alg.family_casimir(1), 1), (alg.family_casimir(2), 1)]
    else:
        raise InvalidSpec(f"unknown sphere kind {kind!r}")
    ctx = ReductionContext(alg, rels, degree_cap=degree_cap)
    return SphereAlgebra(kind, alg, ctx, params)


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def quaternion_generators(alg: Algebra):
    """The two generator quaternions (x1, x2) as 4-tuples of NCPoly."""
    x1 = tuple(alg.x1(k) for k in range(4))
    x2 = tuple(alg.x2(k) for k in range(4))
    return x1, x2


def build_projection(s: SphereAlgebra) -> Mat:
    """p = |psi><psi| for psi = (x2, x1), as a 4x4 matrix over the algebra.

    Quaternion blocks x_i x_j^* are embedded into 2x2 complex blocks, so p
    is hermitian entry-wise by construction and idempotent modulo x^2 = 1.
    """
    alg = s.base
    i = alg.backend.i
    x1, x2 = quaternion_generators(alg)
    blocks = [
        [quat_multiply(x2, quat_conjugate(x2)), quat_multiply(x2, quat_conjugate(x1))],
        [quat_multiply(x1, quat_conjugate(x2)), quat_multiply(x1, quat_conjugate(x1))],
    ]
    rows = []
    for br in range(2):
        emb = [embed_M2(blocks[br][bc], i) for bc in range(2)]
        for r in range(2):
            rows.append(list(emb[0].rows[r]) + list(emb[1].rows[r]))
    return Mat(rows)


def projection_checks(s: SphereAlgebra) -> list:
    """Hermiticity (exact), idempotency mod ideal, half-trace identity."""
    alg = s.base
    p = build_projection(s)
    pd = p.dagger()
    be = alg.backend
    herm = max(
        (_residual_exact(p.rows[a][b] - pd.rows[a][b]) for a in range(4) for b in range(4)),
        default=0.0)
    p2 = p @ p
    idem = max(
        (s.residual(p2.rows[a][b] - p.rows[a][b]) for a in range(4) for b in range(4)),
        default=0.0)
    tr = sum((p.rows[a][a] for a in range(4)), alg.zero())
    half_tr = s.residual(tr - 2 * alg.one())
    tol = 0.0 if be.exact else be.tol
    return [
        ConditionReport("projection_hermitian", herm <= tol, herm, None),
        ConditionReport("projection_idempotent", idem <= tol, idem, None),
        ConditionReport("projection_half_trace", half_tr <= tol, half_tr, None),
    ]


def _residual_exact(f: NCPoly) -> float:
    return max((f.algebra.backend.residual(c) for c in f.terms.values()), default=0.0)


# ---------------------------------------------------------------------------
# Y system
# ---------------------------------------------------------------------------


@dataclass
class YSystem:
    Y: tuple
    Ystar: tuple
    Y4: NCPoly
    lam: list
    params: DeformParams | None


def compute_Y(s: SphereAlgebra) -> YSystem:
    """Coordinate functions and their star structure.

    Lambda is solved exactly from Y^{mu*} = Lambda^mu_nu Y^nu as an
    (overdetermined) linear system on monomial coefficients; an inconsistent
    system raises InvalidSpec, which doubles as a fault detector.
    """
    alg = s.base
    x1, x2 = quaternion_generators(alg)
    Y = tuple(2 * c for c in quat_multiply(x2, quat_conjugate(x1)))
    Ystar = tuple(y.star() for y in Y)
    q1 = alg.family_casimir(1)
    q2 = alg.family_casimir(2)
    Y4 = q2 - q1
    lam = solve_star_matrix(alg, Y, Ystar)
    return YSystem(Y, Ystar, Y4, lam, s.params)


def solve_star_matrix(alg: Algebra, Y, Ystar) -> list:
    """Solve Ystar[mu] = sum_nu lam[mu][nu] Y[nu] exactly; raise if impossible."""
    be = alg.backend
    monos = sorted({m for y in Y for m in y.terms} |
                   {m for y in Ystar for m in y.terms}, key=mono_key)
    # columns: coefficients of each Y[nu]; rhs columns: each Ystar[mu]
    A = [[Y[nu].coefficient(m) for nu in range(4)] for m in monos]
    B = [[Ystar[mu].coefficient(m) for mu in range(4)] for m in monos]
    rows = [A[r] + B[r] for r in range(len(monos))]
    pivots = []
    rank = 0
    for col in range(4):
        piv = next((r for r in range(rank, len(rows)) if not be.is_zero(rows[r][col])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse() if be.exact else 1.0 / rows[rank][col]
        rows[rank] = [inv * v for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not be.is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    if rank < 4:
        raise InvalidSpec("Y components are linearly dependent")
    for r in range(rank, len(rows)):
        if any(not be.is_zero(v) for v in rows[r][4:]):
            raise InvalidSpec("no matrix Lambda satisfies the star system")
    lam = [[be.zero] * 4 for _ in range(4)]
    for r, col in enumerate(pivots):
        for mu in range(4):
            lam[mu][col] = rows[r][4 + mu]
    return lam


def lambda_closed_form(params: DeformParams, backend: Backend) -> list:
    """The two-block symmetric unitary matrix pairing (Y0,Y3) and (Y1,Y2)."""
    u0, u1, u2 = params.scalars(backend)
    i = backend.i
    z = backend.zero
    a = u0 + i * u1
    d = u0 - i * u1
    c = i * u2
    return [
        [a, z, z, c],
        [z, a, c, z],
        [z, c, d, z],
        [c, z, z, d],
    ]


def lambda_reports(alg: Algebra, ys: YSystem) -> list:
    """Symmetry, unitarity, star identity, and closed-form agreement."""
    be = alg.backend
    lam = ys.lam
    tol = 0.0 if be.exact else be.tol
    sym = max(be.residual(lam[a][b] - lam[b][a]) for a in range(4) for b in range(4))
    uni = 0.0
    for a in range(4):
        for b in range(4):
            acc = be.zero
            for c in range(4):
                acc = acc + lam[a][c] * lam[b][c].conjugate()
            target = be.one if a == b else be.zero
            uni = max(uni, be.residual(acc - target))
    star = 0.0
    for mu in range(4):
        diff = ys.Ystar[mu] - sum((lam[mu][nu] * ys.Y[nu] for nu in range(4)),
                                  alg.zero())
        star = max(star, _residual_exact(diff))
    out = [
        ConditionReport("lambda_symmetric", sym <= tol, sym, None),
        ConditionReport("lambda_unitary", uni <= tol, uni, None),
        ConditionReport("lambda_star_identity", star <= tol, star, None),
    ]
    if ys.params is not None:
        closed = lambda_closed_form(ys.params, be)
        dev = max(be.residual(lam[a][b] - closed[a][b]) for a in range(4) for b in range(4))
        out.append(ConditionReport("lambda_closed_form", dev <= tol, dev, None))
    return out


# ---------------------------------------------------------------------------
# relation suite
# ---------------------------------------------------------------------------


def _quat_star(ys: YSystem):
    """Y^* as a quaternion: scalar part starred, imaginary parts negated."""
    return (ys.Ystar[0], -ys.Ystar[1], -ys.Ystar[2], -ys.Ystar[3])


def verify_Y_relations(s: SphereAlgebra, ys: YSystem) -> list:
    """All defining identities of the two spheres, each as a ConditionReport.

    Identities that hold in the quadratic algebra itself (the star forms,
    the commutation relations) are checked without any quotient; only the
    radius conditions use the sphere ideal.
    """
    alg = s.base
    be = alg.backend
    tol = 0.0 if be.exact else be.tol
    one = alg.one()
    reports = []

    def rep(name, residual, witness=None):
        reports.append(ConditionReport(name, residual <= tol, residual, witness))

    x1, x2 = quaternion_generators(alg)

    # closed forms of the components and their stars
    r = _residual_exact(ys.Y[0] - 2 * sum((x2[m] * x1[m] for m in range(4)), alg.zero()))
    for k in (1, 2, 3):
        f = x2[k] * x1[0] - x2[0] * x1[k]
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                e = epsilon(k, n, m)
                if e:
                    f = f - e * (x2[n] * x1[m])
        r = max(r, _residual_exact(ys.Y[k] - 2 * f))
    rep("y_closed_form", r)

    r = _residual_exact(ys.Ystar[0] - 2 * sum((x1[m] * x2[m] for m in range(4)), alg.zero()))
    for k in (1, 2, 3):
        f = x1[0] * x2[k] - x1[k] * x2[0]
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                e = epsilon(k, n, m)
                if e:
                    f = f + e * (x1[n] * x2[m])
        r = max(r, _residual_exact(ys.Ystar[k] - 2 * f))
    rep("ystar_closed_form", r)

    # Y4 central hermitian
    r = _residual_exact(ys.Y4 - ys.Y4.star())
    r = max(r, 0.0 if is_central(alg, ys.Y4) else 1.0)
    rep("y4_central_hermitian", r)

    # radius conditions, as quaternion products, modulo the sphere ideal
    Yq = ys.Y
    Ysq = _quat_star(ys)
    yy = quat_multiply(Yq, Ysq)
    sy = quat_multiply(Ysq, Yq)
    Y42 = ys.Y4 * ys.Y4
    r = max(_residual_exact(c) for c in yy[1:])
    r = max(r, max(_residual_exact(c) for c in sy[1:]))
    rep("cond0_imaginary_parts", r)
    r = s.residual(yy[0] + Y42 - one)
    r = max(r, s.residual(sy[0] + Y42 - one))
    rep("cond0_radius", r)
    r = _residual_exact(yy[0] - sy[0])
    rep("cond0_products_equal", r)

    # cond00: Y4 commutes with every component and its star
    r = 0.0
    for f in list(Yq) + list(ys.Ystar):
        r = max(r, _residual_exact(f.commutator(ys.Y4)))
    rep("cond00_y4_commutes", r)

    # 4sp1 / 4sp2 component identities (hold exactly in the algebra)
    r1 = r2 = 0.0
    for k in (1, 2, 3):
        f1 = -(ys.Ystar[0] * Yq[k] - ys.Ystar[k] * Yq[0])
        f2 = Yq[0] * ys.Ystar[k] - Yq[k] * ys.Ystar[0]
        for m in (1, 2, 3):
            for n in (1, 2, 3):
                e = epsilon(k, m, n)
                if e:
                    f1 = f1 + e * (ys.Ystar[m] * Yq[n])
                    f2 = f2 + e * (Yq[m] * ys.Ystar[n])
        r1 = max(r1, _residual_exact(f1))
        r2 = max(r2, _residual_exact(f2))
    rep("sp_commutation_1", r1)
    rep("sp_commutation_2", r2)

    # total star-commutator sum
    sp = sum((ys.Ystar[m] * Yq[m] - Yq[m] * ys.Ystar[m] for m in range(4)), alg.zero())
    rep("sp_total_sum", _residual_exact(sp))

    # four-sphere radius in both orderings
    s_star_y = sum((ys.Ystar[m] * Yq[m] for m in range(4)), alg.zero())
    s_y_star = sum((Yq[m] * ys.Ystar[m] for m in range(4)), alg.zero())
    r = s.residual(s_star_y + Y42 - one)
    r = max(r, s.residual(s_y_star + Y42 - one))
    rep("four_sphere_radius", r)

    # both radius sums are central already in the quadratic algebra
    r = 0.0 if (is_central(alg, s_star_y) and is_central(alg, s_y_star)) else 1.0
    rep("radius_sums_central", r)

    # product identity: both sums equal 4 ||x1||^2 ||x2||^2 exactly
    q1 = alg.family_casimir(1)
    q2 = alg.family_casimir(2)
    prod = 4 * (q1 * q2)
    r = max(_residual_exact(s_star_y - prod), _residual_exact(s_y_star - prod))
    rep("radius_product_identity", r)

    # the six explicit commutation relations of the family
    if ys.params is not None:
        u0, u1, u2 = ys.params.scalars(be)
        i = be.i

        def com(a, b):
            return Yq[a] * Yq[b] - Yq[b] * Yq[a]

        def anti(a, b):
            return Yq[a] * Yq[b] + Yq[b] * Yq[a]

        rels = [
            (u0 + i * u1) * com(1, 0) + (i * u2) * (Yq[1] * Yq[3] - Yq[0] * Yq[2]),
            (u0 - i * u1) * com(3, 2) + (i * u2) * (Yq[3] * Yq[1] - Yq[2] * Yq[0]),
            u0 * com(2, 0) - i * u1 * anti(1, 3) + i * u2 * (Yq[1] * Yq[0] - Yq[3] * Yq[2]),
            u0 * com(3, 1) - i * u1 * anti(0, 2) + i * u2 * (Yq[0] * Yq[1] - Yq[2] * Yq[3]),
            u0 * com(3, 0) + i * u1 * anti(1, 2) + i * u2 * (Yq[2] * Yq[2] - Yq[1] * Yq[1]),
            u0 * com(2, 1) + i * u1 * anti(0, 3) + i * u2 * (Yq[3] * Yq[3] - Yq[0] * Yq[0]),
        ]
        r = 0.0
        witness = None
        for idx, rel in enumerate(rels):
            rr = _residual_exact(rel)
            if rr > r:
                r, witness = rr, f"relation {idx + 1}"
        rep("family_commutation_relations", r, witness if r > tol else None)

    reports.extend(lambda_reports(alg, ys))
    return reports


def check_normality(s: SphereAlgebra, ys: YSystem) -> dict:
    """Star-commutator census of the four coordinate functions.

    When the off-diagonal entries of Lambda vanish each Y^mu is a scalar
    multiple of its own star and therefore normal; otherwise all four
    components fail to be normal.  The total sum vanishes in either case.
    """
    be = s.base.backend
    comms = [ys.Ystar[m] * ys.Y[m] - ys.Y[m] * ys.Ystar[m] for m in range(4)]
    normal = [c.is_zero() for c in comms]
    total = sum(comms, s.base.zero())
    off_diag = max(be.residual(ys.lam[a][b]) for a in range(4) for b in range(4)
                   if (a, b) not in ((0, 0), (1, 1), (2, 2), (3, 3)))
    tol = 0.0 if be.exact else be.tol
    return {
        "normal": normal,
        "all_non_normal": not any(normal),
        "all_normal": all(normal),
        "lambda_diagonal": off_diag <= tol,
        "sum_vanishes": total.is_zero(),
        "commutator_residuals": [_residual_exact(c) for c in comms],
    }


# ---------------------------------------------------------------------------
# three-sphere and suspension
# ---------------------------------------------------------------------------


def three_sphere_context(s: SphereAlgebra, ys: YSystem, degree_cap: int = 12) -> SphereAlgebra:
    """Quotient by x^2 = 1 together with sum Y^{mu*} Y^mu = 1.

    The radius sum is central and homogeneous of degree 4, so the same
    filtered reduction applies; the central coordinate Y4 becomes nilpotent
    (its square lies in the ideal) which realizes the equatorial sphere.
    """
    alg = s.base
    s_star_y = sum((ys.Ystar[m] * ys.Y[m] for m in range(4)), alg.zero())
    ctx = ReductionContext(alg, [(alg.casimir(), 1), (s_star_y, 1)], degree_cap=degree_cap)
    return SphereAlgebra("three_sphere", alg, ctx, s.params)


def suspension_reports(s3: SphereAlgebra, ys: YSystem) -> list:
    """Three-sphere radius in both orderings, and Y4^2 -> 0."""
    alg = s3.base
    one = alg.one()
    be = alg.backend
    tol = 0.0 if be.exact else be.tol
    s_star_y = sum((ys.Ystar[m] * ys.Y[m] for m in range(4)), alg.zero())
    s_y_star = sum((ys.Y[m] * ys.Ystar[m] for m in range(4)), alg.zero())
    r1 = max(s3.residual(s_star_y - one), s3.residual(s_y_star - one))
    r2 = s3.residual(ys.Y4 * ys.Y4)
    return [
        ConditionReport("three_sphere_radius", r1 <= tol, r1, None),
        ConditionReport("suspension_y4_squared", r2 <= tol, r2, None),
    ]


def y0_flip_check(s: SphereAlgebra, ys: YSystem) -> ConditionReport:
    """The flip Y0 -> -Y0 carries the commutation identities into the
    variant with the opposite sign on the 0-component terms.

    Writing Z = (-Y0, Y1, Y2, Y3), the flipped components satisfy the
    plus-sign form of the first identity and the minus-sign form of the
    second, so the two presentations differ only by this substitution.
    """
    be = s.base.backend
    tol = 0.0 if be.exact else be.tol
    Z = (-ys.Y[0], ys.Y[1], ys.Y[2], ys.Y[3])
    Zs = tuple(z.star() for z in Z)
    r = 0.0
    for k in (1, 2, 3):
        f1 = Zs[0] * Z[k] - Zs[k] * Z[0]
        f2 = -(Z[0] * Zs[k] - Z[k] * Zs[0])
        for m in (1, 2, 3):
            for n in (1, 2, 3):
                e = epsilon(k, m, n)
                if e:
                    f1 = f1 + e * (Zs[m] * Z[n])
                    f2 = f2 + e * (Z[m] * Zs[n])
        r = max(r, _residual_exact(f1), _residual_exact(f2))
    return ConditionReport("y0_flip_variant_relations", r <= tol, r, None)


# ---------------------------------------------------------------------------
# eigenstructure of Lambda
# ---------------------------------------------------------------------------


def diagonalize_lambda(ys: YSystem, backend: Backend | None = None) -> dict:
    """Eigenvalues, deformation phase, and diagonalizing rotation of Lambda'.

    Lambda' = u0 + i(u1 sigma-like block + u2 off-block) has eigenvalues
    u0 +- i s with s = sqrt((u1)^2 + (u2)^2); after normalizing the first
    eigenvalue to 1 the remaining phase is e^{i theta} = (u0 + i s)^2.
    The exact backend requires s rational and raises IrrationalEigenvalue
    otherwise; the rotation is always reported in floats.
    """
    if ys.params is None:
        raise InvalidSpec("parameter point required to diagonalize Lambda")
    be = backend if backend is not None else EXACT
    u0f, u1f, u2f = (Fraction(v) for v in (ys.params.u0, ys.params.u1, ys.params.u2))
    s2 = u1f * u1f + u2f * u2f
    if be.exact:
        if not (is_perfect_square(s2.numerator) and is_perfect_square(s2.denominator)):
            raise IrrationalEigenvalue(
                f"sqrt({s2}) is irrational; no exact eigenvalue at this point")
        sval = Fraction(sqrt_exact(s2.numerator), sqrt_exact(s2.denominator))
        lam_plus = GaussRational(u0f, sval)
        lam_minus = GaussRational(u0f, -sval)
        theta = lam_plus * lam_plus
    else:
        sf = math.sqrt(float(s2))
        lam_plus = complex(float(u0f), sf)
        lam_minus = complex(float(u0f), -sf)
        theta = lam_plus * lam_plus
    rotation = _block_rotation(float(u1f), float(u2f))
    return {
        "eigenvalues": (lam_plus, lam_minus),
        "theta": theta,
        "rotation": rotation,
    }


def _block_rotation(u1: float, u2: float) -> list:
    """Real rotation diagonalizing [[u1, u2], [u2, -u1]] (identity if zero)."""
    s = math.hypot(u1, u2)
    if s == 0.0:
        return [[1.0, 0.0], [0.0, 1.0]]
    vx, vy = u1 + s, u2
    norm = math.hypot(vx, vy)
    if norm == 0.0:
        # u1 = -s, u2 = 0: the swap rotation
        return [[0.0, -1.0], [1.0, 0.0]]
    c, t = vx / norm, vy / norm
    return [[c, -t], [t, c]]
