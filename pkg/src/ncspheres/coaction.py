"""The classical SU(2) symmetry of the seven-sphere quotient.

H is the commutative *-algebra of polynomial functions on unit quaternions,
in the four real coordinates w0..w3 modulo sum (w^mu)^2 = 1.  Its Hopf
structure is dual to quaternion multiplication.  The sphere algebra carries
the right coaction induced by x_i -> x_i w on both generator quaternions;
the corepresentation matrix is built directly from the quaternion product,

    h^mu_nu = (e_nu w)^mu  in H,   delta(x_i^mu) = sum_nu x_i^nu (x) h^mu_nu,

so no matrix sign conventions enter.  Because right multiplications compose
contravariantly, this h satisfies the right-comodule law
Delta(h^mu_rho) = sum_nu h^nu_rho (x) h^mu_nu.

Derivations D_a are the infinitesimal actions x -> x e_a extended by the
Leibniz rule; their joint kernels per degree are the coinvariants.
"""

from __future__ import annotations

import itertools

from .errors import DegreeOverflow, InvalidSpec
from .ncalg import NCPoly, basis_monomials, mono_key, mono_unit_vec
from .quatlin import epsilon, quat_basis_product, quat_conjugate, quat_multiply
from .rmatrix import ConditionReport
from .scalars import Backend
from .spheres import SphereAlgebra

H_ONE = (0, 0, 0, 0)


def _reduce_hmono(mono, coeff, out):
    """Push w3^2 -> 1 - w0^2 - w1^2 - w2^2 until the w3 exponent is 0 or 1."""
    stack = [(mono, coeff)]
    while stack:
        m, c = stack.pop()
        if m[3] < 2:
            got = out.get(m)
            out[m] = c if got is None else got + c
            continue
        base = (m[0], m[1], m[2], m[3] - 2)
        stack.append((base, c))
        for i in range(3):
            lower = list(base)
            lower[i] += 2
            stack.append((tuple(lower), -c))
    return out


class CommPoly:
    """Element of H: commutative polynomial in w0..w3 mod the unit norm."""

    __slots__ = ("backend", "terms")

    def __init__(self, backend: Backend, terms):
        self.backend = backend
        acc = {}
        for m, c in terms.items():
            _reduce_hmono(m, c, acc)
        self.terms = {m: c for m, c in acc.items() if not backend.is_zero(c)}

    @classmethod
    def zero(cls, backend):
        return cls(backend, {})

    @classmethod
    def one(cls, backend):
        return cls(backend, {H_ONE: backend.one})

    @classmethod
    def generator(cls, backend, mu: int):
        m = tuple(1 if i == mu else 0 for i in range(4))
        return cls(backend, {m: backend.one})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            got = out.get(m)
            out[m] = c if got is None else got + c
        return CommPoly(self.backend, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CommPoly(self.backend, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CommPoly):
            out = {}
            for m, c in self.terms.items():
                for n, d in other.terms.items():
                    k = (m[0] + n[0], m[1] + n[1], m[2] + n[2], m[3] + n[3])
                    got = out.get(k)
                    cd = c * d
                    out[k] = cd if got is None else got + cd
            return CommPoly(self.backend, out)
        return CommPoly(self.backend, {m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def conjugate(self):
        """Star on H: the coordinates are real, so conjugate coefficients."""
        return CommPoly(self.backend, {m: c.conjugate() for m, c in self.terms.items()})

    def evaluate(self, point):
        """Value at a numeric quaternion (needs no unit-norm assumption)."""
        be = self.backend
        total = be.zero
        for m, c in self.terms.items():
            v = c
            for i in range(4):
                for _ in range(m[i]):
                    v = v * point[i]
            total = total + v
        return total

    def __eq__(self, other):
        if not isinstance(other, CommPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None


class HChain:
    """Element of H^{(x) k}, used for the Hopf-axiom checks."""

    __slots__ = ("backend", "k", "terms")

    def __init__(self, backend, k, terms):
        self.backend = backend
        self.k = k
        acc = {}
        for key, c in terms.items():
            _expand_reduced(key, c, acc, backend)
        self.terms = {m: c for m, c in acc.items() if not backend.is_zero(c)}

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            got = out.get(m)
            out[m] = c if got is None else got + c
        return HChain(self.backend, self.k, out)

    def __sub__(self, other):
        return self + other.scale(-self.backend.one)

    def scale(self, c):
        return HChain(self.backend, self.k, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for m, c in self.terms.items():
            for n, d in other.terms.items():
                key = tuple((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
                            for a, b in zip(m, n))
                got = out.get(key)
                cd = c * d
                out[key] = cd if got is None else got + cd
        return HChain(self.backend, self.k, out)

    def is_zero(self):
        return not self.terms


def _expand_reduced(key, coeff, out, backend):
    """Reduce every slot of an H-tensor key by the unit-norm relation."""
    parts = [dict(_reduce_hmono(m, backend.one, {})) for m in key]
    for combo in itertools.product(*(p.items() for p in parts)):
        k = tuple(m for m, _ in combo)
        c = coeff
        for _, v in combo:
            c = c * v
        got = out.get(k)
        out[k] = c if got is None else got + c


def tensor_of(*polys):
    be = polys[0].backend
    out = {}
    for combo in itertools.product(*(p.terms.items() for p in polys)):
        key = tuple(m for m, _ in combo)
        c = be.one
        for _, v in combo:
            c = c * v
        got = out.get(key)
        out[key] = c if got is None else got + c
    return HChain(be, len(polys), out)


# ---------------------------------------------------------------------------
# Hopf structure on generators, extended as algebra maps
# ---------------------------------------------------------------------------


def hopf_delta_gen(backend, mu: int) -> HChain:
    """Coproduct of w^mu, dual to the quaternion product."""
    w = [CommPoly.generator(backend, i) for i in range(4)]
    if mu == 0:
        out = tensor_of(w[0], w[0])
        for a in (1, 2, 3):
            out = out - tensor_of(w[a], w[a])
        return out
    out = tensor_of(w[0], w[mu]) + tensor_of(w[mu], w[0])
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            e = epsilon(a, b, mu)
            if e:
                t = tensor_of(w[a], w[b])
                out = out + (t if e > 0 else t.scale(-backend.one))
    return out


def hopf_delta(f: CommPoly) -> HChain:
    """Coproduct as an algebra map H -> H (x) H."""
    be = f.backend
    gens = [hopf_delta_gen(be, mu) for mu in range(4)]
    unit = HChain(be, 2, {(H_ONE, H_ONE): be.one})
    out = HChain(be, 2, {})
    for m, c in f.terms.items():
        term = unit.scale(c)
        for mu in range(4):
            for _ in range(m[mu]):
                term = term * gens[mu]
        out = out + term
    return out


def hopf_counit(f: CommPoly):
    """Evaluation at the identity quaternion."""
    be = f.backend
    return f.evaluate((be.one, be.zero, be.zero, be.zero))


def hopf_antipode(f: CommPoly) -> CommPoly:
    """Quaternion conjugation: w0 -> w0, w^a -> -w^a."""
    out = {}
    for m, c in f.terms.items():
        sign = (-1) ** (m[1] + m[2] + m[3])
        got = out.get(m)
        v = c if sign > 0 else -c
        out[m] = v if got is None else got + v
    return CommPoly(f.backend, out)


def check_hopf_axioms(backend: Backend) -> list:
    """Coassociativity, counit and antipode laws on generators and on all
    degree-2 products."""
    be = backend
    tol = 0.0 if be.exact else be.tol
    w = [CommPoly.generator(be, i) for i in range(4)]
    elements = list(w) + [w[a] * w[b] for a in range(4) for b in range(a, 4)]
    coassoc = counit = antipode = 0.0
    for f in elements:
        df = hopf_delta(f)
        # (Delta (x) id) Delta = (id (x) Delta) Delta
        left = HChain(be, 3, {})
        right = HChain(be, 3, {})
        for (m1, m2), c in df.terms.items():
            d1 = hopf_delta(CommPoly(be, {m1: be.one}))
            for (a, bm), cc in d1.terms.items():
                key = (a, bm, m2)
                got = left.terms.get(key)
                left.terms[key] = c * cc if got is None else got + c * cc
            d2 = hopf_delta(CommPoly(be, {m2: be.one}))
            for (a, bm), cc in d2.terms.items():
                key = (m1, a, bm)
                got = right.terms.get(key)
                right.terms[key] = c * cc if got is None else got + c * cc
        diff = left - right
        coassoc = max(coassoc, max((be.residual(v) for v in diff.terms.values()), default=0.0))
        # (eps (x) id) Delta = id = (id (x) eps) Delta
        lc = CommPoly.zero(be)
        rc = CommPoly.zero(be)
        for (m1, m2), c in df.terms.items():
            lc = lc + CommPoly(be, {m2: c * hopf_counit(CommPoly(be, {m1: be.one}))})
            rc = rc + CommPoly(be, {m1: c * hopf_counit(CommPoly(be, {m2: be.one}))})
        dl = lc - f
        dr = rc - f
        counit = max(counit,
                     max((be.residual(v) for v in dl.terms.values()), default=0.0),
                     max((be.residual(v) for v in dr.terms.values()), default=0.0))
        # m (S (x) id) Delta = eps(f) 1 = m (id (x) S) Delta
        sl = CommPoly.zero(be)
        sr = CommPoly.zero(be)
        for (m1, m2), c in df.terms.items():
            sl = sl + c * (hopf_antipode(CommPoly(be, {m1: be.one})) * CommPoly(be, {m2: be.one}))
            sr = sr + c * (CommPoly(be, {m1: be.one}) * hopf_antipode(CommPoly(be, {m2: be.one})))
        target = CommPoly(be, {H_ONE: hopf_counit(f)})
        dl = sl - target
        dr = sr - target
        antipode = max(antipode,
                       max((be.residual(v) for v in dl.terms.values()), default=0.0),
                       max((be.residual(v) for v in dr.terms.values()), default=0.0))
    return [
        ConditionReport("hopf_coassociativity", coassoc <= tol, coassoc, None),
        ConditionReport("hopf_counit", counit <= tol, counit, None),
        ConditionReport("hopf_antipode", antipode <= tol, antipode, None),
    ]


# ---------------------------------------------------------------------------
# mixed elements of A (x) H
# ---------------------------------------------------------------------------


class MixedElement:
    """Sparse element of A(S7_R) (x) H; A-slots sphere-reduced, H-slots
    norm-reduced."""

    __slots__ = ("sphere", "terms")

    def __init__(self, sphere: SphereAlgebra, terms):
        self.sphere = sphere
        be = sphere.base.backend
        acc = {}
        for (am, hm), c in terms.items():
            for am2, c2 in sphere.context.reduce_mono(am).items():
                _merge_mixed(acc, am2, hm, c * c2)
        self.terms = {k: v for k, v in acc.items() if not be.is_zero(v)}

    @classmethod
    def from_poly(cls, sphere, f: NCPoly, h: CommPoly | None = None):
        be = sphere.base.backend
        hterms = {H_ONE: be.one} if h is None else h.terms
        terms = {}
        for m, c in f.terms.items():
            for hm, hc in hterms.items():
                got = terms.get((m, hm))
                v = c * hc
                terms[(m, hm)] = v if got is None else got + v
        return cls(sphere, terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            got = out.get(k)
            out[k] = c if got is None else got + c
        return MixedElement(self.sphere, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MixedElement(self.sphere, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        return MixedElement(self.sphere, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        alg = self.sphere.base
        out = {}
        for (am, hm), c in self.terms.items():
            for (an, hn), d in other.terms.items():
                cd = c * d
                hk = (hm[0] + hn[0], hm[1] + hn[1], hm[2] + hn[2], hm[3] + hn[3])
                for ak, e in alg.mono_mul(am, an).items():
                    got = out.get((ak, hk))
                    v = cd * e
                    out[(ak, hk)] = v if got is None else got + v
        return MixedElement(self.sphere, out)

    def star(self):
        alg = self.sphere.base
        out = {}
        for (am, hm), c in self.terms.items():
            cc = c.conjugate()
            for ak, e in alg.star_mono(am).items():
                got = out.get((ak, hm))
                v = cc * e
                out[(ak, hm)] = v if got is None else got + v
        return MixedElement(self.sphere, out)

    def residual(self) -> float:
        be = self.sphere.base.backend
        return max((be.residual(c) for c in self.terms.values()), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, MixedElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None


def _merge_mixed(acc, am, hm, coeff):
    for hm2, c2 in _reduce_hmono(hm, coeff, {}).items():
        k = (am, hm2)
        got = acc.get(k)
        acc[k] = c2 if got is None else got + c2


# ---------------------------------------------------------------------------
# the coaction
# ---------------------------------------------------------------------------


def right_corep_matrix(backend: Backend) -> list:
    """h^mu_nu = (e_nu w)^mu in H, the right-multiplication corepresentation."""
    h = [[CommPoly.zero(backend) for _ in range(4)] for _ in range(4)]
    for nu in range(4):
        for a in range(4):
            coeff, mu = quat_basis_product(nu, a)
            w = CommPoly.generator(backend, a)
            ent = w if coeff > 0 else -w
            h[mu][nu] = h[mu][nu] + ent
    return h


def left_corep_matrix(backend: Backend) -> list:
    """h^mu_nu = (w e_nu)^mu in H, used only as the faulty one-sided variant."""
    h = [[CommPoly.zero(backend) for _ in range(4)] for _ in range(4)]
    for nu in range(4):
        for a in range(4):
            coeff, mu = quat_basis_product(a, nu)
            w = CommPoly.generator(backend, a)
            ent = w if coeff > 0 else -w
            h[mu][nu] = h[mu][nu] + ent
    return h


class Coaction:
    """Algebra map A -> A (x) H fixed by its values on the 8 generators."""

    def __init__(self, sphere: SphereAlgebra, images):
        self.sphere = sphere
        self.images = images  # list of 8 MixedElements

    def delta(self, f: NCPoly) -> MixedElement:
        sphere = self.sphere
        unit = MixedElement.from_poly(sphere, sphere.base.one())
        out = MixedElement(sphere, {})
        for m, c in f.terms.items():
            term = unit.scale(c)
            for g in range(8):
                for _ in range(m[g]):
                    term = term * self.images[g]
            out = out + term
        return out


def diagonal_coaction(s: SphereAlgebra) -> Coaction:
    """x_i -> x_i w on both quaternions: the bundle's structure coaction."""
    be = s.base.backend
    h = right_corep_matrix(be)
    images = []
    for fam in (0, 4):
        for mu in range(4):
            img = MixedElement(s, {})
            for nu in range(4):
                img = img + MixedElement.from_poly(s, s.base.generator(fam + nu), h[mu][nu])
            images.append(img)
    return Coaction(s, images)


def one_sided_left_coaction(s: SphereAlgebra) -> Coaction:
    """x1 -> w x1, x2 -> x2: generally fails to preserve the relations."""
    be = s.base.backend
    h = left_corep_matrix(be)
    images = []
    for mu in range(4):
        img = MixedElement(s, {})
        for nu in range(4):
            img = img + MixedElement.from_poly(s, s.base.generator(nu), h[mu][nu])
        images.append(img)
    for mu in range(4):
        images.append(MixedElement.from_poly(s, s.base.generator(4 + mu)))
    return Coaction(s, images)


def check_comodule_algebra(co: Coaction) -> dict:
    """Relation preservation, star compatibility, coassociativity, counit.

    Relation preservation: for every generator pair the coaction applied to
    the normal form of the product equals the product of the images; with
    the sphere relation x^2 -> 1 (x) 1.  Star compatibility and the comodule
    laws are checked on all generators.
    """
    s = co.sphere
    alg = s.base
    be = alg.backend
    tol = 0.0 if be.exact else be.tol
    failures = []
    worst = 0.0
    # pairwise products: delta is well defined iff images satisfy the
    # normal-ordering relations
    for gi in range(8):
        for gj in range(8):
            lhs = co.images[gi] * co.images[gj]
            rhs = co.delta(alg.generator(gi) * alg.generator(gj))
            r = (lhs - rhs).residual()
            worst = max(worst, r)
            if r > tol:
                failures.append({"relation": f"g{gi}*g{gj}", "residual": r})
    # sphere relation
    r = (co.delta(alg.casimir()) - MixedElement.from_poly(s, alg.one())).residual()
    worst = max(worst, r)
    if r > tol:
        failures.append({"relation": "x^2 - 1", "residual": r})
    # star compatibility on generators
    star_res = 0.0
    for g in range(8):
        star_res = max(star_res, (co.delta(alg.generator(g)).star()
                                  - co.delta(alg.generator(g))).residual())
    # comodule laws via the corepresentation matrix of the first family
    corep_res = _corep_axioms_residual(co)
    counit_res = _counit_residual(co)
    return {
        "relations_preserved": not failures,
        "max_residual": worst,
        "failures": failures[:4],
        "star_compatible": star_res <= tol,
        "coassociative": corep_res <= tol,
        "counit_law": counit_res <= tol,
        "passed": (not failures) and star_res <= tol and corep_res <= tol
                  and counit_res <= tol,
    }


def _image_h_matrix(co: Coaction, family: int):
    """Read back h^mu_nu from the generator images of one family."""
    be = co.sphere.base.backend
    h = [[CommPoly.zero(be) for _ in range(4)] for _ in range(4)]
    for mu in range(4):
        img = co.images[family * 4 + mu]
        for (am, hm), c in img.terms.items():
            hits = [nu for nu in range(4) if am == mono_unit_vec(family * 4 + nu)]
            if len(hits) != 1:
                raise InvalidSpec("coaction image is not linear in the generators")
            h[mu][hits[0]] = h[mu][hits[0]] + CommPoly(be, {hm: c})
    return h


def _corep_axioms_residual(co: Coaction) -> float:
    """(delta x id) delta = (id x Delta) delta, on the generator matrix."""
    be = co.sphere.base.backend
    res = 0.0
    for family in (0, 1):
        try:
            h = _image_h_matrix(co, family)
        except InvalidSpec:
            return 1.0
        for mu in range(4):
            for rho in range(4):
                lhs = hopf_delta(h[mu][rho])
                rhs = HChain(be, 2, {})
                for nu in range(4):
                    rhs = rhs + tensor_of(h[nu][rho], h[mu][nu])
                diff = lhs - rhs
                res = max(res, max((be.residual(v) for v in diff.terms.values()),
                                   default=0.0))
    return res


def _counit_residual(co: Coaction) -> float:
    be = co.sphere.base.backend
    res = 0.0
    for family in (0, 1):
        try:
            h = _image_h_matrix(co, family)
        except InvalidSpec:
            return 1.0
        for mu in range(4):
            for nu in range(4):
                v = hopf_counit(h[mu][nu])
                target = be.one if mu == nu else be.zero
                res = max(res, be.residual(v - target))
    return res


# ---------------------------------------------------------------------------
# derivations and coinvariants
# ---------------------------------------------------------------------------


def derivation_matrix(a: int):
    """Integer matrix M with D_a(x^mu) = sum_nu M[mu][nu] x^nu.

    M is the negated right-translation matrix (x -> -x e_a), the sign that
    makes D_1(x1^0) = +x1^1; the joint kernels are insensitive to it.
    """
    M = [[0] * 4 for _ in range(4)]
    for nu in range(4):
        coeff, mu = quat_basis_product(nu, a)
        M[mu][nu] -= coeff
    return M


def derivation(alg, a: int, f: NCPoly) -> NCPoly:
    """Leibniz extension of the infinitesimal right translation."""
    M = derivation_matrix(a)
    out = alg.zero()
    for m, c in f.terms.items():
        word = []
        for g in range(8):
            word.extend([g] * m[g])
        for pos in range(len(word)):
            g = word[pos]
            fam, mu = divmod(g, 4)
            pre = alg.one()
            for gg in word[:pos]:
                pre = pre * alg.generator(gg)
            post = alg.one()
            for gg in word[pos + 1:]:
                post = post * alg.generator(gg)
            for nu in range(4):
                if M[mu][nu] == 0:
                    continue
                mid = alg.generator(fam * 4 + nu)
                out = out + (pre * mid * post) * (M[mu][nu] * c)
    return out


def coinvariants(alg, degree: int, max_degree: int = 4) -> list:
    """Basis of the joint kernel of D_1, D_2, D_3 on the degree-n component.

    Computed in the graded quadratic algebra (the derivations preserve
    degree); the quotient sphere algebra inherits each coinvariant.
    """
    if degree > max_degree:
        raise DegreeOverflow(f"coinvariants limited to degree {max_degree}")
    be = alg.backend
    basis = basis_monomials(degree)
    index = {m: i for i, m in enumerate(basis)}
    # stacked matrix of all three derivations: one column per basis monomial
    mat = []
    for a in (1, 2, 3):
        block = [[be.zero] * len(basis) for _ in range(len(basis))]
        for m in basis:
            img = derivation(alg, a, NCPoly(alg, {m: be.one}))
            col = index[m]
            for mm, c in img.terms.items():
                block[index[mm]][col] = block[index[mm]][col] + c
        mat.extend(block)
    kernel = _nullspace(mat, len(basis), be)
    out = []
    for vec in kernel:
        out.append(NCPoly(alg, {basis[i]: v for i, v in enumerate(vec)}))
    return out


def _nullspace(rows, ncols, be):
    """Exact nullspace basis vectors of a dense matrix over the backend."""
    mat = [list(r) for r in rows if any(not be.is_zero(v) for v in r)]
    pivots = {}
    rank_rows = []
    for row in mat:
        row = list(row)
        for col, prow in pivots.items():
            if not be.is_zero(row[col]):
                f = row[col]
                row = [a - f * bv for a, bv in zip(row, prow)]
        lead = next((c for c in range(ncols) if not be.is_zero(row[c])), None)
        if lead is None:
            continue
        inv = row[lead].inverse() if be.exact else 1.0 / row[lead]
        row = [inv * v for v in row]
        for col, prow in list(pivots.items()):
            if not be.is_zero(prow[lead]):
                f = prow[lead]
                pivots[col] = [a - f * bv for a, bv in zip(prow, row)]
        pivots[lead] = row
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [be.zero] * ncols
        vec[fc] = be.one
        for col, prow in pivots.items():
            vec[col] = -prow[fc]
        out.append(vec)
    return out


def span_contains(alg, basis_polys, f: NCPoly) -> bool:
    """Exact membership of f in the linear span of the given polynomials."""
    be = alg.backend
    monos = sorted({m for p in basis_polys for m in p.terms} | set(f.terms), key=mono_key)
    rows = [[p.coefficient(m) for p in basis_polys] + [f.coefficient(m)] for m in monos]
    n = len(basis_polys)
    rank = 0
    work = [list(r) for r in rows]
    for col in range(n):
        piv = next((r for r in range(rank, len(work)) if not be.is_zero(work[r][col])), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][col].inverse() if be.exact else 1.0 / work[rank][col]
        work[rank] = [inv * v for v in work[rank]]
        for r in range(len(work)):
            if r != rank and not be.is_zero(work[r][col]):
                f2 = work[r][col]
                work[r] = [a - f2 * bv for a, bv in zip(work[r], work[rank])]
        rank += 1
    for r in range(rank, len(work)):
        if not be.is_zero(work[r][n]):
            return False
    return True


def derivation_reports(s: SphereAlgebra, ys) -> list:
    """Invariance of the Y system, the Leibniz rule, and the su(2) bracket."""
    alg = s.base
    be = alg.backend
    tol = 0.0 if be.exact else be.tol
    inv = 0.0
    for a in (1, 2, 3):
        for f in list(ys.Y) + [ys.Y4]:
            d = derivation(alg, a, f)
            inv = max(inv, max((be.residual(c) for c in d.terms.values()), default=0.0))
    # Leibniz on a pair of quadratic elements
    leib = 0.0
    f, g = ys.Y[1], ys.Y[2]
    fg = f * g
    for a in (1, 2, 3):
        d = derivation(alg, a, fg) - (derivation(alg, a, f) * g + f * derivation(alg, a, g))
        leib = max(leib, max((be.residual(c) for c in d.terms.values()), default=0.0))
    # operator bracket [D_a, D_b] against the quaternion prediction.
    # On coefficient vectors D_a D_b acts as M_b M_a (reversed order), and
    # with the negated right translations [M_b, M_a] = -2 eps_{abc} M_c,
    # so the operator bracket is -2 eps_{abc} D_c.
    su2 = 0.0
    probes = [alg.generator(g) for g in range(8)] + [ys.Y[0], ys.Y[3]]
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            if a == b:
                continue
            for f in probes:
                lhs = derivation(alg, a, derivation(alg, b, f)) - \
                    derivation(alg, b, derivation(alg, a, f))
                rhs = alg.zero()
                for c in (1, 2, 3):
                    e = epsilon(a, b, c)
                    if e:
                        rhs = rhs + (-2 * e) * derivation(alg, c, f)
                d = lhs - rhs
                su2 = max(su2, max((be.residual(v) for v in d.terms.values()), default=0.0))
    return [
        ConditionReport("derivations_kill_y_system", inv <= tol, inv, None),
        ConditionReport("derivation_leibniz", leib <= tol, leib, None),
        ConditionReport("derivation_su2_bracket", su2 <= tol, su2, None),
    ]


def coinvariant_report(s: SphereAlgebra, ys, co: Coaction | None = None) -> dict:
    """Degree-1 and degree-2 coinvariants, matched against the Y span."""
    alg = s.base
    be = alg.backend
    k1 = coinvariants(alg, 1)
    k2 = coinvariants(alg, 2)
    expected = list(ys.Y) + [ys.Y4, alg.casimir()]
    contains = all(span_contains(alg, k2, f) for f in expected)
    full_match = len(k2) == 6 and contains and all(
        span_contains(alg, expected, v) for v in k2)
    out = {
        "dim_degree_1": len(k1),
        "dim_degree_2": len(k2),
        "contains_y_span": contains,
        "equals_y_span": full_match,
    }
    if co is not None:
        # finite cross-check: delta(f) = f (x) 1 for each kernel element
        res = 0.0
        for f in k2:
            res = max(res, (co.delta(f) - MixedElement.from_poly(s, f)).residual())
        out["delta_fixes_kernel"] = res <= (0.0 if be.exact else be.tol)
    return out


# ---------------------------------------------------------------------------
# the canonical-map witness
# ---------------------------------------------------------------------------


def canonical_witness(co: Coaction) -> dict:
    """T = <psi| delta(|psi>) must equal (1 (x) w^mu) componentwise.

    This is the generator-level surjectivity witness for the canonical map
    of the bundle: every H-generator is hit, and the structure Hopf algebra
    is cosemisimple, which upgrades surjectivity to bijectivity.
    """
    s = co.sphere
    alg = s.base
    be = alg.backend
    tol = 0.0 if be.exact else be.tol
    x1 = tuple(alg.x1(k) for k in range(4))
    x2 = tuple(alg.x2(k) for k in range(4))
    dx1 = [co.delta(f) for f in x1]
    dx2 = [co.delta(f) for f in x2]
    c1 = [MixedElement.from_poly(s, f) for f in quat_conjugate(x1)]
    c2 = [MixedElement.from_poly(s, f) for f in quat_conjugate(x2)]
    T = [a + b for a, b in zip(quat_multiply(c2, dx2), quat_multiply(c1, dx1))]
    res = 0.0
    witness = []
    for mu in range(4):
        target = MixedElement.from_poly(s, alg.one(), CommPoly.generator(be, mu))
        r = (T[mu] - target).residual()
        res = max(res, r)
        witness.append(r)
    return {
        "passed": res <= tol,
        "max_residual": res,
        "component_residuals": witness,
    }
