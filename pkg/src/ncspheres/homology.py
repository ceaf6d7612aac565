"""Normalized Hochschild/cyclic chains over a sphere quotient.

Chains live in A tensor Abar^n with Abar = A / C1: slot 0 may carry the
unit, slots >= 1 may not.  A chain is a sparse map from (n+1)-tuples of
interned canonical monomials to scalars; every slot entry is kept in sphere
normal form, so chain equality is plain dictionary equality.

The boundary operators are the standard ones on normalized chains:

    b(a0 x ... x an) = sum_i (-1)^i a0 x ... x (a_i a_{i+1}) x ... x an
                       + (-1)^n (a_n a_0) x a1 x ... x a_{n-1}
    B(a0 x ... x an) = sum_i (-1)^{ni} 1 x a_i x ... x an x a0 x ... x a_{i-1}

The Connes-Chern components are partial matrix traces of tensor powers of
the projection (even case) or of the coordinate quaternion and its star
(odd case); both are built through the generic trace_chain.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from .errors import DegreeZero, NotUnitaryEnough
from .ncalg import NCPoly, mono_key
from .quatlin import Mat
from .spheres import SphereAlgebra

UNIT_ID = 0


class ChainContext:
    """Interning tables and product caches bound to one sphere quotient."""

    def __init__(self, sphere: SphereAlgebra):
        self.sphere = sphere
        self.alg = sphere.base
        self.backend = sphere.base.backend
        self._monos = [(0,) * 8]
        self._ids = {(0,) * 8: UNIT_ID}
        self._poly_cache = {}
        self._pair_cache = {}

    def intern(self, mono) -> int:
        got = self._ids.get(mono)
        if got is None:
            got = len(self._monos)
            self._monos.append(mono)
            self._ids[mono] = got
        return got

    def mono(self, mid: int):
        return self._monos[mid]

    def expand_poly(self, f: NCPoly):
        """Sphere-reduce f and expand as a tuple of (monomial id, coeff)."""
        red = self.sphere.reduce(f)
        return tuple((self.intern(m), c) for m, c in red.items_sorted())

    def pair_product(self, i: int, j: int):
        """Reduced product of two interned monomials, as ((id, coeff), ...)."""
        key = (i, j)
        got = self._pair_cache.get(key)
        if got is None:
            be = self.backend
            raw = self.alg.mono_mul(self._monos[i], self._monos[j])
            acc = {}
            for m, c in raw.items():
                for mm, cc in self.sphere.context.reduce_mono(m).items():
                    v = acc.get(mm)
                    acc[mm] = c * cc if v is None else v + c * cc
            got = tuple((self.intern(m), c) for m, c in sorted(acc.items(), key=lambda kv: mono_key(kv[0]))
                        if not be.is_zero(c))
            self._pair_cache[key] = got
        return got

    def scalar(self, v):
        if isinstance(v, (int, Fraction)):
            return self.backend.from_fraction(Fraction(v))
        return self.backend.convert(v)


class TensorChain:
    """Sparse normalized chain; backed by a ChainContext."""

    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx: ChainContext, degree: int, terms=None):
        self.ctx = ctx
        self.degree = degree
        be = ctx.backend
        self.terms = {k: v for k, v in (terms or {}).items() if not be.is_zero(v)}

    def is_zero(self) -> bool:
        return not self.terms

    def n_terms(self) -> int:
        return len(self.terms)

    def copy(self) -> "TensorChain":
        return TensorChain(self.ctx, self.degree, dict(self.terms))

    def __add__(self, other: "TensorChain") -> "TensorChain":
        if other.degree != self.degree and other.terms and self.terms:
            raise ValueError("degree mismatch in chain addition")
        out = dict(self.terms)
        for k, v in other.terms.items():
            got = out.get(k)
            out[k] = v if got is None else got + v
        return TensorChain(self.ctx, self.degree if self.terms or not other.terms else other.degree, out)

    def __sub__(self, other: "TensorChain") -> "TensorChain":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorChain":
        c = self.ctx.scalar(c)
        return TensorChain(self.ctx, self.degree,
                           {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorChain):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def canonical_terms(self):
        """Terms sorted by the slot monomials' graded-lex keys."""
        def key(item):
            return tuple(mono_key(self.ctx.mono(i)) for i in item[0])
        return sorted(self.terms.items(), key=key)

    def digest(self) -> dict:
        h = hashlib.sha256()
        for key, coeff in self.canonical_terms():
            for mid in key:
                h.update(repr(self.ctx.mono(mid)).encode())
                h.update(b"|")
            h.update(str(coeff).encode())
            h.update(b";")
        return {
            "degree": self.degree,
            "n_terms": len(self.terms),
            "is_zero": self.is_zero(),
            "sha256": h.hexdigest(),
        }


def chain_from_slots(ctx: ChainContext, slots, coeff=1) -> TensorChain:
    """Multilinear expansion of a pure tensor of polynomials into a chain."""
    be = ctx.backend
    coeff = ctx.scalar(coeff)
    expansions = []
    for pos, f in enumerate(slots):
        exp = ctx.expand_poly(f)
        if pos > 0:
            exp = tuple(e for e in exp if e[0] != UNIT_ID)
        if not exp:
            return TensorChain(ctx, len(slots) - 1, {})
        expansions.append(exp)
    out = {}
    _expand_product(expansions, 0, (), coeff, out)
    return TensorChain(ctx, len(slots) - 1, out)


def _expand_product(expansions, pos, prefix, coeff, out):
    if pos == len(expansions):
        got = out.get(prefix)
        out[prefix] = coeff if got is None else got + coeff
        return
    for mid, c in expansions[pos]:
        _expand_product(expansions, pos + 1, prefix + (mid,), coeff * c, out)


# ---------------------------------------------------------------------------
# boundary operators
# ---------------------------------------------------------------------------


def b_boundary(chain: TensorChain) -> TensorChain:
    """Hochschild boundary; lowers degree by one."""
    n = chain.degree
    if n < 1:
        raise DegreeZero("b is undefined on degree-0 chains")
    ctx = chain.ctx
    out = {}
    for key, coeff in chain.terms.items():
        for i in range(n):
            sign = coeff if i % 2 == 0 else -coeff
            for mid, c in ctx.pair_product(key[i], key[i + 1]):
                if mid == UNIT_ID and i > 0:
                    continue
                nk = key[:i] + (mid,) + key[i + 2:]
                v = out.get(nk)
                nv = sign * c if v is None else v + sign * c
                out[nk] = nv
        sign = coeff if n % 2 == 0 else -coeff
        for mid, c in ctx.pair_product(key[n], key[0]):
            nk = (mid,) + key[1:n]
            v = out.get(nk)
            out[nk] = sign * c if v is None else v + sign * c
    return TensorChain(ctx, n - 1, out)


def B_boundary(chain: TensorChain) -> TensorChain:
    """Connes boundary on normalized chains; raises degree by one."""
    n = chain.degree
    ctx = chain.ctx
    out = {}
    for key, coeff in chain.terms.items():
        for i in range(n + 1):
            rotated = key[i:] + key[:i]
            if any(mid == UNIT_ID for mid in rotated):
                continue
            sign = coeff if (n * i) % 2 == 0 else -coeff
            nk = (UNIT_ID,) + rotated
            v = out.get(nk)
            out[nk] = sign if v is None else v + sign
    return TensorChain(ctx, n + 1, out)


# ---------------------------------------------------------------------------
# partial matrix traces and Chern components
# ---------------------------------------------------------------------------


def trace_chain(ctx: ChainContext, mats, coeff=1) -> TensorChain:
    """<M0 x M1 x ... x Mn>: sum over cyclic matrix index paths.

    Each matrix is a Mat over NCPoly; the result is the degree-n chain
    sum_{i0..in} M0[i0,i1] x M1[i1,i2] x ... x Mn[in,i0].
    """
    be = ctx.backend
    coeff = ctx.scalar(coeff)
    sizes = {len(m.rows) for m in mats}
    if len(sizes) != 1:
        raise ValueError("matrix sizes differ")
    r = sizes.pop()
    # pre-expand every entry once
    expanded = []
    for pos, m in enumerate(mats):
        table = [[ctx.expand_poly(m.rows[a][b]) for b in range(r)] for a in range(r)]
        if pos > 0:
            table = [[tuple(e for e in cell if e[0] != UNIT_ID) for cell in row]
                     for row in table]
        expanded.append(table)
    out = {}
    n = len(mats)

    def walk(pos, i_first, i_cur, prefix, c):
        if pos == n:
            if i_cur != i_first:
                return
            got = out.get(prefix)
            out[prefix] = c if got is None else got + c
            return
        row = expanded[pos][i_cur]
        for i_next in range(r):
            cell = row[i_next]
            if not cell:
                continue
            if pos == n - 1 and i_next != i_first:
                continue
            for mid, cc in cell:
                walk(pos + 1, i_first, i_next, prefix + (mid,), c * cc)

    for i0 in range(r):
        walk(0, i0, i0, (), coeff)
    return TensorChain(ctx, n - 1, out)


def matrix_half_shift(ctx: ChainContext, p: Mat) -> Mat:
    """p - 1/2 identity over the chain context's algebra."""
    alg = ctx.alg
    half = alg.scalar(Fraction(1, 2))
    rows = [[p.rows[a][b] - half if a == b else p.rows[a][b]
             for b in range(len(p.rows))] for a in range(len(p.rows))]
    return Mat(rows)


def chern_even(ctx: ChainContext, p: Mat, k: int, lam=1) -> TensorChain:
    """ch_k(p) = lam <(p - 1/2) x p^{x 2k}>, a degree-2k chain."""
    mats = [matrix_half_shift(ctx, p)] + [p] * (2 * k)
    return trace_chain(ctx, mats, coeff=lam)


def unitarity_report(ctx: ChainContext, U: Mat, require_unit: bool) -> float:
    """Residual of UU* = U*U (and = 1 when required) modulo the context ideal."""
    Ud = U.dagger()
    A = U @ Ud
    Bm = Ud @ U
    r = len(U.rows)
    s = ctx.sphere
    res = 0.0
    one = ctx.alg.one()
    for a in range(r):
        for b in range(r):
            res = max(res, s.residual(A.rows[a][b] - Bm.rows[a][b]))
            if a != b:
                res = max(res, s.residual(A.rows[a][b]))
        if require_unit:
            res = max(res, s.residual(A.rows[a][a] - one))
    if not require_unit:
        # both diagonal entries must agree (central multiple of the identity)
        for a in range(1, r):
            res = max(res, s.residual(A.rows[a][a] - A.rows[0][0]))
    return res


def chern_odd(ctx: ChainContext, U: Mat, k: int, lam=1, require_unit: bool = False) -> TensorChain:
    """ch_{k+1/2}(U): alternating U, U* tensor words of length 2k+2, traced.

    Raises NotUnitaryEnough unless UU* = U*U reduces to a central multiple
    of the identity (to 1 itself when require_unit is set).
    """
    be = ctx.backend
    tol = 0.0 if be.exact else be.tol
    res = unitarity_report(ctx, U, require_unit)
    if res > tol:
        raise NotUnitaryEnough(f"UU* = U*U check failed with residual {res}")
    Ud = U.dagger()
    word = []
    for j in range(2 * (k + 1)):
        word.append(U if j % 2 == 0 else Ud)
    swapped = [Ud if j % 2 == 0 else U for j in range(2 * (k + 1))]
    return trace_chain(ctx, word, coeff=lam) - trace_chain(ctx, swapped, coeff=lam)


# ---------------------------------------------------------------------------
# the equivalence of the two vanishing criteria
# ---------------------------------------------------------------------------


def check_vanzz_equivalence(ctx: ChainContext, ys) -> dict:
    """Chain-level vanishing versus existence of the symmetric unitary Lambda.

    (a) sum_mu (Y^{mu*} x Y^mu - Y^mu x Y^{mu*}) = 0 as a normalized chain;
    (b) the solved Lambda is symmetric and unitary.  The two verdicts must
    agree; the report carries both plus the agreement bit.
    """
    be = ctx.backend
    tol = 0.0 if be.exact else be.tol
    chain = TensorChain(ctx, 1, {})
    for mu in range(4):
        chain = chain + chain_from_slots(ctx, [ys.Ystar[mu], ys.Y[mu]])
        chain = chain - chain_from_slots(ctx, [ys.Y[mu], ys.Ystar[mu]])
    chain_zero = chain.is_zero()
    lam = ys.lam
    sym = max(be.residual(lam[a][b] - lam[b][a]) for a in range(4) for b in range(4))
    uni = 0.0
    for a in range(4):
        for b in range(4):
            acc = be.zero
            for c in range(4):
                acc = acc + lam[a][c] * lam[b][c].conjugate()
            uni = max(uni, be.residual(acc - (be.one if a == b else be.zero)))
    lambda_ok = sym <= tol and uni <= tol
    return {
        "chain_vanishes": chain_zero,
        "lambda_symmetric_unitary": lambda_ok,
        "agree": chain_zero == lambda_ok,
        "chain_terms": chain.n_terms(),
    }
