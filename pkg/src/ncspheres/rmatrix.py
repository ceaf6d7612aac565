"""Deformation tensors R^{lambda alpha}_{beta mu} and their admissibility checks.

The tensor drives the exchange relation x1^lambda x2^alpha =
R^{la}_{bm} x2^beta x1^mu.  Admissibility is a bundle of exact conditions:
reality (conjugate contraction is the identity), a four-term symmetry chain,
two quadratic exchange conditions, and involutivity plus the braid relation
for the big 64x64 exchange operator on all eight generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    CommutativityViolated,
    MalformedNumber,
    NormalizationViolated,
    ParamsNotOnSphere,
)
from .quatlin import Mat, j_plus
from .scalars import EXACT, Backend, parse_rational

N = 4  # generators per family


@dataclass(frozen=True)
class DeformParams:
    """Point (u0, u1, u2) on the real 2-sphere selecting a deformation."""

    u0: Fraction
    u1: Fraction
    u2: Fraction

    @staticmethod
    def parse(text: str) -> "DeformParams":
        parts = text.split(",")
        if len(parts) != 3:
            raise MalformedNumber(f"expected 'u0,u1,u2', got {text!r}")
        u0, u1, u2 = (parse_rational(p) for p in parts)
        return DeformParams(u0, u1, u2)

    def validate(self, backend: Backend = EXACT) -> None:
        s = self.u0 * self.u0 + self.u1 * self.u1 + self.u2 * self.u2
        if backend.exact:
            if s != 1:
                raise ParamsNotOnSphere(f"(u0,u1,u2)={self} has norm^2 {s}")
        else:
            if abs(float(s) - 1.0) > backend.tol:
                raise ParamsNotOnSphere(f"(u0,u1,u2)={self} has norm^2 {float(s)}")

    def scalars(self, backend: Backend):
        return tuple(backend.from_fraction(u) for u in (self.u0, self.u1, self.u2))

    def label(self) -> str:
        return f"{self.u0},{self.u1},{self.u2}"

    def __str__(self):
        return f"({self.u0}, {self.u1}, {self.u2})"


class RTensor:
    """Dense 4x4x4x4 coefficient tensor with a cached nonzero list."""

    __slots__ = ("data", "backend", "_items")

    def __init__(self, data, backend: Backend):
        self.data = data
        self.backend = backend
        self._items = None

    def entry(self, lam, alpha, beta, mu):
        return self.data[lam][alpha][beta][mu]

    def items(self):
        """Nonzero entries as ((lam, alpha, beta, mu), coeff)."""
        if self._items is None:
            out = []
            for lam in range(N):
                for alpha in range(N):
                    for beta in range(N):
                        for mu in range(N):
                            c = self.data[lam][alpha][beta][mu]
                            if not self.backend.is_zero(c):
                                out.append(((lam, alpha, beta, mu), c))
            self._items = out
        return self._items

    def conj_entry(self, lam, alpha, beta, mu):
        return self.data[lam][alpha][beta][mu].conjugate()

    def __eq__(self, other):
        if not isinstance(other, RTensor):
            return NotImplemented
        return all(
            self.backend.eq(self.data[a][b][c][d], other.data[a][b][c][d])
            for a in range(N) for b in range(N) for c in range(N) for d in range(N)
        )

    __hash__ = None


def _zero4(backend: Backend):
    return [[[[backend.zero for _ in range(N)] for _ in range(N)]
             for _ in range(N)] for _ in range(N)]


def build_R_quaternionic(params: DeformParams, backend: Backend = EXACT) -> RTensor:
    """R = u0 * flip-identity + i * J+_1 (x) (u1 J+_1 + u2 J+_2).

    Index placement: R[lam][alpha][beta][mu] multiplies x2^beta x1^mu in the
    rewrite of x1^lam x2^alpha, so the first J factor carries (lam, mu) and
    the second (alpha, beta).
    """
    params.validate(backend)
    u0, u1, u2 = params.scalars(backend)
    J1, J2, _ = j_plus(backend)
    D = J1.scale(u1) + J2.scale(u2)
    i = backend.i
    data = _zero4(backend)
    for lam in range(N):
        for alpha in range(N):
            for beta in range(N):
                for mu in range(N):
                    val = backend.zero
                    if lam == mu and alpha == beta:
                        val = val + u0
                    val = val + i * J1[lam, mu] * D[alpha, beta]
                    data[lam][alpha][beta][mu] = val
    return RTensor(data, backend)


@dataclass
class ABCDForm:
    """Sum-of-tensors presentation R-hat = sum A_r (x) B_r + i sum C_a (x) D_a."""

    A: list
    B: list
    C: list
    D: list
    backend: Backend = field(default=EXACT)


def check_abcd_form(form: ABCDForm) -> dict:
    """Symmetry, antisymmetry, commuting families, and normalization.

    Raises CommutativityViolated / NormalizationViolated on failure and
    returns a report dict on success.
    """
    be = form.backend

    def is_sym(m, s):
        diff = m - m.transpose().scale(s)
        return all(be.is_zero(e) for e in diff.entries())

    for r, m in enumerate(form.A):
        if not is_sym(m, be.one):
            raise NormalizationViolated(f"A[{r}] is not symmetric")
    for r, m in enumerate(form.B):
        if not is_sym(m, be.one):
            raise NormalizationViolated(f"B[{r}] is not symmetric")
    for a, m in enumerate(form.C):
        if not is_sym(m, -be.one):
            raise NormalizationViolated(f"C[{a}] is not antisymmetric")
    for a, m in enumerate(form.D):
        if not is_sym(m, -be.one):
            raise NormalizationViolated(f"D[{a}] is not antisymmetric")

    def commuting(mats, label):
        for i, x in enumerate(mats):
            for j, y in enumerate(mats):
                if j <= i:
                    continue
                comm = x @ y - y @ x
                if any(not be.is_zero(e) for e in comm.entries()):
                    raise CommutativityViolated(f"{label}[{i}] vs {label}[{j}]")

    commuting(list(form.A) + list(form.C), "first-slot A/C")
    commuting(list(form.B) + list(form.D), "second-slot B/D")

    # sum_{r,s} A_r A_s (x) B_r B_s + sum_{a,b} C_a C_b (x) D_a D_b = 1 (x) 1
    n1 = form.A[0].shape[0] if form.A else form.C[0].shape[0]
    n2 = form.B[0].shape[0] if form.B else form.D[0].shape[0]
    acc = [[[[be.zero for _ in range(n2)] for _ in range(n2)]
            for _ in range(n1)] for _ in range(n1)]
    for r in range(len(form.A)):
        for s in range(len(form.A)):
            AA = form.A[r] @ form.A[s]
            BB = form.B[r] @ form.B[s]
            for lam in range(n1):
                for mu in range(n1):
                    if be.is_zero(AA[lam, mu]):
                        continue
                    for al in range(n2):
                        for bt in range(n2):
                            acc[lam][mu][al][bt] = acc[lam][mu][al][bt] + AA[lam, mu] * BB[al, bt]
    for a in range(len(form.C)):
        for b in range(len(form.C)):
            CC = form.C[a] @ form.C[b]
            DD = form.D[a] @ form.D[b]
            for lam in range(n1):
                for mu in range(n1):
                    if be.is_zero(CC[lam, mu]):
                        continue
                    for al in range(n2):
                        for bt in range(n2):
                            acc[lam][mu][al][bt] = acc[lam][mu][al][bt] + CC[lam, mu] * DD[al, bt]
    worst = 0.0
    for lam in range(n1):
        for mu in range(n1):
            for al in range(n2):
                for bt in range(n2):
                    want = be.one if (lam == mu and al == bt) else be.zero
                    diff = acc[lam][mu][al][bt] - want
                    worst = max(worst, be.residual(diff))
                    if not be.is_zero(diff):
                        raise NormalizationViolated(
                            f"normalization fails at ({lam},{mu},{al},{bt})")
    return {"passed": True, "max_residual": worst}


def build_R_general(form: ABCDForm) -> RTensor:
    """Assemble the tensor from an ABCD form after validating it."""
    check_abcd_form(form)
    be = form.backend
    i = be.i
    data = _zero4(be)
    for lam in range(N):
        for alpha in range(N):
            for beta in range(N):
                for mu in range(N):
                    val = be.zero
                    for r in range(len(form.A)):
                        val = val + form.A[r][lam, mu] * form.B[r][alpha, beta]
                    for a in range(len(form.C)):
                        val = val + i * form.C[a][lam, mu] * form.D[a][alpha, beta]
                    data[lam][alpha][beta][mu] = val
    return RTensor(data, be)


def two_deformation_form(u0, u_vec, v_vec=(1, 0, 0), backend: Backend = EXACT) -> ABCDForm:
    """The one-A one-C family: A={1}, B={u0 1}, C={J+_v}, D={sum u_a J+_a}.

    v_vec must be a unit 3-vector; the gauge-fixed case v = (1,0,0) matches
    build_R_quaternionic.
    """
    vv = sum(Fraction(v) * Fraction(v) for v in v_vec)
    if vv != 1:
        raise ParamsNotOnSphere(f"|v|^2 = {vv} != 1")
    Jp = j_plus(backend)
    one, zero = backend.one, backend.zero
    ident = Mat.identity(N, one, zero)
    C = Jp[0].scale(backend.from_fraction(Fraction(v_vec[0])))
    for a in (1, 2):
        C = C + Jp[a].scale(backend.from_fraction(Fraction(v_vec[a])))
    D = Jp[0].scale(backend.from_fraction(Fraction(u_vec[0])))
    for a in (1, 2):
        D = D + Jp[a].scale(backend.from_fraction(Fraction(u_vec[a])))
    B = ident.scale(backend.from_fraction(Fraction(u0)))
    return ABCDForm(A=[ident], B=[B], C=[C], D=[D], backend=backend)


# ---------------------------------------------------------------------------
# condition checks
# ---------------------------------------------------------------------------


@dataclass
class ConditionReport:
    name: str
    passed: bool
    max_residual: float
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed,
             "max_residual": 0.0 if (self.passed and self.max_residual == 0) else self.max_residual}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def check_reality(R: RTensor) -> ConditionReport:
    """conj(R)^{la}_{bm} R^{mb}_{gn} = delta^l_n delta^a_g."""
    be = R.backend
    worst, witness = 0.0, None
    for lam in range(N):
        for alpha in range(N):
            for gam in range(N):
                for nu in range(N):
                    acc = be.zero
                    for beta in range(N):
                        for mu in range(N):
                            acc = acc + R.conj_entry(lam, alpha, beta, mu) * R.entry(mu, beta, gam, nu)
                    want = be.one if (lam == nu and alpha == gam) else be.zero
                    diff = acc - want
                    worst = max(worst, be.residual(diff))
                    if not be.is_zero(diff) and witness is None:
                        witness = f"indices (lam,alpha,gam,nu)=({lam},{alpha},{gam},{nu})"
    return ConditionReport("reality", witness is None, worst, witness)


def invert_16x16(R: RTensor):
    """Contraction inverse of R viewed as a 16x16 matrix over its backend."""
    be = R.backend
    idx = [(b, m) for b in range(N) for m in range(N)]
    pos = {p: k for k, p in enumerate(idx)}
    rows = [[R.entry(lam, alpha, beta, mu) for (beta, mu) in idx]
            for (lam, alpha) in idx]
    n = 16
    aug = [rows[i] + [be.one if i == j else be.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        best = -1.0
        for r in range(col, n):
            mag = be.residual(aug[r][col])
            if not be.is_zero(aug[r][col]) and mag > best:
                piv, best = r, mag
        if piv is None:
            raise ZeroDivisionError("R tensor is singular as a 16x16 matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = (aug[col][col].inverse() if be.exact else 1.0 / aug[col][col])
        aug[col] = [inv * v for v in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if be.is_zero(f):
                continue
            aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv_rows = [row[n:] for row in aug]

    def rinv(beta, mu, lam, alpha):
        return inv_rows[pos[(beta, mu)]][pos[(lam, alpha)]]

    return rinv


def check_symmetry_chain(R: RTensor) -> ConditionReport:
    """R^{lb}_{am} = R^{ma}_{bl} = conj(R^{mb}_{al}) = (R^-1)^{bm}_{la}."""
    be = R.backend
    rinv = invert_16x16(R)
    worst, witness = 0.0, None
    for lam in range(N):
        for beta in range(N):
            for alpha in range(N):
                for mu in range(N):
                    v = R.entry(lam, beta, alpha, mu)
                    others = (
                        ("exchange", R.entry(mu, alpha, beta, lam)),
                        ("conjugate", R.conj_entry(mu, beta, alpha, lam)),
                        ("inverse", rinv(beta, mu, lam, alpha)),
                    )
                    for tag, w in others:
                        diff = v - w
                        worst = max(worst, be.residual(diff))
                        if not be.is_zero(diff) and witness is None:
                            witness = f"{tag} at ({lam},{beta},{alpha},{mu})"
    return ConditionReport("symmetry_chain", witness is None, worst, witness)


def check_quadratic_1(R: RTensor) -> ConditionReport:
    """R^{lb}_{ar} R^{rd}_{gm} = R^{ld}_{gr} R^{rb}_{am} (contraction over r)."""
    be = R.backend
    worst, witness = 0.0, None
    for lam in range(N):
        for beta in range(N):
            for alpha in range(N):
                for delta in range(N):
                    for gam in range(N):
                        for mu in range(N):
                            lhs = be.zero
                            rhs = be.zero
                            for rho in range(N):
                                lhs = lhs + R.entry(lam, beta, alpha, rho) * R.entry(rho, delta, gam, mu)
                                rhs = rhs + R.entry(lam, delta, gam, rho) * R.entry(rho, beta, alpha, mu)
                            diff = lhs - rhs
                            worst = max(worst, be.residual(diff))
                            if not be.is_zero(diff) and witness is None:
                                witness = f"({lam},{beta},{alpha},{delta},{gam},{mu})"
    return ConditionReport("quadratic_1", witness is None, worst, witness)


def check_quadratic_2(R: RTensor) -> ConditionReport:
    """R^{lb}_{gn} R^{mg}_{ar} = R^{mb}_{gr} R^{lg}_{an} (contraction over g)."""
    be = R.backend
    worst, witness = 0.0, None
    for lam in range(N):
        for beta in range(N):
            for nu in range(N):
                for mu in range(N):
                    for alpha in range(N):
                        for rho in range(N):
                            lhs = be.zero
                            rhs = be.zero
                            for gam in range(N):
                                lhs = lhs + R.entry(lam, beta, gam, nu) * R.entry(mu, gam, alpha, rho)
                                rhs = rhs + R.entry(mu, beta, gam, rho) * R.entry(lam, gam, alpha, nu)
                            diff = lhs - rhs
                            worst = max(worst, be.residual(diff))
                            if not be.is_zero(diff) and witness is None:
                                witness = f"({lam},{beta},{nu},{mu},{alpha},{rho})"
    return ConditionReport("quadratic_2", witness is None, worst, witness)


def build_BigR(R: RTensor) -> dict:
    """Exchange operator on all 8 generators as sparse rows.

    Returns {(a, b): [((c, d), coeff), ...]} meaning
    x^a x^b = sum coeff * x^c x^d.  Within-family blocks are the flip;
    cross blocks carry R and conj(R).
    """
    be = R.backend
    rows = {}
    for a in range(8):
        for b in range(8):
            if (a < N) == (b < N):
                rows[(a, b)] = [((b, a), be.one)]
            elif a < N:                       # x1^lam x2^alpha
                lam, alpha = a, b - N
                ents = []
                for beta in range(N):
                    for mu in range(N):
                        c = R.entry(lam, alpha, beta, mu)
                        if not be.is_zero(c):
                            ents.append(((beta + N, mu), c))
                rows[(a, b)] = ents
            else:                             # x2^alpha x1^lam
                alpha, lam = a - N, b
                ents = []
                for beta in range(N):
                    for mu in range(N):
                        c = R.conj_entry(lam, alpha, beta, mu)
                        if not be.is_zero(c):
                            ents.append(((mu, beta + N), c))
                rows[(a, b)] = ents
    return rows


def _compose_rows(first: dict, second: dict, be: Backend) -> dict:
    """Row map of (second after first): keys -> list of (key, coeff)."""
    out = {}
    for key, ents in first.items():
        acc = {}
        for mid, c in ents:
            for fin, d in second[mid]:
                acc[fin] = acc.get(fin, be.zero) + c * d
        out[key] = [(k, v) for k, v in acc.items() if not be.is_zero(v)]
    return out


def check_involutive(R: RTensor) -> ConditionReport:
    """BigR squared is the identity on the 64-dimensional degree-2 space."""
    be = R.backend
    rows = build_BigR(R)
    sq = _compose_rows(rows, rows, be)
    worst, witness = 0.0, None
    for key in rows:
        acc = dict(sq.get(key, ()))
        for other, c in list(acc.items()):
            want = be.one if other == key else be.zero
            diff = c - want
            worst = max(worst, be.residual(diff))
            if not be.is_zero(diff) and witness is None:
                witness = f"{key} -> {other}"
        if key not in acc:
            worst = max(worst, 1.0)
            if witness is None:
                witness = f"{key} missing diagonal"
    return ConditionReport("involutive", witness is None, worst, witness)


def _lift(rows: dict, slot: int, be: Backend) -> dict:
    """Lift the 2-site operator to 3 sites, acting on (slot, slot+1)."""
    out = {}
    for a in range(8):
        for b in range(8):
            for c in range(8):
                key = (a, b, c)
                if slot == 0:
                    out[key] = [((d, e, c), coeff) for (d, e), coeff in rows[(a, b)]]
                else:
                    out[key] = [((a, d, e), coeff) for (d, e), coeff in rows[(b, c)]]
    return out


def check_yang_baxter(R: RTensor) -> ConditionReport:
    """(BigR x 1)(1 x BigR)(BigR x 1) = (1 x BigR)(BigR x 1)(1 x BigR)."""
    be = R.backend
    rows = build_BigR(R)
    r01 = _lift(rows, 0, be)
    r12 = _lift(rows, 1, be)
    lhs = _compose_rows(_compose_rows(r01, r12, be), r01, be)
    rhs = _compose_rows(_compose_rows(r12, r01, be), r12, be)
    worst, witness = 0.0, None
    for key in lhs:
        la = dict(lhs[key])
        rb = dict(rhs.get(key, ()))
        for fin in set(la) | set(rb):
            diff = la.get(fin, be.zero) - rb.get(fin, be.zero)
            worst = max(worst, be.residual(diff))
            if not be.is_zero(diff) and witness is None:
                witness = f"{key} -> {fin}"
    return ConditionReport("yang_baxter", witness is None, worst, witness)


def check_all_conditions(R: RTensor) -> list:
    """All admissibility checks in a fixed order."""
    return [
        check_reality(R),
        check_symmetry_chain(R),
        check_quadratic_1(R),
        check_quadratic_2(R),
        check_involutive(R),
        check_yang_baxter(R),
    ]
