"""Quaternion linear algebra: multiplication matrices, embeddings, Mat helper.

Conventions fixed here and relied on everywhere else:

* basis e0 = 1, e1, e2, e3 with e_a e_b = -delta_ab + eps_abc e_c and
  eps_123 = +1 (so e1 e2 = e3);
* J+_a is the matrix of left multiplication by e_a on component columns,
  J-_a is minus the matrix of right multiplication by e_a.  Both families
  are real antisymmetric, mutually commuting, and each satisfies
  J_a J_b = -delta_ab + eps_abc J_c with the same eps orientation as the
  quaternions themselves.  (A popular closed formula for these matrices
  circulates with the eps term's sign flipped; that variant breaks the
  multiplication rule above, so we construct the matrices directly from
  the quaternion product and test the algebra, not the formula.)
"""

from __future__ import annotations

from .errors import CommutativityViolated
from .scalars import EXACT, Backend


def epsilon(a: int, b: int, c: int) -> int:
    """Levi-Civita symbol on {1,2,3} with eps(1,2,3) = +1."""
    if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        return 1
    if (a, b, c) in ((1, 3, 2), (3, 2, 1), (2, 1, 3)):
        return -1
    return 0


def quat_basis_product(a: int, b: int):
    """(coeff, index) of e_a * e_b in the e basis; coeff is a plain int."""
    if a == 0:
        return 1, b
    if b == 0:
        return 1, a
    if a == b:
        return -1, 0
    for c in range(1, 4):
        s = epsilon(a, b, c)
        if s:
            return s, c
    raise AssertionError("unreachable")


def quat_multiply(p, q):
    """Componentwise quaternion product of two 4-sequences.

    Works over any (possibly noncommutative) ring whose elements support
    + - *.  Order matters: component products are taken as p-part * q-part.
    """
    p0, p1, p2, p3 = p
    q0, q1, q2, q3 = q
    return (
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 + p2 * q0 + p3 * q1 - p1 * q3,
        p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1,
    )


def quat_conjugate(q):
    """e-conjugation only: q0 - q1 e1 - q2 e2 - q3 e3 (no component star)."""
    return (q[0], -q[1], -q[2], -q[3])


class Mat:
    """Small dense matrix over any ring with + - * (scalars or polynomials)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    @staticmethod
    def identity(n, one, zero):
        return Mat([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __add__(self, other):
        return Mat([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def scale(self, c):
        return Mat([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        assert k == k2
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.rows[i][0] * other.rows[0][j]
                for t in range(1, k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return Mat(out)

    def transpose(self):
        n, m = self.shape
        return Mat([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def map(self, fn):
        return Mat([[fn(a) for a in r] for r in self.rows])

    def dagger(self):
        """Conjugate transpose; entries star() if present, else conjugate()."""
        def adj(a):
            star = getattr(a, "star", None)
            return star() if star is not None else a.conjugate()
        return self.transpose().map(adj)

    def entries(self):
        for r in self.rows:
            yield from r

    def __eq__(self, other):
        if not isinstance(other, Mat) or self.shape != other.shape:
            return NotImplemented
        return all(a == b for a, b in zip(self.entries(), other.entries()))

    __hash__ = None  # mutable container

    def __repr__(self):
        return f"Mat({self.rows!r})"


def build_J(sign: str, a: int, backend: Backend = EXACT) -> Mat:
    """The quaternion multiplication matrix J(sign)_a for sign in '+-', a in 1..3.

    Column convention: column nu holds the components of e_a * e_nu for '+'
    (left multiplication) and of -(e_nu * e_a) for '-' (minus right
    multiplication).
    """
    if sign not in ("+", "-") or a not in (1, 2, 3):
        raise ValueError(f"build_J: bad arguments {sign!r}, {a!r}")
    zero, one = backend.zero, backend.one
    rows = [[zero] * 4 for _ in range(4)]
    for nu in range(4):
        if sign == "+":
            coeff, mu = quat_basis_product(a, nu)
        else:
            coeff, mu = quat_basis_product(nu, a)
            coeff = -coeff
        rows[mu][nu] = one if coeff == 1 else -one
    return Mat(rows)


def j_plus(backend: Backend = EXACT):
    """(J+_1, J+_2, J+_3)."""
    return tuple(build_J("+", a, backend) for a in (1, 2, 3))


def j_minus(backend: Backend = EXACT):
    return tuple(build_J("-", a, backend) for a in (1, 2, 3))


def embed_M2(q, i_unit):
    """Embed a quaternion (4-sequence) as a 2x2 matrix over the complexification.

    q = q0 + q1 e1 + q2 e2 + q3 e3 maps to
    [[q0 + i q1, q2 + i q3], [-q2 + i q3, q0 - i q1]];
    i_unit is the imaginary unit of the component coefficient domain
    (a scalar that components can be multiplied by).
    """
    q0, q1, q2, q3 = q
    return Mat([
        [q0 + q1 * i_unit, q2 + q3 * i_unit],
        [-q2 + q3 * i_unit, q0 - q1 * i_unit],
    ])


def embed_components(m: Mat, backend: Backend = EXACT):
    """Inverse of embed_M2: recover (q0, q1, q2, q3) from a 2x2 embedding.

    Uses q0 = (m00 + m11)/2 etc.; exact on the exact backend, which is what
    makes embed_M2 injective.
    """
    from fractions import Fraction

    half = backend.from_fraction(Fraction(1, 2))
    inv_i = -backend.i  # 1/i
    m00, m01 = m.rows[0]
    m10, m11 = m.rows[1]
    q0 = (m00 + m11) * half
    q1 = (m00 - m11) * half * inv_i
    q2 = (m01 - m10) * half
    q3 = (m01 + m10) * half * inv_i
    return q0, q1, q2, q3


def check_quaternion_matrix_relations(backend: Backend = EXACT) -> dict:
    """Verify the J-matrix algebra; returns a report dict.

    Checks, for all a, b in 1..3 and both signs:
    antisymmetry, J_a J_b = -delta_ab + eps_abc J_c, commutation of the two
    families, and the trace normalization -tr(J_a J_b)/4 = delta_ab.
    """
    plus, minus = j_plus(backend), j_minus(backend)
    zero, one = backend.zero, backend.one
    ident = Mat.identity(4, one, zero)
    fams = {"+": plus, "-": minus}
    failures = []
    max_res = 0.0

    def record(ok_mat, label):
        nonlocal max_res
        worst = max((backend.residual(e) for e in ok_mat.entries()), default=0.0)
        max_res = max(max_res, worst)
        if any(not backend.is_zero(e) for e in ok_mat.entries()):
            failures.append(label)

    for sign, fam in fams.items():
        for a in range(3):
            record(fam[a] + fam[a].transpose(), f"antisym J{sign}_{a + 1}")
            for b in range(3):
                prod = fam[a] @ fam[b]
                expect = ident.scale(-one) if a == b else zero_mat(backend)
                for c in range(3):
                    s = epsilon(a + 1, b + 1, c + 1)
                    if s:
                        expect = expect + fam[c].scale(one if s == 1 else -one)
                record(prod - expect, f"algebra J{sign}_{a + 1} J{sign}_{b + 1}")
                tr = sum_diag(prod)
                want = -(one + one + one + one) if a == b else zero
                diff = tr - want
                max_res = max(max_res, backend.residual(diff))
                if not backend.is_zero(diff):
                    failures.append(f"trace J{sign}_{a + 1} J{sign}_{b + 1}")
    for a in range(3):
        for b in range(3):
            comm = plus[a] @ minus[b] - minus[b] @ plus[a]
            record(comm, f"[J+_{a + 1}, J-_{b + 1}]")
    return {"passed": not failures, "failures": failures, "max_residual": max_res}


def zero_mat(backend: Backend, n: int = 4) -> Mat:
    return Mat([[backend.zero] * n for _ in range(n)])


def sum_diag(m: Mat):
    acc = m.rows[0][0]
    for i in range(1, m.shape[0]):
        acc = acc + m.rows[i][i]
    return acc


def check_commuting_family(mats, backend: Backend, label: str = "family"):
    """Raise CommutativityViolated if any pair in mats fails to commute."""
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            if j <= i:
                continue
            comm = a @ b - b @ a
            if any(not backend.is_zero(e) for e in comm.entries()):
                raise CommutativityViolated(f"{label}: members {i} and {j} do not commute")
