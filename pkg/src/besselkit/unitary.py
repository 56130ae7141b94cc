"""Unitary group elements over E and its residue rings.

Covers the special matrices of the U(2,1) x U(1,1) setup: the hermitian
forms, the embedding of the 2x2 group, the two-cell Bruhat decomposition
G = P u PJP with explicit witnesses, the regular representatives gamma(x),
the torus stabilizer h_1(w), h_2(w) of gamma(x)J, and the exact matrix
identities used to reduce double cosets.

Matrices are tuples of tuples of QuadNum (dense, exact); the same helpers
work verbatim over a ResidueRing via the `ResidueMat` shim.
"""

from __future__ import annotations

from fractions import Fraction

from .fieldarith import FieldContext, QuadNum

Mat = tuple  # tuple of row-tuples of QuadNum


# ---- basic matrix algebra over E ----------------------------------------


def mat(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def mat_mul(A: Mat, B: Mat) -> Mat:
    n, m, k = len(A), len(B[0]), len(B)
    return tuple(
        tuple(sum((A[i][t] * B[t][j] for t in range(1, k)), A[i][0] * B[0][j]) for j in range(m))
        for i in range(n)
    )


def mat_sub(A: Mat, B: Mat) -> Mat:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def conj_transpose(A: Mat) -> Mat:
    n = len(A)
    return tuple(tuple(A[j][i].conj() for j in range(n)) for i in range(n))


def identity(ctx: FieldContext, n: int) -> Mat:
    return tuple(
        tuple(ctx.one if i == j else ctx.zero for j in range(n)) for i in range(n)
    )


def scalar_mul(c, A: Mat) -> Mat:
    return tuple(tuple(c * x for x in row) for row in A)


def det(A: Mat):
    n = len(A)
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if n == 3:
        return (
            A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
        )
    raise ValueError("det implemented for sizes 2, 3")


def mat_inv(A: Mat) -> Mat:
    n = len(A)
    d = det(A)
    dinv = d.inverse()
    if n == 2:
        return mat([[A[1][1] * dinv, -A[0][1] * dinv], [-A[1][0] * dinv, A[0][0] * dinv]])
    cof = [[None] * 3 for _ in range(3)]
    idx = [(1, 2), (0, 2), (0, 1)]
    for i in range(3):
        for j in range(3):
            r0, r1 = idx[i]
            c0, c1 = idx[j]
            minor = A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0]
            cof[j][i] = minor if (i + j) % 2 == 0 else -minor
    return tuple(tuple(x * dinv for x in row) for row in cof)


# ---- hermitian forms and unitarity ---------------------------------------


def form_J(ctx: FieldContext, n: int = 3) -> Mat:
    """Antidiagonal hermitian form (3x3 for G, 2x2 for G')."""
    return tuple(
        tuple(ctx.one if i + j == n - 1 else ctx.zero for j in range(n)) for i in range(n)
    )


def form_J21(ctx: FieldContext) -> Mat:
    """diag(1,1,-1), the archimedean model of the form."""
    z, o = ctx.zero, ctx.one
    return mat([[o, z, z], [z, o, z], [z, z, -o]])


def is_unitary(g: Mat, J: Mat) -> bool:
    return mat_mul(mat_mul(conj_transpose(g), J), g) == J


# ---- the special matrices -------------------------------------------------


def embed_gprime(g2: Mat, ctx: FieldContext) -> Mat:
    """Embedding of U(W) into U(V): 2x2 [[a,b],[c,d]] (basis e_1, e_-1)
    goes to the 3x3 matrix fixing e_0."""
    (a, b), (c, d) = g2
    J2 = form_J(ctx, 2)
    if not is_unitary(g2, J2):
        raise ValueError("input is not unitary for antidiag(1,1)")
    z, o = ctx.zero, ctx.one
    return mat([[a, z, b], [z, o, z], [c, z, d]])


def n_upper(ctx: FieldContext, b: QuadNum, z: QuadNum) -> Mat:
    """Unipotent n(b,z); requires z + conj(z) = -b*conj(b)."""
    if z + z.conj() != -(b * b.conj()):
        raise ValueError("n(b,z) constraint z + zbar = -b bbar violated")
    zz, o = ctx.zero, ctx.one
    return mat([[o, b, z], [zz, o, -b.conj()], [zz, zz, o]])


def m_diag(ctx: FieldContext, alpha: QuadNum, beta: QuadNum) -> Mat:
    z = ctx.zero
    return mat([[alpha, z, z], [z, beta, z], [z, z, alpha.conj().inverse()]])


def gamma_of_x(ctx: FieldContext, x: QuadNum) -> Mat:
    """The regular representative gamma(x); unitary for J with (2,2) entry x."""
    xb = x.conj()
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    g = mat(
        [
            [
                (x * xb + 3 * xb - x + 1) * quarter,
                (1 + x) * half,
                ctx.elem(-half),
            ],
            [(x + 1) * (xb - 1) * half, x, -ctx.one],
            [-((1 - x) * (1 - xb)) * half, 1 - x, ctx.one],
        ]
    )
    return g


def is_norm_one(x: QuadNum) -> bool:
    return x.norm() == 1


def gamma_type(x: QuadNum) -> str:
    """'unipotent' when x has norm 1 (stabilizer Delta N'), else 'regular'."""
    return "unipotent" if is_norm_one(x) else "regular"


# ---- Bruhat classification -----------------------------------------------


def bruhat_classify(g: Mat, ctx: FieldContext):
    """Classify g in G(Q) into P or PJP; for PJP return the unique (n, p)
    with g = n J p."""
    J = form_J(ctx, 3)
    if not is_unitary(g, J):
        raise ValueError("bruhat_classify expects a unitary matrix")
    z = ctx.zero
    if g[1][0] == z and g[2][0] == z and g[2][1] == z:
        return ("P", None, None)
    if not g[2][0]:
        raise ValueError("matrix in neither cell: not unitary for J?")
    # solve n(b, t) with (n^{-1} g) in JP
    b = -(g[1][0] / g[2][0]).conj()
    tbar = (b * g[1][0] - g[0][0]) / g[2][0]
    t = tbar.conj()
    n = n_upper(ctx, b, t)
    p = mat_mul(J, mat_mul(mat_inv(n), g))
    return ("PJP", n, p)


# ---- the stabilizer of gamma(x) J ----------------------------------------


def s_of_x(x: QuadNum) -> QuadNum:
    return (x - 1) * (x.conj() + 1) * Fraction(1, 2)


def stabilizer_point(ctx: FieldContext, x: QuadNum, w: QuadNum):
    """The pair (h1(w), h2(w)) in G' x G' stabilizing gamma(x)J.

    x must be regular (norm != 1) and w of norm 1.  Returned as 2x2
    matrices in the basis (e_1, e_-1), unitary for antidiag(1,1), with
    det h1 = det h2 = w and embed(h1)^{-1} gamma(x) J embed(h2) = gamma(x) J.
    """
    if is_norm_one(x):
        raise ValueError("x has norm 1: stabilizer is the unipotent Delta N'")
    if not is_norm_one(w):
        raise ValueError("w must have norm 1")
    sx = s_of_x(x)
    sxb = s_of_x(x.conj())
    den = sx + sxb  # equals x*xbar - 1
    one = ctx.one
    u = one - w
    # h1 via the y-parametrization y = (w-1)/(x xbar - 1) of the stabilizer
    # conic; its off-diagonal entries (1+x)(1+xbar)/4 and (1-x)(1-xbar) are
    # forced by the fixed-point identity (the torus-scaled variant fails it).
    h1 = mat(
        [
            [one - u * sx / den, -u * (1 + x) * (1 + x.conj()) * Fraction(1, 4) / den],
            [-u * (1 - x) * (1 - x.conj()) / den, one - u * sxb / den],
        ]
    )
    h2 = mat(
        [
            [one - u * sxb / den, -u * sx * sxb / den],
            [-u / den, one - u * sx / den],
        ]
    )
    return h1, h2


def embed_stab(ctx: FieldContext, h: Mat) -> Mat:
    """3x3 realization of a stabilizer 2x2 matrix (same slot layout as
    embed_gprime but without the unitarity precondition)."""
    (a, b), (c, d) = h
    z, o = ctx.zero, ctx.one
    return mat([[a, z, b], [z, o, z], [c, z, d]])


# ---- exact double-coset identities ----------------------------------------


def verify_identity(ctx: FieldContext, ident, **kw) -> bool:
    """Exact check of the matrix identities used in the double-coset
    reduction.  ident in {36, 38, 39, 42}; see each branch for inputs."""
    if ident == 36:
        return _identity_36(ctx, kw["c"])
    if ident == 38:
        return _identity_38(ctx, kw["c"])
    if ident == 39:
        return _identity_39(ctx, kw["x"])
    if ident == 42:
        return _identity_42(ctx, kw["x2"], kw["alpha"])
    raise ValueError(f"unknown identity {ident}")


def _nmat(ctx, a11, a12, a13, a22, a23):
    z, o = ctx.zero, ctx.one
    return mat([[a11, a12, a13], [z, a22, a23], [z, z, o]])


def _identity_36(ctx, c: QuadNum) -> bool:
    if c.trace() != -1:
        raise ValueError("identity (36) requires c + cbar = -1")
    J = form_J(ctx, 3)
    o = ctx.one
    cb = c.conj()
    lhs = mat_mul(J, mat_mul(_nmat(ctx, o, o, c, o, -o), J))
    left = _nmat(ctx, o, -1 / (1 + c), -1 / (1 + cb), o, (1 + cb).inverse())
    z = ctx.zero
    right = mat(
        [
            [c, o, o],
            [z, cb / (1 + cb), -1 / (1 + cb)],
            [z, z, -1 / (1 + c)],
        ]
    )
    return lhs == mat_mul(left, mat_mul(J, right))


def _identity_38(ctx, c: QuadNum) -> bool:
    if (c + c.conj() + 1) != 0:
        raise ValueError("identity (38) requires c + cbar + 1 = 0")
    J = form_J(ctx, 3)
    o, z = ctx.one, ctx.zero
    cb = c.conj()
    lhs = mat_mul(J, mat_mul(_nmat(ctx, o, o, c, o, -o), J))
    left = mat(
        [
            [cb.inverse(), -c.inverse(), o],
            [z, -cb / c, -o],
            [z, z, c],
        ]
    )
    right = _nmat(ctx, o, c.inverse(), c.inverse(), o, -cb.inverse())
    return lhs == mat_mul(left, mat_mul(J, right))


def _identity_39(ctx, x: QuadNum) -> bool:
    J = form_J(ctx, 3)
    o = ctx.one
    xb = x.conj()
    half = Fraction(1, 2)
    lhs = mat_mul(gamma_of_x(ctx, x), J)
    left = _nmat(ctx, o, o, ctx.elem(-half), o, -o)
    right = _nmat(ctx, o, 1 - x, -((1 - x) * (1 - xb)) * half, o, xb - 1)
    return lhs == mat_mul(left, mat_mul(J, right))


def _identity_42(ctx, x2: QuadNum, alpha: QuadNum) -> bool:
    """gamma(x1) J = M1 J n_v gamma(x2) J M2 with x1 = alpha x2; also checks
    that the derived g1, g2 land in G'(Q)."""
    if not is_norm_one(alpha) or alpha == 1:
        raise ValueError("identity (42) requires alpha of norm 1, alpha != 1")
    beta = hilbert90_for(alpha)
    # alpha = -c/cbar with c = -1/2 + v, v = (a'/2b') sqrt(-D)
    ap, bp = beta.re, beta.im
    if bp == 0:
        raise ValueError("degenerate Hilbert-90 datum")
    vprime = ap / (2 * bp)
    v = ctx.elem(0, vprime)
    c = ctx.elem(Fraction(-1, 2)) + v
    cb = c.conj()
    a = -c
    b = -cb / c
    u = -(ctx.elem(Fraction(1, 2)) + cb) / (c * cb)
    x1 = alpha * x2
    d = ((alpha - 1) * x2 + (alpha.conj() - 1) * x2.conj()) * Fraction(1, 2) - x2.conj() / c
    J = form_J(ctx, 3)
    z, o = ctx.zero, ctx.one
    M1 = mat([[a, z, a * u], [z, alpha, z], [z, z, a.conj().inverse()]])
    Nv = mat([[o, z, v], [z, o, z], [z, z, o]])
    M2 = mat([[b, z, b * d], [z, o, z], [z, z, b.conj().inverse()]])
    lhs = mat_mul(gamma_of_x(ctx, x1), J)
    rhs = mat_mul(M1, mat_mul(J, mat_mul(Nv, mat_mul(mat_mul(gamma_of_x(ctx, x2), J), M2))))
    if lhs != rhs:
        return False
    # g1, g2 of the reduction lie in G'(Q): unitary and fixing e_0
    ai = alpha.inverse()
    G1 = mat_mul(
        mat([[ai * a, z, ai * a * u], [z, o, z], [z, z, ai * a.conj().inverse()]]),
        mat_mul(J, Nv),
    )
    G2 = mat_mul(J, mat_mul(M2, J))
    J3 = form_J(ctx, 3)
    for G in (G1, G2):
        if not is_unitary(G, J3):
            return False
        if G[0][1] or G[1][0] or G[1][2] or G[2][1] or G[1][1] != o:
            return False
    return True


def hilbert90_for(w: QuadNum) -> QuadNum:
    from .fieldarith import hilbert90

    return hilbert90(w)


# ---- residue-ring matrices -------------------------------------------------


class ResidueMat:
    """Thin namespace of matrix helpers over a ResidueRing."""

    def __init__(self, ring):
        self.R = ring

    def mat_mul(self, A, B):
        R = self.R
        n, m, k = len(A), len(B[0]), len(B)
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                s = R.mul(A[i][0], B[0][j])
                for t in range(1, k):
                    s = R.add(s, R.mul(A[i][t], B[t][j]))
                row.append(s)
            out.append(tuple(row))
        return tuple(out)

    def conj_transpose(self, A):
        R = self.R
        n = len(A)
        return tuple(tuple(R.conj(A[j][i]) for j in range(n)) for i in range(n))

    def identity(self, n):
        R = self.R
        return tuple(tuple(R.one if i == j else R.zero for j in range(n)) for i in range(n))

    def form_J(self, n):
        R = self.R
        return tuple(tuple(R.one if i + j == n - 1 else R.zero for j in range(n)) for i in range(n))

    def is_unitary(self, A, J=None):
        if J is None:
            J = self.form_J(len(A))
        return self.mat_mul(self.mat_mul(self.conj_transpose(A), J), A) == J

    def det(self, A):
        R = self.R
        if len(A) == 2:
            return R.sub(R.mul(A[0][0], A[1][1]), R.mul(A[0][1], A[1][0]))
        s = R.zero
        for sgn, (i, j, k) in (
            (1, (0, 1, 2)), (1, (1, 2, 0)), (1, (2, 0, 1)),
            (-1, (0, 2, 1)), (-1, (2, 1, 0)), (-1, (1, 0, 2)),
        ):
            t = R.mul(R.mul(A[0][i], A[1][j]), A[2][k])
            s = R.add(s, t if sgn == 1 else R.neg(t))
        return s

    def reduce(self, A):
        R = self.R
        return tuple(tuple(R.reduce(x) for x in row) for row in A)
