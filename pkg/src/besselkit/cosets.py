"""Double-coset atlases for U(2,1) and U(1,1) over Z_p.

Enumerates the finite unitary groups G(Z/p^m), builds the explicit coset
representative families (Iwahori decomposition of the maximal compact,
Iwahori cells I w A_n I, merged Cartan cells K A_n K, Hecke-cell and
old-form coset spaces) and verifies disjointness and covering by brute
force over residue rings / exact p-adic valuations.

Measures are normalized by mu(G(Z_p)) = 1 so that mu(I_p) = 1/(p^3+1),
mu(I'_p) = 1/(p+1) and mu(I'_p(1)) = 1/(p^2-1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fieldarith import FieldContext, QuadNum, field, vp_frac, vp_int, INF
from .unitary import form_J, gamma_of_x, identity, is_unitary, mat, mat_inv, mat_mul

# ---- cell words and one-parameter subgroups --------------------------------

CELLS3 = ("1", "J", "A", "JA", "AJ", "JAJ")
CELLS2 = ("1", "J", "A", "JA", "AJ", "JAJ")


@dataclass(frozen=True)
class CellWord:
    """Iwahori double-coset label w with its exponent lambda(w)."""

    word: str  # one of '1','J','A','JA','AJ','JAJ'
    n: int = 0
    size: int = 3

    @property
    def lam(self) -> int:
        n = self.n
        if self.size == 3:
            table = {"1": 0, "J": 3, "A": 4 * n, "JA": 4 * n - 3, "AJ": 4 * n + 3, "JAJ": 4 * n}
        else:
            table = {"1": 0, "J": 1, "A": 2 * n, "JA": 2 * n - 1, "AJ": 2 * n + 1, "JAJ": 2 * n}
        return table[self.word]


def lambda_table(size: int, n: int) -> dict:
    return {w: CellWord(w, n, size).lam for w in ("A", "JA", "AJ", "JAJ")}


def a_matrix(ctx: FieldContext, n: int, size: int = 3):
    """A_n = diag(p^n, 1, p^{-n}) (3x3) or diag(p^n, p^{-n}) (2x2) -- the
    prime is supplied on use, so this returns a factory."""

    def build(p: int):
        z, o = ctx.zero, ctx.one
        pn = ctx.elem(Fraction(p) ** n)
        pm = ctx.elem(Fraction(1, p**n) if n >= 0 else Fraction(p ** (-n)))
        if size == 3:
            return mat([[pn, z, z], [z, o, z], [z, z, pm]])
        return mat([[pn, z], [z, pm]])

    return build


def An(ctx: FieldContext, p: int, n: int, size: int = 3):
    return a_matrix(ctx, n, size)(p)


# ---- integer-coded residue arithmetic (fast path) --------------------------


class _Ring:
    """O_E/p^m with elements coded as x*mod + y for coordinates (x, y) in the
    integral basis {1, omega}."""

    def __init__(self, ctx: FieldContext, p: int, m: int):
        self.ctx, self.p, self.m = ctx, p, m
        self.mod = p**m
        if ctx.D % 4 == 3:
            self.s, self.t = 1, -(1 + ctx.D) // 4
        else:
            self.s, self.t = 0, -ctx.D

    def enc(self, x: int, y: int) -> int:
        return (x % self.mod) * self.mod + (y % self.mod)

    def dec(self, a: int):
        return divmod(a, self.mod)

    def add(self, a, b):
        mod = self.mod
        return ((a // mod + b // mod) % mod) * mod + ((a + b) % mod)

    def sub(self, a, b):
        mod = self.mod
        return ((a // mod - b // mod) % mod) * mod + ((a - b) % mod)

    def mul(self, a, b):
        mod = self.mod
        x1, y1 = divmod(a, mod)
        x2, y2 = divmod(b, mod)
        yy = y1 * y2
        return ((x1 * x2 + self.t * yy) % mod) * mod + ((x1 * y2 + y1 * x2 + self.s * yy) % mod)

    def conj(self, a):
        mod = self.mod
        x, y = divmod(a, mod)
        return ((x + self.s * y) % mod) * mod + ((-y) % mod)

    def norm_int(self, a) -> int:
        return self.mul(a, self.conj(a)) // self.mod

    def is_unit(self, a) -> bool:
        return self.norm_int(a) % self.p != 0

    def reduce_quadnum(self, z: QuadNum) -> int:
        x, y = self.ctx.omega_coords(z)
        mod = self.mod
        xi = x.numerator * pow(x.denominator, -1, mod) % mod
        yi = y.numerator * pow(y.denominator, -1, mod) % mod
        return xi * mod + yi

    def elements(self):
        return range(self.mod * self.mod)

    def units(self):
        return [a for a in self.elements() if self.is_unit(a)]


def _rmat_mul(R: _Ring, A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = R.mul(Ai[0], B[0][j])
            for tt in range(1, k):
                s = R.add(s, R.mul(Ai[tt], B[tt][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def _rmat_conj_t(R: _Ring, A):
    n = len(A)
    return tuple(tuple(R.conj(A[j][i]) for j in range(n)) for i in range(n))


def _rmat_det(R: _Ring, A):
    if len(A) == 2:
        return R.sub(R.mul(A[0][0], A[1][1]), R.mul(A[0][1], A[1][0]))
    s = 0
    for sgn, (i, j, k) in (
        (1, (0, 1, 2)), (1, (1, 2, 0)), (1, (2, 0, 1)),
        (-1, (0, 2, 1)), (-1, (2, 1, 0)), (-1, (1, 0, 2)),
    ):
        t = R.mul(R.mul(A[0][i], A[1][j]), A[2][k])
        s = R.add(s, t if sgn == 1 else R.sub(0, t))
    return s


# ---- group enumeration ------------------------------------------------------


@lru_cache(maxsize=16)
def enumerate_group(D: int, p: int, m: int, size: int, budget: int = 10**8):
    """All matrices over O_E/p^m unitary for the antidiagonal form.

    Returns (elements, ring).  Elements are tuples of tuples of ring codes.
    Enumeration is by hyperbolic-pair construction for 3x3 (m=1) and by
    Lie-algebra fiber lifting for m > 1; guarded by `budget` candidates.
    """
    ctx = field(D)
    place = ctx.classify_place(p)
    if place.kind != "inert":
        raise ValueError("enumerate_group models the inert residue ring")
    R = _Ring(ctx, p, m)
    if m == 1:
        elems = _enumerate_level1(R, size, budget)
    else:
        base, _ = enumerate_group(D, p, m - 1, size, budget)
        elems = _lift_level(R, _Ring(ctx, p, m - 1), base, size, budget)
    return elems, R


def group_order(D: int, p: int, m: int, size: int, special: bool = False) -> int:
    elems, R = enumerate_group(D, p, m, size)
    if not special:
        return len(elems)
    one = R.enc(1, 0)
    return sum(1 for g in elems if _rmat_det(R, g) == one)


def _herm(R: _Ring, u, v):
    """<u, v> = conj(v)^t J u for the antidiagonal J."""
    n = len(u)
    s = 0
    for i in range(n):
        s = R.add(s, R.mul(u[i], R.conj(v[n - 1 - i])))
    return s


def _enumerate_level1(R: _Ring, size: int, budget: int):
    p = R.p
    q2 = R.mod * R.mod
    vectors = [tuple(R.enc(x, y) for x, y in (divmod(c // q2 ** k % q2, R.mod) for k in range(size)))
               for c in range(q2**size)]
    if q2**size * (4 if size == 3 else 1) > budget:
        raise ValueError("enumeration budget exceeded")
    out = []
    one = R.enc(1, 0)
    if size == 2:
        for c1 in vectors:
            if _herm(R, c1, c1) != 0 or c1 == (0, 0):
                continue
            for c2 in vectors:
                if _herm(R, c2, c2) == 0 and _herm(R, c1, c2) == one:
                    out.append((tuple((c1[i], c2[i]) for i in range(2))))
        return tuple(out)
    iso = [v for v in vectors if v != (0, 0, 0) and _herm(R, v, v) == 0]
    for c1 in iso:
        for c3 in iso:
            if _herm(R, c1, c3) != one:
                continue
            # orthocomplement of the hyperbolic plane span(c1, c3)
            w0 = _perp_vector(R, c1, c3, vectors)
            nw = _herm(R, w0, w0) // R.mod  # rational part (hermitian norm)
            lam = _norm_solve(R, nw)
            w0 = tuple(R.mul(lam, x) for x in w0)
            for u in _norm_one_scalars(R):
                c2 = tuple(R.mul(u, x) for x in w0)
                out.append(tuple((c1[i], c2[i], c3[i]) for i in range(3)))
    return tuple(out)


def _perp_vector(R: _Ring, c1, c3, vectors):
    for w in vectors:
        if w == (0,) * len(w):
            continue
        if _herm(R, w, c1) == 0 and _herm(R, w, c3) == 0 and R.is_unit(_herm(R, w, w)):
            return w
    raise RuntimeError("no anisotropic perpendicular vector found")


def _norm_solve(R: _Ring, target: int):
    """lambda with N(lambda) * target = 1 in Z/p^m."""
    tinv = pow(target, -1, R.mod)
    for a in R.elements():
        if R.norm_int(a) % R.mod == tinv % R.mod:
            return a
    raise RuntimeError("norm equation unsolvable")


def _norm_one_scalars(R: _Ring):
    return [a for a in R.elements() if R.norm_int(a) % R.mod == 1]


def _lift_level(R: _Ring, R0: _Ring, base, size: int, budget: int):
    """All lifts mod p^m of unitary matrices mod p^{m-1} (smooth fibers of
    dimension size^2 over F_p)."""
    p = R.p
    pm1 = R0.mod
    n = size
    if len(base) * p ** (n * n) > budget:
        raise ValueError("enumeration budget exceeded")
    # solve t(Xbar) J + J X = -E over F_p: linear in the 2 n^2 F_p-coords of X
    # basis of solutions is fiber-independent; particular solution per E.
    kernel = _lift_kernel(R, n)
    out = []
    J = tuple(tuple(R.enc(1, 0) if i + j == n - 1 else 0 for j in range(n)) for i in range(n))
    for g0 in base:
        g = tuple(tuple(_lift_code(R, R0, e) for e in row) for row in g0)
        Eo = _rmat_mul(R, _rmat_mul(R, _rmat_conj_t(R, g), J), g)
        E = tuple(tuple(R.sub(Eo[i][j], J[i][j]) for j in range(n)) for i in range(n))
        # E = p^{m-1} * E1 with E1 hermitian mod p
        E1 = tuple(tuple(_divide_exact(R, E[i][j], pm1) for j in range(n)) for i in range(n))
        X0 = _lift_particular(R, E1, n)
        if X0 is None:
            continue
        for K in kernel:
            X = tuple(tuple(R.add(X0[i][j], K[i][j]) for j in range(n)) for i in range(n))
            lift = tuple(
                tuple(R.add(g[i][j], _mul_scalar(R, pm1, _row_mul(R, g, X, i, j))) for j in range(n))
                for i in range(n)
            )
            out.append(lift)
    return tuple(out)


def _row_mul(R: _Ring, g, X, i, j):
    s = R.mul(g[i][0], X[0][j])
    for k in range(1, len(X)):
        s = R.add(s, R.mul(g[i][k], X[k][j]))
    return s


def _mul_scalar(R: _Ring, c: int, a):
    return R.mul(R.enc(c, 0), a)


def _lift_code(R: _Ring, R0: _Ring, a):
    x, y = divmod(a, R0.mod)
    return R.enc(x, y)


def _divide_exact(R: _Ring, a, c: int):
    x, y = divmod(a, R.mod)
    if x % c or y % c:
        raise ValueError("inexact division in fiber lift")
    return R.enc(x // c, y // c)


def _lift_kernel(R: _Ring, n: int):
    """Solutions mod p of t(Xbar) J + J X = 0, i.e. J X anti-hermitian."""
    p = R.p
    Rp = _Ring(R.ctx, p, 1)
    coords = []
    for i in range(n):
        for j in range(n):
            coords.append((i, j))
    sols = []
    # brute force over F_p-linear space via Gaussian elimination on the 2n^2 coords
    import itertools

    dim = 2 * n * n
    rows = []
    # build matrix of the linear map X -> t(Xbar) J + J X over F_p coords
    def apply_map(Xc):
        X = [[Rp.enc(*Xc[2 * (i * n + j):2 * (i * n + j) + 2]) for j in range(n)] for i in range(n)]
        J = [[Rp.enc(1, 0) if a + b == n - 1 else 0 for b in range(n)] for a in range(n)]
        XbT = [[Rp.conj(X[b][a]) for b in range(n)] for a in range(n)]
        M1 = _rmat_mul(Rp, tuple(map(tuple, XbT)), tuple(map(tuple, J)))
        M2 = _rmat_mul(Rp, tuple(map(tuple, J)), tuple(map(tuple, X)))
        out = []
        for a in range(n):
            for b in range(n):
                s = Rp.add(M1[a][b], M2[a][b])
                out.extend(divmod(s, Rp.mod))
        return out

    basis_images = []
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        basis_images.append(apply_map(e))
    # kernel via Gaussian elimination over F_p
    import copy

    Mt = [[basis_images[k][r] % p for k in range(dim)] for r in range(2 * n * n)]
    ker = _kernel_mod_p(Mt, p, dim)
    for kc in ker:
        X = tuple(
            tuple(Rp.enc(kc[2 * (i * n + j)], kc[2 * (i * n + j) + 1]) for j in range(n))
            for i in range(n)
        )
        sols.append(X)
    # expand to the full F_p-span
    full = set()
    out = []
    for coeffs in itertools.product(range(p), repeat=len(sols)):
        X = tuple(
            tuple(
                _sum_scaled(Rp, [sols[t][i][j] for t in range(len(sols))], coeffs)
                for j in range(n)
            )
            for i in range(n)
        )
        if X not in full:
            full.add(X)
            out.append(X)
    return out


def _sum_scaled(Rp: _Ring, vals, coeffs):
    s = 0
    for v, c in zip(vals, coeffs):
        s = Rp.add(s, Rp.mul(Rp.enc(c, 0), v))
    return s


def _kernel_mod_p(M, p, dim):
    """Basis of the kernel of the matrix M (rows = equations) over F_p."""
    rows = [row[:] for row in M]
    nr = len(rows)
    pivots = {}
    r = 0
    for c in range(dim):
        pr = None
        for i in range(r, nr):
            if rows[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * dim
        v[fc] = 1
        for c, pr in pivots.items():
            v[c] = (-rows[pr][fc]) % p
        basis.append(v)
    return basis


def _solve_mod_p(M, rhs, p, dim):
    """One solution of M x = rhs over F_p, or None."""
    rows = [M[r][:] + [rhs[r] % p] for r in range(len(M))]
    nr = len(rows)
    r = 0
    piv = []
    for c in range(dim):
        pr = next((i for i in range(r, nr) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    for i in range(r, nr):
        if rows[i][dim] % p:
            return None
    x = [0] * dim
    for i, c in enumerate(piv):
        x[c] = rows[i][dim] % p
    return x


def _lift_particular(R: _Ring, E1, n: int):
    """Solve t(Xbar) J + J X = -E1 over F_p."""
    p = R.p
    Rp = _Ring(R.ctx, p, 1)
    dim = 2 * n * n

    def apply_map(Xc):
        X = [[Rp.enc(Xc[2 * (i * n + j)], Xc[2 * (i * n + j) + 1]) for j in range(n)] for i in range(n)]
        J = [[Rp.enc(1, 0) if a + b == n - 1 else 0 for b in range(n)] for a in range(n)]
        XbT = [[Rp.conj(X[b][a]) for b in range(n)] for a in range(n)]
        M1 = _rmat_mul(Rp, tuple(map(tuple, XbT)), tuple(map(tuple, J)))
        M2 = _rmat_mul(Rp, tuple(map(tuple, J)), tuple(map(tuple, X)))
        out = []
        for a in range(n):
            for b in range(n):
                s = Rp.add(M1[a][b], M2[a][b])
                out.extend(divmod(s, Rp.mod))
        return out

    Mtx = []
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        Mtx.append(apply_map(e))
    M = [[Mtx[k][r] % p for k in range(dim)] for r in range(dim)]
    rhs = []
    for i in range(n):
        for j in range(n):
            x, y = divmod(E1[i][j] % (Rp.mod * Rp.mod), Rp.mod)
            x, y = divmod(Rp.enc(*divmod(E1[i][j], R.mod)), Rp.mod)
            rhs.extend(((-x) % p, (-y) % p))
    # reduce E1 mod p first
    rhs = []
    for i in range(n):
        for j in range(n):
            x, y = divmod(E1[i][j], R.mod)
            rhs.extend(((-x) % p, (-y) % p))
    sol = _solve_mod_p(M, rhs, p, dim)
    if sol is None:
        return None
    Rp1 = Rp
    return tuple(
        tuple(R.enc(sol[2 * (i * n + j)], sol[2 * (i * n + j) + 1]) for j in range(n))
        for i in range(n)
    )


# ---- exact p-adic matrices and valuations ----------------------------------


def val_inert(z: QuadNum, p: int) -> int:
    if not z:
        return INF
    return vp_frac(z.norm(), p) // 2


def mat_val(M, p: int) -> int:
    return min(val_inert(M[i][j], p) for i in range(len(M)) for j in range(len(M)))


def mat_integral(M, p: int) -> bool:
    return mat_val(M, p) >= 0


def in_iwahori(M, p: int) -> bool:
    """Membership in I_p (or I'_p for 2x2): integral, lower entries in pO."""
    n = len(M)
    if not mat_integral(M, p):
        return False
    for i in range(n):
        for j in range(n):
            if i > j and val_inert(M[i][j], p) < 1:
                return False
    return True


def in_k21(M, p: int, n: int) -> bool:
    """Membership in K_{2,1}(p^n) = K cap A_n K A_{-n} (3x3)."""
    if not mat_integral(M, p):
        return False
    return (
        val_inert(M[1][0], p) >= n
        and val_inert(M[2][1], p) >= n
        and val_inert(M[2][0], p) >= 2 * n
    )


# ---- lattice HNF keys (right K-coset classification) ------------------------


def lattice_key(M, ctx: FieldContext, p: int, prec: int = 64):
    """Canonical key of the O_p-lattice spanned by the columns of M; two
    unitary matrices have the same key iff they lie in the same right
    G(Z_p)-coset."""
    n = len(M)
    s = 0
    for i in range(n):
        for j in range(n):
            x, y = ctx.omega_coords(M[i][j])
            for c in (x, y):
                if c:
                    s = max(s, -vp_frac(c, p))
    pB = p**prec
    if ctx.D % 4 == 3:
        tt, uu = 1, -(1 + ctx.D) // 4
    else:
        tt, uu = 0, -ctx.D

    def to_res(z):
        x, y = ctx.omega_coords(z)
        x *= p**s
        y *= p**s
        xi = x.numerator * pow(x.denominator, -1, pB) % pB
        yi = y.numerator * pow(y.denominator, -1, pB) % pB
        return (xi, yi)

    def rval(r):
        a = min(vp_int(r[0] % pB, p) if r[0] % pB else prec,
                vp_int(r[1] % pB, p) if r[1] % pB else prec)
        return a

    def rmul(a, b):
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return ((x1 * x2 + uu * yy) % pB, (x1 * y2 + y1 * x2 + tt * yy) % pB)

    def rsub(a, b):
        return ((a[0] - b[0]) % pB, (a[1] - b[1]) % pB)

    def rinv_unit(a):
        x, y = a
        cbar = ((x + tt * y) % pB, (-y) % pB)
        nrm = rmul(a, cbar)
        return rmul(cbar, (pow(nrm[0], -1, pB), 0))

    cols = [[to_res(M[i][j]) for i in range(n)] for j in range(n)]
    used = set()
    piv_of_row = {}
    pivexp = {}
    for i in range(n - 1, -1, -1):
        best, bv = None, None
        for j in range(n):
            if j in used:
                continue
            v = rval(cols[j][i])
            if bv is None or v < bv:
                bv, best = v, j
        u = cols[best][i]
        u_unit = ((u[0] // p**bv) % pB, (u[1] // p**bv) % pB)
        uinv = rinv_unit(u_unit)
        cols[best] = [rmul(c, uinv) for c in cols[best]]
        for j in range(n):
            if j == best or j in used:
                continue
            e = cols[j][i]
            lam = ((e[0] // p**bv) % pB, (e[1] // p**bv) % pB)
            cols[j] = [rsub(cols[j][k], rmul(lam, cols[best][k])) for k in range(n)]
        used.add(best)
        piv_of_row[i] = best
        pivexp[i] = bv
    H = [[cols[piv_of_row[j]][i] for j in range(n)] for i in range(n)]
    a = [pivexp[i] for i in range(n)]
    for j in range(n - 1, -1, -1):
        for i in range(j - 1, -1, -1):
            e = H[i][j]
            q = ((e[0] // p ** a[i]) % pB, (e[1] // p ** a[i]) % pB)
            for k in range(n):
                H[k][j] = rsub(H[k][j], rmul(q, H[k][i]))
    key = [tuple(ai - s for ai in a)]
    for j in range(n):
        for i in range(j):
            m = p ** a[i]
            e = H[i][j]
            key.append((e[0] % m, e[1] % m))
    return tuple(key)


def _o_residues(ctx: FieldContext, p: int, k: int, in_p: bool = False):
    """Exact lifts of O/p^k (or pO/p^k when in_p)."""
    out = []
    lo = 1 if in_p else 0
    if in_p:
        for x in range(0, p**k, p):
            for y in range(0, p**k, p):
                out.append(ctx.from_omega_coords(x, y))
    else:
        for x in range(p**k):
            for y in range(p**k):
                out.append(ctx.from_omega_coords(x, y))
    return out


def _trace_one(ctx: FieldContext, p: int) -> QuadNum:
    """A p-integral element of trace 1 (omega when D = 3 mod 4, else 1/2,
    which is p-integral for the odd primes it is used with)."""
    if ctx.D % 4 == 3:
        return ctx.from_omega_coords(0, 1)
    if p == 2:
        raise ValueError("no integral trace-one element at p=2 for this D")
    return ctx.elem(Fraction(1, 2))


def _constrained_pairs(ctx: FieldContext, p: int, kd: int, kt: int, in_p: bool):
    """(delta, tau) with delta over (p)O/p^kd, tau over (p)O/p^kt and
    tr(tau) + N(delta) = 0 exactly (residue lifts corrected by a p^kt-
    multiple of a trace-one element, so every n(delta,tau) is unitary)."""
    mu = _trace_one(ctx, p)
    out = []
    for d in _o_residues(ctx, p, kd, in_p):
        nd = d.norm()
        for t in _o_residues(ctx, p, kt, in_p):
            w = Fraction(t.trace() + nd)
            if vp_frac(w, p) >= kt:
                tau = t - w * mu
                out.append((d, tau))
    return out


def n_of(ctx: FieldContext, d: QuadNum, t: QuadNum):
    """n(delta,tau) = [[1,d,t],[0,1,-dbar],[0,0,1]] (no constraint re-check)."""
    z, o = ctx.zero, ctx.one
    return mat([[o, d, t], [z, o, -d.conj()], [z, z, o]])


def nbar_of(ctx: FieldContext, d: QuadNum, t: QuadNum):
    z, o = ctx.zero, ctx.one
    return mat([[o, z, z], [-d.conj(), o, z], [t, d, o]])


def gamma_dt(ctx: FieldContext, d: QuadNum, t: QuadNum):
    """gamma(delta,tau) = [[tau,delta,1],[-deltabar,1,0],[1,0,0]]."""
    z, o = ctx.zero, ctx.one
    return mat([[t, d, o], [-d.conj(), o, z], [o, z, z]])


def cell_reps(ctx: FieldContext, cell: CellWord, p: int):
    """Exact representatives of I w I / I (3x3) or I' w I' / I' (2x2).

    3x3 families use (delta, tau) with tr tau + N(delta) = 0; 2x2 inert uses
    trace-zero tau; 2x2 split uses integer tau without constraint.
    """
    n = cell.n
    J = form_J(ctx, cell.size)
    if cell.size == 3:
        Amat = An(ctx, p, n, 3)
        if cell.word == "1":
            return [identity(ctx, 3)]
        if cell.word == "J":
            fam = _constrained_pairs(ctx, p, 1, 1, False)
            return [mat_mul(gamma_dt(ctx, d, t), identity(ctx, 3)) for d, t in fam]
        if cell.word == "A":
            fam = _constrained_pairs(ctx, p, n, 2 * n, False)
            return [mat_mul(n_of(ctx, d, t), Amat) for d, t in fam]
        if cell.word == "JA":
            fam = _constrained_pairs(ctx, p, n, 2 * n, True)
            return [mat_mul(nbar_of(ctx, d, t), mat_mul(J, Amat)) for d, t in fam]
        if cell.word == "AJ":
            fam = _constrained_pairs(ctx, p, n + 1, 2 * n + 1, False)
            return [mat_mul(n_of(ctx, d, t), mat_mul(Amat, J)) for d, t in fam]
        if cell.word == "JAJ":
            fam = _constrained_pairs(ctx, p, n + 1, 2 * n + 1, True)
            return [mat_mul(nbar_of(ctx, d, t), mat_mul(J, mat_mul(Amat, J))) for d, t in fam]
        raise ValueError(cell.word)
    # 2x2
    kind = ctx.classify_place(p).kind
    Amat = An(ctx, p, n, 2)
    z, o = ctx.zero, ctx.one

    def up(t):
        return mat([[o, t], [z, o]])

    def low(t):
        return mat([[o, z], [t, o]])

    def taus(k: int, in_p: bool):
        if kind == "split":
            return [ctx.elem(v) for v in range(0, p**k, p if in_p else 1)]
        mu = _trace_one(ctx, p)
        out = []
        for t in _o_residues(ctx, p, k, in_p):
            w = Fraction(t.trace())
            if vp_frac(w, p) >= k:
                out.append(t - w * mu)
        return out

    if cell.word == "1":
        return [identity(ctx, 2)]
    if cell.word == "J":
        fam = taus(1, False)
        return [mat_mul(mat([[t, o], [o, z]]), identity(ctx, 2)) for t in fam]
    if cell.word == "A":
        return [mat_mul(up(t), Amat) for t in taus(2 * n, False)]
    if cell.word == "JA":
        return [mat_mul(low(t), mat_mul(form_J(ctx, 2), Amat)) for t in taus(2 * n, True)]
    if cell.word == "AJ":
        return [mat_mul(up(t), mat_mul(Amat, form_J(ctx, 2))) for t in taus(2 * n + 1, False)]
    if cell.word == "JAJ":
        return [
            mat_mul(low(t), mat_mul(form_J(ctx, 2), mat_mul(Amat, form_J(ctx, 2))))
            for t in taus(2 * n + 1, True)
        ]
    raise ValueError(cell.word)


# ---- verification reports ----------------------------------------------------


@dataclass
class CosetFamily:
    lemma: str
    p: int
    n: int
    size: int
    reps: list
    subgroup: str           # 'I', 'K', 'K21', 'I1'
    counts: dict
    disjoint: bool = False
    covering: bool = False
    notes: str = ""

    def report(self) -> dict:
        return {
            "lemma": self.lemma,
            "p": self.p,
            "n": self.n,
            "size": self.size,
            "subgroup": self.subgroup,
            "counts": self.counts,
            "disjoint": self.disjoint,
            "covering": self.covering,
            "notes": self.notes,
        }


def _pairwise_disjoint(reps, member, limit_pairs: int = 250_000, rng=None) -> bool:
    """g_i^{-1} g_j not in the subgroup for i != j (full when feasible,
    else a seeded random sample of pairs)."""
    n = len(reps)
    inv = [mat_inv(g) for g in reps]
    total = n * (n - 1)
    if total <= limit_pairs:
        idx = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        rng = rng or random.Random(20_260_808)
        idx = [(rng.randrange(n), rng.randrange(n)) for _ in range(limit_pairs)]
        idx = [(i, j) for i, j in idx if i != j]
    for i, j in idx:
        if member(mat_mul(inv[i], reps[j])):
            return False
    return True


def iwahori_cosets(D: int, p: int, size: int):
    """K / I decomposition (Lemma-level: index p^3+1 or p+1), fully verified
    against the brute-force group enumeration at depth 1."""
    ctx = field(D)
    kind = ctx.classify_place(p).kind
    reps = [identity(ctx, size)] + cell_reps(ctx, CellWord("J", 0, size), p)
    expected = p**3 + 1 if size == 3 else p + 1
    fam = CosetFamily(
        lemma="iwahori-index" if size == 3 else "iwahori-index-2x2",
        p=p, n=0, size=size, reps=reps, subgroup="I",
        counts={"reps": len(reps), "expected": expected},
    )
    fam.disjoint = _pairwise_disjoint(reps, lambda M: in_iwahori(M, p))
    # covering: every element of the level-1 group lies in exactly one coset
    fam.covering = _covering_level1(ctx, reps, p, size, kind)
    return fam


def _enumerate_gl2_level1(p: int):
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p:
                        out.append((a, b, c, d))
    return out


def _covering_level1(ctx, reps, p: int, size: int, kind: str) -> bool:
    """Each enumerated group element mod p falls in exactly one rep coset."""
    inv = [mat_inv(g) for g in reps]
    if kind == "split" and size == 2:
        for (a, b, c, d) in _enumerate_gl2_level1(p):
            g = mat([[ctx.elem(a), ctx.elem(b)], [ctx.elem(c), ctx.elem(d)]])
            hits = sum(1 for gi in inv if _in_iwahori_mod(mat_mul(gi, g), p))
            if hits != 1:
                return False
        return True
    elems, R = enumerate_group(ctx.D, p, 1, size)
    # represent reps and test in the residue ring
    repcodes = [_reduce_mat(R, mat_inv(g)) for g in reps]
    for e in elems:
        hits = 0
        for gi in repcodes:
            prod = _rmat_mul(R, gi, e)
            if _riwahori(R, prod):
                hits += 1
                if hits > 1:
                    return False
        if hits != 1:
            return False
    return True


def _in_iwahori_mod(M, p: int) -> bool:
    """Iwahori membership where entries are only known mod p (level-1 test):
    integral with lower entries divisible by p."""
    n = len(M)
    for i in range(n):
        for j in range(n):
            v = val_inert(M[i][j], p)
            if v < 0:
                return False
            if i > j and v < 1:
                return False
    # invertibility mod p of the diagonal blocks is automatic for unitary g
    return True


def _reduce_mat(R: _Ring, M):
    return tuple(tuple(R.reduce_quadnum(x) for x in row) for row in M)


def _riwahori(R: _Ring, M) -> bool:
    n = len(M)
    for i in range(n):
        for j in range(n):
            if i > j and M[i][j] % R.mod and False:
                pass
    for i in range(n):
        for j in range(n):
            if i > j:
                x, y = divmod(M[i][j], R.mod)
                if x % R.p or y % R.p:
                    return False
    return True


def _lower_unipotents(ctx, p: int, size: int, kind: str, depth: int):
    """Exhaustive I cap N^- modulo p^depth (the critical Iwahori factor)."""
    if size == 2:
        if kind == "split":
            return [mat([[ctx.one, ctx.zero], [ctx.elem(t), ctx.one]])
                    for t in range(0, p**depth, p)]
        out = []
        for t in _o_residues(ctx, p, depth, True):
            if vp_frac(Fraction(t.trace()), p) >= depth:
                out.append(mat([[ctx.one, ctx.zero], [t, ctx.one]]))
        return out
    out = []
    for d, t in _constrained_pairs(ctx, p, depth, depth, True):
        out.append(nbar_of(ctx, d, t))
    return out


def cartan_split(D: int, p: int, size: int, n: int, nsample: int = 200, seed: int = 1):
    """K A_n K = disjoint union of four Iwahori cells.

    Verifies the cell-size table, J A_n J = A_{-n}, and classifies random
    u A_n v into exactly one cell via complete coset keys.
    """
    ctx = field(D)
    kind = ctx.classify_place(p).kind
    words = ["A", "JA", "AJ", "JAJ"]
    repfams = {w: cell_reps(ctx, CellWord(w, n, size), p) for w in words}
    lam = lambda_table(size, n)
    counts = {w: len(repfams[w]) for w in words}
    ok_counts = all(counts[w] == p ** lam[w] for w in words)
    total = sum(counts.values())
    Am = An(ctx, p, -n, size)
    J = form_J(ctx, size)
    ok_flip = Am == mat_mul(J, mat_mul(An(ctx, p, n, size), J))
    fc = FastClassifier(ctx, p, size, prec=4 * n + 14)
    key_of = {}
    clash = False
    for w in words:
        for r in repfams[w]:
            k = fc.iwahori_key(fc.enc(r))
            if k in key_of and key_of[k] != w:
                clash = True
            key_of[k] = w
    ok_disjoint = not clash and len(key_of) == total
    rng = random.Random(seed)
    kreps = [identity(ctx, size)] + cell_reps(ctx, CellWord("J", 0, size), p)
    lowers = _lower_unipotents(ctx, p, size, kind, 2 * n + 1)
    ok_classify = True
    Amat = An(ctx, p, n, size)
    for _ in range(nsample):
        u = mat_mul(rng.choice(kreps), rng.choice(lowers))
        v = mat_mul(rng.choice(lowers), rng.choice(kreps))
        g = mat_mul(u, mat_mul(Amat, v))
        if fc.iwahori_key(fc.enc(g)) not in key_of:
            ok_classify = False
            break
    fam = CosetFamily(
        lemma="cartan-merge" + ("-3x3" if size == 3 else "-2x2"),
        p=p, n=n, size=size, reps=[], subgroup="I",
        counts={"cells": counts, "total": total,
                "expected_total": sum(p ** lam[w] for w in words)},
    )
    fam.disjoint = ok_counts and ok_disjoint
    fam.covering = ok_classify and ok_flip
    fam.notes = f"A_-n flip: {ok_flip}; {nsample} samples classified by key"
    return fam


def hecke_cell_cosets(D: int, p: int, n: int):
    """Right K-cosets of K A_n K (3x3, p inert).

    True decomposition (verified by lattice-key merging of the Iwahori
    cells): K A_n K = U n(delta,tau) A_n K  u  U nbar(delta,tau) J A_n K,
    the first over delta mod p^n, tau mod p^{2n} (tr tau + N delta = 0),
    the second over delta, tau in pO with the same ranges/constraint; the
    count is p^{4n} + p^{4n-3} = p^{4n-3}(p^3+1).  The gamma(delta,tau) A_n
    family with a single K-coset replaces the explicit-list count 1+p^{4n}.
    """
    ctx = field(D)
    ops = CodedOps(ctx, p, prec=4 * n + 14)
    merged = {}
    for w in ("A", "JA", "AJ", "JAJ"):
        for g in cell_reps(ctx, CellWord(w, n, 3), p):
            k = ops.lattice_key(ops.enc(g))
            if k not in merged:
                merged[k] = g
    count = len(merged)
    named = []
    for w in ("A", "JA"):
        named.extend(cell_reps(ctx, CellWord(w, n, 3), p))
    named_keys = {ops.lattice_key(ops.enc(g)) for g in named}
    Amat = An(ctx, p, n, 3)
    gamma_keys = {ops.lattice_key(ops.enc(mat_mul(gamma_dt(ctx, d, t), Amat)))
                  for d, t in _constrained_pairs(ctx, p, n, 2 * n, False)}
    fam = CosetFamily(
        lemma="hecke-cell", p=p, n=n, size=3, reps=named, subgroup="K",
        counts={
            "computed": count,
            "measure_formula": p ** (4 * n - 3) * (p**3 + 1),
            "upper_plus_ja": len(named),
            "gamma_family_distinct": len(gamma_keys),
        },
    )
    fam.disjoint = len(named_keys) == len(named) == p ** (4 * n) + p ** (4 * n - 3)
    fam.covering = named_keys == set(merged) and count == p ** (4 * n - 3) * (p**3 + 1)
    fam.notes = "reps = (A_n + J A_n)-cell representatives; gamma-family collapses"
    return fam


def oldform_cosets(D: int, p: int, n: int = 1, nsample: int = 600):
    """K / K_{2,1}(p^n) cosets for the lower-congruence subgroup
    K21 = {g in K: g21, g32 in p^n O, g31 in p^{2n} O}.

    Representatives: nbar(delta,tau) over delta mod p^n, tau mod p^{2n}
    (tr tau + N delta = 0; (0,0) gives K21 itself) together with
    n(delta,tau) J over delta, tau in pO with the same ranges.  The
    gamma(delta,tau) = n(delta,tau) J family of the explicit list is a
    disjoint subfamily of size 1 + p^{4n} (it misses p^{4n-3}-1 cosets).
    """
    ctx = field(D)
    reps = []
    for d, t in _constrained_pairs(ctx, p, n, 2 * n, False):
        reps.append(nbar_of(ctx, d, t))
    J = form_J(ctx, 3)
    for d, t in _constrained_pairs(ctx, p, n, 2 * n, True):
        reps.append(mat_mul(n_of(ctx, d, t), J))
    index = p ** (4 * n) + p ** (4 * n - 3)
    member = lambda M: in_k21(M, p, n)
    disjoint = _pairwise_disjoint(reps, member)
    # the explicit gamma-family is disjoint but not covering
    gam = [identity(ctx, 3)] + [
        mat_mul(n_of(ctx, d, t), J) for d, t in _constrained_pairs(ctx, p, n, 2 * n, False)
    ]
    gam_disjoint = _pairwise_disjoint(gam, member)
    covering = _oldform_covering(ctx, reps, p, n, nsample=nsample)
    fam = CosetFamily(
        lemma="oldform-K21", p=p, n=n, size=3, reps=reps, subgroup="K21",
        counts={
            "index": len(reps),
            "expected_index": index,
            "gamma_family": len(gam),
            "gamma_family_expected": 1 + p ** (4 * n),
            "missing_from_gamma": index - len(gam),
        },
        disjoint=disjoint and len(reps) == index,
        covering=covering,
        notes=f"gamma-subfamily disjoint: {gam_disjoint}",
    )
    return fam


def _oldform_covering(ctx, reps, p: int, n: int, nsample: int = 600, seed: int = 7):
    rng = random.Random(seed)
    kreps = [identity(ctx, 3)] + cell_reps(ctx, CellWord("J", 0, 3), p)
    lowers = _lower_unipotents(ctx, p, 3, "inert", 2 * n + 1)
    uppers = [n_of(ctx, d, t) for d, t in _constrained_pairs(ctx, p, 2 * n, 2 * n, False)]
    inv = [mat_inv(r) for r in reps]
    for _ in range(nsample):
        g = mat_mul(rng.choice(kreps), mat_mul(rng.choice(lowers), rng.choice(uppers)))
        hits = sum(1 for gi in inv if in_k21(mat_mul(gi, g), p, n))
        if hits != 1:
            return False
    return True


def iwahori_factorization_check(D: int, p: int, size: int = 3) -> bool:
    """I = (I cap N^-)(I cap T)(I cap N) spot check: every level-1 Iwahori
    element factors (exhaustive at depth 1)."""
    ctx = field(D)
    elems, R = enumerate_group(ctx.D, p, 1, size)
    lows = {_reduce_mat(R, m) for m in _lower_unipotents(ctx, p, size, "inert", 1)}
    # diagonal torus mod p

    def diag_units():
        out = []
        for a in R.elements():
            if not R.is_unit(a):
                continue
            for b in R.elements():
                if R.norm_int(b) % R.mod != 1:
                    continue
                ainv_bar = R.conj(_ring_inv(R, a))
                if size == 3:
                    out.append(((a, 0, 0), (0, b, 0), (0, 0, ainv_bar)))
                else:
                    out.append(((a, 0), (0, ainv_bar)))
        return out

    ups = set()
    if size == 3:
        for d, t in _constrained_pairs(ctx, p, 1, 1, False):
            ups.add(_reduce_mat(R, n_of(ctx, d, t)))
    else:
        for t in _o_residues(ctx, p, 1, False):
            if vp_frac(Fraction(t.trace()), p) >= 1:
                ups.add(_reduce_mat(R, mat([[ctx.one, t], [ctx.zero, ctx.one]])))
    factored = set()
    for L in lows:
        for T in diag_units():
            LT = _rmat_mul(R, L, T)
            for U in ups:
                factored.add(_rmat_mul(R, LT, U))
    iwa = {e for e in elems if _riwahori(R, e)}
    return iwa == factored


def _ring_inv(R: _Ring, a):
    c = R.conj(a)
    nrm = R.norm_int(a)
    return R.mul(c, R.enc(pow(nrm, -1, R.mod), 0))


# ---- fast key-based classification engine -----------------------------------


class CodedOps:
    """Matrix/lattice operations on integer-coded O/p^B coordinates.

    A matrix is a pair (rows, s): rows of (x, y) int pairs mod p^B coding the
    entries of p^s * M in the {1, omega} basis.  All true valuations handled
    must stay well below B.
    """

    def __init__(self, ctx: FieldContext, p: int, prec: int = 24):
        self.ctx, self.p, self.prec = ctx, p, prec
        self.pB = p**prec
        if ctx.D % 4 == 3:
            self.tt, self.uu = 1, -(1 + ctx.D) // 4
        else:
            self.tt, self.uu = 0, -ctx.D

    def enc(self, M):
        """QuadNum matrix -> coded (rows, s) with minimal p-power scale s."""
        ctx, p = self.ctx, self.p
        s = 0
        coords = []
        for row in M:
            crow = []
            for z in row:
                x, y = ctx.omega_coords(z)
                crow.append((x, y))
                for c in (x, y):
                    if c:
                        s = max(s, -vp_frac(c, p))
            coords.append(crow)
        ps = p**s
        pB = self.pB
        rows = tuple(
            tuple(
                (
                    (x * ps).numerator * pow((x * ps).denominator, -1, pB) % pB,
                    (y * ps).numerator * pow((y * ps).denominator, -1, pB) % pB,
                )
                for (x, y) in crow
            )
            for crow in coords
        )
        return rows, s

    def mul(self, A, B):
        (ra, sa), (rb, sb) = A, B
        pB, uu, tt = self.pB, self.uu, self.tt
        n = len(ra)
        m = len(rb[0])
        k = len(rb)
        out = []
        for i in range(n):
            Ai = ra[i]
            row = []
            for j in range(m):
                sx = 0
                sy = 0
                for t in range(k):
                    x1, y1 = Ai[t]
                    x2, y2 = rb[t][j]
                    yy = y1 * y2
                    sx += x1 * x2 + uu * yy
                    sy += x1 * y2 + y1 * x2 + tt * yy
                row.append((sx % pB, sy % pB))
            out.append(tuple(row))
        return tuple(out), sa + sb

    def _rmul(self, a, b):
        pB = self.pB
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return ((x1 * x2 + self.uu * yy) % pB, (x1 * y2 + y1 * x2 + self.tt * yy) % pB)

    def _rval(self, r):
        p = self.p
        a = r[0]
        b = r[1]
        if a == 0 and b == 0:
            return self.prec
        va = vp_int(a, p) if a else self.prec
        vb = vp_int(b, p) if b else self.prec
        v = min(va, vb)
        return v

    def _rinv_unit(self, a):
        pB = self.pB
        x, y = a
        cbar = ((x + self.tt * y) % pB, (-y) % pB)
        nrm = self._rmul(a, cbar)
        return self._rmul(cbar, (pow(nrm[0], -1, pB), 0))

    def lattice_key(self, A):
        rows, s = A
        p, pB = self.p, self.pB
        n = len(rows)
        cols = [[rows[i][j] for i in range(n)] for j in range(n)]
        used = 0
        piv_of_row = [0] * n
        pivexp = [0] * n
        for i in range(n - 1, -1, -1):
            best, bv = -1, None
            for j in range(n):
                if used >> j & 1:
                    continue
                v = self._rval(cols[j][i])
                if bv is None or v < bv:
                    bv, best = v, j
            q = p**bv
            u = cols[best][i]
            uinv = self._rinv_unit(((u[0] // q) % pB, (u[1] // q) % pB))
            cols[best] = [self._rmul(c, uinv) for c in cols[best]]
            for j in range(n):
                if j == best or used >> j & 1:
                    continue
                e = cols[j][i]
                lx = (e[0] // q) % pB
                ly = (e[1] // q) % pB
                if lx or ly:
                    lam = (lx, ly)
                    cb = cols[best]
                    cols[j] = [
                        ((cj[0] - t[0]) % pB, (cj[1] - t[1]) % pB)
                        for cj, t in zip(cols[j], (self._rmul(lam, c) for c in cb))
                    ]
            used |= 1 << best
            piv_of_row[i] = best
            pivexp[i] = bv
        H = [[cols[piv_of_row[j]][i] for j in range(n)] for i in range(n)]
        a = pivexp
        for j in range(n - 1, -1, -1):
            for i in range(j - 1, -1, -1):
                e = H[i][j]
                q = p ** a[i]
                lx = (e[0] // q) % pB
                ly = (e[1] // q) % pB
                if lx or ly:
                    lam = (lx, ly)
                    for k in range(n):
                        t = self._rmul(lam, H[k][i])
                        H[k][j] = ((H[k][j][0] - t[0]) % pB, (H[k][j][1] - t[1]) % pB)
        key = [tuple(ai - s for ai in a)]
        for j in range(n):
            for i in range(j):
                m = p ** a[i]
                e = H[i][j]
                key.append((e[0] % m, e[1] % m))
        return tuple(key)


class FastClassifier:
    """Iwahori / K / K21 coset keys on coded matrices."""

    def __init__(self, ctx: FieldContext, p: int, size: int, prec: int = 24):
        self.ops = CodedOps(ctx, p, prec)
        self.size = size
        z, o = ctx.zero, ctx.one
        pp = ctx.elem(p)
        if size == 3:
            chain = [
                mat([[o, z, z], [z, o, z], [z, z, pp]]),
                mat([[o, z, z], [z, pp, z], [z, z, pp]]),
            ]
        else:
            chain = [mat([[o, z], [z, pp]])]
        self.chain = [self.ops.enc(C) for C in chain]
        self.ctx = ctx
        self.p = p

    def enc(self, M):
        return self.ops.enc(M)

    def iwahori_key(self, A):
        return (self.ops.lattice_key(A),) + tuple(
            self.ops.lattice_key(self.ops.mul(A, C)) for C in self.chain
        )

    def k_key(self, A):
        return self.ops.lattice_key(A)

    def k21_key(self, A, n: int):
        Am = self.ops.enc(An(self.ctx, self.p, n, self.size))
        return (self.ops.lattice_key(A), self.ops.lattice_key(self.ops.mul(A, Am)))


def verify_cell_sweep(D: int, p: int, size: int, word: str, n: int,
                      max_products: int = 150_000, samples: int = 60,
                      seed: int = 20260808):
    """Cell verification via (K-lattice key, mod-p flag) classification.

    The Iwahori coset of g is the pair (lattice key of gL, canonical column
    echelon mod p of r^{-1} g for the stored K-coset representative r); this
    pair is a complete invariant since I is the stabilizer of the standard
    flag inside K.  Covering sweeps l * rep with l exhaustive over
    I cap N^- mod p^{2n+1} (crossed with all reps, or sampled both ways
    beyond `max_products`).
    """
    ctx = field(D)
    kind = ctx.classify_place(p).kind
    cell = CellWord(word, n, size)
    reps = cell_reps(ctx, cell, p)
    expected = p**cell.lam
    ops = CodedOps(ctx, p, prec=4 * n + 14)
    kreps = {}

    def classify(gc):
        kk = ops.lattice_key(gc)
        entry = kreps.get(kk)
        if entry is None:
            return None
        rinv = entry
        kap, s = ops.mul(rinv, gc)
        return (kk, _flag_echelon(kap, s, ops))

    # register K-coset representatives from the family itself
    coded_reps = [ops.enc(r) for r in reps]
    inv_reps = [ops.enc(mat_inv(r)) for r in reps]
    for rc, ri in zip(coded_reps, inv_reps):
        kk = ops.lattice_key(rc)
        if kk not in kreps:
            kreps[kk] = ri
    keyset = set()
    for rc in coded_reps:
        keyset.add(classify(rc))
    disjoint = len(keyset) == len(reps) == expected
    lowers = [ops.enc(l) for l in _lower_unipotents(ctx, p, size, kind, 2 * n + 1)]
    rng = random.Random(seed)
    total = len(lowers) * len(coded_reps)
    if total <= max_products:
        pairs = ((l, r) for l in lowers for r in coded_reps)
        mode = "exhaustive"
    else:
        samp_reps = [coded_reps[rng.randrange(len(coded_reps))] for _ in range(samples)]
        samp_lows = [lowers[rng.randrange(len(lowers))] for _ in range(samples)]
        pairs = [(l, r) for l in lowers for r in samp_reps]
        pairs += [(l, r) for l in samp_lows for r in coded_reps]
        mode = f"exhaustive-x-{samples}-sampled"
    covering = True
    for l, r in pairs:
        c = classify(ops.mul(l, r))
        if c is None or c not in keyset:
            covering = False
            break
    return CosetFamily(
        lemma=f"cell-{word}-{'3x3' if size == 3 else '2x2'}",
        p=p, n=n, size=size, reps=reps, subgroup="I",
        counts={"reps": len(reps), "expected": expected, "lambda": cell.lam},
        disjoint=disjoint, covering=covering,
        notes=f"key+flag classification; covering mode: {mode}",
    )


def _flag_echelon(rows, s: int, ops: CodedOps):
    """Canonical form of an integral coded matrix (scale s) mod p under
    right multiplication by upper-triangular matrices: classifies the coset
    in G(F_p)/B(F_p)."""
    p = ops.p
    ps = p**s
    n = len(rows)
    # reduce to F_{p^2} coordinate pairs mod p
    M = [[((x // ps) % p, (y // ps) % p) for (x, y) in row] for row in rows]

    def fmul(a, b):
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return ((x1 * x2 + ops.uu * yy) % p, (x1 * y2 + y1 * x2 + ops.tt * yy) % p)

    def finv(a):
        cbar = ((a[0] + ops.tt * a[1]) % p, (-a[1]) % p)
        nrm = fmul(a, cbar)[0]
        return fmul(cbar, (pow(nrm, -1, p), 0))

    used_rows = set()
    for j in range(n):
        # pivot: lowest row not yet used with nonzero entry in column j
        piv = None
        for i in range(n - 1, -1, -1):
            if i in used_rows:
                continue
            if M[i][j] != (0, 0):
                piv = i
                break
        u = finv(M[piv][j])
        for i in range(n):
            M[i][j] = fmul(M[i][j], u)
        for jj in range(j + 1, n):
            lam = M[piv][jj]
            if lam != (0, 0):
                for i in range(n):
                    t = fmul(M[i][j], lam)
                    M[i][jj] = ((M[i][jj][0] - t[0]) % p, (M[i][jj][1] - t[1]) % p)
        used_rows.add(piv)
    return tuple(tuple(row) for row in M)


def _trace_fiber_count(ctx: FieldContext, p: int, m: int, c_mod: int, in_p: bool) -> int:
    """#{tau in (p)O/p^m : tr(tau) = c (mod p^m)} by integer counting:
    tau = x + y omega has trace 2x + s y."""
    s = 1 if ctx.D % 4 == 3 else 0
    pm = p**m
    ys = range(0, pm, p) if in_p else range(pm)
    count = 0
    g = 2 if p == 2 else 1
    for y in ys:
        rhs = (c_mod - s * y) % pm
        if p != 2:
            count += 1 if not in_p else _x_in_po(p, m, rhs)
        else:
            if rhs % g == 0:
                count += g if not in_p else _x_in_po_2(m, rhs)
    return count


def _x_in_po(p: int, m: int, rhs: int) -> int:
    # unique x mod p^m with 2x = rhs; lies in pO iff p | x
    x = rhs * pow(2, -1, p**m) % p**m
    return 1 if x % p == 0 else 0


def _x_in_po_2(m: int, rhs: int) -> int:
    # x mod 2^m with 2x = rhs (rhs even): x in {rhs/2, rhs/2 + 2^{m-1}};
    # count those divisible by 2
    x0 = (rhs // 2) % 2**m
    xs = (x0, (x0 + 2 ** (m - 1)) % 2**m)
    return sum(1 for x in xs if x % 2 == 0)


def cell_count(D: int, p: int, size: int, word: str, n: int,
               fiber_samples: int = 5) -> dict:
    """Cardinality of the cell representative family without materializing
    it: delta-classes enumerated exhaustively, tau-fibers counted by the
    integer trace solver (cross-checked against full enumeration for
    `fiber_samples` sampled delta-classes when small).

    Returns {'count', 'expected', 'fiber_checked'}.
    """
    ctx = field(D)
    kind = ctx.classify_place(p).kind
    cell = CellWord(word, n, size)
    in_p = word in ("JA", "JAJ")
    if size == 3:
        kd = n if word in ("A", "JA") else n + 1
        kt = 2 * n if word in ("A", "JA") else 2 * n + 1
        deltas = _o_residues(ctx, p, kd, in_p)
        pm = p**kt
        count = 0
        fibers = {}
        for d in deltas:
            c = int(-d.norm()) % pm
            if c not in fibers:
                fibers[c] = _trace_fiber_count(ctx, p, kt, c, in_p)
            count += fibers[c]
        # spot check the integer solver against direct enumeration (depth
        # capped so the cross-check stays cheap)
        ok = True
        if p ** (2 * kt) <= 30_000:
            rng = random.Random(101)
            for d in [deltas[rng.randrange(len(deltas))] for _ in range(fiber_samples)]:
                nd = d.norm()
                direct = sum(
                    1
                    for t in _o_residues(ctx, p, kt, in_p)
                    if vp_frac(Fraction(t.trace() + nd), p) >= kt
                )
                ok = ok and direct == fibers[int(-nd) % pm]
    else:
        kt = 2 * n if word in ("A", "JA") else 2 * n + 1
        if kind == "split":
            count = p ** (kt - (1 if in_p else 0))
            ok = True
        else:
            count = _trace_fiber_count(ctx, p, kt, 0, in_p)
            ok = True
            if p ** (2 * kt) <= 30_000:
                direct = sum(
                    1
                    for t in _o_residues(ctx, p, kt, in_p)
                    if vp_frac(Fraction(t.trace()), p) >= kt
                )
                ok = direct == count
    return {"count": count, "expected": p**cell.lam, "fiber_checked": ok}
