"""The bimultiplication algebra Mul(K), its inner ideal, and the outer quotient.

A pair (u, v) of endomorphisms of K is a bimultiplication when

    k1 u(k2) = v(k1) k2,   u(k1 k2) = u(k1) k2,   v(k1 k2) = k1 v(k2).

Mul(K) is computed as the solution subspace of that condition system
inside the 2n^2-dimensional pair space (u flattened row-major, then v);
Inn(K) = im eps, Anni(K) = ker eps, Out(K) = Mul/Inn on canonical
complement representatives.
"""

from __future__ import annotations

from .algebra import AlgebraSC
from .fields import (DimensionMismatch, Matrix, Subspace, kernel_basis,
                     quotient, sparse_rref, vec_zero)


class BiPair:
    """A pair of endomorphism matrices acting on coordinate columns."""

    __slots__ = ("u", "v")

    def __init__(self, u: Matrix, v: Matrix):
        if u.rows != u.cols or v.rows != v.cols or u.rows != v.rows:
            raise DimensionMismatch("u and v must be square of equal size")
        self.u = u
        self.v = v

    @property
    def dim(self):
        return self.u.rows

    @property
    def field(self):
        return self.u.field

    def __eq__(self, other):
        return isinstance(other, BiPair) and self.u == other.u and self.v == other.v

    def __repr__(self):
        return f"BiPair(dim {self.dim})"

    def add(self, other):
        return BiPair(self.u.add(other.u), self.v.add(other.v))

    def sub(self, other):
        return BiPair(self.u.sub(other.u), self.v.sub(other.v))

    def scale(self, c):
        return BiPair(self.u.scale(c), self.v.scale(c))

    def is_zero(self):
        return self.u.is_zero() and self.v.is_zero()

    def flatten(self):
        out = []
        for row in self.u.data:
            out.extend(row)
        for row in self.v.data:
            out.extend(row)
        return out

    @classmethod
    def unflatten(cls, field, n, vec):
        u = Matrix(field, [vec[i * n:(i + 1) * n] for i in range(n)], cols=n)
        off = n * n
        v = Matrix(field, [vec[off + i * n:off + (i + 1) * n] for i in range(n)],
                   cols=n)
        return cls(u, v)

    @classmethod
    def zero(cls, field, n):
        return cls(Matrix.zeros(field, n, n), Matrix.zeros(field, n, n))

    @classmethod
    def identity(cls, field, n):
        return cls(Matrix.identity(field, n), Matrix.identity(field, n))


def mul_product(p1: BiPair, p2: BiPair) -> BiPair:
    """(u1,v1)(u2,v2) = (u1 u2, v2 v1)."""
    return BiPair(p1.u.mul(p2.u), p2.v.mul(p1.v))


def _sparse_cols(m: Matrix):
    cols = [dict() for _ in range(m.cols)]
    for r, row in enumerate(m.data):
        for c, x in enumerate(row):
            if x:
                cols[c][r] = x
    return cols


def is_bimultiplication(p: BiPair, k: AlgebraSC) -> bool:
    if p.dim != k.dim:
        raise DimensionMismatch("pair size must match dim K")
    f = k.field
    from .algebra import _sparse_acc
    neg1 = f.neg(f.one())
    ucols = _sparse_cols(p.u)
    vcols = _sparse_cols(p.v)
    for i in range(k.dim):
        for j in range(k.dim):
            prod = k.mul_basis(i, j)
            # e_i u(e_j) = v(e_i) e_j
            acc = {}
            for r, c in ucols[j].items():
                _sparse_acc(f, acc, k.mul_basis(i, r), c)
            for r, c in vcols[i].items():
                _sparse_acc(f, acc, k.mul_basis(r, j), f.mul(neg1, c))
            if acc:
                return False
            # u(e_i e_j) = u(e_i) e_j
            acc = {}
            for t, c in prod.items():
                _sparse_acc(f, acc, ucols[t], c)
            for r, c in ucols[i].items():
                _sparse_acc(f, acc, k.mul_basis(r, j), f.mul(neg1, c))
            if acc:
                return False
            # v(e_i e_j) = e_i v(e_j)
            acc = {}
            for t, c in prod.items():
                _sparse_acc(f, acc, vcols[t], c)
            for r, c in vcols[j].items():
                _sparse_acc(f, acc, k.mul_basis(i, r), f.mul(neg1, c))
            if acc:
                return False
    return True


def is_permutable(p1: BiPair, p2: BiPair) -> bool:
    """v2 u1 = u1 v2 and v1 u2 = u2 v1."""
    return (p2.v.mul(p1.u) == p1.u.mul(p2.v)
            and p1.v.mul(p2.u) == p2.u.mul(p1.v))


def is_self_permutable(p: BiPair) -> bool:
    return p.u.mul(p.v) == p.v.mul(p.u)


def epsilon(k0, k: AlgebraSC) -> BiPair:
    """Inner bimultiplication (left-mult by k0, right-mult by k0)."""
    return BiPair(k.left_mult_matrix(k0), k.right_mult_matrix(k0))


def _condition_rows(k: AlgebraSC):
    """Sparse rows of the bimultiplication condition system.

    Unknown order: u[r][c] at r*n+c, v[r][c] at n^2 + r*n+c.
    """
    f = k.field
    n = k.dim
    off = n * n
    rows = []
    # precompute sparse structure constants by (i, r) for left factors
    for i in range(n):
        for j in range(n):
            prod = k.mul_basis(i, j)
            for s in range(n):
                row1 = {}
                row2 = {}
                row3 = {}
                for r in range(n):
                    c_irs = k.mul_basis(i, r).get(s)
                    c_rjs = k.mul_basis(r, j).get(s)
                    if c_irs:
                        # e_i u(e_j): u[r][j] with coeff c[i][r][s]
                        row1[r * n + j] = f.add(row1.get(r * n + j, f.zero()), c_irs)
                        # k1 v(k2): v[r][j] with coeff c[i][r][s]
                        row3[off + r * n + j] = f.sub(
                            row3.get(off + r * n + j, f.zero()), c_irs)
                    if c_rjs:
                        # v(e_i) e_j: v[r][i] with coeff c[r][j][s]
                        row1[off + r * n + i] = f.sub(
                            row1.get(off + r * n + i, f.zero()), c_rjs)
                        # u(e_i) e_j: u[r][i] with coeff c[r][j][s]
                        row2[r * n + i] = f.sub(row2.get(r * n + i, f.zero()), c_rjs)
                for r, c in prod.items():
                    # u(e_i e_j): u[s][r]
                    row2[s * n + r] = f.add(row2.get(s * n + r, f.zero()), c)
                    # v(e_i e_j): v[s][r]
                    row3[off + s * n + r] = f.add(
                        row3.get(off + s * n + r, f.zero()), c)
                for row in (row1, row2, row3):
                    row_clean = {c: x for c, x in row.items() if x}
                    if row_clean:
                        rows.append(row_clean)
    return rows


class MulAlgebra:
    """Mul(K) as a canonical subspace of the 2n^2 pair space."""

    def __init__(self, k_ref: AlgebraSC, space: Subspace):
        self.k_ref = k_ref
        self.space = space

    @property
    def dim(self):
        return self.space.dim

    def __repr__(self):
        return f"MulAlgebra(dim {self.dim} for {self.k_ref!r})"

    def basis_pairs(self):
        n = self.k_ref.dim
        return [BiPair.unflatten(self.k_ref.field, n, row)
                for row in self.space.basis.data]

    def contains(self, p: BiPair) -> bool:
        return self.space.contains(p.flatten())

    def coords_of(self, p: BiPair):
        return self.space.coords_of(p.flatten())


def compute_mul_algebra(k: AlgebraSC) -> MulAlgebra:
    f = k.field
    n = k.dim
    rows = _condition_rows(k)
    piv_rows, piv_cols, _ = sparse_rref(f, rows, 2 * n * n)
    m = Matrix.zeros(f, len(piv_rows), 2 * n * n)
    for i, row in enumerate(piv_rows):
        for j, x in row.items():
            m.data[i][j] = x
    space = kernel_basis(m) if piv_rows else Subspace.full(f, 2 * n * n)
    return MulAlgebra(k, space)


def compute_inn(k: AlgebraSC) -> Subspace:
    rows = [epsilon(k.basis_vec(i), k).flatten() for i in range(k.dim)]
    return Subspace.from_rows(k.field, 2 * k.dim * k.dim, rows)


def compute_anni(k: AlgebraSC) -> Subspace:
    """{x : xK = Kx = 0} = ker eps, inside K."""
    f = k.field
    n = k.dim
    rows = []
    for j in range(n):
        for s in range(n):
            left = {i: k.mul_basis(i, j)[s] for i in range(n)
                    if s in k.mul_basis(i, j)}
            right = {i: k.mul_basis(j, i)[s] for i in range(n)
                     if s in k.mul_basis(j, i)}
            if left:
                rows.append(left)
            if right:
                rows.append(right)
    piv_rows, _, _ = sparse_rref(f, rows, n)
    m = Matrix.zeros(f, len(piv_rows), n)
    for i, row in enumerate(piv_rows):
        for j, x in row.items():
            m.data[i][j] = x
    return kernel_basis(m) if piv_rows else Subspace.full(f, n)


class OutAlgebra:
    """Out(K) = Mul(K)/Inn(K) with the induced product on representatives."""

    def __init__(self, mul: MulAlgebra, inn: Subspace):
        self.mul = mul
        self.inn = inn  # inside the pair space
        inn_in_mul = []
        for row in inn.basis.data:
            coords = mul.space.coords_of(row)
            if coords is None:
                raise ValueError("Inn(K) escapes Mul(K); algebra is not associative?")
            inn_in_mul.append(coords)
        self.inn_in_mul = Subspace.from_rows(mul.space.field, mul.dim, inn_in_mul)
        self.q = quotient(mul.dim, self.inn_in_mul)

    @property
    def dim(self):
        return self.q.dim

    def __repr__(self):
        return f"OutAlgebra(dim {self.dim})"

    def project_pair(self, p: BiPair):
        coords = self.mul.coords_of(p)
        if coords is None:
            raise ValueError("pair is not a bimultiplication")
        return self.q.project(coords)

    def lift_class(self, cls_coords) -> BiPair:
        mul_coords = self.q.lift(cls_coords)
        f = self.mul.space.field
        n = self.mul.k_ref.dim
        vec = vec_zero(f, 2 * n * n)
        for c, row in zip(mul_coords, self.mul.space.basis.data):
            if c:
                for j, x in enumerate(row):
                    if x:
                        vec[j] = f.add(vec[j], f.mul(c, x))
        return BiPair.unflatten(f, n, vec)

    def product_on_reps(self, c1, c2):
        p = mul_product(self.lift_class(c1), self.lift_class(c2))
        return self.project_pair(p)


def compute_out(k: AlgebraSC) -> OutAlgebra:
    return OutAlgebra(compute_mul_algebra(k), compute_inn(k))
