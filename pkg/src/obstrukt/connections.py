"""Connections A -> Mul(K), couplings, and the twisted differential.

A connection is stored as one BiPair per A-basis vector and extended
linearly.  A coupling is always carried together with a covering lift;
whether the lift actually covers a coupling is certified by checking
that every curvature value is inner, which is the same thing as
multiplicativity of the projected map.
"""

from __future__ import annotations

from .algebra import AlgebraSC
from .bimult import (BiPair, OutAlgebra, compute_anni, compute_inn,
                     compute_mul_algebra, epsilon, is_bimultiplication,
                     is_permutable, mul_product)
from .fields import (DimensionMismatch, Matrix, solve_many, vec_add,
                     vec_is_zero, vec_sub, vec_zero)


class CurvatureNotInner(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"curvature value at basis pair {witness} is not inner")


class Connection:
    """Linear map A -> Mul(K) by per-basis pairs."""

    def __init__(self, a_ref: AlgebraSC, k_ref: AlgebraSC, pairs, check=True):
        if len(pairs) != a_ref.dim:
            raise DimensionMismatch("one pair per A-basis vector required")
        self.a_ref = a_ref
        self.k_ref = k_ref
        self.pairs = list(pairs)
        if check:
            for i, p in enumerate(self.pairs):
                if not is_bimultiplication(p, k_ref):
                    raise ValueError(f"pair for basis index {i} fails the "
                                     "bimultiplication conditions")

    def __repr__(self):
        return f"Connection({self.a_ref!r} -> Mul({self.k_ref!r}))"

    def pair_of(self, avec) -> BiPair:
        f = self.k_ref.field
        n = self.k_ref.dim
        out = BiPair.zero(f, n)
        for i, c in enumerate(avec):
            if c:
                out = out.add(self.pairs[i].scale(c))
        return out

    def act_left(self, avec, kvec):
        return self.pair_of(avec).u.mul_vec(kvec)

    def act_right(self, kvec, avec):
        return self.pair_of(avec).v.mul_vec(kvec)

    def shift_by(self, l_vectors) -> "Connection":
        """mu + eps o l for l given by one K-vector per A-basis index."""
        pairs = [p.add(epsilon(lv, self.k_ref))
                 for p, lv in zip(self.pairs, l_vectors)]
        return Connection(self.a_ref, self.k_ref, pairs, check=False)


def is_flat(c: Connection) -> bool:
    """mu(a1 a2) = mu(a1) mu(a2) on all basis pairs."""
    a = c.a_ref
    for i in range(a.dim):
        for j in range(a.dim):
            if not _flat_at(c, i, j):
                return False
    return True


def _flat_at(c: Connection, i, j) -> bool:
    prod = mul_product(c.pairs[i], c.pairs[j])
    expect = c.pair_of(c.a_ref.mul_vec(c.a_ref.basis_vec(i), c.a_ref.basis_vec(j)))
    return prod == expect


def flat_witness(c: Connection):
    for i in range(c.a_ref.dim):
        for j in range(c.a_ref.dim):
            if not _flat_at(c, i, j):
                return (i, j)
    return None


def is_regular(c: Connection) -> bool:
    """All image pairs permutable, including each with itself."""
    for i in range(c.a_ref.dim):
        for j in range(i, c.a_ref.dim):
            if not is_permutable(c.pairs[i], c.pairs[j]):
                return False
    return True


class Coupling:
    """A homomorphism A -> Out(K), carried by a covering lift.

    Out(K) data is built lazily: for large K everything downstream works
    through the inner-ness of curvature values instead of the quotient.
    """

    def __init__(self, lift: Connection):
        self.lift = lift
        self._out = None
        self._anni = None

    @property
    def a_ref(self):
        return self.lift.a_ref

    @property
    def k_ref(self):
        return self.lift.k_ref

    @property
    def anni(self):
        if self._anni is None:
            self._anni = compute_anni(self.k_ref)
        return self._anni

    def out_algebra(self) -> OutAlgebra:
        if self._out is None:
            self._out = OutAlgebra(compute_mul_algebra(self.k_ref),
                                   compute_inn(self.k_ref))
        return self._out

    def xi_of(self, avec):
        """Class coordinates of xi(a) in Out(K)."""
        return self.out_algebra().project_pair(self.lift.pair_of(avec))

    def __repr__(self):
        return f"Coupling({self.a_ref!r} -> Out({self.k_ref!r}))"


def coupling_from_connection(c: Connection) -> Coupling:
    """Certify that c covers a coupling; the curvature must be inner.

    Raises CurvatureNotInner (with a witness basis pair) or ValueError on
    a non-regular connection.
    """
    if not is_regular(c):
        raise ValueError("connection is not regular")
    a, k = c.a_ref, c.k_ref
    eps_mat = _epsilon_matrix(k)
    rhs = []
    keys = []
    for i in range(a.dim):
        for j in range(a.dim):
            r = curvature_pair(c, i, j)
            rhs.append(r.flatten())
            keys.append((i, j))
    sols = solve_many(eps_mat, rhs)
    for key, sol in zip(keys, sols):
        if sol is None:
            raise CurvatureNotInner(key)
    return Coupling(c)


def _epsilon_matrix(k: AlgebraSC) -> Matrix:
    """2n^2 x n matrix of eps: K -> pair space, columns are eps(e_i)."""
    cols = [epsilon(k.basis_vec(i), k).flatten() for i in range(k.dim)]
    n2 = 2 * k.dim * k.dim
    return Matrix(k.field, [[cols[i][r] for i in range(k.dim)]
                            for r in range(n2)], cols=k.dim)


def curvature_pair(c: Connection, i, j) -> BiPair:
    """R(e_i (x) e_j) = mu(e_i) mu(e_j) - mu(e_i e_j)."""
    prod = mul_product(c.pairs[i], c.pairs[j])
    lin = c.pair_of(c.a_ref.mul_vec(c.a_ref.basis_vec(i), c.a_ref.basis_vec(j)))
    return prod.sub(lin)


class TwistedCochain:
    """n-linear map A^(x)n -> K as a sparse tuple-indexed table.

    Degree 0 is a single K-vector keyed by the empty tuple.
    """

    def __init__(self, a_ref: AlgebraSC, k_dim: int, degree: int, coeffs=None):
        self.a_ref = a_ref
        self.k_dim = k_dim
        self.degree = degree
        self.coeffs = {}
        if coeffs:
            for key, vec in coeffs.items():
                key = tuple(key)
                if len(key) != degree:
                    raise DimensionMismatch("key length must equal degree")
                if not vec_is_zero(vec):
                    self.coeffs[key] = list(vec)

    def value(self, key):
        return self.coeffs.get(tuple(key),
                               vec_zero(self.a_ref.field, self.k_dim))

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, TwistedCochain) or self.degree != other.degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        f = self.a_ref.field
        return all(vec_is_zero(vec_sub(f, self.value(k), other.value(k)))
                   for k in keys)


def twisted_delta(c: Connection, f_coch: TwistedCochain) -> TwistedCochain:
    """The symbolic differential Delta^mu; does NOT square to zero in general."""
    a = c.a_ref
    fld = a.field
    n = f_coch.degree
    kdim = f_coch.k_dim
    if kdim != c.k_ref.dim:
        raise DimensionMismatch("cochain values must live in K")
    out = {}
    for key in _tuples(a.dim, n + 1):
        acc = c.pairs[key[0]].u.mul_vec(f_coch.value(key[1:]))
        sign = fld.one()
        for i in range(n):
            sign = fld.neg(sign)
            prod = a.mul_basis(key[i], key[i + 1])
            for r, coeff in prod.items():
                merged = key[:i] + (r,) + key[i + 2:]
                term = f_coch.value(merged)
                cf = fld.mul(sign, coeff)
                acc = vec_add(fld, acc, [fld.mul(cf, t) for t in term])
        sign = fld.neg(sign)  # (-1)^(n+1)
        last = c.pairs[key[-1]].v.mul_vec(f_coch.value(key[:-1]))
        acc = vec_add(fld, acc, [fld.mul(sign, t) for t in last])
        if not vec_is_zero(acc):
            out[key] = acc
    return TwistedCochain(a, kdim, n + 1, out)


def _tuples(dim, n):
    if n == 0:
        yield ()
        return
    import itertools
    yield from itertools.product(range(dim), repeat=n)
