"""Standard Hochschild cochain complex with representation coefficients.

Coefficients are a Representation: a bimodule whose two actions are the
(u, v) components of a flat regular connection into Mul(M).  The
coboundary is

    (df)(a1..a_{n+1}) = a1.f(a2..) + sum (-1)^i f(..a_i a_{i+1}..)
                        + (-1)^(n+1) f(a1..a_n).a_{n+1}

Degrees are capped at 4: degree 3 carries the obstruction theory and
degree 4 is needed for closure tests.
"""

from __future__ import annotations

import itertools

from .algebra import AlgebraSC, BimoduleSC, validate_bimodule
from .connections import Connection
from .bimult import BiPair
from .fields import (DimensionMismatch, Matrix, Subspace, kernel_basis,
                     quotient, solve, vec_add, vec_is_zero, vec_sub, vec_zero)

MAX_DEGREE = 4


class DegreeCapExceeded(ValueError):
    pass


class NotCocycle(ValueError):
    pass


class Representation:
    """(M, rho): bimodule coefficients with cached action matrices."""

    def __init__(self, m: BimoduleSC, check=True):
        self.m = m
        self.algebra = m.over
        self.field = m.field
        self.dim = m.dim
        self.left = [m.left_matrix(a) for a in range(self.algebra.dim)]
        self.right = [m.right_matrix(a) for a in range(self.algebra.dim)]
        if check:
            bad = validate_bimodule(m)
            if bad:
                raise ValueError(f"coefficients are not a bimodule: "
                                 f"{len(bad)} axiom violations, first {bad[0]}")

    def __repr__(self):
        return f"Representation(dim {self.dim} of {self.algebra!r})"

    def rho(self) -> Connection:
        """The connection view into Mul(M) with M as a null algebra."""
        null_m = AlgebraSC(self.field, self.dim)
        pairs = [BiPair(self.left[a], self.right[a])
                 for a in range(self.algebra.dim)]
        return Connection(self.algebra, null_m, pairs, check=False)


class HCochain:
    """Sparse n-cochain A^(x)n -> M."""

    def __init__(self, rep: Representation, degree: int, coeffs=None):
        self.rep = rep
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
        return self.coeffs.get(tuple(key), vec_zero(self.rep.field, self.rep.dim))

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, HCochain) or self.degree != other.degree:
            return False
        f = self.rep.field
        keys = set(self.coeffs) | set(other.coeffs)
        return all(vec_is_zero(vec_sub(f, self.value(k), other.value(k)))
                   for k in keys)

    def add(self, other):
        f = self.rep.field
        out = {}
        for k in set(self.coeffs) | set(other.coeffs):
            out[k] = vec_add(f, self.value(k), other.value(k))
        return HCochain(self.rep, self.degree, out)

    def sub(self, other):
        f = self.rep.field
        out = {}
        for k in set(self.coeffs) | set(other.coeffs):
            out[k] = vec_sub(f, self.value(k), other.value(k))
        return HCochain(self.rep, self.degree, out)

    def scale(self, c):
        f = self.rep.field
        return HCochain(self.rep, self.degree,
                        {k: [f.mul(c, x) for x in v] for k, v in self.coeffs.items()})

    def dense(self):
        """Row-major coordinate vector over (tuple, module-coord)."""
        a = self.rep.algebra.dim
        m = self.rep.dim
        out = vec_zero(self.rep.field, a ** self.degree * m)
        for key, vec in self.coeffs.items():
            idx = 0
            for t in key:
                idx = idx * a + t
            for y, x in enumerate(vec):
                out[idx * m + y] = x
        return out

    @classmethod
    def from_dense(cls, rep, degree, dense):
        a = rep.algebra.dim
        m = rep.dim
        coeffs = {}
        for i, key in enumerate(itertools.product(range(a), repeat=degree)):
            vec = dense[i * m:(i + 1) * m]
            if not vec_is_zero(vec):
                coeffs[key] = list(vec)
        return cls(rep, degree, coeffs)


def _check_degree(n):
    if n > MAX_DEGREE:
        raise DegreeCapExceeded(f"degree {n} exceeds the hard cap {MAX_DEGREE}")


def hdelta(rep: Representation, f: HCochain) -> HCochain:
    """delta^rho f; always squares to zero because rho is flat.

    Pointwise evaluation tolerates one degree past the rank cap so that
    the closure property can be exercised on degree-3 cochains.
    """
    if f.degree + 1 > MAX_DEGREE + 1:
        raise DegreeCapExceeded(
            f"degree {f.degree + 1} exceeds the pointwise cap {MAX_DEGREE + 1}")
    if f.rep is not rep and f.rep.m is not rep.m:
        f = HCochain(rep, f.degree, f.coeffs)
    a = rep.algebra
    fld = rep.field
    n = f.degree
    out = {}
    for key in itertools.product(range(a.dim), repeat=n + 1):
        acc = rep.left[key[0]].mul_vec(f.value(key[1:]))
        sign = fld.one()
        for i in range(n):
            sign = fld.neg(sign)
            for r, coeff in a.mul_basis(key[i], key[i + 1]).items():
                merged = key[:i] + (r,) + key[i + 2:]
                term = f.value(merged)
                cf = fld.mul(sign, coeff)
                acc = vec_add(fld, acc, [fld.mul(cf, t) for t in term])
        sign = fld.neg(sign)
        last = rep.right[key[-1]].mul_vec(f.value(key[:-1]))
        acc = vec_add(fld, acc, [fld.mul(sign, t) for t in last])
        if not vec_is_zero(acc):
            out[key] = acc
    return HCochain(rep, n + 1, out)


def delta_matrix(rep: Representation, n: int) -> Matrix:
    """Dense matrix of delta_n : C^n -> C^(n+1)."""
    _check_degree(n + 1)
    a = rep.algebra.dim
    m = rep.dim
    src = a ** n * m
    cols = []
    for key in itertools.product(range(a), repeat=n):
        for y in range(m):
            basis = HCochain(rep, n, {key: [rep.field.one() if t == y
                                            else rep.field.zero()
                                            for t in range(m)]})
            cols.append(hdelta(rep, basis).dense())
    tgt = a ** (n + 1) * m
    data = [[cols[c][r] for c in range(src)] for r in range(tgt)]
    return Matrix(rep.field, data, cols=src)


def is_cocycle(rep: Representation, f: HCochain) -> bool:
    return hdelta(rep, f).is_zero()


def is_coboundary(rep: Representation, f: HCochain):
    """A deterministic preimage g with delta g = f, or None."""
    if f.degree == 0:
        return HCochain(rep, 0) if f.is_zero() else None
    mat = delta_matrix(rep, f.degree - 1)
    sol = solve(mat, f.dense())
    if sol is None:
        return None
    return HCochain.from_dense(rep, f.degree - 1, sol)


def cocycle_space(rep: Representation, n: int) -> Subspace:
    return kernel_basis(delta_matrix(rep, n))


def coboundary_space(rep: Representation, n: int) -> Subspace:
    """B^n as a subspace of C^n coordinates."""
    a = rep.algebra.dim
    m = rep.dim
    amb = a ** n * m
    if n == 0:
        return Subspace.zero(rep.field, amb)
    mat = delta_matrix(rep, n - 1)
    return Subspace.from_rows(rep.field, amb, mat.transpose().data)


def cohomology_dim(rep: Representation, n: int) -> int:
    _check_degree(n)
    z = cocycle_space(rep, n).dim
    b = coboundary_space(rep, n).dim
    return z - b


class HClass:
    """A cohomology class: a representative plus quotient coordinates."""

    def __init__(self, rep, representative: HCochain, coords):
        self.rep = rep
        self.degree = representative.degree
        self.representative = representative
        self.coords = list(coords)

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        return (isinstance(other, HClass) and self.degree == other.degree
                and len(self.coords) == len(other.coords)
                and all(a == b for a, b in zip(self.coords, other.coords)))

    def add(self, other):
        f = self.rep.field
        return HClass(self.rep, self.representative.add(other.representative),
                      [f.add(a, b) for a, b in zip(self.coords, other.coords)])

    def scale(self, c):
        f = self.rep.field
        return HClass(self.rep, self.representative.scale(c),
                      [f.mul(c, x) for x in self.coords])


def class_of(rep: Representation, f: HCochain) -> HClass:
    if not is_cocycle(rep, f):
        raise NotCocycle(f"degree-{f.degree} cochain is not a cocycle")
    z = cocycle_space(rep, f.degree)
    zcoords = z.coords_of(f.dense())
    b = coboundary_space(rep, f.degree)
    b_in_z = [z.coords_of(row) for row in b.basis.data]
    bz = Subspace.from_rows(rep.field, z.dim, b_in_z)
    q = quotient(z.dim, bz)
    return HClass(rep, f, q.project(zcoords))
