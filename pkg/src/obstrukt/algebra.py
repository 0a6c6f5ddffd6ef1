"""Structure-constant algebras, Lie algebras, and bimodules.

Multiplication tables are stored sparsely: ``mul[(i, j)]`` is a dict
``k -> coeff`` meaning e_i e_j = sum_k coeff e_k, omitted pairs are zero.
Validators report violations instead of raising so callers can emit full
diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import (DimensionMismatch, Matrix, vec_add, vec_is_zero, vec_sub,
                     vec_zero)


@dataclass
class Violation:
    kind: str
    indices: tuple
    diff: list

    def to_json(self, f):
        return {"kind": self.kind, "indices": list(self.indices),
                "diff": [f.to_str(x) for x in self.diff]}


def _clean_table(field, table):
    out = {}
    for key, terms in table.items():
        t = {k: v for k, v in terms.items() if v}
        if t:
            out[key] = t
    return out


class AlgebraSC:
    """Finite-dimensional associative algebra given by structure constants."""

    def __init__(self, field, dim, names=None, mul=None, unital_idx=None):
        self.field = field
        self.dim = dim
        self.names = list(names) if names else [f"e{i}" for i in range(dim)]
        if len(self.names) != dim:
            raise DimensionMismatch("need one name per basis element")
        self.mul = _clean_table(field, mul or {})
        self.unital_idx = unital_idx

    def __repr__(self):
        return f"AlgebraSC(dim {self.dim} over {self.field!r})"

    def basis_vec(self, i):
        v = vec_zero(self.field, self.dim)
        v[i] = self.field.one()
        return v

    def mul_basis(self, i, j):
        return self.mul.get((i, j), {})

    def mul_vec(self, x, y):
        f = self.field
        out = vec_zero(f, self.dim)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = f.mul(a, b)
                for k, c in self.mul_basis(i, j).items():
                    out[k] = f.add(out[k], f.mul(ab, c))
        return out

    def left_mult_matrix(self, x):
        """Matrix of k -> x.k on coordinate columns."""
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for i, a in enumerate(x):
            if not a:
                continue
            for j in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    m.data[k][j] = f.add(m.data[k][j], f.mul(a, c))
        return m

    def right_mult_matrix(self, x):
        """Matrix of k -> k.x on coordinate columns."""
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for j, a in enumerate(x):
            if not a:
                continue
            for i in range(self.dim):
                for k, c in self.mul_basis(i, j).items():
                    m.data[k][i] = f.add(m.data[k][i], f.mul(a, c))
        return m


class LieAlgebraSC:
    """Finite-dimensional Lie algebra given by a bracket tensor."""

    def __init__(self, field, dim, names=None, bracket=None):
        self.field = field
        self.dim = dim
        self.names = list(names) if names else [f"x{i}" for i in range(dim)]
        if len(self.names) != dim:
            raise DimensionMismatch("need one name per basis element")
        self.bracket = _clean_table(field, bracket or {})

    def __repr__(self):
        return f"LieAlgebraSC(dim {self.dim} over {self.field!r})"

    def basis_vec(self, i):
        v = vec_zero(self.field, self.dim)
        v[i] = self.field.one()
        return v

    def bracket_basis(self, i, j):
        return self.bracket.get((i, j), {})

    def bracket_vec(self, x, y):
        f = self.field
        out = vec_zero(f, self.dim)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = f.mul(a, b)
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = f.add(out[k], f.mul(ab, c))
        return out


class BimoduleSC:
    """A-A-bimodule by sparse action tensors over a fixed AlgebraSC."""

    def __init__(self, over, dim, left=None, right=None, names=None):
        self.over = over
        self.dim = dim
        self.field = over.field
        self.names = list(names) if names else [f"m{i}" for i in range(dim)]
        # left[(a, x)] : coeffs of a . m_x ; right[(a, x)] : coeffs of m_x . a
        self.left = _clean_table(self.field, left or {})
        self.right = _clean_table(self.field, right or {})

    def __repr__(self):
        return f"BimoduleSC(dim {self.dim} over {self.over!r})"

    def act_left_basis(self, a, x):
        return self.left.get((a, x), {})

    def act_right_basis(self, a, x):
        return self.right.get((a, x), {})

    def act_left(self, avec, mvec):
        f = self.field
        out = vec_zero(f, self.dim)
        for a, ca in enumerate(avec):
            if not ca:
                continue
            for x, cx in enumerate(mvec):
                if not cx:
                    continue
                cc = f.mul(ca, cx)
                for y, c in self.act_left_basis(a, x).items():
                    out[y] = f.add(out[y], f.mul(cc, c))
        return out

    def act_right(self, mvec, avec):
        f = self.field
        out = vec_zero(f, self.dim)
        for a, ca in enumerate(avec):
            if not ca:
                continue
            for x, cx in enumerate(mvec):
                if not cx:
                    continue
                cc = f.mul(ca, cx)
                for y, c in self.act_right_basis(a, x).items():
                    out[y] = f.add(out[y], f.mul(cc, c))
        return out

    def left_matrix(self, a):
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for x in range(self.dim):
            for y, c in self.act_left_basis(a, x).items():
                m.data[y][x] = c
        return m

    def right_matrix(self, a):
        f = self.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for x in range(self.dim):
            for y, c in self.act_right_basis(a, x).items():
                m.data[y][x] = c
        return m


# ---------------------------------------------------------------------------
# validators: report, don't throw


def _sparse_acc(f, acc, terms, coeff):
    for t, c in terms.items():
        val = f.add(acc.get(t, f.zero()), f.mul(coeff, c))
        if val:
            acc[t] = val
        else:
            acc.pop(t, None)


def validate_associative(a: AlgebraSC):
    """All violations of (e_i e_j) e_k = e_i (e_j e_k), empty iff associative."""
    out = []
    f = a.field
    neg1 = f.neg(f.one())
    for i in range(a.dim):
        for j in range(a.dim):
            eij = a.mul_basis(i, j)
            for k in range(a.dim):
                acc = {}
                for t, c in eij.items():
                    _sparse_acc(f, acc, a.mul_basis(t, k), c)
                for t, c in a.mul_basis(j, k).items():
                    _sparse_acc(f, acc, a.mul_basis(i, t), f.mul(neg1, c))
                if acc:
                    d = vec_zero(f, a.dim)
                    for t, c in acc.items():
                        d[t] = c
                    out.append(Violation("associativity", (i, j, k), d))
    if a.unital_idx is not None:
        u = a.basis_vec(a.unital_idx)
        for i in range(a.dim):
            ei = a.basis_vec(i)
            for tag, got in (("left_unit", a.mul_vec(u, ei)),
                             ("right_unit", a.mul_vec(ei, u))):
                d = vec_sub(f, got, ei)
                if not vec_is_zero(d):
                    out.append(Violation(tag, (a.unital_idx, i), d))
    return out


def validate_jacobi(g: LieAlgebraSC):
    """Antisymmetry (incl. [x,x]=0) and the Jacobi identity on basis triples."""
    out = []
    f = g.field
    for i in range(g.dim):
        d = g.bracket_vec(g.basis_vec(i), g.basis_vec(i))
        if not vec_is_zero(d):
            out.append(Violation("alternating", (i, i), d))
    for i in range(g.dim):
        for j in range(g.dim):
            d = vec_add(f, g.bracket_vec(g.basis_vec(i), g.basis_vec(j)),
                        g.bracket_vec(g.basis_vec(j), g.basis_vec(i)))
            if not vec_is_zero(d):
                out.append(Violation("antisymmetry", (i, j), d))
    for i in range(g.dim):
        xi = g.basis_vec(i)
        for j in range(g.dim):
            xj = g.basis_vec(j)
            for k in range(g.dim):
                xk = g.basis_vec(k)
                s = g.bracket_vec(xi, g.bracket_vec(xj, xk))
                s = vec_add(f, s, g.bracket_vec(xj, g.bracket_vec(xk, xi)))
                s = vec_add(f, s, g.bracket_vec(xk, g.bracket_vec(xi, xj)))
                if not vec_is_zero(s):
                    out.append(Violation("jacobi", (i, j, k), s))
    return out


def validate_bimodule(m: BimoduleSC):
    """The three bimodule axioms on all basis triples."""
    out = []
    f = m.field
    a = m.over
    for i in range(a.dim):
        ei = a.basis_vec(i)
        for j in range(a.dim):
            ej = a.basis_vec(j)
            eij = a.mul_vec(ei, ej)
            for x in range(m.dim):
                mx = [f.one() if t == x else f.zero() for t in range(m.dim)]
                d = vec_sub(f, m.act_left(eij, mx), m.act_left(ei, m.act_left(ej, mx)))
                if not vec_is_zero(d):
                    out.append(Violation("left_assoc", (i, j, x), d))
                d = vec_sub(f, m.act_right(mx, eij), m.act_right(m.act_right(mx, ei), ej))
                if not vec_is_zero(d):
                    out.append(Violation("right_assoc", (i, j, x), d))
                d = vec_sub(f, m.act_right(m.act_left(ei, mx), ej),
                            m.act_left(ei, m.act_right(mx, ej)))
                if not vec_is_zero(d):
                    out.append(Violation("middle_assoc", (i, j, x), d))
    return out


# ---------------------------------------------------------------------------
# constructions


def lieify(k: AlgebraSC) -> LieAlgebraSC:
    """Commutator Lie algebra of an associative algebra."""
    f = k.field
    bracket = {}
    for i in range(k.dim):
        for j in range(k.dim):
            d = vec_sub(f, k.mul_vec(k.basis_vec(i), k.basis_vec(j)),
                        k.mul_vec(k.basis_vec(j), k.basis_vec(i)))
            terms = {t: c for t, c in enumerate(d) if c}
            if terms:
                bracket[(i, j)] = terms
    return LieAlgebraSC(f, k.dim, names=k.names, bracket=bracket)


def direct_sum(a: AlgebraSC, b: AlgebraSC) -> AlgebraSC:
    if a.field != b.field:
        raise DimensionMismatch("direct sum needs a common field")
    mul = {}
    for (i, j), terms in a.mul.items():
        mul[(i, j)] = dict(terms)
    off = a.dim
    for (i, j), terms in b.mul.items():
        mul[(i + off, j + off)] = {k + off: c for k, c in terms.items()}
    names = [f"a.{n}" for n in a.names] + [f"b.{n}" for n in b.names]
    return AlgebraSC(a.field, a.dim + b.dim, names=names, mul=mul)


def self_bimodule(a: AlgebraSC) -> BimoduleSC:
    """A acting on itself by multiplication."""
    left = {}
    right = {}
    for (i, j), terms in a.mul.items():
        left[(i, j)] = dict(terms)
        right[(j, i)] = dict(terms)
    return BimoduleSC(a, a.dim, left=left, right=right, names=a.names)


def zero_bimodule(a: AlgebraSC, dim: int, names=None) -> BimoduleSC:
    return BimoduleSC(a, dim, names=names)
