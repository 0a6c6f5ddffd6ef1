"""Exact linear algebra over Q and F_p.

Scalars are gmpy2.mpq (fractions.Fraction fallback) for the rationals and
plain ints in [0, p) for prime fields; all arithmetic is routed through a
Field object so the rest of the package never touches raw scalars
directly.  Row reduction works on sparse rows (dicts column -> scalar)
and always produces the canonical reduced row echelon form, which makes
subspace equality and every downstream "solve" deterministic: free
variables are pinned to zero.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction


class FieldError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Common scalar interface; instances compare by field spec."""

    kind = None
    p = None

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def spec_json(self):
        return "Q" if self.kind == "rationals" else {"Fp": self.p}

    def __repr__(self):
        return "QQ" if self.kind == "rationals" else f"GF({self.p})"


class RationalField(Field):
    kind = "rationals"

    def zero(self):
        return _rational(0)

    def one(self):
        return _rational(1)

    def from_int(self, n):
        return _rational(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / _rational(a)

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        return _rational(a) / b

    def parse(self, s):
        if isinstance(s, int):
            return _rational(s)
        s = str(s).strip()
        if "/" in s:
            num, den = s.split("/")
            return _rational(int(num), int(den))
        return _rational(int(s))

    def to_str(self, a):
        return str(a)


class PrimeField(Field):
    kind = "prime_field"

    def __init__(self, p):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, s):
        if isinstance(s, int):
            return s % self.p
        s = str(s).strip()
        if "/" in s:
            num, den = s.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(s) % self.p

    def to_str(self, a):
        return str(a % self.p)


QQ = RationalField()

_gf_cache = {}


def GF(p):
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_json(obj):
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and "Fp" in obj:
        return GF(int(obj["Fp"]))
    raise FieldError(f"unrecognized field spec: {obj!r}")


# ---------------------------------------------------------------------------
# vectors: plain lists of scalars


def vec_zero(field, n):
    z = field.zero()
    return [z] * n


def vec_add(field, x, y):
    return [field.add(a, b) for a, b in zip(x, y)]


def vec_sub(field, x, y):
    return [field.sub(a, b) for a, b in zip(x, y)]


def vec_scale(field, c, x):
    return [field.mul(c, a) for a in x]


def vec_is_zero(x):
    return not any(x)


def vec_eq(x, y):
    return len(x) == len(y) and all(a == b for a, b in zip(x, y))


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense exact matrix; data is a list of row lists."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, cols=None):
        self.field = field
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            for r in self.data:
                if len(r) != self.cols:
                    raise DimensionMismatch("ragged rows")
        else:
            if cols is None:
                raise DimensionMismatch("zero-row matrix needs explicit cols")
            self.cols = cols

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m.data[i][i] = one
        return m

    def copy(self):
        return Matrix(self.field, self.data, cols=self.cols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and all(vec_eq(a, b) for a, b in zip(self.data, other.data)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field!r})"

    def is_zero(self):
        return all(not x for row in self.data for x in row)

    def add(self, other):
        self._shape_check(other)
        f = self.field
        return Matrix(f, [vec_add(f, a, b) for a, b in zip(self.data, other.data)],
                      cols=self.cols)

    def sub(self, other):
        self._shape_check(other)
        f = self.field
        return Matrix(f, [vec_sub(f, a, b) for a, b in zip(self.data, other.data)],
                      cols=self.cols)

    def scale(self, c):
        f = self.field
        return Matrix(f, [vec_scale(f, c, r) for r in self.data], cols=self.cols)

    def _shape_check(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape mismatch")

    def mul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimension mismatch")
        f = self.field
        out = Matrix.zeros(f, self.rows, other.cols)
        odata = out.data
        bdata = other.data
        for i, arow in enumerate(self.data):
            orow = odata[i]
            for k, a in enumerate(arow):
                if not a:
                    continue
                brow = bdata[k]
                for j, b in enumerate(brow):
                    if b:
                        orow[j] = f.add(orow[j], f.mul(a, b))
        return out

    def mul_vec(self, x):
        """Matrix times column vector (x given as a list)."""
        if self.cols != len(x):
            raise DimensionMismatch("vector length mismatch")
        f = self.field
        out = vec_zero(f, self.rows)
        for i, arow in enumerate(self.data):
            acc = out[i]
            for k, a in enumerate(arow):
                if a and x[k]:
                    acc = f.add(acc, f.mul(a, x[k]))
            out[i] = acc
        return out

    def transpose(self):
        f = self.field
        return Matrix(f, [[self.data[i][j] for i in range(self.rows)]
                          for j in range(self.cols)], cols=self.rows)


# ---------------------------------------------------------------------------
# sparse elimination engine

def _to_sparse(field, rows):
    out = []
    for r in rows:
        d = {j: x for j, x in enumerate(r) if x}
        out.append(d)
    return out


def sparse_rref(field, rows, ncols):
    """Canonical rref of sparse rows; returns (pivot_rows, pivot_cols).

    pivot_rows[i] has leading 1 in pivot_cols[i] and zeros in every other
    pivot column; zero rows are dropped.  Only columns < ncols are
    eligible as pivots (extra columns act as augmentation).
    """
    buckets = {}
    for r in rows:
        if not r:
            continue
        lead = min(r)
        buckets.setdefault(lead, []).append(dict(r))
    piv_rows = []
    piv_cols = []
    for c in range(ncols):
        queue = buckets.pop(c, None)
        if not queue:
            continue
        piv = queue.pop(0)
        inv = field.inv(piv[c])
        if inv != field.one():
            piv = {j: field.mul(inv, x) for j, x in piv.items()}
        # clear column c from remaining queued rows
        for row in queue:
            factor = row.pop(c)
            for j, x in piv.items():
                if j == c:
                    continue
                val = field.sub(row.get(j, field.zero()), field.mul(factor, x))
                if val:
                    row[j] = val
                else:
                    row.pop(j, None)
            if row:
                buckets.setdefault(min(row), []).append(row)
        # back-substitute into earlier pivot rows for fully reduced form
        for prow in piv_rows:
            if c in prow:
                factor = prow.pop(c)
                for j, x in piv.items():
                    if j == c:
                        continue
                    val = field.sub(prow.get(j, field.zero()), field.mul(factor, x))
                    if val:
                        prow[j] = val
                    else:
                        prow.pop(j, None)
        piv_rows.append(piv)
        piv_cols.append(c)
    leftovers = [row for rows_ in buckets.values() for row in rows_]
    return piv_rows, piv_cols, leftovers


def rref(m: Matrix) -> Matrix:
    """Canonical reduced row echelon form, same shape as the input."""
    f = m.field
    piv_rows, _, _ = sparse_rref(f, _to_sparse(f, m.data), m.cols)
    out = Matrix.zeros(f, m.rows, m.cols)
    for i, row in enumerate(piv_rows):
        for j, x in row.items():
            out.data[i][j] = x
    return out


def rank(m: Matrix) -> int:
    piv_rows, _, _ = sparse_rref(m.field, _to_sparse(m.field, m.data), m.cols)
    return len(piv_rows)


def solve(m: Matrix, rhs):
    """Deterministic solve of m x = rhs; free variables are zero.

    Returns the solution vector or None when the system is inconsistent.
    """
    if len(rhs) != m.rows:
        raise DimensionMismatch("rhs length must equal row count")
    return solve_many(m, [rhs])[0]


def solve_many(m: Matrix, rhs_list):
    """Solve m x = rhs for a batch of right-hand sides in one elimination."""
    f = m.field
    n = m.cols
    k = len(rhs_list)
    for rhs in rhs_list:
        if len(rhs) != m.rows:
            raise DimensionMismatch("rhs length must equal row count")
    rows = []
    for i, r in enumerate(m.data):
        d = {j: x for j, x in enumerate(r) if x}
        for t, rhs in enumerate(rhs_list):
            if rhs[i]:
                d[n + t] = rhs[i]
        if d:
            rows.append(d)
    piv_rows, piv_cols, leftovers = sparse_rref(f, rows, n)
    bad = [False] * k
    for row in leftovers:
        # row is supported entirely on rhs columns: those systems fail
        for j in row:
            bad[j - n] = True
    sols = []
    for t in range(k):
        if bad[t]:
            sols.append(None)
            continue
        x = vec_zero(f, n)
        for c, row in zip(piv_cols, piv_rows):
            x[c] = row.get(n + t, f.zero())
        sols.append(x)
    return sols


# ---------------------------------------------------------------------------
# subspaces and quotients


class Subspace:
    """Row span in canonical rref; equality of spans is equality of bases."""

    __slots__ = ("ambient_dim", "basis", "pivot_cols")

    def __init__(self, ambient_dim, basis, pivot_cols):
        self.ambient_dim = ambient_dim
        self.basis = basis  # rref, no zero rows
        self.pivot_cols = tuple(pivot_cols)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"

    @classmethod
    def from_rows(cls, field, ambient_dim, rows):
        sp = [{j: x for j, x in enumerate(r) if x} for r in rows]
        piv_rows, piv_cols, _ = sparse_rref(field, sp, ambient_dim)
        basis = Matrix.zeros(field, len(piv_rows), ambient_dim)
        for i, row in enumerate(piv_rows):
            for j, x in row.items():
                basis.data[i][j] = x
        return cls(ambient_dim, basis, tuple(piv_cols))

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls.from_rows(field, ambient_dim, [])

    @classmethod
    def full(cls, field, ambient_dim):
        return cls.from_rows(field, ambient_dim,
                             Matrix.identity(field, ambient_dim).data)

    @property
    def dim(self):
        return self.basis.rows

    @property
    def field(self):
        return self.basis.field

    def reduce(self, v):
        """Subtract the projection onto the span: kills pivot coordinates."""
        f = self.basis.field
        v = list(v)
        for i, c in enumerate(self.pivot_cols):
            if v[c]:
                factor = v[c]
                row = self.basis.data[i]
                for j in range(self.ambient_dim):
                    if row[j]:
                        v[j] = f.sub(v[j], f.mul(factor, row[j]))
        return v

    def contains(self, v):
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector has wrong ambient dimension")
        return vec_is_zero(self.reduce(v))

    def coords_of(self, v):
        """Coordinates of v in the rref basis, or None if v is outside."""
        coords = [v[c] for c in self.pivot_cols]
        if not self.contains(v):
            return None
        return coords

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __contains__(self, v):
        return self.contains(v)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    return Subspace.from_rows(a.field, a.ambient_dim, a.basis.data + b.basis.data)


def kernel_basis(m: Matrix) -> Subspace:
    """Canonical basis of the null space of m."""
    f = m.field
    piv_rows, piv_cols, _ = sparse_rref(f, _to_sparse(f, m.data), m.cols)
    piv_set = set(piv_cols)
    free = [j for j in range(m.cols) if j not in piv_set]
    rows = []
    for j in free:
        v = vec_zero(f, m.cols)
        v[j] = f.one()
        for c, row in zip(piv_cols, piv_rows):
            if j in row:
                v[c] = f.neg(row[j])
        rows.append(v)
    return Subspace.from_rows(f, m.cols, rows)


class QuotientSpace:
    """Ambient space modulo a subspace, coordinatized on non-pivot columns."""

    __slots__ = ("ambient_dim", "denominator", "rep_cols")

    def __init__(self, ambient_dim, denominator, rep_cols):
        self.ambient_dim = ambient_dim
        self.denominator = denominator
        self.rep_cols = tuple(rep_cols)  # complement coordinates, ascending

    def __repr__(self):
        return f"QuotientSpace(dim {self.dim} of {self.ambient_dim})"

    @property
    def dim(self):
        return len(self.rep_cols)

    @property
    def field(self):
        return self.denominator.field

    def project(self, v):
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector has wrong ambient dimension")
        red = self.denominator.reduce(v)
        return [red[c] for c in self.rep_cols]

    def lift(self, coords):
        if len(coords) != self.dim:
            raise DimensionMismatch("coordinate length mismatch")
        f = self.field
        v = vec_zero(f, self.ambient_dim)
        for c, x in zip(self.rep_cols, coords):
            v[c] = x
        return v


def quotient(ambient_dim: int, s: Subspace) -> QuotientSpace:
    if s.ambient_dim != ambient_dim:
        raise DimensionMismatch("subspace has wrong ambient dimension")
    piv = set(s.pivot_cols)
    reps = tuple(j for j in range(ambient_dim) if j not in piv)
    return QuotientSpace(ambient_dim, s, reps)
