"""Degree-truncated universal enveloping algebra with PBW straightening.

Basis monomials are weakly increasing index words of length <= bound;
products straighten with x y = y x + [x, y] and overflow loudly instead
of truncating silently.  Elements are sparse dicts word -> scalar.
"""

from __future__ import annotations

from .algebra import LieAlgebraSC


class DegreeOverflow(ValueError):
    def __init__(self, needed, bound):
        self.needed = needed
        self.bound = bound
        super().__init__(f"product needs degree {needed} > bound {bound}; "
                         "raise the truncation bound")


class PBWAlgebra:
    """U(g) up to degree `bound`, with partial multiplication.

    Straightening results are memoized; the cache is grow-only and not
    synchronized, so share an instance across threads only behind an
    external lock (or keep it thread-confined).
    """

    def __init__(self, g: LieAlgebraSC, bound: int):
        if bound < 2:
            raise ValueError("truncation bound must be at least 2")
        self.g = g
        self.field = g.field
        self.bound = bound
        self.basis = self._basis_words()
        self.index = {w: i for i, w in enumerate(self.basis)}
        self._straighten_cache = {}

    def _basis_words(self):
        words = [()]
        layer = [()]
        for _ in range(self.bound):
            nxt = []
            for w in layer:
                lo = w[-1] if w else 0
                for i in range(lo, self.g.dim):
                    nxt.append(w + (i,))
            words.extend(nxt)
            layer = nxt
        return sorted(words, key=lambda w: (len(w), w))

    @property
    def dim(self):
        return len(self.basis)

    def one(self):
        return {(): self.field.one()}

    def gen(self, i):
        return {(i,): self.field.one()}

    def word_degree(self, w):
        return len(w)

    def aug(self, elem) -> object:
        """Augmentation: the coefficient of the empty monomial."""
        return elem.get((), self.field.zero())

    def plus_part(self, elem):
        return {w: c for w, c in elem.items() if w}

    def straighten(self, word):
        """Any index word -> sparse combination of PBW basis words."""
        if len(word) > self.bound:
            raise DegreeOverflow(len(word), self.bound)
        cached = self._straighten_cache.get(word)
        if cached is not None:
            return cached
        f = self.field
        desc = None
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                desc = i
                break
        if desc is None:
            out = {word: f.one()}
        else:
            x, y = word[desc], word[desc + 1]
            swapped = word[:desc] + (y, x) + word[desc + 2:]
            out = dict(self.straighten(swapped))
            for k, c in self.g.bracket_basis(x, y).items():
                shorter = word[:desc] + (k,) + word[desc + 2:]
                for w, cc in self.straighten(shorter).items():
                    val = f.add(out.get(w, f.zero()), f.mul(c, cc))
                    if val:
                        out[w] = val
                    else:
                        out.pop(w, None)
        self._straighten_cache[word] = out
        return out

    def mul_words(self, w1, w2):
        if len(w1) + len(w2) > self.bound:
            raise DegreeOverflow(len(w1) + len(w2), self.bound)
        return self.straighten(w1 + w2)

    def mul(self, e1, e2):
        f = self.field
        out = {}
        for w1, c1 in e1.items():
            for w2, c2 in e2.items():
                c = f.mul(c1, c2)
                for w, cc in self.mul_words(w1, w2).items():
                    val = f.add(out.get(w, f.zero()), f.mul(c, cc))
                    if val:
                        out[w] = val
                    else:
                        out.pop(w, None)
        return out

    def from_lie_vec(self, xvec):
        return {(i,): c for i, c in enumerate(xvec) if c}


def pbw_truncate(g: LieAlgebraSC, bound: int) -> PBWAlgebra:
    return PBWAlgebra(g, bound)


class WordCochain:
    """n-linear map on U+ tuples, tabulated on basis-word tuples.

    Keys are n-tuples of nonempty PBW words; anything involving an empty
    slot is zero (the normalized convention).
    """

    def __init__(self, pbw: PBWAlgebra, mdim: int, degree: int, coeffs=None):
        self.pbw = pbw
        self.mdim = mdim
        self.degree = degree
        self.coeffs = {}
        if coeffs:
            for key, vec in coeffs.items():
                if len(key) != degree:
                    raise ValueError("key length must equal degree")
                if any(vec):
                    self.coeffs[tuple(key)] = list(vec)

    def value(self, key):
        key = tuple(key)
        if any(len(w) == 0 for w in key):
            return [self.pbw.field.zero()] * self.mdim
        return self.coeffs.get(key, [self.pbw.field.zero()] * self.mdim)

    def is_zero(self):
        return not self.coeffs
