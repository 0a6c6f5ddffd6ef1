"""Curvature, hindrances, the obstruction 3-cocycle, and extensions.

The pipeline: a coupling's lift mu has curvature R(a1,a2) = mu(a1)mu(a2)
- mu(a1 a2), every value of which is inner; a hindrance h lifts R
through eps; f = Delta^mu h lands in the biannihilator and is a cocycle
for the central representation; its class Obs is independent of (mu, h).
Vanishing of Obs is equivalent to extendibility (crossed product one
way, section pullback the other).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraSC, BimoduleSC, validate_associative
from .bimult import BiPair, epsilon
from .connections import (Connection, Coupling, coupling_from_connection,
                          curvature_pair, is_regular, _epsilon_matrix)
from .fields import (DimensionMismatch, Matrix, Subspace, rank,
                     solve_many, vec_add, vec_eq, vec_is_zero, vec_scale,
                     vec_sub, vec_zero)
from .hochschild import HClass, HCochain, Representation, class_of, hdelta, \
    is_coboundary, is_cocycle


class NotInner(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"curvature value at {witness} lies outside Inn(K)")


class ValueEscapesAnnihilator(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"obstruction value at {witness} escapes AnniK; "
                         "mu and h are inconsistent")


class ObstructionNonzero(ValueError):
    pass


class SectionNotSection(ValueError):
    pass


class ProductEscapesKernel(ValueError):
    pass


class Curvature:
    """R^mu on ordered basis pairs; not alternating, and not expected to be."""

    def __init__(self, values):
        self.values = values  # dict (i, j) -> BiPair

    def value(self, i, j) -> BiPair:
        return self.values[(i, j)]

    def is_zero(self):
        return all(p.is_zero() for p in self.values.values())


def curvature(mu: Connection) -> Curvature:
    a = mu.a_ref
    return Curvature({(i, j): curvature_pair(mu, i, j)
                      for i in range(a.dim) for j in range(a.dim)})


class Hindrance:
    """Bilinear h: A (x) A -> K with eps o h = R^mu, on basis pairs."""

    def __init__(self, a_ref: AlgebraSC, k_ref: AlgebraSC, values):
        self.a_ref = a_ref
        self.k_ref = k_ref
        self.values = {}
        for key, vec in values.items():
            if not vec_is_zero(vec):
                self.values[tuple(key)] = list(vec)

    def value(self, i, j):
        return self.values.get((i, j), vec_zero(self.k_ref.field, self.k_ref.dim))

    def value_mixed(self, terms, k_idx=None, j_idx=None):
        """h(x (x) a_j) for x a sparse combination {r: c}, or symmetric."""
        f = self.k_ref.field
        out = vec_zero(f, self.k_ref.dim)
        for r, c in terms.items():
            key = (r, j_idx) if j_idx is not None else (k_idx, r)
            if j_idx is None:
                key = (k_idx, r)
            v = self.value(*key)
            out = vec_add(f, out, vec_scale(f, c, v))
        return out

    def add_map(self, other_values) -> "Hindrance":
        f = self.k_ref.field
        keys = set(self.values) | set(other_values)
        vals = {}
        for key in keys:
            vals[key] = vec_add(f, self.value(*key),
                                other_values.get(key,
                                                 vec_zero(f, self.k_ref.dim)))
        return Hindrance(self.a_ref, self.k_ref, vals)

    def __eq__(self, other):
        if not isinstance(other, Hindrance):
            return False
        f = self.k_ref.field
        keys = set(self.values) | set(other.values)
        return all(vec_is_zero(vec_sub(f, self.value(*k), other.value(*k)))
                   for k in keys)


def lift_hindrance(mu: Connection, curv: Curvature) -> Hindrance:
    """Deterministic preimage of the curvature under eps, per basis pair."""
    k = mu.k_ref
    eps_mat = _epsilon_matrix(k)
    keys = sorted(curv.values)
    sols = solve_many(eps_mat, [curv.values[key].flatten() for key in keys])
    values = {}
    for key, sol in zip(keys, sols):
        if sol is None:
            raise NotInner(key)
        values[key] = sol
    return Hindrance(mu.a_ref, k, values)


def hindrance_check(mu: Connection, h: Hindrance) -> bool:
    """eps o h = R^mu on all basis pairs."""
    k = mu.k_ref
    a = mu.a_ref
    for i in range(a.dim):
        for j in range(a.dim):
            if epsilon(h.value(i, j), k) != curvature_pair(mu, i, j):
                return False
    return True


def obstruction_values(mu: Connection, h: Hindrance):
    """K-valued Delta^mu h on basis triples: the raw obstruction cochain."""
    a = mu.a_ref
    f = a.field
    out = {}
    for i in range(a.dim):
        for j in range(a.dim):
            for k in range(a.dim):
                val = mu.pairs[i].u.mul_vec(h.value(j, k))
                val = vec_sub(f, val, h.value_mixed(a.mul_basis(i, j), j_idx=k))
                val = vec_add(f, val, h.value_mixed(a.mul_basis(j, k), k_idx=i))
                val = vec_sub(f, val, mu.pairs[k].v.mul_vec(h.value(i, j)))
                out[(i, j, k)] = val
    return out


class CentralRepresentation(Representation):
    """rho^xi: the flat restriction of any covering law to AnniK.

    An optional nucleus object (with embed/coords) reroutes the
    identification when the module is an abstract nucleus N = AnniK
    rather than the canonical rref basis of the annihilator.
    """

    def __init__(self, m: BimoduleSC, anni: Subspace, check=True,
                 nucleus=None):
        super().__init__(m, check=check)
        self.anni = anni
        self._nucleus = nucleus

    def embed(self, mcoords):
        """Module coordinates -> K vector."""
        if self._nucleus is not None:
            return self._nucleus.embed(mcoords)
        f = self.field
        out = vec_zero(f, self.anni.ambient_dim)
        for c, row in zip(mcoords, self.anni.basis.data):
            if c:
                out = vec_add(f, out, vec_scale(f, c, row))
        return out

    def coords(self, kvec):
        if self._nucleus is not None:
            return self._nucleus.coords(kvec)
        return self.anni.coords_of(kvec)


def central_representation(coupling: Coupling) -> CentralRepresentation:
    """Restrict the lift to AnniK; verified independent of the lift."""
    mu = coupling.lift
    a, k = mu.a_ref, mu.k_ref
    anni = coupling.anni
    left = {}
    right = {}
    for ai in range(a.dim):
        for x, row in enumerate(anni.basis.data):
            lv = mu.pairs[ai].u.mul_vec(row)
            rv = mu.pairs[ai].v.mul_vec(row)
            lcoords = anni.coords_of(lv)
            rcoords = anni.coords_of(rv)
            if lcoords is None or rcoords is None:
                raise ValueEscapesAnnihilator((ai, x))
            lterms = {y: c for y, c in enumerate(lcoords) if c}
            rterms = {y: c for y, c in enumerate(rcoords) if c}
            if lterms:
                left[(ai, x)] = lterms
            if rterms:
                right[(ai, x)] = rterms
    m = BimoduleSC(a, anni.dim, left=left, right=right)
    rep = CentralRepresentation(m, anni)
    # lift-independence self-check with one deterministic inner shift
    if k.dim:
        l0 = [k.basis_vec(ai % k.dim) for ai in range(a.dim)]
        mu2 = mu.shift_by(l0)
        for ai in range(a.dim):
            for row in anni.basis.data:
                if not vec_eq(mu2.pairs[ai].u.mul_vec(row),
                              mu.pairs[ai].u.mul_vec(row)):
                    raise AssertionError("central action depends on the lift")
    return rep


def obstruction_cocycle(mu: Connection, h: Hindrance,
                        rep: CentralRepresentation) -> HCochain:
    """f = Delta^mu h as an AnniK-valued 3-cochain; verified to be one."""
    if not is_regular(mu):
        raise ValueError("law must be regular")
    if not hindrance_check(mu, h):
        raise ValueError("eps o h differs from the curvature")
    raw = obstruction_values(mu, h)
    coeffs = {}
    for key, val in raw.items():
        coords = rep.coords(val)
        if coords is None:
            raise ValueEscapesAnnihilator(key)
        if any(coords):
            coeffs[key] = coords
    f = HCochain(rep, 3, coeffs)
    if not is_cocycle(rep, f):
        raise AssertionError("obstruction cochain failed the cocycle identity")
    return f


@dataclass
class ObstructionReport:
    coupling: Coupling
    mu: Connection
    h: Hindrance
    rep: CentralRepresentation
    cocycle: HCochain
    cls: HClass
    vanishes: bool
    adjusted_hindrance: Hindrance | None

    def to_json(self):
        f = self.rep.field
        entries = []
        for key in sorted(self.cocycle.coeffs):
            entries.append([list(key),
                            [f.to_str(x) for x in self.cocycle.coeffs[key]]])
        return {
            "anni_dim": self.rep.dim,
            "cocycle": entries,
            "class_coords": [f.to_str(x) for x in self.cls.coords],
            "vanishes": self.vanishes,
            "h3_dim": len(self.cls.coords),
        }


def obstruction_class(coupling: Coupling, hindrance: Hindrance | None = None,
                      rep: CentralRepresentation | None = None) -> ObstructionReport:
    """Assemble curvature -> hindrance -> cocycle -> class over rho^xi.

    A caller-supplied hindrance (e.g. the canonical one of a constructed
    kernel) replaces the deterministic lift; it must lift the curvature.
    """
    mu = coupling.lift
    curv = curvature(mu)
    h = hindrance if hindrance is not None else lift_hindrance(mu, curv)
    if rep is None:
        rep = central_representation(coupling)
    f = obstruction_cocycle(mu, h, rep)
    cls = class_of(rep, f)
    g = is_coboundary(rep, f)
    adjusted = None
    if g is not None:
        ig = {key: rep.embed(vec) for key, vec in g.coeffs.items()}
        neg = {key: vec_scale(rep.field, rep.field.neg(rep.field.one()), vec)
               for key, vec in ig.items()}
        adjusted = h.add_map(neg)
    return ObstructionReport(coupling, mu, h, rep, f, cls,
                             vanishes=g is not None,
                             adjusted_hindrance=adjusted)


# ---------------------------------------------------------------------------
# lift/hindrance independence harness


def verify_independence(coupling: Coupling, l_vectors, h: Hindrance,
                        g_values=None) -> dict:
    """Exact checks of the two perturbation lemmas.

    l_vectors: one K-vector per A-basis index (the map l: A -> K).
    g_values: optional dict (i, j) -> AnniK-valued K-vector.
    Returns a report dict; every identity should hold on valid inputs.
    """
    mu = coupling.lift
    a, k = mu.a_ref, mu.k_ref
    f = a.field
    report = {"curvature_identity": True, "cocycle_equality": True,
              "hindrance_shift": None, "witnesses": []}
    mu2 = mu.shift_by(l_vectors)
    coupling_from_connection(mu2)  # must still cover a coupling

    # correction term: Delta^mu(l) + l.l on basis pairs
    corr = {}
    for i in range(a.dim):
        for j in range(a.dim):
            v = mu.pairs[i].u.mul_vec(l_vectors[j])
            lin = vec_zero(f, k.dim)
            for r, c in a.mul_basis(i, j).items():
                lin = vec_add(f, lin, vec_scale(f, c, l_vectors[r]))
            v = vec_sub(f, v, lin)
            v = vec_add(f, v, mu.pairs[j].v.mul_vec(l_vectors[i]))
            v = vec_add(f, v, k.mul_vec(l_vectors[i], l_vectors[j]))
            corr[(i, j)] = v

    # (i) R^mu' - R^mu = eps o corr
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = curvature_pair(mu2, i, j).sub(curvature_pair(mu, i, j))
            if lhs != epsilon(corr[(i, j)], k):
                report["curvature_identity"] = False
                report["witnesses"].append(("curvature", i, j))

    # (ii) f(mu', h + corr) = f(mu, h), exactly, K-valued
    h2 = h.add_map(corr)
    raw1 = obstruction_values(mu, h)
    raw2 = obstruction_values(mu2, h2)
    for key in raw1:
        if not vec_eq(raw1[key], raw2[key]):
            report["cocycle_equality"] = False
            report["witnesses"].append(("cocycle",) + key)

    # (iii) hindrance ambiguity: f(mu, h + i o g) = f(mu, h) + i o delta g
    if g_values is not None:
        rep = central_representation(coupling)
        ok = True
        g_coeffs = {}
        for key, vec in g_values.items():
            coords = rep.coords(vec)
            if coords is None:
                raise ValueEscapesAnnihilator(key)
            g_coeffs[key] = coords
        g_coch = HCochain(rep, 2, g_coeffs)
        dg = hdelta(rep, g_coch)
        h3 = h.add_map(g_values)
        raw3 = obstruction_values(mu, h3)
        for key in raw1:
            want = vec_add(f, raw1[key], rep.embed(dg.value(key)))
            if not vec_eq(raw3[key], want):
                ok = False
                report["witnesses"].append(("hindrance_shift",) + key)
        report["hindrance_shift"] = ok
    return report


# ---------------------------------------------------------------------------
# extensions (appendix machinery)


class ExtensionSC:
    """0 -> K --alpha--> B --beta--> A -> 0 with a linear section gamma."""

    def __init__(self, b: AlgebraSC, a: AlgebraSC, k: AlgebraSC,
                 alpha: Matrix, beta: Matrix, gamma: Matrix):
        self.b = b
        self.a = a
        self.k = k
        self.alpha = alpha  # dim B x dim K
        self.beta = beta    # dim A x dim B
        self.gamma = gamma  # dim B x dim A
        self.validate()

    def validate(self):
        a, b, k = self.a, self.b, self.k
        if b.dim != a.dim + k.dim:
            raise DimensionMismatch("dim B must be dim A + dim K")
        if (self.alpha.rows, self.alpha.cols) != (b.dim, k.dim):
            raise DimensionMismatch("alpha must be dim B x dim K")
        if (self.beta.rows, self.beta.cols) != (a.dim, b.dim):
            raise DimensionMismatch("beta must be dim A x dim B")
        if (self.gamma.rows, self.gamma.cols) != (b.dim, a.dim):
            raise DimensionMismatch("gamma must be dim B x dim A")
        f = b.field
        if not self.beta.mul(self.alpha).is_zero():
            raise ValueError("beta o alpha must vanish")
        if rank(self.alpha) != k.dim:
            raise ValueError("alpha must be injective")
        if self.beta.mul(self.gamma) != Matrix.identity(f, a.dim):
            raise SectionNotSection("beta o gamma is not the identity on A")
        for i in range(k.dim):
            for j in range(k.dim):
                lhs = self.alpha.mul_vec(k.mul_vec(k.basis_vec(i), k.basis_vec(j)))
                rhs = b.mul_vec(self.alpha.mul_vec(k.basis_vec(i)),
                                self.alpha.mul_vec(k.basis_vec(j)))
                if not vec_eq(lhs, rhs):
                    raise ValueError(f"alpha is not multiplicative at {(i, j)}")
        for i in range(b.dim):
            for j in range(b.dim):
                lhs = self.beta.mul_vec(b.mul_vec(b.basis_vec(i), b.basis_vec(j)))
                rhs = a.mul_vec(self.beta.mul_vec(b.basis_vec(i)),
                                self.beta.mul_vec(b.basis_vec(j)))
                if not vec_eq(lhs, rhs):
                    raise ValueError(f"beta is not multiplicative at {(i, j)}")

    def section_shift(self, l_vectors) -> "ExtensionSC":
        """gamma' = gamma + alpha o l for l: A -> K by basis vectors."""
        f = self.b.field
        g = Matrix(f, [list(r) for r in self.gamma.data], cols=self.a.dim)
        for j, lv in enumerate(l_vectors):
            col = self.alpha.mul_vec(lv)
            for r in range(self.b.dim):
                g.data[r][j] = f.add(g.data[r][j], col[r])
        return ExtensionSC(self.b, self.a, self.k, self.alpha, self.beta, g)


def extension_coupling(ext: ExtensionSC):
    """(mu^gamma, h^gamma) determined by the section; covers xi."""
    a, k, b = ext.a, ext.k, ext.b
    f = b.field
    gammas = [ext.gamma.mul_vec(a.basis_vec(i)) for i in range(a.dim)]
    alphas = [ext.alpha.mul_vec(k.basis_vec(x)) for x in range(k.dim)]

    rhs = []
    for i in range(a.dim):
        for x in range(k.dim):
            rhs.append(b.mul_vec(gammas[i], alphas[x]))
            rhs.append(b.mul_vec(alphas[x], gammas[i]))
    sols = solve_many(ext.alpha, rhs)
    pairs = []
    pos = 0
    for i in range(a.dim):
        u = Matrix.zeros(f, k.dim, k.dim)
        v = Matrix.zeros(f, k.dim, k.dim)
        for x in range(k.dim):
            su, sv = sols[pos], sols[pos + 1]
            pos += 2
            if su is None or sv is None:
                raise ProductEscapesKernel((i, x))
            for r in range(k.dim):
                u.data[r][x] = su[r]
                v.data[r][x] = sv[r]
        pairs.append(BiPair(u, v))
    mu = Connection(a, k, pairs)

    rhs = []
    keys = []
    for i in range(a.dim):
        for j in range(a.dim):
            gg = b.mul_vec(gammas[i], gammas[j])
            lin = vec_zero(f, b.dim)
            for r, c in a.mul_basis(i, j).items():
                lin = vec_add(f, lin, vec_scale(f, c, gammas[r]))
            rhs.append(vec_sub(f, gg, lin))
            keys.append((i, j))
    sols = solve_many(ext.alpha, rhs)
    values = {}
    for key, sol in zip(keys, sols):
        if sol is None:
            raise ProductEscapesKernel(key)
        values[key] = sol
    h = Hindrance(a, k, values)
    return mu, h


def crossed_product(a: AlgebraSC, k: AlgebraSC, mu: Connection,
                    h: Hindrance) -> ExtensionSC:
    """The algebra on A + K with product twisted by mu and h.

    Requires the obstruction cochain Delta^mu h to vanish identically
    (associativity fails otherwise, so we refuse rather than emit a
    non-algebra).
    """
    if not is_regular(mu):
        raise ValueError("law must be regular")
    if not hindrance_check(mu, h):
        raise ValueError("eps o h differs from the curvature")
    raw = obstruction_values(mu, h)
    for key, val in raw.items():
        if not vec_is_zero(val):
            raise ObstructionNonzero(f"Delta^mu h is nonzero at {key}; adjust "
                                     "the hindrance before extending")
    f = a.field
    nb = a.dim + k.dim
    mul = {}

    def put(i, j, vec):
        terms = {t: c for t, c in enumerate(vec) if c}
        if terms:
            mul[(i, j)] = terms

    for i in range(a.dim):
        for j in range(a.dim):
            vec = vec_zero(f, nb)
            for r, c in a.mul_basis(i, j).items():
                vec[r] = c
            hv = h.value(i, j)
            for x, c in enumerate(hv):
                vec[a.dim + x] = c
            put(i, j, vec)
    for i in range(a.dim):
        for x in range(k.dim):
            uv = [mu.pairs[i].u.data[r][x] for r in range(k.dim)]
            vec = vec_zero(f, nb)
            for r, c in enumerate(uv):
                vec[a.dim + r] = c
            put(i, a.dim + x, vec)
            vv = [mu.pairs[i].v.data[r][x] for r in range(k.dim)]
            vec = vec_zero(f, nb)
            for r, c in enumerate(vv):
                vec[a.dim + r] = c
            put(a.dim + x, i, vec)
    for x in range(k.dim):
        for y in range(k.dim):
            prod = k.mul_basis(x, y)
            vec = vec_zero(f, nb)
            for r, c in prod.items():
                vec[a.dim + r] = c
            put(a.dim + x, a.dim + y, vec)

    names = [f"a.{n}" for n in a.names] + [f"k.{n}" for n in k.names]
    b = AlgebraSC(f, nb, names=names, mul=mul)
    bad = validate_associative(b)
    if bad:
        raise AssertionError(f"crossed product failed associativity: {bad[0]}")

    alpha = Matrix.zeros(f, nb, k.dim)
    for x in range(k.dim):
        alpha.data[a.dim + x][x] = f.one()
    beta = Matrix.zeros(f, a.dim, nb)
    for i in range(a.dim):
        beta.data[i][i] = f.one()
    gamma = Matrix.zeros(f, nb, a.dim)
    for i in range(a.dim):
        gamma.data[i][i] = f.one()
    return ExtensionSC(b, a, k, alpha, beta, gamma)
