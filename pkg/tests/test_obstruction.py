import random

import pytest

from obstrukt.fields import QQ, vec_eq
from obstrukt.algebra import validate_associative
from obstrukt.connections import coupling_from_connection, is_flat
from obstrukt.hochschild import hdelta, is_cocycle
from obstrukt.obstruction import (ObstructionNonzero,
                                  central_representation, crossed_product,
                                  curvature, extension_coupling,
                                  hindrance_check, lift_hindrance,
                                  obstruction_class, obstruction_cocycle,
                                  obstruction_values, verify_independence)
from fixtures import (poly_tower, q, ut2_nonflat_tower, ut2_tower)


def bent_tower():
    # gamma' = gamma + alpha o l with l(1)=0, l(t)=t^2
    return poly_tower().section_shift([[q(0), q(0)], [q(1), q(0)]])


def test_flat_law_zero_curvature():
    mu, h = extension_coupling(ut2_tower())
    assert curvature(mu).is_zero()
    assert all(not v for v in h.values.values()) or h.values == {}


def test_bent_section_nonzero_hindrance():
    mu, h = extension_coupling(bent_tower())
    assert h.value(1, 1) == [q(1), q(2)]
    assert hindrance_check(mu, h)


def test_nonflat_curvature_in_inn_not_alternating():
    mu, h = extension_coupling(ut2_nonflat_tower())
    assert not is_flat(mu)
    curv = curvature(mu)
    assert not curv.is_zero()
    # associative curvature has no antisymmetry to speak of: R(0,0) != -R(0,0)
    assert not curv.value(0, 0).is_zero()


def test_lift_hindrance_deterministic_and_exact():
    mu, _ = extension_coupling(ut2_nonflat_tower())
    curv = curvature(mu)
    h = lift_hindrance(mu, curv)
    assert hindrance_check(mu, h)
    h2 = lift_hindrance(mu, curv)
    assert h == h2


def test_lift_hindrance_zero_curvature_zero_choice():
    mu, _ = extension_coupling(ut2_tower())
    h = lift_hindrance(mu, curvature(mu))
    assert h.values == {}


def test_hindrance_ambiguity_lemma():
    # two hindrances differ by an AnniK-valued map
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    mu = cp.lift
    h = lift_hindrance(mu, curvature(mu))
    rep = central_representation(cp)
    g = {(0, 1): rep.embed([q(3), q(0)]), (1, 1): rep.embed([q(0), q(-2)])}
    h2 = h.add_map(g)
    assert hindrance_check(mu, h2)
    raw1 = obstruction_values(mu, h)
    raw2 = obstruction_values(mu, h2)
    gc = {key: rep.coords(vec) for key, vec in g.items()}
    from obstrukt.hochschild import HCochain
    dg = hdelta(rep, HCochain(rep, 2, gc))
    for key in raw1:
        want = [QQ.add(a, b) for a, b in
                zip(raw1[key], rep.embed(dg.value(key)))]
        assert vec_eq(raw2[key], want)


def test_central_representation_properties():
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    rep = central_representation(cp)
    assert rep.dim == 2  # Anni of the null kernel is everything
    # flatness comes from Representation's bimodule validation; also check
    # the connection view squares correctly
    assert is_flat(rep.rho())


def test_anni_zero_trivial_representation():
    cp = coupling_from_connection(extension_coupling(ut2_nonflat_tower())[0])
    rep = central_representation(cp)
    assert rep.dim == 0
    rpt = obstruction_class(cp)
    assert rpt.cocycle.is_zero()
    assert rpt.vanishes


def test_obstruction_cocycle_extension_necessity():
    for tower in (poly_tower(), bent_tower(), ut2_tower(), ut2_nonflat_tower()):
        mu, h = extension_coupling(tower)
        cp = coupling_from_connection(mu)
        rep = central_representation(cp)
        f = obstruction_cocycle(mu, h, rep)
        assert f.is_zero()


def test_obstruction_class_vanishes_for_extensions():
    for tower in (poly_tower(), bent_tower(), ut2_tower()):
        mu, _ = extension_coupling(tower)
        cp = coupling_from_connection(mu)
        rpt = obstruction_class(cp)
        assert rpt.vanishes
        assert is_cocycle(rpt.rep, rpt.cocycle)


def test_obstruction_identities_31_32():
    # a2.(a3.k) - (a2 a3).k = h(a2,a3) k  and the right-sided twin
    mu, h = extension_coupling(ut2_nonflat_tower())
    a, k = mu.a_ref, mu.k_ref
    rng = random.Random(61)
    for _ in range(20):
        kv = [q(rng.randint(-4, 4)) for _ in range(k.dim)]
        for i in range(a.dim):
            for j in range(a.dim):
                u_i, u_j = mu.pairs[i].u, mu.pairs[j].u
                v_i, v_j = mu.pairs[i].v, mu.pairs[j].v
                prod = a.mul_basis(i, j)
                lin_u = [q(0)] * k.dim
                lin_v = [q(0)] * k.dim
                for r, c in prod.items():
                    lin_u = [QQ.add(x, QQ.mul(c, y)) for x, y in
                             zip(lin_u, mu.pairs[r].u.mul_vec(kv))]
                    lin_v = [QQ.add(x, QQ.mul(c, y)) for x, y in
                             zip(lin_v, mu.pairs[r].v.mul_vec(kv))]
                lhs = [QQ.sub(x, y) for x, y in
                       zip(u_i.mul_vec(u_j.mul_vec(kv)), lin_u)]
                assert vec_eq(lhs, k.mul_vec(h.value(i, j), kv))
                rhs = [QQ.sub(x, y) for x, y in
                       zip(v_j.mul_vec(v_i.mul_vec(kv)), lin_v)]
                assert vec_eq(rhs, k.mul_vec(kv, h.value(i, j)))


def test_verify_independence_trivial_l():
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    h = lift_hindrance(cp.lift, curvature(cp.lift))
    k = cp.k_ref
    zero_l = [[q(0)] * k.dim for _ in range(cp.a_ref.dim)]
    rpt = verify_independence(cp, zero_l, h)
    assert rpt["curvature_identity"] and rpt["cocycle_equality"]
    assert rpt["witnesses"] == []


def test_verify_independence_random():
    rng = random.Random(67)
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    mu = cp.lift
    h = lift_hindrance(mu, curvature(mu))
    rep = central_representation(cp)
    k = cp.k_ref
    a = cp.a_ref
    for _ in range(10):
        l = [[q(rng.randint(-3, 3)) for _ in range(k.dim)]
             for _ in range(a.dim)]
        g = {(i, j): rep.embed([q(rng.randint(-3, 3))
                                for _ in range(rep.dim)])
             for i in range(a.dim) for j in range(a.dim)}
        rpt = verify_independence(cp, l, h, g)
        assert rpt["curvature_identity"]
        assert rpt["cocycle_equality"]
        assert rpt["hindrance_shift"]
        assert rpt["witnesses"] == []


def test_obstruction_class_invariance_under_lift_change():
    rng = random.Random(71)
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    base = obstruction_class(cp)
    k, a = cp.k_ref, cp.a_ref
    for _ in range(5):
        l = [[q(rng.randint(-2, 2)) for _ in range(k.dim)]
             for _ in range(a.dim)]
        cp2 = coupling_from_connection(cp.lift.shift_by(l))
        rpt = obstruction_class(cp2)
        assert rpt.cls.coords == base.cls.coords


def test_crossed_product_roundtrip():
    for tower in (bent_tower(), ut2_nonflat_tower(), ut2_tower()):
        mu, h = extension_coupling(tower)
        ext = crossed_product(tower.a, tower.k, mu, h)
        assert validate_associative(ext.b) == []
        mu2, h2 = extension_coupling(ext)
        assert all(p1 == p2 for p1, p2 in zip(mu.pairs, mu2.pairs))
        assert h == h2
        assert ext.b.dim == tower.a.dim + tower.k.dim


def test_crossed_product_refuses_nonzero_cochain():
    # class vanishes but the cochain is nonzero: refuse, then adjust via
    # the ambiguity lemma and succeed
    cp = coupling_from_connection(extension_coupling(bent_tower())[0])
    mu = cp.lift
    rep = central_representation(cp)
    h = lift_hindrance(mu, curvature(mu))
    g = {(0, 0): rep.embed([q(1), q(0)])}
    h_bad = h.add_map(g)
    assert hindrance_check(mu, h_bad)
    raw = obstruction_values(mu, h_bad)
    if all(not any(v) for v in raw.values()):  # pragma: no cover
        pytest.skip("perturbation unexpectedly closed")
    with pytest.raises(ObstructionNonzero):
        crossed_product(cp.a_ref, cp.k_ref, mu, h_bad)
    rpt = obstruction_class(coupling_from_connection(mu), hindrance=h_bad,
                            rep=rep)
    assert rpt.vanishes
    ext = crossed_product(cp.a_ref, cp.k_ref, mu, rpt.adjusted_hindrance)
    assert validate_associative(ext.b) == []


def test_section_independence_of_coupling():
    # gamma and gamma + alpha o l induce the same coupling classes
    t1 = poly_tower()
    t2 = bent_tower()
    mu1, _ = extension_coupling(t1)
    mu2, _ = extension_coupling(t2)
    cp1 = coupling_from_connection(mu1)
    out = cp1.out_algebra()
    for i in range(cp1.a_ref.dim):
        assert out.project_pair(mu1.pairs[i]) == out.project_pair(mu2.pairs[i])
