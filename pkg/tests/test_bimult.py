import random

import pytest

from obstrukt.fields import QQ, Matrix
from obstrukt.bimult import (BiPair, OutAlgebra, compute_anni, compute_inn,
                             compute_mul_algebra, epsilon,
                             is_bimultiplication, is_permutable,
                             is_self_permutable, mul_product)
from fixtures import (ASSOC_FIXTURES, dual_numbers, null1, null2, q,
                      trunc_poly3, unital1)

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "oracles"))
from mul_dims_oracle import mul_inn_anni_dims  # noqa: E402

# frozen from tests/oracles/mul_dims_oracle.py
ORACLE_DIMS = {
    "null1": {"mul": 2, "inn": 0, "anni": 1, "out": 2},
    "unital1": {"mul": 1, "inn": 1, "anni": 0, "out": 0},
    "dual": {"mul": 2, "inn": 2, "anni": 0, "out": 0},
    "ut2": {"mul": 3, "inn": 3, "anni": 0, "out": 0},
    "trunc_poly3": {"mul": 4, "inn": 2, "anni": 1, "out": 2},
    "null2": {"mul": 8, "inn": 0, "anni": 2, "out": 8},
}


@pytest.mark.parametrize("name", sorted(ASSOC_FIXTURES))
def test_dims_match_oracle(name):
    k = ASSOC_FIXTURES[name]()
    mul = compute_mul_algebra(k)
    inn = compute_inn(k)
    anni = compute_anni(k)
    out = OutAlgebra(mul, inn)
    got = {"mul": mul.dim, "inn": inn.dim, "anni": anni.dim, "out": out.dim}
    assert got == ORACLE_DIMS[name]


def test_oracle_script_agrees_with_frozen_values():
    fixtures = {
        "null1": (1, {}),
        "unital1": (1, {(0, 0): {0: 1}}),
        "dual": (2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}),
        "ut2": (3, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1},
                    (2, 2): {2: 1}}),
        "trunc_poly3": (3, {(0, 0): {1: 1}, (0, 1): {2: 1}, (1, 0): {2: 1}}),
        "null2": (2, {}),
    }
    for name, (n, table) in fixtures.items():
        assert mul_inn_anni_dims(n, table) == ORACLE_DIMS[name]


@pytest.mark.parametrize("name", sorted(ASSOC_FIXTURES))
def test_exactness_identities(name):
    k = ASSOC_FIXTURES[name]()
    mul = compute_mul_algebra(k)
    inn = compute_inn(k)
    anni = compute_anni(k)
    assert inn.dim + anni.dim == k.dim
    assert OutAlgebra(mul, inn).dim == mul.dim - inn.dim


def test_zero_and_identity_pairs():
    for fix in (null1, unital1, dual_numbers):
        k = fix()
        assert is_bimultiplication(BiPair.zero(QQ, k.dim), k)
        assert is_bimultiplication(BiPair.identity(QQ, k.dim), k)
        assert compute_mul_algebra(k).contains(BiPair.identity(QQ, k.dim))


def test_unequal_scalars_fail_on_unital():
    k = unital1()
    p = BiPair(Matrix(QQ, [[q(2)]]), Matrix(QQ, [[q(3)]]))
    assert not is_bimultiplication(p, k)
    p = BiPair(Matrix(QQ, [[q(2)]]), Matrix(QQ, [[q(2)]]))
    assert is_bimultiplication(p, k)


def test_mul_product_rule():
    # on the null 1-dim algebra: (a1,b1)(a2,b2) = (a1 a2, b2 b1)
    def pair(a, b):
        return BiPair(Matrix(QQ, [[q(a)]]), Matrix(QQ, [[q(b)]]))
    p = mul_product(pair(2, 3), pair(5, 7))
    assert p.u.data[0][0] == q(10)
    assert p.v.data[0][0] == q(21)


def test_mul_product_identity_and_zero():
    k = dual_numbers()
    p = epsilon([q(1), q(2)], k)
    assert mul_product(p, BiPair.identity(QQ, 2)) == p
    assert mul_product(BiPair.zero(QQ, 2), p).is_zero()


def test_epsilon_values():
    k = dual_numbers()
    assert epsilon([q(0), q(0)], k).is_zero()
    assert epsilon(k.basis_vec(0), k) == BiPair.identity(QQ, 2)
    p = epsilon(k.basis_vec(1), k)
    assert p.u == Matrix(QQ, [[q(0), q(0)], [q(1), q(0)]])
    assert p.u == p.v


def test_epsilon_is_homomorphism():
    rng = random.Random(23)
    for name, fix in ASSOC_FIXTURES.items():
        k = fix()
        for _ in range(10):
            x = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
            y = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
            assert epsilon(k.mul_vec(x, y), k) == \
                mul_product(epsilon(x, k), epsilon(y, k))


def test_inner_pairs_self_permutable():
    rng = random.Random(29)
    for fix in ASSOC_FIXTURES.values():
        k = fix()
        for _ in range(5):
            x = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
            assert is_self_permutable(epsilon(x, k))


def test_shift_pairs_not_permutable():
    k = null2()
    shift = Matrix(QQ, [[q(0), q(0)], [q(1), q(0)]])
    p1 = BiPair(shift, shift.transpose())
    assert is_bimultiplication(p1, k)  # all conditions vacuous
    assert not is_self_permutable(p1)
    assert not is_permutable(p1, p1)


def test_inn_is_two_sided_ideal():
    rng = random.Random(31)
    for fix in ASSOC_FIXTURES.values():
        k = fix()
        mul = compute_mul_algebra(k)
        inn = compute_inn(k)
        basis = mul.basis_pairs()
        for _ in range(8):
            if not basis or inn.dim == 0:
                break
            p = basis[rng.randrange(len(basis))]
            x = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
            e = epsilon(x, k)
            assert inn.contains(mul_product(p, e).flatten())
            assert inn.contains(mul_product(e, p).flatten())


def test_mul_space_closed_under_product():
    for fix in ASSOC_FIXTURES.values():
        k = fix()
        mul = compute_mul_algebra(k)
        basis = mul.basis_pairs()
        for p1 in basis:
            assert is_bimultiplication(p1, k)
            for p2 in basis:
                assert mul.contains(mul_product(p1, p2))


def test_out_product_well_defined():
    rng = random.Random(37)
    k = trunc_poly3()
    mul = compute_mul_algebra(k)
    inn = compute_inn(k)
    out = OutAlgebra(mul, inn)
    assert out.dim == 2
    basis = mul.basis_pairs()
    for _ in range(10):
        p1 = basis[rng.randrange(len(basis))]
        p2 = basis[rng.randrange(len(basis))]
        c1, c2 = out.project_pair(p1), out.project_pair(p2)
        base = out.product_on_reps(c1, c2)
        # shift representatives by inner pairs: product class unchanged
        x = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
        y = [q(rng.randint(-3, 3)) for _ in range(k.dim)]
        p1s = p1.add(epsilon(x, k))
        p2s = p2.add(epsilon(y, k))
        assert out.project_pair(mul_product(p1s, p2s)) == base
