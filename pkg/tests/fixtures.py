"""Shared fixture algebras for the test suite."""

from obstrukt.fields import QQ, Matrix
from obstrukt.algebra import AlgebraSC, BimoduleSC, LieAlgebraSC
from obstrukt.obstruction import ExtensionSC


def q(n):
    return QQ.from_int(n)


def _mul(table):
    return {key: {k: q(v) for k, v in terms.items()} for key, terms in table.items()}


def null1():
    return AlgebraSC(QQ, 1, names=["x"], mul={})


def null2():
    return AlgebraSC(QQ, 2, names=["x", "y"], mul={})


def unital1():
    return AlgebraSC(QQ, 1, names=["e"], mul=_mul({(0, 0): {0: 1}}), unital_idx=0)


def dual_numbers(field=QQ):
    one = field.one()
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}}
    return AlgebraSC(field, 2, names=["1", "t"], mul=mul, unital_idx=0)


def ut2():
    """2x2 upper triangular matrices, basis (e11, e12, e22)."""
    return AlgebraSC(QQ, 3, names=["e11", "e12", "e22"],
                     mul=_mul({(0, 0): {0: 1}, (0, 1): {1: 1},
                               (1, 2): {1: 1}, (2, 2): {2: 1}}))


def trunc_poly3():
    """t.Q[t]/(t^4), basis (t, t^2, t^3): non-unital, Anni = span(t^3)."""
    return AlgebraSC(QQ, 3, names=["t", "t2", "t3"],
                     mul=_mul({(0, 0): {1: 1}, (0, 1): {2: 1}, (1, 0): {2: 1}}))


def poly_tower():
    """0 -> (t^2) -> Q[t]/(t^4) -> Q[t]/(t^2) -> 0 with the obvious section."""
    one = QQ.one()
    bmul = {}
    for i in range(4):
        for j in range(4):
            if i + j < 4:
                bmul[(i, j)] = {i + j: one}
    b = AlgebraSC(QQ, 4, names=["1", "t", "t2", "t3"], mul=bmul, unital_idx=0)
    a = dual_numbers()
    k = AlgebraSC(QQ, 2, names=["t2", "t3"], mul={})
    alpha = Matrix(QQ, [[q(0), q(0)], [q(0), q(0)], [q(1), q(0)], [q(0), q(1)]])
    beta = Matrix(QQ, [[q(1), q(0), q(0), q(0)], [q(0), q(1), q(0), q(0)]])
    gamma = Matrix(QQ, [[q(1), q(0)], [q(0), q(1)], [q(0), q(0)], [q(0), q(0)]])
    return ExtensionSC(b, a, k, alpha, beta, gamma)


def ut2_nonflat_tower():
    """0 -> (e12, e22) -> ut2 -> F -> 0 with a bent section e -> e11 + 2 e22.

    The kernel has nonzero products (xy = x, y^2 = y), so the induced law
    is genuinely non-flat; its biannihilator is zero.
    """
    b = ut2()
    a = unital1()
    k = AlgebraSC(QQ, 2, names=["e12", "e22"],
                  mul=_mul({(0, 1): {0: 1}, (1, 1): {1: 1}}))
    alpha = Matrix(QQ, [[q(0), q(0)], [q(1), q(0)], [q(0), q(1)]])
    beta = Matrix(QQ, [[q(1), q(0), q(0)]])
    gamma = Matrix(QQ, [[q(1)], [q(0)], [q(2)]])
    return ExtensionSC(b, a, k, alpha, beta, gamma)


def ut2_tower():
    """0 -> (e12) -> ut2 -> Q x Q -> 0, split by the diagonal."""
    b = ut2()
    a = AlgebraSC(QQ, 2, names=["d1", "d2"],
                  mul=_mul({(0, 0): {0: 1}, (1, 1): {1: 1}}), unital_idx=None)
    k = AlgebraSC(QQ, 1, names=["e12"], mul={})
    alpha = Matrix(QQ, [[q(0)], [q(1)], [q(0)]])
    beta = Matrix(QQ, [[q(1), q(0), q(0)], [q(0), q(0), q(1)]])
    gamma = Matrix(QQ, [[q(1), q(0)], [q(0), q(0)], [q(0), q(1)]])
    return ExtensionSC(b, a, k, alpha, beta, gamma)


def aug_module(a):
    """1-dim module where the unit acts as 1 and t as 0 (dual numbers)."""
    one = a.field.one()
    return BimoduleSC(a, 1, left={(0, 0): {0: one}}, right={(0, 0): {0: one}},
                      names=["m"])


def left_aug_module(a):
    """Augmentation action on the left only; the right action is zero."""
    one = a.field.one()
    return BimoduleSC(a, 1, left={(0, 0): {0: one}}, names=["m"])


def zero_module(a, dim=1):
    return BimoduleSC(a, dim)


def abelian_lie(dim=3):
    return LieAlgebraSC(QQ, dim, bracket={})


def heisenberg():
    one = QQ.one()
    return LieAlgebraSC(QQ, 3, names=["x", "y", "z"],
                        bracket={(0, 1): {2: one}, (1, 0): {2: QQ.neg(one)}})


def sl2():
    """Basis (e, f, h): [e,f]=h, [h,e]=2e, [h,f]=-2f."""
    return LieAlgebraSC(QQ, 3, names=["e", "f", "h"], bracket={
        (0, 1): {2: q(1)}, (1, 0): {2: q(-1)},
        (2, 0): {0: q(2)}, (0, 2): {0: q(-2)},
        (2, 1): {1: q(-2)}, (1, 2): {1: q(2)},
    })


ASSOC_FIXTURES = {
    "null1": null1,
    "unital1": unital1,
    "dual": dual_numbers,
    "ut2": ut2,
    "trunc_poly3": trunc_poly3,
    "null2": null2,
}
