#!/usr/bin/env python3
"""Standalone rank oracle for Hochschild cohomology dimensions.

Direct sympy assembly of the bar-complex coboundary with bimodule
coefficients; no imports from the main package.

    python tests/oracles/hochschild_rank_oracle.py
"""

import itertools
import json

import sympy


def hoch_delta_matrix(adim, c, mdim, left, right, n):
    """Matrix of delta: C^n -> C^(n+1).

    c[i][j][k]     structure constants e_i e_j = sum_k c[i][j][k] e_k
    left[a][x][y]  a . e_x = sum_y left[a][x][y] e_y
    right[a][x][y] e_x . a = sum_y right[a][x][y] e_y
    Cochain coordinates: (n-tuple of A-indices, module coord).
    """
    rows = list(itertools.product(range(adim), repeat=n + 1))
    cols = list(itertools.product(range(adim), repeat=n))
    col_index = {t: i for i, t in enumerate(cols)}
    mat = sympy.zeros(len(rows) * mdim, len(cols) * mdim)
    for ri, tup in enumerate(rows):
        a1, rest, alast = tup[0], tup[1:], tup[-1]
        for y in range(mdim):
            for yy in range(mdim):
                if left[a1][yy][y] != 0:
                    mat[ri * mdim + y, col_index[rest] * mdim + yy] += left[a1][yy][y]
        for i in range(n):
            sign = (-1) ** (i + 1)
            for k in range(adim):
                coeff = c[tup[i]][tup[i + 1]][k]
                if coeff == 0:
                    continue
                merged = tup[:i] + (k,) + tup[i + 2:]
                for y in range(mdim):
                    mat[ri * mdim + y, col_index[merged] * mdim + y] += sign * coeff
        sign = (-1) ** (n + 1)
        head = tup[:-1]
        for y in range(mdim):
            for yy in range(mdim):
                if right[alast][yy][y] != 0:
                    mat[ri * mdim + y, col_index[head] * mdim + yy] += sign * right[alast][yy][y]
    return mat


def hochschild_dims(adim, c, mdim, left, right, maxdeg):
    dims = []
    for n in range(maxdeg + 1):
        cn = adim ** n * mdim
        dn = hoch_delta_matrix(adim, c, mdim, left, right, n)
        z = cn - dn.rank()
        b = 0 if n == 0 else hoch_delta_matrix(adim, c, mdim, left, right, n - 1).rank()
        dims.append(z - b)
    return dims


def _dense(adim, table):
    c = [[[sympy.Integer(0)] * adim for _ in range(adim)] for _ in range(adim)]
    for (i, j), terms in table.items():
        for k, v in terms.items():
            c[i][j][k] = sympy.Integer(v)
    return c


def _self_bimodule(adim, c):
    left = [[[c[a][x][y] for y in range(adim)] for x in range(adim)] for a in range(adim)]
    right = [[[c[x][a][y] for y in range(adim)] for x in range(adim)] for a in range(adim)]
    return left, right


def fixture_dims(maxdeg=3):
    out = {}

    # dual numbers Q[t]/(t^2), basis (1, t), coefficients in itself
    c = _dense(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})
    left, right = _self_bimodule(2, c)
    out["dual_self"] = hochschild_dims(2, c, 2, left, right, maxdeg)

    # 1-dim unital field, coefficients in itself
    c = _dense(1, {(0, 0): {0: 1}})
    left, right = _self_bimodule(1, c)
    out["unital1_self"] = hochschild_dims(1, c, 1, left, right, maxdeg)

    # 1-dim null algebra, coefficients in itself (all actions zero)
    c = _dense(1, {})
    left, right = _self_bimodule(1, c)
    out["null1_self"] = hochschild_dims(1, c, 1, left, right, maxdeg)

    # dual numbers acting on Q through the augmentation t -> 0
    c = _dense(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})
    aug = [[[sympy.Integer(1)]], [[sympy.Integer(0)]]]
    out["dual_aug"] = hochschild_dims(2, c, 1, aug, aug, maxdeg)

    return out


if __name__ == "__main__":
    print(json.dumps(fixture_dims(), indent=2, sort_keys=True))
