"""On-disk JSON formats.

All coefficients travel as strings "p/q" (or plain integer strings) so
exactness survives JSON.  Sparse triple format throughout: omitted
entries are zero.

    algebra:    {"field": "Q" | {"Fp": p}, "dim": n, "names": [...],
                 "mul": [[i, j, [[k, "c"], ...]], ...], "unital_idx": i?}
    lie:        same with "bracket"
    bimodule:   {"algebra": "A.json", "dim": m, "left": [[a, x, [[y, "c"],...]],...],
                 "right": [...]}   (algebra path resolved relative to the file)
    connection: {"algebra": ..., "kernel": ..., "pairs": [{"u": [["c",...],...],
                 "v": ...}, ...]}  (matrices as dense row lists)
    cochain:    {"degree": n, "entries": [[[i1..in], j, "c"], ...]}
"""

from __future__ import annotations

import hashlib
import json
import os

from .algebra import AlgebraSC, BimoduleSC, LieAlgebraSC
from .fields import Matrix, field_from_json


class InputError(ValueError):
    pass


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON: {e}") from None


def _parse_terms(field, terms):
    return {int(k): field.parse(c) for k, c in terms}


def _dump_terms(field, terms):
    return [[k, field.to_str(c)] for k, c in sorted(terms.items())]


def algebra_from_json(doc) -> AlgebraSC:
    try:
        field = field_from_json(doc["field"])
        dim = int(doc["dim"])
        mul = {}
        for i, j, terms in doc.get("mul", []):
            mul[(int(i), int(j))] = _parse_terms(field, terms)
        return AlgebraSC(field, dim, names=doc.get("names"), mul=mul,
                         unital_idx=doc.get("unital_idx"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad algebra document: {e}") from None


def algebra_to_json(a: AlgebraSC):
    doc = {"field": a.field.spec_json(), "dim": a.dim, "names": a.names,
           "mul": [[i, j, _dump_terms(a.field, terms)]
                   for (i, j), terms in sorted(a.mul.items())]}
    if a.unital_idx is not None:
        doc["unital_idx"] = a.unital_idx
    return doc


def lie_from_json(doc) -> LieAlgebraSC:
    try:
        field = field_from_json(doc["field"])
        dim = int(doc["dim"])
        bracket = {}
        for i, j, terms in doc.get("bracket", []):
            bracket[(int(i), int(j))] = _parse_terms(field, terms)
        return LieAlgebraSC(field, dim, names=doc.get("names"), bracket=bracket)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad Lie algebra document: {e}") from None


def lie_to_json(g: LieAlgebraSC):
    return {"field": g.field.spec_json(), "dim": g.dim, "names": g.names,
            "bracket": [[i, j, _dump_terms(g.field, terms)]
                        for (i, j), terms in sorted(g.bracket.items())]}


def bimodule_from_json(doc, over: AlgebraSC) -> BimoduleSC:
    try:
        dim = int(doc["dim"])
        left = {}
        for a, x, terms in doc.get("left", []):
            left[(int(a), int(x))] = _parse_terms(over.field, terms)
        right = {}
        for a, x, terms in doc.get("right", []):
            right[(int(a), int(x))] = _parse_terms(over.field, terms)
        return BimoduleSC(over, dim, left=left, right=right, names=doc.get("names"))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad bimodule document: {e}") from None


def bimodule_to_json(m: BimoduleSC, algebra_path):
    return {"algebra": algebra_path, "dim": m.dim, "names": m.names,
            "left": [[a, x, _dump_terms(m.field, terms)]
                     for (a, x), terms in sorted(m.left.items())],
            "right": [[a, x, _dump_terms(m.field, terms)]
                      for (a, x), terms in sorted(m.right.items())]}


def matrix_from_json(field, rows, shape=None) -> Matrix:
    data = [[field.parse(c) for c in row] for row in rows]
    m = Matrix(field, data, cols=shape[1] if shape and not data else None)
    if shape and (m.rows, m.cols) != tuple(shape):
        raise InputError(f"matrix shape {m.rows}x{m.cols}, expected {shape}")
    return m


def matrix_to_json(m: Matrix):
    return [[m.field.to_str(x) for x in row] for row in m.data]


def cochain_entries_from_json(field, doc):
    """Returns (degree, dict tuple->dict coord->scalar)."""
    try:
        degree = int(doc["degree"])
        coeffs = {}
        for idx, j, c in doc.get("entries", []):
            key = tuple(int(t) for t in idx)
            if len(key) != degree:
                raise InputError(f"entry index {key} has length != degree {degree}")
            coeffs.setdefault(key, {})[int(j)] = field.parse(c)
        return degree, coeffs
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad cochain document: {e}") from None


def cochain_entries_to_json(field, degree, coeffs):
    entries = []
    for key in sorted(coeffs):
        for j in sorted(coeffs[key]):
            c = coeffs[key][j]
            if c:
                entries.append([list(key), j, field.to_str(c)])
    return {"degree": degree, "entries": entries}


def connection_from_json(doc, a, k):
    """A connection file: one {"u": rows, "v": rows} block per A-basis."""
    from .bimult import BiPair
    from .connections import Connection
    try:
        pairs = []
        for block in doc["pairs"]:
            u = matrix_from_json(k.field, block["u"], shape=(k.dim, k.dim))
            v = matrix_from_json(k.field, block["v"], shape=(k.dim, k.dim))
            pairs.append(BiPair(u, v))
        if len(pairs) != a.dim:
            raise InputError(f"connection has {len(pairs)} pairs, "
                             f"algebra dimension is {a.dim}")
        return Connection(a, k, pairs)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad connection document: {e}") from None


def connection_to_json(c):
    return {"pairs": [{"u": matrix_to_json(p.u), "v": matrix_to_json(p.v)}
                      for p in c.pairs]}


def lie_module_from_json(doc, g):
    """Lie module file: {"dim": m, "actions": [matrix per g-basis]}."""
    from .lie_bridge import LieRep
    try:
        m = int(doc["dim"])
        mats = [matrix_from_json(g.field, rows, shape=(m, m))
                for rows in doc["actions"]]
        return LieRep(g, mats)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad Lie module document: {e}") from None


def load_algebra(path) -> AlgebraSC:
    return algebra_from_json(_load_json(path))


def load_lie(path) -> LieAlgebraSC:
    return lie_from_json(_load_json(path))


def load_bimodule(path, over=None) -> BimoduleSC:
    doc = _load_json(path)
    if over is None:
        apath = doc.get("algebra")
        if apath is None:
            raise InputError(f"{path}: bimodule document lacks an algebra reference")
        if not os.path.isabs(apath):
            apath = os.path.join(os.path.dirname(os.path.abspath(path)), apath)
        over = load_algebra(apath)
    return bimodule_from_json(doc, over)


def load_connection(path, a, k):
    return connection_from_json(_load_json(path), a, k)


def load_lie_module(path, g):
    return lie_module_from_json(_load_json(path), g)


def load_document(path):
    return _load_json(path)


def save_json(path, doc):
    with open(path, "w") as fh:
        fh.write(canonical_dumps(doc))
