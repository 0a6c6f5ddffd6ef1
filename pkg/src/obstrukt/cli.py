"""Command-line surface.

Exit codes: 0 success/verified, 1 mathematical refusal (an obstruction
is nonzero, an identity fails, a validator reports violations), 2 input
error (unknown flags, malformed JSON, schema violations).  Reports are
canonical JSON on stdout and are byte-identical across runs; timing is
printed to stderr.  With --out DIR the report is also written as
report.json plus a delimited report.csv, and --figures adds a rendered
report.png.

The default truncation bound for enveloping-algebra commands is 4 and
can be overridden by --degree-bound / --bound or the environment
variable OBSTRUKT_DEGREE_BOUND.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import serialize
from .algebra import (validate_associative, validate_bimodule, validate_jacobi)
from .bimult import OutAlgebra, compute_anni, compute_inn, compute_mul_algebra
from .connections import CurvatureNotInner, coupling_from_connection
from .fields import DimensionMismatch, FieldError
from .hochschild import (HCochain, Representation, coboundary_space,
                         cocycle_space, cohomology_dim)
from .kernel_construct import build_kernel_thm3, thm3_dimension
from .lie_bridge import (CECochain, ce_coboundary_space, ce_cocycle_space,
                         ce_cohomology_dim, lie_transfer_theorem5,
                         trivial_lie_rep)
from .obstruction import (ObstructionNonzero, ProductEscapesKernel,
                          SectionNotSection, crossed_product,
                          curvature, lift_hindrance, obstruction_class,
                          verify_independence, Hindrance)
from .pbw import DegreeOverflow
from .report import RunReport, emit
from .serialize import InputError

DEFAULT_BOUND = 4


class Refusal(Exception):
    """A mathematically meaningful no: reported, exit code 1."""

    def __init__(self, payload):
        self.payload = payload
        super().__init__(str(payload))


def _bound(args):
    if getattr(args, "degree_bound", None):
        return args.degree_bound
    env = os.environ.get("OBSTRUKT_DEGREE_BOUND")
    return int(env) if env else DEFAULT_BOUND


def _field_str(f):
    return f.to_str


def _load_cochain_h(path, rep):
    doc = serialize.load_document(path)
    degree, coeffs = serialize.cochain_entries_from_json(rep.field, doc)
    table = {}
    for key, terms in coeffs.items():
        vec = [rep.field.zero()] * rep.dim
        for j, c in terms.items():
            vec[j] = c
        table[key] = vec
    return HCochain(rep, degree, table)


def _load_ce_cochain(path, g, mdim):
    doc = serialize.load_document(path)
    degree, coeffs = serialize.cochain_entries_from_json(g.field, doc)
    table = {}
    for key, terms in coeffs.items():
        vec = [g.field.zero()] * mdim
        for j, c in terms.items():
            vec[j] = c
        table[key] = vec
    return CECochain(g, mdim, degree, table)


def _violations_payload(field, violations):
    return [v.to_json(field) for v in violations]


def cmd_validate(args):
    doc = serialize.load_document(args.file)
    if "mul" in doc or ("bracket" not in doc and "left" not in doc):
        a = serialize.algebra_from_json(doc)
        bad = validate_associative(a)
        payload = {"type": "associative", "dim": a.dim,
                   "violations": _violations_payload(a.field, bad)}
    elif "bracket" in doc:
        g = serialize.lie_from_json(doc)
        bad = validate_jacobi(g)
        payload = {"type": "lie", "dim": g.dim,
                   "violations": _violations_payload(g.field, bad)}
    else:
        m = serialize.load_bimodule(args.file)
        bad = validate_bimodule(m)
        payload = {"type": "bimodule", "dim": m.dim,
                   "violations": _violations_payload(m.field, bad)}
    if payload["violations"]:
        raise Refusal(payload)
    return payload


def cmd_mul_algebra(args):
    k = serialize.load_algebra(args.algebra)
    bad = validate_associative(k)
    if bad:
        raise Refusal({"violations": _violations_payload(k.field, bad)})
    mul = compute_mul_algebra(k)
    inn = compute_inn(k)
    anni = compute_anni(k)
    out = OutAlgebra(mul, inn)
    payload = {
        "dim_k": k.dim, "mul": mul.dim, "inn": inn.dim, "anni": anni.dim,
        "out": out.dim,
        "exact_sequence": {"inn_plus_anni_is_dim_k": inn.dim + anni.dim == k.dim,
                           "out_is_mul_minus_inn": out.dim == mul.dim - inn.dim},
    }
    return payload


def cmd_cohomology(args):
    a = serialize.load_algebra(args.algebra)
    m = serialize.load_bimodule(args.module, over=a)
    rep = Representation(m)
    n = args.degree
    payload = {
        "degree": n,
        "cochain_dim": a.dim ** n * m.dim,
        "cocycles": cocycle_space(rep, n).dim,
        "coboundaries": coboundary_space(rep, n).dim,
        "dim": cohomology_dim(rep, n),
    }
    return payload


def cmd_ce_cohomology(args):
    import math
    g = serialize.load_lie(args.lie)
    rep = (trivial_lie_rep(g) if args.module is None
           else serialize.load_lie_module(args.module, g))
    n = args.degree
    payload = {
        "degree": n,
        "cochain_dim": math.comb(g.dim, n) * rep.dim,
        "cocycles": ce_cocycle_space(g, rep, n).dim,
        "coboundaries": ce_coboundary_space(g, rep, n).dim,
        "dim": ce_cohomology_dim(g, rep, n),
    }
    return payload


def _load_coupling(args):
    a = serialize.load_algebra(args.algebra)
    k = serialize.load_algebra(args.kernel)
    mu = serialize.load_connection(args.connection, a, k)
    try:
        return a, k, coupling_from_connection(mu)
    except CurvatureNotInner as e:
        raise Refusal({"error": "CurvatureNotInner",
                       "witness": list(e.witness)})
    except ValueError as e:
        raise Refusal({"error": str(e)})


def cmd_obstruct(args):
    a, k, coupling = _load_coupling(args)
    rpt = obstruction_class(coupling)
    payload = rpt.to_json()
    payload["dim_a"] = a.dim
    payload["dim_k"] = k.dim
    return payload


def cmd_extend(args):
    a, k, coupling = _load_coupling(args)
    mu = coupling.lift
    if args.hindrance:
        from .obstruction import central_representation
        rep = central_representation(coupling)
        doc = serialize.load_document(args.hindrance)
        degree, coeffs = serialize.cochain_entries_from_json(k.field, doc)
        if degree != 2:
            raise InputError("hindrance file must have degree 2")
        table = {}
        for key, terms in coeffs.items():
            vec = [k.field.zero()] * k.dim
            for j, c in terms.items():
                vec[j] = c
            table[key] = vec
        h = Hindrance(a, k, table)
    else:
        h = lift_hindrance(mu, curvature(mu))
    if args.adjust:
        rpt = obstruction_class(coupling, hindrance=h)
        if rpt.vanishes and rpt.adjusted_hindrance is not None:
            h = rpt.adjusted_hindrance
    try:
        ext = crossed_product(a, k, mu, h)
    except ObstructionNonzero as e:
        raise Refusal({"error": "ObstructionNonzero", "detail": str(e)})
    except (SectionNotSection, ProductEscapesKernel, ValueError) as e:
        raise Refusal({"error": str(e)})
    payload = {"dim_b": ext.b.dim, "dim_a": a.dim, "dim_k": k.dim,
               "adjusted": bool(args.adjust)}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        serialize.save_json(os.path.join(args.out, "B.json"),
                            serialize.algebra_to_json(ext.b))
        payload["written"] = "B.json"
    return payload


def cmd_build_kernel(args):
    if args.mode == "thm3":
        return _build_kernel_thm3(args)
    return _build_kernel_thm4(args)


def _build_kernel_thm3(args):
    a = serialize.load_algebra(args.algebra)
    m = serialize.load_bimodule(args.module, over=a)
    rep = Representation(m)
    f3 = _load_cochain_h(args.cocycle, rep)
    from .hochschild import NotCocycle
    try:
        spec = build_kernel_thm3(a, rep, f3)
    except NotCocycle as e:
        raise Refusal({"error": "NotCocycle", "detail": str(e)})
    obs = spec.obstruction()
    tostr = a.field.to_str
    payload = {
        "mode": "thm3",
        "dim_k": spec.k.dim,
        "dimension_formula": thm3_dimension(a.dim, m.dim),
        "components": {name: [lo, hi]
                       for name, (lo, hi) in spec.components.items()},
        "anni_dim": spec.nucleus.dim,
        "obstruction": {"vanishes": obs.vanishes,
                        "class_coords": [tostr(x) for x in obs.cls.coords]},
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        doc = serialize.algebra_to_json(spec.k)
        doc["components"] = payload["components"]
        serialize.save_json(os.path.join(args.out, "K.json"), doc)
        payload["written"] = "K.json"
    return payload


def _build_kernel_thm4(args):
    g = serialize.load_lie(args.algebra)
    rep = (trivial_lie_rep(g) if args.module is None
           else serialize.load_lie_module(args.module, g))
    f_lie = _load_ce_cochain(args.cocycle, g, rep.dim)
    bound = _bound(args)
    try:
        spec = lie_transfer_theorem5(g, rep, f_lie, bound)
    except (ValueError, DegreeOverflow) as e:
        raise Refusal({"error": str(e)})
    checks = spec.verify()
    tostr = g.field.to_str
    table = {}
    for key, vec in sorted(spec.f_assoc.coeffs.items()):
        label = "|".join(",".join(str(i) for i in w) for w in key)
        table[label] = [tostr(x) for x in vec]
    payload = {
        "mode": "thm4",
        "bound": bound,
        "pbw_dim": spec.pbw.dim,
        "component_sizes": {
            "m": rep.dim, "c": 2,
            "probe_basis": len(spec.kernel.component_basis(bound - 2)),
        },
        "transferred_cocycle": table,
        "checks": checks,
    }
    if not checks["all"]:
        raise Refusal(payload)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        serialize.save_json(os.path.join(args.out, "kernel_bundle.json"),
                            payload)
        payload["written"] = "kernel_bundle.json"
    return payload


def cmd_lie_transfer(args):
    g = serialize.load_lie(args.lie)
    rep = (trivial_lie_rep(g) if args.module is None
           else serialize.load_lie_module(args.module, g))
    f_lie = _load_ce_cochain(args.cocycle, g, rep.dim)
    bound = args.bound or _bound(args)
    try:
        spec = lie_transfer_theorem5(g, rep, f_lie, bound)
    except (ValueError, DegreeOverflow) as e:
        raise Refusal({"error": str(e)})
    checks = spec.verify()
    tostr = g.field.to_str
    obs = spec.obstruction_tensor()
    payload = {
        "bound": bound,
        "checks": checks,
        "obstruction_tensor": {
            ",".join(str(i) for i in key): [tostr(x) for x in vec]
            for key, vec in sorted(obs.coeffs.items())},
        "matches_input": obs == f_lie,
    }
    if not checks["all"]:
        raise Refusal(payload)
    return payload


def cmd_verify(args):
    a, k, coupling = _load_coupling(args)
    mu = coupling.lift
    h = lift_hindrance(mu, curvature(mu))
    # deterministic pseudo-random perturbations from the seed
    import random
    rng = random.Random(args.seed)
    from .obstruction import central_representation
    rep = central_representation(coupling)
    results = []
    for _ in range(args.trials):
        l = [[k.field.from_int(rng.randint(-3, 3)) for _ in range(k.dim)]
             for _ in range(a.dim)]
        g = {(i, j): rep.embed([k.field.from_int(rng.randint(-3, 3))
                                for _ in range(rep.dim)])
             for i in range(a.dim) for j in range(a.dim)}
        r = verify_independence(coupling, l, h, g)
        results.append({"curvature_identity": r["curvature_identity"],
                        "cocycle_equality": r["cocycle_equality"],
                        "hindrance_shift": r["hindrance_shift"],
                        "witnesses": [list(w) for w in r["witnesses"]]})
    mul = compute_mul_algebra(k)
    inn = compute_inn(k)
    anni = compute_anni(k)
    payload = {
        "trials": args.trials,
        "seed": args.seed,
        "independence": results,
        "exactness": {"dim_k": k.dim, "mul": mul.dim, "inn": inn.dim,
                      "anni": anni.dim,
                      "inn_plus_anni_is_dim_k": inn.dim + anni.dim == k.dim},
        "all": all(r["curvature_identity"] and r["cocycle_equality"]
                   and r["hindrance_shift"] for r in results)
        and inn.dim + anni.dim == k.dim,
    }
    if not payload["all"]:
        raise Refusal(payload)
    return payload


def build_parser():
    p = argparse.ArgumentParser(prog="obstrukt",
                                description="Exact obstruction theory for "
                                            "algebra kernels")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="directory for artifacts")
        sp.add_argument("--figures", action="store_true",
                        help="render a summary figure next to the report")

    sp = sub.add_parser("validate", help="validate a structure-constant file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("mul-algebra",
                        help="dimensions of Mul/Inn/Out/Anni")
    sp.add_argument("--algebra", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_mul_algebra)

    sp = sub.add_parser("cohomology", help="Hochschild cohomology dimension")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--degree", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_cohomology)

    sp = sub.add_parser("ce-cohomology",
                        help="Chevalley-Eilenberg cohomology dimension")
    sp.add_argument("--lie", required=True)
    sp.add_argument("--module")
    sp.add_argument("--degree", type=int, required=True)
    common(sp)
    sp.set_defaults(fn=cmd_ce_cohomology)

    sp = sub.add_parser("obstruct", help="obstruction class of a coupling")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--connection", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_obstruct)

    sp = sub.add_parser("extend", help="crossed-product extension")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--connection", required=True)
    sp.add_argument("--hindrance")
    sp.add_argument("--adjust", action="store_true",
                    help="shift the hindrance by the cobounding cochain "
                         "when the class vanishes")
    common(sp)
    sp.set_defaults(fn=cmd_extend)

    sp = sub.add_parser("build-kernel", help="realize a 3-class as a kernel")
    sp.add_argument("--mode", choices=("thm3", "thm4"), required=True)
    sp.add_argument("--algebra", required=True,
                    help="associative (thm3) or Lie (thm4) algebra file")
    sp.add_argument("--module")
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--degree-bound", type=int)
    common(sp)
    sp.set_defaults(fn=cmd_build_kernel)

    sp = sub.add_parser("lie-transfer",
                        help="Lie kernel transfer with verifications")
    sp.add_argument("--lie", required=True)
    sp.add_argument("--module")
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--bound", type=int)
    common(sp)
    sp.set_defaults(fn=cmd_lie_transfer)

    sp = sub.add_parser("verify",
                        help="run the lift/hindrance independence harness")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--connection", required=True)
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    return p


def _input_files(args):
    files = []
    for attr in ("file", "algebra", "kernel", "connection", "module",
                 "cocycle", "hindrance", "lie"):
        value = getattr(args, attr, None)
        if value:
            files.append(value)
    return files


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags already; normalize other codes
        raise SystemExit(2 if e.code not in (0,) else 0)
    t0 = time.monotonic()
    try:
        payload = args.fn(args)
        outcome = "ok"
        code = 0
    except Refusal as e:
        payload = e.payload
        outcome = "refused"
        code = 1
    except (InputError, FieldError, DimensionMismatch, FileNotFoundError,
            OSError) as e:
        payload = {"error": str(e)}
        outcome = "input-error"
        code = 2
    try:
        files = [p for p in _input_files(args) if os.path.exists(p)]
    except TypeError:
        files = []
    report = RunReport.from_files(getattr(args, "command", "?"),
                                  files, outcome, payload)
    emit(report, out_dir=args.out, figures=args.figures)
    print(f"[{report.command}] {outcome} in "
          f"{time.monotonic() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
