"""Command-line interface.

Every subcommand prints a single JSON document on stdout.  Exit codes:
0 on success (for `certify`: certificate issued, possibly with assumed
hypotheses), 2 when `certify` completes but the instance is not certified,
3 on internal error or invalid input.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from .certifier import CertificationRequest, batch_certify, certify
from .cohomology import (adjoint_end0_module, adjoint_end_module,
                         build_filtration, h_groups, natural_module,
                         prop_5_4_check)
from .elliptic import CurveQ, a_ell
from .finitefield import build_field as ff_build_field
from .galois_image import certify_irreducible
from .gl2 import classify_subgroup, group_closure, list_k_exceptional, mat_mul
from .heegner import heegner_trace, p_divisibility_test
from .quadfield import build_field as qf_build_field
from .quadfield import genus_decomposition, heegner_forms


def _jsonable(x):
    """Recursively convert report objects to JSON-serializable data."""
    if is_dataclass(x) and not isinstance(x, type):
        return _jsonable(asdict(x))
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if hasattr(x, "item"):          # numpy scalars
        return x.item()
    return str(x)


def _emit(obj) -> None:
    print(json.dumps(_jsonable(obj), indent=2, sort_keys=True))


def _parse_curve(text: str) -> tuple:
    parts = [t for t in text.replace(" ", "").split(",") if t != ""]
    if len(parts) != 5:
        raise ValueError("--curve expects five integers a1,a2,a3,a4,a6")
    return tuple(int(t) for t in parts)


def _field_elem(F, n: int):
    """Encode an integer as an element of F_{p^f} via base-p digits."""
    n %= F.q
    digits = []
    for _ in range(F.f):
        digits.append(n % F.p)
        n //= F.p
    return F.element(digits)


def _parse_gens_field(F, text: str):
    gens = []
    for block in text.split(";"):
        entries = [t for t in block.replace(" ", "").split(",") if t != ""]
        if len(entries) != 4:
            raise ValueError("each generator needs four entries a,b,c,d")
        gens.append(tuple(_field_elem(F, int(t)) for t in entries))
    if not gens:
        raise ValueError("no generators supplied")
    return gens


def _read_matrix_file(path: str):
    """One matrix per line: four comma-separated integers; # comments."""
    gens = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            entries = [t for t in line.replace(" ", "").split(",") if t != ""]
            if len(entries) != 4:
                raise ValueError(
                    f"{path}:{lineno}: expected four entries, got {len(entries)}")
            gens.append(tuple(int(t) for t in entries))
    if not gens:
        raise ValueError(f"{path}: no matrices found")
    return gens


# ---------------------------------------------------------------- handlers


def _cmd_k_exceptional(args) -> int:
    _emit(list_k_exceptional(args.p, args.f, args.bound))
    return 0


def _cmd_classify(args) -> int:
    F = ff_build_field(args.p, args.f)
    gens = _parse_gens_field(F, args.gens)
    _emit(classify_subgroup(F, gens))
    return 0


_MODULES = {2: natural_module, 3: adjoint_end0_module, 4: adjoint_end_module}


def _cmd_cohomology(args) -> int:
    raw = _read_matrix_file(args.group_file)
    if args.filtration is not None:
        n = args.filtration
        if n < 1:
            raise ValueError("--filtration level must be >= 1")
        fg = build_filtration(args.p, n, raw)
        m = min(args.module_exp or n, n)
        rep = prop_5_4_check(fg, m)
        out = _jsonable(rep)
        out["route"] = "filtration"
        out["dimensions"] = {"1": rep.h1_bar_dim}
        _emit(out)
        return 0
    if args.module_dim not in _MODULES:
        raise ValueError("--module-dim must be one of 2, 3, 4")
    F = ff_build_field(args.p, 1)
    gens = [tuple(_field_elem(F, x) for x in g) for g in raw]
    elements = group_closure(F, gens)

    def mul(a, b):
        return mat_mul(F, a, b)

    module = _MODULES[args.module_dim](F, elements)
    rep = h_groups(elements, mul, module, max_degree=args.max_degree,
                   want_basis=args.basis)
    out = {
        "group_order": rep.group_order,
        "p": rep.p,
        "module_dim": module.dim,
        "route": rep.route,
        "dimensions": {str(k): v for k, v in rep.dims().items()},
    }
    if args.basis:
        out["basis_cocycles"] = _jsonable(rep.basis_cocycles)
    _emit(out)
    return 0


def _cmd_ap(args) -> int:
    E = CurveQ.from_coeffs(_parse_curve(args.curve))
    _emit({"curve": list(E.coefficients()), "p": args.p,
           "a_p": a_ell(E, args.p), "good": E.is_good(args.p)})
    return 0


def _cmd_tate(args) -> int:
    E = CurveQ.from_coeffs(_parse_curve(args.curve))
    _emit(E.reduction(args.l))
    return 0


def _cmd_conductor(args) -> int:
    E = CurveQ.from_coeffs(_parse_curve(args.curve))
    _emit({
        "curve": list(E.coefficients()),
        "conductor": E.conductor,
        "discriminant": E.disc,
        "tamagawa_product": E.tamagawa_product()[0],
        "local": {str(ell): _jsonable(red)
                  for ell, red in E.reductions.items()},
    })
    return 0


def _cmd_classgroup(args) -> int:
    F = qf_build_field(args.disc)
    _emit({"disc": F.D, "h": F.h, "u_K": F.u_K,
           "forms": [list(f) for f in F.forms]})
    return 0


def _cmd_genus(args) -> int:
    F = qf_build_field(args.disc)
    _emit(genus_decomposition(F))
    return 0


def _cmd_heegner_forms(args) -> int:
    F = qf_build_field(args.disc)
    _emit(heegner_forms(F, args.level, conductor=args.conductor))
    return 0


def _cmd_galois_image(args) -> int:
    E = CurveQ.from_coeffs(_parse_curve(args.curve))
    _emit(certify_irreducible(E, args.p, bound=args.bound))
    return 0


def _cmd_heegner(args) -> int:
    E = CurveQ.from_coeffs(_parse_curve(args.curve))
    F = qf_build_field(args.disc)
    res = heegner_trace(E, F, conductor=args.conductor, prec=args.prec)
    out = res.summary()
    if args.test_div is not None:
        out["divisibility"] = p_divisibility_test(res, args.test_div).summary()
    _emit(out)
    return 0


def _cmd_certify(args) -> int:
    req = CertificationRequest(
        curve=_parse_curve(args.curve), disc=args.disc, p=args.prime,
        prec=args.prec, scan_bound=args.scan_bound, depth=args.depth,
        assert_rank_one_sha_trivial=args.assert_rank_one_sha_trivial)
    cert = certify(req)
    blob = cert.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(blob + "\n")
    print(blob)
    return cert.exit_code


def _cmd_certify_batch(args) -> int:
    summary = batch_certify(args.input, args.out_dir)
    _emit(summary)
    return 0


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heegnercert",
        description="Hypothesis checking and certification for Heegner-point "
                    "Iwasawa theory at a concrete (E, K, p).")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("k-exceptional",
                       help="list n <= bound that are exceptional for (p, f)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(func=_cmd_k_exceptional)

    s = sub.add_parser("classify",
                       help="classify a subgroup of GL2(F_{p^f}) from generators")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--gens", type=str, required=True,
                   help='semicolon-separated matrices "a,b,c,d;e,f,g,h"')
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("cohomology",
                       help="H^1/H^2 of a matrix group on a standard module")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--group-file", type=str, required=True,
                   help="file with one matrix a,b,c,d per line")
    s.add_argument("--module-dim", type=int, default=2,
                   help="2 = natural, 3 = trace-zero adjoint, 4 = adjoint")
    s.add_argument("--max-degree", type=int, choices=(1, 2), default=1)
    s.add_argument("--filtration", type=int, default=None,
                   help="treat matrices mod p^n and run the filtration "
                        "criterion at level n")
    s.add_argument("--module-exp", type=int, default=None,
                   help="filtration mode: module exponent m (default n)")
    s.add_argument("--basis", action="store_true",
                   help="include a basis of 1-cocycles (degree 1, mod p)")
    s.set_defaults(func=_cmd_cohomology)

    s = sub.add_parser("ap", help="trace of Frobenius a_p")
    s.add_argument("--curve", type=str, required=True,
                   help="a1,a2,a3,a4,a6")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=_cmd_ap)

    s = sub.add_parser("tate", help="reduction data at a prime")
    s.add_argument("--curve", type=str, required=True)
    s.add_argument("--l", type=int, required=True)
    s.set_defaults(func=_cmd_tate)

    s = sub.add_parser("conductor", help="conductor and local reduction data")
    s.add_argument("--curve", type=str, required=True)
    s.set_defaults(func=_cmd_conductor)

    s = sub.add_parser("classgroup", help="reduced forms and class number")
    s.add_argument("--disc", type=int, required=True)
    s.set_defaults(func=_cmd_classgroup)

    s = sub.add_parser("genus", help="genus decomposition of the discriminant")
    s.add_argument("--disc", type=int, required=True)
    s.set_defaults(func=_cmd_genus)

    s = sub.add_parser("heegner-forms",
                       help="forms of level N for the Heegner parametrization")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--conductor", type=int, default=1)
    s.set_defaults(func=_cmd_heegner_forms)

    s = sub.add_parser("galois-image",
                       help="certify mod-p irreducibility by Frobenius scan")
    s.add_argument("--curve", type=str, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--bound", type=int, default=1000)
    s.set_defaults(func=_cmd_galois_image)

    s = sub.add_parser("heegner",
                       help="trace a Heegner point to E(K) and reconstruct it")
    s.add_argument("--curve", type=str, required=True)
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--conductor", type=int, default=1)
    s.add_argument("--prec", type=int, default=60)
    s.add_argument("--test-div", type=int, default=None,
                   help="also run the p-divisibility test at this prime")
    s.set_defaults(func=_cmd_heegner)

    s = sub.add_parser("certify",
                       help="check theorem hypotheses and emit a certificate")
    s.add_argument("--curve", type=str, required=True)
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--prec", type=int, default=60)
    s.add_argument("--scan-bound", type=int, default=1000)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--assert-rank-one-sha-trivial", action="store_true")
    s.add_argument("--out", type=str, default=None)
    s.set_defaults(func=_cmd_certify)

    s = sub.add_parser("certify-batch", help="certify every row of a CSV file")
    s.add_argument("--input", type=str, required=True)
    s.add_argument("--out-dir", type=str, required=True)
    s.set_defaults(func=_cmd_certify_batch)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 3
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
