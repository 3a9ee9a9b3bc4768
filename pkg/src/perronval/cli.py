"""Command-line front end.

Subcommands: valuate, reduce, perron divide, perron monomialize, defect,
chain value.  Exit codes are a stable contract: 0 success, 2 bad input or
precondition, 3 defect suspected, 4 bound exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .defect import ExtensionData, FamilyDecomposition, SimpleFamily, consistency, jump_total, ostrowski
from .errors import PerronvalError
from .oracle import ArcValuation, AugmentedChain, MonomialValuation, load_oracle
from .perron import build_a6_divide, monomialize
from .poly import parse_polynomial
from .reduce import Bounds, run_reduction, trace_document

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEFECT = 3
EXIT_BOUND = 4


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _parse_monomial(oracle, text):
    poly = parse_polynomial(oracle.frame, oracle.field, text)
    if len(poly.terms) != 1:
        raise PerronvalError(f"{text!r} is not a monomial")
    (mono, _coeff), = poly.terms.items()
    return mono


def cmd_valuate(args) -> int:
    oracle = load_oracle(args.oracle)
    poly = parse_polynomial(oracle.frame, oracle.field, args.poly)
    print(oracle.value(poly))
    return EXIT_OK


def cmd_chain_value(args) -> int:
    oracle = load_oracle(args.oracle)
    if not isinstance(oracle, AugmentedChain):
        raise PerronvalError("chain value needs a chain oracle document")
    poly = parse_polynomial(oracle.frame, oracle.field, args.poly)
    print(oracle.value(poly))
    return EXIT_OK


def cmd_reduce(args) -> int:
    with open(args.oracle, "r", encoding="utf-8") as fh:
        oracle_doc = json.load(fh)
    oracle = load_oracle(args.oracle)
    if not isinstance(oracle, ArcValuation):
        raise PerronvalError("reduce needs an arc oracle document")
    if args.trunc is not None:
        oracle = ArcValuation(
            oracle.frame, oracle.field, oracle.f, oracle.arc,
            trunc=Fraction(args.trunc), normalization=oracle.normalization,
        )
        oracle_doc["trunc"] = args.trunc
    if not oracle.arc_consistency():
        raise PerronvalError("arc is inconsistent with the hypersurface")
    bounds = Bounds(
        max_translations=args.max_translations,
        max_perron_steps=args.max_perron_steps,
        max_approx_steps=args.max_translations,
    )
    result = run_reduction(oracle, bounds)
    doc = trace_document(result, oracle_doc)
    text = _dump(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if result.status == "DEFECT-SUSPECTED":
        return EXIT_DEFECT
    if result.status == "BOUND-EXHAUSTED":
        return EXIT_BOUND
    return EXIT_OK


def cmd_perron_divide(args) -> int:
    oracle = load_oracle(args.weights)
    if not isinstance(oracle, MonomialValuation):
        raise PerronvalError("perron divide needs a monomial oracle document")
    m1 = _parse_monomial(oracle, args.m1)
    m2 = _parse_monomial(oracle, args.m2)
    tau = build_a6_divide(m1, m2, oracle.weights, oracle.frame,
                          bound=args.max_perron_steps)
    doc = {"version": 1, **tau.document()}
    sys.stdout.write(_dump(doc))
    return EXIT_OK


def cmd_perron_monomialize(args) -> int:
    oracle = load_oracle(args.weights)
    if not isinstance(oracle, MonomialValuation):
        raise PerronvalError("perron monomialize needs a monomial oracle document")
    poly = parse_polynomial(oracle.frame, oracle.field, args.poly)
    result = monomialize(poly, oracle.weights, oracle.frame,
                         bound=args.max_perron_steps)
    doc = {
        "version": 1,
        "transforms": [t.document() for t in result.transforms],
        "exponents": list(result.exponents),
        "unit": str(result.unit),
    }
    sys.stdout.write(_dump(doc))
    return EXIT_OK


def cmd_defect(args) -> int:
    data = ExtensionData(degree=args.degree, e=args.e, fres=args.f, p=args.p)
    delta = ostrowski(data)
    print(f"delta={delta}")
    if args.family:
        families = []
        for text in args.family:
            first, _, stable = text.partition(":")
            families.append(SimpleFamily(int(first), int(stable or first)))
        decomposition = FamilyDecomposition(tuple(families))
        total = jump_total(decomposition)
        print(f"jump_total={total}")
        print(f"consistent={'true' if consistency(data, decomposition) else 'false'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perronval",
        description="Exact Perron transforms and reduction of multiplicity "
        "along rank-1 valuations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("valuate", help="value of a polynomial under an oracle")
    p.add_argument("--oracle", required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_valuate)

    p = sub.add_parser("reduce", help="run the multiplicity reduction")
    p.add_argument("--oracle", required=True, help="arc oracle document (curve)")
    p.add_argument("--out", help="write the trace document here (default stdout)")
    p.add_argument("--trunc", help="override the arc truncation")
    p.add_argument("--max-translations", type=int, default=64)
    p.add_argument("--max-perron-steps", type=int, default=10_000)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("perron", help="Perron transform constructions")
    psub = p.add_subparsers(dest="subcommand", required=True)
    d = psub.add_parser("divide", help="A6 transform making M1 divide M2")
    d.add_argument("--weights", required=True, help="monomial oracle document")
    d.add_argument("--m1", required=True)
    d.add_argument("--m2", required=True)
    d.add_argument("--max-perron-steps", type=int, default=10_000)
    d.set_defaults(func=cmd_perron_divide)
    mo = psub.add_parser("monomialize", help="monomial-times-unit factorization")
    mo.add_argument("--weights", required=True)
    mo.add_argument("--poly", required=True)
    mo.add_argument("--max-perron-steps", type=int, default=10_000)
    mo.set_defaults(func=cmd_perron_monomialize)

    p = sub.add_parser("defect", help="defect from Ostrowski's identity")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--p", type=int, required=True)
    p.add_argument(
        "--family", action="append",
        help="simple family as first_degree:stable_degree (repeatable)",
    )
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("chain", help="augmented-chain oracles")
    csub = p.add_subparsers(dest="subcommand", required=True)
    cv = csub.add_parser("value", help="value of a polynomial under a chain")
    cv.add_argument("--oracle", required=True)
    cv.add_argument("--poly", required=True)
    cv.set_defaults(func=cmd_chain_value)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PerronvalError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: IO: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
