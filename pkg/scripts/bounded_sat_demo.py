#!/usr/bin/env python3
"""Bounded satisfiability and validity on a small formula gallery.

Runs the exhaustive search and, where the formula qualifies, the
two-variable transfer route, printing every witness as a reloadable
model file snippet.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from tlk import parse
from tlk import syntax as S
from tlk.cli import render_structure, render_team
from tlk.solver import (
    Counterexample,
    ResourceExhausted,
    Satisfiable,
    UnsatUpTo,
    ValidUpTo,
    sat_bounded,
    sat_fo2,
    valid_bounded,
)


@dataclass
class DemoConfig:
    max_domain: int = 3
    two_var_bound: int = 3


VOCAB = S.Vocabulary(predicates={"P": 1, "R": 2})

GALLERY = [
    "P(x)",
    "(NE P(x)) & (NE (!P(x)))",
    "dep(x,y) & (~dep(y))",
    "~(x = x)",
    "E y. ((NE R(x,y)) & (NE (!R(x,y))))",
    "(P(x) \\/ (~P(x)))",
]

VALIDITY_GALLERY = [
    "x = x",
    "P(x) | (~P(x))",
    "dep(x) \\/ (~dep(x))",
]


def describe(outcome) -> str:
    if isinstance(outcome, Satisfiable):
        return "sat\n" + render_structure(outcome.structure) + "\n" + render_team(outcome.team)
    if isinstance(outcome, Counterexample):
        return (
            "counterexample\n"
            + render_structure(outcome.structure)
            + "\n"
            + render_team(outcome.team)
        )
    if isinstance(outcome, UnsatUpTo):
        return f"unsat up to domain {outcome.max_domain}"
    if isinstance(outcome, ValidUpTo):
        return f"valid up to domain {outcome.max_domain}"
    assert isinstance(outcome, ResourceExhausted)
    return f"resource exhausted: {outcome.detail}"


def two_var_eligible(phi: S.Formula) -> bool:
    if S.all_vars(phi) - {"x", "y"}:
        return False
    return not any(isinstance(node, S.DepAtom) for node in S.walk(phi))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-domain", type=int, default=3)
    args = parser.parse_args(argv)
    cfg = DemoConfig(max_domain=args.max_domain, two_var_bound=args.max_domain)

    for text in GALLERY:
        phi = parse(text, "team", VOCAB)
        print(f"== sat {text}")
        print(describe(sat_bounded(phi, VOCAB, cfg.max_domain)))
        if two_var_eligible(phi):
            print("-- two-variable route")
            print(describe(sat_fo2(phi, VOCAB, cfg.two_var_bound)))
        print()

    for text in VALIDITY_GALLERY:
        phi = parse(text, "team", VOCAB)
        print(f"== valid {text}")
        print(describe(valid_bounded(phi, VOCAB, cfg.max_domain)))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
