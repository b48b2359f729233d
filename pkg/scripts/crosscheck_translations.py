#!/usr/bin/env python3
"""Cross-check the three compilers against direct evaluation.

Random (structure, team, formula) instances are checked three ways:

* direct team evaluation,
* the second-order compilation (``translate_eta``) under the independent
  second-order evaluator,
* its sparse variant (``translate_zeta``) with the default bound.

Random modal formulas are additionally checked against their
first-order standard translation over the interpreted Kripke structure.

Any disagreement is printed and counted; the exit code is nonzero if
one occurs.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
import time
from dataclasses import dataclass

from tlk import (
    Budget,
    BudgetExceeded,
    KripkeStructure,
    Structure,
    Team,
    eval_mtl,
    eval_so,
    eval_team,
)
from tlk import syntax as S
from tlk.mtl_bridge import interpret_kripke, lift_team, standard_translation
from tlk.so_bridge import SOAssignment, team_relation, translate_eta, translate_zeta


@dataclass
class CrosscheckConfig:
    count: int = 300
    modal_count: int = 100
    seed: int = 0
    max_domain: int = 2
    max_size: int = 6
    max_rows: int = 4
    budget: int = 2_000_000


ARITIES = {"P": 1, "R": 2}
VARS = ("x", "y")


def random_structure(rng: random.Random, n: int) -> Structure:
    rels = {
        name: frozenset(
            t
            for t in itertools.product(range(n), repeat=arity)
            if rng.random() < 0.5
        )
        for name, arity in ARITIES.items()
    }
    return Structure(n, rels, arities=dict(ARITIES))


def random_team(rng: random.Random, n: int, max_rows: int) -> Team:
    rows = list(itertools.product(range(n), repeat=len(VARS)))
    rng.shuffle(rows)
    return Team.from_tuples(VARS, rows[: rng.randint(0, max_rows)])


def random_fo(rng: random.Random) -> S.Formula:
    roll = rng.random()
    if roll < 0.4:
        return S.Pred("P", (S.Var(rng.choice(VARS)),))
    if roll < 0.8:
        return S.Pred("R", (S.Var(rng.choice(VARS)), S.Var(rng.choice(VARS))))
    return S.Eq(S.Var(rng.choice(VARS)), S.Var(rng.choice(VARS)))


def random_formula(rng: random.Random, size: int) -> S.Formula:
    if size <= 1:
        if rng.random() < 0.3:
            from tlk.syntax import dependence_signature

            return S.DepAtom(dependence_signature(1), (S.Var(rng.choice(VARS)),))
        return random_fo(rng)
    roll = rng.random()
    if roll < 0.15:
        return S.BoolNot(random_formula(rng, size - 1))
    if roll < 0.25:
        return S.Not(random_fo(rng))
    if roll < 0.50:
        lhs = random_formula(rng, size // 2)
        return S.And(lhs, random_formula(rng, size - size // 2))
    if roll < 0.75:
        lhs = random_formula(rng, size // 2)
        return S.Or(lhs, random_formula(rng, size - size // 2))
    var = rng.choice(VARS)
    body = random_formula(rng, size - 1)
    return S.Exists(var, body) if rng.random() < 0.5 else S.Forall(var, body)


def random_modal(rng: random.Random, size: int, flat: bool = False) -> S.Formula:
    if size <= 1:
        return S.Prop(rng.choice(("p", "q")))
    roll = rng.random()
    if roll < 0.3:
        body = random_modal(rng, size - 1, flat)
        return S.Diamond(body) if rng.random() < 0.5 else S.Box(body)
    if roll < 0.45 and not flat:
        return S.BoolNot(random_modal(rng, size - 1))
    if roll < 0.6:
        # Classical negation applies to flat (negation-free) bodies only.
        return S.Not(random_modal(rng, size - 1, flat=True))
    lhs = random_modal(rng, size // 2, flat)
    rhs = random_modal(rng, size - size // 2, flat)
    return S.And(lhs, rhs) if rng.random() < 0.5 else S.Or(lhs, rhs)


def crosscheck_team(cfg: CrosscheckConfig, rng: random.Random) -> tuple[int, int]:
    done = mismatches = 0
    while done < cfg.count:
        n = rng.randint(1, cfg.max_domain)
        A = random_structure(rng, n)
        T = random_team(rng, n, cfg.max_rows)
        phi = random_formula(rng, rng.randint(1, cfg.max_size))
        try:
            direct = eval_team(A, T, phi, Budget(cfg.budget))
            J = SOAssignment.of({"R0": team_relation(A, T, VARS)})
            eta = eval_so(A, J, translate_eta(phi, VARS, rel="R0"), Budget(cfg.budget))
            zeta = eval_so(
                A,
                J,
                translate_zeta(phi, VARS, rel="R0", team_size=len(T)),
                Budget(cfg.budget),
            )
        except BudgetExceeded:
            continue
        if eta is not direct or zeta is not direct:
            mismatches += 1
            print(
                f"MISMATCH direct={direct} eta={eta} zeta={zeta} "
                f"on {S.format_formula(phi)} (n={n}, |T|={len(T)})"
            )
        done += 1
    return done, mismatches


def crosscheck_modal(cfg: CrosscheckConfig, rng: random.Random) -> tuple[int, int]:
    done = mismatches = 0
    while done < cfg.modal_count:
        worlds = rng.randint(1, 3)
        edges = frozenset(
            (a, b)
            for a in range(worlds)
            for b in range(worlds)
            if rng.random() < 0.5
        )
        valuation = {
            p: frozenset(w for w in range(worlds) if rng.random() < 0.5)
            for p in ("p", "q")
        }
        kripke = KripkeStructure(worlds, edges, valuation)
        team = frozenset(w for w in range(worlds) if rng.random() < 0.5)
        phi = random_modal(rng, rng.randint(1, cfg.max_size))
        direct = eval_mtl(kripke, team, phi)
        lifted = eval_team(
            interpret_kripke(kripke), lift_team(team), standard_translation(phi)
        )
        if lifted is not direct:
            mismatches += 1
            print(f"MISMATCH modal={direct} st={lifted} on {S.format_formula(phi)}")
        done += 1
    return done, mismatches


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=300, help="team-logic instances")
    parser.add_argument("--modal-count", type=int, default=100, help="modal instances")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-domain", type=int, default=2)
    parser.add_argument("--max-size", type=int, default=6)
    args = parser.parse_args(argv)
    cfg = CrosscheckConfig(
        count=args.count,
        modal_count=args.modal_count,
        seed=args.seed,
        max_domain=args.max_domain,
        max_size=args.max_size,
    )
    rng = random.Random(cfg.seed)

    start = time.perf_counter()
    team_done, team_bad = crosscheck_team(cfg, rng)
    modal_done, modal_bad = crosscheck_modal(cfg, rng)
    elapsed = time.perf_counter() - start

    print(
        f"team-to-SO: {team_done} instances, {team_bad} mismatches; "
        f"modal-to-FO: {modal_done} instances, {modal_bad} mismatches "
        f"({elapsed:.1f}s)"
    )
    return 1 if (team_bad or modal_bad) else 0


if __name__ == "__main__":
    sys.exit(main())
