"""Second-order evaluation and the team-to-SO translations.

``translate_eta`` compiles a team formula phi (with free variables
among x-bar) into an existential-second-order sentence over one free
relation variable R such that

    (A, T) |= phi   iff   A |= eta(R := rows of T as an |x-bar|-ary relation).

``translate_zeta`` is the sparse variant: every relation quantifier the
translation introduces carries an explicit cardinality bound p, and the
equivalence holds whenever p(n) >= |T| * n**qr(phi) (``sufficient_bound``
computes such bounds).

``eval_so`` is an independent second-order model checker used as the
oracle on the other side of those translations.  It normalises its
input to negation normal form and then walks the formula: classical
connectives recurse, element quantifiers enumerate the domain, relation
quantifiers enumerate all (or all sparse) relations of the arity, and
function quantifiers enumerate total function tables.  Quantifiers
whose variable does not occur free in their body are skipped without
enumeration, so vacuous quantifiers cost nothing and do not move the
existential/universal alternation meter.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import syntax as S
from .evaluator import Budget, EvalStats
from .structures import Structure, Team, team_image
from .syntax import ParseError, SparseBound


# ---------------------------------------------------------------------------
# Second-order assignments


@dataclass(frozen=True)
class RelValue:
    """A relation value: arity plus the set of tuples."""

    arity: int
    tuples: frozenset[tuple[int, ...]]

    @classmethod
    def of(cls, arity: int, tuples) -> "RelValue":
        return cls(arity, frozenset(tuple(t) for t in tuples))

    def __hash__(self) -> int:
        # Candidate relations are hashed millions of times during
        # quantifier enumeration; cache the hash on first use.
        try:
            return self._hash  # type: ignore[attr-defined]
        except AttributeError:
            h = hash((self.arity, self.tuples))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class FunValue:
    """A total function value: arity plus the graph as sorted pairs."""

    arity: int
    entries: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def of(cls, arity: int, table: dict) -> "FunValue":
        return cls(arity, tuple(sorted((tuple(k), v) for k, v in table.items())))

    def apply(self, args: tuple[int, ...]) -> int:
        for k, v in self.entries:
            if k == args:
                return v
        raise KeyError(f"function value not defined on {args}")

    def __hash__(self) -> int:
        try:
            return self._hash  # type: ignore[attr-defined]
        except AttributeError:
            h = hash((self.arity, self.entries))
            object.__setattr__(self, "_hash", h)
            return h


Value = int | RelValue | FunValue


@dataclass(frozen=True)
class SOAssignment:
    """An immutable map from first- and second-order variables to values."""

    entries: tuple[tuple[str, Value], ...] = ()

    @classmethod
    def of(cls, mapping: dict[str, Value] | None = None, **kw: Value) -> "SOAssignment":
        merged = dict(mapping or {})
        merged.update(kw)
        return cls(tuple(sorted(merged.items(), key=lambda e: e[0])))

    def bind(self, name: str, value: Value) -> "SOAssignment":
        d = dict(self.entries)
        d[name] = value
        return SOAssignment(tuple(sorted(d.items(), key=lambda e: e[0])))

    def get(self, name: str) -> Value:
        for n, v in self.entries:
            if n == name:
                return v
        raise KeyError(name)

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.entries)

    def restrict(self, names) -> "SOAssignment":
        keep = set(names)
        return SOAssignment(tuple((n, v) for n, v in self.entries if n in keep))


EMPTY_SO_ASSIGNMENT = SOAssignment()


def team_relation(structure: Structure, team: Team, variables) -> RelValue:
    """x-bar<T>: the team's rows as a relation in variable order."""
    terms = tuple(S.Var(v) for v in variables)
    return RelValue(len(terms), team_image(structure, team, terms))


def parse_so_assignment(text: str) -> SOAssignment:
    """Parse an assignment file: ``elem x 1``, ``rel X 2 { (0,1) (1,0) }``,
    ``fun f 1 { (0)->1 (1)->0 }``; ``#`` comments."""
    from .structures import _block_body, _parse_int_tuples  # shared plumbing

    entries: dict[str, Value] = {}
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    i = 0
    while i < len(lines):
        lineno, line = lines[i]
        head = line.split()
        if head[0] == "elem" and len(head) == 3:
            entries[head[1]] = int(head[2])
            i += 1
        elif head[0] == "rel" and len(head) >= 3:
            name, arity = head[1], int(head[2])
            body, _, i_end = _block_body(lines, i, line[: line.find("{")])
            tuples = _parse_int_tuples(body, lineno)
            if any(len(t) != arity for t in tuples):
                raise ParseError(f"tuple of wrong arity in rel {name!r}", lineno, 1)
            entries[name] = RelValue.of(arity, tuples)
            i = i_end + 1
        elif head[0] == "fun" and len(head) >= 3:
            name, arity = head[1], int(head[2])
            body, _, i_end = _block_body(lines, i, line[: line.find("{")])
            import re as _re

            table = {}
            for entry in _re.finditer(r"\(([^()]*)\)\s*->\s*(\d+)", body):
                inner = entry.group(1).strip()
                args = tuple(int(p) for p in inner.split(",")) if inner else ()
                if len(args) != arity:
                    raise ParseError(f"entry of wrong arity in fun {name!r}", lineno, 1)
                table[args] = int(entry.group(2))
            entries[name] = FunValue.of(arity, table)
            i = i_end + 1
        else:
            raise ParseError(f"unrecognised assignment line {line!r}", lineno, 1)
    return SOAssignment.of(entries)


# ---------------------------------------------------------------------------
# Negation normal form


def to_nnf(phi: S.Formula) -> S.Formula:
    """Desugar ->/<-> and push negations down to atoms."""
    return _nnf(phi, True)


def _nnf(phi: S.Formula, positive: bool) -> S.Formula:
    if isinstance(phi, (S.Pred, S.Eq, S.RelApp)):
        return phi if positive else S.Not(phi)
    if isinstance(phi, S.Top):
        return S.TOP if positive else S.BOT
    if isinstance(phi, S.Bot):
        return S.BOT if positive else S.TOP
    if isinstance(phi, S.Not):
        return _nnf(phi.body, not positive)
    if isinstance(phi, S.And):
        l, r = _nnf(phi.left, positive), _nnf(phi.right, positive)
        return S.And(l, r) if positive else S.Or(l, r)
    if isinstance(phi, S.Or):
        l, r = _nnf(phi.left, positive), _nnf(phi.right, positive)
        return S.Or(l, r) if positive else S.And(l, r)
    if isinstance(phi, S.Implies):
        if positive:
            return S.Or(_nnf(phi.left, False), _nnf(phi.right, True))
        return S.And(_nnf(phi.left, True), _nnf(phi.right, False))
    if isinstance(phi, S.Iff):
        if positive:
            return S.And(
                S.Or(_nnf(phi.left, False), _nnf(phi.right, True)),
                S.Or(_nnf(phi.right, False), _nnf(phi.left, True)),
            )
        return S.Or(
            S.And(_nnf(phi.left, True), _nnf(phi.right, False)),
            S.And(_nnf(phi.right, True), _nnf(phi.left, False)),
        )
    if isinstance(phi, S.Exists):
        body = _nnf(phi.body, positive)
        return S.Exists(phi.var, body) if positive else S.Forall(phi.var, body)
    if isinstance(phi, S.Forall):
        body = _nnf(phi.body, positive)
        return S.Forall(phi.var, body) if positive else S.Exists(phi.var, body)
    if isinstance(phi, S.ExistsRel):
        body = _nnf(phi.body, positive)
        return (
            S.ExistsRel(phi.name, phi.arity, body)
            if positive
            else S.ForallRel(phi.name, phi.arity, body)
        )
    if isinstance(phi, S.ForallRel):
        body = _nnf(phi.body, positive)
        return (
            S.ForallRel(phi.name, phi.arity, body)
            if positive
            else S.ExistsRel(phi.name, phi.arity, body)
        )
    if isinstance(phi, S.ExistsFun):
        body = _nnf(phi.body, positive)
        return (
            S.ExistsFun(phi.name, phi.arity, body)
            if positive
            else S.ForallFun(phi.name, phi.arity, body)
        )
    if isinstance(phi, S.ForallFun):
        body = _nnf(phi.body, positive)
        return (
            S.ForallFun(phi.name, phi.arity, body)
            if positive
            else S.ExistsFun(phi.name, phi.arity, body)
        )
    if isinstance(phi, S.ExistsRelSparse):
        body = _nnf(phi.body, positive)
        if positive:
            return S.ExistsRelSparse(phi.name, phi.arity, phi.bound, body)
        return S.ForallRelSparse(phi.name, phi.arity, phi.bound, body)
    if isinstance(phi, S.ForallRelSparse):
        body = _nnf(phi.body, positive)
        if positive:
            return S.ForallRelSparse(phi.name, phi.arity, phi.bound, body)
        return S.ExistsRelSparse(phi.name, phi.arity, phi.bound, body)
    raise ValueError(f"not a second-order formula: {S.format_formula(phi)}")


# ---------------------------------------------------------------------------
# Second-order evaluation


_MISSING = object()


def _eval_so_term(structure: Structure, J: dict, t: S.Term) -> int:
    if isinstance(t, S.Var):
        v = J.get(t.name, _MISSING)
        if v is _MISSING:
            raise ValueError(f"unassigned variable {t.name!r}")
        if not isinstance(v, int):
            raise ValueError(f"{t.name!r} is not an element variable here")
        return v
    args = tuple(_eval_so_term(structure, J, a) for a in t.args)
    f = J.get(t.name, _MISSING)
    if f is not _MISSING:
        if not isinstance(f, FunValue):
            raise ValueError(f"{t.name!r} is not a function here")
        return f.apply(args)
    return structure.apply(t.name, args)


class _SOEvaluator:
    """Walks an NNF formula with a mutable ``dict`` assignment.

    The public ``SOAssignment`` is converted to a plain dict at entry;
    quantifiers bind by mutate-and-restore backtracking.  Memo keys
    snapshot only the values of the node's free names, so sharing the
    dict across the recursion is safe.
    """

    def __init__(self, structure, budget, stats, memo):
        self.structure = structure
        self.budget = budget
        self.stats = stats
        self.memo_enabled = memo
        self.memo: dict = {}
        self.names: dict[int, frozenset[str]] = {}
        self.keynames: dict[int, tuple[str, ...]] = {}

    def prepare(self, phi: S.Formula) -> None:
        """Precompute, per node, the free names of every sort."""
        for node in S.walk(phi):
            if id(node) not in self.names:
                free = (
                    S.free_vars(node)
                    | S.free_relation_vars(node)
                    | S.free_function_vars(node)
                )
                self.names[id(node)] = free
                self.keynames[id(node)] = tuple(sorted(free))

    def charge(self):
        if self.budget is not None:
            self.budget.charge()

    def eval(self, J: dict, phi: S.Formula, mode: str | None, switches: int) -> bool:
        if self.memo_enabled:
            try:
                key = (id(phi),) + tuple([J[k] for k in self.keynames[id(phi)]])
            except KeyError as exc:
                raise ValueError(f"unassigned variable {exc.args[0]!r}") from None
            hit = self.memo.get(key, _MISSING)
            if hit is not _MISSING:
                return hit
        budget = self.budget
        if budget is not None:
            budget.charge()
        self.stats.nodes += 1
        out = _DISPATCH[type(phi)](self, J, phi, mode, switches)
        if self.memo_enabled:
            self.memo[key] = out
        return out

    def _ev_top(self, J, phi, mode, switches) -> bool:
        return True

    def _ev_bot(self, J, phi, mode, switches) -> bool:
        return False

    def _ev_not(self, J, phi, mode, switches) -> bool:
        return not self._atom(J, phi.body)  # NNF: body is an atom

    def _ev_atom(self, J, phi, mode, switches) -> bool:
        return self._atom(J, phi)

    def _ev_and(self, J, phi, mode, switches) -> bool:
        return self.eval(J, phi.left, mode, switches) and self.eval(
            J, phi.right, mode, switches
        )

    def _ev_or(self, J, phi, mode, switches) -> bool:
        return self.eval(J, phi.left, mode, switches) or self.eval(
            J, phi.right, mode, switches
        )

    def _ev_exists(self, J, phi, mode, switches) -> bool:
        return self._quantifier(J, phi, mode, switches, True)

    def _ev_forall(self, J, phi, mode, switches) -> bool:
        return self._quantifier(J, phi, mode, switches, False)

    def _quantifier(self, J, phi, mode, switches, existential) -> bool:
        var = phi.var if isinstance(phi, (S.Exists, S.Forall)) else phi.name
        if var not in self.names[id(phi.body)]:
            # vacuous quantifier: skip without enumeration or mode switch
            return self.eval(J, phi.body, mode, switches)
        new_mode = "E" if existential else "A"
        if mode is not None and mode != new_mode:
            switches += 1
        if switches > self.stats.alternations:
            self.stats.alternations = switches
        body = phi.body
        budget = self.budget
        missing = _MISSING
        old = J.get(var, missing)
        try:
            for c in self._candidates(phi):
                if budget is not None:
                    budget.charge()
                J[var] = c
                if self.eval(J, body, new_mode, switches) is existential:
                    return existential
            return not existential
        finally:
            if old is missing:
                J.pop(var, None)
            else:
                J[var] = old

    def _atom(self, J: dict, phi: S.Formula) -> bool:
        A = self.structure
        if isinstance(phi, S.Pred):
            values = tuple(_eval_so_term(A, J, t) for t in phi.args)
            return A.holds(phi.name, values)
        if isinstance(phi, S.Eq):
            return _eval_so_term(A, J, phi.left) == _eval_so_term(A, J, phi.right)
        if isinstance(phi, S.RelApp):
            rel = J.get(phi.name)
            if rel is None:
                raise ValueError(f"unassigned relation variable {phi.name!r}")
            if not isinstance(rel, RelValue):
                raise ValueError(f"{phi.name!r} is not a relation variable here")
            if rel.arity != len(phi.args):
                raise ValueError(
                    f"relation variable {phi.name!r} has arity {rel.arity}, "
                    f"used with {len(phi.args)}"
                )
            values = tuple(_eval_so_term(A, J, t) for t in phi.args)
            return values in rel.tuples
        raise ValueError(f"not an atom: {S.format_formula(phi)}")

    def _candidates(self, phi):
        n = self.structure.domain_size
        if isinstance(phi, (S.Exists, S.Forall)):
            return range(n)
        if isinstance(phi, (S.ExistsRel, S.ForallRel)):
            return _relation_pool(n, phi.arity)
        if isinstance(phi, (S.ExistsFun, S.ForallFun)):
            return _function_pool(n, phi.arity)
        cap = phi.bound.value(n)
        return _sparse_pool(n, phi.arity, cap)


_DISPATCH = {
    S.Top: _SOEvaluator._ev_top,
    S.Bot: _SOEvaluator._ev_bot,
    S.Not: _SOEvaluator._ev_not,
    S.Pred: _SOEvaluator._ev_atom,
    S.Eq: _SOEvaluator._ev_atom,
    S.RelApp: _SOEvaluator._ev_atom,
    S.And: _SOEvaluator._ev_and,
    S.Or: _SOEvaluator._ev_or,
    S.Exists: _SOEvaluator._ev_exists,
    S.ExistsRel: _SOEvaluator._ev_exists,
    S.ExistsFun: _SOEvaluator._ev_exists,
    S.ExistsRelSparse: _SOEvaluator._ev_exists,
    S.Forall: _SOEvaluator._ev_forall,
    S.ForallRel: _SOEvaluator._ev_forall,
    S.ForallFun: _SOEvaluator._ev_forall,
    S.ForallRelSparse: _SOEvaluator._ev_forall,
}


def _tuple_universe(n: int, arity: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(n), repeat=arity))


def _all_relations(n: int, arity: int):
    """Every relation of the arity, in binary-counter order over the
    lexicographically sorted tuple universe."""
    universe = _tuple_universe(n, arity)
    for mask in range(2 ** len(universe)):
        yield RelValue(
            arity, frozenset(t for i, t in enumerate(universe) if mask >> i & 1)
        )


def _sparse_relations(n: int, arity: int, cap: int):
    """Relations of cardinality at most cap, smallest cardinality first."""
    universe = _tuple_universe(n, arity)
    for card in range(min(cap, len(universe)) + 1):
        for combo in itertools.combinations(universe, card):
            yield RelValue(arity, frozenset(combo))


def _all_functions(n: int, arity: int):
    universe = _tuple_universe(n, arity)
    for values in itertools.product(range(n), repeat=len(universe)):
        yield FunValue.of(arity, dict(zip(universe, values)))


# Nested quantifiers re-enumerate the same candidate space once per outer
# candidate; materialise small spaces once so the RelValue/FunValue objects
# (and their cached hashes) are shared across the whole evaluation.
_POOL_LIMIT = 65536
_pools: dict[tuple, tuple] = {}


def _relation_pool(n: int, arity: int):
    if 2 ** (n**arity) > _POOL_LIMIT:
        return _all_relations(n, arity)
    key = ("rel", n, arity)
    if key not in _pools:
        _pools[key] = tuple(_all_relations(n, arity))
    return _pools[key]


def _sparse_pool(n: int, arity: int, cap: int):
    size = n**arity
    cap = min(cap, size)
    if sum(math.comb(size, c) for c in range(cap + 1)) > _POOL_LIMIT:
        return _sparse_relations(n, arity, cap)
    key = ("sparse", n, arity, cap)
    if key not in _pools:
        _pools[key] = tuple(_sparse_relations(n, arity, cap))
    return _pools[key]


def _function_pool(n: int, arity: int):
    if n ** (n**arity) > _POOL_LIMIT:
        return _all_functions(n, arity)
    key = ("fun", n, arity)
    if key not in _pools:
        _pools[key] = tuple(_all_functions(n, arity))
    return _pools[key]


def eval_so(
    structure: Structure,
    assignment: SOAssignment,
    phi: S.Formula,
    budget: Budget | None = None,
    *,
    memo: bool = True,
    stats: EvalStats | None = None,
) -> bool:
    """Decide A |= phi[assignment] for a second-order formula.

    The formula is normalised to NNF first, so ->/<-> and nested
    classical negations are fine.  ``stats.alternations`` reports the
    largest number of existential/universal switches met along one
    evaluation path (with ``memo=True`` shared verdicts can hide some
    paths; pass ``memo=False`` when the meter itself matters).
    """
    S.check_language(phi, "so")
    nnf = to_nnf(phi)
    ev = _SOEvaluator(structure, budget, stats or EvalStats(), memo)
    ev.prepare(nnf)
    return ev.eval(dict(assignment.entries), nnf, None, 0)


# ---------------------------------------------------------------------------
# The eta translation


class _FreshRels:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = 0

    def next(self) -> str:
        while True:
            name = f"S{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _fresh_vars(count: int, avoid) -> tuple[str, ...]:
    out: list[str] = []
    taken = set(avoid)
    i = 0
    while len(out) < count:
        name = f"z{i}"
        i += 1
        if name not in taken:
            taken.add(name)
            out.append(name)
    return tuple(out)


def _rel_app(rel: str, names) -> S.Formula:
    return S.RelApp(rel, tuple(S.Var(v) for v in names))


def _extend(xs: tuple[str, ...], y: str) -> tuple[str, ...]:
    """x-bar;y — append y unless it is already a component."""
    return xs if y in xs else xs + (y,)


def _eta(phi: S.Formula, xs: tuple[str, ...], rel: str, fresh: _FreshRels) -> S.Formula:
    if S.is_fo(phi):
        return S.forall_all(xs, S.Implies(_rel_app(rel, xs), phi))
    if isinstance(phi, S.DepAtom):
        k = len(phi.args)
        zs = _fresh_vars(k, xs)
        sname = fresh.next()
        eqs = S.and_all([S.Eq(t, S.Var(z)) for t, z in zip(phi.args, zs)])
        membership = S.exists_all(xs, S.And(_rel_app(rel, xs), eqs))
        fix_s = S.forall_all(zs, S.Iff(_rel_app(sname, zs), membership))
        delta_s = S.subst_pred_by_relvar(phi.dep.delta, "P", sname)
        return S.ExistsRel(sname, k, S.And(fix_s, delta_s))
    if isinstance(phi, S.BoolNot):
        return S.Not(_eta(phi.body, xs, rel, fresh))
    if isinstance(phi, S.And):
        return S.And(_eta(phi.left, xs, rel, fresh), _eta(phi.right, xs, rel, fresh))
    if isinstance(phi, S.Or):
        sname = fresh.next()
        uname = fresh.next()
        cover = S.forall_all(
            xs,
            S.Iff(_rel_app(rel, xs), S.Or(_rel_app(sname, xs), _rel_app(uname, xs))),
        )
        return S.ExistsRel(
            sname,
            len(xs),
            S.ExistsRel(
                uname,
                len(xs),
                S.And(
                    S.And(cover, _eta(phi.left, xs, sname, fresh)),
                    _eta(phi.right, xs, uname, fresh),
                ),
            ),
        )
    if isinstance(phi, S.Exists):
        y = phi.var
        xsy = _extend(xs, y)
        sname = fresh.next()
        same_rest = S.forall_all(
            xs,
            S.Iff(
                S.Exists(y, _rel_app(rel, xs)),
                S.Exists(y, _rel_app(sname, xsy)),
            ),
        )
        return S.ExistsRel(
            sname, len(xsy), S.And(same_rest, _eta(phi.body, xsy, sname, fresh))
        )
    if isinstance(phi, S.Forall):
        y = phi.var
        xsy = _extend(xs, y)
        sname = fresh.next()
        same_rest = S.forall_all(
            xs,
            S.Iff(
                S.Exists(y, _rel_app(rel, xs)),
                S.Exists(y, _rel_app(sname, xsy)),
            ),
        )
        everywhere = S.forall_all(
            xs, S.Implies(_rel_app(rel, xs), S.Forall(y, _rel_app(sname, xsy)))
        )
        return S.ExistsRel(
            sname,
            len(xsy),
            S.And(S.And(same_rest, _eta(phi.body, xsy, sname, fresh)), everywhere),
        )
    raise ValueError(f"not a team-logic formula: {S.format_formula(phi)}")


def _prepare_translation(phi: S.Formula, xs, rel: str):
    S.check_language(phi, "team")
    if xs is None:
        xs = tuple(sorted(S.free_vars(phi)))
    else:
        xs = tuple(xs)
    if len(set(xs)) != len(xs):
        raise ValueError(f"duplicate variables in {xs}")
    missing = S.free_vars(phi) - set(xs)
    if missing:
        raise ValueError(f"free variables {sorted(missing)} not among {list(xs)}")
    avoid = S.pred_names(phi) | {rel}
    if rel in S.pred_names(phi):
        raise ValueError(f"relation name {rel!r} clashes with a predicate of the formula")
    return xs, _FreshRels(avoid)


def translate_eta(phi: S.Formula, xs=None, rel: str = "R") -> S.Formula:
    """Compile a team formula to second-order logic over the team relation.

    (A, T) |= phi iff A |= result under {rel: the rows of T projected to
    xs, in order}; xs must list (at least) the free variables of phi,
    and defaults to them in sorted order.
    """
    xs, fresh = _prepare_translation(phi, xs, rel)
    return _eta(phi, xs, rel, fresh)


def _sparsify(phi: S.Formula, bound: SparseBound) -> S.Formula:
    """Give every introduced relation quantifier the cardinality bound."""
    if isinstance(phi, S.ExistsRel):
        return S.ExistsRelSparse(phi.name, phi.arity, bound, _sparsify(phi.body, bound))
    if isinstance(phi, S.ForallRel):
        return S.ForallRelSparse(phi.name, phi.arity, bound, _sparsify(phi.body, bound))
    if isinstance(phi, S.Not):
        return S.Not(_sparsify(phi.body, bound))
    if isinstance(phi, S.And):
        return S.And(_sparsify(phi.left, bound), _sparsify(phi.right, bound))
    if isinstance(phi, S.Or):
        return S.Or(_sparsify(phi.left, bound), _sparsify(phi.right, bound))
    if isinstance(phi, S.Implies):
        return S.Implies(_sparsify(phi.left, bound), _sparsify(phi.right, bound))
    if isinstance(phi, S.Iff):
        return S.Iff(_sparsify(phi.left, bound), _sparsify(phi.right, bound))
    if isinstance(phi, S.Exists):
        return S.Exists(phi.var, _sparsify(phi.body, bound))
    if isinstance(phi, S.Forall):
        return S.Forall(phi.var, _sparsify(phi.body, bound))
    return phi


def sufficient_bound(phi: S.Formula, xs=None, team_size: int | None = None) -> SparseBound:
    """A cardinality bound that keeps the sparse translation faithful.

    With the team size known the bound |T| * n**qr(phi) suffices: each
    quantifier step grows the running team by at most a factor of the
    domain size.  Without it, n**|V| over all variables in play bounds
    every team that can arise.
    """
    if team_size is not None:
        return SparseBound.scaled_power(max(team_size, 1), S.quantifier_rank(phi))
    variables = S.all_vars(phi) | (set() if xs is None else set(xs))
    return SparseBound.scaled_power(1, len(variables))


def translate_zeta(
    phi: S.Formula,
    xs=None,
    rel: str = "R",
    bound: SparseBound | None = None,
    team_size: int | None = None,
) -> S.Formula:
    """The sparse variant of ``translate_eta``.

    Every relation quantifier in the output carries ``bound`` (computed
    by ``sufficient_bound`` when not given).  The equivalence with team
    satisfaction holds whenever bound(n) >= |T| * n**qr(phi).
    """
    xs, fresh = _prepare_translation(phi, xs, rel)
    if bound is None:
        bound = sufficient_bound(phi, xs, team_size)
    return _sparsify(_eta(phi, xs, rel, fresh), bound)
