"""Mode declarations and hypothesis-space enumeration.

A mode declaration is a predicate schema whose argument slots are
``var(t)`` or ``const(t)`` placeholders. A literal is compatible with a
schema when variables stand in the var slots and declared constants of
the right type stand in the const slots. The hypothesis space is the
explicit list of every safe rule formable from the declarations within
the bounds, canonically renamed and deduplicated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .logic import (
    Atom,
    Literal,
    MiniLasError,
    ProgramError,
    Rule,
    Term,
)

VAR_SLOT = "var"
CONST_SLOT = "const"

HEAD = "head"
BODY = "body"


class SpaceCapError(MiniLasError):
    """The enumerated hypothesis space exceeded its size cap."""

    def __init__(self, cap: int) -> None:
        super().__init__(
            f"hypothesis space exceeds the cap of {cap} rules; tighten the "
            "mode bias or raise the cap"
        )
        self.cap = cap


@dataclass(frozen=True)
class ModeDeclaration:
    """One head or body schema. ``slots`` pairs a placeholder kind with a
    type name; ``naf_allowed`` only applies to body schemas."""

    polarity: str
    predicate: str
    slots: tuple[tuple[str, str], ...] = ()
    naf_allowed: bool = True

    def __post_init__(self) -> None:
        if self.polarity not in (HEAD, BODY):
            raise ProgramError(f"unknown mode polarity {self.polarity!r}")
        for kind, _ in self.slots:
            if kind not in (VAR_SLOT, CONST_SLOT):
                raise ProgramError(f"unknown placeholder kind {kind!r}")
        if self.polarity == HEAD:
            object.__setattr__(self, "naf_allowed", False)

    @property
    def arity(self) -> int:
        return len(self.slots)

    @property
    def text(self) -> str:
        name = "modeh" if self.polarity == HEAD else "modeb"
        if self.slots:
            inner = ",".join(f"{kind}({t})" for kind, t in self.slots)
            schema = f"{self.predicate}({inner})"
        else:
            schema = self.predicate
        flag = ", positive" if self.polarity == BODY and not self.naf_allowed else ""
        return f"#{name}({schema}{flag})."


@dataclass(frozen=True)
class SpaceBounds:
    """Limits on generated rules and on the space itself."""

    max_body: int = 3
    max_vars: int = 3
    max_rules: int = 3
    cap: int = 100_000

    def __post_init__(self) -> None:
        if self.max_body < 0 or self.max_vars < 0:
            raise ProgramError("bounds must be nonnegative")
        if self.max_rules < 1:
            raise ProgramError("max_rules must be at least 1")
        if self.cap < 1:
            raise ProgramError("the space cap must be positive")


@dataclass(frozen=True)
class ModeBias:
    """Mode declarations plus the typed constant pool, bounds, and the
    types whose variables may be compared."""

    modes: tuple[ModeDeclaration, ...]
    constants: tuple[tuple[str, Term], ...] = ()
    bounds: SpaceBounds = SpaceBounds()
    compare_types: frozenset[str] = frozenset()

    def constants_by_type(self) -> dict[str, tuple[Term, ...]]:
        table: dict[str, list[Term]] = {}
        for type_name, term in self.constants:
            bucket = table.setdefault(type_name, [])
            if term not in bucket:
                bucket.append(term)
        return {name: tuple(terms) for name, terms in table.items()}


@dataclass(frozen=True)
class ScoringFunction:
    """Adds a rule-shape bias on top of the base cost 1 + |body|."""

    name: str
    rule_bias: Callable[[Rule], int]


def rule_cost(rule: Rule, scoring: Optional[ScoringFunction] = None) -> int:
    """1 + |body| plus the scoring function's bias for this rule."""
    cost = 1 + len(rule.body)
    if scoring is not None:
        bias = scoring.rule_bias(rule)
        if bias < 0:
            raise ProgramError(
                f"scoring function {scoring.name} returned a negative bias"
            )
        cost += bias
    return cost


def compatible(
    literal: Literal | Atom,
    mode: ModeDeclaration,
    constants: Mapping[str, Sequence[Term]],
    var_types: Optional[Mapping[str, str]] = None,
) -> bool:
    """Does the literal instantiate the schema?

    Var slots require variables (typed accordingly when ``var_types`` is
    given); const slots require a declared constant of the slot's type.
    An Atom argument is checked as a rule head; a Literal as a body
    member, where naf needs the schema's permission.
    """
    if isinstance(literal, Atom):
        if mode.polarity != HEAD:
            return False
        atom = literal
    else:
        if literal.is_builtin:
            return False
        if mode.polarity != BODY:
            return False
        if literal.is_naf and not mode.naf_allowed:
            return False
        atom = literal.atom
    if atom.predicate != mode.predicate or atom.arity != mode.arity:
        return False
    for term, (kind, type_name) in zip(atom.args, mode.slots):
        if kind == VAR_SLOT:
            if not term.is_variable:
                return False
            if var_types is not None and var_types.get(term.name) != type_name:
                return False
        else:
            if term.is_variable:
                return False
            if term not in tuple(constants.get(type_name, ())):
                return False
    return True


def _atom_instances(
    mode: ModeDeclaration,
    constants: Mapping[str, tuple[Term, ...]],
    max_vars: int,
) -> list[tuple[Atom, dict[int, str]]]:
    """Every filling of the schema's slots: const slots range over their
    type's pool, var slots over variable ids 1..max_vars. Returns the
    atom (with placeholder variable names ``#<id>``) and the id -> type
    map; fillings that use one id at two types are skipped."""
    options: list[list[tuple[Term, Optional[tuple[int, str]]]]] = []
    for kind, type_name in mode.slots:
        if kind == CONST_SLOT:
            options.append(
                [(term, None) for term in constants.get(type_name, ())]
            )
        else:
            options.append(
                [
                    (Term.variable(f"#{i}"), (i, type_name))
                    for i in range(1, max_vars + 1)
                ]
            )
    out: list[tuple[Atom, dict[int, str]]] = []
    for combo in itertools.product(*options):
        var_types: dict[int, str] = {}
        ok = True
        for _, tagged in combo:
            if tagged is None:
                continue
            var_id, type_name = tagged
            if var_types.setdefault(var_id, type_name) != type_name:
                ok = False
                break
        if ok:
            out.append(
                (Atom(mode.predicate, tuple(t for t, _ in combo)), var_types)
            )
    return out


def _rename(
    head: Optional[Atom],
    body: Sequence[Literal],
    id_types: Mapping[int, str],
) -> Rule:
    """Rename placeholder ids to V1, V2, ... in first-occurrence order
    (head first, then body literals left to right)."""
    mapping: dict[str, Term] = {}

    def fresh(term: Term) -> Term:
        if not term.is_variable:
            return term
        if term.name not in mapping:
            mapping[term.name] = Term.variable(f"V{len(mapping) + 1}")
        return mapping[term.name]

    def rename_atom(atom: Atom) -> Atom:
        return Atom(atom.predicate, tuple(fresh(t) for t in atom.args))

    new_head = None if head is None else rename_atom(head)
    new_body: list[Literal] = []
    for lit in body:
        if lit.is_builtin:
            new_body.append(Literal.compare(fresh(lit.lhs), lit.op, fresh(lit.rhs)))
        else:
            new_body.append(Literal(lit.polarity, rename_atom(lit.atom)))
    var_types = tuple(
        (term.name, id_types[int(old[1:])])
        for old, term in mapping.items()
    )
    return Rule(new_head, tuple(new_body), var_types)


def enumerate_space(
    modes: Sequence[ModeDeclaration],
    constants: Mapping[str, Sequence[Term]],
    bounds: SpaceBounds,
    compare_types: Iterable[str] = (),
) -> "HypothesisSpace":
    """Explicitly enumerate the hypothesis space.

    Rules combine one head instance with up to max_body distinct body
    literals drawn from the body-schema instances (positive first, then
    naf where allowed) and from comparisons between distinct same-type
    variables of the compare types. Unsafe rules are skipped, variables
    are canonically renamed, duplicates are removed, and the result is
    ordered by (base cost, canonical text)."""
    const_table = {
        name: tuple(terms) for name, terms in dict(constants).items()
    }
    head_modes = [m for m in modes if m.polarity == HEAD]
    body_modes = [m for m in modes if m.polarity == BODY]
    compare_types = frozenset(compare_types)

    pool: list[tuple[Literal, dict[int, str]]] = []
    for mode in body_modes:
        instances = _atom_instances(mode, const_table, bounds.max_vars)
        for atom, id_types in instances:
            pool.append((Literal.pos(atom), id_types))
        if mode.naf_allowed:
            for atom, id_types in instances:
                pool.append((Literal.naf(atom), id_types))
    if compare_types:
        for i, j in itertools.combinations(range(1, bounds.max_vars + 1), 2):
            for type_name in sorted(compare_types):
                for op in ("<", "<=", "=", "!="):
                    pool.append(
                        (
                            Literal.compare(
                                Term.variable(f"#{i}"), op, Term.variable(f"#{j}")
                            ),
                            {i: type_name, j: type_name},
                        )
                    )

    heads: list[tuple[Atom, dict[int, str]]] = []
    for mode in head_modes:
        heads.extend(_atom_instances(mode, const_table, bounds.max_vars))

    seen: dict[tuple[str, tuple[tuple[str, str], ...]], Rule] = {}
    for head, head_types in heads:
        for size in range(0, bounds.max_body + 1):
            for combo in itertools.combinations(pool, size):
                id_types = dict(head_types)
                ok = True
                for _, lit_types in combo:
                    for var_id, type_name in lit_types.items():
                        if id_types.setdefault(var_id, type_name) != type_name:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                rule = _rename(head, [lit for lit, _ in combo], id_types)
                if rule.unsafe_variables():
                    continue
                key = (rule.text, rule.var_types)
                if key in seen:
                    continue
                seen[key] = rule
                if len(seen) > bounds.cap:
                    raise SpaceCapError(bounds.cap)

    ordered = sorted(
        seen.values(), key=lambda r: (1 + len(r.body), r.text, r.var_types)
    )
    return HypothesisSpace(tuple(ordered), tuple(1 + len(r.body) for r in ordered))


@dataclass(frozen=True)
class HypothesisSpace:
    """The ordered candidate rules with their base costs."""

    rules: tuple[Rule, ...]
    base_costs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def space_for_bias(bias: ModeBias) -> HypothesisSpace:
    """enumerate_space with the bias's own pools and bounds."""
    return enumerate_space(
        bias.modes,
        bias.constants_by_type(),
        bias.bounds,
        bias.compare_types,
    )
