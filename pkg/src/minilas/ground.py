"""Grounding: Herbrand universes, rule instantiation, builtin evaluation.

Grounding substitutes constants for variables, evaluates comparison
literals away, and assigns every distinct atom a dense integer id in
first-occurrence order (heads before bodies, rule by rule). Downstream
code treats interpretations as bitmasks over those ids.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .logic import (
    Atom,
    ChoiceHead,
    Literal,
    MiniLasError,
    Program,
    ProgramError,
    Rule,
    Term,
    canonical_text,
)


class GroundingError(MiniLasError):
    """Raised when a program cannot be grounded."""


_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    "!=": operator.ne,
    ">": operator.gt,
    ">=": operator.ge,
}


def eval_builtin(lhs: int, op: str, rhs: int) -> bool:
    """Evaluate one integer comparison."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ProgramError(f"unknown comparison operator {op!r}") from None
    return fn(lhs, rhs)


@dataclass(frozen=True)
class HerbrandUniverse:
    """The constants a program's variables range over.

    ``constants`` is the full (untyped) domain; ``by_type`` restricts
    typed variables, e.g. hypothesis variables introduced by mode
    declarations.
    """

    constants: tuple[Term, ...] = ()
    by_type: tuple[tuple[str, tuple[Term, ...]], ...] = ()

    @cached_property
    def type_table(self) -> dict[str, tuple[Term, ...]]:
        return dict(self.by_type)

    def domain(self, type_name: Optional[str]) -> tuple[Term, ...]:
        if type_name is None:
            return self.constants
        return self.type_table.get(type_name, ())


def _sorted_terms(terms: Iterable[Term]) -> tuple[Term, ...]:
    return tuple(sorted(set(terms), key=Term.sort_key))


def herbrand_universe(
    program: Program,
    extra: Optional[Mapping[str, Iterable[Term]]] = None,
) -> HerbrandUniverse:
    """Collect every constant and integer in the program, plus the given
    typed extras. The untyped domain includes the extras too."""
    found: set[Term] = set()

    def note(term: Optional[Term]) -> None:
        if term is not None and not term.is_variable:
            found.add(term)

    for rule in program.rules:
        for atom in rule.head_atoms():
            for t in atom.args:
                note(t)
        for lit in rule.body:
            if lit.is_builtin:
                note(lit.lhs)
                note(lit.rhs)
            else:
                for t in lit.atom.args:
                    note(t)

    by_type: list[tuple[str, tuple[Term, ...]]] = []
    if extra:
        for type_name, terms in extra.items():
            terms = tuple(terms)
            for t in terms:
                if t.is_variable:
                    raise GroundingError(
                        f"type {type_name} declares a variable as a constant"
                    )
                found.add(t)
            by_type.append((type_name, _sorted_terms(terms)))

    return HerbrandUniverse(_sorted_terms(found), tuple(by_type))


@dataclass(frozen=True)
class GroundProgram:
    """Ground rules plus the dense atom numbering they induce.

    Invariants: every rule is ground, no comparison literals remain,
    and ``atoms[i]`` is the i-th distinct atom in head-then-body scan
    order. ``rule_labels`` optionally overrides the display text per
    rule (used to label choice-translation products with their source).
    """

    rules: tuple[Rule, ...]
    atoms: tuple[Atom, ...]
    rule_labels: Optional[tuple[str, ...]] = None

    @classmethod
    def from_rules(
        cls,
        rules: Sequence[Rule],
        rule_labels: Optional[Sequence[str]] = None,
    ) -> "GroundProgram":
        seen: dict[Atom, None] = {}
        for idx, rule in enumerate(rules):
            if not rule.is_ground:
                raise ProgramError(
                    f"rule {idx + 1} ({rule.text}) is not ground"
                )
            for atom in rule.head_atoms():
                seen.setdefault(atom)
            for lit in rule.body:
                if lit.is_builtin:
                    raise ProgramError(
                        f"rule {idx + 1} ({rule.text}) still contains a "
                        "comparison literal"
                    )
                seen.setdefault(lit.atom)
        labels = None if rule_labels is None else tuple(rule_labels)
        if labels is not None and len(labels) != len(rules):
            raise ProgramError("one label per rule required")
        return cls(tuple(rules), tuple(seen), labels)

    @cached_property
    def atom_ids(self) -> dict[Atom, int]:
        return {atom: i for i, atom in enumerate(self.atoms)}

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def has_choice(self) -> bool:
        return any(r.has_choice for r in self.rules)

    def label(self, rule_index: int) -> str:
        if self.rule_labels is not None:
            return self.rule_labels[rule_index]
        return self.rules[rule_index].text

    @property
    def text(self) -> str:
        return "".join(rule.text + "\n" for rule in self.rules)


def _substitute_atom(atom: Atom, subst: Mapping[str, Term]) -> Atom:
    if atom.is_ground:
        return atom
    return Atom(
        atom.predicate,
        tuple(subst[t.name] if t.is_variable else t for t in atom.args),
    )


def _substitute_rule(
    rule: Rule, subst: Mapping[str, Term]
) -> Optional[Rule]:
    """One ground instance, or None when a comparison fails."""
    body: list[Literal] = []
    for lit in rule.body:
        if lit.is_builtin:
            sides = []
            for side in (lit.lhs, lit.rhs):
                if side.is_variable:
                    side = subst[side.name]
                if not side.is_integer:
                    raise GroundingError(
                        f"comparison {lit.text} in rule ({rule.text}) "
                        f"received non-integer operand {side.text}"
                    )
                sides.append(side.value)
            if not eval_builtin(sides[0], lit.op, sides[1]):
                return None
            continue  # satisfied comparisons are dropped
        body.append(Literal(lit.polarity, _substitute_atom(lit.atom, subst)))

    head = rule.head
    if isinstance(head, Atom):
        head = _substitute_atom(head, subst)
    elif isinstance(head, ChoiceHead):
        elements: dict[Atom, None] = {}
        for atom in head.atoms:
            elements.setdefault(_substitute_atom(atom, subst))
        atoms = tuple(elements)
        if head.lower > len(atoms):
            # substitution collapsed elements below the lower bound, so
            # the bounds are unsatisfiable whenever the body holds
            if not body:
                raise GroundingError(
                    f"choice rule ({rule.text}) can never satisfy its "
                    "lower bound after grounding"
                )
            return Rule(None, tuple(body))
        head = ChoiceHead(head.lower, atoms, min(head.upper, len(atoms)))
    return Rule(head, tuple(body))


def ground(
    program: Program,
    universe: Optional[HerbrandUniverse] = None,
) -> GroundProgram:
    """Instantiate every rule over the universe (default: the program's
    own Herbrand universe), in program order with instantiations in
    lexicographic domain order."""
    if universe is None:
        universe = herbrand_universe(program)

    out: list[Rule] = []
    for idx, rule in enumerate(program.rules):
        variables = rule.variables()
        if not variables:
            inst = _substitute_rule(rule, {})
            if inst is not None:
                out.append(inst)
            continue
        if not universe.constants:
            raise GroundingError(
                f"rule {idx + 1} ({rule.text}) has variables but the "
                "universe is empty"
            )
        types = dict(rule.var_types)
        domains = [universe.domain(types.get(v)) for v in variables]
        for combo in itertools.product(*domains):
            inst = _substitute_rule(rule, dict(zip(variables, combo)))
            if inst is not None:
                out.append(inst)
    return GroundProgram.from_rules(out)
