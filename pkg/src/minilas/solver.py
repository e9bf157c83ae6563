"""Stable-model enumeration for ground programs.

Choice rules are compiled to normal rules first. Enumeration then
exploits that the reduct of a normal program depends only on which
naf-ed atoms the candidate contains: the solver walks assumption sets
over those atoms (after forcing atoms the definite fragment derives and
excluding atoms no rule derives), takes the least model of each induced
reduct, and keeps the candidates that reproduce their own assumptions
and violate no constraint. Every stable model is found exactly once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .ground import GroundProgram
from .logic import Atom, ChoiceHead, Literal, MiniLasError, ProgramError, Rule

DEFAULT_MAX_BASE = 24

AUX_PREFIX = "__aux"


class BaseLimitError(MiniLasError):
    """The ground base is too large for exhaustive model enumeration."""

    def __init__(self, actual: int, limit: int) -> None:
        super().__init__(
            f"ground base has {actual} atoms, exceeding the limit of "
            f"{limit}; raise max_base to override"
        )
        self.actual = actual
        self.limit = limit


def is_aux_atom(atom: Atom) -> bool:
    """True for atoms the choice translation introduced."""
    return atom.predicate.startswith(AUX_PREFIX)


def translate_choice(program: GroundProgram) -> GroundProgram:
    """Compile bounded choices into normal rules.

    Each choice element gets an even-loop pair over a fresh complement
    atom, conditioned on the choice body. Bounds become constraints:
    with n elements, any (upper+1)-subset all true is forbidden, and any
    (n-lower+1)-subset all false (complement true) is forbidden. Every
    produced rule is labeled with the source choice rule's text.
    """
    rules: list[Rule] = []
    labels: list[str] = []

    def emit(rule: Rule, label: str) -> None:
        rules.append(rule)
        labels.append(label)

    for idx, rule in enumerate(program.rules):
        if not isinstance(rule.head, ChoiceHead):
            emit(rule, program.label(idx))
            continue
        choice = rule.head
        label = program.label(idx)
        body = rule.body
        n = len(choice.atoms)
        complements = tuple(
            Atom(f"{AUX_PREFIX}_{idx}_{j}") for j in range(n)
        )
        for atom, complement in zip(choice.atoms, complements):
            emit(Rule(atom, body + (Literal.naf(complement),)), label)
            emit(Rule(complement, body + (Literal.naf(atom),)), label)
        if choice.upper < n:
            for subset in itertools.combinations(choice.atoms, choice.upper + 1):
                emit(
                    Rule(None, body + tuple(Literal.pos(a) for a in subset)),
                    label,
                )
        if choice.lower > 0:
            for subset in itertools.combinations(complements, n - choice.lower + 1):
                emit(
                    Rule(None, body + tuple(Literal.pos(a) for a in subset)),
                    label,
                )
    return GroundProgram.from_rules(rules, labels)


def _require_normal(program: GroundProgram, operation: str) -> None:
    if program.has_choice:
        raise ProgramError(
            f"{operation} applies to normal programs; "
            "run translate_choice first"
        )


def reduct(program: GroundProgram, candidate: Iterable[Atom]) -> GroundProgram:
    """Gelfond-Lifschitz reduct: drop each rule with a naf-ed atom in the
    candidate, strip naf literals from the rest.

    A surviving constraint whose body was pure naf would be left with an
    empty body, which the rule syntax cannot express; it is omitted from
    the result. Candidates triggering that case violate the constraint
    outright, which is_stable reports without going through reduct.
    """
    _require_normal(program, "reduct")
    cand = frozenset(candidate)
    kept: list[Rule] = []
    labels: list[str] = []
    for idx, rule in enumerate(program.rules):
        if any(lit.is_naf and lit.atom in cand for lit in rule.body):
            continue
        body = tuple(lit for lit in rule.body if lit.is_positive)
        if rule.head is None and not body:
            continue
        kept.append(Rule(rule.head, body))
        labels.append(program.label(idx))
    return GroundProgram.from_rules(kept, labels)


def least_model(program: GroundProgram) -> frozenset[Atom]:
    """Least model of a definite program (no naf, no choice); headless
    rules do not derive and are ignored."""
    _require_normal(program, "least_model")
    for idx, rule in enumerate(program.rules):
        if any(lit.is_naf for lit in rule.body):
            raise ProgramError(
                f"least_model requires a definite program; rule {idx + 1} "
                f"({rule.text}) uses naf"
            )
    ids = program.atom_ids
    compiled = []
    for rule in program.rules:
        if rule.head is None:
            continue
        pos = 0
        for lit in rule.body:
            pos |= 1 << ids[lit.atom]
        compiled.append((1 << ids[rule.head], pos))
    model = _fixpoint(compiled)
    return frozenset(
        atom for atom, i in ids.items() if model >> i & 1
    )


def _fixpoint(rules: list[tuple[int, int]]) -> int:
    """Least model of (head_bit, positive_body_mask) pairs, as a mask."""
    model = 0
    changed = True
    while changed:
        changed = False
        for head, pos in rules:
            if not model & head and pos & ~model == 0:
                model |= head
                changed = True
    return model


@dataclass(frozen=True)
class _Compiled:
    derive: tuple[tuple[int, int, int], ...]  # (head_bit, pos, naf)
    constraints: tuple[tuple[int, int], ...]  # (pos, naf)
    must_true: int
    head_union: int
    naf_union: int


def _compile(program: GroundProgram) -> _Compiled:
    ids = program.atom_ids
    derive = []
    constraints = []
    definite = []
    head_union = 0
    naf_union = 0
    for rule in program.rules:
        pos = naf = 0
        for lit in rule.body:
            bit = 1 << ids[lit.atom]
            if lit.is_positive:
                pos |= bit
            else:
                naf |= bit
        if rule.head is None:
            constraints.append((pos, naf))
            continue
        head = 1 << ids[rule.head]
        derive.append((head, pos, naf))
        head_union |= head
        naf_union |= naf
        if not naf:
            definite.append((head, pos))
    return _Compiled(
        tuple(derive),
        tuple(constraints),
        _fixpoint(definite),
        head_union,
        naf_union,
    )


def _stable_masks(program: GroundProgram) -> list[int]:
    """All stable models of a normal ground program, as bitmasks, in
    ascending mask order."""
    c = _compile(program)
    assumable = c.naf_union
    forced_true = c.must_true & assumable
    free_mask = assumable & c.head_union & ~c.must_true
    free_bits = [1 << i for i in range(program.n_atoms) if free_mask >> i & 1]

    found: list[int] = []
    for counter in range(1 << len(free_bits)):
        assumed = forced_true
        for i, bit in enumerate(free_bits):
            if counter >> i & 1:
                assumed |= bit
        kept = [
            (head, pos)
            for head, pos, naf in c.derive
            if naf & assumed == 0
        ]
        model = _fixpoint(kept)
        if model & assumable != assumed:
            continue
        if any(
            pos & ~model == 0 and naf & model == 0
            for pos, naf in c.constraints
        ):
            continue
        found.append(model)
    found.sort()
    return found


def _mask_to_set(mask: int, atoms: tuple[Atom, ...]) -> frozenset[Atom]:
    return frozenset(atom for i, atom in enumerate(atoms) if mask >> i & 1)


def is_stable(program: GroundProgram, candidate: Iterable[Atom]) -> bool:
    """Gelfond-Lifschitz check: the candidate equals the least model of
    its reduct and violates no constraint."""
    _require_normal(program, "is_stable")
    cand = frozenset(candidate)
    ids = program.atom_ids
    for atom in cand:
        if atom not in ids:
            raise ProgramError(
                f"candidate atom {atom.text} is outside the ground base"
            )
    cand_mask = 0
    for atom in cand:
        cand_mask |= 1 << ids[atom]
    c = _compile(program)
    kept = [
        (head, pos) for head, pos, naf in c.derive if naf & cand_mask == 0
    ]
    if _fixpoint(kept) != cand_mask:
        return False
    return not any(
        pos & ~cand_mask == 0 and naf & cand_mask == 0
        for pos, naf in c.constraints
    )


@dataclass(frozen=True)
class AnswerSetResult:
    """Enumerated models in ascending dense-id bitmask order, plus a
    flag recording whether the enumeration was cut off by a limit."""

    models: tuple[frozenset[Atom], ...]
    complete: bool

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self):
        return iter(self.models)


def answer_sets(
    program: GroundProgram,
    *,
    limit: Optional[int] = None,
    max_base: int = DEFAULT_MAX_BASE,
) -> AnswerSetResult:
    """All answer sets of a ground program.

    Choice rules are translated internally; the returned models are
    projected back onto the input program's base, and ordered by the
    bitmask over its dense atom ids (atom id 0 is the least significant
    bit). ``limit`` truncates the model list after ordering.
    """
    if limit is not None and limit < 0:
        raise ProgramError("limit must be nonnegative")
    work = translate_choice(program) if program.has_choice else program
    if work.n_atoms > max_base:
        raise BaseLimitError(work.n_atoms, max_base)

    masks = _stable_masks(work)
    if work is program:
        models = [_mask_to_set(m, program.atoms) for m in masks]
    else:
        ids = program.atom_ids
        projected = []
        for mask in masks:
            model = frozenset(
                atom
                for i, atom in enumerate(work.atoms)
                if mask >> i & 1 and atom in ids
            )
            key = 0
            for atom in model:
                key |= 1 << ids[atom]
            projected.append((key, model))
        projected.sort(key=lambda pair: pair[0])
        models = [model for _, model in projected]

    complete = limit is None or len(models) <= limit
    if limit is not None:
        models = models[:limit]
    return AnswerSetResult(tuple(models), complete)


def brave_entails(
    program: GroundProgram,
    atom: Atom,
    *,
    max_base: int = DEFAULT_MAX_BASE,
) -> bool:
    """True when some answer set contains the atom."""
    result = answer_sets(program, max_base=max_base)
    return any(atom in model for model in result.models)


def cautious_entails(
    program: GroundProgram,
    atom: Atom,
    *,
    max_base: int = DEFAULT_MAX_BASE,
) -> bool:
    """True when every answer set contains the atom; vacuously true when
    there are none."""
    result = answer_sets(program, max_base=max_base)
    return all(atom in model for model in result.models)
