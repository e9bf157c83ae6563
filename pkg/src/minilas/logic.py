"""Core object model: terms, atoms, literals, rules, and programs.

All values are immutable and compared structurally. Rule order is
significant for program equality and for every deterministic ordering
downstream (dense atom ids, model output, hypothesis-space order), so
programs keep their rules as tuples, never sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1

CONSTANT = "constant"
VARIABLE = "variable"
INTEGER = "integer"

COMPARATORS = ("<", "<=", "=", "!=", ">", ">=")


class MiniLasError(Exception):
    """Base class for every error this package raises deliberately."""


class ProgramError(MiniLasError):
    """A structurally invalid logic object (bad bounds, bad operands)."""


class SafetyError(ProgramError):
    """A rule uses a variable not bound by any positive body literal."""


class ArityError(ProgramError):
    """The same predicate name is used with two different arities."""


@dataclass(frozen=True)
class Term:
    """A constant symbol, a variable, or a 32-bit signed integer."""

    kind: str
    name: str = ""
    value: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (CONSTANT, VARIABLE, INTEGER):
            raise ProgramError(f"unknown term kind {self.kind!r}")
        if self.kind == INTEGER and not (INT32_MIN <= self.value <= INT32_MAX):
            raise ProgramError(f"integer {self.value} outside 32-bit range")

    @classmethod
    def constant(cls, name: str) -> "Term":
        return cls(CONSTANT, name=name)

    @classmethod
    def variable(cls, name: str) -> "Term":
        return cls(VARIABLE, name=name)

    @classmethod
    def integer(cls, value: int) -> "Term":
        return cls(INTEGER, value=value)

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT

    @property
    def is_variable(self) -> bool:
        return self.kind == VARIABLE

    @property
    def is_integer(self) -> bool:
        return self.kind == INTEGER

    @property
    def text(self) -> str:
        return str(self.value) if self.kind == INTEGER else self.name

    def sort_key(self) -> tuple:
        # integers first (numeric order), then constants, then variables
        if self.kind == INTEGER:
            return (0, self.value, "")
        if self.kind == CONSTANT:
            return (1, 0, self.name)
        return (2, 0, self.name)


@dataclass(frozen=True)
class Atom:
    """A predicate applied to zero or more terms."""

    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    @property
    def is_ground(self) -> bool:
        return all(not t.is_variable for t in self.args)

    @property
    def text(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(t.text for t in self.args)})"

    def variables(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.args if t.is_variable)


POSITIVE = "positive"
NAF = "naf"
BUILTIN = "builtin"


@dataclass(frozen=True)
class Literal:
    """A body literal: an atom, its negation as failure, or a comparison.

    Comparison operands are restricted to variables and integers; the
    grounder evaluates comparisons away once both sides are integers.
    """

    polarity: str
    atom: Optional[Atom] = None
    lhs: Optional[Term] = None
    op: str = ""
    rhs: Optional[Term] = None

    def __post_init__(self) -> None:
        if self.polarity in (POSITIVE, NAF):
            if self.atom is None:
                raise ProgramError(f"{self.polarity} literal requires an atom")
        elif self.polarity == BUILTIN:
            if self.op not in COMPARATORS:
                raise ProgramError(f"unknown comparison operator {self.op!r}")
            for side in (self.lhs, self.rhs):
                if side is None or side.is_constant:
                    raise ProgramError(
                        "comparison operands must be variables or integers"
                    )
        else:
            raise ProgramError(f"unknown literal polarity {self.polarity!r}")

    @classmethod
    def pos(cls, atom: Atom) -> "Literal":
        return cls(POSITIVE, atom=atom)

    @classmethod
    def naf(cls, atom: Atom) -> "Literal":
        return cls(NAF, atom=atom)

    @classmethod
    def compare(cls, lhs: Term, op: str, rhs: Term) -> "Literal":
        return cls(BUILTIN, lhs=lhs, op=op, rhs=rhs)

    @property
    def is_positive(self) -> bool:
        return self.polarity == POSITIVE

    @property
    def is_naf(self) -> bool:
        return self.polarity == NAF

    @property
    def is_builtin(self) -> bool:
        return self.polarity == BUILTIN

    @property
    def text(self) -> str:
        if self.polarity == POSITIVE:
            return self.atom.text
        if self.polarity == NAF:
            return f"not {self.atom.text}"
        return f"{self.lhs.text} {self.op} {self.rhs.text}"

    def variables(self) -> tuple[str, ...]:
        if self.polarity == BUILTIN:
            out = []
            for side in (self.lhs, self.rhs):
                if side.is_variable:
                    out.append(side.name)
            return tuple(out)
        return self.atom.variables()


@dataclass(frozen=True)
class ChoiceHead:
    """A bounded choice over a set of atoms: lower {a1; ...; an} upper."""

    lower: int
    atoms: tuple[Atom, ...]
    upper: int

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ProgramError("choice head needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ProgramError("choice head lists the same atom twice")
        if not (0 <= self.lower <= self.upper <= len(self.atoms)):
            raise ProgramError(
                f"choice bounds must satisfy 0 <= {self.lower} <= "
                f"{self.upper} <= {len(self.atoms)}"
            )

    @property
    def text(self) -> str:
        inner = "; ".join(a.text for a in self.atoms)
        return f"{self.lower} {{{inner}}} {self.upper}"


Head = Union[Atom, ChoiceHead, None]


@dataclass(frozen=True)
class Rule:
    """head :- body, or a fact (empty body), or a constraint (no head).

    ``var_types`` carries per-variable type names for rules generated
    from mode declarations; the grounder instantiates a typed variable
    only over its type's constants. It is deliberately excluded from
    the printed form, so two rules differing only in types are printed
    alike but compare unequal.
    """

    head: Head = None
    body: tuple[Literal, ...] = ()
    var_types: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if self.head is None and not self.body:
            raise ProgramError("a rule needs a head or a nonempty body")
        object.__setattr__(self, "var_types", tuple(sorted(self.var_types)))
        names = [v for v, _ in self.var_types]
        if len(set(names)) != len(names):
            raise ProgramError("conflicting type annotations for a variable")

    @property
    def is_fact(self) -> bool:
        return isinstance(self.head, Atom) and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def has_choice(self) -> bool:
        return isinstance(self.head, ChoiceHead)

    def head_atoms(self) -> tuple[Atom, ...]:
        if self.head is None:
            return ()
        if isinstance(self.head, Atom):
            return (self.head,)
        return self.head.atoms

    def variables(self) -> tuple[str, ...]:
        """All variable names, head first, in first-occurrence order."""
        seen: dict[str, None] = {}
        for atom in self.head_atoms():
            for v in atom.variables():
                seen.setdefault(v)
        for lit in self.body:
            for v in lit.variables():
                seen.setdefault(v)
        return tuple(seen)

    @property
    def is_ground(self) -> bool:
        return not self.variables()

    def unsafe_variables(self) -> tuple[str, ...]:
        """Variables in the head, a naf literal, or a comparison that no
        positive body literal binds."""
        bound = set()
        for lit in self.body:
            if lit.is_positive:
                bound.update(lit.variables())
        unsafe: dict[str, None] = {}
        for atom in self.head_atoms():
            for v in atom.variables():
                if v not in bound:
                    unsafe.setdefault(v)
        for lit in self.body:
            if lit.is_positive:
                continue
            for v in lit.variables():
                if v not in bound:
                    unsafe.setdefault(v)
        return tuple(unsafe)

    @property
    def text(self) -> str:
        head_txt = "" if self.head is None else self.head.text
        if not self.body:
            return f"{head_txt}."
        body_txt = ", ".join(lit.text for lit in self.body)
        if head_txt:
            return f"{head_txt} :- {body_txt}."
        return f":- {body_txt}."


@dataclass(frozen=True)
class Program:
    """An ordered sequence of rules."""

    rules: tuple[Rule, ...] = ()

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    @property
    def is_ground(self) -> bool:
        return all(r.is_ground for r in self.rules)

    @property
    def text(self) -> str:
        return canonical_text(self)


def canonical_text(
    obj: Union[Term, Atom, Literal, ChoiceHead, Rule, Program],
) -> str:
    """Single-space canonical rendering; identical structures print
    identically, so the text doubles as a structural key."""
    if isinstance(obj, Program):
        return "".join(rule.text + "\n" for rule in obj.rules)
    return obj.text


def check_safety(rules: Iterable[Rule]) -> None:
    """Raise SafetyError naming the first offending rule and variable."""
    for idx, rule in enumerate(rules):
        unsafe = rule.unsafe_variables()
        if unsafe:
            raise SafetyError(
                f"rule {idx + 1} ({rule.text}): unsafe variable "
                f"{unsafe[0]} is not bound by a positive body literal"
            )


def collect_arities(
    rules: Iterable[Rule],
    *,
    table: Optional[dict[str, int]] = None,
    extra_atoms: Iterable[Atom] = (),
) -> dict[str, int]:
    """Build (or extend) a predicate -> arity table, raising ArityError
    on the first clash."""
    arities: dict[str, int] = {} if table is None else table

    def note(atom: Atom) -> None:
        prev = arities.setdefault(atom.predicate, atom.arity)
        if prev != atom.arity:
            raise ArityError(
                f"predicate {atom.predicate} used with arity {prev} "
                f"and arity {atom.arity}"
            )

    for rule in rules:
        for atom in rule.head_atoms():
            note(atom)
        for lit in rule.body:
            if lit.atom is not None:
                note(lit.atom)
    for atom in extra_atoms:
        note(atom)
    return arities


def validate_program(program: Program) -> Program:
    """Check safety and arity consistency; returns the program."""
    check_safety(program.rules)
    collect_arities(program.rules)
    return program
