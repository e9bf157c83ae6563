"""Learning from answer sets with weighted noisy examples.

A task pairs background knowledge and a mode bias with weighted
examples, each a partial interpretation plus its own context program.
A hypothesis accepts a positive example when some answer set of
background + hypothesis + context extends the example's partial
interpretation, and accepts a negative example when none does. Its
score is the summed rule cost plus the penalties of the examples it
fails to accept; learning returns a minimum-score hypothesis via
best-first branch and bound over the enumerated space, with exact
deterministic tie-breaking.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .ground import ground, herbrand_universe
from .logic import (
    Atom,
    MiniLasError,
    Program,
    ProgramError,
    Rule,
    Term,
    canonical_text,
    check_safety,
    collect_arities,
)
from .modes import (
    HypothesisSpace,
    ModeBias,
    ScoringFunction,
    rule_cost,
    space_for_bias,
)
from .solver import DEFAULT_MAX_BASE, answer_sets

POS = "pos"
NEG = "neg"


@dataclass(frozen=True)
class PartialInterpretation:
    """Ground atoms a model must include and must avoid."""

    inclusions: frozenset[Atom] = frozenset()
    exclusions: frozenset[Atom] = frozenset()

    def __post_init__(self) -> None:
        for atom in list(self.inclusions) + list(self.exclusions):
            if not atom.is_ground:
                raise ProgramError(
                    f"partial interpretations must be ground; {atom.text} is not"
                )
        if self.inclusions & self.exclusions:
            clash = sorted(a.text for a in self.inclusions & self.exclusions)
            raise ProgramError(
                f"inclusions and exclusions overlap on {clash[0]}"
            )


def extends(interpretation: Iterable[Atom], pi: PartialInterpretation) -> bool:
    """All inclusions present, no exclusion present."""
    atoms = frozenset(interpretation)
    return pi.inclusions <= atoms and not (pi.exclusions & atoms)


@dataclass(frozen=True)
class WCDPI:
    """A weighted context-dependent partial interpretation."""

    example_id: str
    penalty: int
    interpretation: PartialInterpretation
    context: Program = Program()
    polarity: str = POS

    def __post_init__(self) -> None:
        if self.penalty < 1:
            raise ProgramError(
                f"example {self.example_id}: penalty must be a positive "
                f"integer, got {self.penalty}"
            )
        if self.polarity not in (POS, NEG):
            raise ProgramError(f"unknown example polarity {self.polarity!r}")

    @property
    def is_positive(self) -> bool:
        return self.polarity == POS


@dataclass(frozen=True)
class LasTask:
    """Background program, mode bias, and weighted examples."""

    background: Program
    bias: ModeBias
    examples: tuple[WCDPI, ...] = ()

    def __post_init__(self) -> None:
        ids = [e.example_id for e in self.examples]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ProgramError(f"duplicate example id {dup}")


@dataclass(frozen=True)
class Hypothesis:
    """Learned rules (in canonical text order) and their summed cost."""

    rules: tuple[Rule, ...]
    cost: int

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(r.text for r in self.rules)


@dataclass(frozen=True)
class ExampleOutcome:
    example_id: str
    accepted: bool
    penalty_paid: int


@dataclass(frozen=True)
class LearnResult:
    hypothesis: Hypothesis
    outcomes: tuple[ExampleOutcome, ...]
    space_size: int
    evaluated: int

    @property
    def fully_covering(self) -> bool:
        return all(o.accepted for o in self.outcomes)

    @property
    def total_penalty(self) -> int:
        return sum(o.penalty_paid for o in self.outcomes)

    def report_text(self) -> str:
        lines = []
        if self.hypothesis.rules:
            lines.extend(self.hypothesis.texts)
        else:
            lines.append("% empty hypothesis")
        lines.append(f"cost: {self.hypothesis.cost}")
        for o in self.outcomes:
            status = "accepted" if o.accepted else f"rejected (penalty {o.penalty_paid})"
            lines.append(f"example {o.example_id}: {status}")
        lines.append(f"total penalty paid: {self.total_penalty}")
        lines.append(f"space: {self.space_size} rules, {self.evaluated} hypotheses scored")
        return "\n".join(lines) + "\n"


def default_scoring() -> ScoringFunction:
    """Rule cost is just 1 + |body|."""
    return ScoringFunction("default", lambda rule: 0)


def multi_timestamp_scoring(
    surcharge: int = 5,
    time_types: frozenset[str] = frozenset({"time"}),
    time_constants: frozenset[Term] = frozenset(),
) -> ScoringFunction:
    """Surcharge rules whose body mentions fewer than two distinct
    timestamp arguments.

    Timestamps are counted syntactically: distinct variable names typed
    by a time type, plus distinct constants from ``time_constants``. Two
    distinct variables count as two even if every grounding identifies
    them."""
    if surcharge < 0:
        raise ProgramError("surcharge must be nonnegative")

    def bias(rule: Rule) -> int:
        types = dict(rule.var_types)
        stamps: set[object] = set()
        for lit in rule.body:
            if lit.is_builtin:
                operands = (lit.lhs, lit.rhs)
            else:
                operands = lit.atom.args
            for term in operands:
                if term.is_variable:
                    if types.get(term.name) in time_types:
                        stamps.add(("var", term.name))
                elif term in time_constants:
                    stamps.add(("const", term))
        return 0 if len(stamps) >= 2 else surcharge

    return ScoringFunction("multi-timestamp", bias)


@dataclass
class LearnConfig:
    """Execution knobs shared by score and learn."""

    max_base: int = DEFAULT_MAX_BASE
    space: Optional[HypothesisSpace] = None
    cache: Optional[dict] = None


def _example_signature(example: WCDPI) -> tuple:
    return (
        example.polarity,
        frozenset(a.text for a in example.interpretation.inclusions),
        frozenset(a.text for a in example.interpretation.exclusions),
        canonical_text(example.context),
    )


def _rules_key(rules: Sequence[Rule]) -> tuple:
    return tuple(sorted((r.text, r.var_types) for r in rules))


def _hypothesis_rules(
    hypothesis: Union[Hypothesis, Sequence[Rule]],
) -> tuple[Rule, ...]:
    if isinstance(hypothesis, Hypothesis):
        return hypothesis.rules
    return tuple(hypothesis)


def accepts(
    background: Program,
    hypothesis: Union[Hypothesis, Sequence[Rule]],
    example: WCDPI,
    *,
    constants: Optional[dict[str, tuple[Term, ...]]] = None,
    max_base: int = DEFAULT_MAX_BASE,
) -> bool:
    """Does background + hypothesis + context treat the example as the
    task semantics demand?

    Positive examples need at least one answer set extending the partial
    interpretation; negative examples need none. ``constants`` supplies
    the typed pools hypothesis variables range over."""
    rules = _hypothesis_rules(hypothesis)
    combined_rules = background.rules + rules + example.context.rules
    collect_arities(
        combined_rules,
        extra_atoms=tuple(example.interpretation.inclusions)
        + tuple(example.interpretation.exclusions),
    )
    check_safety(combined_rules)
    combined = Program(combined_rules)
    universe = herbrand_universe(combined, constants)
    result = answer_sets(ground(combined, universe), max_base=max_base)
    extending = any(
        extends(model, example.interpretation) for model in result.models
    )
    return extending if example.is_positive else not extending


def _accepts_cached(
    task: LasTask,
    rules: tuple[Rule, ...],
    example: WCDPI,
    signature: tuple,
    constants: dict[str, tuple[Term, ...]],
    config: LearnConfig,
) -> bool:
    if config.cache is None:
        return accepts(
            task.background, rules, example,
            constants=constants, max_base=config.max_base,
        )
    key = (_rules_key(rules), signature)
    hit = config.cache.get(key)
    if hit is None:
        hit = accepts(
            task.background, rules, example,
            constants=constants, max_base=config.max_base,
        )
        config.cache[key] = hit
    return hit


def score(
    hypothesis: Union[Hypothesis, Sequence[Rule]],
    task: LasTask,
    scoring: Optional[ScoringFunction] = None,
    *,
    config: Optional[LearnConfig] = None,
) -> int:
    """Summed rule cost plus penalties of examples not accepted."""
    scoring = scoring or default_scoring()
    config = config or LearnConfig()
    rules = _hypothesis_rules(hypothesis)
    constants = task.bias.constants_by_type()
    total = sum(rule_cost(r, scoring) for r in rules)
    for example in task.examples:
        if not _accepts_cached(
            task, rules, example, _example_signature(example), constants, config
        ):
            total += example.penalty
    return total


def learn(
    task: LasTask,
    scoring: Optional[ScoringFunction] = None,
    config: Optional[LearnConfig] = None,
) -> LearnResult:
    """Find a minimum-score hypothesis.

    Best-first branch and bound over subsets of the enumerated space:
    the frontier is ordered by accumulated rule cost (an admissible
    lower bound since penalties are nonnegative), candidates are scored
    with early abandoning once paid penalties push them past the
    incumbent, and extensions only add rules later in cost order, so
    each subset is visited once. Ties break toward lower score, then
    fewer rules, then lexicographically smallest canonical texts."""
    scoring = scoring or default_scoring()
    config = config or LearnConfig()
    space = config.space if config.space is not None else space_for_bias(task.bias)
    constants = task.bias.constants_by_type()
    signatures = [_example_signature(e) for e in task.examples]

    costs = [rule_cost(r, scoring) for r in space.rules]
    order = sorted(
        range(len(space.rules)),
        key=lambda i: (costs[i], space.rules[i].text, space.rules[i].var_types),
    )
    ordered_rules = [space.rules[i] for i in order]
    ordered_costs = [costs[i] for i in order]

    def evaluate(rules: tuple[Rule, ...], rulecost: int, cutoff: Optional[int]):
        """Full score, or None when it provably exceeds the cutoff."""
        total = rulecost
        for example, signature in zip(task.examples, signatures):
            if not _accepts_cached(
                task, rules, example, signature, constants, config
            ):
                total += example.penalty
                if cutoff is not None and total > cutoff:
                    return None
        return total

    best_key: Optional[tuple] = None
    best_rules: tuple[Rule, ...] = ()
    best_score: Optional[int] = None
    evaluated = 0
    max_rules = task.bias.bounds.max_rules

    # heap entries: (rulecost, n_rules, tie_texts, positions)
    frontier: list[tuple] = [(0, 0, (), ())]
    while frontier:
        rulecost, n_rules, _, positions = heapq.heappop(frontier)
        if best_score is not None and rulecost > best_score:
            break
        rules = tuple(ordered_rules[p] for p in positions)
        total = evaluate(rules, rulecost, best_score)
        evaluated += 1
        if total is not None:
            key = (total, n_rules, tuple(sorted(r.text for r in rules)))
            if best_key is None or key < best_key:
                best_key = key
                best_rules = rules
                best_score = total
        if n_rules >= max_rules:
            continue
        start = positions[-1] + 1 if positions else 0
        for nxt in range(start, len(ordered_rules)):
            child_cost = rulecost + ordered_costs[nxt]
            if best_score is not None and child_cost > best_score:
                break  # costs ascend with position
            heapq.heappush(
                frontier,
                (
                    child_cost,
                    n_rules + 1,
                    tuple(r.text for r in rules) + (ordered_rules[nxt].text,),
                    positions + (nxt,),
                ),
            )

    final_rules = tuple(sorted(best_rules, key=lambda r: (r.text, r.var_types)))
    outcomes = []
    for example, signature in zip(task.examples, signatures):
        ok = _accepts_cached(
            task, final_rules, example, signature, constants, config
        )
        outcomes.append(
            ExampleOutcome(
                example.example_id, ok, 0 if ok else example.penalty
            )
        )
    hypothesis = Hypothesis(final_rules, best_score if best_score is not None else 0)
    return LearnResult(hypothesis, tuple(outcomes), len(space.rules), evaluated)


def task_text(task: LasTask) -> str:
    """Serialize a task in the .task syntax; parse_task inverts this."""
    lines: list[str] = []
    for rule in task.background.rules:
        lines.append(rule.text)
    for mode in task.bias.modes:
        lines.append(mode.text)
    for type_name, term in task.bias.constants:
        lines.append(f"#constant({type_name}, {term.text}).")
    for type_name in sorted(task.bias.compare_types):
        lines.append(f"#compare({type_name}).")
    bounds = task.bias.bounds
    lines.append(f"#maxv({bounds.max_vars}).")
    lines.append(f"#maxb({bounds.max_body}).")
    lines.append(f"#maxrules({bounds.max_rules}).")
    for example in task.examples:
        inc = ", ".join(sorted(a.text for a in example.interpretation.inclusions))
        exc = ", ".join(sorted(a.text for a in example.interpretation.exclusions))
        ctx = " ".join(r.text for r in example.context.rules)
        lines.append(
            f"#{example.polarity}({example.example_id}@{example.penalty}, "
            f"{{{inc}}}, {{{exc}}}, {{{ctx}}})."
        )
    return "\n".join(lines) + "\n"
