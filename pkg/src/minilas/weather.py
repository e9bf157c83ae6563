"""Time-series to learning-task pipeline.

A numeric series is discretized into level atoms via per-column
thresholds, sliced into fixed-width history windows, and emitted as a
learning task whose examples carry each window's history as context and
the next step's observed level as the partial interpretation. On top of
that sit a synthetic generator that plants a known rule (with optional
label noise), block cross-validation with wrap-around training folds,
and a decision-stump baseline.
"""

from __future__ import annotations

import csv
import io
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Mapping, Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .ground import ground, herbrand_universe
from .learner import (
    POS,
    LasTask,
    LearnConfig,
    PartialInterpretation,
    WCDPI,
    learn,
    multi_timestamp_scoring,
)
from .logic import (
    Atom,
    Literal,
    MiniLasError,
    Program,
    Rule,
    Term,
)
from .modes import (
    BODY,
    CONST_SLOT,
    HEAD,
    VAR_SLOT,
    ModeBias,
    ModeDeclaration,
    ScoringFunction,
    SpaceBounds,
    space_for_bias,
)
from .solver import DEFAULT_MAX_BASE, answer_sets

LEVEL = "level"

_IDENT = re.compile(r"[a-z][a-z0-9_]*\Z")


class DataError(MiniLasError):
    """Malformed series data, discretization spec, or pipeline input."""


def _check_ident(name: str, what: str) -> str:
    if not _IDENT.match(name):
        raise DataError(
            f"{what} {name!r} must be a lowercase identifier "
            "(it becomes a constant symbol)"
        )
    return name


@dataclass(frozen=True)
class SeriesTable:
    """Numeric columns sampled at consecutive integer timestamps 1..N."""

    timestamps: tuple[int, ...]
    columns: tuple[tuple[str, tuple[float, ...]], ...]

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    def values(self, name: str) -> tuple[float, ...]:
        for col, values in self.columns:
            if col == name:
                return values
        raise DataError(f"no column named {name}")


def ingest(text: str) -> SeriesTable:
    """Parse CSV with a ``timestamp`` column plus one numeric column per
    variable; timestamps must run 1..N without gaps."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DataError("empty series: no header row")
    header = [cell.strip() for cell in rows[0]]
    if not header or header[0] != "timestamp":
        raise DataError("the first column must be named timestamp")
    names = header[1:]
    if not names:
        raise DataError("the series needs at least one value column")
    for name in names:
        _check_ident(name, "column name")
    if len(set(names)) != len(names):
        raise DataError("duplicate column names in header")

    timestamps: list[int] = []
    values: list[list[float]] = [[] for _ in names]
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(header):
            raise DataError(
                f"row {lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        try:
            ts = int(cells[0])
        except ValueError:
            raise DataError(
                f"row {lineno}: timestamp {cells[0]!r} is not an integer"
            ) from None
        expected = len(timestamps) + 1
        if ts != expected:
            raise DataError(
                f"row {lineno}: timestamp {ts} breaks the 1..N sequence "
                f"(expected {expected})"
            )
        timestamps.append(ts)
        for i, cell in enumerate(cells[1:]):
            try:
                values[i].append(float(cell))
            except ValueError:
                raise DataError(
                    f"row {lineno}: {names[i]} value {cell!r} is not a number"
                ) from None
    if not timestamps:
        raise DataError("the series has a header but no rows")
    return SeriesTable(
        tuple(timestamps),
        tuple(
            (name, tuple(col_values))
            for name, col_values in zip(names, values)
        ),
    )


def series_to_csv(table: SeriesTable) -> str:
    """Inverse of ingest; float values keep full round-trip precision."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("timestamp",) + table.column_names)
    columns = [values for _, values in table.columns]
    for i, ts in enumerate(table.timestamps):
        writer.writerow([ts] + [repr(values[i]) for values in columns])
    return out.getvalue()


@dataclass(frozen=True)
class ColumnSpec:
    """Thresholds split a column into len(thresholds) + 1 named levels;
    a value equal to a threshold takes the higher level. ``floor`` and
    ``ceil`` only bound the synthetic generator's value ranges."""

    levels: tuple[str, ...]
    thresholds: tuple[float, ...]
    floor: Optional[float] = None
    ceil: Optional[float] = None

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.thresholds) + 1:
            raise DataError(
                f"need one more level than thresholds, got {len(self.levels)} "
                f"levels for {len(self.thresholds)} thresholds"
            )
        for name in self.levels:
            _check_ident(name, "level name")
        if len(set(self.levels)) != len(self.levels):
            raise DataError("duplicate level names")
        for a, b in zip(self.thresholds, self.thresholds[1:]):
            if not a < b:
                raise DataError("thresholds must be strictly increasing")
        if self.thresholds:
            if self.floor is not None and self.floor >= self.thresholds[0]:
                raise DataError("floor must lie below the first threshold")
            if self.ceil is not None and self.ceil <= self.thresholds[-1]:
                raise DataError("ceil must lie above the last threshold")


@dataclass(frozen=True)
class DiscretizationSpec:
    """Per-column level specs, in declaration order."""

    columns: tuple[tuple[str, ColumnSpec], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.columns]
        if len(set(names)) != len(names):
            raise DataError("duplicate column in discretization spec")
        for name in names:
            _check_ident(name, "column name")

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    def get(self, name: str) -> ColumnSpec:
        for col, spec in self.columns:
            if col == name:
                return spec
        raise DataError(f"no discretization for column {name}")


def load_discretization(text: str) -> DiscretizationSpec:
    """Parse a TOML spec: one table per column with ``thresholds`` and
    ``levels`` arrays plus optional ``floor``/``ceil`` numbers."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise DataError(f"bad discretization spec: {err}") from None
    if not doc:
        raise DataError("the discretization spec declares no columns")
    columns = []
    for name, body in doc.items():
        if not isinstance(body, dict):
            raise DataError(f"column {name}: expected a table")
        unknown = set(body) - {"thresholds", "levels", "floor", "ceil"}
        if unknown:
            raise DataError(
                f"column {name}: unknown key {sorted(unknown)[0]!r}"
            )
        try:
            levels = tuple(str(l) for l in body["levels"])
            thresholds = tuple(float(t) for t in body["thresholds"])
        except KeyError as err:
            raise DataError(f"column {name}: missing {err.args[0]}") from None
        floor = body.get("floor")
        ceil = body.get("ceil")
        columns.append(
            (
                name,
                ColumnSpec(
                    levels,
                    thresholds,
                    None if floor is None else float(floor),
                    None if ceil is None else float(ceil),
                ),
            )
        )
    return DiscretizationSpec(tuple(columns))


def level_of(spec: ColumnSpec, value: float) -> str:
    """The level index is the count of thresholds <= value, so boundary
    values take the higher side."""
    return spec.levels[bisect_right(spec.thresholds, value)]


def level_atom(column: str, level: str, timestamp: int) -> Atom:
    return Atom(
        LEVEL,
        (Term.constant(column), Term.constant(level), Term.integer(timestamp)),
    )


def discretize(table: SeriesTable, spec: DiscretizationSpec) -> tuple[Atom, ...]:
    """One level atom per (timestamp, spec column), timestamp-major in
    spec column order. Table columns without a spec entry are ignored."""
    per_column = []
    for name, col_spec in spec.columns:
        per_column.append((name, col_spec, table.values(name)))
    atoms = []
    for i, ts in enumerate(table.timestamps):
        for name, col_spec, values in per_column:
            atoms.append(level_atom(name, level_of(col_spec, values[i]), ts))
    return tuple(atoms)


@dataclass(frozen=True)
class WindowSpec:
    """History length and the column predicted one step past it."""

    history: int = 1
    target: str = "rain"

    def __post_init__(self) -> None:
        if self.history < 1:
            raise DataError("window history must be at least 1")

    @property
    def target_stamp(self) -> int:
        return self.history + 1


@dataclass(frozen=True)
class TaskTemplate:
    """Shapes the generated task: the discretization the atoms follow,
    the optional default level derived when nothing fires, the example
    penalty, and the hypothesis-space bounds. ``max_vars`` defaults to
    one timestamp variable for single-step histories, two otherwise."""

    spec: DiscretizationSpec
    default_level: Optional[str] = None
    penalty: int = 1
    max_body: int = 2
    max_rules: int = 1
    max_vars: Optional[int] = None
    naf_bodies: bool = False
    cap: int = 100_000

    def resolved_max_vars(self, window: WindowSpec) -> int:
        if self.max_vars is not None:
            return self.max_vars
        return 1 if window.history == 1 else 2


def _index_facts(
    facts: Iterable[Atom], spec: DiscretizationSpec
) -> tuple[dict[tuple[int, str], str], int]:
    """Map (timestamp, column) -> level, validating shape and coverage."""
    levels: dict[tuple[int, str], str] = {}
    max_ts = 0
    for atom in facts:
        if atom.predicate != LEVEL or atom.arity != 3:
            raise DataError(f"expected level/3 facts, got {atom.text}")
        col_t, lvl_t, ts_t = atom.args
        if not (col_t.is_constant and lvl_t.is_constant and ts_t.is_integer):
            raise DataError(f"malformed level fact {atom.text}")
        col, lvl, ts = col_t.name, lvl_t.name, ts_t.value
        col_spec = spec.get(col)
        if lvl not in col_spec.levels:
            raise DataError(f"{atom.text}: {lvl} is not a level of {col}")
        if ts < 1:
            raise DataError(f"{atom.text}: timestamps start at 1")
        key = (ts, col)
        if key in levels and levels[key] != lvl:
            raise DataError(f"conflicting levels for {col} at {ts}")
        levels[key] = lvl
        max_ts = max(max_ts, ts)
    for ts in range(1, max_ts + 1):
        for col in spec.column_names:
            if (ts, col) not in levels:
                raise DataError(f"missing level for {col} at timestamp {ts}")
    return levels, max_ts


def _window_context(
    levels: Mapping[tuple[int, str], str],
    spec: DiscretizationSpec,
    window: WindowSpec,
    start: int,
) -> tuple[Atom, ...]:
    """History atoms re-stamped to relative offsets 1..history."""
    atoms = []
    for offset in range(1, window.history + 1):
        for col in spec.column_names:
            atoms.append(
                level_atom(col, levels[(start + offset - 1, col)], offset)
            )
    return tuple(atoms)


def _bias_for(window: WindowSpec, template: TaskTemplate) -> ModeBias:
    spec = template.spec
    spec.get(window.target)  # fail fast on an unknown target column
    modes = [
        ModeDeclaration(
            HEAD,
            LEVEL,
            (
                (CONST_SLOT, f"col_{window.target}"),
                (CONST_SLOT, f"lvl_{window.target}"),
                (CONST_SLOT, "t_target"),
            ),
        )
    ]
    for col in spec.column_names:
        modes.append(
            ModeDeclaration(
                BODY,
                LEVEL,
                (
                    (CONST_SLOT, f"col_{col}"),
                    (CONST_SLOT, f"lvl_{col}"),
                    (VAR_SLOT, "time"),
                ),
                naf_allowed=template.naf_bodies,
            )
        )
    constants: list[tuple[str, Term]] = []
    for col, col_spec in spec.columns:
        constants.append((f"col_{col}", Term.constant(col)))
        for lvl in col_spec.levels:
            constants.append((f"lvl_{col}", Term.constant(lvl)))
    for offset in range(1, window.history + 1):
        constants.append(("time", Term.integer(offset)))
    constants.append(("t_target", Term.integer(window.target_stamp)))
    bounds = SpaceBounds(
        max_body=template.max_body,
        max_vars=template.resolved_max_vars(window),
        max_rules=template.max_rules,
        cap=template.cap,
    )
    return ModeBias(tuple(modes), tuple(constants), bounds)


def _background_for(window: WindowSpec, template: TaskTemplate) -> Program:
    if template.default_level is None:
        return Program()
    target_spec = template.spec.get(window.target)
    if template.default_level not in target_spec.levels:
        raise DataError(
            f"default level {template.default_level} is not a level of "
            f"{window.target}"
        )
    body = tuple(
        Literal.naf(level_atom(window.target, lvl, window.target_stamp))
        for lvl in target_spec.levels
        if lvl != template.default_level
    )
    head = level_atom(window.target, template.default_level, window.target_stamp)
    return Program((Rule(head, body),))


def build_task(
    facts: Sequence[Atom],
    window: WindowSpec,
    template: TaskTemplate,
) -> LasTask:
    """Emit the learning task for every window the facts cover.

    A series of N timestamps yields N - history windows w<start>, each a
    positive example whose context holds the history at relative stamps
    1..history and whose interpretation pins the observed target level
    at history + 1 (other levels excluded)."""
    spec = template.spec
    target_spec = spec.get(window.target)
    levels, max_ts = _index_facts(facts, spec)
    if max_ts < window.history + 1:
        raise DataError(
            f"need at least {window.history + 1} timestamps for history "
            f"{window.history}, got {max_ts}"
        )
    examples = []
    for start in range(1, max_ts - window.history + 1):
        observed = levels[(start + window.history, window.target)]
        inclusions = frozenset(
            {level_atom(window.target, observed, window.target_stamp)}
        )
        exclusions = frozenset(
            level_atom(window.target, lvl, window.target_stamp)
            for lvl in target_spec.levels
            if lvl != observed
        )
        context = Program(
            tuple(
                Rule(atom)
                for atom in _window_context(levels, spec, window, start)
            )
        )
        examples.append(
            WCDPI(
                f"w{start}",
                template.penalty,
                PartialInterpretation(inclusions, exclusions),
                context,
                POS,
            )
        )
    return LasTask(
        _background_for(window, template),
        _bias_for(window, template),
        tuple(examples),
    )


def default_scoring_for(
    window: WindowSpec, surcharge: int = 5
) -> ScoringFunction:
    """The pipeline's scoring: surcharge bodies that mention fewer than
    two distinct timestamps."""
    return multi_timestamp_scoring(
        surcharge,
        frozenset({"time"}),
        frozenset(
            Term.integer(i) for i in range(1, window.target_stamp + 1)
        ),
    )


def _validate_planted(
    planted: Rule,
    spec: DiscretizationSpec,
    window: WindowSpec,
) -> tuple[str, list[tuple[str, str, int]]]:
    """Returns (head level, [(column, level, offset), ...])."""
    if not isinstance(planted.head, Atom) or planted.head.predicate != LEVEL:
        raise DataError("the planted rule must derive a level/3 atom")
    if not planted.is_ground:
        raise DataError("the planted rule must be ground")
    col_t, lvl_t, ts_t = planted.head.args
    if col_t.name != window.target:
        raise DataError(
            f"the planted rule predicts {col_t.name}, not the target "
            f"{window.target}"
        )
    if not ts_t.is_integer or ts_t.value != window.target_stamp:
        raise DataError(
            f"the planted head must use timestamp {window.target_stamp}"
        )
    target_spec = spec.get(window.target)
    if lvl_t.name not in target_spec.levels:
        raise DataError(f"{lvl_t.name} is not a level of {window.target}")
    conditions = []
    for lit in planted.body:
        if not lit.is_positive or lit.atom.predicate != LEVEL:
            raise DataError(
                "the planted body must be positive level/3 literals"
            )
        c, l, t = lit.atom.args
        col_spec = spec.get(c.name)
        if l.name not in col_spec.levels:
            raise DataError(f"{l.name} is not a level of {c.name}")
        if not t.is_integer or not 1 <= t.value <= window.history:
            raise DataError(
                f"planted body timestamps must lie in 1..{window.history}"
            )
        conditions.append((c.name, l.name, t.value))
    if not conditions:
        raise DataError("the planted rule needs at least one condition")
    return lvl_t.name, conditions


def _value_ranges(spec: ColumnSpec) -> list[tuple[float, float]]:
    """Numeric sampling range per level, bounded away from thresholds."""
    if not spec.thresholds:
        lo = spec.floor if spec.floor is not None else 0.0
        hi = spec.ceil if spec.ceil is not None else lo + 1.0
        return [(lo, hi)]
    if len(spec.thresholds) >= 2:
        pad = (spec.thresholds[-1] - spec.thresholds[0]) / (
            len(spec.thresholds) - 1
        )
    else:
        pad = 1.0
    lo = spec.floor if spec.floor is not None else spec.thresholds[0] - pad
    hi = spec.ceil if spec.ceil is not None else spec.thresholds[-1] + pad
    bounds = [lo, *spec.thresholds, hi]
    return list(zip(bounds, bounds[1:]))


def synthesize_series(
    planted: Rule,
    spec: DiscretizationSpec,
    window: WindowSpec,
    *,
    rows: int = 240,
    seed: int = 0,
    flip_rate: float = 0.0,
) -> SeriesTable:
    """Generate a series where the target column obeys the planted rule.

    Non-target columns draw levels uniformly. The target takes the
    planted head level exactly when every body condition held in the
    preceding history, and the first spec level otherwise; with
    probability ``flip_rate`` a determined target level is replaced by a
    uniformly random different one. Numeric values are drawn uniformly
    inside the chosen level's range, so discretizing reproduces the
    levels exactly."""
    if rows < window.history + 1:
        raise DataError("rows must cover at least one full window")
    if not 0.0 <= flip_rate < 1.0:
        raise DataError("flip_rate must lie in [0, 1)")
    head_level, conditions = _validate_planted(planted, spec, window)
    target_spec = spec.get(window.target)
    else_candidates = [l for l in target_spec.levels if l != head_level]
    else_level = else_candidates[0] if else_candidates else head_level
    ranges = {name: _value_ranges(col) for name, col in spec.columns}

    rng = Random(seed)
    chosen: dict[tuple[int, str], str] = {}
    columns: dict[str, list[float]] = {name: [] for name in spec.column_names}

    def sample_value(col: str, level: str) -> float:
        col_spec = spec.get(col)
        lo, hi = ranges[col][col_spec.levels.index(level)]
        value = lo + rng.random() * (hi - lo)
        return lo if value >= hi else value

    for ts in range(1, rows + 1):
        for col, col_spec in spec.columns:
            if col != window.target:
                level = col_spec.levels[rng.randrange(len(col_spec.levels))]
            elif ts <= window.history:
                level = else_level
            else:
                start = ts - window.history
                fired = all(
                    chosen[(start + offset - 1, c)] == l
                    for c, l, offset in conditions
                )
                level = head_level if fired else else_level
                if rng.random() < flip_rate:
                    others = [l for l in target_spec.levels if l != level]
                    if others:
                        level = others[rng.randrange(len(others))]
            chosen[(ts, col)] = level
            columns[col].append(sample_value(col, level))

    return SeriesTable(
        tuple(range(1, rows + 1)),
        tuple((name, tuple(columns[name])) for name in spec.column_names),
    )


@dataclass(frozen=True)
class TaskSource:
    """Everything cross-validation needs: the series, the window, and
    the task template."""

    table: SeriesTable
    window: WindowSpec
    template: TaskTemplate


@dataclass(frozen=True)
class FoldReport:
    fold: int
    train_blocks: tuple[int, ...]
    n_train: int
    n_val: int
    hypothesis_texts: tuple[str, ...]
    cost: int
    accuracy: float
    majority: str


@dataclass(frozen=True)
class CrossvalReport:
    folds: tuple[FoldReport, ...]
    mean_accuracy: float

    def table_text(self) -> str:
        lines = ["fold  blocks      train  val  cost  accuracy  hypothesis"]
        for f in self.folds:
            hyp = " | ".join(f.hypothesis_texts) if f.hypothesis_texts else "(empty)"
            blocks = "+".join(str(b) for b in f.train_blocks)
            lines.append(
                f"{f.fold:<4}  {blocks:<10}  {f.n_train:<5}  {f.n_val:<3}  "
                f"{f.cost:<4}  {f.accuracy:<8.4f}  {hyp}"
            )
        lines.append(f"mean accuracy: {self.mean_accuracy:.4f}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StumpChoice:
    column: str
    offset: int
    level: str
    then_level: str
    else_level: str

    @property
    def text(self) -> str:
        return (
            f"{self.column}={self.level}@{self.offset} -> "
            f"{self.then_level} else {self.else_level}"
        )


@dataclass(frozen=True)
class BaselineRow:
    fold: int
    learner_accuracy: float
    stump_accuracy: float
    stump: StumpChoice


@dataclass(frozen=True)
class BaselineReport:
    rows: tuple[BaselineRow, ...]
    learner_mean: float
    stump_mean: float
    crossval: CrossvalReport

    def table_text(self) -> str:
        lines = ["fold  learner  stump   stump rule"]
        for row in self.rows:
            lines.append(
                f"{row.fold:<4}  {row.learner_accuracy:<7.4f}  "
                f"{row.stump_accuracy:<6.4f}  {row.stump.text}"
            )
        lines.append(
            f"mean learner: {self.learner_mean:.4f}  "
            f"mean stump: {self.stump_mean:.4f}"
        )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _FoldData:
    fold: int
    train_blocks: tuple[int, ...]
    train_starts: tuple[int, ...]
    val_starts: tuple[int, ...]


def _fold_layout(
    n_rows: int,
    window: WindowSpec,
    folds: int,
    train_days: int,
    day_length: int,
) -> list[_FoldData]:
    if day_length < 1:
        raise DataError("day_length must be positive")
    if n_rows % day_length != 0:
        raise DataError(
            f"{n_rows} rows do not divide into whole blocks of {day_length}"
        )
    n_blocks = n_rows // day_length
    if not 1 <= train_days < n_blocks:
        raise DataError(
            f"train_days must leave at least one validation block "
            f"(1 <= {train_days} < {n_blocks})"
        )
    if folds < 1:
        raise DataError("folds must be positive")

    def block_of(ts: int) -> int:
        return (ts - 1) // day_length

    out = []
    for fold in range(folds):
        train_blocks = tuple((fold + j) % n_blocks for j in range(train_days))
        train_set = set(train_blocks)
        train_starts = []
        val_starts = []
        for start in range(1, n_rows - window.history + 1):
            blocks = {block_of(t) for t in range(start, start + window.history + 1)}
            if blocks <= train_set:
                train_starts.append(start)
            elif not blocks & train_set:
                val_starts.append(start)
        if not val_starts:
            raise DataError(f"fold {fold} has no validation windows")
        out.append(
            _FoldData(fold, train_blocks, tuple(train_starts), tuple(val_starts))
        )
    return out


def _majority(
    counts: Mapping[str, int], level_order: Sequence[str]
) -> str:
    best = None
    for lvl in level_order:
        n = counts.get(lvl, 0)
        if best is None or n > counts.get(best, 0):
            best = lvl
    return best


def _predict(
    background: Program,
    hypothesis_rules: tuple[Rule, ...],
    context: tuple[Atom, ...],
    window: WindowSpec,
    target_levels: Sequence[str],
    constants: dict[str, tuple[Term, ...]],
    majority: str,
    max_base: int,
) -> str:
    """Brave-entailed target level; ties prefer the level derived by the
    longest satisfied rule body, then spec level order; fall back to the
    training majority when nothing is entailed."""
    combined = Program(
        background.rules
        + hypothesis_rules
        + tuple(Rule(atom) for atom in context)
    )
    universe = herbrand_universe(combined, constants)
    grounded = ground(combined, universe)
    result = answer_sets(grounded, max_base=max_base)
    target_atoms = {
        lvl: level_atom(window.target, lvl, window.target_stamp)
        for lvl in target_levels
    }
    entailed = [
        lvl
        for lvl in target_levels
        if any(target_atoms[lvl] in model for model in result.models)
    ]
    if not entailed:
        return majority
    if len(entailed) == 1:
        return entailed[0]
    support: dict[str, int] = {}
    for model in result.models:
        for rule in grounded.rules:
            if rule.head is None or not isinstance(rule.head, Atom):
                continue
            for lvl in entailed:
                if rule.head != target_atoms[lvl] or rule.head not in model:
                    continue
                satisfied = all(
                    (lit.atom in model) == lit.is_positive
                    for lit in rule.body
                )
                if satisfied:
                    support[lvl] = max(support.get(lvl, 0), len(rule.body))
    return min(
        entailed,
        key=lambda lvl: (-support.get(lvl, 0), target_levels.index(lvl)),
    )


def crossval(
    source: TaskSource,
    folds: int = 10,
    train_days: int = 4,
    day_length: int = 24,
    *,
    scoring: Optional[ScoringFunction] = None,
    surcharge: int = 5,
    max_base: int = DEFAULT_MAX_BASE,
) -> CrossvalReport:
    """Block cross-validation: fold f trains on ``train_days`` blocks
    starting at block f (wrapping) and validates on the windows that
    touch no training block. Prediction uses brave entailment of the
    target level with majority fallback."""
    window = source.window
    template = source.template
    spec = template.spec
    target_levels = spec.get(window.target).levels
    facts = discretize(source.table, spec)
    task = build_task(facts, window, template)
    examples_by_start = {
        int(e.example_id[1:]): e for e in task.examples
    }
    levels, _ = _index_facts(facts, spec)
    layout = _fold_layout(len(source.table), window, folds, train_days, day_length)

    if scoring is None:
        scoring = default_scoring_for(window, surcharge)
    space = space_for_bias(task.bias)
    cache: dict = {}
    constants = task.bias.constants_by_type()

    prediction_memo: dict[tuple, str] = {}
    fold_reports = []
    for fold_data in layout:
        train_task = LasTask(
            task.background,
            task.bias,
            tuple(examples_by_start[s] for s in fold_data.train_starts),
        )
        result = learn(
            train_task,
            scoring,
            LearnConfig(max_base=max_base, space=space, cache=cache),
        )
        counts: dict[str, int] = {}
        for start in fold_data.train_starts:
            observed = levels[(start + window.history, window.target)]
            counts[observed] = counts.get(observed, 0) + 1
        majority = _majority(counts, target_levels)

        hyp_rules = result.hypothesis.rules
        hyp_key = tuple(r.text for r in hyp_rules)
        correct = 0
        for start in fold_data.val_starts:
            context = _window_context(levels, spec, window, start)
            memo_key = (hyp_key, majority, tuple(a.text for a in context))
            predicted = prediction_memo.get(memo_key)
            if predicted is None:
                predicted = _predict(
                    task.background,
                    hyp_rules,
                    context,
                    window,
                    target_levels,
                    constants,
                    majority,
                    max_base,
                )
                prediction_memo[memo_key] = predicted
            observed = levels[(start + window.history, window.target)]
            if predicted == observed:
                correct += 1
        accuracy = correct / len(fold_data.val_starts)
        fold_reports.append(
            FoldReport(
                fold_data.fold,
                fold_data.train_blocks,
                len(fold_data.train_starts),
                len(fold_data.val_starts),
                result.hypothesis.texts,
                result.hypothesis.cost,
                accuracy,
                majority,
            )
        )
    mean = sum(f.accuracy for f in fold_reports) / len(fold_reports)
    return CrossvalReport(tuple(fold_reports), mean)


def _fit_stump(
    levels: Mapping[tuple[int, str], str],
    spec: DiscretizationSpec,
    window: WindowSpec,
    starts: Sequence[int],
    target_levels: Sequence[str],
) -> StumpChoice:
    """The depth-1 stump with the best training accuracy, ties broken by
    spec column order, then offset, then level order."""
    observed = {
        s: levels[(s + window.history, window.target)] for s in starts
    }
    overall: dict[str, int] = {}
    for lvl in observed.values():
        overall[lvl] = overall.get(lvl, 0) + 1
    fallback = _majority(overall, target_levels)

    best: Optional[tuple[int, StumpChoice]] = None
    for col, col_spec in spec.columns:
        for offset in range(1, window.history + 1):
            for feature_level in col_spec.levels:
                then_counts: dict[str, int] = {}
                else_counts: dict[str, int] = {}
                for s in starts:
                    bucket = (
                        then_counts
                        if levels[(s + offset - 1, col)] == feature_level
                        else else_counts
                    )
                    bucket[observed[s]] = bucket.get(observed[s], 0) + 1
                then_level = (
                    _majority(then_counts, target_levels)
                    if then_counts
                    else fallback
                )
                else_level = (
                    _majority(else_counts, target_levels)
                    if else_counts
                    else fallback
                )
                hits = then_counts.get(then_level, 0) + else_counts.get(
                    else_level, 0
                )
                if best is None or hits > best[0]:
                    best = (
                        hits,
                        StumpChoice(col, offset, feature_level, then_level, else_level),
                    )
    return best[1]


def baseline_compare(
    source: TaskSource,
    folds: int = 10,
    train_days: int = 4,
    day_length: int = 24,
    *,
    scoring: Optional[ScoringFunction] = None,
    surcharge: int = 5,
    max_base: int = DEFAULT_MAX_BASE,
) -> BaselineReport:
    """Cross-validate the learner and a depth-1 decision stump on the
    same folds."""
    window = source.window
    spec = source.template.spec
    target_levels = spec.get(window.target).levels
    report = crossval(
        source,
        folds,
        train_days,
        day_length,
        scoring=scoring,
        surcharge=surcharge,
        max_base=max_base,
    )
    facts = discretize(source.table, spec)
    levels, _ = _index_facts(facts, spec)
    layout = _fold_layout(len(source.table), window, folds, train_days, day_length)

    rows = []
    for fold_data, fold_report in zip(layout, report.folds):
        stump = _fit_stump(
            levels, spec, window, fold_data.train_starts, target_levels
        )
        correct = 0
        for s in fold_data.val_starts:
            feature = levels[(s + stump.offset - 1, stump.column)]
            predicted = (
                stump.then_level
                if feature == stump.level
                else stump.else_level
            )
            if predicted == levels[(s + window.history, window.target)]:
                correct += 1
        rows.append(
            BaselineRow(
                fold_data.fold,
                fold_report.accuracy,
                correct / len(fold_data.val_starts),
                stump,
            )
        )
    stump_mean = sum(r.stump_accuracy for r in rows) / len(rows)
    return BaselineReport(tuple(rows), report.mean_accuracy, stump_mean, report)
