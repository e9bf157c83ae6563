"""Command-line interface.

Subcommands: ground, solve, space, learn, explain, taskgen, evaluate,
demo. Exit codes: 0 success, 1 usage error, 2 bad input (parse errors,
grounding failures, size limits, unreadable files), 10 solve found no
answer sets. All output is deterministic given the inputs and --seed.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .explain import explain_absence, explain_atom, to_graph_text
from .ground import ground, herbrand_universe
from .learner import (
    LasTask,
    LearnConfig,
    default_scoring,
    learn,
    multi_timestamp_scoring,
    task_text,
)
from .logic import Atom, MiniLasError, Program, Rule
from .modes import ScoringFunction, space_for_bias
from .parser import parse_ground_atom, parse_program, parse_task
from .solver import answer_sets, brave_entails, cautious_entails
from .weather import (
    TaskSource,
    TaskTemplate,
    WindowSpec,
    baseline_compare,
    build_task,
    crossval,
    default_scoring_for,
    discretize,
    ingest,
    load_discretization,
    synthesize_series,
)

OK = 0
USAGE_ERROR = 1
INPUT_ERROR = 2
NO_MODELS = 10


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse hook
        raise _UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return value


def _rate(text: str) -> float:
    value = float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1)")
    return value


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--max-base-atoms",
        type=_positive_int,
        default=24,
        help="largest ground base the solver will enumerate (default 24)",
    )
    common.add_argument(
        "--space-cap",
        type=_positive_int,
        default=100_000,
        help="largest hypothesis space to enumerate (default 100000)",
    )
    common.add_argument(
        "--seed",
        type=_nonnegative_int,
        default=0,
        help="random seed for synthetic data (default 0)",
    )
    common.add_argument(
        "--quiet", action="store_true", help="trim output to the essentials"
    )
    common.add_argument(
        "-o",
        "--output",
        metavar="PATH",
        default=None,
        help="write the result to a file instead of stdout",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _ArgumentParser(
        prog="minilas",
        description="learning from answer sets at desk scale",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_ground = sub.add_parser(
        "ground", parents=[common], help="print a program's ground instantiation"
    )
    p_ground.add_argument("file", help="program file (.lp)")

    p_solve = sub.add_parser(
        "solve", parents=[common], help="enumerate a program's answer sets"
    )
    p_solve.add_argument("file", help="program file (.lp)")
    p_solve.add_argument(
        "--limit", type=_positive_int, default=None, help="stop after N models"
    )
    p_solve.add_argument(
        "--brave", metavar="ATOM", default=None,
        help="also report whether some answer set contains ATOM",
    )
    p_solve.add_argument(
        "--cautious", metavar="ATOM", default=None,
        help="also report whether every answer set contains ATOM",
    )

    p_space = sub.add_parser(
        "space", parents=[common], help="list a task's hypothesis space"
    )
    p_space.add_argument("file", help="task file (.task)")

    p_learn = sub.add_parser(
        "learn", parents=[common], help="learn an optimal hypothesis for a task"
    )
    p_learn.add_argument("file", help="task file (.task)")
    p_learn.add_argument(
        "--scoring",
        choices=("default", "multi-timestamp"),
        default="default",
        help="rule scoring bias (default: none beyond 1 + body size)",
    )
    p_learn.add_argument(
        "--surcharge", type=_nonnegative_int, default=5,
        help="multi-timestamp surcharge (default 5)",
    )

    p_explain = sub.add_parser(
        "explain", parents=[common],
        help="draw why an atom is in (or out of) an answer set",
    )
    p_explain.add_argument("file", help="program file (.lp)")
    p_explain.add_argument("--atom", required=True, help="ground atom to explain")
    p_explain.add_argument(
        "--model", type=_positive_int, default=1,
        help="1-based answer-set index (default 1)",
    )
    p_explain.add_argument(
        "--all-supports", action="store_true",
        help="annotate atoms with alternative deriving rules",
    )

    p_taskgen = sub.add_parser(
        "taskgen", parents=[common],
        help="turn a numeric series into a learning task",
    )
    p_taskgen.add_argument("--data", required=True, help="series CSV file")
    p_taskgen.add_argument(
        "--spec", required=True, help="discretization TOML file"
    )
    p_taskgen.add_argument("--target", required=True, help="column to predict")
    p_taskgen.add_argument(
        "--window", type=_positive_int, default=1,
        help="history length in steps (default 1)",
    )
    p_taskgen.add_argument(
        "--penalty", type=_positive_int, default=1,
        help="penalty per example (default 1)",
    )
    p_taskgen.add_argument(
        "--max-body", type=_nonnegative_int, default=2,
        help="body literals per rule (default 2)",
    )
    p_taskgen.add_argument(
        "--max-rules", type=_positive_int, default=1,
        help="rules per hypothesis (default 1)",
    )
    p_taskgen.add_argument(
        "--default-level", default=None,
        help="derive this target level when nothing fires "
        "(default: the target's first level)",
    )
    p_taskgen.add_argument(
        "--no-default", action="store_true",
        help="omit the default-level background rule",
    )
    p_taskgen.add_argument(
        "--naf", action="store_true",
        help="allow negated body literals in the space",
    )

    p_eval = sub.add_parser(
        "evaluate", parents=[common],
        help="cross-validate the pipeline on real or synthetic data",
    )
    source = p_eval.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", default=None, help="series CSV file")
    source.add_argument(
        "--synthetic", action="store_true",
        help="generate a series around a planted rule",
    )
    p_eval.add_argument(
        "--spec", default=None,
        help="discretization TOML (default: the bundled weather levels)",
    )
    p_eval.add_argument(
        "--target", default="rain", help="column to predict (default rain)"
    )
    p_eval.add_argument(
        "--window", type=_positive_int, default=1,
        help="history length in steps (default 1)",
    )
    p_eval.add_argument(
        "--planted", default=None,
        help="planted rule file for --synthetic (default: bundled)",
    )
    p_eval.add_argument(
        "--rows", type=_positive_int, default=240,
        help="synthetic series length (default 240)",
    )
    p_eval.add_argument(
        "--noise", type=_rate, default=0.1,
        help="synthetic label-flip rate (default 0.1)",
    )
    p_eval.add_argument(
        "--folds", type=_positive_int, default=10,
        help="cross-validation folds (default 10)",
    )
    p_eval.add_argument(
        "--train-days", type=_positive_int, default=4,
        help="training blocks per fold (default 4)",
    )
    p_eval.add_argument(
        "--day-length", type=_positive_int, default=24,
        help="rows per block (default 24)",
    )
    p_eval.add_argument(
        "--penalty", type=_positive_int, default=1,
        help="penalty per example (default 1)",
    )
    p_eval.add_argument(
        "--surcharge", type=_nonnegative_int, default=5,
        help="multi-timestamp surcharge (default 5)",
    )
    p_eval.add_argument(
        "--scoring",
        choices=("default", "multi-timestamp"),
        default="multi-timestamp",
        help="rule scoring bias (default multi-timestamp)",
    )
    p_eval.add_argument(
        "--baseline", action="store_true",
        help="also fit and score a depth-1 decision stump",
    )

    p_demo = sub.add_parser(
        "demo", parents=[common], help="run a built-in walkthrough"
    )
    p_demo.add_argument(
        "which", choices=("legal", "weather"), help="which walkthrough"
    )

    return parser


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise MiniLasError(f"cannot read {path}: {err.strerror}") from None


def _asset_text(name: str) -> str:
    return (
        resources.files("minilas").joinpath("assets").joinpath(name)
        .read_text(encoding="utf-8")
    )


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as err:
            raise MiniLasError(
                f"cannot write {args.output}: {err.strerror}"
            ) from None
    else:
        sys.stdout.write(text)


def _model_text(model: frozenset[Atom]) -> str:
    return "{" + ", ".join(sorted(a.text for a in model)) + "}"


def _scoring_for(args: argparse.Namespace, task: LasTask) -> ScoringFunction:
    if args.scoring == "default":
        return default_scoring()
    time_constants = frozenset(
        term for type_name, term in task.bias.constants if type_name == "time"
    )
    return multi_timestamp_scoring(
        args.surcharge, frozenset({"time"}), time_constants
    )


def _cmd_ground(args: argparse.Namespace) -> int:
    program = parse_program(_read_file(args.file))
    _emit(args, ground(program).text)
    return OK


def _cmd_solve(args: argparse.Namespace) -> int:
    program = parse_program(_read_file(args.file))
    grounded = ground(program)
    result = answer_sets(
        grounded, limit=args.limit, max_base=args.max_base_atoms
    )
    lines = []
    if not args.quiet:
        for i, model in enumerate(result.models, start=1):
            lines.append(f"model {i}: {_model_text(model)}")
    status = "complete" if result.complete else "truncated"
    lines.append(f"models: {len(result.models)} ({status})")
    for flag, fn in (("brave", brave_entails), ("cautious", cautious_entails)):
        text = getattr(args, flag)
        if text is not None:
            atom = parse_ground_atom(text)
            verdict = fn(grounded, atom, max_base=args.max_base_atoms)
            lines.append(f"{flag} {atom.text}: {'yes' if verdict else 'no'}")
    _emit(args, "\n".join(lines) + "\n")
    return NO_MODELS if not result.models else OK


def _cmd_space(args: argparse.Namespace) -> int:
    task = parse_task(_read_file(args.file))
    bias = replace(
        task.bias, bounds=replace(task.bias.bounds, cap=args.space_cap)
    )
    space = space_for_bias(bias)
    lines = [
        f"{i}\t{cost}\t{rule.text}"
        for i, (rule, cost) in enumerate(zip(space.rules, space.base_costs))
    ]
    lines.append(f"rules: {len(space)}")
    _emit(args, "\n".join(lines) + "\n")
    return OK


def _cmd_learn(args: argparse.Namespace) -> int:
    task = parse_task(_read_file(args.file))
    task = LasTask(
        task.background,
        replace(
            task.bias, bounds=replace(task.bias.bounds, cap=args.space_cap)
        ),
        task.examples,
    )
    result = learn(
        task,
        _scoring_for(args, task),
        LearnConfig(max_base=args.max_base_atoms),
    )
    if args.quiet:
        lines = list(result.hypothesis.texts) or ["% empty hypothesis"]
        lines.append(f"cost: {result.hypothesis.cost}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, result.report_text())
    return OK


def _cmd_explain(args: argparse.Namespace) -> int:
    program = parse_program(_read_file(args.file))
    grounded = ground(program)
    target = parse_ground_atom(args.atom)
    result = answer_sets(grounded, max_base=args.max_base_atoms)
    if not result.models:
        _emit(args, "models: 0 (complete)\n")
        return NO_MODELS
    if args.model > len(result.models):
        raise MiniLasError(
            f"model {args.model} requested but only {len(result.models)} exist"
        )
    model = result.models[args.model - 1]
    if target in model:
        dag = explain_atom(
            grounded, model, target,
            all_supports=args.all_supports, max_base=args.max_base_atoms,
        )
    else:
        dag = explain_absence(
            grounded, model, target, max_base=args.max_base_atoms
        )
    _emit(args, to_graph_text(dag))
    return OK


def _taskgen_template(
    args: argparse.Namespace, spec, target: str
) -> TaskTemplate:
    if args.no_default:
        default_level = None
    elif args.default_level is not None:
        default_level = args.default_level
    else:
        default_level = spec.get(target).levels[0]
    return TaskTemplate(
        spec,
        default_level=default_level,
        penalty=args.penalty,
        max_body=args.max_body,
        max_rules=args.max_rules,
        naf_bodies=args.naf,
        cap=args.space_cap,
    )


def _cmd_taskgen(args: argparse.Namespace) -> int:
    spec = load_discretization(_read_file(args.spec))
    table = ingest(_read_file(args.data))
    window = WindowSpec(args.window, args.target)
    template = _taskgen_template(args, spec, args.target)
    task = build_task(discretize(table, spec), window, template)
    _emit(args, task_text(task))
    return OK


def _planted_rule(args: argparse.Namespace) -> Rule:
    text = (
        _read_file(args.planted)
        if args.planted
        else _asset_text("planted_rain.lp")
    )
    program = parse_program(text)
    if len(program.rules) != 1:
        raise MiniLasError("the planted-rule file must hold exactly one rule")
    return program.rules[0]


def _cmd_evaluate(args: argparse.Namespace) -> int:
    spec_text = (
        _read_file(args.spec)
        if args.spec
        else _asset_text("weather_levels.toml")
    )
    spec = load_discretization(spec_text)
    window = WindowSpec(args.window, args.target)
    if args.synthetic:
        planted = _planted_rule(args)
        table = synthesize_series(
            planted, spec, window,
            rows=args.rows, seed=args.seed, flip_rate=args.noise,
        )
    else:
        table = ingest(_read_file(args.data))
    template = TaskTemplate(
        spec,
        default_level=spec.get(args.target).levels[0],
        penalty=args.penalty,
        cap=args.space_cap,
    )
    source = TaskSource(table, window, template)
    scoring = (
        default_scoring() if args.scoring == "default" else None
    )  # None lets the pipeline build its multi-timestamp default
    if args.baseline:
        report = baseline_compare(
            source, args.folds, args.train_days, args.day_length,
            scoring=scoring, surcharge=args.surcharge,
            max_base=args.max_base_atoms,
        )
        _emit(args, report.table_text())
    else:
        report = crossval(
            source, args.folds, args.train_days, args.day_length,
            scoring=scoring, surcharge=args.surcharge,
            max_base=args.max_base_atoms,
        )
        if args.quiet:
            _emit(args, f"mean accuracy: {report.mean_accuracy:.4f}\n")
        else:
            _emit(args, report.table_text())
    return OK


def _demo_legal(args: argparse.Namespace) -> str:
    lines = ["== the vague case =="]
    vague = parse_program(_asset_text("legal_vague.lp"))
    grounded = ground(vague)
    result = answer_sets(grounded, max_base=args.max_base_atoms)
    for i, model in enumerate(result.models, start=1):
        lines.append(f"model {i}: {_model_text(model)}")
    lines.append(f"models: {len(result.models)} (complete)")

    lines.append("")
    lines.append("== learning the force standard from precedent ==")
    task = parse_task(_asset_text("legal.task"))
    learned = learn(task, config=LearnConfig(max_base=args.max_base_atoms))
    for text in learned.hypothesis.texts:
        lines.append(f"learned: {text}")
    lines.append(f"cost: {learned.hypothesis.cost}")
    accepted = sum(1 for o in learned.outcomes if o.accepted)
    lines.append(f"precedents accepted: {accepted}/{len(learned.outcomes)}")

    lines.append("")
    lines.append("== deciding fresh cases ==")
    statute_plus = task.background.rules + learned.hypothesis.rules
    for label, asset in (
        ("bag held and pulled", "case_resisted.lp"),
        ("bag whisked away unnoticed", "case_plain.lp"),
    ):
        case = parse_program(_asset_text(asset))
        combined = ground(Program(statute_plus + case.rules))
        models = answer_sets(combined, max_base=args.max_base_atoms).models
        verdicts = sorted(
            atom.text
            for model in models
            for atom in model
            if atom.predicate == "verdict"
        )
        lines.append(
            f"{label}: {' / '.join(verdicts)} "
            f"({len(models)} answer set{'s' if len(models) != 1 else ''})"
        )
    lines.append("")
    lines.append("== why the resisted snatch is robbery ==")
    case = parse_program(_asset_text("case_resisted.lp"))
    combined = ground(Program(statute_plus + case.rules))
    model = answer_sets(combined, max_base=args.max_base_atoms).models[0]
    dag = explain_atom(combined, model, parse_ground_atom("verdict(robbery)"))
    lines.append(to_graph_text(dag).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _demo_weather(args: argparse.Namespace) -> str:
    spec = load_discretization(_asset_text("weather_levels.toml"))
    planted = parse_program(_asset_text("planted_rain.lp")).rules[0]
    window = WindowSpec(1, "rain")
    rows, day_length = 240, 24
    table = synthesize_series(
        planted, spec, window, rows=rows, seed=args.seed, flip_rate=0.1
    )
    template = TaskTemplate(spec, default_level="none")
    source = TaskSource(table, window, template)

    lines = ["== synthetic series =="]
    lines.append(f"planted rule: {planted.text}")
    lines.append(
        f"rows: {rows} in {rows // day_length} blocks of {day_length}, "
        f"label noise: 0.1, seed: {args.seed}"
    )
    lines.append("")
    lines.append("== cross-validation (4 training blocks per fold) ==")
    report = baseline_compare(
        source, 10, 4, day_length, max_base=args.max_base_atoms
    )
    lines.append(report.crossval.table_text().rstrip("\n"))
    tally = Counter(f.hypothesis_texts for f in report.crossval.folds)
    common, count = tally.most_common(1)[0]
    lines.append(
        f"most common hypothesis ({count}/{len(report.crossval.folds)} "
        f"folds): {' | '.join(common) if common else '(empty)'}"
    )
    lines.append("")
    lines.append("== against a depth-1 stump ==")
    lines.append(report.table_text().rstrip("\n"))

    lines.append("")
    lines.append("== why the first firing window predicts rain ==")
    facts = discretize(table, spec)
    task = build_task(facts, window, template)
    best = learn(
        task,
        default_scoring_for(window),
        LearnConfig(max_base=args.max_base_atoms),
    )
    hypothesis = best.hypothesis.rules
    fired_start = None
    level_at = {}
    for atom in facts:
        col, lvl, ts = atom.args
        level_at[(ts.value, col.name)] = lvl.name
    for start in range(1, rows):
        if (
            level_at[(start, "humidity")] == "high"
            and level_at[(start, "pressure")] == "low"
        ):
            fired_start = start
            break
    if fired_start is None or not hypothesis:
        lines.append("(no firing window in this series)")
        return "\n".join(lines) + "\n"
    context = tuple(
        parse_ground_atom(f"level({col},{level_at[(fired_start, col)]},1)")
        for col in spec.column_names
    )
    firing = Program(
        task.background.rules
        + hypothesis
        + tuple(Rule(atom) for atom in context)
    )
    combined = ground(
        firing, herbrand_universe(firing, task.bias.constants_by_type())
    )
    lines.append(f"window start: t={fired_start}")
    model = answer_sets(combined, max_base=args.max_base_atoms).models[0]
    dag = explain_atom(
        combined, model, parse_ground_atom("level(rain,high,2)")
    )
    lines.append(to_graph_text(dag).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _cmd_demo(args: argparse.Namespace) -> int:
    if args.which == "legal":
        _emit(args, _demo_legal(args))
    else:
        _emit(args, _demo_weather(args))
    return OK


_COMMANDS = {
    "ground": _cmd_ground,
    "solve": _cmd_solve,
    "space": _cmd_space,
    "learn": _cmd_learn,
    "explain": _cmd_explain,
    "taskgen": _cmd_taskgen,
    "evaluate": _cmd_evaluate,
    "demo": _cmd_demo,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return USAGE_ERROR
    if args.command is None:
        parser.print_usage(sys.stderr)
        return USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except MiniLasError as err:
        sys.stderr.write(f"error: {err}\n")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
