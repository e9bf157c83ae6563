"""Filling a vague legal standard with a learned rule.

A statute distinguishes robbery (a taking with violence on the person)
from aggravated theft (a sudden snatch without such violence). Whether a
snatch amounts to "violence on the person" is left open. With the
standard undefined, a borderline case admits two answer sets, one per
classification. Learning the standard from six precedents collapses the
ambiguity: every fresh case gets exactly one verdict, and the
explanation graph shows the learned rule doing the work.

Run: python3 demos/legal_standard.py
"""

from importlib import resources

from minilas import (
    Program,
    answer_sets,
    explain_atom,
    ground,
    learn,
    parse_ground_atom,
    parse_program,
    parse_task,
    to_graph_text,
)


def asset(name: str) -> str:
    return (
        resources.files("minilas").joinpath("assets").joinpath(name)
        .read_text(encoding="utf-8")
    )


def show_models(program: Program) -> list:
    models = answer_sets(ground(program)).models
    for i, model in enumerate(models, start=1):
        atoms = ", ".join(sorted(a.text for a in model))
        print(f"  answer set {i}: {{{atoms}}}")
    return list(models)


def main() -> None:
    print("A borderline snatch, statute only:")
    vague = parse_program(asset("legal_vague.lp"))
    models = show_models(vague)
    print(f"  -> {len(models)} incompatible readings; the standard is vague.")
    print()

    print("Learning the standard from six precedents:")
    task = parse_task(asset("legal.task"))
    result = learn(task)
    for text in result.hypothesis.texts:
        print(f"  learned: {text}")
    accepted = sum(1 for o in result.outcomes if o.accepted)
    print(f"  cost {result.hypothesis.cost}, "
          f"precedents covered {accepted}/{len(result.outcomes)}")
    print()

    print("Deciding fresh cases under the learned standard:")
    statute = task.background.rules + result.hypothesis.rules
    last_grounding = None
    last_model = None
    for label, case_file in (
        ("victim held on to the bag", "case_resisted.lp"),
        ("bag whisked away unnoticed", "case_plain.lp"),
    ):
        case = parse_program(asset(case_file))
        grounding = ground(Program(statute + case.rules))
        case_models = answer_sets(grounding).models
        verdicts = sorted(
            a.text
            for a in case_models[0]
            if a.predicate == "verdict"
        )
        print(f"  {label}: {len(case_models)} answer set, "
              f"verdict {verdicts[0]}")
        if case_file == "case_resisted.lp":
            last_grounding, last_model = grounding, case_models[0]
    print()

    print("Why robbery in the resisted case (Graphviz DOT):")
    dag = explain_atom(
        last_grounding, last_model, parse_ground_atom("verdict(robbery)")
    )
    print(to_graph_text(dag))
    print("Pipe the block above into `dot -Tpng` to render it.")


if __name__ == "__main__":
    main()
