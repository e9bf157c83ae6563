"""Reading explanation graphs for presence and absence.

A small program with a choice rule and negation has several answer
sets. For one of them, the walkthrough draws why an atom is in (the
chain of rules and naf leaves that derive it) and why another atom is
out (every rule that could derive it, each blocked by a refuted body
literal).

Run: python3 demos/explain_walkthrough.py
"""

from minilas import (
    answer_sets,
    explain_absence,
    explain_atom,
    ground,
    parse_ground_atom,
    parse_program,
    to_graph_text,
)

PROGRAM = """\
% pick at most one side dish
0 {fries; salad} 1.
% the meal is heavy unless a salad balances it
heavy :- burger, not salad.
burger.
discount :- heavy, fries.
"""


def main() -> None:
    print("Program:")
    print(PROGRAM)
    grounded = ground(parse_program(PROGRAM))
    result = answer_sets(grounded)
    for i, model in enumerate(result.models, start=1):
        atoms = ", ".join(sorted(a.text for a in model))
        print(f"answer set {i}: {{{atoms}}}")
    print()

    fries_model = next(
        m for m in result.models if parse_ground_atom("fries") in m
    )

    print("Why discount holds when fries were picked:")
    dag = explain_atom(grounded, fries_model, parse_ground_atom("discount"))
    print(to_graph_text(dag))

    print("Why salad is absent from the same answer set:")
    dag = explain_absence(grounded, fries_model, parse_ground_atom("salad"))
    print(to_graph_text(dag))
    print("Each block is Graphviz DOT; render with `dot -Tpng`.")


if __name__ == "__main__":
    main()
