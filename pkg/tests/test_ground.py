"""Grounding: universes, instantiation, builtin evaluation, atom ids."""

import pytest

from minilas.ground import (
    GroundProgram,
    GroundingError,
    HerbrandUniverse,
    eval_builtin,
    ground,
    herbrand_universe,
)
from minilas.logic import (
    Atom,
    ChoiceHead,
    Literal,
    ProgramError,
    Program,
    Rule,
    Term,
)
from minilas.parser import parse_program


def test_eval_builtin_table():
    assert eval_builtin(1, "<", 2)
    assert not eval_builtin(2, "<", 2)
    assert eval_builtin(2, "<=", 2)
    assert eval_builtin(2, "=", 2)
    assert eval_builtin(1, "!=", 2)
    assert eval_builtin(3, ">", 2)
    assert eval_builtin(2, ">=", 2)
    with pytest.raises(ProgramError):
        eval_builtin(1, "<>", 2)


def test_universe_collects_and_sorts():
    program = parse_program("p(b,2) :- q(a).\nq(a).\nr(-1).")
    universe = herbrand_universe(program)
    assert universe.constants == (
        Term.integer(-1),
        Term.integer(2),
        Term.constant("a"),
        Term.constant("b"),
    )
    assert universe.domain(None) == universe.constants
    assert universe.domain("missing") == ()


def test_universe_typed_extras():
    program = parse_program("p(a).")
    universe = herbrand_universe(
        program, {"t": (Term.integer(1), Term.constant("z"))}
    )
    assert universe.domain("t") == (Term.integer(1), Term.constant("z"))
    # extras join the untyped domain too
    assert Term.constant("z") in universe.constants
    with pytest.raises(GroundingError):
        herbrand_universe(program, {"t": (Term.variable("X"),)})


def test_ground_instantiates_variables():
    program = parse_program("p(a). p(b).\nq(X) :- p(X).")
    grounded = ground(program)
    texts = [r.text for r in grounded.rules]
    assert texts == ["p(a).", "p(b).", "q(a) :- p(a).", "q(b) :- p(b)."]


def test_ground_eliminates_comparisons():
    program = parse_program("p(1). p(2). p(3).\nq(X) :- p(X), X < 3, X != 1.")
    grounded = ground(program)
    q_rules = [r for r in grounded.rules if r.head.predicate == "q"]
    assert [r.text for r in q_rules] == ["q(2) :- p(2)."]


def test_ground_rejects_non_integer_comparison_operand():
    program = parse_program("p(a).\nq(X) :- p(X), X < 3.")
    with pytest.raises(GroundingError, match="non-integer"):
        ground(program)


def test_ground_typed_variables_use_their_pool():
    rule = Rule(
        Atom("q", (Term.variable("V1"),)),
        (Literal.pos(Atom("p", (Term.variable("V1"),))),),
        var_types=(("V1", "t"),),
    )
    program = Program((Rule(Atom("p", (Term.constant("a"),))), rule))
    universe = herbrand_universe(program, {"t": (Term.constant("a"),)})
    grounded = ground(program, universe)
    assert [r.text for r in grounded.rules] == ["p(a).", "q(a) :- p(a)."]
    # an unknown type means an empty pool: no instances at all
    bare = ground(program, herbrand_universe(program))
    assert [r.text for r in bare.rules] == ["p(a)."]


def test_ground_empty_universe_with_variables_fails():
    program = parse_program("q(X) :- p(X).")
    with pytest.raises(GroundingError, match="universe is empty"):
        ground(program, HerbrandUniverse())


def test_ground_choice_dedup_and_clamp():
    # substitution collapses both elements to c(a); upper clamps to 1
    rule = Rule(
        ChoiceHead(0, (Atom("c", (Term.variable("X"),)), Atom("c", (Term.constant("a"),))), 2),
        (Literal.pos(Atom("p", (Term.variable("X"),))),),
    )
    program = Program((Rule(Atom("p", (Term.constant("a"),))), rule))
    grounded = ground(program)
    choice = grounded.rules[1].head
    assert isinstance(choice, ChoiceHead)
    assert len(choice.atoms) == 1
    assert choice.upper == 1


def test_ground_choice_lower_collapse_becomes_constraint():
    rule = Rule(
        ChoiceHead(
            2,
            (Atom("c", (Term.variable("X"),)), Atom("c", (Term.constant("a"),))),
            2,
        ),
        (Literal.pos(Atom("p", (Term.variable("X"),))),),
    )
    program = Program((Rule(Atom("p", (Term.constant("a"),))), rule))
    grounded = ground(program)
    assert grounded.rules[1].is_constraint
    assert grounded.rules[1].text == ":- p(a)."


def test_ground_choice_bodyless_lower_collapse_fails():
    # both elements collapse to c(a) under X -> a, leaving a bodyless
    # choice that can never reach its lower bound of 2
    rule = Rule(
        ChoiceHead(
            2,
            (Atom("c", (Term.variable("X"),)), Atom("c", (Term.constant("a"),))),
            2,
        ),
    )
    program = Program((Rule(Atom("p", (Term.constant("a"),))), rule))
    with pytest.raises(GroundingError, match="lower bound"):
        ground(program)


def test_ground_program_atom_ids_head_then_body():
    program = parse_program("a :- b, not c.\nd.\nb.")
    grounded = ground(program)
    assert [atom.text for atom in grounded.atoms] == ["a", "b", "c", "d"]
    assert grounded.atom_ids[Atom("a")] == 0
    assert grounded.n_atoms == 4


def test_ground_program_from_rules_validations():
    with pytest.raises(ProgramError, match="not ground"):
        GroundProgram.from_rules([Rule(Atom("p", (Term.variable("X"),)))])
    with pytest.raises(ProgramError, match="comparison"):
        GroundProgram.from_rules(
            [
                Rule(
                    Atom("p"),
                    (Literal.compare(Term.integer(1), "<", Term.integer(2)),),
                )
            ]
        )
    with pytest.raises(ProgramError, match="one label per rule"):
        GroundProgram.from_rules([Rule(Atom("p"))], rule_labels=["a", "b"])


def test_ground_program_labels_and_text():
    grounded = GroundProgram.from_rules(
        [Rule(Atom("p")), Rule(Atom("q"), (Literal.pos(Atom("p")),))],
        rule_labels=["one", "two"],
    )
    assert grounded.label(0) == "one"
    assert grounded.label(1) == "two"
    assert grounded.text == "p.\nq :- p.\n"
    unlabeled = GroundProgram.from_rules([Rule(Atom("p"))])
    assert unlabeled.label(0) == "p."


def test_ground_preserves_rule_order_and_instantiation_order():
    program = parse_program("p(1). p(2).\nq(X) :- p(X).\nr :- q(1).")
    grounded = ground(program)
    assert [r.text for r in grounded.rules] == [
        "p(1).",
        "p(2).",
        "q(1) :- p(1).",
        "q(2) :- p(2).",
        "r :- q(1).",
    ]
