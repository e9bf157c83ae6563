"""Program and task parsing: round trips, positions, rejections."""

import pytest

from minilas.logic import (
    ArityError,
    Atom,
    ChoiceHead,
    Literal,
    MiniLasError,
    Rule,
    SafetyError,
    Term,
)
from minilas.parser import (
    ParseError,
    parse_ground_atom,
    parse_program,
    parse_task,
)


def test_parse_fact_rule_constraint():
    program = parse_program("p.\nq :- p, not r.\n:- q, r.\n")
    assert [r.text for r in program.rules] == [
        "p.",
        "q :- p, not r.",
        ":- q, r.",
    ]


def test_parse_terms_and_arguments():
    program = parse_program("edge(a,b).\ncost(a,-3).\nnode(a). node(b).")
    first = program.rules[0].head
    assert first == Atom("edge", (Term.constant("a"), Term.constant("b")))
    assert program.rules[1].head.args[1] == Term.integer(-3)


def test_parse_variables_and_comparisons():
    program = parse_program("p(X) :- q(X), X < 3, X != 2.")
    rule = program.rules[0]
    assert rule.head == Atom("p", (Term.variable("X"),))
    assert rule.body[1] == Literal.compare(Term.variable("X"), "<", Term.integer(3))
    assert rule.body[2].op == "!="


def test_parse_choice_rule_with_bounds():
    program = parse_program("1 {a; b; c} 2 :- d.\nd.")
    head = program.rules[0].head
    assert isinstance(head, ChoiceHead)
    assert head.lower == 1
    assert head.upper == 2
    assert [a.text for a in head.atoms] == ["a", "b", "c"]


def test_parse_choice_defaults():
    head = parse_program("{a; b}.").rules[0].head
    assert head.lower == 0
    assert head.upper == 2


def test_comments_and_whitespace_ignored():
    program = parse_program("% leading\n p. % trailing\n\n q :- p. % done")
    assert len(program.rules) == 2


def test_round_trip_through_text():
    source = (
        "p(a,1).\n"
        "q(X) :- p(X,Y), Y <= 4, not r(X).\n"
        "0 {s; t} 1 :- q(a).\n"
        ":- s, t.\n"
    )
    program = parse_program(source)
    assert parse_program(program.text) == program


def test_error_positions():
    with pytest.raises(ParseError) as err:
        parse_program("p.\nq :- .\n")
    assert err.value.line == 2
    assert err.value.col == 6
    assert str(err.value).startswith("2:6:")


def test_unterminated_rule():
    with pytest.raises(ParseError) as err:
        parse_program("p")
    assert "expected" in str(err.value)


def test_integer_overflow_rejected():
    with pytest.raises(ParseError):
        parse_program(f"p({2**31}).")
    parse_program(f"p({2**31 - 1}).")  # boundary accepted


def test_lone_minus_rejected():
    with pytest.raises(ParseError):
        parse_program("p(-).")


def test_comparison_of_constants_rejected():
    with pytest.raises(ParseError):
        parse_program("p :- a < b.")
    with pytest.raises(ParseError):
        parse_program("p(X) :- q(X), X < b.")


def test_not_is_reserved():
    with pytest.raises(ParseError):
        parse_program("not.")
    with pytest.raises(ParseError):
        parse_program("p :- q, not not r.")


def test_choice_bound_violations_rejected():
    with pytest.raises(ParseError):
        parse_program("2 {a} .")
    with pytest.raises(ParseError):
        parse_program("{a; a}.")
    with pytest.raises(ParseError):
        parse_program("1 {a; b} 3.")


def test_directives_rejected_in_programs():
    with pytest.raises(ParseError) as err:
        parse_program("#modeh(p).")
    assert "task files" in str(err.value)


def test_safety_checked_after_parse():
    with pytest.raises(SafetyError):
        parse_program("p(X).")
    with pytest.raises(SafetyError):
        parse_program("p(X) :- not q(X).")


def test_arity_checked_after_parse():
    with pytest.raises(ArityError):
        parse_program("p(a).\np(a,b).")


def test_unexpected_character():
    with pytest.raises(ParseError) as err:
        parse_program("p & q.")
    assert "'&'" in str(err.value)


def test_parse_ground_atom():
    assert parse_ground_atom("p(a,1)") == Atom(
        "p", (Term.constant("a"), Term.integer(1))
    )
    with pytest.raises(ParseError):
        parse_ground_atom("p(X)")
    with pytest.raises(ParseError):
        parse_ground_atom("p. q")
    with pytest.raises(ParseError):
        parse_ground_atom("p(a) extra")


# task files ---------------------------------------------------------------


TASK = """
flies(X) :- bird(X), not penguin(X).
bird(tweety). bird(pingu). penguin(pingu).

#modeh(nests(var(kind))).
#modeb(bird(var(kind))).
#modeb(penguin(var(kind)), positive).
#constant(kind, tweety).
#constant(kind, pingu).
#compare(kind).
#maxv(2).
#maxb(1).
#maxrules(1).

#pos(ex1@5, {flies(tweety)}, {flies(pingu)}).
#neg(ex2@1, {nests(pingu)}, {}, {p. q :- p.}).
"""


def test_parse_task_structure():
    task = parse_task(TASK)
    assert len(task.background.rules) == 4
    assert [m.text for m in task.bias.modes] == [
        "#modeh(nests(var(kind))).",
        "#modeb(bird(var(kind))).",
        "#modeb(penguin(var(kind)), positive).",
    ]
    assert task.bias.constants == (
        ("kind", Term.constant("tweety")),
        ("kind", Term.constant("pingu")),
    )
    assert task.bias.compare_types == frozenset({"kind"})
    assert task.bias.bounds.max_vars == 2
    assert task.bias.bounds.max_body == 1
    assert task.bias.bounds.max_rules == 1

    ex1, ex2 = task.examples
    assert ex1.example_id == "ex1"
    assert ex1.penalty == 5
    assert ex1.is_positive
    assert ex1.interpretation.inclusions == frozenset({Atom("flies", (Term.constant("tweety"),))})
    assert not ex2.is_positive
    assert len(ex2.context.rules) == 2


def test_parse_task_defaults():
    task = parse_task("#modeh(p).")
    assert task.bias.bounds.max_body == 3
    assert task.bias.bounds.max_vars == 3
    assert task.bias.bounds.max_rules == 3
    assert task.examples == ()


def test_duplicate_constants_collapse():
    task = parse_task("#modeh(p).\n#constant(t, a).\n#constant(t, a).")
    assert task.bias.constants == (("t", Term.constant("a")),)


def test_task_rejections():
    with pytest.raises(ParseError, match="duplicate #maxv"):
        parse_task("#maxv(1).\n#maxv(2).")
    with pytest.raises(ParseError, match="duplicate example id"):
        parse_task("#pos(e@1, {}, {}).\n#pos(e@1, {}, {}).")
    with pytest.raises(ParseError, match="penalties must be positive"):
        parse_task("#pos(e@0, {}, {}).")
    with pytest.raises(ParseError, match="overlap"):
        parse_task("#pos(e@1, {p}, {p}).")
    with pytest.raises(ParseError, match="unknown directive"):
        parse_task("#frobnicate(p).")
    with pytest.raises(ParseError, match="unknown mode flag"):
        parse_task("#modeb(p, negated).")
    with pytest.raises(ParseError, match="head schemas take no flag"):
        parse_task("#modeh(p, positive).")
    with pytest.raises(ParseError, match="must be ground"):
        parse_task("#pos(e@1, {p(X)}, {}).")
    with pytest.raises(ParseError, match="#maxrules requires a positive"):
        parse_task("#maxrules(0).")
    with pytest.raises(ParseError):
        parse_task("#constant(t, X).")


def test_task_arity_consistency_spans_all_parts():
    # schema arity clashes with a background atom
    with pytest.raises(ArityError):
        parse_task("p(a).\n#modeh(p).")
    # example atom clashes with context usage
    with pytest.raises(ArityError):
        parse_task("#modeh(q).\n#pos(e@1, {p(a)}, {}, {p.}).")


def test_task_context_safety_checked():
    with pytest.raises(SafetyError):
        parse_task("#modeh(q).\n#pos(e@1, {}, {}, {p(X).}).")


def test_every_parse_failure_is_minilas_error():
    bad_inputs = ["p(", "p :-", "{a", "#pos(e@1", "p..", "1 2 {a}."]
    for text in bad_inputs:
        with pytest.raises(MiniLasError):
            parse_program(text)
        with pytest.raises(MiniLasError):
            parse_task(text)
