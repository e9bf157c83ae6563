"""Recursive-descent parsers for the program (.lp) and task (.task)
syntaxes.

Programs are statements terminated by periods: facts, rules,
constraints, and bounded choice rules, with comments from % to end of
line. Task files additionally accept directives: #modeh/#modeb schemas
with var(t)/const(t) placeholder slots, #constant pools, #compare
types, #maxv/#maxb/#maxrules bounds, and #pos/#neg weighted examples
with inline context programs. All errors carry line:column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .learner import (
    LasTask,
    PartialInterpretation,
    WCDPI,
)
from .logic import (
    Atom,
    COMPARATORS,
    ChoiceHead,
    INT32_MAX,
    INT32_MIN,
    Literal,
    MiniLasError,
    Program,
    ProgramError,
    Rule,
    Term,
    check_safety,
    collect_arities,
)
from .modes import (
    BODY,
    CONST_SLOT,
    HEAD,
    ModeBias,
    ModeDeclaration,
    SpaceBounds,
    VAR_SLOT,
)


class ParseError(MiniLasError):
    """A syntax error with its position."""

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


IDENT = "identifier"
VARIABLE = "variable"
INT = "integer"
PUNCT = "punctuation"
OP = "operator"
DIRECTIVE = "directive"
EOF = "end of input"

_PUNCT = set(".,;(){}@")
RESERVED = ("not",)  # var/const/positive stay contextual inside directives


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        return f"{self.kind} {self.value!r}"


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col

        def emit(kind: str, value: str) -> None:
            tokens.append(Token(kind, value, start_line, start_col))

        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            emit(VARIABLE if ch.isupper() else IDENT, word)
            col += j - i
            i = j
            continue
        if ch.isdigit() or ch == "-":
            j = i + 1 if ch == "-" else i
            if j >= n or not text[j].isdigit():
                raise ParseError(
                    "expected a digit after '-'", start_line, start_col
                )
            while j < n and text[j].isdigit():
                j += 1
            value = text[i:j]
            if not INT32_MIN <= int(value) <= INT32_MAX:
                raise ParseError(
                    f"integer {value} outside 32-bit range",
                    start_line,
                    start_col,
                )
            emit(INT, value)
            col += j - i
            i = j
            continue
        if ch == "#":
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            if j == i + 1:
                raise ParseError(
                    "expected a directive name after '#'", start_line, start_col
                )
            emit(DIRECTIVE, text[i + 1 : j])
            col += j - i
            i = j
            continue
        if ch == ":":
            if text[i : i + 2] == ":-":
                emit(OP, ":-")
                i += 2
                col += 2
                continue
            raise ParseError("expected ':-'", start_line, start_col)
        if ch == "!":
            if text[i : i + 2] == "!=":
                emit(OP, "!=")
                i += 2
                col += 2
                continue
            raise ParseError("expected '!='", start_line, start_col)
        if ch in "<>":
            if text[i : i + 2] == ch + "=":
                emit(OP, ch + "=")
                i += 2
                col += 2
                continue
            emit(OP, ch)
            i += 1
            col += 1
            continue
        if ch == "=":
            emit(OP, "=")
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            emit(PUNCT, ch)
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token(EOF, "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != EOF:
            self.pos += 1
        return token

    def fail(self, expected: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.peek()
        return ParseError(
            f"expected {expected}, found {token.describe()}",
            token.line,
            token.col,
        )

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        token = self.peek()
        if token.kind != kind or (value is not None and token.value != value):
            wanted = f"{kind} {value!r}" if value is not None else kind
            raise self.fail(wanted)
        return self.advance()

    # program syntax -----------------------------------------------------

    def parse_term(self) -> Term:
        token = self.peek()
        if token.kind == IDENT:
            if token.value == "not":
                raise self.fail("a term ('not' is reserved)")
            self.advance()
            return Term.constant(token.value)
        if token.kind == VARIABLE:
            self.advance()
            return Term.variable(token.value)
        if token.kind == INT:
            self.advance()
            return Term.integer(int(token.value))
        raise self.fail("a constant, variable, or integer")

    def parse_atom(self) -> Atom:
        token = self.peek()
        if token.kind != IDENT:
            raise self.fail("a predicate name")
        if token.value in RESERVED:
            raise self.fail(f"a predicate name ({token.value!r} is reserved)")
        self.advance()
        if self.peek().kind == PUNCT and self.peek().value == "(":
            self.advance()
            args = [self.parse_term()]
            while self.peek().kind == PUNCT and self.peek().value == ",":
                self.advance()
                args.append(self.parse_term())
            self.expect(PUNCT, ")")
            return Atom(token.value, tuple(args))
        return Atom(token.value)

    def parse_literal(self) -> Literal:
        token = self.peek()
        if token.kind == IDENT and token.value == "not":
            self.advance()
            return Literal.naf(self.parse_atom())
        if token.kind in (VARIABLE, INT):
            lhs = self.parse_term()
            op_token = self.peek()
            if op_token.kind != OP or op_token.value not in COMPARATORS:
                raise self.fail("a comparison operator")
            self.advance()
            rhs_token = self.peek()
            rhs = self.parse_term()
            if rhs.is_constant:
                raise ParseError(
                    "comparison operands must be variables or integers",
                    rhs_token.line,
                    rhs_token.col,
                )
            return Literal.compare(lhs, op_token.value, rhs)
        atom = self.parse_atom()
        trailing = self.peek()
        if trailing.kind == OP and trailing.value in COMPARATORS:
            raise ParseError(
                "comparison operands must be variables or integers",
                token.line,
                token.col,
            )
        return Literal.pos(atom)

    def parse_body(self) -> tuple[Literal, ...]:
        literals = [self.parse_literal()]
        while self.peek().kind == PUNCT and self.peek().value == ",":
            self.advance()
            literals.append(self.parse_literal())
        return tuple(literals)

    def parse_choice(self) -> ChoiceHead:
        token = self.peek()
        lower = 0
        if token.kind == INT:
            lower = int(token.value)
            if lower < 0:
                raise ParseError(
                    "choice bounds must be nonnegative", token.line, token.col
                )
            self.advance()
        open_token = self.expect(PUNCT, "{")
        atoms = [self.parse_atom()]
        while self.peek().kind == PUNCT and self.peek().value == ";":
            self.advance()
            atoms.append(self.parse_atom())
        self.expect(PUNCT, "}")
        upper = len(atoms)
        upper_token = self.peek()
        if upper_token.kind == INT:
            upper = int(upper_token.value)
            self.advance()
        if len(set(atoms)) != len(atoms):
            raise ParseError(
                "choice head lists the same atom twice",
                open_token.line,
                open_token.col,
            )
        if not 0 <= lower <= upper <= len(atoms):
            raise ParseError(
                f"choice bounds must satisfy 0 <= {lower} <= {upper} <= "
                f"{len(atoms)}",
                open_token.line,
                open_token.col,
            )
        return ChoiceHead(lower, tuple(atoms), upper)

    def parse_rule(self) -> Rule:
        token = self.peek()
        if token.kind == OP and token.value == ":-":
            self.advance()
            body = self.parse_body()
            self.expect(PUNCT, ".")
            return Rule(None, body)
        if token.kind == INT or (token.kind == PUNCT and token.value == "{"):
            head: Atom | ChoiceHead = self.parse_choice()
        else:
            head = self.parse_atom()
        body: tuple[Literal, ...] = ()
        if self.peek().kind == OP and self.peek().value == ":-":
            self.advance()
            body = self.parse_body()
        self.expect(PUNCT, ".")
        return Rule(head, body)

    # task syntax --------------------------------------------------------

    def parse_placeholder(self) -> tuple[str, str]:
        token = self.peek()
        if token.kind != IDENT or token.value not in (VAR_SLOT, CONST_SLOT):
            raise self.fail("a var(type) or const(type) placeholder")
        self.advance()
        self.expect(PUNCT, "(")
        type_token = self.expect(IDENT)
        self.expect(PUNCT, ")")
        return (token.value, type_token.value)

    def parse_schema(self) -> tuple[str, tuple[tuple[str, str], ...]]:
        name = self.peek()
        if name.kind != IDENT:
            raise self.fail("a predicate name")
        if name.value in RESERVED:
            raise self.fail(f"a predicate name ({name.value!r} is reserved)")
        self.advance()
        slots: list[tuple[str, str]] = []
        if self.peek().kind == PUNCT and self.peek().value == "(":
            self.advance()
            slots.append(self.parse_placeholder())
            while self.peek().kind == PUNCT and self.peek().value == ",":
                self.advance()
                slots.append(self.parse_placeholder())
            self.expect(PUNCT, ")")
        return name.value, tuple(slots)

    def parse_ground_atom_list(self) -> tuple[Atom, ...]:
        self.expect(PUNCT, "{")
        atoms: list[Atom] = []
        if not (self.peek().kind == PUNCT and self.peek().value == "}"):
            while True:
                token = self.peek()
                atom = self.parse_atom()
                if not atom.is_ground:
                    raise ParseError(
                        "example atoms must be ground", token.line, token.col
                    )
                atoms.append(atom)
                if self.peek().kind == PUNCT and self.peek().value == ",":
                    self.advance()
                    continue
                break
        self.expect(PUNCT, "}")
        return tuple(atoms)

    def parse_context(self) -> Program:
        self.expect(PUNCT, "{")
        rules: list[Rule] = []
        while not (self.peek().kind == PUNCT and self.peek().value == "}"):
            rules.append(self.parse_rule())
        self.expect(PUNCT, "}")
        return Program(tuple(rules))

    def parse_example(self, polarity: str, directive: Token) -> WCDPI:
        self.expect(PUNCT, "(")
        id_token = self.expect(IDENT)
        self.expect(PUNCT, "@")
        pen_token = self.expect(INT)
        penalty = int(pen_token.value)
        if penalty < 1:
            raise ParseError(
                "example penalties must be positive integers",
                pen_token.line,
                pen_token.col,
            )
        self.expect(PUNCT, ",")
        inclusions = self.parse_ground_atom_list()
        self.expect(PUNCT, ",")
        exclusions = self.parse_ground_atom_list()
        context = Program()
        if self.peek().kind == PUNCT and self.peek().value == ",":
            self.advance()
            context = self.parse_context()
        self.expect(PUNCT, ")")
        self.expect(PUNCT, ".")
        overlap = frozenset(inclusions) & frozenset(exclusions)
        if overlap:
            raise ParseError(
                f"inclusions and exclusions overlap on "
                f"{sorted(a.text for a in overlap)[0]}",
                directive.line,
                directive.col,
            )
        return WCDPI(
            id_token.value,
            penalty,
            PartialInterpretation(frozenset(inclusions), frozenset(exclusions)),
            context,
            polarity,
        )


def parse_ground_atom(text: str) -> Atom:
    """Parse a single ground atom, e.g. for query flags."""
    parser = _Parser(text)
    token = parser.peek()
    atom = parser.parse_atom()
    parser.expect(EOF)
    if not atom.is_ground:
        raise ParseError("the atom must be ground", token.line, token.col)
    return atom


def parse_program(text: str) -> Program:
    """Parse and validate a program: syntax, then safety (each rule's
    head/naf/comparison variables must appear in a positive body
    literal), then arity consistency across the whole program."""
    parser = _Parser(text)
    rules: list[Rule] = []
    while parser.peek().kind != EOF:
        if parser.peek().kind == DIRECTIVE:
            raise parser.fail("a rule (directives belong in task files)")
        rules.append(parser.parse_rule())
    program = Program(tuple(rules))
    check_safety(program.rules)
    collect_arities(program.rules)
    return program


_BOUND_NAMES = {"maxv": "max_vars", "maxb": "max_body", "maxrules": "max_rules"}


def parse_task(text: str) -> LasTask:
    """Parse a learning task: background rules interleaved with mode,
    constant, comparison, bound, and example directives."""
    parser = _Parser(text)
    background: list[Rule] = []
    modes: list[ModeDeclaration] = []
    constants: list[tuple[str, Term]] = []
    compare_types: set[str] = set()
    bounds_seen: dict[str, int] = {}
    examples: list[WCDPI] = []
    example_ids: set[str] = set()

    while parser.peek().kind != EOF:
        token = parser.peek()
        if token.kind != DIRECTIVE:
            background.append(parser.parse_rule())
            continue
        parser.advance()
        name = token.value
        if name in ("modeh", "modeb"):
            parser.expect(PUNCT, "(")
            predicate, slots = parser.parse_schema()
            naf_allowed = True
            if parser.peek().kind == PUNCT and parser.peek().value == ",":
                if name == "modeh":
                    raise parser.fail("')' (head schemas take no flag)")
                parser.advance()
                flag = parser.expect(IDENT)
                if flag.value != "positive":
                    raise ParseError(
                        f"unknown mode flag {flag.value!r}",
                        flag.line,
                        flag.col,
                    )
                naf_allowed = False
            parser.expect(PUNCT, ")")
            parser.expect(PUNCT, ".")
            modes.append(
                ModeDeclaration(
                    HEAD if name == "modeh" else BODY,
                    predicate,
                    slots,
                    naf_allowed,
                )
            )
        elif name == "constant":
            parser.expect(PUNCT, "(")
            type_token = parser.expect(IDENT)
            parser.expect(PUNCT, ",")
            value_token = parser.peek()
            value = parser.parse_term()
            if value.is_variable:
                raise ParseError(
                    "constant pools hold constants or integers",
                    value_token.line,
                    value_token.col,
                )
            parser.expect(PUNCT, ")")
            parser.expect(PUNCT, ".")
            entry = (type_token.value, value)
            if entry not in constants:
                constants.append(entry)
        elif name == "compare":
            parser.expect(PUNCT, "(")
            type_token = parser.expect(IDENT)
            parser.expect(PUNCT, ")")
            parser.expect(PUNCT, ".")
            compare_types.add(type_token.value)
        elif name in _BOUND_NAMES:
            parser.expect(PUNCT, "(")
            value_token = parser.expect(INT)
            parser.expect(PUNCT, ")")
            parser.expect(PUNCT, ".")
            if name in bounds_seen:
                raise ParseError(
                    f"duplicate #{name} directive",
                    token.line,
                    token.col,
                )
            value = int(value_token.value)
            if value < 0 or (name == "maxrules" and value < 1):
                raise ParseError(
                    f"#{name} requires a "
                    + ("positive" if name == "maxrules" else "nonnegative")
                    + " integer",
                    value_token.line,
                    value_token.col,
                )
            bounds_seen[name] = value
        elif name in ("pos", "neg"):
            example = parser.parse_example(name, token)
            if example.example_id in example_ids:
                raise ParseError(
                    f"duplicate example id {example.example_id}",
                    token.line,
                    token.col,
                )
            example_ids.add(example.example_id)
            examples.append(example)
        else:
            raise ParseError(
                f"unknown directive #{name}", token.line, token.col
            )

    check_safety(background)
    arities = collect_arities(background)
    schema_atoms = [
        Atom(m.predicate, tuple(Term.variable(f"V{i + 1}") for i in range(m.arity)))
        for m in modes
    ]
    collect_arities((), table=arities, extra_atoms=schema_atoms)
    for example in examples:
        check_safety(example.context.rules)
        collect_arities(
            example.context.rules,
            table=arities,
            extra_atoms=tuple(example.interpretation.inclusions)
            + tuple(example.interpretation.exclusions),
        )

    bounds = SpaceBounds(
        max_body=bounds_seen.get("maxb", 3),
        max_vars=bounds_seen.get("maxv", 3),
        max_rules=bounds_seen.get("maxrules", 3),
    )
    bias = ModeBias(
        tuple(modes),
        tuple(constants),
        bounds,
        frozenset(compare_types),
    )
    return LasTask(Program(tuple(background)), bias, tuple(examples))
