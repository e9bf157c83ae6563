"""Explanation graphs for atoms in (or absent from) an answer set.

A presence explanation walks the least-model fixpoint of the reduct:
each derived atom points at the rule that first derives it (earliest
round, then lowest rule index), that rule points at its body literals,
and naf literals are leaves (their atoms are false in the model). The
result is a DAG rooted at the target. An absence explanation lists, for
every rule that could derive the target, the first body literal the
model refutes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .ground import GroundProgram
from .logic import Atom, MiniLasError, ProgramError, Rule
from .solver import (
    DEFAULT_MAX_BASE,
    is_aux_atom,
    is_stable,
    translate_choice,
)


class ExplanationError(MiniLasError):
    """The requested explanation does not exist."""


ATOM = "atom"
FACT = "fact"
NAF = "naf"
RULE = "rule"

DERIVES = "derives"
SUPPORTS = "supports"
BLOCKS = "blocks"


@dataclass(frozen=True)
class Node:
    node_id: str
    kind: str
    label: str
    annotation: str = ""


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str


@dataclass(frozen=True)
class ExplanationDAG:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    root: str

    def node_map(self) -> dict[str, Node]:
        return {n.node_id: n for n in self.nodes}


class _Builder:
    def __init__(self) -> None:
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []
        self._ids: set[str] = set()

    def add_node(self, node: Node) -> bool:
        if node.node_id in self._ids:
            return False
        self._ids.add(node.node_id)
        self.nodes.append(node)
        return True

    def add_edge(self, source: str, target: str, kind: str) -> None:
        self.edges.append(Edge(source, target, kind))

    def dag(self, root: str) -> ExplanationDAG:
        return ExplanationDAG(tuple(self.nodes), tuple(self.edges), root)


def _prepare(
    program: GroundProgram,
    model: Iterable[Atom],
    max_base: int,
) -> tuple[GroundProgram, frozenset[Atom]]:
    """Translate choices if needed and extend the model over the
    translation's auxiliary atoms; verify the model is stable."""
    given = frozenset(model)
    if not program.has_choice:
        if not is_stable(program, given):
            raise ExplanationError(
                "the given interpretation is not an answer set"
            )
        return program, given
    work = translate_choice(program)
    original = frozenset(program.atoms)
    if not given <= original:
        raise ExplanationError("model contains atoms outside the base")
    # aux values are determined by the visible atoms: aux_{k}_{j} holds
    # iff the choice body holds and element j does not
    extended = set(given)
    for idx, rule in enumerate(program.rules):
        if not rule.has_choice:
            continue
        body_ok = all(
            (lit.atom in given) == lit.is_positive for lit in rule.body
        )
        if not body_ok:
            continue
        for j, atom in enumerate(rule.head.atoms):
            if atom not in given:
                extended.add(Atom(f"__aux_{idx}_{j}"))
    full = frozenset(extended)
    if not is_stable(work, full):
        raise ExplanationError(
            "the given interpretation is not an answer set"
        )
    return work, full


def _justifications(
    program: GroundProgram, model: frozenset[Atom]
) -> dict[Atom, int]:
    """Map each model atom to the rule that first derives it in the
    fixpoint of the reduct (earliest round, lowest index)."""
    surviving: list[tuple[int, Rule]] = []
    for idx, rule in enumerate(program.rules):
        if rule.head is None:
            continue
        if any(lit.is_naf and lit.atom in model for lit in rule.body):
            continue
        surviving.append((idx, rule))

    derived: set[Atom] = set()
    justify: dict[Atom, int] = {}
    while True:
        round_new: dict[Atom, int] = {}
        for idx, rule in surviving:
            head = rule.head
            if head in derived or head in round_new:
                continue
            if all(
                lit.atom in derived
                for lit in rule.body
                if lit.is_positive
            ):
                round_new[head] = idx
        if not round_new:
            break
        derived.update(round_new)
        justify.update(round_new)
    return justify


def explain_atom(
    program: GroundProgram,
    model: Iterable[Atom],
    target: Atom,
    *,
    all_supports: bool = False,
    max_base: int = DEFAULT_MAX_BASE,
) -> ExplanationDAG:
    """Why is the target in this answer set?

    Rules introduced by choice translation carry the source choice
    rule's text as their label, and their auxiliary atoms are kept out
    of the graph. With ``all_supports``, atoms derivable by further
    rules than the justifying one say so in their annotation."""
    work, full = _prepare(program, model, max_base)
    if target not in full:
        raise ExplanationError(
            f"{target.text} is not in the answer set; use explain_absence"
        )
    justify = _justifications(work, full)

    builder = _Builder()
    atom_node_ids: dict[Atom, str] = {}
    work_ids = work.atom_ids

    def atom_id(atom: Atom) -> str:
        return f"a{work_ids[atom]}"

    def naf_id(atom: Atom) -> str:
        return f"naf{work_ids[atom]}"

    def alternates(atom: Atom, chosen: int) -> str:
        others = []
        for idx, rule in enumerate(work.rules):
            if idx == chosen or rule.head != atom:
                continue
            body_ok = all(
                (lit.atom in full) == lit.is_positive for lit in rule.body
            )
            if body_ok:
                others.append(work.label(idx))
        if not others:
            return ""
        return "also derivable by: " + "; ".join(others)

    queue = [target]
    atom_node_ids[target] = atom_id(target)
    while queue:
        atom = queue.pop(0)
        node_id = atom_node_ids[atom]
        rule_idx = justify[atom]
        rule = work.rules[rule_idx]
        if not rule.body:
            builder.add_node(Node(node_id, FACT, atom.text))
            continue
        annotation = alternates(atom, rule_idx) if all_supports else ""
        builder.add_node(Node(node_id, ATOM, atom.text, annotation))
        rule_node = f"r{rule_idx}"
        if builder.add_node(Node(rule_node, RULE, work.label(rule_idx))):
            builder.add_edge(rule_node, node_id, DERIVES)
            for lit in rule.body:
                if is_aux_atom(lit.atom):
                    continue
                if lit.is_positive:
                    if lit.atom not in atom_node_ids:
                        atom_node_ids[lit.atom] = atom_id(lit.atom)
                        queue.append(lit.atom)
                    builder.add_edge(atom_node_ids[lit.atom], rule_node, SUPPORTS)
                else:
                    nid = naf_id(lit.atom)
                    builder.add_node(Node(nid, NAF, f"not {lit.atom.text}"))
                    builder.add_edge(nid, rule_node, SUPPORTS)
        else:
            builder.add_edge(rule_node, node_id, DERIVES)
    return builder.dag(atom_id(target))


def explain_absence(
    program: GroundProgram,
    model: Iterable[Atom],
    target: Atom,
    *,
    max_base: int = DEFAULT_MAX_BASE,
) -> ExplanationDAG:
    """Why is the target missing from this answer set?

    The root is the naf node for the target; each rule that could
    derive it points at the root and is blocked by the first body
    literal the model refutes."""
    work, full = _prepare(program, model, max_base)
    if target in full:
        raise ExplanationError(
            f"{target.text} is in the answer set; use explain_atom"
        )
    builder = _Builder()
    root = "absent0"
    deriving = [
        (idx, rule)
        for idx, rule in enumerate(work.rules)
        if rule.head == target
    ]
    annotation = "" if deriving else "no rule derives this atom"
    builder.add_node(Node(root, NAF, f"not {target.text}", annotation))

    leaf_ids: dict[str, str] = {}
    for idx, rule in deriving:
        rule_node = f"r{idx}"
        builder.add_node(Node(rule_node, RULE, work.label(idx)))
        builder.add_edge(rule_node, root, BLOCKS)
        blocker: Optional[Node] = None
        for lit in rule.body:
            if lit.is_positive and lit.atom not in full:
                if is_aux_atom(lit.atom):
                    continue
                blocker = Node(
                    f"miss_{work.atom_ids[lit.atom]}",
                    NAF,
                    f"not {lit.atom.text}",
                    "required atom is false",
                )
                break
            if lit.is_naf and lit.atom in full:
                if is_aux_atom(lit.atom):
                    blocker = Node(
                        f"choice_{idx}",
                        NAF,
                        f"not {target.text}",
                        "excluded by the choice",
                    )
                    break
                blocker = Node(
                    f"true_{work.atom_ids[lit.atom]}",
                    ATOM,
                    lit.atom.text,
                    "true in the answer set",
                )
                break
        if blocker is not None:
            builder.add_node(blocker)
            builder.add_edge(blocker.node_id, rule_node, BLOCKS)
    return builder.dag(root)


def to_graph_text(dag: ExplanationDAG) -> str:
    """Render as Graphviz DOT: atoms and facts are boxes (facts filled),
    rules are diamonds, naf nodes are dashed boxes."""

    def esc(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')

    lines = ["digraph explanation {"]
    for node in dag.nodes:
        shape = {
            ATOM: 'shape=box',
            FACT: 'shape=box, style=filled, fillcolor=lightgrey',
            NAF: 'shape=box, style=dashed',
            RULE: 'shape=diamond',
        }[node.kind]
        text = esc(node.label)
        if node.annotation:
            text = f"{text}\\n({esc(node.annotation)})"
        lines.append(f'  {node.node_id} [{shape}, label="{text}"];')
    for edge in dag.edges:
        style = ' [style=dashed]' if edge.kind == BLOCKS else ""
        lines.append(f"  {edge.source} -> {edge.target}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
