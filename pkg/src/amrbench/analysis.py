"""Graph analysis: triples, nesting depth, reentrancies, inverse relations."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .penman import AmrGraph, Const, EdgeTarget, Ref

INSTANCE_RELATION = ":instance"

# Labels ending in '-of' that are surface relations, not inverses; they are
# left alone unless normalize_inverse is told to invert them too.
SURFACE_OF_LABELS = frozenset({":consist-of", ":part-of"})


class TripleKind(enum.Enum):
    INSTANCE = "instance"
    RELATION = "relation"
    ATTRIBUTE = "attribute"


@dataclass(frozen=True)
class Triple:
    """(relation, source, target) with its kind.

    Instance triples use :instance as the relation and the concept as
    target.  Attribute targets keep the constant lexeme verbatim, quotes
    included; scoring strips them.
    """

    kind: TripleKind
    relation: str
    source: str
    target: str


@dataclass(frozen=True)
class TripleSet:
    """Multiset of triples for one graph, in extraction order."""

    triples: tuple[Triple, ...]
    variable_count: int

    def of_kind(self, kind: TripleKind) -> list[Triple]:
        return [t for t in self.triples if t.kind is kind]


def extract_triples(graph: AmrGraph) -> TripleSet:
    """One instance triple per variable, then one triple per edge in order.

    Inverse labels are kept as written; alignment scores graphs as given.
    """
    triples = [
        Triple(TripleKind.INSTANCE, INSTANCE_RELATION, var, concept)
        for var, concept in graph.instances.items()
    ]
    for src, label, tgt in graph.edges:
        if isinstance(tgt, Ref):
            triples.append(Triple(TripleKind.RELATION, label, src, tgt.name))
        else:
            triples.append(Triple(TripleKind.ATTRIBUTE, label, src, tgt.lexeme))
    return TripleSet(tuple(triples), len(graph.instances))


def depth(graph: AmrGraph) -> int:
    """Longest root-to-leaf edge count along the nesting tree.

    The nesting tree is the spanning tree the Penman text encodes: the
    first edge reaching a variable in depth-first text order claims it.
    Later references to an already-claimed variable are leaves, as are
    attribute constants, both one edge below their source.  A single node
    has depth 0.
    """
    out: dict[str, list[EdgeTarget]] = {v: [] for v in graph.instances}
    for src, _, tgt in graph.edges:
        out[src].append(tgt)

    claimed = {graph.root}
    deepest = 0
    # (variable, its depth, next out-edge index) in DFS order
    stack: list[list] = [[graph.root, 0, 0]]
    while stack:
        var, level, idx = stack[-1]
        if idx >= len(out[var]):
            stack.pop()
            continue
        stack[-1][2] += 1
        tgt = out[var][idx]
        if isinstance(tgt, Const):
            deepest = max(deepest, level + 1)
        elif tgt.name in claimed:
            deepest = max(deepest, level + 1)
        else:
            claimed.add(tgt.name)
            deepest = max(deepest, level + 1)
            stack.append([tgt.name, level + 1, 0])
    return deepest


def reentrancies(graph: AmrGraph) -> list[str]:
    """Variables that are the target of two or more edges, or of one edge
    while also being the root.  Returned in definition order."""
    counts: dict[str, int] = {}
    for _, _, tgt in graph.edges:
        if isinstance(tgt, Ref):
            counts[tgt.name] = counts.get(tgt.name, 0) + 1
    result = []
    for var in graph.instances:
        n = counts.get(var, 0)
        if n >= 2 or (n >= 1 and var == graph.root):
            result.append(var)
    return result


def normalize_inverse(
    graph: AmrGraph, invert_surface_labels: bool = False
) -> AmrGraph:
    """Rewrite each ':x-of' relation edge as ':x' with source and target
    swapped, in place in the edge order.

    ':consist-of' and ':part-of' are surface labels and stay as written
    unless ``invert_surface_labels`` is set.  Attribute edges are never
    inverted (a constant cannot be a source).  Idempotent; instances and
    triple count are unchanged, and the result may leave the root with
    incoming edges.
    """
    edges = []
    for src, label, tgt in graph.edges:
        invertible = (
            label.endswith("-of")
            and len(label) > len(":-of")
            and (invert_surface_labels or label not in SURFACE_OF_LABELS)
            and isinstance(tgt, Ref)
        )
        if invertible:
            edges.append((tgt.name, label[: -len("-of")], Ref(src)))
        else:
            edges.append((src, label, tgt))
    return AmrGraph(
        root=graph.root,
        instances=dict(graph.instances),
        edges=tuple(edges),
        metadata=dict(graph.metadata),
    )
