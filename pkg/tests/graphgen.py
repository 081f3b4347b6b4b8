"""Seeded random construction of valid graphs and perturbed predictions.

Every graph built here satisfies the AmrGraph invariants and serializes
(tree edges always point from an earlier variable to a later one, so the
root reaches everything along stated directions).  Used wherever a test
needs many small graphs with a known exact-oracle score.
"""

import random

from amrbench.penman import AmrGraph, Const, Ref

CONCEPTS = (
    "want-01",
    "go-02",
    "see-01",
    "say-01",
    "run-02",
    "boy",
    "girl",
    "dog",
    "city",
    "house",
)

TREE_LABELS = (":arg0", ":arg1", ":arg2", ":mod", ":location", ":time", ":op1")
INVERSE_LABELS = (":arg0-of", ":arg1-of")
ATTRIBUTE_LABELS = (":quant", ":polarity", ":mode", ":wiki")
CONSTANTS = ('"Ada"', "3", "-", "imperative", "7.5")


def random_graph(
    rng: random.Random,
    n_vars: int | None = None,
    max_vars: int = 6,
    reentrancy_prob: float = 0.35,
    attribute_prob: float = 0.5,
    inverse_prob: float = 0.15,
) -> AmrGraph:
    if n_vars is None:
        n_vars = rng.randint(1, max_vars)
    names = [f"v{i}" for i in range(n_vars)]
    instances = {name: rng.choice(CONCEPTS) for name in names}
    edges = []
    for i in range(1, n_vars):
        parent = names[rng.randrange(i)]
        if rng.random() < inverse_prob:
            label = rng.choice(INVERSE_LABELS)
        else:
            label = rng.choice(TREE_LABELS)
        edges.append((parent, label, Ref(names[i])))
    if n_vars >= 2 and rng.random() < reentrancy_prob:
        src, tgt = rng.sample(names, 2)
        edges.append((src, rng.choice(TREE_LABELS), Ref(tgt)))
    if rng.random() < attribute_prob:
        edges.append(
            (
                rng.choice(names),
                rng.choice(ATTRIBUTE_LABELS),
                Const(rng.choice(CONSTANTS)),
            )
        )
    return AmrGraph(root=names[0], instances=instances, edges=tuple(edges))


def rename_variables(rng: random.Random, graph: AmrGraph, prefix: str = "x") -> AmrGraph:
    """Same graph under a fresh, shuffled variable naming."""
    order = list(graph.instances)
    rng.shuffle(order)
    mapping = {old: f"{prefix}{i}" for i, old in enumerate(order)}
    instances = {mapping[v]: c for v, c in graph.instances.items()}
    edges = tuple(
        (mapping[src], label, Ref(mapping[tgt.name]) if isinstance(tgt, Ref) else tgt)
        for src, label, tgt in graph.edges
    )
    return AmrGraph(root=mapping[graph.root], instances=instances, edges=edges)


def perturb(rng: random.Random, graph: AmrGraph, n_changes: int = 2) -> AmrGraph:
    """A structurally valid near-miss: some concepts or labels changed.

    Edges are never removed, so connectivity is preserved.
    """
    instances = dict(graph.instances)
    edges = [list(e) for e in graph.edges]
    for _ in range(n_changes):
        if edges and rng.random() < 0.5:
            slot = rng.randrange(len(edges))
            if isinstance(edges[slot][2], Ref):
                edges[slot][1] = rng.choice(TREE_LABELS)
            else:
                edges[slot][2] = Const(rng.choice(CONSTANTS))
        else:
            var = rng.choice(list(instances))
            instances[var] = rng.choice(CONCEPTS)
    return AmrGraph(
        root=graph.root,
        instances=instances,
        edges=tuple((s, l, t) for s, l, t in edges),
    )


def random_pair(rng: random.Random, max_vars: int = 6) -> tuple[AmrGraph, AmrGraph]:
    """A (gold, predicted) pair mixing clones, near-misses, and strangers."""
    gold = random_graph(rng, max_vars=max_vars)
    kind = rng.randrange(3)
    if kind == 0:
        pred = rename_variables(rng, gold)
    elif kind == 1:
        pred = rename_variables(rng, perturb(rng, gold, n_changes=rng.randint(1, 3)))
    else:
        pred = random_graph(rng, max_vars=max_vars)
    return gold, pred
