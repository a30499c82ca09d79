"""Distance-dependent releases over a social graph.

The owner of the data answers every reachable user ``j`` at DP level
``1 / d(owner, j)`` (unweighted shortest path), all from one noise path.
Colluding users then learn no more than the best-placed member of their
group could alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .mechanism import GradualLaplaceMechanism


@dataclass
class NodeResponse:
    node: int
    distance: int
    eps: float
    values: np.ndarray


@dataclass
class ScenarioResult:
    per_node: list
    unreachable: list
    collusion_bound: float | None
    subset: list = field(default_factory=list)
    subset_bound: float | None = None


def read_edge_list(path):
    """Parse ``u v`` integer pairs, one per line; ``#`` starts a comment."""
    graph = nx.Graph()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {raw.strip()!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: node ids must be integers") from None
            graph.add_edge(u, v)
    return graph


def distance_levels(graph, owner):
    """Map each reachable user (owner excluded) to ``(distance, 1/distance)``."""
    if owner not in graph:
        raise ValueError(f"owner {owner} is not a node of the graph")
    dist = nx.single_source_shortest_path_length(graph, owner)
    return {node: (d, 1.0 / d) for node, d in dist.items() if node != owner}


def run_social_scenario(graph, owner, data, alpha=1.0, seed=0, subset=()):
    """Release one coupled response per reachable user.

    Responses are materialised from the largest level downwards, so after
    the first release every further one is a tightening step and no level
    ever falls between two sampled ones.
    """
    levels = distance_levels(graph, owner)
    mech = GradualLaplaceMechanism(alpha=alpha, random_state=seed).fit(data)
    order = sorted(levels, key=lambda node: (levels[node][0], node))
    per_node = []
    for node in order:
        d, eps = levels[node]
        per_node.append(NodeResponse(node=node, distance=d, eps=eps, values=mech.release(eps).values))
    unreachable = sorted(n for n in graph.nodes if n != owner and n not in levels)

    def bound(nodes):
        eps = [levels[n][1] for n in nodes if n in levels]
        return max(eps) if eps else None

    subset = [int(n) for n in subset]
    return ScenarioResult(
        per_node=per_node,
        unreachable=unreachable,
        collusion_bound=bound(levels),
        subset=subset,
        subset_bound=bound(subset),
    )
