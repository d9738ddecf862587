"""Co-word graph over disclosed terms, plus a force-directed 2-D layout.

Nodes are terms; an edge joins two terms whenever one researcher
mentions both, weighted by how many researchers do. Counts are
researcher-level presence, not raw phrase multiplicity. The layout is
the classic spring model: attraction d^2/k on edges, repulsion k^2/d
between all node pairs, displacement capped by a linearly cooling
temperature, positions clamped to the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .ingest import Researcher
from .normalize import Facet, Origin, StopList, researcher_phrases, researcher_words

DEFAULT_ITERATIONS = 100
DEFAULT_FRAME = (100.0, 100.0)
DEFAULT_SEED = 42


@dataclass(frozen=True)
class CowordGraph:
    nodes: dict[str, int]
    edges: dict[tuple[str, str], int]
    facet: Facet
    level: Origin


@dataclass(frozen=True)
class Layout:
    """Node positions within the frame; k is the ideal edge length sqrt(W*H/n).

    mean_displacements records the mean per-node movement of every
    iteration, which makes convergence checkable after the fact.
    """

    positions: dict[str, tuple[float, float]]
    frame: tuple[float, float]
    k: float
    mean_displacements: list[float] = field(default_factory=list)


def cooccurrence_graph(
    researchers: Iterable[Researcher],
    facet: Facet,
    level: Origin = Origin.PHRASE,
    stoplist: StopList | None = None,
) -> CowordGraph:
    """Count researcher-level term presence and pairwise co-occurrence.

    At word level the same stoplist rules used for cleaning decide which
    words exist; the shipped default applies when none is given.
    """
    if stoplist is None:
        stoplist = StopList.default()
    nodes: dict[str, int] = {}
    edges: dict[tuple[str, str], int] = {}
    for researcher in researchers:
        if level is Origin.PHRASE:
            terms = [norm for _, norm in researcher_phrases(researcher, facet)]
        else:
            terms = researcher_words(researcher, facet, stoplist)
        for term in terms:
            nodes[term] = nodes.get(term, 0) + 1
        for a, b in combinations(terms, 2):
            key = (a, b) if a <= b else (b, a)
            edges[key] = edges.get(key, 0) + 1
    return CowordGraph(nodes=nodes, edges=edges, facet=facet, level=level)


def isolation_ratio(graph: CowordGraph) -> float:
    """Fraction of terms mentioned by exactly one researcher; 0 when empty."""
    if not graph.nodes:
        return 0.0
    singles = sum(1 for count in graph.nodes.values() if count == 1)
    return singles / len(graph.nodes)


def layout_fr(
    graph: CowordGraph,
    iterations: int = DEFAULT_ITERATIONS,
    frame: tuple[float, float] = DEFAULT_FRAME,
    seed: int = DEFAULT_SEED,
    initial_positions: dict[str, tuple[float, float]] | None = None,
    clamp: bool = True,
) -> Layout:
    """Force-directed layout, deterministic for a fixed seed.

    Initial positions come from a seeded uniform scatter unless given
    explicitly. ``clamp=False`` skips the frame clamp (useful for
    studying the free equilibrium; the frame still defines k).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    width, height = frame
    if width * height <= 0:
        raise ValueError("frame area must be positive")

    names = sorted(graph.nodes)
    n = len(names)
    if n == 0:
        return Layout(positions={}, frame=frame, k=0.0)
    k = math.sqrt(width * height / n)
    if n == 1:
        return Layout(
            positions={names[0]: (width / 2, height / 2)},
            frame=frame,
            k=k,
            mean_displacements=[0.0] * iterations,
        )

    if initial_positions is None:
        rng = np.random.default_rng(seed)
        pos = rng.uniform(low=(0.0, 0.0), high=(width, height), size=(n, 2))
    else:
        pos = np.array([initial_positions[name] for name in names], dtype=float)

    index = {name: i for i, name in enumerate(names)}
    if graph.edges:
        ei = np.array([index[a] for a, _ in graph.edges])
        ej = np.array([index[b] for _, b in graph.edges])
    else:
        ei = ej = None

    t0 = width / 10
    means: list[float] = []
    lower = np.array([0.0, 0.0])
    upper = np.array([width, height])
    for it in range(iterations):
        t = t0 * (iterations - it) / iterations

        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta**2).sum(axis=-1))
        np.fill_diagonal(dist, 1.0)  # self-pairs have delta 0, any divisor works
        dist = np.maximum(dist, 1e-9)
        disp = (delta * (k * k / dist**2)[..., None]).sum(axis=1)

        if ei is not None:
            dvec = pos[ei] - pos[ej]
            d = np.maximum(np.sqrt((dvec**2).sum(axis=-1)), 1e-9)
            pull = dvec * (d / k)[:, None]
            np.add.at(disp, ei, -pull)
            np.add.at(disp, ej, pull)

        length = np.maximum(np.sqrt((disp**2).sum(axis=-1)), 1e-12)
        step = disp * (np.minimum(length, t) / length)[:, None]
        moved = pos + step
        if clamp:
            moved = np.clip(moved, lower, upper)
        means.append(float(np.sqrt(((moved - pos) ** 2).sum(axis=-1)).mean()))
        pos = moved

    positions = {name: (float(pos[i, 0]), float(pos[i, 1])) for name, i in index.items()}
    return Layout(positions=positions, frame=frame, k=k, mean_displacements=means)


def export_graph(graph: CowordGraph, layout: Layout | None = None) -> str:
    """Deterministic edge-list text: "a<TAB>b<TAB>weight" sorted by pair.

    With a layout, a node block "term<TAB>count<TAB>x<TAB>y" follows.
    """
    lines = [f"{a}\t{b}\t{weight}" for (a, b), weight in sorted(graph.edges.items())]
    if layout is not None:
        for name in sorted(graph.nodes):
            x, y = layout.positions[name]
            lines.append(f"{name}\t{graph.nodes[name]}\t{x:.6f}\t{y:.6f}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def graph_csv(graph: CowordGraph, layout: Layout | None = None) -> tuple[str, str]:
    """(nodes_csv, edges_csv) for external visualization tools.

    Norm-form terms cannot contain commas, so no quoting is needed.
    """
    if layout is None:
        node_lines = ["term,count"]
        node_lines += [f"{name},{graph.nodes[name]}" for name in sorted(graph.nodes)]
    else:
        node_lines = ["term,count,x,y"]
        for name in sorted(graph.nodes):
            x, y = layout.positions[name]
            node_lines.append(f"{name},{graph.nodes[name]},{x:.6f},{y:.6f}")
    edge_lines = ["source,target,weight"]
    edge_lines += [f"{a},{b},{w}" for (a, b), w in sorted(graph.edges.items())]
    return "\n".join(node_lines) + "\n", "\n".join(edge_lines) + "\n"
