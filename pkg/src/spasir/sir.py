"""Discrete-time SIR process and its bond-percolation counterpart.

The process runs on the undirected view of a generated graph: the origin is
infected at t = 0, each infected vertex independently attempts every
susceptible neighbour once with its own transmission probability, and all
infected vertices recover at the end of the step.

Every ordered vertex pair (u, v) gets one dedicated uniform draw keyed by
(seed, u, v) (see :mod:`spasir.streams`). Because a vertex is infectious for
exactly one step, each ordered pair is examined at most once, so the run
consumes exactly the draw that :func:`build_potential_graph` assigns to that
pair. Under a shared seed the infected set at time t therefore equals the
t-th out-neighbourhood of the origin in the potential infection graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contagion import ContagionScenario, beta_vector
from .generator import SpaGraph
from .geometry import torus_distances
from .streams import derive_seed, pair_uniform

__all__ = [
    "InfectionConfig",
    "InfectionOutcome",
    "PotentialInfectionGraph",
    "InfectionSubgraph",
    "run_sir",
    "build_potential_graph",
    "infection_graph_at",
    "longest_edge",
]


@dataclass(frozen=True)
class InfectionConfig:
    """Where the infection starts, under which scenario, and with which seed.

    origin is "oldest", "random", or an explicit 1-based vertex index.
    """

    scenario: ContagionScenario
    seed: int
    origin: str | int = "oldest"
    max_steps: int | None = None

    def resolve_origin(self, n: int) -> int:
        if self.origin == "oldest":
            return 1
        if self.origin == "random":
            rng = np.random.default_rng(derive_seed(self.seed, "origin"))
            return int(rng.integers(1, n + 1))
        origin = int(self.origin)
        if not 1 <= origin <= n:
            raise ValueError(f"origin index must lie in 1..{n}, got {origin}")
        return origin


@dataclass
class InfectionOutcome:
    """Everything recorded about one run.

    infection_time and infector are (n+1,) arrays with -1 for "never" /
    "none"; transmission_edges holds every successful attempt as
    (infector, infectee, torus length), including same-step duplicates on
    one target, while ``infector`` keeps only the recorded tree parent
    (the successful attempter with the smallest birth time).
    """

    origin: int
    infection_time: np.ndarray
    infector: np.ndarray
    transmission_edges: list
    duration: int
    attack_size: int
    longest_jump: float
    max_displacement: float
    truncated: bool = False

    def infected_vertices(self) -> np.ndarray:
        """Ever-infected vertex ids, ascending."""
        return np.flatnonzero(self.infection_time >= 0)


@dataclass
class PotentialInfectionGraph:
    """Directed percolation of the undirected edge set.

    Each orientation (u, v) of an edge is occupied independently with the
    transmission probability of the source u, using the pair-keyed draw
    under ``seed``.
    """

    graph: SpaGraph
    scenario: ContagionScenario
    seed: int
    occupied: set
    out_neighbors: dict = field(repr=False)


@dataclass
class InfectionSubgraph:
    """Out-neighbourhood of an origin: hop distances and first-arrival edges."""

    origin: int
    depth: dict
    edges: list


def _neighbor_arrays(graph: SpaGraph, adjacency=None) -> list:
    return adjacency if adjacency is not None else graph.undirected_neighbors()


def run_sir(graph: SpaGraph, cfg: InfectionConfig, *, beta_override: float | None = None,
            adjacency: list | None = None) -> InfectionOutcome:
    """Run one SIR realisation; deterministic given graph and config.

    ``beta_override`` forces a constant transmission probability (the
    beta = 1 limit reduces the run to deterministic percolation), and
    ``adjacency`` lets callers reuse a precomputed undirected neighbour
    table across runs on the same graph.
    """
    n = graph.n
    metric = graph.params.metric
    nbrs = _neighbor_arrays(graph, adjacency)
    beta = beta_vector(graph, cfg.scenario, override=beta_override)
    origin = cfg.resolve_origin(n)

    infection_time = np.full(n + 1, -1, dtype=np.int64)
    infector = np.full(n + 1, -1, dtype=np.int64)
    infection_time[origin] = 0
    transmission_edges: list[tuple[int, int, float]] = []
    longest = 0.0

    frontier = np.array([origin], dtype=np.int64)
    t = 0
    while frontier.size and (cfg.max_steps is None or t < cfg.max_steps):
        t += 1
        counts = [len(nbrs[v]) for v in frontier]
        if sum(counts) == 0:
            frontier = np.zeros(0, dtype=np.int64)
            break
        srcs = np.repeat(frontier, counts)
        tgts = np.concatenate([nbrs[v] for v in frontier])
        open_mask = infection_time[tgts] < 0
        srcs, tgts = srcs[open_mask], tgts[open_mask]
        if srcs.size == 0:
            frontier = np.zeros(0, dtype=np.int64)
            break
        success = pair_uniform(cfg.seed, srcs, tgts) < beta[srcs]
        srcs, tgts = srcs[success], tgts[success]
        if srcs.size == 0:
            frontier = np.zeros(0, dtype=np.int64)
            break
        lengths = torus_distances(graph.positions[srcs], graph.positions[tgts], metric)
        transmission_edges.extend(
            (int(s), int(g), float(l)) for s, g, l in zip(srcs, tgts, lengths)
        )
        longest = max(longest, float(lengths.max()))
        # smallest-birth-time attempter becomes the recorded parent
        order = np.lexsort((srcs, tgts))
        new, first = np.unique(tgts[order], return_index=True)
        infection_time[new] = t
        infector[new] = srcs[order][first]
        frontier = new

    infected = np.flatnonzero(infection_time >= 0)
    displacement = torus_distances(graph.positions[infected], graph.positions[origin], metric)
    return InfectionOutcome(
        origin=origin,
        infection_time=infection_time,
        infector=infector,
        transmission_edges=transmission_edges,
        duration=t,
        attack_size=int(infected.size),
        longest_jump=longest,
        max_displacement=float(displacement.max()),
        truncated=bool(frontier.size),
    )


def build_potential_graph(graph: SpaGraph, sc: ContagionScenario, seed: int, *,
                          beta_override: float | None = None) -> PotentialInfectionGraph:
    """Occupy both orientations of every undirected edge independently.

    Orientation (u, v) is kept with probability beta(u); the draws are the
    pair-keyed uniforms, so a SIR run under the same seed traverses exactly
    these occupied pairs.
    """
    beta = beta_vector(graph, sc, override=beta_override)
    occupied: set[tuple[int, int]] = set()
    out: dict[int, list[int]] = {}
    if len(graph.edges):
        lo = np.minimum(graph.edges[:, 0], graph.edges[:, 1])
        hi = np.maximum(graph.edges[:, 0], graph.edges[:, 1])
        for u, v in ((lo, hi), (hi, lo)):
            keep = pair_uniform(seed, u, v) < beta[u]
            for s, g in zip(u[keep], v[keep]):
                occupied.add((int(s), int(g)))
                out.setdefault(int(s), []).append(int(g))
    for v in out:
        out[v].sort()
    return PotentialInfectionGraph(graph, sc, seed, occupied, out)


def infection_graph_at(pg: PotentialInfectionGraph, origin: int, t: int) -> InfectionSubgraph:
    """Vertices within t directed hops of origin, with first-arrival edges.

    Edges (u, v) with depth(v) = depth(u) + 1 are all reported, mirroring
    the way simultaneous successful attempts are recorded by a run.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    depth = {origin: 0}
    edges: list[tuple[int, int]] = []
    layer = [origin]
    step = 0
    while layer and step < t:
        step += 1
        nxt: list[int] = []
        for u in layer:
            for v in pg.out_neighbors.get(u, ()):
                d = depth.get(v)
                if d is None:
                    depth[v] = step
                    nxt.append(v)
                    edges.append((u, v))
                elif d == step:
                    edges.append((u, v))
        layer = nxt
    return InfectionSubgraph(origin=origin, depth=depth, edges=edges)


def longest_edge(obj) -> float:
    """Longest torus distance spanned by the object's edges (0 if none).

    Accepts an :class:`InfectionOutcome` (transmission edges) or a
    :class:`PotentialInfectionGraph` (occupied pairs).
    """
    if isinstance(obj, InfectionOutcome):
        if not obj.transmission_edges:
            return 0.0
        return max(length for _, _, length in obj.transmission_edges)
    if isinstance(obj, PotentialInfectionGraph):
        if not obj.occupied:
            return 0.0
        pairs = np.array(sorted(obj.occupied), dtype=np.int64)
        lengths = torus_distances(
            obj.graph.positions[pairs[:, 0]], obj.graph.positions[pairs[:, 1]],
            obj.graph.params.metric,
        )
        return float(lengths.max())
    raise TypeError(f"cannot take the longest edge of {type(obj).__name__}")
