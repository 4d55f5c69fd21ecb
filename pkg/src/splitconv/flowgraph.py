"""Information-flow graph for split conversion and its max-flow oracle.

Capacities are Fractions normalized to alpha = 1, so tightness checks are
exact and no spurious integrality sneaks in.  Data collectors are restricted
to within-codeword symbol sets; node symmetry inside a codeword reduces the
collector enumeration to choosing how many new symbols each codeword's
decoder uses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .bounds import BetaAssignment, BoundInputs

SOURCE = "s"
SINK = "t"
CENTER = "c"


def unchanged_node(i: int, j: int) -> str:
    return f"u{i}_{j}"


def retired_node(j: int) -> str:
    return f"r{j}"


def new_node(i: int, j: int) -> str:
    return f"n{i}_{j}"


def collector_node(i: int) -> str:
    return f"t{i}"


@dataclass(frozen=True)
class FlowNetwork:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, Fraction], ...]


def build_flow_graph(b: BoundInputs, betas: BetaAssignment,
                     collectors: Sequence[Iterable[str]]) -> FlowNetwork:
    """Assemble the conversion flow graph for one collector configuration.

    `collectors[i-1]` is final codeword i's set of kf symbol nodes, drawn
    from that codeword's unchanged and new nodes only.
    """
    alpha = Fraction(1)
    lam, kf, ri, rf = b.lam, b.kf, b.ri, b.rf
    if len(collectors) != lam:
        raise ValueError(f"need {lam} collector sets, got {len(collectors)}")
    nodes = [SOURCE, SINK, CENTER]
    edges: list[tuple[str, str, Fraction]] = []
    for i in range(1, lam + 1):
        for j in range(1, kf + 1):
            u = unchanged_node(i, j)
            nodes.append(u)
            edges.append((SOURCE, u, alpha))
            edges.append((u, CENTER, betas.beta1))
    for j in range(1, ri + 1):
        r = retired_node(j)
        nodes.append(r)
        edges.append((SOURCE, r, alpha))
        edges.append((r, CENTER, betas.beta2))
    for i in range(1, lam + 1):
        for j in range(1, rf + 1):
            nnode = new_node(i, j)
            nodes.append(nnode)
            edges.append((CENTER, nnode, alpha))
    for i in range(1, lam + 1):
        tnode = collector_node(i)
        nodes.append(tnode)
        own = {unchanged_node(i, j) for j in range(1, kf + 1)}
        own |= {new_node(i, j) for j in range(1, rf + 1)}
        chosen = set(collectors[i - 1])
        if len(chosen) != kf or not chosen <= own:
            raise ValueError(
                f"collector {i} must pick {kf} distinct nodes from codeword {i}'s symbols"
            )
        for v in sorted(chosen):
            edges.append((v, tnode, alpha))
        edges.append((tnode, SINK, kf * alpha))
    return FlowNetwork(nodes=tuple(nodes), edges=tuple(edges))


def max_flow(net: FlowNetwork, source: str = SOURCE, sink: str = SINK) -> Fraction:
    """Edmonds-Karp maximum flow; rational capacities, exact result."""
    residual: dict[str, dict[str, Fraction]] = {v: {} for v in net.nodes}
    for u, v, cap in net.edges:
        residual[u][v] = residual[u].get(v, Fraction(0)) + cap
        residual[v].setdefault(u, Fraction(0))
    total = Fraction(0)
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, cap in residual[u].items():
                if cap > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return total
        # bottleneck along the augmenting path
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[u][v] for u, v in path)
        for u, v in path:
            residual[u][v] -= push
            residual[v][u] += push
        total += push


def collectors_from_new_counts(b: BoundInputs, counts: Sequence[int]) -> list[set[str]]:
    """Canonical collector sets where codeword i uses counts[i-1] new symbols."""
    out = []
    for i, m in enumerate(counts, start=1):
        if not 0 <= m <= min(b.rf, b.kf):
            raise ValueError(f"codeword {i} cannot use {m} new symbols")
        chosen = {new_node(i, j) for j in range(1, m + 1)}
        chosen |= {unchanged_node(i, j) for j in range(1, b.kf - m + 1)}
        out.append(chosen)
    return out


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    worst_flow: Fraction
    worst_new_counts: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "worst_flow": str(self.worst_flow),
            "worst_collectors": {"new_symbols_per_codeword": list(self.worst_new_counts)},
        }


def check_feasibility(b: BoundInputs, betas: BetaAssignment) -> FeasibilityResult:
    """Can every decoder configuration still pull alpha*kI through the graph?

    Within one codeword the collector choice only matters through how many
    new symbols it uses, so (rf+1)^lam configurations cover all
    C(kf+rf, kf)^lam collector sets.
    """
    required = Fraction(b.lam * b.kf)
    worst = None
    worst_counts: tuple[int, ...] = ()
    top = min(b.rf, b.kf)
    for counts in product(range(top + 1), repeat=b.lam):
        net = build_flow_graph(b, betas, collectors_from_new_counts(b, counts))
        flow = max_flow(net)
        if worst is None or flow < worst:
            worst = flow
            worst_counts = counts
    assert worst is not None
    return FeasibilityResult(feasible=worst >= required, worst_flow=worst,
                             worst_new_counts=worst_counts)


def lemma_cut_value(b: BoundInputs, betas: BetaAssignment) -> Fraction:
    """Value of the cut {s} + one min(kf, rf)-subset per codeword + retired.

    Requiring this to reach lam*kf*alpha is exactly the flow-cut constraint
    the lower bounds are built from.
    """
    m = min(b.kf, b.rf)
    return (b.lam * (b.kf - m) * Fraction(1)
            + b.lam * m * betas.beta1
            + b.ri * betas.beta2)
