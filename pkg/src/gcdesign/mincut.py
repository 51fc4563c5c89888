"""Minimum-cut minimization of a fitness function.

Node numbering: source 0, sink 1, residue ``v_i`` at ``i + 1`` and pair node
``u_ij`` at ``n + 2 + k`` for the k-th pair in lexicographic order.  All
capacities are integers (coefficients scaled by the common denominator).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError
from .model import FitnessFunction, HPSequence, evaluate

SOURCE = 0
SINK = 1


@dataclass(frozen=True)
class FlowNetwork:
    n: int
    num_nodes: int
    edges: tuple[tuple[int, int, int], ...]
    infinite: int
    pair_nodes: tuple[tuple[int, int], ...]

    def residue_node(self, i: int) -> int:
        return i + 1

    def finite_edges(self):
        return [e for e in self.edges if e[2] != self.infinite]


@dataclass
class Flow:
    """Maximum flow plus the residual state it leaves behind.

    ``flows[k]`` is the flow on ``network.edges[k]``.  ``adjacency`` lists arc
    ids per node in the order they were scanned; arc ``2k`` is edge ``k`` and
    arc ``2k+1`` its reverse.
    """

    network: FlowNetwork
    value: int
    flows: list[int]
    heads: list[int]
    residual: list[int]
    adjacency: list[list[int]] = field(repr=False)

    def residual_successors(self, node: int):
        res, heads = self.residual, self.heads
        for arc in self.adjacency[node]:
            if res[arc] > 0:
                yield heads[arc]

    def source_side(self) -> list[bool]:
        """Nodes reachable from the source in the residual graph."""
        seen = [False] * self.network.num_nodes
        seen[SOURCE] = True
        queue = deque([SOURCE])
        res, heads, adj = self.residual, self.heads, self.adjacency
        while queue:
            u = queue.popleft()
            for arc in adj[u]:
                if res[arc] > 0 and not seen[heads[arc]]:
                    seen[heads[arc]] = True
                    queue.append(heads[arc])
        return seen


def build_network(phi: FitnessFunction) -> FlowNetwork:
    n = phi.n
    finite: list[tuple[int, int, int]] = []
    pair_nodes = tuple(phi.scaled_pairs)
    for k, (i, j) in enumerate(pair_nodes):
        finite.append((SOURCE, n + 2 + k, phi.scaled_pairs[(i, j)]))
    for i, b in enumerate(phi.scaled_linear, start=1):
        if b > 0:
            finite.append((i + 1, SINK, b))
        elif b < 0:
            finite.append((SOURCE, i + 1, -b))
    infinite = 1 + sum(cap for _, _, cap in finite)
    edges = list(finite)
    for k, (i, j) in enumerate(pair_nodes):
        u = n + 2 + k
        edges.append((u, i + 1, infinite))
        edges.append((u, j + 1, infinite))
    return FlowNetwork(
        n=n,
        num_nodes=n + len(pair_nodes) + 2,
        edges=tuple(edges),
        infinite=infinite,
        pair_nodes=pair_nodes,
    )


def max_flow(net: FlowNetwork, reverse_adjacency: bool = False) -> Flow:
    """Dinic's blocking-flow algorithm.

    ``reverse_adjacency`` scans every node's arcs in the opposite order, which
    in general yields a different maximum flow of the same value.
    """
    size = net.num_nodes
    heads: list[int] = []
    residual: list[int] = []
    adj: list[list[int]] = [[] for _ in range(size)]
    for u, v, cap in net.edges:
        adj[u].append(len(heads))
        heads.append(v)
        residual.append(cap)
        adj[v].append(len(heads))
        heads.append(u)
        residual.append(0)
    if reverse_adjacency:
        for arcs in adj:
            arcs.reverse()

    value = 0
    while True:
        level = [-1] * size
        level[SOURCE] = 0
        queue = deque([SOURCE])
        while queue:
            u = queue.popleft()
            for arc in adj[u]:
                v = heads[arc]
                if residual[arc] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[SINK] < 0:
            break
        value += _blocking_flow(adj, heads, residual, level)

    flows = [net.edges[k][2] - residual[2 * k] for k in range(len(net.edges))]
    flow = Flow(net, value, flows, heads, residual, adj)
    _check_cut(flow)
    return flow


def _blocking_flow(adj, heads, residual, level) -> int:
    pointer = [0] * len(adj)
    pushed = 0
    path: list[int] = []
    u = SOURCE
    while True:
        if u == SINK:
            bottleneck = min(residual[arc] for arc in path)
            for arc in path:
                residual[arc] -= bottleneck
                residual[arc ^ 1] += bottleneck
            pushed += bottleneck
            path.clear()
            u = SOURCE
            continue
        arcs = adj[u]
        advanced = False
        while pointer[u] < len(arcs):
            arc = arcs[pointer[u]]
            v = heads[arc]
            if residual[arc] > 0 and level[v] == level[u] + 1:
                path.append(arc)
                u = v
                advanced = True
                break
            pointer[u] += 1
        if advanced:
            continue
        if u == SOURCE:
            return pushed
        # dead end: retire u from this phase and back up one arc
        level[u] = -1
        arc = path.pop()
        u = heads[arc ^ 1]
        pointer[u] += 1


def _check_cut(flow: Flow) -> None:
    side = flow.source_side()
    if side[SINK]:
        raise RuntimeError("sink reachable after max flow")
    cut = sum(cap for u, v, cap in flow.network.edges if side[u] and not side[v])
    if cut != flow.value:
        raise RuntimeError(f"max-flow value {flow.value} != cut capacity {cut}")


def cut_capacity(net: FlowNetwork, x: Sequence[int]) -> int:
    """Capacity of the cheapest cut whose residue sides follow ``x``.

    Pair nodes go to the source side exactly when both residues are H.
    """
    side = [False] * net.num_nodes
    side[SOURCE] = True
    for i, xi in enumerate(x, start=1):
        side[i + 1] = bool(xi)
    for k, (i, j) in enumerate(net.pair_nodes):
        side[net.n + 2 + k] = bool(x[i - 1] and x[j - 1])
    return sum(cap for u, v, cap in net.edges if side[u] and not side[v])


def cut_offset(phi: FitnessFunction) -> int:
    """Scaled constant separating cut capacity from ``c * Phi``."""
    return sum(phi.scaled_pairs.values()) - sum(b for b in phi.scaled_linear if b < 0)


def one_optimum(phi: FitnessFunction, reverse_adjacency: bool = False) -> HPSequence:
    net = build_network(phi)
    side = max_flow(net, reverse_adjacency).source_side()
    return tuple(int(side[i + 1]) for i in range(1, phi.n + 1))


def minimize(phi: FitnessFunction) -> tuple[HPSequence, Fraction]:
    x = one_optimum(phi)
    return x, evaluate(phi, x)


def lex_minimize(phi: FitnessFunction, secondary: Sequence[object]) -> HPSequence:
    """Minimize ``Phi``; among its minimizers minimize ``sum secondary_i x_i``.

    The secondary objective is folded in exactly: with ``Phi`` scaled to
    integers and the secondary coefficients scaled to integers ``L_i``, any
    non-optimal ``x`` is at least ``K = 1 + sum |L_i|`` worse in ``K*c*Phi``,
    which exceeds the whole range of ``sum L_i x_i``.
    """
    sec = [Fraction(v) for v in secondary]
    if len(sec) != phi.n:
        raise DimensionError("secondary objective length differs from n")
    den = math.lcm(*(v.denominator for v in sec)) if sec else 1
    ints = [int(v * den) for v in sec]
    if not any(ints):
        return one_optimum(phi)
    big = 1 + sum(abs(v) for v in ints)
    combined = FitnessFunction(
        phi.n,
        {k: a * big for k, a in phi.scaled_pairs.items()},
        [b * big + extra for b, extra in zip(phi.scaled_linear, ints)],
    )
    return one_optimum(combined)

