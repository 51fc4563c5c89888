"""Picard-Queyranne dag of all optimal sequences, and ideal enumeration.

Supernode ids: ``SOURCE_NODE`` (0) is s', ``SINK_NODE`` (1) is t', interior
supernodes are numbered from 2 upward in order of their smallest residue.
An ideal is a predecessor-closed set of interior supernodes; residue ``i`` is
P in the corresponding sequence iff ``rho(i)`` is t' or lies in the ideal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ClosureError, InputError, NotOptimalError
from .mincut import SINK, SOURCE, Flow, build_network, max_flow
from .model import FitnessFunction, HPSequence

SOURCE_NODE = 0
SINK_NODE = 1


@dataclass(frozen=True)
class PQDag:
    n: int
    members: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    rho: tuple[int, ...]

    def __post_init__(self):
        if len(self.rho) != self.n:
            raise InputError("rho must map every residue")
        if len(self.members) < 2:
            raise InputError("dag needs s' and t'")
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop on supernode {u}")
            if u == SOURCE_NODE:
                raise InputError("s' must have out-degree 0")
            if v == SINK_NODE:
                raise InputError("t' must have in-degree 0")

    @classmethod
    def from_groups(
        cls,
        n: int,
        interior: Sequence[Iterable[int]],
        edges: Iterable[tuple[int, int]] = (),
        source: Iterable[int] = (),
        sink: Iterable[int] = (),
    ) -> PQDag:
        """Build a dag from residue groups; ``edges`` index into ``interior``."""
        groups = [tuple(sorted(source)), tuple(sorted(sink))]
        groups += [tuple(sorted(g)) for g in interior]
        rho = [-1] * n
        for node, group in enumerate(groups):
            for i in group:
                if rho[i - 1] != -1:
                    raise InputError(f"residue {i} placed twice")
                rho[i - 1] = node
        if -1 in rho:
            raise InputError("every residue needs a supernode")
        return cls(n, tuple(groups), frozenset((u + 2, v + 2) for u, v in edges), tuple(rho))

    @property
    def interior(self) -> range:
        return range(2, len(self.members))

    @property
    def interior_size(self) -> int:
        return len(self.members) - 2

    @cached_property
    def interior_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u, v in self.edges if u >= 2 and v >= 2))

    @cached_property
    def predecessors(self) -> dict[int, tuple[int, ...]]:
        preds: dict[int, list[int]] = {v: [] for v in self.interior}
        for u, v in self.interior_edges:
            preds[v].append(u)
        return {v: tuple(p) for v, p in preds.items()}

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        succ: dict[int, list[int]] = {v: [] for v in self.interior}
        for u, v in self.interior_edges:
            succ[u].append(v)
        return {v: tuple(s) for v, s in succ.items()}

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = {v: len(p) for v, p in self.predecessors.items()}
        ready = deque(v for v in self.interior if indeg[v] == 0)
        order = []
        while ready:
            u = ready.popleft()
            order.append(u)
            for v in self.successors[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) != self.interior_size:
            raise InputError("interior graph has a cycle")
        return tuple(order)

    @cached_property
    def ancestor_masks(self) -> dict[int, int]:
        """Bitmask of strict ancestors per interior node (bit ``v - 2``)."""
        anc: dict[int, int] = {}
        for v in self.topological_order:
            mask = 0
            for p in self.predecessors[v]:
                mask |= anc[p] | (1 << (p - 2))
            anc[v] = mask
        return anc

    def role(self, node: int) -> str:
        return {SOURCE_NODE: "source", SINK_NODE: "sink"}.get(node, "interior")


def strongly_connected_components(nodes: Sequence[int], succ) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def contract(n: int, label_of: list[int], succ_of, node_ids: Iterable[int]) -> PQDag:
    """Turn a node -> provisional-label map into a PQDag.

    ``label_of[node]`` is 0 for s', 1 for t' and >= 2 for the other classes;
    residue ``i`` lives at node ``i + 1``.  Classes without residues must not
    exist.
    """
    first_residue: dict[int, int] = {}
    for i in range(1, n + 1):
        lab = label_of[i + 1]
        if lab >= 2 and lab not in first_residue:
            first_residue[lab] = i
    renumber = {SOURCE_NODE: SOURCE_NODE, SINK_NODE: SINK_NODE}
    for new, lab in enumerate(sorted(first_residue, key=first_residue.get), start=2):
        renumber[lab] = new
    members: list[list[int]] = [[] for _ in range(len(renumber))]
    rho = []
    for i in range(1, n + 1):
        node = renumber[label_of[i + 1]]
        members[node].append(i)
        rho.append(node)
    edges = set()
    for u in node_ids:
        lu = label_of[u]
        if lu not in renumber:
            raise RuntimeError("supernode without residues")
        for w in succ_of(u):
            lw = label_of[w]
            if lu != lw:
                edges.add((renumber[lu], renumber[lw]))
    return PQDag(n, tuple(tuple(m) for m in members), frozenset(edges), tuple(rho))


def dag_from_flow(flow: Flow) -> PQDag:
    net = flow.network
    size = net.num_nodes
    succ = [list(flow.residual_successors(u)) for u in range(size)]
    pred: list[list[int]] = [[] for _ in range(size)]
    for u in range(size):
        for w in succ[u]:
            pred[w].append(u)

    label = [-1] * size
    from_source = flow.source_side()
    to_sink = [False] * size
    to_sink[SINK] = True
    queue = deque([SINK])
    while queue:
        u = queue.popleft()
        for w in pred[u]:
            if not to_sink[w]:
                to_sink[w] = True
                queue.append(w)
    for u in range(size):
        if from_source[u]:
            label[u] = SOURCE_NODE
        elif to_sink[u]:
            label[u] = SINK_NODE
    rest = [u for u in range(size) if label[u] < 0]
    rest_set = set(rest)
    comps = strongly_connected_components(rest, lambda u: (w for w in succ[u] if w in rest_set))
    for k, comp in enumerate(comps, start=2):
        for u in comp:
            label[u] = k
    return contract(net.n, label, lambda u: succ[u], range(size))


def pq_dag(phi: FitnessFunction, reverse_adjacency: bool = False) -> PQDag:
    return dag_from_flow(max_flow(build_network(phi), reverse_adjacency))


def ideal_to_sequence(dag: PQDag, ideal: Iterable[int]) -> HPSequence:
    ideal = frozenset(ideal)
    for v in ideal:
        if v not in dag.interior:
            raise InputError(f"{v} is not an interior supernode")
    for u, v in dag.interior_edges:
        if v in ideal and u not in ideal:
            raise ClosureError((u, v))
    return tuple(0 if (r == SINK_NODE or r in ideal) else 1 for r in dag.rho)


def sequence_to_ideal(dag: PQDag, x: Sequence[int]) -> frozenset[int]:
    """Inverse of ``ideal_to_sequence``; raises if ``x`` is not optimal."""
    if len(x) != dag.n:
        raise NotOptimalError("sequence length differs from n")
    value: dict[int, int] = {}
    for i, (r, xi) in enumerate(zip(dag.rho, x), start=1):
        if r == SOURCE_NODE and xi != 1:
            raise NotOptimalError(f"residue {i} must be H in every optimum")
        if r == SINK_NODE and xi != 0:
            raise NotOptimalError(f"residue {i} must be P in every optimum")
        if value.setdefault(r, xi) != xi:
            raise NotOptimalError(f"residues of supernode {r} disagree at residue {i}")
    ideal = frozenset(v for v in dag.interior if value.get(v) == 0)
    for u, v in dag.interior_edges:
        if v in ideal and u not in ideal:
            raise NotOptimalError(f"dependency {u} -> {v} violated")
    return ideal


def enumerate_ideals(dag: PQDag) -> Iterator[frozenset[int]]:
    """All ideals, in lexicographic order of their sorted id tuples.

    Each branch is pruned unless some ideal agrees with it on every node up to
    the branch point, so the delay between outputs stays polynomial.
    """
    size = dag.interior_size
    anc = [dag.ancestor_masks[v + 2] for v in range(size)]

    def as_set(mask: int) -> frozenset[int]:
        return frozenset(v + 2 for v in range(size) if mask >> v & 1)

    yield frozenset()
    # frame: [members mask, ancestors mask, next candidate]
    stack = [[0, 0, 0]]
    while stack:
        frame = stack[-1]
        chosen, ancestors, v = frame
        while v < size:
            grown = chosen | (1 << v)
            needed = ancestors | anc[v]
            below = (1 << (v + 1)) - 1
            if needed & below & ~grown == 0:
                break
            v += 1
        if v >= size:
            stack.pop()
            continue
        frame[2] = v + 1
        if needed & ~grown == 0:
            yield as_set(grown)
        stack.append([grown, needed, v + 1])


def enumerate_optima(dag: PQDag) -> Iterator[HPSequence]:
    for ideal in enumerate_ideals(dag):
        yield tuple(0 if (r == SINK_NODE or r in ideal) else 1 for r in dag.rho)


def dag_to_phi(n: int, edges: Iterable[tuple[int, int]]) -> FitnessFunction:
    """Fitness function whose PQ dag interior is the condensation of ``edges``."""
    edge_set = set()
    for i, j in edges:
        if i == j:
            raise InputError(f"self-loop at node {i}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InputError(f"edge ({i}, {j}) out of range")
        edge_set.add((i, j))
    pairs: dict[tuple[int, int], int] = {}
    outdeg = [0] * n
    for i, j in edge_set:
        key = (min(i, j), max(i, j))
        pairs[key] = pairs.get(key, 0) + 1
        outdeg[i - 1] += 1
    return FitnessFunction(n, pairs, outdeg)


def longest_chain(dag: PQDag) -> int:
    length: dict[int, int] = {}
    for v in dag.topological_order:
        length[v] = 1 + max((length[p] for p in dag.predecessors[v]), default=0)
    return max(length.values(), default=0)


def count_bound(dag: PQDag) -> tuple[int, int]:
    """Cheap bounds on the number of optima.

    A chain of ``k`` supernodes gives ``k + 1`` nested ideals; the empty ideal
    and every single source node give ``1 + #sources`` more.
    """
    sources = sum(1 for v in dag.interior if not dag.predecessors[v])
    lower = max(longest_chain(dag) + 1, 1 + sources)
    return lower, 2 ** dag.interior_size


def reachability(dag: PQDag) -> dict[int, frozenset[int]]:
    """Interior descendants of every interior node."""
    desc: dict[int, frozenset[int]] = {}
    for v in reversed(dag.topological_order):
        acc = set()
        for w in dag.successors[v]:
            acc.add(w)
            acc |= desc[w]
        desc[v] = frozenset(acc)
    return desc


def canonical_form(dag: PQDag, transitive: bool = True):
    """Label-based form for comparing dags built from different flows.

    Supernodes are named by their residue sets, so two dags compare equal
    exactly when they group residues the same way and (with ``transitive``)
    impose the same order between groups.
    """
    name = {v: frozenset(dag.members[v]) for v in range(len(dag.members))}
    if transitive:
        reach = reachability(dag)
        rel = frozenset((name[u], name[w]) for u, ws in reach.items() for w in ws)
    else:
        rel = frozenset((name[u], name[w]) for u, w in dag.interior_edges)
    return name[SOURCE_NODE], name[SINK_NODE], frozenset(name[v] for v in dag.interior), rel


def to_dot(dag: PQDag) -> str:
    lines = ["digraph pq {"]
    for v, group in enumerate(dag.members):
        label = "s'" if v == SOURCE_NODE else "t'" if v == SINK_NODE else f"n{v}"
        residues = " ".join(map(str, group)) or "-"
        attrs = f'label="{label}: {residues}"'
        if v in (SOURCE_NODE, SINK_NODE):
            attrs += ", shape=box"
        lines.append(f"  {v} [{attrs}];")
    for u, v in sorted(dag.edges):
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
