"""Discrete causal DAGs with latent marking, mutilation and d-separation."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import CycleError, OverlappingSets, UnknownVariable


@dataclass(frozen=True)
class VariableDecl:
    name: str
    observed: bool = True
    cardinality: int = 2

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")
        if int(self.cardinality) != self.cardinality or self.cardinality < 2:
            raise ValueError(
                f"cardinality of {self.name!r} must be an integer >= 2, "
                f"got {self.cardinality!r}"
            )


class Mutilation(enum.Enum):
    REMOVE_INCOMING = "incoming"
    REMOVE_OUTGOING = "outgoing"


RemoveIncoming = Mutilation.REMOVE_INCOMING
RemoveOutgoing = Mutilation.REMOVE_OUTGOING


def _toposort(names, edges):
    """Kahn's algorithm, ties broken by declaration order."""
    position = {n: i for i, n in enumerate(names)}
    children = {n: [] for n in names}
    indegree = dict.fromkeys(names, 0)
    for p, c in edges:
        children[p].append(c)
        indegree[c] += 1
    ready = [n for n in names if indegree[n] == 0]
    order = []
    while ready:
        ready.sort(key=position.__getitem__)
        node = ready.pop(0)
        order.append(node)
        for c in children[node]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    if len(order) < len(names):
        raise CycleError(_find_cycle(names, children, set(order)))
    return tuple(order)


def _find_cycle(names, children, acyclic):
    # every leftover node has an in-edge from another leftover node, so
    # walking backwards along those edges must revisit a node
    leftover = [n for n in names if n not in acyclic]
    parent_of = {}
    for p in leftover:
        for c in children[p]:
            if c not in acyclic:
                parent_of.setdefault(c, p)
    node, seen = leftover[0], []
    while node not in seen:
        seen.append(node)
        node = parent_of[node]
    cycle = seen[seen.index(node):]
    cycle.reverse()
    return cycle + [cycle[0]]


@dataclass(frozen=True)
class CausalGraph:
    """Immutable DAG over named discrete variables.

    ``variables`` and ``edges`` keep declaration order so that every derived
    output (topological order, serializations) is reproducible.
    """

    variables: tuple[VariableDecl, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()
    _order: tuple[str, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        edges = tuple((str(p), str(c)) for p, c in self.edges)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "edges", edges)

        index = {}
        for v in variables:
            if v.name in index:
                raise ValueError(f"duplicate variable name {v.name!r}")
            index[v.name] = v
        seen = set()
        for p, c in edges:
            for n in (p, c):
                if n not in index:
                    raise UnknownVariable(n)
            if p == c:
                raise CycleError([p, p])
            if (p, c) in seen:
                raise ValueError(f"duplicate edge {p} -> {c}")
            seen.add((p, c))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_order", _toposort([v.name for v in variables], edges))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], latent=(), cardinality=None):
        """Build a graph, declaring variables in order of first appearance."""
        cardinality = cardinality or {}
        names = []
        edges = list(edges)
        for p, c in edges:
            for n in (p, c):
                if n not in names:
                    names.append(n)
        for n in list(latent) + list(cardinality):
            if n not in names:
                names.append(n)
        decls = [
            VariableDecl(n, observed=n not in latent, cardinality=cardinality.get(n, 2))
            for n in names
        ]
        return cls(tuple(decls), tuple(edges))

    # -- lookups ----------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def observed(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.observed)

    @property
    def latent(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if not v.observed)

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.variables)

    def var(self, name: str) -> VariableDecl:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def card(self, name: str) -> int:
        return self.var(name).cardinality

    def check(self, names: Iterable[str]) -> None:
        for n in names:
            if n not in self._index:
                raise UnknownVariable(n)

    def parents(self, name: str) -> tuple[str, ...]:
        """Parents of ``name`` in variable declaration order."""
        self.var(name)
        ps = {p for p, c in self.edges if c == name}
        return tuple(n for n in self.names if n in ps)

    def children(self, name: str) -> tuple[str, ...]:
        self.var(name)
        cs = {c for p, c in self.edges if p == name}
        return tuple(n for n in self.names if n in cs)

    def descendants(self, name: str) -> set[str]:
        """Strict descendants of ``name``."""
        out, stack = set(), [name]
        while stack:
            for c in self.children(stack.pop()):
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    def ancestors(self, names) -> set[str]:
        """Ancestors of a node set, including the set itself."""
        if isinstance(names, str):
            names = [names]
        out, stack = set(names), list(names)
        while stack:
            for p in self.parents(stack.pop()):
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return out

    def topological_order(self) -> tuple[str, ...]:
        return self._order

    def with_edges(self, edges) -> "CausalGraph":
        return CausalGraph(self.variables, tuple(edges))

    def has_directed_path(self, source: str, target: str, avoiding=()) -> bool:
        """True when a directed path source -> ... -> target exists whose
        intermediate nodes all lie outside ``avoiding``."""
        avoiding = set(avoiding)
        stack, seen = [source], {source}
        while stack:
            for c in self.children(stack.pop()):
                if c == target:
                    return True
                if c not in seen and c not in avoiding:
                    seen.add(c)
                    stack.append(c)
        return False


def validate_dag(graph: CausalGraph) -> list[str]:
    """Return a topological order of ``graph`` (parents before children).

    Construction of a :class:`CausalGraph` already rejects cycles and
    undeclared names, so this re-runs the check on the stored edges.
    """
    return list(_toposort(list(graph.names), graph.edges))


def mutilate(graph: CausalGraph, target, mode: Mutilation) -> CausalGraph:
    """Delete every edge into (or out of) ``target``.

    ``target`` may be a single name or an iterable of names.
    """
    targets = {target} if isinstance(target, str) else set(target)
    graph.check(targets)
    if mode is Mutilation.REMOVE_INCOMING:
        kept = [(p, c) for p, c in graph.edges if c not in targets]
    elif mode is Mutilation.REMOVE_OUTGOING:
        kept = [(p, c) for p, c in graph.edges if p not in targets]
    else:
        raise ValueError(f"unknown mutilation mode {mode!r}")
    return graph.with_edges(kept)


def _as_set(names):
    if isinstance(names, str):
        return {names}
    return set(names)


def d_separated(graph: CausalGraph, set_a, set_b, given=()) -> bool:
    """Test whether ``set_a`` and ``set_b`` are d-separated by ``given``.

    Uses the reachability formulation (Bayes ball): a trail may pass up
    through any unobserved node, down through any unobserved node, and turn
    at a collider only when the collider has a descendant in ``given``.
    """
    a, b, z = _as_set(set_a), _as_set(set_b), _as_set(given)
    graph.check(a | b | z)
    if a & b or a & z or b & z:
        raise OverlappingSets(
            f"sets must be disjoint: {sorted(a)}, {sorted(b)}, {sorted(z)}"
        )
    if not a or not b:
        return True

    anc_z = graph.ancestors(z) if z else set()
    up, down = "up", "down"
    # (node, direction of travel): "up" means we arrived from a child
    queue = deque((x, up) for x in sorted(a))
    visited = set()
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in z and node in b:
            return False
        if direction == up and node not in z:
            queue.extend((p, up) for p in graph.parents(node))
            queue.extend((c, down) for c in graph.children(node))
        elif direction == down:
            if node not in z:
                queue.extend((c, down) for c in graph.children(node))
            if node in anc_z:
                queue.extend((p, up) for p in graph.parents(node))
    return True
