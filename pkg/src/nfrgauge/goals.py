"""Soft-goal forests: validation, weighted satisfaction propagation, conflicts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import ArgumentError, CycleError, GoalReferenceError, ValidationError

DEFAULT_THRESHOLD = 0.7


@dataclass(frozen=True)
class SoftGoalNode:
    id: str
    weight: float = 1.0
    children: Tuple[str, ...] = ()
    leaf: Optional[str] = None  # bound requirement id
    threshold: float = DEFAULT_THRESHOLD
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not (self.weight > 0) or math.isinf(self.weight):
            raise ValidationError(f"weight of goal {self.id} must be positive and finite, got {self.weight}")
        if self.children and self.leaf is not None:
            raise ValidationError(f"goal {self.id} has both children and a leaf binding")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValidationError(f"threshold of goal {self.id} must lie in [0, 1], got {self.threshold}")

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None


@dataclass(frozen=True)
class Forest:
    nodes: Tuple[SoftGoalNode, ...]
    roots: Tuple[str, ...]
    order: Tuple[str, ...]  # children before parents

    def node(self, node_id: str) -> SoftGoalNode:
        return self._index[node_id]

    @cached_property
    def _index(self) -> Dict[str, SoftGoalNode]:
        return {n.id: n for n in self.nodes}


def validate_forest(nodes: Sequence[SoftGoalNode]) -> Forest:
    """Check ids, child references, single parents and acyclicity.

    Returns the forest with roots in declaration order and a bottom-up
    evaluation order.
    """
    index: Dict[str, SoftGoalNode] = {}
    for n in nodes:
        if n.id in index:
            raise GoalReferenceError(f"duplicate goal id {n.id}")
        index[n.id] = n

    parent: Dict[str, str] = {}
    for n in nodes:
        seen = set()
        for c in n.children:
            if c in seen:
                raise GoalReferenceError(f"goal {n.id} lists child {c} more than once")
            seen.add(c)
            if c not in index:
                raise GoalReferenceError(f"goal {n.id} references undefined child {c}")

    # cycles first, so a 2-cycle reports as a cycle rather than a double parent
    state: Dict[str, int] = {}
    for start in index:
        if state.get(start):
            continue
        stack = [(start, iter(index[start].children))]
        path = [start]
        state[start] = 1
        while stack:
            nid, it = stack[-1]
            child = next(it, None)
            if child is None:
                state[nid] = 2
                stack.pop()
                path.pop()
                continue
            if state.get(child) == 1:
                raise CycleError(path[path.index(child):])
            if not state.get(child):
                state[child] = 1
                stack.append((child, iter(index[child].children)))
                path.append(child)

    for n in nodes:
        for c in n.children:
            if c in parent:
                raise GoalReferenceError(f"goal {c} has two parents: {parent[c]} and {n.id}")
            parent[c] = n.id

    roots = tuple(n.id for n in nodes if n.id not in parent)
    order = []
    for r in roots:
        stack = [(r, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                order.append(nid)
                continue
            stack.append((nid, True))
            for c in reversed(index[nid].children):
                stack.append((c, False))
    return Forest(tuple(nodes), roots, tuple(order))


def propagate(
    forest: Forest, leaf_satisfactions: Mapping[str, float], partial: bool = False
) -> Dict[str, float]:
    """Bottom-up weighted average of child satisfactions.

    With ``partial`` set, leaves whose requirement has no satisfaction are
    dropped from their parent's average, and nodes left with no evaluable
    descendants are omitted from the result instead of raising.
    """
    index = forest._index
    values: Dict[str, float] = {}
    for nid in forest.order:
        node = index[nid]
        if node.is_leaf:
            if node.leaf not in leaf_satisfactions:
                if partial:
                    continue
                raise ArgumentError(f"no satisfaction supplied for requirement {node.leaf}")
            sat = leaf_satisfactions[node.leaf]
            if not 0.0 <= sat <= 1.0:
                raise ArgumentError(f"satisfaction {sat} of requirement {node.leaf} is outside [0, 1]")
            values[nid] = float(sat)
            continue
        kids = [(values[c], index[c].weight) for c in node.children if c in values]
        if not kids:
            if partial or not node.children:
                continue
            raise ArgumentError(f"goal {nid} has no evaluable children")
        total = math.fsum(w for _, w in kids)
        avg = math.fsum(v * w for v, w in kids) / total
        vs = [v for v, _ in kids]
        values[nid] = min(max(avg, min(vs)), max(vs))
    return values


@dataclass(frozen=True)
class RootVerdict:
    id: str
    satisfied: bool
    threshold: float
    value: Optional[float]


def roots_satisfied(forest: Forest, satisfactions: Mapping[str, float]) -> Dict[str, RootVerdict]:
    out = {}
    for r in forest.roots:
        node = forest.node(r)
        value = satisfactions.get(r)
        ok = value is not None and value >= node.threshold
        out[r] = RootVerdict(r, ok, node.threshold, value)
    return out


@dataclass(frozen=True)
class ContributionLink:
    source: str
    target: str
    sign: float

    def __post_init__(self):
        if self.source == self.target:
            raise ValidationError(f"link from {self.source} to itself")
        if not -1.0 <= self.sign <= 1.0 or self.sign == 0:
            raise ValidationError(f"link sign {self.sign} must be nonzero and within [-1, 1]")


@dataclass(frozen=True)
class Conflict:
    source: str
    helps: str
    hurts: str
    signs: Tuple[float, float]


def detect_conflicts(links: Iterable[ContributionLink]) -> list:
    """Sources that help one goal while hurting a different one."""
    by_source: Dict[str, list] = {}
    for link in links:
        by_source.setdefault(link.source, []).append(link)
    out = []
    for source in sorted(by_source):
        group = by_source[source]
        pos = [lk for lk in group if lk.sign > 0]
        neg = [lk for lk in group if lk.sign < 0]
        pairs = {
            (p.target, n.target, p.sign, n.sign)
            for p in pos for n in neg if p.target != n.target
        }
        for helps, hurts, ps, ns in sorted(pairs):
            out.append(Conflict(source, helps, hurts, (ps, ns)))
    return out
