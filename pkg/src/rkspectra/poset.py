"""Finite preorders carrying a non-negative integer label per node.

Nodes are opaque strings. The order is stored as a list of generating pairs;
the reflexive-transitive closure is computed lazily as one bitmask per node
(bit ``j`` of ``up[i]`` is set iff ``nodes[i] <= nodes[j]``).
"""

from __future__ import annotations

import sys
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType

__all__ = [
    "IsoWitness",
    "LabeledPreorder",
    "PreorderError",
    "are_isomorphic",
    "hasse_edges",
    "make_preorder",
    "pareto_product",
    "quotient_rk",
    "verify_witness",
]

PRODUCT_SEPARATOR = "*"
_ESCAPE = "\\"


class PreorderError(ValueError):
    """Raised when nodes, pairs or labels do not describe a valid structure."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class LabeledPreorder:
    """A validated finite preorder with an IL count on every node.

    Build instances with :func:`make_preorder`; the constructor does no
    validation. Equality compares node lists, labels and the closed order,
    so two instances built from different generators of the same order are
    equal.
    """

    nodes: tuple[str, ...]
    generators: tuple[tuple[str, str], ...]
    il: Mapping[str, int]
    canonical: bool = False
    index: Mapping[str, int] = field(repr=False, default_factory=dict)

    @cached_property
    def up(self) -> tuple[int, ...]:
        return _closure(len(self.nodes), self._generator_indices())

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * len(self.nodes)
        for i, mask in enumerate(self.up):
            for j in _bits(mask):
                down[j] |= 1 << i
        return tuple(down)

    @property
    def leq(self) -> frozenset[tuple[str, str]]:
        """The full closed relation as a set of pairs (quadratic in size)."""
        names = self.nodes
        return frozenset(
            (names[i], names[j]) for i, mask in enumerate(self.up) for j in _bits(mask)
        )

    def le(self, x: str, y: str) -> bool:
        return bool(self.up[self.index[x]] >> self.index[y] & 1)

    def label(self, i: int) -> int:
        return self.il[self.nodes[i]]

    def is_antisymmetric(self) -> bool:
        up, down = self.up, self.down
        return all(up[i] & down[i] == 1 << i for i in range(len(self.nodes)))

    def _generator_indices(self) -> list[tuple[int, int]]:
        index = self.index
        return [(index[x], index[y]) for x, y in self.generators]

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledPreorder):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and dict(self.il) == dict(other.il)
            and self.up == other.up
        )

    def __hash__(self) -> int:
        return hash((self.nodes, tuple(self.il[x] for x in self.nodes)))


def _closure(n: int, edges: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Reflexive-transitive closure via Tarjan SCCs, processed in reverse topological order."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        if i != j:
            succ[i].append(j)

    counter = 0
    order = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    comps: list[list[int]] = []

    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        order[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if order[w] == -1:
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], order[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == order[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    members.append(w)
                    if w == v:
                        break
                comps.append(members)

    # Tarjan emits components in reverse topological order: successors first.
    comp_up = [0] * len(comps)
    for c, members in enumerate(comps):
        mask = 0
        for v in members:
            mask |= 1 << v
        for v in members:
            for w in succ[v]:
                d = comp_of[w]
                if d != c:
                    mask |= comp_up[d]
        comp_up[c] = mask
    return tuple(comp_up[comp_of[v]] for v in range(n))


def make_preorder(
    nodes: Iterable[str],
    pairs: Iterable[tuple[str, str]],
    il: Mapping[str, int],
    *,
    canonical: bool = False,
    check_canonical: bool = True,
) -> LabeledPreorder:
    """Validate the inputs and return the preorder generated by ``pairs``.

    With ``canonical=True`` the result must also be a partial order with a
    unique least element labelled 0. Constructors that guarantee this by
    construction pass ``check_canonical=False`` to keep the closure lazy.
    """
    nodes = tuple(nodes)
    if not nodes:
        raise PreorderError("a preorder needs at least one node")
    index: dict[str, int] = {}
    for i, x in enumerate(nodes):
        if not isinstance(x, str):
            raise PreorderError(f"node identifiers must be strings, got {x!r}")
        if x in index:
            raise PreorderError(f"duplicate node identifier {x!r}")
        index[x] = i

    labels: dict[str, int] = {}
    for x in nodes:
        if x not in il:
            raise PreorderError(f"no IL value for node {x!r}")
        value = il[x]
        if isinstance(value, bool) or not isinstance(value, int):
            raise PreorderError(f"IL value of {x!r} must be an integer, got {value!r}")
        if value < 0:
            raise PreorderError(f"IL value of {x!r} is negative: {value}")
        labels[x] = value
    extra = set(il) - set(index)
    if extra:
        raise PreorderError(f"IL values given for unknown nodes: {sorted(extra)}")

    gens = []
    for pair in pairs:
        x, y = pair
        for end in (x, y):
            if end not in index:
                raise PreorderError(f"pair {pair!r} mentions unknown node {end!r}")
        gens.append((x, y))

    p = LabeledPreorder(
        nodes=nodes,
        generators=tuple(gens),
        il=MappingProxyType(labels),
        canonical=canonical,
        index=MappingProxyType(index),
    )
    if canonical and check_canonical:
        _check_canonical(p)
    return p


def _check_canonical(p: LabeledPreorder) -> None:
    if not p.is_antisymmetric():
        raise PreorderError("canonical structure must be antisymmetric")
    full = (1 << len(p.nodes)) - 1
    least = [i for i, mask in enumerate(p.up) if mask == full]
    if len(least) != 1:
        raise PreorderError("canonical structure needs a unique least element")
    if p.label(least[0]) != 0:
        raise PreorderError("least element of a canonical structure must have IL 0")


def quotient_rk(p: LabeledPreorder) -> LabeledPreorder:
    """Collapse each class of mutually comparable nodes to one node.

    A class is named after its smallest member identifier and labelled with
    the sum of the members' IL values. Antisymmetric inputs are returned as is.
    """
    if p.is_antisymmetric():
        return p
    up, down = p.up, p.down
    rep: dict[int, int] = {}
    for i in range(len(p.nodes)):
        members = list(_bits(up[i] & down[i]))
        rep[i] = min(members, key=lambda j: p.nodes[j])
    names = {i: p.nodes[r] for i, r in rep.items()}
    class_nodes = [p.nodes[i] for i in range(len(p.nodes)) if rep[i] == i]
    labels = dict.fromkeys(class_nodes, 0)
    for i in range(len(p.nodes)):
        labels[names[i]] += p.label(i)
    pairs = {
        (names[p.index[x]], names[p.index[y]])
        for x, y in p.generators
        if names[p.index[x]] != names[p.index[y]]
    }
    return make_preorder(class_nodes, sorted(pairs), labels)


def hasse_edges(p: LabeledPreorder) -> list[tuple[str, str]]:
    """Covering pairs ``(x, y)``, sorted by identifier."""
    if not p.is_antisymmetric():
        raise PreorderError("Hasse edges need a partial order; apply quotient_rk first")
    up = p.up
    strict = [mask & ~(1 << i) for i, mask in enumerate(up)]
    edges = []
    for i, above in enumerate(strict):
        covers = above
        for j in _bits(above):
            covers &= ~strict[j]
            if not covers:
                break
        edges.extend((p.nodes[i], p.nodes[j]) for j in _bits(covers))
    edges.sort()
    return edges


def _escape(name: str) -> str:
    return name.replace(_ESCAPE, _ESCAPE * 2).replace(PRODUCT_SEPARATOR, _ESCAPE + PRODUCT_SEPARATOR)


def product_name(x: str, y: str) -> str:
    return f"{_escape(x)}{PRODUCT_SEPARATOR}{_escape(y)}"


def pareto_product(p: LabeledPreorder, q: LabeledPreorder) -> LabeledPreorder:
    """Componentwise order on ``p x q``.

    IL composes as ``(il_p + 1) * (il_q + 1) - 1``: a model of the disjoint
    union is prime only when both restrictions are.
    """
    names = {(x, y): product_name(x, y) for x in p.nodes for y in q.nodes}
    labels = {
        names[x, y]: (p.il[x] + 1) * (q.il[y] + 1) - 1 for x in p.nodes for y in q.nodes
    }
    gens = [(names[a, y], names[b, y]) for a, b in p.generators for y in q.nodes]
    gens += [(names[x, a], names[x, b]) for x in p.nodes for a, b in q.generators]
    both = p.canonical and q.canonical
    return make_preorder(names.values(), gens, labels, canonical=both, check_canonical=not both)


@dataclass(frozen=True)
class IsoWitness:
    mapping: Mapping[str, str]


def _signature(p: LabeledPreorder, i: int) -> tuple[int, int, int]:
    # (il, number strictly below, number strictly above)
    return (p.label(i), p.down[i].bit_count() - 1, p.up[i].bit_count() - 1)


def are_isomorphic(p: LabeledPreorder, q: LabeledPreorder) -> IsoWitness | None:
    """Find an IL-preserving order isomorphism from ``p`` onto ``q``.

    Backtracking over targets sorted by (il, in-degree, out-degree, id);
    source nodes are placed from the bottom up so each new node is checked
    against already-placed comparable nodes.
    """
    n = len(p.nodes)
    if n != len(q.nodes):
        return None
    sig_p = [_signature(p, i) for i in range(n)]
    sig_q = [_signature(q, j) for j in range(n)]
    if sorted(sig_p) != sorted(sig_q):
        return None

    source = sorted(range(n), key=lambda i: (sig_p[i][1], p.nodes[i]))
    candidates: dict[tuple[int, int, int], list[int]] = {}
    for j in sorted(range(n), key=lambda j: (sig_q[j], q.nodes[j])):
        candidates.setdefault(sig_q[j], []).append(j)

    up_p, down_p, up_q, down_q = p.up, p.down, q.up, q.down
    image = [-1] * n
    used = [False] * n
    placed: list[int] = []

    def fits(i: int, j: int) -> bool:
        for u in placed:
            v = image[u]
            if bool(up_p[i] >> u & 1) != bool(up_q[j] >> v & 1):
                return False
            if bool(down_p[i] >> u & 1) != bool(down_q[j] >> v & 1):
                return False
        return True

    def search(depth: int) -> bool:
        if depth == n:
            return True
        i = source[depth]
        for j in candidates[sig_p[i]]:
            if used[j] or not fits(i, j):
                continue
            image[i], used[j] = j, True
            placed.append(i)
            if search(depth + 1):
                return True
            placed.pop()
            image[i], used[j] = -1, False
        return False

    limit = sys.getrecursionlimit()
    if n + 100 > limit:
        sys.setrecursionlimit(n + 100)
    try:
        found = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return None
    return IsoWitness({p.nodes[i]: q.nodes[image[i]] for i in range(n)})


def verify_witness(p: LabeledPreorder, q: LabeledPreorder, witness: IsoWitness) -> bool:
    """Check a witness pair by pair, independently of the search."""
    f = witness.mapping
    if set(f) != set(p.nodes) or sorted(f.values()) != sorted(q.nodes):
        return False
    if any(p.il[x] != q.il[f[x]] for x in p.nodes):
        return False
    return all(p.le(x, y) == q.le(f[x], f[y]) for x in p.nodes for y in p.nodes)
