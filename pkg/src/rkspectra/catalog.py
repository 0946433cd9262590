"""Canonical RK lattices Q_k x L_{s,3} and their limit-model counts.

A signature ``(k, s)`` names the disjoint union of ``k`` copies of the
three-model theory and ``s`` copies of the six-model theory. Its lattice has
one node per coordinate ``(a, b)`` with ``a`` in {0,1}^k and ``b`` in
{0,1,2}^s, ordered componentwise. Over a node with ``t`` ones in ``a`` and
``m`` twos in ``b`` there are ``2**t * 4**m - 1`` limit models.
"""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterator, Mapping
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

from .poset import (
    LabeledPreorder,
    are_isomorphic,
    make_preorder,
    product_name,
    quotient_rk,
)

__all__ = [
    "CountReport",
    "DecompositionReport",
    "InconsistentReport",
    "LimitTerm",
    "NodeCoord",
    "TheorySignature",
    "build_t1",
    "build_t2",
    "build_theory",
    "closed_form_counts",
    "compose_counts",
    "counts_from_preorder",
    "decomposition_report",
    "format_identity",
    "identify",
    "il_closed_form",
    "total_limit_count",
    "validate_count",
]

COORD_SEPARATOR = "|"


@dataclass(frozen=True, order=True)
class TheorySignature:
    k: int
    s: int

    def __post_init__(self) -> None:
        for name in ("k", "s"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def model_count(self) -> int:
        return 3**self.k * 6**self.s

    @property
    def node_count(self) -> int:
        return 2**self.k * 3**self.s

    def __add__(self, other: TheorySignature) -> TheorySignature:
        return TheorySignature(self.k + other.k, self.s + other.s)

    def __str__(self) -> str:
        return f"({self.k},{self.s})"


def _sig(sig: TheorySignature | tuple[int, int]) -> TheorySignature:
    return sig if isinstance(sig, TheorySignature) else TheorySignature(*sig)


@dataclass(frozen=True)
class NodeCoord:
    """Coordinate of one lattice node: ``a`` over {0,1}, ``b`` over {0,1,2}.

    On a ``b`` axis, 1 means a unique realization of the axis type and 2
    means infinitely many realizations including a least and a greatest one.
    """

    a: tuple[int, ...] = ()
    b: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(x not in (0, 1) for x in self.a):
            raise ValueError(f"a-digits must be 0 or 1: {self.a!r}")
        if any(x not in (0, 1, 2) for x in self.b):
            raise ValueError(f"b-digits must be 0, 1 or 2: {self.b!r}")

    @property
    def t(self) -> int:
        return sum(self.a)

    @property
    def m(self) -> int:
        return self.b.count(2)

    @property
    def r(self) -> int:
        return self.b.count(1)

    @property
    def ident(self) -> str:
        return "".join(map(str, self.a)) + COORD_SEPARATOR + "".join(map(str, self.b))

    @classmethod
    def parse(cls, ident: str) -> NodeCoord:
        head, sep, tail = ident.partition(COORD_SEPARATOR)
        digits = head + tail
        if not sep or (digits and not digits.isdigit()):
            raise ValueError(f"not a lattice coordinate: {ident!r}")
        return cls(tuple(map(int, head)), tuple(map(int, tail)))

    def below(self, other: NodeCoord) -> bool:
        """Componentwise ``<=``."""
        return all(x <= y for x, y in zip(self.a, other.a)) and all(
            x <= y for x, y in zip(self.b, other.b)
        )

    def join(self, other: NodeCoord) -> NodeCoord:
        """Coordinate in the lattice of the combined signature (T1 axes first)."""
        return NodeCoord(self.a + other.a, self.b + other.b)

    def __str__(self) -> str:
        return self.ident


def iter_coords(sig: TheorySignature | tuple[int, int]) -> Iterator[NodeCoord]:
    """All coordinates of ``sig`` in lexicographic order, ``a`` digits first."""
    sig = _sig(sig)
    for digits in itertools.product(*([(0, 1)] * sig.k + [(0, 1, 2)] * sig.s)):
        yield NodeCoord(digits[: sig.k], digits[sig.k :])


def il_closed_form(t: int, m: int) -> int:
    """Limit models over a node with ``t`` realized T1 types and ``m`` interval T2 types."""
    if t < 0 or m < 0:
        raise ValueError("t and m must be non-negative")
    return 2**t * 4**m - 1


def build_theory(sig: TheorySignature | tuple[int, int]) -> LabeledPreorder:
    """Lattice of ``sig`` with covers as generators; node ids are ``NodeCoord.ident``."""
    sig = _sig(sig)
    k = sig.k
    tops = "1" * k + "2" * sig.s
    names, labels, covers = [], {}, []
    for digits in itertools.product(*(["01"] * k + ["012"] * sig.s)):
        word = "".join(digits)
        ident = word[:k] + COORD_SEPARATOR + word[k:]
        names.append(ident)
        labels[ident] = il_closed_form(word[:k].count("1"), word[k:].count("2"))
        for i, x in enumerate(word):
            if x != tops[i]:
                up = word[:i] + chr(ord(x) + 1) + word[i + 1 :]
                covers.append((ident, up[:k] + COORD_SEPARATOR + up[k:]))
    return make_preorder(names, covers, labels, canonical=True, check_canonical=False)


def build_t1() -> LabeledPreorder:
    """Two-element chain labelled 0, 1."""
    return build_theory(TheorySignature(1, 0))


def build_t2() -> LabeledPreorder:
    """Three-element chain labelled 0, 0, 3."""
    return build_theory(TheorySignature(0, 1))


class LimitTerm(NamedTuple):
    """One ``(t, m)`` summand: ``multiplicity`` node types, ``per_type`` limit models each."""

    t: int
    m: int
    multiplicity: int
    per_type: int

    @property
    def value(self) -> int:
        return self.multiplicity * self.per_type

    def factors(self, sig: TheorySignature) -> list[int]:
        # Same factor layout as the printed identities: the 2**(s-m) and C(s,m)
        # factors appear only when s > 0, C(k,t) only when k > 0.
        out = []
        if sig.s:
            out.append(2 ** (sig.s - self.m))
        out.append(self.per_type)
        if sig.k:
            out.append(comb(sig.k, self.t))
        if sig.s:
            out.append(comb(sig.s, self.m))
        return out


@dataclass(frozen=True)
class DecompositionReport:
    signature: TheorySignature
    total: int
    prime_count: int
    limit_terms: tuple[LimitTerm, ...]
    limit_total: int
    balanced: bool

    def nonzero_terms(self) -> list[LimitTerm]:
        return [term for term in self.limit_terms if term.value]


def decomposition_report(sig: TheorySignature | tuple[int, int]) -> DecompositionReport:
    """Both sides of ``3^k 6^s = 2^k 3^s + sum_{t,m} 2^(s-m) (2^t 4^m - 1) C(k,t) C(s,m)``.

    Terms are ordered by ``m`` then ``t``.
    """
    sig = _sig(sig)
    k, s = sig.k, sig.s
    total = 3**k * 6**s
    prime = 2**k * 3**s
    ck = [comb(k, t) for t in range(k + 1)]
    weight = [2 ** (s - m) * comb(s, m) for m in range(s + 1)]
    terms = tuple(
        LimitTerm(t, m, weight[m] * ck[t], (1 << (t + 2 * m)) - 1)
        for m in range(s + 1)
        for t in range(k + 1)
    )
    limit_total = sum(term.multiplicity * term.per_type for term in terms)
    balanced = total == prime + limit_total and total == sig.model_count and prime == sig.node_count
    return DecompositionReport(sig, total, prime, terms, limit_total, balanced)


def format_identity(report: DecompositionReport, *, expand: bool = True) -> str:
    """``"27 = 8 + 1·3 + 3·3 + 7·1"`` (expanded) or ``"27 = 8 + 19"``."""
    head = f"{report.total} = {report.prime_count}"
    terms = report.nonzero_terms()
    if not expand or not terms:
        return f"{head} + {report.limit_total}"
    body = " + ".join("·".join(map(str, term.factors(report.signature))) for term in terms)
    return f"{head} + {body}"


def total_limit_count(sig: TheorySignature | tuple[int, int]) -> int:
    sig = _sig(sig)
    value = 3**sig.k * 6**sig.s - 2**sig.k * 3**sig.s
    summed = decomposition_report(sig).limit_total
    assert value == summed, f"limit count mismatch for {sig}: {value} != {summed}"
    return value


def validate_count(n: int) -> TheorySignature | None:
    """Return the unique ``(k, s)`` with ``3^k 6^s == n``, if any."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"expected an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"model count must be positive, got {n}")
    twos = (n & -n).bit_length() - 1
    rest = n >> twos
    threes = 0
    while rest % 3 == 0:
        rest //= 3
        threes += 1
    if rest != 1 or threes < twos:
        return None
    return TheorySignature(threes - twos, twos)


def _signatures_with_nodes(n: int) -> Iterator[TheorySignature]:
    s, power = 0, 1
    while power <= n:
        if n % power == 0:
            rest = n // power
            if rest & (rest - 1) == 0:
                yield TheorySignature(rest.bit_length() - 1, s)
        s += 1
        power *= 3


def identify(p: LabeledPreorder) -> TheorySignature | None:
    """Signature whose canonical lattice is IL-isomorphic to ``p`` after quotienting."""
    q = quotient_rk(p)
    for sig in _signatures_with_nodes(len(q)):
        if are_isomorphic(q, build_theory(sig)) is not None:
            return sig
    return None


class InconsistentReport(ValueError):
    pass


@dataclass(frozen=True)
class CountReport:
    """Model counts of one theory.

    ``per_node`` maps a node (a :class:`NodeCoord` for signature-based
    reports, an identifier for reports read off a preorder) to the number
    of limit models over it.
    """

    signature: TheorySignature | None
    total: int
    prime_count: int
    limit_count: int
    per_node: Mapping[Hashable, int] = field(default_factory=dict)

    def is_consistent(self) -> bool:
        if self.total != self.prime_count + self.limit_count:
            return False
        if self.per_node and sum(self.per_node.values()) != self.limit_count:
            return False
        return self.prime_count >= 1 and self.limit_count >= 0


def closed_form_counts(sig: TheorySignature | tuple[int, int]) -> CountReport:
    sig = _sig(sig)
    per_node = {c: il_closed_form(c.t, c.m) for c in iter_coords(sig)}
    return CountReport(
        sig, sig.model_count, sig.node_count, total_limit_count(sig), per_node
    )


def counts_from_preorder(
    p: LabeledPreorder, signature: TheorySignature | None = None
) -> CountReport:
    """Counts read node by node: one prime model per node plus its IL."""
    per_node = {x: p.il[x] for x in p.nodes}
    limit = sum(per_node.values())
    return CountReport(signature, len(p) + limit, len(p), limit, per_node)


def _join_keys(x: Hashable, y: Hashable) -> Hashable:
    if isinstance(x, NodeCoord) and isinstance(y, NodeCoord):
        return x.join(y)
    return product_name(str(x), str(y))


def compose_counts(r1: CountReport, r2: CountReport) -> CountReport:
    """Counts for the disjoint union of two theories.

    Primes multiply; a model is limit iff some restriction is limit, so
    ``limit = l1*p2 + p1*l2 + l1*l2``.
    """
    for r in (r1, r2):
        if not r.is_consistent():
            raise InconsistentReport(f"inconsistent count report: {r}")
    p1, l1, p2, l2 = r1.prime_count, r1.limit_count, r2.prime_count, r2.limit_count
    prime = p1 * p2
    limit = l1 * p2 + p1 * l2 + l1 * l2
    total = r1.total * r2.total
    assert total == prime + limit
    signature = None
    if r1.signature is not None and r2.signature is not None:
        signature = r1.signature + r2.signature
    per_node: dict[Hashable, int] = {}
    if r1.per_node and r2.per_node:
        for x, u in r1.per_node.items():
            for y, v in r2.per_node.items():
                per_node[_join_keys(x, y)] = (u + 1) * (v + 1) - 1
    return CountReport(signature, total, prime, limit, per_node)
