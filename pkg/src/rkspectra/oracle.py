"""Brute-force enumeration of countable models by realization pattern.

Each model of the disjoint union of ``k`` T1 copies and ``s`` T2 copies is
described by one pattern per component: how the realizations of that
component's non-principal type look inside the model. Counting these
descriptors one at a time gives totals that do not depend on any of the
closed forms in :mod:`rkspectra.catalog`, which is what makes them useful
as a cross-check.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass

from .catalog import CountReport, NodeCoord, TheorySignature, il_closed_form, iter_coords

__all__ = [
    "DEFAULT_BUDGET",
    "EnumerationBudgetExceeded",
    "Kind",
    "ModelDescriptor",
    "OracleMismatch",
    "T1Pattern",
    "T2Pattern",
    "classify",
    "enumerate_models",
    "mismatches",
    "node_of",
    "oracle_counts",
]

DEFAULT_BUDGET = 10**6


class T1Pattern(enum.IntEnum):
    ABSENT = 0
    LEAST_REALIZATION = 1
    OPEN_INTERVAL = 2


class T2Pattern(enum.IntEnum):
    ABSENT = 0
    SINGLETON = 1
    CLOSED_CLOSED = 2
    OPEN_CLOSED = 3
    CLOSED_OPEN = 4
    OPEN_OPEN = 5


class Kind(enum.Enum):
    PRIME = "prime"
    LIMIT = "limit"


# Indexed by pattern value.
_T1_IS_PRIME = (True, True, False)
_T1_LEVEL = (0, 1, 1)
_T2_IS_PRIME = (True, True, True, False, False, False)
_T2_LEVEL = (0, 1, 2, 2, 2, 2)


class EnumerationBudgetExceeded(RuntimeError):
    """The signature has more descriptors than the enumeration budget allows."""


class OracleMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class ModelDescriptor:
    t1_patterns: tuple[T1Pattern, ...]
    t2_patterns: tuple[T2Pattern, ...]

    @property
    def signature(self) -> TheorySignature:
        return TheorySignature(len(self.t1_patterns), len(self.t2_patterns))

    def restrict(self, k: int, s: int) -> tuple[ModelDescriptor, ModelDescriptor]:
        """Split into the first ``k``/``s`` components and the rest."""
        return (
            ModelDescriptor(self.t1_patterns[:k], self.t2_patterns[:s]),
            ModelDescriptor(self.t1_patterns[k:], self.t2_patterns[s:]),
        )


def _check_budget(sig: TheorySignature, budget: int) -> None:
    if sig.model_count > budget:
        raise EnumerationBudgetExceeded(
            f"signature {sig} has {sig.model_count} models, over the budget of {budget}"
        )


def _raw(sig: TheorySignature) -> Iterator[tuple[int, ...]]:
    return itertools.product(*([range(3)] * sig.k + [range(6)] * sig.s))


def enumerate_models(
    sig: TheorySignature | tuple[int, int], budget: int = DEFAULT_BUDGET
) -> Iterator[ModelDescriptor]:
    """Every descriptor once, lexicographically: T1 digits (base 3), then T2 digits (base 6)."""
    sig = sig if isinstance(sig, TheorySignature) else TheorySignature(*sig)
    _check_budget(sig, budget)
    return _descriptors(sig)


def _descriptors(sig: TheorySignature) -> Iterator[ModelDescriptor]:
    for digits in _raw(sig):
        yield ModelDescriptor(
            tuple(T1Pattern(x) for x in digits[: sig.k]),
            tuple(T2Pattern(x) for x in digits[sig.k :]),
        )


def classify(d: ModelDescriptor) -> Kind:
    """Prime iff no component shows a limit pattern."""
    prime = all(_T1_IS_PRIME[p] for p in d.t1_patterns) and all(
        _T2_IS_PRIME[p] for p in d.t2_patterns
    )
    return Kind.PRIME if prime else Kind.LIMIT


def node_of(d: ModelDescriptor) -> NodeCoord:
    return NodeCoord(
        tuple(_T1_LEVEL[p] for p in d.t1_patterns),
        tuple(_T2_LEVEL[p] for p in d.t2_patterns),
    )


def _tally(
    sig: TheorySignature, start: int = 0, stop: int | None = None
) -> tuple[Counter, Counter]:
    """Descriptor and limit counts per node level-vector, over one index range."""
    k = sig.k
    seen: Counter = Counter()
    limits: Counter = Counter()
    t1_level, t2_level = _T1_LEVEL, _T2_LEVEL
    t1_prime, t2_prime = _T1_IS_PRIME, _T2_IS_PRIME
    for digits in itertools.islice(_raw(sig), start, stop):
        levels = tuple([t1_level[x] for x in digits[:k]] + [t2_level[x] for x in digits[k:]])
        seen[levels] += 1
        if not (
            all([t1_prime[x] for x in digits[:k]]) and all([t2_prime[x] for x in digits[k:]])
        ):
            limits[levels] += 1
    return seen, limits


def oracle_counts(
    sig: TheorySignature | tuple[int, int],
    budget: int = DEFAULT_BUDGET,
    *,
    chunks: int = 1,
    check: bool = True,
) -> CountReport:
    """Count models by full enumeration.

    ``chunks`` splits the index range into independent tallies that are
    merged afterwards; the result does not depend on it. With ``check`` the
    report is compared to the closed forms and :class:`OracleMismatch` is
    raised on any difference.
    """
    sig = sig if isinstance(sig, TheorySignature) else TheorySignature(*sig)
    _check_budget(sig, budget)
    n = sig.model_count
    chunks = max(1, min(chunks, n))
    bounds = [n * i // chunks for i in range(chunks + 1)]
    seen: Counter = Counter()
    limits: Counter = Counter()
    for lo, hi in zip(bounds, bounds[1:]):
        part_seen, part_limits = _tally(sig, lo, hi)
        seen.update(part_seen)
        limits.update(part_limits)

    per_node = {}
    for levels in sorted(seen):
        coord = NodeCoord(levels[: sig.k], levels[sig.k :])
        per_node[coord] = limits.get(levels, 0)
    limit_count = sum(limits.values())
    total = sum(seen.values())
    report = CountReport(sig, total, total - limit_count, limit_count, per_node)
    if check:
        problems = mismatches(report)
        if problems:
            raise OracleMismatch("; ".join(problems))
    return report


def mismatches(report: CountReport) -> list[str]:
    """Differences between an enumerated report and the closed forms."""
    sig = report.signature
    assert sig is not None
    out = []
    expected = {
        "total": sig.model_count,
        "prime": sig.node_count,
        "limit": sig.model_count - sig.node_count,
    }
    actual = {"total": report.total, "prime": report.prime_count, "limit": report.limit_count}
    for name, value in expected.items():
        if actual[name] != value:
            out.append(f"{name}: enumerated {actual[name]}, closed form {value}")
    coords = set(iter_coords(sig))
    if set(report.per_node) != coords:
        out.append("enumerated node set differs from the lattice")
    for coord in sorted(coords & set(report.per_node), key=lambda c: c.ident):
        want = il_closed_form(coord.t, coord.m)
        if report.per_node[coord] != want:
            out.append(f"node {coord}: enumerated {report.per_node[coord]}, closed form {want}")
    return out
