"""Smallest additive basis of a set of offsets, by exhaustive search.

A basis ``B`` covers a target ``C`` when ``C`` is the sum of some subset of
distinct members of ``B``. Its size bounds the rounds of a one-ported,
fully connected schedule, hence the interest in the minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class SearchSpaceExceeded(RuntimeError):
    pass


def _as_vector(t) -> Vector:
    if isinstance(t, int):
        return (t,)
    return tuple(int(x) for x in t)


def _vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def subset_sums(vectors: Sequence[Vector]) -> dict[Vector, tuple[int, ...]]:
    """Map each reachable sum to the (first found) index subset producing it."""
    d = len(vectors[0]) if vectors else 0
    sums: dict[Vector, tuple[int, ...]] = {(0,) * d: ()}
    for k, v in enumerate(vectors):
        for total, idx in list(sums.items()):
            sums.setdefault(_vadd(total, v), idx + (k,))
    return sums


@dataclass(frozen=True)
class AdditiveBasis:
    vectors: tuple[Vector, ...]

    def __len__(self):
        return len(self.vectors)

    def decompose(self, target) -> tuple[Vector, ...] | None:
        target = _as_vector(target)
        if not self.vectors:
            return () if not any(target) else None
        idx = subset_sums(self.vectors).get(target)
        return None if idx is None else tuple(self.vectors[k] for k in idx)


def is_additive_basis(basis: Iterable, targets: Iterable) -> bool:
    vectors = tuple(_as_vector(b) for b in basis)
    if len(set(vectors)) != len(vectors):
        return False
    b = AdditiveBasis(vectors)
    return all(b.decompose(t) is not None for t in targets)


def _universe(targets: list[Vector]) -> list[Vector]:
    d = len(targets[0])
    ranges = []
    for j in range(d):
        lo = min(0, min(t[j] for t in targets))
        hi = max(0, max(t[j] for t in targets))
        ranges.append(range(lo, hi + 1))
    return [v for v in product(*ranges) if any(v)]


def find_min_additive_basis(
    targets: Iterable,
    max_basis_size: int = 8,
    max_candidates: int = 2_000_000,
) -> AdditiveBasis:
    """Return a minimum-cardinality basis; ties go to the lexicographically least.

    Candidate vectors are restricted to the bounding box of the targets (and
    the origin), so minimality is over that universe. Raises
    ``SearchSpaceExceeded`` when no basis of size ``<= max_basis_size`` exists
    in the universe or more than ``max_candidates`` bases would be examined.
    """
    goal = sorted({_as_vector(t) for t in targets})
    if goal and len({len(t) for t in goal}) != 1:
        raise ValueError("targets have mixed dimensions")
    goal = [t for t in goal if any(t)]
    if not goal:
        return AdditiveBasis(())
    universe = _universe(goal)
    need = set(goal)
    # k vectors give at most 2^k - 1 distinct nonzero sums
    lower = math.ceil(math.log2(len(goal) + 1))
    examined = 0
    for k in range(lower, min(max_basis_size, len(universe)) + 1):
        budget = math.comb(len(universe), k)
        if examined + budget > max_candidates:
            raise SearchSpaceExceeded(
                f"size-{k} search over {len(universe)} candidates exceeds {max_candidates} bases"
            )
        examined += budget
        for combo in combinations(universe, k):
            if need <= subset_sums(combo).keys():
                return AdditiveBasis(combo)
    raise SearchSpaceExceeded(f"no additive basis of size <= {max_basis_size} in the candidate universe")
