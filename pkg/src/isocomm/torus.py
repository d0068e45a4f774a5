"""Geometry of a d-dimensional torus of processes.

Ranks are row-major linearizations of coordinates (last dimension varies
fastest), the same convention as an MPI Cartesian communicator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

Coord = tuple[int, ...]
Offset = tuple[int, ...]


@dataclass(frozen=True)
class TorusShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(p) for p in self.dims)
        if not dims:
            raise ValueError("torus needs at least one dimension")
        if any(p < 1 for p in dims):
            raise ValueError(f"dimension sizes must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "TorusShape":
        """Parse ``"4x4x4"`` (also accepts commas)."""
        parts = text.replace(",", "x").lower().split("x")
        try:
            return cls(tuple(int(p) for p in parts if p.strip()))
        except ValueError as exc:
            raise ValueError(f"bad torus shape {text!r}: {exc}") from None

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return prod(self.dims)

    def __str__(self):
        return "x".join(map(str, self.dims))


def _check_dim(vec: Sequence[int], shape: TorusShape, what: str):
    if len(vec) != shape.d:
        raise ValueError(f"{what} has {len(vec)} components, torus has d={shape.d}")


def rank_of(coord: Sequence[int], shape: TorusShape) -> int:
    _check_dim(coord, shape, "coordinate")
    rank = 0
    for c, p in zip(coord, shape.dims):
        if not 0 <= c < p:
            raise ValueError(f"coordinate {tuple(coord)} out of bounds for {shape}")
        rank = rank * p + c
    return rank


def coord_of(rank: int, shape: TorusShape) -> Coord:
    if not 0 <= rank < shape.size:
        raise ValueError(f"rank {rank} out of range [0, {shape.size})")
    coord = []
    for p in reversed(shape.dims):
        rank, c = divmod(rank, p)
        coord.append(c)
    return tuple(reversed(coord))


def torus_add(r: Sequence[int], c: Sequence[int], shape: TorusShape) -> Coord:
    _check_dim(r, shape, "coordinate")
    _check_dim(c, shape, "offset")
    # Python's % already maps negatives into [0, p)
    return tuple((ri + ci) % p for ri, ci, p in zip(r, c, shape.dims))


def torus_sub(r: Sequence[int], c: Sequence[int], shape: TorusShape) -> Coord:
    return torus_add(r, [-ci for ci in c], shape)


def l1_norm(c: Sequence[int]) -> int:
    return sum(abs(x) for x in c)


def all_coords(shape: TorusShape) -> np.ndarray:
    """``(p, d)`` array whose row ``R`` is ``coord_of(R)``."""
    grids = np.unravel_index(np.arange(shape.size), shape.dims)
    return np.stack(grids, axis=1)


def shift_ranks(shape: TorusShape, offset: Sequence[int]) -> np.ndarray:
    """Vectorized ``rank_of(coord_of(R) + offset)`` for every rank ``R``."""
    _check_dim(offset, shape, "offset")
    dims = np.asarray(shape.dims)
    moved = (all_coords(shape) + np.asarray(offset)) % dims
    return np.ravel_multi_index(tuple(moved.T), shape.dims)
