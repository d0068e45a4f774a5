"""Isomorphic s-neighborhoods: construction, generators and metrics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from isocomm.torus import Offset, TorusShape, l1_norm
from isocomm.trie import PrefixTrie


@dataclass(frozen=True)
class Neighborhood:
    """Ordered list of relative offsets shared by every process.

    Order matters: offset ``i`` owns block ``i`` in the send and receive
    buffers. Repeated offsets and the zero offset are allowed.
    """

    d: int
    offsets: tuple[Offset, ...]

    def __post_init__(self):
        offsets = tuple(tuple(int(x) for x in c) for c in self.offsets)
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not offsets:
            raise ValueError("a neighborhood needs at least one offset")
        for c in offsets:
            if len(c) != self.d:
                raise ValueError(f"offset {c} has {len(c)} components, expected d={self.d}")
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def of(cls, offsets: Iterable[Sequence[int]]) -> "Neighborhood":
        offsets = [tuple(c) for c in offsets]
        if not offsets:
            raise ValueError("a neighborhood needs at least one offset")
        return cls(len(offsets[0]), tuple(offsets))

    @property
    def s(self) -> int:
        return len(self.offsets)

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def __getitem__(self, i):
        return self.offsets[i]

    def to_json(self) -> str:
        return json.dumps({"d": self.d, "offsets": [list(c) for c in self.offsets]})

    @classmethod
    def from_json(cls, text: str) -> "Neighborhood":
        try:
            obj = json.loads(text)
            return cls(int(obj["d"]), tuple(tuple(c) for c in obj["offsets"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"malformed neighborhood JSON: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "Neighborhood":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True)
class BlockSizeMap:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.sizes)
        if any(m < 0 for m in sizes):
            raise ValueError("block sizes must be nonnegative")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def uniform(cls, s: int, m: int = 1) -> "BlockSizeMap":
        return cls((m,) * s)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.sizes)) <= 1

    def __len__(self):
        return len(self.sizes)

    def __getitem__(self, i: int) -> int:
        return self.sizes[i]

    def total(self) -> int:
        return sum(self.sizes)


@dataclass
class ValidationReport:
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.warnings


@dataclass(frozen=True)
class NeighborhoodMetrics:
    s: int
    D: int
    V: int
    W: int
    direct_rounds: int
    direct_volume: int


def validate(n: Neighborhood, shape: TorusShape) -> ValidationReport:
    """Check ``n`` against ``shape``.

    A dimension mismatch raises ``ValueError``. Offsets that reach all the
    way around a dimension (``|c_j| >= p_j``) are legal but alias a nearer
    rank; they are reported as warnings.
    """
    if n.d != shape.d:
        raise ValueError(f"neighborhood has d={n.d}, torus {shape} has d={shape.d}")
    report = ValidationReport()
    for i, c in enumerate(n.offsets):
        for j, (cj, p) in enumerate(zip(c, shape.dims)):
            if abs(cj) >= p:
                report.warnings.append(
                    f"offset {i} {c}: component {j} = {cj} aliases {cj % p} (mod {p})"
                )
    return report


def _check_positive(**kw):
    for name, value in kw.items():
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")


def _chebyshev(c: Sequence[int]) -> int:
    return max(abs(x) for x in c)


def gen_moore(d: int, r: int) -> Neighborhood:
    """All offsets of Chebyshev norm ``1..r`` in row order; ``(2r+1)^d - 1`` of them."""
    _check_positive(d=d, r=r)
    rng = range(-r, r + 1)
    return Neighborhood(d, tuple(c for c in product(rng, repeat=d) if any(c)))


def gen_octant(d: int, r: int) -> Neighborhood:
    """Moore neighbors with all components nonnegative."""
    _check_positive(d=d, r=r)
    return Neighborhood(d, tuple(c for c in product(range(r + 1), repeat=d) if any(c)))


def gen_shales(d: int, radii: Sequence[int]) -> Neighborhood:
    """Offsets whose Chebyshev norm equals one of ``radii``."""
    _check_positive(d=d)
    radii = list(radii)
    if not radii or radii[0] < 1 or any(a >= b for a, b in zip(radii, radii[1:])):
        raise ValueError(f"radii must be positive and strictly increasing, got {radii}")
    keep = set(radii)
    rng = range(-radii[-1], radii[-1] + 1)
    return Neighborhood(d, tuple(c for c in product(rng, repeat=d) if _chebyshev(c) in keep))


def gen_irregular_sizes(n: Neighborhood, mhat: int) -> BlockSizeMap:
    """Block ``i`` gets ``mhat ** (d - ||C^i||)`` units: corners small, faces large."""
    _check_positive(mhat=mhat)
    sizes = []
    for c in n.offsets:
        exp = n.d - l1_norm(c)
        if exp < 0:
            raise ValueError(f"offset {c} has norm {l1_norm(c)} > d={n.d}")
        sizes.append(mhat**exp)
    return BlockSizeMap(tuple(sizes))


def parse_spec(spec: str) -> Neighborhood:
    """Build a neighborhood from a generator string or a JSON file path.

    Accepted forms: ``moore:d=3,r=1``, ``octant:d=3,r=3``,
    ``shales:d=3,r=3,7`` (radii listed after ``r=``), or a path.
    """
    if ":" not in spec:
        path = Path(spec)
        if path.exists():
            return Neighborhood.load(path)
        raise ValueError(f"unknown neighborhood spec {spec!r}")
    kind, _, args = spec.partition(":")
    params: dict[str, list[int]] = {}
    key = None
    try:
        for tok in args.split(","):
            tok = tok.strip()
            if "=" in tok:
                key, _, tok = tok.partition("=")
                key = key.strip()
                params[key] = []
            if key is None:
                raise ValueError(f"value {tok!r} without a key")
            params[key].append(int(tok))
    except ValueError as exc:
        raise ValueError(f"bad neighborhood spec {spec!r}: {exc}") from None

    def one(name):
        vals = params.get(name)
        if not vals or len(vals) != 1:
            raise ValueError(f"spec {spec!r} needs exactly one value for {name}")
        return vals[0]

    kind = kind.strip().lower()
    if kind == "moore":
        return gen_moore(one("d"), one("r"))
    if kind == "octant":
        return gen_octant(one("d"), one("r"))
    if kind == "shales":
        if "r" not in params:
            raise ValueError(f"spec {spec!r} needs r=<radius>[,<radius>...]")
        return gen_shales(one("d"), params["r"])
    raise ValueError(f"unknown neighborhood generator {kind!r}")


def rounds_per_dim(n: Neighborhood) -> list[int]:
    """Torus-hop steps per dimension: max positive plus max negative coordinate."""
    out = []
    for j in range(n.d):
        col = [c[j] for c in n.offsets]
        out.append(max(max(col), 0) + max(-min(col), 0))
    return out


def distinct_nonzero(n: Neighborhood, j: int) -> list[int]:
    return sorted({c[j] for c in n.offsets if c[j] != 0})


def metrics(n: Neighborhood) -> NeighborhoodMetrics:
    trie = PrefixTrie(n.offsets)
    return NeighborhoodMetrics(
        s=n.s,
        D=sum(rounds_per_dim(n)),
        V=sum(l1_norm(c) for c in n.offsets),
        W=trie.edge_weight_sum(),
        direct_rounds=sum(len(distinct_nonzero(n, j)) for j in range(n.d)),
        direct_volume=sum(sum(1 for x in c if x) for c in n.offsets),
    )
