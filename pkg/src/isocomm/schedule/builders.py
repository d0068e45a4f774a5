"""Schedule compilers: straightforward, torus-hop and torus-direct.

Every process runs the same list of steps. In a step each process sends
one combined message to ``R + send_offset`` and receives one from
``R - send_offset``; the message is the ordered list of parts.
"""

from __future__ import annotations

from isocomm.neighborhood import BlockSizeMap, Neighborhood, distinct_nonzero
from isocomm.schedule.model import (
    INTER,
    RECV,
    SCRATCH,
    SEND,
    Algorithm,
    Buffer,
    BufferRef,
    Kind,
    Part,
    Schedule,
    Step,
)
from isocomm.torus import l1_norm
from isocomm.trie import PrefixTrie


class _Alternator:
    """Location of one in-flight block, bouncing between ``alt`` and ``final``.

    A hop lands in ``alt`` when an even number of hops remain and in
    ``final`` when an odd number remain, so the last hop always lands in
    ``final`` and no hop reads and writes the same slot.
    """

    __slots__ = ("loc", "final", "alt", "remaining")

    def __init__(self, start: BufferRef, final: BufferRef, alt: BufferRef, hops: int):
        self.loc = start
        self.final = final
        self.alt = alt
        self.remaining = hops

    def hop(self) -> tuple[BufferRef, BufferRef]:
        if self.remaining <= 0:
            raise RuntimeError("block has no hops left")
        dst = self.alt if self.remaining % 2 == 0 else self.final
        src, self.loc = self.loc, dst
        self.remaining -= 1
        return src, dst


def _sizes_for(n: Neighborhood, sizes: BlockSizeMap | None) -> BlockSizeMap:
    if sizes is None:
        return BlockSizeMap.uniform(n.s)
    if len(sizes) != n.s:
        raise ValueError(f"{len(sizes)} block sizes given for s={n.s} neighbors")
    return sizes


def _unit(d: int, j: int, v: int) -> tuple[int, ...]:
    e = [0] * d
    e[j] = v
    return tuple(e)


def build_direct(n: Neighborhood, sizes: BlockSizeMap | None = None, kind: Kind = Kind.ALLTOALL) -> Schedule:
    """One step per neighbor, straight to ``R + C^i``.

    With ``kind=ALLGATHER`` every step sends the single send block; this is
    the reference the combining allgather schedules are compared against.
    """
    kind = Kind(kind)
    sizes = _sizes_for(n, sizes)
    if kind is Kind.ALLGATHER and not sizes.is_uniform:
        raise ValueError("allgather requires equal block sizes")
    steps, local = [], []
    for i, c in enumerate(n.offsets):
        src = SEND(i) if kind is Kind.ALLTOALL else SEND(0)
        if not any(c):
            local.append((src, RECV(i)))
            continue
        steps.append(Step(c, (Part(i, src, RECV(i), i if kind is Kind.ALLTOALL else 0),)))
    return Schedule(kind, Algorithm.DIRECT, n.s, tuple(steps), sizes.sizes, tuple(local))


def build_torus_alltoall(n: Neighborhood, sizes: BlockSizeMap | None = None) -> Schedule:
    """Dimension-wise hop-by-hop all-to-all in exactly D steps with V parts."""
    sizes = _sizes_for(n, sizes)
    blocks = [_Alternator(SEND(i), RECV(i), INTER(i), l1_norm(c)) for i, c in enumerate(n.offsets)]
    local = tuple((SEND(i), RECV(i)) for i, c in enumerate(n.offsets) if not any(c))
    steps = []
    for j in range(n.d):
        col = [c[j] for c in n.offsets]
        for sign in (1, -1):
            reach = [sign * x for x in col]
            for h in range(max(max(reach), 0)):
                parts = []
                for i, dist in enumerate(reach):
                    if h < dist:
                        src, dst = blocks[i].hop()
                        parts.append(Part(i, src, dst, i))
                steps.append(Step(_unit(n.d, j, sign), tuple(parts)))
    return Schedule(Kind.ALLTOALL, Algorithm.TORUS, n.s, tuple(steps), sizes.sizes, local)


def build_torusdirect_alltoall(n: Neighborhood, sizes: BlockSizeMap | None = None) -> Schedule:
    """One direct step per distinct nonzero coordinate value per dimension."""
    sizes = _sizes_for(n, sizes)
    blocks = [
        _Alternator(SEND(i), RECV(i), INTER(i), sum(1 for x in c if x)) for i, c in enumerate(n.offsets)
    ]
    local = tuple((SEND(i), RECV(i)) for i, c in enumerate(n.offsets) if not any(c))
    steps = []
    for j in range(n.d):
        buckets: dict[int, list[int]] = {}
        for i, c in enumerate(n.offsets):
            if c[j]:
                buckets.setdefault(c[j], []).append(i)
        for v in distinct_nonzero(n, j):
            parts = []
            for i in buckets[v]:
                src, dst = blocks[i].hop()
                parts.append(Part(i, src, dst, i))
            steps.append(Step(_unit(n.d, j, v), tuple(parts)))
    return Schedule(Kind.ALLTOALL, Algorithm.TORUS_DIRECT, n.s, tuple(steps), sizes.sizes, local)


class _TrieRouting:
    """Buffer assignment for allgather trie nodes.

    A node whose zero-weight descendants end at a leaf delivers straight into
    that leaf's receive slot (lowest neighbor index); anything else goes to
    scratch slot ``node.id``, alternating with scratch ``len(nodes) + node.id``.
    """

    def __init__(self, trie: PrefixTrie, direct: bool):
        self.trie = trie
        self.loc: dict[int, BufferRef] = {0: SEND(0)}
        self.movers: dict[int, _Alternator] = {}
        self.scratch_used = 0
        nn = len(trie.nodes)
        for node in trie.nodes[1:]:
            if node.weight == 0:
                continue
            leaf = trie.zero_path_leaf(node.id)
            if leaf is not None:
                final, alt = RECV(leaf.members[0]), INTER(leaf.members[0])
            else:
                final, alt = SCRATCH(node.id), SCRATCH(nn + node.id)
            hops = 1 if direct else abs(node.weight)
            self.movers[node.id] = _Alternator(None, final, alt, hops)

    def hop(self, node_id: int) -> tuple[BufferRef, BufferRef]:
        mover = self.movers[node_id]
        if mover.loc is None:
            mover.loc = self.loc[self.trie.nodes[node_id].parent]
        src, dst = mover.hop()
        if dst.buffer is Buffer.SCRATCH:
            self.scratch_used = max(self.scratch_used, dst.slot + 1)
        if mover.remaining == 0:
            self.loc[node_id] = dst
        return src, dst

    def settle_zero_edges(self, level: int):
        for node in self.trie.level(level):
            if node.weight == 0:
                self.loc[node.id] = self.loc[node.parent]


def _allgather(n: Neighborhood, sizes: BlockSizeMap | None, direct: bool) -> Schedule:
    sizes = _sizes_for(n, sizes)
    if not sizes.is_uniform:
        raise ValueError("allgather requires equal block sizes")
    trie = PrefixTrie(n.offsets)
    routing = _TrieRouting(trie, direct)
    steps = []
    for level, dim in enumerate(trie.dim_order):
        children = trie.level(level + 1)
        if direct:
            for v in sorted({c.weight for c in children if c.weight}):
                parts = [Part(c.id, *routing.hop(c.id), 0) for c in children if c.weight == v]
                steps.append(Step(_unit(n.d, dim, v), tuple(parts)))
        else:
            for sign in (1, -1):
                reach = [(c.id, sign * c.weight) for c in children]
                for h in range(max([r for _, r in reach] + [0])):
                    parts = [Part(cid, *routing.hop(cid), 0) for cid, r in reach if h < r]
                    steps.append(Step(_unit(n.d, dim, sign), tuple(parts)))
        routing.settle_zero_edges(level + 1)

    local, final = [], []
    for leaf in trie.leaves():
        loc = routing.loc[leaf.id]
        if loc.buffer is Buffer.SEND:
            local.extend((loc, RECV(i)) for i in leaf.members)
        else:
            first = leaf.members[0]
            if loc != RECV(first):
                raise AssertionError(f"leaf {leaf.id} delivered to {loc}, expected RECV:{first}")
            final.extend((RECV(first), RECV(i)) for i in leaf.members[1:])
    algorithm = Algorithm.TORUS_DIRECT if direct else Algorithm.TORUS
    return Schedule(
        Kind.ALLGATHER,
        algorithm,
        n.s,
        tuple(steps),
        sizes.sizes,
        tuple(local),
        tuple(final),
        scratch_slots=routing.scratch_used,
        dim_order=trie.dim_order,
    )


def build_torus_allgather(n: Neighborhood, sizes: BlockSizeMap | None = None) -> Schedule:
    """Allgather routed along the prefix trie, hop by hop: D steps, W parts."""
    return _allgather(n, sizes, direct=False)


def build_torusdirect_allgather(n: Neighborhood, sizes: BlockSizeMap | None = None) -> Schedule:
    """Allgather along the prefix trie with one direct step per distinct edge weight."""
    return _allgather(n, sizes, direct=True)


BUILDERS = {
    (Kind.ALLTOALL, Algorithm.DIRECT): lambda n, sizes=None: build_direct(n, sizes, Kind.ALLTOALL),
    (Kind.ALLTOALL, Algorithm.TORUS): build_torus_alltoall,
    (Kind.ALLTOALL, Algorithm.TORUS_DIRECT): build_torusdirect_alltoall,
    (Kind.ALLGATHER, Algorithm.DIRECT): lambda n, sizes=None: build_direct(n, sizes, Kind.ALLGATHER),
    (Kind.ALLGATHER, Algorithm.TORUS): build_torus_allgather,
    (Kind.ALLGATHER, Algorithm.TORUS_DIRECT): build_torusdirect_allgather,
}


def build(kind: Kind, algorithm: Algorithm, n: Neighborhood, sizes: BlockSizeMap | None = None) -> Schedule:
    return BUILDERS[Kind(kind), Algorithm(algorithm)](n, sizes)
