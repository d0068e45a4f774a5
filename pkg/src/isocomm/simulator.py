"""Lock-step execution of a schedule on every process of a virtual torus.

Each buffer is a ``(p, slots)`` integer array holding block tags; a tag
encodes ``(origin rank, send slot)`` as ``origin * send_slots + slot`` and
``EMPTY`` marks a slot nobody has written. A step reads every outgoing
part before any incoming part is written, which is what a barrier between
send and receive phases gives on a real machine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from isocomm.neighborhood import BlockSizeMap, Neighborhood, validate
from isocomm.schedule.model import Buffer, BufferRef, Kind, Schedule
from isocomm.torus import TorusShape, coord_of, shift_ranks

EMPTY = -1
MAX_REPORTED = 20


class Block(NamedTuple):
    origin: int
    slot: int
    nbytes: int


@dataclass
class ProcState:
    rank: int
    sendbuf: list[Block | None]
    recvbuf: list[Block | None]
    interbuf: list[Block | None]
    scratchbuf: list[Block | None]
    blocks_sent: int
    bytes_sent: int


@dataclass
class SimResult:
    kind: Kind
    shape: TorusShape
    send_slots: int
    sizes: tuple[int, ...]
    rounds_executed: int
    buffers: dict[Buffer, np.ndarray]
    blocks_sent: np.ndarray
    bytes_sent: np.ndarray
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def total_blocks(self) -> int:
        """Blocks sent per process (identical on every process)."""
        return int(self.blocks_sent.max(initial=0))

    @property
    def total_bytes(self) -> int:
        return int(self.bytes_sent.max(initial=0))

    @property
    def network_blocks(self) -> int:
        return int(self.blocks_sent.sum())

    def decode(self, tag: int) -> Block | None:
        if tag == EMPTY:
            return None
        origin, slot = divmod(int(tag), self.send_slots)
        size = self.sizes[slot] if self.kind is Kind.ALLTOALL else self.sizes[0]
        return Block(origin, slot, size)

    def proc(self, rank: int) -> ProcState:
        def row(buf):
            return [self.decode(t) for t in self.buffers[buf][rank]]

        return ProcState(
            rank,
            row(Buffer.SEND),
            row(Buffer.RECV),
            row(Buffer.INTER),
            row(Buffer.SCRATCH),
            int(self.blocks_sent[rank]),
            int(self.bytes_sent[rank]),
        )

    @property
    def per_process(self) -> list[ProcState]:
        return [self.proc(r) for r in range(self.shape.size)]

    def to_dict(self, include_buffers: bool = True) -> dict:
        out = {
            "kind": self.kind.value,
            "shape": list(self.shape.dims),
            "rounds_executed": self.rounds_executed,
            "total_blocks": self.total_blocks,
            "total_bytes": self.total_bytes,
            "network_blocks": self.network_blocks,
            "violations": list(self.violations),
        }
        if include_buffers:
            out["recvbuf"] = [
                [None if b is None else [b.origin, b.slot] for b in map(self.decode, row)]
                for row in self.buffers[Buffer.RECV]
            ]
        return out

    def to_json(self, include_buffers: bool = True) -> str:
        return json.dumps(self.to_dict(include_buffers), sort_keys=True)


class _Machine:
    def __init__(self, sched: Schedule, shape: TorusShape, sizes: tuple[int, ...]):
        self.sched = sched
        self.shape = shape
        self.sizes = sizes
        self.p = shape.size
        self.violations: list[str] = []
        self._shifts: dict[tuple[int, ...], np.ndarray] = {}
        self.bufs = {b: np.full((self.p, sched.slot_count(b)), EMPTY, dtype=np.int64) for b in Buffer}
        ranks = np.arange(self.p, dtype=np.int64)
        for i in range(sched.send_slots):
            self.bufs[Buffer.SEND][:, i] = ranks * sched.send_slots + i

    def note(self, msg: str):
        if len(self.violations) < MAX_REPORTED:
            self.violations.append(msg)
        elif len(self.violations) == MAX_REPORTED:
            self.violations.append("... further violations suppressed")

    def shift(self, offset) -> np.ndarray:
        key = tuple(offset)
        if key not in self._shifts:
            self._shifts[key] = shift_ranks(self.shape, key)
        return self._shifts[key]

    def read(self, ref: BufferRef, where: str) -> np.ndarray:
        col = self.bufs[ref.buffer][:, ref.slot].copy()
        unwritten = np.flatnonzero(col == EMPTY)
        if unwritten.size:
            r = int(unwritten[0])
            self.note(
                f"dataflow: {where} reads unwritten {ref} on {unwritten.size} processes "
                f"(first rank {r} at {coord_of(r, self.shape)})"
            )
        return col

    def copy(self, copies, label: str):
        for k, (src, dst) in enumerate(copies):
            self.bufs[dst.buffer][:, dst.slot] = self.read(src, f"{label} {k}")

    def step(self, t: int, step) -> tuple[int, int]:
        fwd = self.shift(step.send_offset)
        back = self.shift([-c for c in step.send_offset])
        # the peer I receive from must be sending to me
        if not np.array_equal(fwd[back], np.arange(self.p)):
            self.note(f"pairing: step {t} send/receive peers do not match up")
        # one Step object serves both roles, so parts pair up by position
        message = [self.read(p.src, f"step {t} part {k}") for k, p in enumerate(step.parts)]
        for part, col in zip(step.parts, message):
            self.bufs[part.dst.buffer][:, part.dst.slot] = col[back]
        return len(step.parts), sum(self.sizes[p.size_index] for p in step.parts)


def _bounds_problems(sched: Schedule, sizes: tuple[int, ...]) -> list[str]:
    problems = []
    refs = [r for pair in sched.local_copies + sched.finalize_copies for r in pair]
    for t, st in enumerate(sched.steps):
        for p in st.parts:
            refs += [p.src, p.dst]
            if not 0 <= p.size_index < len(sizes):
                problems.append(f"step {t}: size index {p.size_index} out of range")
    for ref in refs:
        if ref.slot >= sched.slot_count(ref.buffer):
            problems.append(f"{ref} outside buffer of {sched.slot_count(ref.buffer)} slots")
    return problems


def run(
    sched: Schedule,
    n: Neighborhood,
    shape: TorusShape,
    sizes: BlockSizeMap | None = None,
) -> SimResult:
    """Execute ``sched`` on all ``shape.size`` processes.

    Problems found while running (unwritten reads, unpaired peers) are
    collected in ``violations``; bad geometry raises ``ValueError``.
    """
    validate(n, shape)
    if sched.s != n.s:
        raise ValueError(f"schedule built for s={sched.s}, neighborhood has s={n.s}")
    size_tuple = sched.sizes if sizes is None else sizes.sizes
    if len(size_tuple) != n.s:
        raise ValueError(f"{len(size_tuple)} block sizes for s={n.s}")
    for t, st in enumerate(sched.steps):
        if len(st.send_offset) != shape.d:
            raise ValueError(f"step {t} offset {st.send_offset} does not match d={shape.d}")

    m = _Machine(sched, shape, size_tuple)
    blocks_sent = np.zeros(m.p, dtype=np.int64)
    bytes_sent = np.zeros(m.p, dtype=np.int64)
    problems = _bounds_problems(sched, size_tuple)
    rounds = 0
    if problems:
        m.violations.extend(problems[:MAX_REPORTED])
    else:
        m.copy(sched.local_copies, "local copy")
        for t, step in enumerate(sched.steps):
            nblocks, nbytes = m.step(t, step)
            blocks_sent += nblocks
            bytes_sent += nbytes
            rounds += 1
        m.copy(sched.finalize_copies, "finalize copy")
    return SimResult(
        kind=sched.kind,
        shape=shape,
        send_slots=sched.send_slots,
        sizes=size_tuple,
        rounds_executed=rounds,
        buffers=m.bufs,
        blocks_sent=blocks_sent,
        bytes_sent=bytes_sent,
        violations=m.violations,
    )


@dataclass
class DeliveryReport:
    ok: bool
    checked: int
    mismatches: int
    first_mismatch: str | None = None


def expected_recv(n: Neighborhood, shape: TorusShape, kind: Kind) -> np.ndarray:
    """Tag every receive slot should hold after a correct collective."""
    send_slots = n.s if Kind(kind) is Kind.ALLTOALL else 1
    out = np.empty((shape.size, n.s), dtype=np.int64)
    for i, c in enumerate(n.offsets):
        source = shift_ranks(shape, [-x for x in c])
        out[:, i] = source * send_slots + (i if send_slots > 1 else 0)
    return out


def verify_delivery(res: SimResult, n: Neighborhood, shape: TorusShape, kind: Kind | None = None) -> DeliveryReport:
    kind = res.kind if kind is None else Kind(kind)
    if kind is not res.kind:
        raise ValueError(f"result is a {res.kind.value} run, asked to verify {kind.value}")
    want = expected_recv(n, shape, kind)
    got = res.buffers[Buffer.RECV]
    bad = np.argwhere(want != got)
    first = None
    if bad.size:
        r, i = (int(x) for x in bad[0])
        first = (
            f"rank {r} {coord_of(r, shape)} RECV:{i} (offset {n.offsets[i]}): "
            f"expected {res.decode(want[r, i])}, got {res.decode(got[r, i])}"
        )
    return DeliveryReport(ok=not bad.size, checked=want.size, mismatches=len(bad), first_mismatch=first)


@dataclass
class OracleReport:
    equal: bool
    differing: int
    first_difference: str | None
    a_violations: list[str]
    b_violations: list[str]
    a_delivery: DeliveryReport
    b_delivery: DeliveryReport

    @property
    def both_correct(self) -> bool:
        return (
            self.equal
            and not self.a_violations
            and not self.b_violations
            and self.a_delivery.ok
            and self.b_delivery.ok
        )


def compare_oracle(
    a: Schedule,
    b: Schedule,
    n: Neighborhood,
    shape: TorusShape,
    sizes: BlockSizeMap | None = None,
) -> OracleReport:
    """Run two schedules of the same collective and diff their receive buffers."""
    if a.kind is not b.kind:
        raise ValueError(f"cannot compare {a.kind.value} with {b.kind.value}")
    ra, rb = run(a, n, shape, sizes), run(b, n, shape, sizes)
    ga, gb = ra.buffers[Buffer.RECV], rb.buffers[Buffer.RECV]
    diff = np.argwhere(ga != gb)
    first = None
    if diff.size:
        r, i = (int(x) for x in diff[0])
        first = f"rank {r} RECV:{i}: {ra.decode(ga[r, i])} vs {rb.decode(gb[r, i])}"
    return OracleReport(
        equal=not diff.size,
        differing=len(diff),
        first_difference=first,
        a_violations=ra.violations,
        b_violations=rb.violations,
        a_delivery=verify_delivery(ra, n, shape),
        b_delivery=verify_delivery(rb, n, shape),
    )
