"""Schedule data model and its JSON dump format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from isocomm.torus import Offset


class Buffer(str, Enum):
    SEND = "SEND"
    RECV = "RECV"
    INTER = "INTER"
    SCRATCH = "SCRATCH"


class Kind(str, Enum):
    ALLTOALL = "ALLTOALL"
    ALLGATHER = "ALLGATHER"


class Algorithm(str, Enum):
    DIRECT = "DIRECT"
    TORUS = "TORUS"
    TORUS_DIRECT = "TORUS_DIRECT"


@dataclass(frozen=True, order=True)
class BufferRef:
    buffer: Buffer
    slot: int

    def __post_init__(self):
        if self.slot < 0:
            raise ValueError(f"negative slot in {self.buffer.value}:{self.slot}")

    def __str__(self):
        return f"{self.buffer.value}:{self.slot}"

    @classmethod
    def parse(cls, text: str) -> "BufferRef":
        name, sep, slot = text.partition(":")
        if not sep:
            raise ValueError(f"buffer reference {text!r} is not of the form BUF:k")
        try:
            return cls(Buffer(name), int(slot))
        except ValueError:
            raise ValueError(f"bad buffer reference {text!r}") from None


def SEND(i):
    return BufferRef(Buffer.SEND, i)


def RECV(i):
    return BufferRef(Buffer.RECV, i)


def INTER(i):
    return BufferRef(Buffer.INTER, i)


def SCRATCH(i):
    return BufferRef(Buffer.SCRATCH, i)


@dataclass(frozen=True)
class Part:
    """One block moved in a step: read from ``src`` at the sender, written to ``dst`` at the receiver."""

    neighbor_slot: int
    src: BufferRef
    dst: BufferRef
    size_index: int


@dataclass(frozen=True)
class Step:
    send_offset: Offset
    parts: tuple[Part, ...]


@dataclass(frozen=True)
class Schedule:
    kind: Kind
    algorithm: Algorithm
    s: int
    steps: tuple[Step, ...]
    sizes: tuple[int, ...]
    local_copies: tuple[tuple[BufferRef, BufferRef], ...] = ()
    finalize_copies: tuple[tuple[BufferRef, BufferRef], ...] = ()
    scratch_slots: int = 0
    dim_order: tuple[int, ...] | None = None

    @property
    def send_slots(self) -> int:
        return self.s if self.kind is Kind.ALLTOALL else 1

    def slot_count(self, buffer: Buffer) -> int:
        if buffer is Buffer.SEND:
            return self.send_slots
        if buffer is Buffer.SCRATCH:
            return self.scratch_slots
        return self.s

    def to_dict(self) -> dict:
        def copies(cs):
            return [{"src": str(a), "dst": str(b)} for a, b in cs]

        return {
            "kind": self.kind.value,
            "algorithm": self.algorithm.value,
            "s": self.s,
            "sizes": list(self.sizes),
            "scratch_slots": self.scratch_slots,
            "dim_order": list(self.dim_order) if self.dim_order is not None else None,
            "local_copies": copies(self.local_copies),
            "steps": [
                {
                    "send_offset": list(st.send_offset),
                    "parts": [
                        {"slot": p.neighbor_slot, "src": str(p.src), "dst": str(p.dst), "size_index": p.size_index}
                        for p in st.parts
                    ],
                }
                for st in self.steps
            ],
            "finalize_copies": copies(self.finalize_copies),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, obj: dict) -> "Schedule":
        def copies(cs):
            return tuple((BufferRef.parse(c["src"]), BufferRef.parse(c["dst"])) for c in cs)

        try:
            steps = tuple(
                Step(
                    tuple(int(x) for x in st["send_offset"]),
                    tuple(
                        Part(int(p["slot"]), BufferRef.parse(p["src"]), BufferRef.parse(p["dst"]),
                             int(p.get("size_index", p["slot"])))
                        for p in st["parts"]
                    ),
                )
                for st in obj["steps"]
            )
            dim_order = obj.get("dim_order")
            return cls(
                kind=Kind(obj["kind"]),
                algorithm=Algorithm(obj["algorithm"]),
                s=int(obj["s"]),
                steps=steps,
                sizes=tuple(int(m) for m in obj["sizes"]),
                local_copies=copies(obj.get("local_copies", [])),
                finalize_copies=copies(obj.get("finalize_copies", [])),
                scratch_slots=int(obj.get("scratch_slots", 0)),
                dim_order=tuple(dim_order) if dim_order is not None else None,
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed schedule: {exc!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ValueError(f"schedule is not valid JSON: {exc}") from None


def schedule_stats(sched: Schedule) -> dict:
    """Per-process rounds, blocks sent and bytes sent."""
    blocks = sum(len(st.parts) for st in sched.steps)
    nbytes = sum(sched.sizes[p.size_index] for st in sched.steps for p in st.parts)
    return {"rounds": len(sched.steps), "blocks": blocks, "bytes": nbytes}
