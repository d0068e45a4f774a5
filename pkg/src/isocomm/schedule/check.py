"""Static checks over a schedule, without simulating any process.

Because every process executes the same steps, one abstract process is
enough: a slot is readable once any earlier step or copy has written it.
"""

from __future__ import annotations

from isocomm.schedule.model import Buffer, BufferRef, Kind, Schedule


def _in_range(ref: BufferRef, sched: Schedule) -> bool:
    return ref.slot < sched.slot_count(ref.buffer)


def check_dataflow(sched: Schedule) -> list[str]:
    problems = []
    written: set[BufferRef] = set()

    def readable(ref):
        return ref.buffer is Buffer.SEND or ref in written

    def check_ref(ref, where):
        if not _in_range(ref, sched):
            problems.append(f"{where}: {ref} outside buffer of {sched.slot_count(ref.buffer)} slots")

    for k, (src, dst) in enumerate(sched.local_copies):
        check_ref(src, f"local copy {k}")
        check_ref(dst, f"local copy {k}")
        if not readable(src):
            problems.append(f"local copy {k} reads {src} before it is written")
        written.add(dst)

    for t, step in enumerate(sched.steps):
        if not step.parts:
            problems.append(f"step {t} has no parts")
        reads, writes = set(), set()
        for k, part in enumerate(step.parts):
            where = f"step {t} part {k}"
            check_ref(part.src, where)
            check_ref(part.dst, where)
            if not 0 <= part.size_index < len(sched.sizes):
                problems.append(f"{where}: size index {part.size_index} out of range")
            if not readable(part.src):
                problems.append(f"{where} (block {part.neighbor_slot}) reads {part.src} before it is written")
            if part.dst.buffer is Buffer.SEND:
                problems.append(f"{where} writes into the send buffer")
            if part.dst in writes:
                problems.append(f"{where} writes {part.dst} twice in one step")
            reads.add(part.src)
            writes.add(part.dst)
        for ref in sorted(reads & writes):
            problems.append(f"step {t} both sends from and receives into {ref}")
        written |= writes

    for k, (src, dst) in enumerate(sched.finalize_copies):
        check_ref(src, f"finalize copy {k}")
        check_ref(dst, f"finalize copy {k}")
        if not readable(src):
            problems.append(f"finalize copy {k} reads {src} before it is written")
        written.add(dst)

    for i in range(sched.s):
        if BufferRef(Buffer.RECV, i) not in written:
            problems.append(f"RECV:{i} is never written")
    return problems


def check_parity(sched: Schedule) -> list[str]:
    """Every block's last hop must land in its final slot, never in INTER.

    For all-to-all the final slot of block ``i`` is ``RECV:i``.
    """
    last: dict[int, BufferRef] = {}
    for step in sched.steps:
        for part in step.parts:
            last[part.neighbor_slot] = part.dst
    problems = []
    for slot, dst in sorted(last.items()):
        if sched.kind is Kind.ALLTOALL and dst != BufferRef(Buffer.RECV, slot):
            problems.append(f"block {slot} ends in {dst}, expected RECV:{slot}")
        elif dst.buffer is Buffer.INTER:
            problems.append(f"trie node {slot} ends in intermediate slot {dst}")
    return problems


def check_schedule(sched: Schedule) -> list[str]:
    return check_dataflow(sched) + check_parity(sched)
