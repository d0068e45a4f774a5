"""Compile neighborhoods into per-step communication schedules."""

from isocomm.schedule.basis import AdditiveBasis, SearchSpaceExceeded, find_min_additive_basis, is_additive_basis
from isocomm.schedule.builders import (
    BUILDERS,
    build,
    build_direct,
    build_torus_allgather,
    build_torus_alltoall,
    build_torusdirect_allgather,
    build_torusdirect_alltoall,
)
from isocomm.schedule.check import check_dataflow, check_parity, check_schedule
from isocomm.schedule.model import (
    Algorithm,
    Buffer,
    BufferRef,
    Kind,
    Part,
    Schedule,
    Step,
    schedule_stats,
)

__all__ = [
    "AdditiveBasis",
    "Algorithm",
    "BUILDERS",
    "Buffer",
    "BufferRef",
    "Kind",
    "Part",
    "Schedule",
    "SearchSpaceExceeded",
    "Step",
    "build",
    "build_direct",
    "build_torus_allgather",
    "build_torus_alltoall",
    "build_torusdirect_allgather",
    "build_torusdirect_alltoall",
    "check_dataflow",
    "check_parity",
    "check_schedule",
    "find_min_additive_basis",
    "is_additive_basis",
    "schedule_stats",
]
