"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 a schedule failed verification.

CSV columns for ``simulate`` are, in order: algorithm, collective, d, spec,
s, shape, block_size, rounds, blocks, bytes, modeled_time. ``block_size`` is
the uniform block size, or ``mhat=<k>`` for irregular runs; ``blocks`` and
``bytes`` are per process.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

from isocomm.costmodel import CostParams, crossover_blocksize, estimate
from isocomm.neighborhood import BlockSizeMap, Neighborhood, gen_irregular_sizes, metrics, parse_spec, validate
from isocomm.schedule import (
    Algorithm,
    Kind,
    Schedule,
    SearchSpaceExceeded,
    build,
    check_schedule,
    find_min_additive_basis,
    schedule_stats,
)
from isocomm.simulator import run, verify_delivery
from isocomm.torus import TorusShape

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

SIM_COLUMNS = [
    "algorithm", "collective", "d", "spec", "s", "shape",
    "block_size", "rounds", "blocks", "bytes", "modeled_time",
]
DEFAULT_SWEEP = [2**k for k in range(12)]  # 1 B .. 2 KiB

ALG_NAMES = {"direct": Algorithm.DIRECT, "torus": Algorithm.TORUS, "torus-direct": Algorithm.TORUS_DIRECT}
KIND_NAMES = {"alltoall": Kind.ALLTOALL, "allgather": Kind.ALLGATHER}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class ExperimentConfig:
    nbh_specs: list[str]
    shape: TorusShape | None = None
    kind: Kind = Kind.ALLTOALL
    algorithms: list[Algorithm] = field(default_factory=lambda: [Algorithm.DIRECT, Algorithm.TORUS])
    block_sizes: list[int] = field(default_factory=lambda: list(DEFAULT_SWEEP))
    mhat: int | None = None
    alpha: float = 100.0
    beta: float = 1.0
    out: str = "table"

    def __post_init__(self):
        if not self.algorithms:
            raise UsageError("select at least one algorithm")
        if self.beta <= 0 or self.alpha < 0:
            raise UsageError("need alpha >= 0 and beta > 0")

    @classmethod
    def from_args(cls, args) -> "ExperimentConfig":
        kw = {"nbh_specs": list(args.nbh)}
        if getattr(args, "shape", None):
            kw["shape"] = TorusShape.parse(args.shape)
        if getattr(args, "collective", None):
            kw["kind"] = KIND_NAMES[args.collective]
        if getattr(args, "alg", None):
            kw["algorithms"] = _parse_algs(args.alg)
        if getattr(args, "m", None):
            kw["block_sizes"] = _parse_ints(args.m)
        if getattr(args, "sizes", None):
            kw["mhat"] = _parse_mhat(args.sizes)
        for name in ("alpha", "beta", "out"):
            if getattr(args, name, None) is not None:
                kw[name] = getattr(args, name)
        return cls(**kw)

    def neighborhoods(self) -> list[tuple[str, Neighborhood]]:
        return [(spec, parse_spec(spec)) for spec in self.nbh_specs]

    def shape_for(self, n: Neighborhood) -> TorusShape:
        return self.shape if self.shape is not None else TorusShape((4,) * n.d)

    def size_maps(self, n: Neighborhood) -> list[tuple[str, BlockSizeMap]]:
        if self.mhat is not None:
            return [(f"mhat={self.mhat}", gen_irregular_sizes(n, self.mhat))]
        return [(str(m), BlockSizeMap.uniform(n.s, m)) for m in self.block_sizes]


def _parse_ints(tokens) -> list[int]:
    out = []
    for tok in tokens:
        for piece in str(tok).split(","):
            if piece.strip():
                try:
                    out.append(int(piece))
                except ValueError:
                    raise UsageError(f"not an integer: {piece!r}") from None
    if any(m < 0 for m in out):
        raise UsageError("block sizes must be nonnegative")
    return out


def _parse_algs(text: str) -> list[Algorithm]:
    algs = []
    for name in text.split(","):
        name = name.strip().lower()
        if name not in ALG_NAMES:
            raise UsageError(f"unknown algorithm {name!r}; choose from {', '.join(ALG_NAMES)}")
        algs.append(ALG_NAMES[name])
    return algs


def _parse_mhat(text: str) -> int:
    key, _, value = text.partition("=")
    if key.strip() != "mhat" or not value.strip().isdigit():
        raise UsageError(f"--sizes expects mhat=<k>, got {text!r}")
    return int(value)


def _alg_label(alg: Algorithm) -> str:
    return {v: k for k, v in ALG_NAMES.items()}[alg]


def _format_crossover(m_star) -> str:
    if m_star == math.inf:
        return "always"
    if m_star == 0:
        return "never"
    return f"{m_star:.4g}"


def emit(rows: list[dict], columns: list[str], fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(rows, stream, indent=2)
        stream.write("\n")
    elif fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        cells = [[str(r[c]) for c in columns] for r in rows]
        widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(columns)]
        stream.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
        for row in cells:
            stream.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def cmd_metrics(cfg: ExperimentConfig, stream=None) -> int:
    columns = ["spec", "d", "s", "D", "V", "W", "direct_rounds", "direct_volume", "alpha_over_beta", "crossover_m"]
    rows = []
    for spec, n in cfg.neighborhoods():
        mt = metrics(n)
        m_star = crossover_blocksize(cfg.alpha, cfg.beta, mt.s, mt.D, mt.V)
        rows.append({
            "spec": spec, "d": n.d, "s": mt.s, "D": mt.D, "V": mt.V, "W": mt.W,
            "direct_rounds": mt.direct_rounds, "direct_volume": mt.direct_volume,
            "alpha_over_beta": f"{cfg.alpha / cfg.beta:g}",
            "crossover_m": _format_crossover(m_star),
        })
    emit(rows, columns, cfg.out, stream)
    return EXIT_OK


def verify_schedule(sched: Schedule, n: Neighborhood, shape: TorusShape, sizes: BlockSizeMap) -> list[str]:
    """All problems with ``sched``: static walk, simulation, delivery."""
    problems = check_schedule(sched)
    res = run(sched, n, shape, sizes)
    problems += res.violations
    report = verify_delivery(res, n, shape)
    if not report.ok:
        problems.append(f"delivery: {report.mismatches} wrong slots; first: {report.first_mismatch}")
    stats = schedule_stats(sched)
    if res.rounds_executed != stats["rounds"] or res.total_blocks != stats["blocks"]:
        problems.append(f"counters: simulated {res.rounds_executed} rounds / {res.total_blocks} blocks, "
                        f"schedule says {stats['rounds']} / {stats['blocks']}")
    return problems


def cmd_simulate(cfg: ExperimentConfig, schedule_file: str | None = None, verify_only: bool = False,
                 stream=None, err=None) -> int:
    err = err or sys.stderr
    rows, failed = [], False
    for spec, n in cfg.neighborhoods():
        shape = cfg.shape_for(n)
        validate(n, shape)
        size_maps = cfg.size_maps(n)
        if schedule_file is not None:
            try:
                with open(schedule_file) as fh:
                    candidates = [Schedule.from_json(fh.read())]
            except (OSError, ValueError) as exc:
                err.write(f"FAIL {schedule_file}: cannot load schedule: {exc}\n")
                return EXIT_VERIFY
        else:
            if cfg.kind is Kind.ALLGATHER and cfg.mhat is not None:
                raise UsageError("irregular block sizes are only defined for alltoall")
            candidates = [build(cfg.kind, alg, n, size_maps[0][1]) for alg in cfg.algorithms]
        for sched in candidates:
            label = _alg_label(sched.algorithm)
            try:
                problems = verify_schedule(sched, n, shape, BlockSizeMap(sched.sizes))
            except ValueError as exc:
                problems = [str(exc)]
            if problems:
                failed = True
                err.write(f"FAIL {label} {sched.kind.value.lower()} {spec} on {shape}:\n")
                for p in problems[:10]:
                    err.write(f"  {p}\n")
                continue
            if verify_only:
                err.write(f"ok   {label} {sched.kind.value.lower()} {spec} on {shape}\n")
                continue
            stats = schedule_stats(sched)
            for size_label, sizes in size_maps:
                if cfg.mhat is None:
                    m = sizes[0] if len(sizes) else 0
                    nbytes = stats["blocks"] * m
                    modeled = estimate(CostParams(cfg.alpha, cfg.beta, m), stats["rounds"], stats["blocks"])
                else:
                    nbytes = sum(sizes[p.size_index] for st in sched.steps for p in st.parts)
                    modeled = estimate(CostParams(cfg.alpha, cfg.beta, 1), stats["rounds"], nbytes)
                rows.append({
                    "algorithm": label, "collective": sched.kind.value.lower(), "d": n.d,
                    "spec": spec, "s": n.s, "shape": str(shape), "block_size": size_label,
                    "rounds": stats["rounds"], "blocks": stats["blocks"], "bytes": nbytes,
                    "modeled_time": f"{modeled:.12g}",
                })
    if rows:
        emit(rows, SIM_COLUMNS, cfg.out, stream)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_dump_schedule(cfg: ExperimentConfig, stream=None) -> int:
    stream = stream or sys.stdout
    if len(cfg.algorithms) != 1 or len(cfg.nbh_specs) != 1:
        raise UsageError("dump-schedule takes exactly one --nbh and one --alg")
    _, n = cfg.neighborhoods()[0]
    sizes = cfg.size_maps(n)[0][1] if (cfg.mhat or len(cfg.block_sizes) == 1) else BlockSizeMap.uniform(n.s)
    stream.write(build(cfg.kind, cfg.algorithms[0], n, sizes).to_json())
    return EXIT_OK


def _parse_target(tok: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in tok.split(","))
    except ValueError:
        raise UsageError(f"bad target {tok!r}; use an integer or comma-separated vector") from None


def cmd_basis(targets: list[str], max_size: int, out: str = "table", stream=None) -> int:
    stream = stream or sys.stdout
    vecs = [_parse_target(t) for t in targets]
    try:
        basis = find_min_additive_basis(vecs, max_basis_size=max_size)
    except SearchSpaceExceeded as exc:
        sys.stderr.write(f"basis search failed: {exc}\n")
        return EXIT_USAGE

    def show(v):
        return str(v[0]) if len(v) == 1 else "(" + ",".join(map(str, v)) + ")"

    if out == "json":
        json.dump({
            "size": len(basis),
            "basis": [list(v) for v in basis.vectors],
            "decompositions": {show(t): [list(v) for v in basis.decompose(t)] for t in vecs},
        }, stream, indent=2)
        stream.write("\n")
        return EXIT_OK
    stream.write(f"size {len(basis)}: {{{', '.join(show(v) for v in basis.vectors)}}}\n")
    for t in vecs:
        parts = basis.decompose(t)
        stream.write(f"  {show(t)} = {' + '.join(show(v) for v in parts) or '0'}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isocomm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--nbh", action="append", required=True,
                       help="generator (moore:d=3,r=1, octant:d=3,r=3, shales:d=3,r=3,7) or JSON file")
        p.add_argument("--out", choices=["table", "csv", "json"], default="table")

    m = sub.add_parser("metrics", help="s, D, V, W, torus-direct rounds and crossover")
    common(m)
    m.add_argument("--alpha", type=float, default=100.0)
    m.add_argument("--beta", type=float, default=1.0)

    helps = {"simulate": "run schedules on a virtual torus and report counters",
             "dump-schedule": "print one schedule as JSON"}
    for name in ("simulate", "dump-schedule"):
        p = sub.add_parser(name, help=helps[name])
        common(p)
        p.add_argument("--shape", help="torus dimensions, e.g. 4x4x4 (default 4 per dimension)")
        p.add_argument("--collective", choices=list(KIND_NAMES), default="alltoall")
        p.add_argument("--alg", help="comma list of direct, torus, torus-direct")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--m", nargs="+", help="uniform block sizes (default 1..2048, powers of two)")
        group.add_argument("--sizes", help="irregular sizes, mhat=<k>")
        if name == "simulate":
            p.add_argument("--alpha", type=float, default=100.0)
            p.add_argument("--beta", type=float, default=1.0)
            p.add_argument("--schedule", help="verify a dumped schedule file instead of building one")
            p.add_argument("--verify-only", action="store_true")
            p.add_argument("--output", help="write the report here instead of stdout")

    b = sub.add_parser("basis", help="smallest additive basis of the targets")
    b.add_argument("targets", nargs="+", help="integers, or comma-separated vectors like 1,0")
    b.add_argument("--max-size", type=int, default=8)
    b.add_argument("--out", choices=["table", "json"], default="table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "basis":
            return cmd_basis(args.targets, args.max_size, args.out)
        cfg = ExperimentConfig.from_args(args)
        if args.command == "metrics":
            return cmd_metrics(cfg)
        if args.command == "dump-schedule":
            if args.alg is None:
                cfg.algorithms = [Algorithm.TORUS]
            return cmd_dump_schedule(cfg)
        if args.output:
            buf = io.StringIO()
            code = cmd_simulate(cfg, args.schedule, args.verify_only, stream=buf)
            with open(args.output, "w") as fh:
                fh.write(buf.getvalue())
            return code
        return cmd_simulate(cfg, args.schedule, args.verify_only)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"isocomm: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
