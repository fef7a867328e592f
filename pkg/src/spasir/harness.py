"""Experiment orchestration: parameter grids, seeding, CSV persistence.

A run grid is the product of a graph grid (variant, a1, a2, d, p, n) and an
infection grid (scenario, gamma), executed runs_per_cell times per graph.
By default each graph cell generates one fixed graph that all infection
processes share; ``graphs_per_cell`` resamples the network instead.

Seeding: every graph and every run gets its own 64-bit seed derived from
the master seed as blake2b-64 of "master:purpose:indices..." (see
:mod:`spasir.streams`), so any row of the experiments CSV can be replayed
in isolation from the values it records.

The experiments CSV carries the exact header::

    n,variant,A1,A2,d,p,scenario,gamma,run,seed,origin,attack_size,duration,longest_jump,max_displacement

with floats rendered by ``repr`` so parsing returns bit-identical values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path

from .contagion import ContagionScenario
from .generator import SpaGraph, SpaParams, generate
from .geometry import MetricConfig, torus_distance
from .sir import InfectionConfig, InfectionOutcome, run_sir
from .streams import derive_seed

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentRecord",
    "CSV_HEADER",
    "DETAIL_HEADER",
    "run_experiment",
    "run_single_infection",
    "write_detail_csv",
    "parse_records",
]

CSV_HEADER = (
    "n,variant,A1,A2,d,p,scenario,gamma,run,seed,origin,"
    "attack_size,duration,longest_jump,max_displacement"
)
DETAIL_HEADER = "vertex,infection_time,infector,edge_length"


class ConfigError(ValueError):
    """Invalid configuration value; carries the offending field name."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


def _fmt_p(p) -> str:
    return "inf" if p == math.inf else str(int(p))


def _parse_p(tok: str):
    return math.inf if tok.strip() in ("inf", "Inf", "INF") else int(tok)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full grid specification; defaults reproduce the reference protocol
    (modified variant, a1=0.5, a2=1, d=1, n=1000..10000 by 1000, scenarios
    A and B at gamma 1/10/100, 1 fixed graph and 50 runs per cell, origin
    at the oldest vertex)."""

    variants: tuple = ("modified",)
    a1s: tuple = (0.5,)
    a2s: tuple = (1.0,)
    ds: tuple = (1,)
    ps: tuple = (math.inf,)
    ns: tuple = tuple(range(1000, 10001, 1000))
    scenarios: tuple = ("A", "B")
    gammas: tuple = (1.0, 10.0, 100.0)
    origin: str | int = "oldest"
    runs_per_cell: int = 50
    graphs_per_cell: int = 1
    master_seed: int = 0
    out_dir: str = "out"

    def __post_init__(self):
        for n in self.ns:
            if n < 1:
                raise ConfigError("spa.n", f"must be >= 1, got {n}")
        for a1 in self.a1s:
            if not 0.0 < a1 < 1.0:
                raise ConfigError("spa.a1", f"must lie in (0,1), got {a1}")
        for a2 in self.a2s:
            if a2 < 0.0:
                raise ConfigError("spa.a2", f"must be >= 0, got {a2}")
        for d in self.ds:
            if d < 1:
                raise ConfigError("spa.d", f"must be >= 1, got {d}")
        for p in self.ps:
            if p != math.inf and (p < 1 or int(p) != p):
                raise ConfigError("spa.p", f"must be an integer >= 1 or inf, got {p}")
        for v in self.variants:
            if v not in ("original", "modified"):
                raise ConfigError("spa.variant", f"unknown variant {v!r}")
        for s in self.scenarios:
            if s not in ("A", "B"):
                raise ConfigError("infection.scenario", f"must be A or B, got {s!r}")
        for g in self.gammas:
            if g < 0.0:
                raise ConfigError("infection.gamma", f"must be >= 0, got {g}")
        if self.origin not in ("oldest", "random") and not isinstance(self.origin, int):
            raise ConfigError("infection.origin", f"must be oldest, random or an index, got {self.origin!r}")
        if self.runs_per_cell < 1:
            raise ConfigError("infection.runs_per_cell", f"must be >= 1, got {self.runs_per_cell}")
        if self.graphs_per_cell < 1:
            raise ConfigError("infection.graphs_per_cell", f"must be >= 1, got {self.graphs_per_cell}")

    def spa_cells(self) -> list:
        """Graph-side cells in deterministic nesting order."""
        return [
            SpaParams(n=n, a1=a1, a2=a2, metric=MetricConfig(d=d, p=p), variant=v, seed=0)
            for v, a1, a2, d, p, n in product(
                self.variants, self.a1s, self.a2s, self.ds, self.ps, self.ns
            )
        ]

    def infection_cells(self) -> list:
        return list(product(self.scenarios, self.gammas))

    def total_rows(self) -> int:
        return (
            len(self.spa_cells()) * self.graphs_per_cell
            * len(self.infection_cells()) * self.runs_per_cell
        )

    # -- config file / override plumbing ------------------------------------

    _KEYS = {
        "spa.variant": ("variants", lambda s: tuple(s.split(","))),
        "spa.n": ("ns", lambda s: tuple(int(x) for x in s.split(","))),
        "spa.a1": ("a1s", lambda s: tuple(float(x) for x in s.split(","))),
        "spa.a2": ("a2s", lambda s: tuple(float(x) for x in s.split(","))),
        "spa.d": ("ds", lambda s: tuple(int(x) for x in s.split(","))),
        "spa.p": ("ps", lambda s: tuple(_parse_p(x) for x in s.split(","))),
        "infection.scenario": ("scenarios", lambda s: tuple(s.split(","))),
        "infection.gamma": ("gammas", lambda s: tuple(float(x) for x in s.split(","))),
        "infection.origin": ("origin", lambda s: int(s) if s.lstrip("-").isdigit() else s),
        "infection.runs_per_cell": ("runs_per_cell", int),
        "infection.graphs_per_cell": ("graphs_per_cell", int),
        "seeds.master": ("master_seed", int),
        "output.dir": ("out_dir", str),
    }

    @classmethod
    def from_sources(cls, file_text: str | None = None,
                     overrides: dict | None = None) -> "ExperimentConfig":
        """Build from a flat ``section.key = value`` file plus CLI overrides."""
        mapping: dict[str, str] = {}
        if file_text is not None:
            for lineno, raw in enumerate(file_text.splitlines(), start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
                key, value = line.split("=", 1)
                mapping[key.strip()] = value.strip()
        mapping.update(overrides or {})
        kwargs = {}
        for key, value in mapping.items():
            if key not in cls._KEYS:
                raise ConfigError(key, "unknown configuration key")
            name, convert = cls._KEYS[key]
            try:
                kwargs[name] = convert(str(value).replace(" ", ""))
            except (TypeError, ValueError) as exc:
                raise ConfigError(key, f"cannot parse {value!r} ({exc})") from None
        return cls(**kwargs)


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row of the experiments table."""

    n: int
    variant: str
    a1: float
    a2: float
    d: int
    p: float
    scenario: str
    gamma: float
    run: int
    seed: int
    origin: int
    attack_size: int
    duration: int
    longest_jump: float
    max_displacement: float

    def to_csv_row(self) -> str:
        return ",".join(
            [
                str(self.n), self.variant, repr(self.a1), repr(self.a2), str(self.d),
                _fmt_p(self.p), self.scenario, repr(self.gamma), str(self.run),
                str(self.seed), str(self.origin), str(self.attack_size),
                str(self.duration), repr(self.longest_jump), repr(self.max_displacement),
            ]
        )

    @classmethod
    def from_csv_row(cls, row: str) -> "ExperimentRecord":
        f = row.rstrip("\n").split(",")
        if len(f) != 15:
            raise ValueError(f"expected 15 fields, got {len(f)}: {row!r}")
        return cls(
            n=int(f[0]), variant=f[1], a1=float(f[2]), a2=float(f[3]), d=int(f[4]),
            p=_parse_p(f[5]), scenario=f[6], gamma=float(f[7]), run=int(f[8]),
            seed=int(f[9]), origin=int(f[10]), attack_size=int(f[11]),
            duration=int(f[12]), longest_jump=float(f[13]), max_displacement=float(f[14]),
        )


def parse_records(path) -> list:
    """Read an experiments CSV, validating the header."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing experiments CSV header")
    return [ExperimentRecord.from_csv_row(line) for line in lines[1:] if line]


def _record_for(graph: SpaGraph, params: SpaParams, scenario: str, gamma: float,
                run_index: int, seed: int, origin, outcome: InfectionOutcome) -> ExperimentRecord:
    m = params.metric
    return ExperimentRecord(
        n=params.n, variant=params.variant, a1=params.a1, a2=params.a2, d=m.d, p=m.p,
        scenario=scenario, gamma=gamma, run=run_index, seed=seed, origin=outcome.origin,
        attack_size=outcome.attack_size, duration=outcome.duration,
        longest_jump=outcome.longest_jump, max_displacement=outcome.max_displacement,
    )


def _run_cell(config: ExperimentConfig, spa_index: int, cell: SpaParams) -> list:
    records = []
    for graph_index in range(config.graphs_per_cell):
        graph_seed = derive_seed(config.master_seed, "graph", spa_index, graph_index)
        params = replace(cell, seed=graph_seed)
        graph = generate(params)
        adjacency = graph.undirected_neighbors()
        for scenario, gamma in config.infection_cells():
            sc = ContagionScenario.from_gamma(scenario, gamma)
            for run_index in range(config.runs_per_cell):
                seed = derive_seed(
                    config.master_seed, "sir", spa_index, graph_index,
                    scenario, repr(float(gamma)), run_index,
                )
                cfg = InfectionConfig(scenario=sc, seed=seed, origin=config.origin)
                outcome = run_sir(graph, cfg, adjacency=adjacency)
                records.append(
                    _record_for(
                        graph, params, scenario, gamma,
                        graph_index * config.runs_per_cell + run_index, seed,
                        config.origin, outcome,
                    )
                )
    return records


def run_experiment(config: ExperimentConfig, out_path, workers: int = 1,
                   progress=None) -> int:
    """Execute the whole grid, appending one flushed CSV row per run.

    Rows appear in deterministic grid order regardless of ``workers``, so
    identical configs and master seeds give byte-identical files.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    cells = config.spa_cells()
    total = 0
    with open(out_path, "w", encoding="ascii") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.flush()

        def emit(records):
            nonlocal total
            for rec in records:
                fh.write(rec.to_csv_row() + "\n")
                fh.flush()
                total += 1
            if progress is not None:
                progress(total)

        if workers <= 1:
            for spa_index, cell in enumerate(cells):
                emit(_run_cell(config, spa_index, cell))
        else:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                for records in pool.map(
                    _run_cell, [config] * len(cells), range(len(cells)), cells
                ):
                    emit(records)
    return total


def run_single_infection(graph: SpaGraph, scenario: str, gamma: float, origin,
                         seed: int) -> InfectionOutcome:
    sc = ContagionScenario.from_gamma(scenario, gamma)
    cfg = InfectionConfig(scenario=sc, seed=seed, origin=origin)
    return run_sir(graph, cfg)


def write_detail_csv(path, graph: SpaGraph, outcome: InfectionOutcome) -> None:
    """Per-run detail: one row per ever-infected vertex, infection order.

    The recorded infector and the torus length of that tree edge are blank
    for the origin.
    """
    metric = graph.params.metric
    rows = [DETAIL_HEADER]
    order = sorted(
        (int(t), int(v)) for v, t in enumerate(outcome.infection_time) if t >= 0
    )
    for t, v in order:
        parent = int(outcome.infector[v])
        if parent < 0:
            rows.append(f"{v},{t},,")
        else:
            length = torus_distance(graph.positions[v], graph.positions[parent], metric)
            rows.append(f"{v},{t},{parent},{length!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(rows) + "\n", encoding="ascii")
