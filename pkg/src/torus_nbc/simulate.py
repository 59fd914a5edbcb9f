"""Monte Carlo fault accumulation: repeated trials until the mesh breaks.

Each trial starts from a fully healthy mesh and repeats rounds: draw a
fault source uniformly at random, add it to the source set, remove its
closed neighborhood, and classify what is left.  The trial stops at the
first round whose survival graph is disconnected, complete, or empty, and
records how many sources that took.

Reproducibility contract: trial ``i`` of a run draws from its own stream
whose seed is derived from the master seed and ``i`` alone (see
:mod:`torus_nbc._rng`), so reports are byte-identical for a given
``(mesh, trials, seed, pool policy)`` no matter how many workers ran the
trials or how they were chunked.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from ._rng import derive_stream_seed
from .graphs import GraphState
from .mesh import Coords, Mesh, parse_mesh

_MASK64 = 2**64 - 1
DEFAULT_CHUNK = 4096

#: Seed of trial ``i`` under master ``seed``; ``run_trial`` with this value
#: reproduces exactly what ``run_simulation`` did for that trial.
derive_trial_seed = derive_stream_seed


class PoolPolicy(Enum):
    """Where each round's source is drawn from.

    EXCLUDE_SOURCES draws from every vertex not already chosen as a
    source, so an already-faulty bystander can still become a source.
    EXCLUDE_ALL_FAULTY restricts draws to vertices still alive.
    """

    EXCLUDE_SOURCES = "exclude-sources"
    EXCLUDE_ALL_FAULTY = "exclude-all-faulty"

    @property
    def code(self) -> int:
        return 0 if self is PoolPolicy.EXCLUDE_SOURCES else 1

    @classmethod
    def from_token(cls, token: str) -> "PoolPolicy":
        for p in cls:
            if p.value == token:
                return p
        raise ValueError(f"unknown pool policy {token!r}")


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome: the source sequence in draw order, its length,
    and the terminal classification."""

    mu: int
    terminal_state: GraphState
    sources: tuple[Coords, ...]


def run_trial(mesh: Mesh, trial_seed: int,
              policy: PoolPolicy = PoolPolicy.EXCLUDE_SOURCES) -> TrialRecord:
    """Run a single trial from an explicit per-trial seed."""
    sources_out = np.empty(mesh.vertex_count, dtype=np.int64)
    mu, cls = _kernels.single_trial_kernel(
        mesh.neighbor_table, np.uint64(trial_seed & _MASK64), policy.code,
        sources_out,
    )
    mu = int(mu)
    return TrialRecord(
        mu=mu,
        terminal_state=GraphState(int(cls)),
        sources=tuple(mesh.decode(int(f)) for f in sources_out[:mu]),
    )


def run_trials_arrays(mesh: Mesh, trials: int, seed: int,
                      policy: PoolPolicy = PoolPolicy.EXCLUDE_SOURCES,
                      workers: int = 1,
                      chunk: int = DEFAULT_CHUNK) -> tuple[np.ndarray, np.ndarray]:
    """Run ``trials`` trials; returns per-trial arrays ``(mu, terminal)``.

    Worker threads fill disjoint slices of the preallocated result
    arrays, and every trial derives its stream from the master seed and
    its own index, so the arrays do not depend on ``workers`` or
    ``chunk``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    nbr = mesh.neighbor_table
    master = np.uint64(seed & _MASK64)
    mu_out = np.empty(trials, dtype=np.int64)
    cls_out = np.empty(trials, dtype=np.int64)
    spans = [(at, min(chunk, trials - at)) for at in range(0, trials, chunk)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(
                lambda span: _kernels.trial_chunk_kernel(
                    nbr, master, span[0], span[1], policy.code, mu_out, cls_out
                ),
                spans,
            ))
    else:
        for start, count in spans:
            _kernels.trial_chunk_kernel(nbr, master, start, count, policy.code,
                                        mu_out, cls_out)
    return mu_out, cls_out


@dataclass(frozen=True)
class SimulationReport:
    """Aggregate of a simulation run; everything needed to reproduce it
    plus the source-count distribution and its summary statistics."""

    mesh: Mesh
    trials: int
    seed: int
    pool_policy: PoolPolicy
    histogram: dict[int, int]  # source count -> trials, ascending keys

    @property
    def mean(self) -> float:
        total = sum(m * c for m, c in self.histogram.items())
        return total / self.trials

    @property
    def median(self) -> int:
        """Lower median of the observed source counts."""
        target = (self.trials - 1) // 2 + 1
        cum = 0
        for m, c in self.histogram.items():
            cum += c
            if cum >= target:
                return m
        raise AssertionError("histogram does not cover all trials")

    @property
    def mode(self) -> int:
        """Most frequent source count; ties go to the smallest."""
        best_m, best_c = None, -1
        for m, c in self.histogram.items():
            if c > best_c:
                best_m, best_c = m, c
        return best_m

    @property
    def min_observed(self) -> int:
        return next(iter(self.histogram))

    def fraction_at(self, mu: int) -> float:
        """Share of trials that ended with exactly ``mu`` sources."""
        return self.histogram.get(mu, 0) / self.trials

    def to_json(self) -> str:
        payload = {
            "mesh": self.mesh.literal,
            "trials": self.trials,
            "seed": self.seed,
            "pool_policy": self.pool_policy.value,
            "histogram": {str(m): c for m, c in self.histogram.items()},
            "mean": self.mean,
            "median": self.median,
            "mode": self.mode,
            "min_observed": self.min_observed,
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SimulationReport":
        raw = json.loads(text)
        hist = {int(k): int(v) for k, v in raw["histogram"].items()}
        report = cls(
            mesh=parse_mesh(raw["mesh"]),
            trials=int(raw["trials"]),
            seed=int(raw["seed"]),
            pool_policy=PoolPolicy.from_token(raw["pool_policy"]),
            histogram=dict(sorted(hist.items())),
        )
        for key in ("median", "mode", "min_observed"):
            if int(raw[key]) != getattr(report, key):
                raise ValueError(f"stored {key} disagrees with the histogram")
        return report

    def to_csv(self) -> str:
        lines = ["faulty_sources,count"]
        for m, c in self.histogram.items():
            lines.append(f"{m},{c}")
        return "\n".join(lines) + "\n"


def run_simulation(mesh: Mesh, trials: int, seed: int,
                   policy: PoolPolicy = PoolPolicy.EXCLUDE_SOURCES,
                   workers: int = 1,
                   chunk: int = DEFAULT_CHUNK) -> SimulationReport:
    """Run the full experiment and aggregate it into a report."""
    mu, _ = run_trials_arrays(mesh, trials, seed, policy, workers, chunk)
    counts = np.bincount(mu)
    histogram = {int(m): int(c) for m, c in enumerate(counts) if c > 0}
    return SimulationReport(
        mesh=mesh,
        trials=trials,
        seed=seed & _MASK64,
        pool_policy=policy,
        histogram=histogram,
    )


def fraction_at(report: SimulationReport, mu: int) -> float:
    return report.fraction_at(mu)
