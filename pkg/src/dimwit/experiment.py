"""Finite-statistics layer: shot sampling, count files, pooled and per-job analysis.

Dataset files are JSON::

    {"n": 5,
     "jobs": [{"job_id": "j0", "scheduling": "ALAP", "shots_per_cell": 20000,
               "counts0": [[...], ...]}],
     "metadata": {...}}

Each stored job is one analysis unit for the per-job witness.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .states import ValidationError
from .witness import (
    DEFAULT_SIGMA,
    UnreliableErrorEstimate,
    WitnessResult,
    analyze,
    check_probabilities,
    dimension_verdict,
    witness,
)


class DatasetParseError(ValueError):
    """Malformed dataset file; the message names the offending field."""


class Scheduling(str, enum.Enum):
    ALAP = "ALAP"
    ASAP = "ASAP"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class JobCounts:
    job_id: str
    scheduling: Scheduling
    shots_per_cell: int
    counts0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scheduling", Scheduling(self.scheduling))
        c = np.asarray(self.counts0)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValidationError(f"job {self.job_id}: counts0 must be square, got {c.shape}")
        if not np.all(c == np.round(c)):
            raise ValidationError(f"job {self.job_id}: counts0 must be integers")
        c = c.astype(np.int64)
        if int(self.shots_per_cell) < 1:
            raise ValidationError(f"job {self.job_id}: shots_per_cell must be >= 1")
        if c.min() < 0 or c.max() > self.shots_per_cell:
            raise ValidationError(
                f"job {self.job_id}: counts0 must lie in [0, {self.shots_per_cell}]"
            )
        object.__setattr__(self, "shots_per_cell", int(self.shots_per_cell))
        object.__setattr__(self, "counts0", c)

    @property
    def n(self) -> int:
        return self.counts0.shape[0]

    def frequencies(self) -> np.ndarray:
        return self.counts0 / self.shots_per_cell

    def __eq__(self, other):
        if not isinstance(other, JobCounts):
            return NotImplemented
        return (
            self.job_id == other.job_id
            and self.scheduling == other.scheduling
            and self.shots_per_cell == other.shots_per_cell
            and np.array_equal(self.counts0, other.counts0)
        )

    def to_json(self) -> dict:
        return {
            "job_id": self.job_id,
            "scheduling": self.scheduling.value,
            "shots_per_cell": self.shots_per_cell,
            "counts0": self.counts0.tolist(),
        }


@dataclass(frozen=True)
class ExperimentDataset:
    n: int
    jobs: tuple[JobCounts, ...]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        for job in self.jobs:
            if job.n != self.n:
                raise ValidationError(f"job {job.job_id} has n={job.n}, dataset has n={self.n}")

    def partition(self) -> dict[str, "ExperimentDataset"]:
        """Sub-datasets keyed by scheduling label, in first-seen order."""
        out: dict[str, list[JobCounts]] = {}
        for job in self.jobs:
            out.setdefault(job.scheduling.value, []).append(job)
        return {k: ExperimentDataset(self.n, tuple(v), dict(self.metadata)) for k, v in out.items()}

    def to_json(self) -> dict:
        return {"n": self.n, "jobs": [j.to_json() for j in self.jobs], "metadata": self.metadata}


def sample_counts(
    p,
    N: int,
    seed: int,
    *,
    job_index: int = 0,
    job_id: str | None = None,
    scheduling: Scheduling | str = Scheduling.UNSPECIFIED,
) -> JobCounts:
    """One job of binomial counts; cell ``(i, j)`` uses its own stream keyed by
    ``(seed, job_index, i, j)``."""
    if N < 1:
        raise ValueError(f"shot count must be >= 1, got {N}")
    p = check_probabilities(p)
    n = p.shape[0]
    counts = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            rng = np.random.default_rng(np.random.SeedSequence([seed, job_index, i, j]))
            counts[i, j] = rng.binomial(N, p[i, j])
    return JobCounts(job_id or f"job{job_index}", Scheduling(scheduling), N, counts)


def synthetic_dataset(
    p, N: int, jobs: int, seed: int, scheduling: Sequence[str] | str = Scheduling.UNSPECIFIED,
    metadata: dict | None = None,
) -> ExperimentDataset:
    if jobs < 1:
        raise ValueError(f"need at least one job, got {jobs}")
    labels = [scheduling] * jobs if isinstance(scheduling, str) else list(scheduling)
    if len(labels) != jobs:
        raise ValueError("one scheduling label per job")
    p = np.asarray(p, dtype=float)
    js = tuple(sample_counts(p, N, seed, job_index=k, scheduling=labels[k]) for k in range(jobs))
    meta = {"seed": seed, "source": "synthetic"}
    meta.update(metadata or {})
    return ExperimentDataset(p.shape[0], js, meta)


def pooled_frequencies(ds: ExperimentDataset) -> tuple[np.ndarray, int]:
    if not ds.jobs:
        raise ValidationError("dataset has no jobs")
    counts = sum(j.counts0 for j in ds.jobs)
    shots = sum(j.shots_per_cell for j in ds.jobs)
    return counts / shots, shots


def pooled_analysis(ds: ExperimentDataset) -> WitnessResult:
    """Witness of the aggregate frequencies, analytic error at the total shot count."""
    p, shots = pooled_frequencies(ds)
    return analyze(p, shots)


def per_job_witnesses(ds: ExperimentDataset) -> np.ndarray:
    return np.array([witness(j.frequencies()) for j in ds.jobs])


def per_job_analysis(ds: ExperimentDataset) -> WitnessResult:
    """Mean of per-job determinants with the empirical standard error of that mean."""
    k = len(ds.jobs)
    if k < 2:
        raise ValidationError(
            f"per-job analysis needs >= 2 jobs (got {k}); use pooled_analysis instead"
        )
    ws = per_job_witnesses(ds)
    err = float(np.std(ws, ddof=1) / math.sqrt(k))
    shots = float(np.mean([j.shots_per_cell for j in ds.jobs]))
    return WitnessResult(W=float(ws.mean()), stderr=err, n=ds.n, N_per_cell=shots)


# -- file I/O ----------------------------------------------------------------


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise DatasetParseError(f"{where}: expected an object")
    if key not in obj:
        raise DatasetParseError(f"{where}: missing field '{key}'")
    return obj[key]


def dataset_from_json(obj: Any) -> ExperimentDataset:
    n = _field(obj, "n", "dataset")
    if not isinstance(n, int) or n < 1:
        raise DatasetParseError(f"dataset.n: expected a positive integer, got {n!r}")
    raw_jobs = _field(obj, "jobs", "dataset")
    if not isinstance(raw_jobs, list):
        raise DatasetParseError("dataset.jobs: expected a list")
    jobs = []
    for k, rj in enumerate(raw_jobs):
        where = f"jobs[{k}]"
        counts = _field(rj, "counts0", where)
        try:
            arr = np.array(counts, dtype=float)
        except (TypeError, ValueError) as exc:
            raise DatasetParseError(f"{where}.counts0: not a numeric matrix ({exc})") from None
        shots = _field(rj, "shots_per_cell", where)
        if not isinstance(shots, int):
            raise DatasetParseError(f"{where}.shots_per_cell: expected an integer, got {shots!r}")
        sched = rj.get("scheduling", Scheduling.UNSPECIFIED.value)
        try:
            sched = Scheduling(sched)
        except ValueError:
            raise DatasetParseError(f"{where}.scheduling: unknown label {sched!r}") from None
        jobs.append(JobCounts(str(_field(rj, "job_id", where)), sched, shots, arr))
    meta = obj.get("metadata", {})
    if not isinstance(meta, dict):
        raise DatasetParseError("dataset.metadata: expected an object")
    return ExperimentDataset(n, tuple(jobs), meta)


def load_dataset(path) -> ExperimentDataset:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return dataset_from_json(obj)


def save_dataset(ds: ExperimentDataset, path) -> None:
    Path(path).write_text(json.dumps(ds.to_json(), indent=1, sort_keys=True) + "\n")


# -- reporting ---------------------------------------------------------------


def _result_dict(res: WitnessResult, sigma: float) -> dict:
    return res.to_dict(sigma)


def _verdict(res: WitnessResult, sigma: float) -> str:
    try:
        return dimension_verdict(res, sigma).value
    except UnreliableErrorEstimate:
        return "unreliable"


def _single_report(ds: ExperimentDataset, sigma: float, ideal) -> dict:
    p, shots = pooled_frequencies(ds)
    pooled = pooled_analysis(ds)
    out: dict[str, Any] = {
        "jobs": len(ds.jobs),
        "total_shots_per_cell": shots,
        "pooled": _result_dict(pooled, sigma),
        "frequencies": p.tolist(),
        "per_job_W": per_job_witnesses(ds).tolist(),
    }
    out["per_job"] = (
        _result_dict(per_job_analysis(ds), sigma) if len(ds.jobs) >= 2 else None
    )
    if ideal is not None:
        ideal = np.asarray(ideal, dtype=float)
        if ideal.shape == p.shape:
            out["deviation"] = (p - ideal).tolist()
    return out


def full_report(ds: ExperimentDataset, sigma_threshold: float = DEFAULT_SIGMA, ideal=None) -> dict:
    """Pooled and per-job witnesses with verdicts, overall and per scheduling label.

    ``ideal`` defaults to the circuit prediction when ``n == 5``.
    """
    if ideal is None and ds.n == 5:
        from .circuit import ideal_probability_matrix

        ideal = ideal_probability_matrix()
    report = {
        "n": ds.n,
        "sigma_threshold": sigma_threshold,
        "metadata": ds.metadata,
        "overall": _single_report(ds, sigma_threshold, ideal),
        "by_scheduling": {
            k: _single_report(sub, sigma_threshold, ideal) for k, sub in ds.partition().items()
        },
    }
    verdicts = [report["overall"]["pooled"]["verdict"]]
    if report["overall"]["per_job"] is not None:
        verdicts.append(report["overall"]["per_job"]["verdict"])
    report["verdict"] = "violated" if "violated" in verdicts else verdicts[0]
    return report


def _fmt_matrix(m) -> list[str]:
    return ["  " + " ".join(f"{x:9.6f}" for x in row) for row in m]


def _fmt_result(name: str, r: dict | None) -> str:
    if r is None:
        return f"  {name:8s} n/a (fewer than 2 jobs)"
    return (
        f"  {name:8s} W = {r['W']:+.4e}  stderr = {r['stderr']:.4e}  "
        f"z = {r['zscore']:.2f}  {r['verdict']}"
    )


def report_text(report: dict) -> str:
    lines = [f"n = {report['n']}, sigma threshold = {report['sigma_threshold']}"]
    for k, v in sorted(report["metadata"].items()):
        lines.append(f"  {k}: {v}")
    sections = [("all jobs", report["overall"])]
    sections += [(f"scheduling {k}", v) for k, v in report["by_scheduling"].items()]
    for title, sec in sections:
        lines.append(f"[{title}] jobs = {sec['jobs']}, shots per cell = {sec['total_shots_per_cell']}")
        lines.append(_fmt_result("pooled", sec["pooled"]))
        lines.append(_fmt_result("per-job", sec["per_job"]))
    lines.append("pooled frequencies:")
    lines += _fmt_matrix(report["overall"]["frequencies"])
    if "deviation" in report["overall"]:
        lines.append("deviation from ideal:")
        lines += _fmt_matrix(report["overall"]["deviation"])
    lines.append(f"verdict: {report['verdict']}")
    return "\n".join(lines)


def per_job_csv(ds: ExperimentDataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "job_id", "scheduling", "shots_per_cell", "W"])
    for k, (job, val) in enumerate(zip(ds.jobs, per_job_witnesses(ds))):
        w.writerow([k, job.job_id, job.scheduling.value, job.shots_per_cell, repr(float(val))])
    return buf.getvalue()
