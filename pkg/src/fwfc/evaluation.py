"""Pixel-level Recall / Precision / F-measure against ground-truth masks."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp,
                               self.fn + other.fn, self.tn + other.tn)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion_counts(pred, gt) -> ConfusionCounts:
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if pred.shape != gt.shape:
        raise ValueError(f"prediction {pred.shape} and ground truth {gt.shape} differ")
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    return ConfusionCounts(tp, fp, fn, pred.size - tp - fp - fn)


@dataclass(frozen=True)
class Metrics:
    recall: float
    precision: float
    f_measure: float


def metrics(counts: ConfusionCounts) -> Metrics:
    r = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    p = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return Metrics(r, p, f)


@dataclass
class VideoResult:
    name: str
    counts: ConfusionCounts
    frames: int

    @property
    def metrics(self) -> Metrics:
        return metrics(self.counts)


def accumulate(pairs) -> tuple[ConfusionCounts, int]:
    """Pool counts over ``(pred, gt)`` frame pairs."""
    total = ConfusionCounts()
    n = 0
    for pred, gt in pairs:
        total = total + confusion_counts(pred, gt)
        n += 1
    return total, n


def average(results: list[VideoResult]) -> Metrics:
    """Unweighted mean of per-video metrics."""
    if not results:
        return Metrics(0.0, 0.0, 0.0)
    ms = [r.metrics for r in results]
    return Metrics(
        float(np.mean([m.recall for m in ms])),
        float(np.mean([m.precision for m in ms])),
        float(np.mean([m.f_measure for m in ms])),
    )


def write_report(results: list[VideoResult], path: str | Path) -> None:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["video", "recall", "precision", "fmeasure"])
        for r in results:
            m = r.metrics
            w.writerow([r.name, f"{m.recall:.6f}", f"{m.precision:.6f}", f"{m.f_measure:.6f}"])
        m = average(results)
        w.writerow(["average", f"{m.recall:.6f}", f"{m.precision:.6f}", f"{m.f_measure:.6f}"])


def read_report(path: str | Path) -> dict[str, Metrics]:
    with open(path, newline="") as fh:
        return {
            row["video"]: Metrics(float(row["recall"]), float(row["precision"]),
                                  float(row["fmeasure"]))
            for row in csv.DictReader(fh)
        }
