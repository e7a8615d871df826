"""Stationary (a trous) 2D Haar wavelet transform.

Filters are mean-preserving: low-pass ``(x[i] + x[i+s]) / 2`` and high-pass
``(x[i] - x[i+s]) / 2`` with tap spacing ``s = 2**(level-1)``. With this
normalization the four bands of a level sum back to the previous
approximation exactly, which is what :func:`reconstruct_level` relies on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

BOUNDARY_MODES = {"symmetric": "reflect", "periodic": "wrap"}


class BandType(str, enum.Enum):
    A = "A"  # LL
    H = "H"  # LH
    V = "V"  # HL
    D = "D"  # HH

    @property
    def is_detail(self) -> bool:
        return self is not BandType.A


DETAIL_BANDS = (BandType.H, BandType.V, BandType.D)
ALL_BANDS = (BandType.A, BandType.H, BandType.V, BandType.D)


@dataclass
class CoefficientPlane:
    values: np.ndarray
    band: BandType
    level: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass
class WaveletPyramid:
    levels: int
    planes: dict = field(default_factory=dict)  # (BandType, level) -> ndarray

    def __getitem__(self, key) -> np.ndarray:
        band, level = key
        return self.planes[(BandType(band), level)]

    def plane(self, band, level: int) -> CoefficientPlane:
        band = BandType(band)
        return CoefficientPlane(self.planes[(band, level)], band, level)

    def items(self):
        for level in range(1, self.levels + 1):
            for band in ALL_BANDS:
                yield band, level, self.planes[(band, level)]


def _split(x: np.ndarray, step: int, axis: int, mode: str) -> tuple[np.ndarray, np.ndarray]:
    n = x.shape[axis]
    pad = [(0, 0)] * x.ndim
    pad[axis] = (0, step)
    shifted = np.pad(x, pad, mode=BOUNDARY_MODES[mode])
    shifted = np.take(shifted, np.arange(step, n + step), axis=axis)
    return (x + shifted) * 0.5, (x - shifted) * 0.5


def decompose(frame: np.ndarray, levels: int, boundary: str = "symmetric") -> WaveletPyramid:
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if boundary not in BOUNDARY_MODES:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    approx = np.asarray(frame, dtype=np.float64)
    if approx.ndim != 2:
        raise ValueError("frame must be 2D")
    need = 2 ** levels
    if approx.shape[0] < need or approx.shape[1] < need:
        raise ValueError(
            f"frame {approx.shape[1]}x{approx.shape[0]} too small for {levels} levels "
            f"(need >= {need} in both axes)"
        )
    pyr = WaveletPyramid(levels)
    for level in range(1, levels + 1):
        step = 2 ** (level - 1)
        row_lo, row_hi = _split(approx, step, axis=1, mode=boundary)
        a, v = _split(row_lo, step, axis=0, mode=boundary)
        h, d = _split(row_hi, step, axis=0, mode=boundary)
        pyr.planes[(BandType.A, level)] = a
        pyr.planes[(BandType.H, level)] = h
        pyr.planes[(BandType.V, level)] = v
        pyr.planes[(BandType.D, level)] = d
        approx = a
    return pyr


def reconstruct_level(a: CoefficientPlane, h: CoefficientPlane, v: CoefficientPlane,
                      d: CoefficientPlane) -> CoefficientPlane:
    """Invert one level: returns the approximation plane of level ``l - 1``."""
    planes = (a, h, v, d)
    if len({p.level for p in planes}) != 1:
        raise ValueError("planes come from different levels")
    if len({p.shape for p in planes}) != 1:
        raise ValueError("plane dimensions differ")
    for p, band in zip(planes, ALL_BANDS):
        if p.band is not band:
            raise ValueError(f"expected band {band.value}, got {p.band.value}")
    values = a.values + h.values + v.values + d.values
    return CoefficientPlane(values, BandType.A, a.level - 1)


def plane_std(plane) -> float:
    values = plane.values if isinstance(plane, CoefficientPlane) else np.asarray(plane)
    if values.size == 0:
        raise ValueError("empty plane")
    return float(np.std(values, dtype=np.float64))


def dump_bands(pyr: WaveletPyramid, directory: str | Path, prefix: str = "") -> None:
    """Write every band as an 8-bit image (min/max stretched) for inspection."""
    import cv2

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for band, level, values in pyr.items():
        lo, hi = float(values.min()), float(values.max())
        scaled = np.zeros_like(values) if hi == lo else (values - lo) * (255.0 / (hi - lo))
        name = f"{prefix}L{level}{band.value}.png"
        cv2.imwrite(str(directory / name), np.rint(scaled).astype(np.uint8))
