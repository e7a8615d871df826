"""Weighted likelihood fusion across wavelet levels and band types."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .swt import ALL_BANDS, BandType

LOG_FLOOR = 1e-300


def correlation(delta, alpha: float):
    """First-order autoregressive correlation ``alpha ** delta``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha_corr must lie in (0, 1), got {alpha}")
    if np.any(np.asarray(delta) < 0):
        raise ValueError("distance must be nonnegative")
    return np.power(alpha, delta)


def translation_weight(level: int, alpha: float) -> float:
    """Mean correlation between the pixels of a level's ``2**l`` square support
    and the support's geometric center."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    side = 2 ** level
    c = (side - 1) / 2.0
    idx = np.arange(side) - c
    dist = np.sqrt(idx[:, None] ** 2 + idx[None, :] ** 2)
    return float(np.mean(correlation(dist, alpha)))


def noise_weight(sigma_band: float, sigma_noise: float) -> float:
    if sigma_band <= 0:
        return 0.0
    return max(0.0, (sigma_band - sigma_noise) / sigma_band)


@dataclass
class FusionWeights:
    alpha: float
    translation: dict = field(default_factory=dict)   # level -> omega_t
    noise: dict = field(default_factory=dict)         # (band, level) -> omega_n

    @classmethod
    def compute(cls, band_std: dict, noise_sigma: float, levels: int, alpha: float,
                scale_noise: bool = False):
        """``noise_sigma`` is measured on the level-1 diagonal band. With
        ``scale_noise`` it is carried to level ``l`` as ``noise_sigma / 2**(l-1)``,
        the white-noise gain of the mean-preserving Haar filters."""
        fw = cls(alpha)
        for level in range(1, levels + 1):
            fw.translation[level] = translation_weight(level, alpha)
            sn = noise_sigma / 2 ** (level - 1) if scale_noise else noise_sigma
            for band in ALL_BANDS:
                fw.noise[(band, level)] = noise_weight(band_std[(band, level)], sn)
        return fw

    def __getitem__(self, key) -> float:
        band, level = key
        return self.translation[level] * self.noise[(BandType(band), level)]

    def for_band(self, band, levels) -> list[float]:
        return [self[band, level] for level in levels]

    def report(self) -> str:
        lines = [f"# alpha_corr = {self.alpha}", "band level omega_t omega_n omega"]
        for level in sorted(self.translation):
            for band in ALL_BANDS:
                wt = self.translation[level]
                wn = self.noise[(band, level)]
                lines.append(f"{band.value} {level} {wt:.6f} {wn:.6f} {wt * wn:.6f}")
        return "\n".join(lines) + "\n"


def fuse_levels(planes, weights) -> np.ndarray:
    """Weighted mean over levels: ``(1/N) * sum_l w_l * p_l``."""
    planes = list(planes)
    weights = list(weights)
    if not planes:
        raise ValueError("no planes to fuse")
    if len(weights) != len(planes):
        raise ValueError(f"{len(planes)} planes but {len(weights)} weights")
    shape = np.shape(planes[0])
    out = np.zeros(shape)
    for p, w in zip(planes, weights):
        if np.shape(p) != shape:
            raise ValueError("plane dimensions differ")
        out += w * np.asarray(p)
    out /= len(planes)
    return out


def fuse_levels_product(planes) -> np.ndarray:
    """Naive independent-level fusion (ablation only)."""
    planes = list(planes)
    if not planes:
        raise ValueError("no planes to fuse")
    out = np.ones(np.shape(planes[0]))
    for p in planes:
        if np.shape(p) != out.shape:
            raise ValueError("plane dimensions differ")
        out *= p
    return out


def _log(p) -> np.ndarray:
    return np.log(np.maximum(p, LOG_FLOOR))


def fuse_bands(fg_planes, bg_planes) -> np.ndarray:
    """Foreground where the product of foreground likelihoods beats the
    product of background likelihoods (strictly)."""
    fg_planes = list(fg_planes)
    bg_planes = list(bg_planes)
    if len(fg_planes) != len(bg_planes) or not fg_planes:
        raise ValueError("need matching, non-empty foreground/background plane lists")
    shape = np.shape(fg_planes[0])
    if any(np.shape(p) != shape for p in fg_planes + bg_planes):
        raise ValueError("plane dimensions differ")
    score = np.zeros(shape)
    for f, b in zip(fg_planes, bg_planes):
        score += _log(f)
        score -= _log(b)
    return score > 0


def decide(hf_decision, fg_a, bg_a, mode: str = "or") -> np.ndarray:
    """Combine the detail-band decision with the approximation-band decision."""
    shape = np.shape(hf_decision)
    if np.shape(fg_a) != shape or np.shape(bg_a) != shape:
        raise ValueError("plane dimensions differ")
    ll = np.asarray(fg_a) > np.asarray(bg_a)
    hf = np.asarray(hf_decision, dtype=bool)
    if mode == "or":
        return hf | ll
    if mode == "and":
        return hf & ll
    raise ValueError(f"unknown combination mode {mode!r}")
