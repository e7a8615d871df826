"""Per-band adaptive Gaussian mixture background models.

Every coefficient location of a wavelet band carries its own mixture with
an adaptive number of components (at most ``max_components``). The per-pixel
recursion runs in numba kernels; the arrays are laid out ``(rows, cols, M)``
with components kept sorted by descending weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .swt import ALL_BANDS, BandType, CoefficientPlane, decompose

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
MAD_SCALE = 0.6745
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class GMMParams:
    """Hyperparameters of one bank. Variances are in squared coefficient units."""

    learning_rate: float = 0.005
    max_components: int = 5
    bg_threshold: float = 0.1       # c_f: background set covers > 1 - c_f of the weight
    match_gate: float = 3.0         # lambda, in standard deviations
    var_init: float = 15.0 ** 2
    var_min: float = 4.0 ** 2
    var_max: float = 5 * 15.0 ** 2
    prune: float | None = None      # c_prune; None means 0.01 * learning_rate
    boost: float = 0.05             # mean-dependent variance enlargement (detail bands)

    def __post_init__(self):
        for name in ("learning_rate", "bg_threshold", "match_gate", "var_init", "var_min", "var_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_components < 1:
            raise ValueError("max_components must be >= 1")
        if self.var_min > self.var_max:
            raise ValueError("var_min exceeds var_max")
        if self.boost < 0 or (self.prune is not None and self.prune < 0):
            raise ValueError("boost and prune must be nonnegative")

    @property
    def prune_value(self) -> float:
        return 0.01 * self.learning_rate if self.prune is None else self.prune

    def scaled(self, ratio: float) -> "GMMParams":
        if not ratio > 0:
            raise ValueError(f"scale ratio must be positive, got {ratio}")
        return replace(self, var_init=self.var_init * ratio,
                       var_min=self.var_min * ratio, var_max=self.var_max * ratio)


@dataclass
class BandModelBank:
    band: BandType
    level: int
    params: GMMParams
    weight: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    ncomp: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.ncomp.shape

    @property
    def boost(self) -> float:
        return self.params.boost if self.band.is_detail else 0.0

    def _check(self, plane) -> np.ndarray:
        values = plane.values if isinstance(plane, CoefficientPlane) else plane
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != self.shape:
            raise ValueError(f"plane shape {values.shape} does not match bank {self.shape}")
        return values


def init_bank(width: int, height: int, band, level: int, params: GMMParams,
              scale_ratio: float) -> BandModelBank:
    if width <= 0 or height <= 0:
        raise ValueError("bank dimensions must be positive")
    m = params.max_components
    return BandModelBank(
        band=BandType(band), level=level, params=params.scaled(scale_ratio),
        weight=np.zeros((height, width, m)), mean=np.zeros((height, width, m)),
        var=np.zeros((height, width, m)), ncomp=np.zeros((height, width), dtype=np.int32),
    )


@numba.njit(cache=True, error_model="numpy")
def _kernel(x, w, mu, var, ncomp, lr, prune_step, gate2, vinit, vmin, vmax, boost,
            cf, skip, out, do_update, do_eval):
    """Mixture recursion and/or background density over flat ``(N, M)`` arrays.

    Written as a single loop body: splitting it into per-pixel helpers costs
    roughly a factor of two in this hot path.
    """
    M = w.shape[1]
    use_skip = skip.shape[0] == x.shape[0]
    for n in range(x.shape[0]):
        xn = x[n]
        k = ncomp[n]
        if do_update and not (use_skip and skip[n]):
            if k == 0:
                b = boost * xn * xn
                w[n, 0] = 1.0
                mu[n, 0] = xn
                var[n, 0] = min(max(vinit + b, vmin + b), vmax + b)
                k = 1
            else:
                # nearest component inside the gate
                best = -1
                best_d = np.inf
                for m in range(k):
                    d = (xn - mu[n, m]) ** 2
                    if d < gate2 * var[n, m] and d < best_d:
                        best = m
                        best_d = d

                for m in range(k):
                    o = 1.0 if m == best else 0.0
                    w[n, m] += lr * (o - w[n, m]) - prune_step

                if best >= 0:
                    step = lr / w[n, best]
                    diff = xn - mu[n, best]
                    mu[n, best] += step * diff
                    b = boost * mu[n, best] * mu[n, best]
                    v = var[n, best] + step * (diff * diff - var[n, best])
                    var[n, best] = min(max(v, vmin + b), vmax + b)
                else:
                    if k < M:
                        slot = k
                        k += 1
                    else:
                        slot = 0
                        for m in range(1, k):
                            if w[n, m] < w[n, slot]:
                                slot = m
                    b = boost * xn * xn
                    w[n, slot] = lr
                    mu[n, slot] = xn
                    var[n, slot] = min(max(vinit + b, vmin + b), vmax + b)

                # drop non-positive weights, keeping order
                kept = 0
                for m in range(k):
                    if w[n, m] > 0.0:
                        if kept != m:
                            w[n, kept] = w[n, m]
                            mu[n, kept] = mu[n, m]
                            var[n, kept] = var[n, m]
                        kept += 1
                for m in range(kept, k):
                    w[n, m] = 0.0
                    mu[n, m] = 0.0
                    var[n, m] = 0.0
                k = kept

                total = 0.0
                for m in range(k):
                    total += w[n, m]
                for m in range(k):
                    w[n, m] /= total

                # stable insertion sort, descending weight
                for m in range(1, k):
                    wm, mm, vm = w[n, m], mu[n, m], var[n, m]
                    j = m - 1
                    while j >= 0 and w[n, j] < wm:
                        w[n, j + 1] = w[n, j]
                        mu[n, j + 1] = mu[n, j]
                        var[n, j + 1] = var[n, j]
                        j -= 1
                    w[n, j + 1] = wm
                    mu[n, j + 1] = mm
                    var[n, j + 1] = vm
            ncomp[n] = k

        if do_eval:
            # smallest prefix of components holding more than 1 - cf of the weight
            acc = 0.0
            cum = 0.0
            for m in range(k):
                d = xn - mu[n, m]
                v = var[n, m]
                acc += w[n, m] * math.exp(-0.5 * d * d / v) / math.sqrt(v) * INV_SQRT_2PI
                cum += w[n, m]
                if cum > 1.0 - cf:
                    break
            out[n] = acc


_NO_SKIP = np.zeros(0, dtype=np.bool_)
_NO_OUT = np.zeros(0)


def _run(bank: BandModelBank, plane, skip, out, do_update: bool, do_eval: bool):
    x = bank._check(plane)
    if skip is None:
        skip = _NO_SKIP
    else:
        if np.shape(skip) != bank.shape:
            raise ValueError("skip mask shape does not match bank")
        skip = np.ascontiguousarray(skip, dtype=np.bool_).reshape(-1)
    if not do_eval:
        out = _NO_OUT
    elif out is None:
        out = np.empty(bank.shape)
    elif out.shape != bank.shape or out.dtype != np.float64 or not out.flags.c_contiguous:
        raise ValueError("out must be a contiguous float64 array of the bank shape")
    p = bank.params
    m = bank.weight.shape[-1]
    _kernel(x.reshape(-1), bank.weight.reshape(-1, m), bank.mean.reshape(-1, m),
            bank.var.reshape(-1, m), bank.ncomp.reshape(-1),
            p.learning_rate, p.learning_rate * p.prune_value, p.match_gate ** 2,
            p.var_init, p.var_min, p.var_max, bank.boost, p.bg_threshold,
            skip, out.reshape(-1), do_update, do_eval)
    return out if do_eval else None


def update(bank: BandModelBank, plane, skip: np.ndarray | None = None) -> None:
    """Advance every pixel mixture by one observation.

    ``skip`` optionally marks pixels that must not be updated (selective update).
    """
    _run(bank, plane, skip, None, True, False)


def background_likelihood(bank: BandModelBank, plane) -> np.ndarray:
    return _run(bank, plane, None, None, False, True)


def update_and_evaluate(bank: BandModelBank, plane, out: np.ndarray | None = None) -> np.ndarray:
    """``update`` followed by ``background_likelihood`` in a single pass."""
    return _run(bank, plane, None, out, True, True)


@dataclass(frozen=True)
class ForegroundModel:
    band: BandType
    level: int
    var: float = 1.0               # detail bands: zero-mean Gaussian variance
    uniform: float = 1.0 / 256.0   # A bands: constant density

    @property
    def mean(self) -> float:
        return 0.0


def foreground_likelihood(model: ForegroundModel, plane) -> np.ndarray:
    if isinstance(plane, CoefficientPlane):
        if plane.band is not model.band:
            raise ValueError(f"model band {model.band.value} != plane band {plane.band.value}")
        values = plane.values
    else:
        values = np.asarray(plane, dtype=np.float64)
    if model.band is BandType.A:
        return np.full(values.shape, model.uniform)
    v = model.var
    return np.exp(-0.5 * values * values / v) * (INV_SQRT_2PI / math.sqrt(v))


def pooled_std(planes) -> float:
    """Standard deviation of all coefficients of ``planes`` taken together."""
    n = 0
    s = 0.0
    s2 = 0.0
    for v in planes:
        v = v.values if isinstance(v, CoefficientPlane) else np.asarray(v, dtype=np.float64)
        n += v.size
        s += float(v.sum())
        s2 += float(np.square(v).sum())
    if n == 0:
        raise ValueError("empty calibration set")
    mean = s / n
    return math.sqrt(max(s2 / n - mean * mean, 0.0))


def calibrate_band_stats(frames, levels: int, boundary: str = "symmetric") -> dict:
    """Pooled sigma of every (band, level) over the calibration frames."""
    frames = list(frames)
    if not frames:
        raise ValueError("empty calibration set")
    pyramids = [decompose(f, levels, boundary) for f in frames]
    return {
        (band, level): pooled_std(pyr[band, level] for pyr in pyramids)
        for level in range(1, levels + 1)
        for band in ALL_BANDS
    }


def estimate_noise_sigma(hh1: CoefficientPlane) -> float:
    if isinstance(hh1, CoefficientPlane):
        if hh1.band is not BandType.D or hh1.level != 1:
            raise ValueError("noise estimate needs the level-1 diagonal band")
        values = hh1.values
    else:
        values = np.asarray(hh1)
    return float(np.median(np.abs(values))) / MAD_SCALE


def save_banks(path, banks: dict, extra: dict | None = None) -> None:
    """Versioned ``.npz`` dump of all banks plus optional scalar/array extras."""
    arrays = {"format_version": np.array(CHECKPOINT_VERSION)}
    for (band, level), bank in banks.items():
        key = f"{band.value}{level}"
        p = bank.params
        arrays[f"{key}.params"] = np.array([
            p.learning_rate, p.max_components, p.bg_threshold, p.match_gate,
            p.var_init, p.var_min, p.var_max, p.prune_value, p.boost,
        ])
        arrays[f"{key}.weight"] = bank.weight
        arrays[f"{key}.mean"] = bank.mean
        arrays[f"{key}.var"] = bank.var
        arrays[f"{key}.ncomp"] = bank.ncomp
    for k, v in (extra or {}).items():
        arrays[f"extra.{k}"] = np.asarray(v)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_banks(path) -> tuple[dict, dict]:
    with np.load(path) as data:
        version = int(data["format_version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        banks = {}
        extra = {}
        for name in data.files:
            if name.startswith("extra."):
                extra[name[6:]] = data[name]
            elif name.endswith(".params"):
                key = name[: -len(".params")]
                band, level = BandType(key[0]), int(key[1:])
                lr, m, cf, gate, vi, vmin, vmax, prune, boost = data[name].tolist()
                params = GMMParams(lr, int(m), cf, gate, vi, vmin, vmax, prune, boost)
                banks[(band, level)] = BandModelBank(
                    band, level, params,
                    data[f"{key}.weight"].copy(), data[f"{key}.mean"].copy(),
                    data[f"{key}.var"].copy(), data[f"{key}.ncomp"].copy(),
                )
    return banks, extra
