"""Frame-by-frame detector and the directory-level run/eval drivers."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import band_model as bm
from .config import FWFCConfig
from .evaluation import VideoResult, accumulate, confusion_counts, write_report, ConfusionCounts
from .frame_io import (
    crop_to_multiple, list_frame_files, numeric_key, read_frame, read_mask, write_mask,
)
from .fusion import FusionWeights, decide, fuse_bands, fuse_levels, fuse_levels_product
from .postproc import cleanup_chain
from .swt import ALL_BANDS, DETAIL_BANDS, BandType, decompose, dump_bands

log = logging.getLogger(__name__)

_VAR_EPS = 1e-6


@dataclass
class Calibration:
    band_std: dict          # (BandType, level) -> sigma
    image_var: float
    noise_sigma: float

    def scale_ratio(self, band, level) -> float:
        v = self.band_std[(band, level)] ** 2
        return max(v, _VAR_EPS) / max(self.image_var, _VAR_EPS)

    def to_arrays(self, levels: int) -> dict:
        std = [self.band_std[(b, l)] for l in range(1, levels + 1) for b in ALL_BANDS]
        return {"band_std": np.array(std), "image_var": self.image_var,
                "noise_sigma": self.noise_sigma}

    @classmethod
    def from_arrays(cls, arrays: dict, levels: int) -> "Calibration":
        std = iter(arrays["band_std"].tolist())
        band_std = {(b, l): next(std) for l in range(1, levels + 1) for b in ALL_BANDS}
        return cls(band_std, float(arrays["image_var"]), float(arrays["noise_sigma"]))


def calibrate(frames, config: FWFCConfig) -> Calibration:
    frames = [np.asarray(f, dtype=np.float64) for f in frames]
    if not frames:
        raise ValueError("empty calibration set")
    image_var = bm.pooled_std(frames) ** 2
    if config.use_baseline:
        return Calibration({}, image_var, 0.0)
    band_std = bm.calibrate_band_stats(frames, config.levels, config.boundary)
    if config.noise_sigma is not None:
        noise = config.noise_sigma
    else:
        d1 = decompose(frames[0], 1, config.boundary).plane(BandType.D, 1)
        noise = bm.estimate_noise_sigma(d1)
    return Calibration(band_std, image_var, noise)


class Detector:
    """Holds all band models for one video and turns frames into masks."""

    def __init__(self, config: FWFCConfig, shape: tuple[int, int], calib: Calibration,
                 banks: dict | None = None):
        self.config = config
        self.shape = shape
        self.calib = calib
        self.frames_seen = 0
        h, w = shape
        gmm = config.gmm
        if config.use_baseline:
            self.keys = [(BandType.A, 0)]
            self.weights = None
            self.fg_models = {}
            if banks is None:
                banks = {(BandType.A, 0): bm.init_bank(w, h, BandType.A, 0, gmm, 1.0)}
        else:
            L = config.levels
            self.weights = FusionWeights.compute(calib.band_std, calib.noise_sigma, L,
                                                 config.alpha_corr, config.scale_noise)
            self.keys = []
            for band in config.enabled_bands:
                levels = [L] if band is BandType.A and config.ll_levels == "top" \
                    else range(1, L + 1)
                self.keys.extend((band, l) for l in levels)
            if banks is None:
                banks = {
                    (b, l): bm.init_bank(w, h, b, l, gmm, calib.scale_ratio(b, l))
                    for b, l in self.keys
                }
            self.fg_models = {}
            for b, l in self.keys:
                if b is BandType.A:
                    model = bm.ForegroundModel(b, l, uniform=config.uniform_density)
                else:
                    var = config.fg_var.get(f"{b.value}{l}")
                    if var is None:
                        var = (config.beta * calib.band_std[(b, l)]) ** 2
                    # a flat band would give a degenerate density
                    var = max(var, banks[(b, l)].params.var_min)
                    model = bm.ForegroundModel(b, l, var=var)
                self.fg_models[(b, l)] = model
        missing = set(self.keys) - set(banks)
        if missing:
            raise ValueError(f"checkpoint lacks banks {sorted(missing)}")
        self.banks = banks

    @classmethod
    def from_frames(cls, config: FWFCConfig, frames) -> "Detector":
        frames = list(frames)
        calib = calibrate(frames[: config.calibration_frames], config)
        return cls(config, np.shape(frames[0]), calib)

    def _baseline(self, frame) -> np.ndarray:
        bank = self.banks[(BandType.A, 0)]
        x = np.asarray(frame, dtype=np.float64)
        if self.config.selective_update and self.frames_seen:
            prev = bm.background_likelihood(bank, x)
            raw = self.config.uniform_density > prev
            bm.update(bank, x, skip=raw & (bank.ncomp > 0))
            return raw
        pb = bm.update_and_evaluate(bank, x)
        return self.config.uniform_density > pb

    def likelihoods(self, pyr, update: bool = True) -> tuple[dict, dict]:
        fg, bg = {}, {}
        for key in self.keys:
            plane = pyr[key]
            bank = self.banks[key]
            if update:
                bg[key] = bm.update_and_evaluate(bank, plane)
            else:
                bg[key] = bm.background_likelihood(bank, plane)
            fg[key] = bm.foreground_likelihood(self.fg_models[key], plane)
        return fg, bg

    def fuse(self, fg: dict, bg: dict) -> np.ndarray:
        cfg = self.config

        def fused(band, table):
            keys = [k for k in self.keys if k[0] is band]
            planes = [table[k] for k in keys]
            if cfg.level_fusion == "product":
                return fuse_levels_product(planes)
            return fuse_levels(planes, [self.weights[k] for k in keys])

        details = [b for b in DETAIL_BANDS if b in cfg.enabled_bands]
        hf = None
        if details:
            hf = fuse_bands([fused(b, fg) for b in details], [fused(b, bg) for b in details])
        if BandType.A not in cfg.enabled_bands:
            return hf
        fa, ba = fused(BandType.A, fg), fused(BandType.A, bg)
        if hf is None:
            return fa > ba
        return decide(hf, fa, ba, cfg.combine)

    def raw_mask(self, frame, pyr=None) -> np.ndarray:
        if frame.shape != self.shape:
            raise ValueError(f"frame shape {frame.shape} != detector shape {self.shape}")
        if self.config.use_baseline:
            raw = self._baseline(frame)
        else:
            if pyr is None:
                pyr = decompose(frame, self.config.levels, self.config.boundary)
            if self.config.selective_update and self.frames_seen:
                raw = self.fuse(*self.likelihoods(pyr, update=False))
                for key in self.keys:
                    bank = self.banks[key]
                    bm.update(bank, pyr[key], skip=raw & (bank.ncomp > 0))
            else:
                raw = self.fuse(*self.likelihoods(pyr))
        self.frames_seen += 1
        return raw

    def apply(self, frame) -> np.ndarray:
        return cleanup_chain(self.raw_mask(frame), self.config.cleanup)

    def save(self, path) -> None:
        extra = {"frames_seen": self.frames_seen, "shape": np.array(self.shape),
                 "levels": self.config.levels if not self.config.use_baseline else 0}
        if not self.config.use_baseline:
            extra.update(self.calib.to_arrays(self.config.levels))
        else:
            extra["image_var"] = self.calib.image_var
        bm.save_banks(path, self.banks, extra)

    @classmethod
    def load(cls, path, config: FWFCConfig) -> "Detector":
        banks, extra = bm.load_banks(path)
        levels = 0 if config.use_baseline else config.levels
        if int(extra["levels"]) != levels:
            raise ValueError(f"checkpoint has {int(extra['levels'])} levels, config has {levels}")
        shape = tuple(int(v) for v in extra["shape"])
        if levels:
            calib = Calibration.from_arrays(extra, levels)
        else:
            calib = Calibration({}, float(extra["image_var"]), 0.0)
        det = cls(config, shape, calib, banks)
        det.frames_seen = int(extra["frames_seen"])
        return det


def prepare(frame, config: FWFCConfig) -> np.ndarray:
    return crop_to_multiple(frame, config.crop)


def process_frames(frames, config: FWFCConfig, raw: bool = False) -> list[np.ndarray]:
    """Run the detector over in-memory grayscale frames; returns one mask per frame."""
    frames = [prepare(np.asarray(f), config) for f in frames]
    det = Detector.from_frames(config, frames)
    step = det.raw_mask if raw else det.apply
    return [step(f) for f in frames]


def _gt_index(gt_dir) -> dict:
    if gt_dir is None:
        return {}
    return {numeric_key(p.name)[0]: p for p in list_frame_files(gt_dir)}


def run_pipeline(config: FWFCConfig, input_dir, output_dir, gt_dir=None, report=None,
                 dump_dir=None, checkpoint=None, name: str | None = None) -> VideoResult:
    files = list_frame_files(input_dir)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    name = name or Path(input_dir).resolve().name
    gts = _gt_index(gt_dir)

    if checkpoint is not None and Path(checkpoint).exists():
        det = Detector.load(checkpoint, config)
        log.info("resumed from %s after %d frames", checkpoint, det.frames_seen)
    else:
        calib_frames = [prepare(read_frame(p), config)
                        for p in files[: config.calibration_frames]]
        det = Detector.from_frames(config, calib_frames)
        if not config.use_baseline:
            log.info("noise sigma %.4f", det.calib.noise_sigma)
            (output_dir / "weights.txt").write_text(det.weights.report())

    counts = ConfusionCounts()
    evaluated = 0
    try:
        for path in files:
            frame = prepare(read_frame(path), config)
            pyr = None
            if dump_dir is not None and not config.use_baseline:
                pyr = decompose(frame, config.levels, config.boundary)
                dump_bands(pyr, Path(dump_dir) / path.stem)
            if config.use_baseline:
                mask = cleanup_chain(det.raw_mask(frame), config.cleanup)
            else:
                mask = cleanup_chain(det.raw_mask(frame, pyr), config.cleanup)
            write_mask(mask, output_dir / f"{path.stem}.png")
            gt_path = gts.get(numeric_key(path.name)[0])
            if gt_path is not None:
                gt = crop_to_multiple(read_mask(gt_path), config.crop)
                counts = counts + confusion_counts(mask, gt)
                evaluated += 1
    finally:
        if checkpoint is not None:
            det.save(checkpoint)
        result = VideoResult(name, counts, evaluated)
        if report is not None:
            write_report([result] if evaluated else [], report)
    return result


def _mask_index(directory) -> dict:
    return {numeric_key(p.name)[0]: p for p in list_frame_files(directory)}


def evaluate_dirs(pred_dir, gt_dir, name: str | None = None) -> VideoResult:
    preds = _mask_index(pred_dir)
    gts = _mask_index(gt_dir)
    common = sorted(set(preds) & set(gts))
    if not common:
        raise ValueError(f"no frame indices shared by {pred_dir} and {gt_dir}")

    def pairs():
        for idx in common:
            pred = read_mask(preds[idx])
            gt = read_mask(gts[idx])
            h, w = pred.shape
            if gt.shape[0] < h or gt.shape[1] < w:
                raise ValueError(f"ground truth {gts[idx].name} smaller than prediction")
            yield pred, gt[:h, :w]

    counts, n = accumulate(pairs())
    return VideoResult(name or Path(pred_dir).resolve().name, counts, n)


def evaluate_tree(pred_dir, gt_dir, report=None) -> list[VideoResult]:
    """Evaluate one video, or one per subdirectory when ``pred_dir`` has subdirectories."""
    pred_dir, gt_dir = Path(pred_dir), Path(gt_dir)
    subdirs = sorted(p for p in pred_dir.iterdir() if p.is_dir())
    if subdirs:
        results = [evaluate_dirs(d, gt_dir / d.name, d.name) for d in subdirs]
    else:
        results = [evaluate_dirs(pred_dir, gt_dir)]
    if report is not None:
        write_report(results, report)
    return results
