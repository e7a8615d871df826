#!/usr/bin/env python3
"""Single-threaded throughput of the full per-frame step (transform, models, fusion, cleanup)."""
import argparse
import os
import time

os.environ.setdefault("NUMBA_NUM_THREADS", "1")

import numpy as np  # noqa: E402

from fwfc.config import FWFCConfig  # noqa: E402
from fwfc.pipeline import Detector  # noqa: E402
from fwfc.synthetic import CamouflageScene, streak_texture  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=640)
    ap.add_argument("--height", type=int, default=384)
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--frames", type=int, default=30)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    scene = CamouflageScene(profile="streaks")
    bg = streak_texture(args.height, args.width, scene, rng)
    frames = []
    for t in range(args.frames + 1):
        img = bg.copy()
        x = (8 * t) % (args.width - 64)
        img[40:104, x:x + 64] = 128.0
        frames.append(np.clip(img + rng.normal(0, 2, img.shape), 0, 255).astype(np.uint8))

    cfg = FWFCConfig(levels=args.levels)
    det = Detector.from_frames(cfg, frames[:10])
    det.apply(frames[0])
    t0 = time.perf_counter()
    for f in frames[1:]:
        det.apply(f)
    dt = (time.perf_counter() - t0) / args.frames
    print(f"{args.width}x{args.height}, {args.levels} levels: {dt * 1e3:.1f} ms/frame, {1 / dt:.2f} fps")


if __name__ == "__main__":
    main()
