#!/usr/bin/env python3
"""Write a synthetic camouflage sequence to disk (input/ and groundtruth/) for the CLI."""
import argparse
from pathlib import Path

import cv2

from fwfc.frame_io import write_mask
from fwfc.synthetic import CamouflageScene, make_camouflage


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path)
    ap.add_argument("--profile", default="noise")
    ap.add_argument("--frames", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    frames, gts = make_camouflage(CamouflageScene(profile=args.profile, frames=args.frames,
                                                  seed=args.seed))
    (args.out / "input").mkdir(parents=True, exist_ok=True)
    (args.out / "groundtruth").mkdir(exist_ok=True)
    for i, (f, g) in enumerate(zip(frames, gts), 1):
        cv2.imwrite(str(args.out / "input" / f"in{i:06d}.png"), f)
        write_mask(g, args.out / "groundtruth" / f"gt{i:06d}.png")
    print(f"wrote {len(frames)} frames to {args.out}")


if __name__ == "__main__":
    main()
