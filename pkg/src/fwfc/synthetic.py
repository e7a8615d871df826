"""Synthetic camouflage sequences: an oriented-texture patch moving over a
background with the same intensity statistics but the orthogonal orientation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CamouflageScene:
    size: int = 128
    frames: int = 300
    patch: int = 40
    mean: float = 128.0
    sigma: float = 20.0
    profile: str = "noise"      # "noise", "square", "sine" or "streaks"
    period: int = 16
    path: str = "loop"          # "loop" (around the border) or "bounce" (horizontal)
    noise: float = 2.0
    seed: int = 0


def texture_profile(n: int, scene: CamouflageScene, rng) -> np.ndarray:
    """1D intensity profile with the scene's mean and (sample) deviation."""
    t = np.arange(n)
    if scene.profile == "square":
        s = np.where(t % scene.period < scene.period // 2, 1.0, -1.0)
    elif scene.profile == "sine":
        s = np.sin(2 * np.pi * t / scene.period)
    elif scene.profile == "noise":
        s = rng.standard_normal(n)
    else:
        raise ValueError(f"unknown profile {scene.profile!r}")
    s = (s - s.mean()) / s.std()
    return scene.mean + scene.sigma * s


def patch_path(scene: CamouflageScene) -> list[tuple[int, int]]:
    """Top-left patch corners ``(row, col)``, one per frame, 1 px apart."""
    span = scene.size - scene.patch
    if scene.path == "loop":
        loop = ([(0, x) for x in range(span)] + [(y, span) for y in range(span)]
                + [(span, x) for x in range(span, 0, -1)] + [(y, 0) for y in range(span, 0, -1)])
        start = span // 2
    elif scene.path == "bounce":
        row = span // 2
        loop = [(row, x) for x in range(span)] + [(row, x) for x in range(span, 0, -1)]
        start = 0
    else:
        raise ValueError(f"unknown path {scene.path!r}")
    return [loop[(start + t) % len(loop)] for t in range(scene.frames)]


def streak_texture(rows: int, cols: int, scene: CamouflageScene, rng) -> np.ndarray:
    """Anisotropic smoothed noise, elongated along the columns axis (horizontal streaks)."""
    from scipy.ndimage import gaussian_filter

    t = gaussian_filter(rng.standard_normal((rows, cols)), sigma=(0.7, scene.period / 2),
                        mode="wrap")
    t = (t - t.mean()) / t.std()
    return scene.mean + scene.sigma * t


def make_camouflage(scene: CamouflageScene = CamouflageScene()):
    """Returns ``(frames, gts)``: uint8 frames and boolean ground-truth masks."""
    rng = np.random.default_rng(scene.seed)
    n, p = scene.size, scene.patch
    if scene.profile == "streaks":
        background = streak_texture(n, n, scene, rng)
        texture = streak_texture(p, p, scene, rng).T
    else:
        background = np.repeat(texture_profile(n, scene, rng)[:, None], n, axis=1)
        texture = np.repeat(texture_profile(p, scene, rng)[None, :], p, axis=0)
    frames, gts = [], []
    for y, x in patch_path(scene):
        img = background.copy()
        img[y:y + p, x:x + p] = texture
        img += rng.normal(0.0, scene.noise, img.shape)
        frames.append(np.clip(np.rint(img), 0, 255).astype(np.uint8))
        gt = np.zeros((n, n), dtype=bool)
        gt[y:y + p, x:x + p] = True
        gts.append(gt)
    return frames, gts


def make_static(size: int = 128, frames: int = 200, value: int = 128):
    return [np.full((size, size), value, dtype=np.uint8) for _ in range(frames)]
