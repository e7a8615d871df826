"""Frame sequence loading, grayscale conversion, cropping and mask output."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

IMAGE_SUFFIXES = {".png", ".bmp", ".tif", ".tiff", ".pgm", ".ppm", ".jpg", ".jpeg"}

_LUMA = (0.299, 0.587, 0.114)
_NUMBER = re.compile(r"(\d+)")


class FrameError(ValueError):
    pass


@dataclass
class FrameSequence:
    frames: list[np.ndarray]
    source_names: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, idx):
        return self.frames[idx]

    @property
    def shape(self) -> tuple[int, int]:
        return self.frames[0].shape


def numeric_key(name: str) -> tuple:
    """Sort key: last integer in the stem, then the full name."""
    nums = _NUMBER.findall(Path(name).stem)
    return (int(nums[-1]) if nums else -1, name)


def list_frame_files(directory: str | Path, pattern: str = "*") -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FrameError(f"missing directory: {directory}")
    files = [
        p for p in directory.glob(pattern)
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    ]
    if not files:
        raise FrameError(f"no frames in {directory} matching {pattern!r}")
    return sorted(files, key=lambda p: numeric_key(p.name))


def to_grayscale(r, g, b):
    """BT.601 luma, rounded and clamped to [0, 255].

    Works on scalars or same-shaped arrays; scalars return ``int``.
    """
    y = _LUMA[0] * np.asarray(r, dtype=np.float64) \
        + _LUMA[1] * np.asarray(g, dtype=np.float64) \
        + _LUMA[2] * np.asarray(b, dtype=np.float64)
    y = np.clip(np.rint(y), 0, 255)
    if y.ndim == 0:
        return int(y)
    return y.astype(np.uint8)


def read_frame(path: str | Path) -> np.ndarray:
    """Read one raster image as a 2D uint8 grayscale frame."""
    img = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if img is None:
        raise FrameError(f"cannot read image: {path}")
    if img.dtype != np.uint8:
        raise FrameError(f"{path}: expected 8-bit samples, got {img.dtype}")
    if img.ndim == 2:
        return img
    if img.shape[2] == 4:
        img = img[:, :, :3]
    # OpenCV stores channels as BGR
    return to_grayscale(img[:, :, 2], img[:, :, 1], img[:, :, 0])


def load_frame_sequence(directory_path: str | Path, pattern: str = "*") -> FrameSequence:
    files = list_frame_files(directory_path, pattern)
    frames = []
    for p in files:
        f = read_frame(p)
        if frames and f.shape != frames[0].shape:
            raise FrameError(
                f"dimension mismatch: {p.name} is {f.shape[1]}x{f.shape[0]}, "
                f"expected {frames[0].shape[1]}x{frames[0].shape[0]}"
            )
        frames.append(f)
    return FrameSequence(frames, [p.name for p in files])


def crop_to_multiple(frame: np.ndarray, factor: int) -> np.ndarray:
    """Crop from the top-left so both dimensions are multiples of ``factor``."""
    if factor < 1:
        raise FrameError(f"crop factor must be >= 1, got {factor}")
    h, w = frame.shape[:2]
    if h < factor or w < factor:
        raise FrameError(f"frame {w}x{h} smaller than crop factor {factor}")
    return frame[: factor * (h // factor), : factor * (w // factor)]


def write_mask(mask: np.ndarray, path: str | Path) -> None:
    mask = np.asarray(mask)
    if mask.ndim != 2 or mask.size == 0:
        raise FrameError(f"mask must be a non-empty 2D array, got shape {mask.shape}")
    path = Path(path)
    img = np.where(mask.astype(bool), 255, 0).astype(np.uint8)
    try:
        ok = cv2.imwrite(str(path), img)
    except cv2.error as exc:
        raise OSError(f"cannot write mask to {path}: {exc}") from exc
    if not ok:
        raise OSError(f"cannot write mask to {path}")


def read_mask(path: str | Path) -> np.ndarray:
    """Read a mask image and binarize at 128."""
    return read_frame(path) >= 128
