"""Binary morphology with square structuring elements.

Pixels outside the image count as background for both erosion and dilation,
so erosion always eats into the image border.
"""
from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np


def _kernel(side: int, shape) -> np.ndarray:
    if side < 1 or side % 2 == 0:
        raise ValueError(f"structuring element side must be odd and >= 1, got {side}")
    if side > min(shape):
        raise ValueError(f"structuring element {side} larger than mask {shape}")
    return np.ones((side, side), np.uint8)


def _as_u8(mask) -> np.ndarray:
    return np.ascontiguousarray(mask, dtype=bool).view(np.uint8)


def erode(mask, side: int) -> np.ndarray:
    k = _kernel(side, np.shape(mask))
    out = cv2.erode(_as_u8(mask), k, borderType=cv2.BORDER_CONSTANT, borderValue=0)
    return out.astype(bool)


def dilate(mask, side: int) -> np.ndarray:
    k = _kernel(side, np.shape(mask))
    out = cv2.dilate(_as_u8(mask), k, borderType=cv2.BORDER_CONSTANT, borderValue=0)
    return out.astype(bool)


def opening(mask, side: int) -> np.ndarray:
    return dilate(erode(mask, side), side)


def closing(mask, side: int) -> np.ndarray:
    return erode(dilate(mask, side), side)


@dataclass(frozen=True)
class CleanupParams:
    fill_side: int = 5      # close + erode before merging with the raw mask
    denoise_side: int = 5   # close + open after merging
    final_side: int = 3     # final erosion


def cleanup_chain(mask, params: CleanupParams = CleanupParams()) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    m1 = erode(closing(mask, params.fill_side), params.fill_side)
    m2 = m1 | mask
    m3 = opening(closing(m2, params.denoise_side), params.denoise_side)
    return erode(m3, params.final_side)
