"""Color-image segmentation front-end: decode, box-downscale to 48x48,
cluster the RGB pixels and recolor each by its cluster's centroid."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .cluster import ClusterConfig, ClusterResult, run_fcm, run_hamfcm
from .hedges import HedgeParams

STANDARD_SIZE = (48, 48)


class DecodeError(ValueError):
    """The file is not a readable PNG/PPM image."""


def _check_image(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.dtype != np.uint8:
        raise ValueError("expected an (height, width, 3) uint8 image")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return arr


def load_image(path) -> np.ndarray:
    """Decode a PNG or binary PPM file into an (h, w, 3) uint8 array.

    Alpha channels are discarded; corrupt or truncated files raise
    :class:`DecodeError` without returning a partial buffer.
    """
    try:
        with Image.open(path) as im:
            im.load()
            rgb = im.convert("RGB")
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc
    return np.asarray(rgb, dtype=np.uint8)


def save_image(img, path) -> None:
    """Encode an RGB image; the format follows the file extension."""
    arr = _check_image(img)
    Image.fromarray(arr, "RGB").save(path)


def _overlap_weights(src: int, dst: int) -> np.ndarray:
    """Row-stochastic (dst, src) matrix of fractional box overlaps."""
    weights = np.zeros((dst, src))
    scale = src / dst
    for t in range(dst):
        start, stop = t * scale, (t + 1) * scale
        s0, s1 = int(np.floor(start)), int(np.ceil(stop))
        for s in range(s0, min(s1, src)):
            weights[t, s] = min(stop, s + 1) - max(start, s)
    return weights / weights.sum(axis=1, keepdims=True)


def downscale(img, size: tuple[int, int] = STANDARD_SIZE) -> np.ndarray:
    """Box-filter resample to ``size`` (height, width).

    Every output pixel is the area-weighted mean of the source region it
    covers, so the global mean color survives up to rounding.
    """
    arr = _check_image(img)
    th, tw = size
    if arr.shape[:2] == (th, tw):
        return arr.copy()
    rows = _overlap_weights(arr.shape[0], th)
    cols = _overlap_weights(arr.shape[1], tw)
    tmp = np.tensordot(rows, arr.astype(np.float64), axes=(1, 0))
    out = np.tensordot(cols, tmp, axes=(1, 1)).transpose(1, 0, 2)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def upscale_nearest(img, size: tuple[int, int]) -> np.ndarray:
    """Nearest-neighbor enlargement for display-size output."""
    arr = _check_image(img)
    th, tw = size
    ri = np.minimum((np.arange(th) + 0.5) * arr.shape[0] / th, arr.shape[0] - 1).astype(int)
    ci = np.minimum((np.arange(tw) + 0.5) * arr.shape[1] / tw, arr.shape[1] - 1).astype(int)
    return arr[ri][:, ci]


def segment(img, n_clusters: int, algo: str = "hamfcm", *, m: float = 2.0,
            m_min: float = 2.0, m_max: float = 40.0, epsilon: float = 1e-6,
            max_iter: int = 300, seed: int | None = None,
            hedge_params: HedgeParams | None = None) -> tuple[np.ndarray, ClusterResult]:
    """Cluster the pixels of an image into ``n_clusters`` flat color regions.

    The image is first box-downscaled to 48x48, every pixel becomes a raw
    (R, G, B) row in [0, 255], and the chosen engine assigns each pixel the
    color of its cluster centroid.  Returns the 48x48 segmented image and
    the underlying clustering result.
    """
    if n_clusters < 2:
        raise ValueError("segmentation needs at least 2 clusters")
    if algo not in ("fcm", "hamfcm"):
        raise ValueError(f"unknown algorithm {algo!r}")
    small = downscale(img, STANDARD_SIZE)
    pixels = small.reshape(-1, 3).astype(np.float64)
    if algo == "fcm":
        result = run_fcm(pixels, n_clusters, m, epsilon=epsilon, max_iter=max_iter, seed=seed)
    else:
        config = ClusterConfig(
            n_clusters=n_clusters,
            m_min=m_min,
            m_max=m_max,
            epsilon=epsilon,
            max_iter=max_iter,
            seed=seed,
            ha_params=hedge_params or HedgeParams(),
        )
        result = run_hamfcm(pixels, config)
    palette = np.clip(np.rint(result.centroids), 0, 255).astype(np.uint8)
    segmented = palette[result.labels].reshape(small.shape)
    return segmented, result
