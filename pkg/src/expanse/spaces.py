"""Flat compact phase spaces: the circle R/Z and the torus R^2/Z^2.

Points are numpy arrays with values in [0, 1) per coordinate; all functions
accept stacked points of shape (..., dim). Distances use the flat quotient
metric (per-coordinate min(|d|, 1-|d|), combined euclidean), which is exact
and makes the diameter 1/2 on the circle and sqrt(2)/2 on the torus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArcTooShortError, ParameterError


@dataclass(frozen=True)
class Space:
    dim: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ParameterError("space dimension must be 1 (circle) or 2 (torus)")

    @property
    def diameter(self) -> float:
        return 0.5 if self.dim == 1 else float(np.sqrt(2.0) / 2.0)


CIRCLE = Space(1)
TORUS = Space(2)


def canonical(pts) -> np.ndarray:
    """Wrap coordinates into [0, 1)."""
    return np.mod(np.asarray(pts, dtype=float), 1.0)


def point(space: Space, *coords) -> np.ndarray:
    if len(coords) != space.dim:
        raise ParameterError(f"expected {space.dim} coordinates, got {len(coords)}")
    return canonical(np.array(coords, dtype=float))


def wrap_delta(p, q) -> np.ndarray:
    """Shortest representative of p - q in the universal cover, in [-1/2, 1/2)."""
    d = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    return d - np.round(d)


def distance(space: Space, p, q) -> np.ndarray:
    d = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    d = np.minimum(d, 1.0 - d)
    return np.sqrt(np.sum(d * d, axis=-1))


def sample_grid(space: Space, resolution: int) -> np.ndarray:
    """r (circle) or r^2 (torus) equally spaced points, row-major order."""
    if resolution < 2:
        raise ParameterError("grid resolution must be >= 2")
    ticks = np.arange(resolution, dtype=float) / resolution
    if space.dim == 1:
        return ticks[:, None]
    xx, yy = np.meshgrid(ticks, ticks, indexing="ij")
    return np.stack([xx.ravel(), yy.ravel()], axis=-1)


def pairwise_diameter(space: Space, samples: np.ndarray) -> float:
    """Max pairwise quotient distance over a sample array (m, dim)."""
    d = np.abs(samples[:, None, :] - samples[None, :, :])
    d = np.minimum(d, 1.0 - d)
    return float(np.sqrt(np.sum(d * d, axis=-1)).max())


@dataclass(frozen=True)
class Arc:
    """A piecewise-linear arc: start point plus a lift displacement.

    The parametrization t in [0, 1] maps to start + t * disp in the universal
    cover, wrapped into the space. `m` sample points (t = 0 .. 1 inclusive)
    stand in for the continuous arc everywhere downstream.
    """

    space: Space
    start: tuple
    disp: tuple
    m: int = 128

    def __post_init__(self):
        if self.m < 2:
            raise ParameterError("arc needs at least 2 samples")
        if len(self.start) != self.space.dim or len(self.disp) != self.space.dim:
            raise ParameterError("arc start/displacement dimension mismatch")

    def samples(self) -> np.ndarray:
        t = np.linspace(0.0, 1.0, self.m)[:, None]
        return canonical(np.array(self.start) + t * np.array(self.disp))


def split_arc(space: Space, samples: np.ndarray, delta: float):
    """Cut a sampled arc into two disjoint subarcs of diameter >= delta.

    Returns (head, tail, x1, x2): `head` contains the first sample and ends
    at x1 with d(samples[0], x1) >= delta; `tail` starts at x2 with
    d(x2, samples[-1]) >= delta and contains the last sample.
    """
    if delta <= 0:
        raise ParameterError("delta must be positive")
    if pairwise_diameter(space, samples) < 2 * delta:
        raise ArcTooShortError(
            f"arc diameter below 2*delta = {2 * delta}; shrink delta"
        )
    d_from_start = distance(space, samples, samples[0])
    d_to_end = distance(space, samples, samples[-1])
    heads = np.nonzero(d_from_start >= delta)[0]
    tails = np.nonzero(d_to_end >= delta)[0]
    if heads.size == 0 or tails.size == 0:
        raise ArcTooShortError("no sample attains the delta offset; shrink delta")
    ia = int(heads[0])
    ib = int(tails[-1])
    if ia >= ib:
        raise ArcTooShortError("delta subarcs would overlap; shrink delta")
    head, tail = samples[: ia + 1], samples[ib:]
    # Disjointness of the two sample sets, not just of parameter ranges.
    cross = np.abs(head[:, None, :] - tail[None, :, :])
    cross = np.minimum(cross, 1.0 - cross)
    if float(np.sqrt(np.sum(cross * cross, axis=-1)).min()) <= 0.0:
        raise ArcTooShortError("delta subarcs are not disjoint; shrink delta")
    return head, tail, samples[ia].copy(), samples[ib].copy()
