"""Rotation representations and conversions.

Conventions
-----------
- Quaternions are (w, x, y, z), unit norm, canonicalized so that w >= 0.
  When w == 0 exactly (half turns), the first nonzero vector component is
  made positive, so every rotation has exactly one representative.
- Axis-angle vectors point along the rotation axis with magnitude equal to
  the angle in radians, canonicalized to angle in [0, pi].
- All functions broadcast: an input of shape (..., 3) or (..., 4) is
  processed along its last axis.
- Everything is float64 and pure; no function mutates its input.
"""

from __future__ import annotations

import numpy as np

#: Tolerance for accepting a quaternion as unit norm.
UNIT_TOLERANCE = 1e-6


def _require_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")


def canonicalize_quaternion(q: np.ndarray) -> np.ndarray:
    """Flip signs so w >= 0, resolving w == 0 by the first nonzero component.

    q and -q encode the same rotation; this picks one of the two.
    """
    q = np.asarray(q, dtype=np.float64)
    w = q[..., 0]
    flip = w < 0
    # Half turns have w == 0; use the first nonzero of (x, y, z) instead.
    on_boundary = w == 0
    if np.any(on_boundary):
        x, y, z = q[..., 1], q[..., 2], q[..., 3]
        boundary_flip = np.where(
            x != 0, x < 0, np.where(y != 0, y < 0, z < 0)
        )
        flip = np.where(on_boundary, boundary_flip, flip)
    return np.where(flip[..., None], -q, q)


def normalize_quaternion(q: np.ndarray) -> np.ndarray:
    """Scale to unit norm. Raises on zero-norm input."""
    q = np.asarray(q, dtype=np.float64)
    norm = np.linalg.norm(q, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("cannot normalize a zero quaternion")
    return q / norm


def axis_angle_to_quaternion(a: np.ndarray) -> np.ndarray:
    """Convert axis-angle vectors (..., 3) to unit quaternions (..., 4).

    Output is canonicalized (w >= 0). Raises ValueError on non-finite input.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-1] != 3:
        raise ValueError(f"axis-angle input must have last dimension 3, got {a.shape}")
    _require_finite(a, "axis-angle input")
    angle = np.linalg.norm(a, axis=-1, keepdims=True)
    half = 0.5 * angle
    # sin(half)/angle, continuous at angle == 0 (limit 1/2).
    coef = 0.5 * np.sinc(half / np.pi)
    q = np.concatenate([np.cos(half), a * coef], axis=-1)
    return canonicalize_quaternion(q)


def quaternion_to_axis_angle(q: np.ndarray) -> np.ndarray:
    """Convert unit quaternions (..., 4) to canonical axis-angle (..., 3).

    The angle lands in [0, pi]. Raises ValueError if any input norm deviates
    from 1 by more than UNIT_TOLERANCE.
    """
    q = np.asarray(q, dtype=np.float64)
    if q.shape[-1] != 4:
        raise ValueError(f"quaternion input must have last dimension 4, got {q.shape}")
    _require_finite(q, "quaternion input")
    norm = np.linalg.norm(q, axis=-1)
    if np.any(np.abs(norm - 1.0) > UNIT_TOLERANCE):
        worst = float(np.max(np.abs(norm - 1.0)))
        raise ValueError(f"quaternion norm deviates from 1 by {worst:.3e}")
    q = canonicalize_quaternion(q / norm[..., None])
    w = q[..., 0]
    vec = q[..., 1:]
    sin_half = np.linalg.norm(vec, axis=-1)
    angle = 2.0 * np.arctan2(sin_half, w)
    # angle / sin(half); the sin_half == 0 rows have zero vec, factor is moot.
    safe = np.where(sin_half == 0, 1.0, sin_half)
    return vec * (angle / safe)[..., None]


def quaternion_to_matrix(q: np.ndarray) -> np.ndarray:
    """Convert unit quaternions (..., 4) to rotation matrices (..., 3, 3)."""
    q = normalize_quaternion(np.asarray(q, dtype=np.float64))
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    m = np.empty(q.shape[:-1] + (3, 3), dtype=np.float64)
    m[..., 0, 0] = 1 - 2 * (y * y + z * z)
    m[..., 0, 1] = 2 * (x * y - w * z)
    m[..., 0, 2] = 2 * (x * z + w * y)
    m[..., 1, 0] = 2 * (x * y + w * z)
    m[..., 1, 1] = 1 - 2 * (x * x + z * z)
    m[..., 1, 2] = 2 * (y * z - w * x)
    m[..., 2, 0] = 2 * (x * z - w * y)
    m[..., 2, 1] = 2 * (y * z + w * x)
    m[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return m


def axis_angle_to_matrix(a: np.ndarray) -> np.ndarray:
    """Rodrigues formula: axis-angle (..., 3) to rotation matrices (..., 3, 3)."""
    a = np.asarray(a, dtype=np.float64)
    angle = np.linalg.norm(a, axis=-1)
    safe = np.where(angle == 0, 1.0, angle)
    axis = a / safe[..., None]
    x, y, z = axis[..., 0], axis[..., 1], axis[..., 2]
    c = np.cos(angle)
    s = np.sin(angle)
    t = 1.0 - c
    m = np.empty(a.shape[:-1] + (3, 3), dtype=np.float64)
    m[..., 0, 0] = c + x * x * t
    m[..., 0, 1] = x * y * t - z * s
    m[..., 0, 2] = x * z * t + y * s
    m[..., 1, 0] = x * y * t + z * s
    m[..., 1, 1] = c + y * y * t
    m[..., 1, 2] = y * z * t - x * s
    m[..., 2, 0] = x * z * t - y * s
    m[..., 2, 1] = y * z * t + x * s
    m[..., 2, 2] = c + z * z * t
    return m


def quaternion_angle(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Geodesic angle between rotations, 2*arccos(|<q1, q2>|), in [0, pi].

    Invariant under sign flips of either argument (double cover).
    """
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)
    dot = np.abs(np.sum(q1 * q2, axis=-1))
    return 2.0 * np.arccos(np.clip(dot, 0.0, 1.0))


def hemisphere_align(seq: np.ndarray) -> np.ndarray:
    """Flip quaternion signs along axis 0 so consecutive dot products are >= 0.

    Accepts shape (T, ..., 4); the first element keeps its sign and every
    output equals plus or minus its input. Required before any linear
    averaging: blending q with -q cancels instead of interpolating.
    """
    seq = np.asarray(seq, dtype=np.float64)
    if seq.ndim < 2 or seq.shape[-1] != 4:
        raise ValueError(f"expected shape (T, ..., 4), got {seq.shape}")
    if seq.shape[0] == 0:
        raise ValueError("hemisphere_align requires a nonempty sequence")
    if seq.shape[0] == 1:
        return seq.copy()
    dots = np.sum(seq[1:] * seq[:-1], axis=-1)
    steps = np.where(dots < 0, -1.0, 1.0)
    signs = np.concatenate(
        [np.ones((1,) + seq.shape[1:-1]), np.cumprod(steps, axis=0)], axis=0
    )
    return seq * signs[..., None]
