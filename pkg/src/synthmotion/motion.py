"""Pose sequences, motion clips, and temporal smoothing.

A pose sequence stores one person's body motion: per-frame axis-angle
rotations for the 24 body joints, 10 body-shape coefficients, and a
per-frame root translation. A motion clip groups the people sharing one
timeline under a single action label.

Smoothing averages rotations linearly in quaternion space: convert, align
hemispheres, take the weighted window average, renormalize, convert back.
At clip edges the window is truncated and the weights renormalized, so no
motion is fabricated beyond the first and last frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .rotations import (
    axis_angle_to_quaternion,
    hemisphere_align,
    normalize_quaternion,
    quaternion_to_axis_angle,
)

JOINT_COUNT = 24
SHAPE_PARAM_COUNT = 10


def _as_float_array(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class PoseSequence:
    """One person's motion: poses (T, 24, 3), betas (10,), trans (T, 3)."""

    poses: np.ndarray
    betas: np.ndarray = field(default_factory=lambda: np.zeros(SHAPE_PARAM_COUNT))
    trans: np.ndarray | None = None
    fps: float = 30.0

    def __post_init__(self):
        poses = _as_float_array(self.poses, "poses")
        if poses.ndim != 3 or poses.shape[0] < 1 or poses.shape[1:] != (JOINT_COUNT, 3):
            raise ValueError(
                f"poses must have shape (T, {JOINT_COUNT}, 3) with T >= 1, got {poses.shape}"
            )
        betas = _as_float_array(self.betas, "betas")
        if betas.shape != (SHAPE_PARAM_COUNT,):
            raise ValueError(f"betas must have shape ({SHAPE_PARAM_COUNT},), got {betas.shape}")
        trans = self.trans
        if trans is None:
            trans = np.zeros((poses.shape[0], 3))
        trans = _as_float_array(trans, "trans")
        if trans.shape != (poses.shape[0], 3):
            raise ValueError(
                f"trans must have shape ({poses.shape[0]}, 3), got {trans.shape}"
            )
        if not (np.isfinite(self.fps) and self.fps > 0):
            raise ValueError(f"fps must be positive, got {self.fps}")
        object.__setattr__(self, "poses", poses)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def num_frames(self) -> int:
        return self.poses.shape[0]

    def joint_quaternions(self) -> np.ndarray:
        """Pose rotations as canonical unit quaternions, shape (T, 24, 4)."""
        return axis_angle_to_quaternion(self.poses)

    def subsequence(self, indices) -> "PoseSequence":
        """Frames picked by index (repeats allowed); betas and fps kept."""
        idx = np.asarray(indices, dtype=np.intp)
        return PoseSequence(self.poses[idx], self.betas, self.trans[idx], self.fps)


@dataclass(frozen=True)
class MotionClip:
    """People sharing one timeline, plus an action label and source id."""

    people: tuple[PoseSequence, ...]
    action_label: int
    source_id: str

    def __post_init__(self):
        people = tuple(self.people)
        if not people:
            raise ValueError("a motion clip needs at least one person")
        lengths = {p.num_frames for p in people}
        if len(lengths) != 1:
            raise ValueError(f"people disagree on frame count: {sorted(lengths)}")
        rates = {p.fps for p in people}
        if len(rates) != 1:
            raise ValueError(f"people disagree on fps: {sorted(rates)}")
        object.__setattr__(self, "people", people)
        object.__setattr__(self, "action_label", int(self.action_label))
        object.__setattr__(self, "source_id", str(self.source_id))

    @property
    def num_frames(self) -> int:
        return self.people[0].num_frames

    @property
    def fps(self) -> float:
        return self.people[0].fps

    def with_people(self, people) -> "MotionClip":
        return replace(self, people=tuple(people))


def triangular_kernel(window: int) -> np.ndarray:
    """Normalized triangular weights, e.g. window 5 -> [1,2,3,2,1]/9."""
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {window}")
    half = window // 2
    ramp = np.concatenate([np.arange(1, half + 2), np.arange(half, 0, -1)])
    return ramp / ramp.sum()


def _check_kernel(window: int, weights) -> np.ndarray:
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {window}")
    if weights is None:
        return triangular_kernel(window)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (window,):
        raise ValueError(f"weights must have length {window}, got shape {w.shape}")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    total = w.sum()
    if not np.isclose(total, 1.0, atol=1e-9):
        raise ValueError(f"weights must sum to 1, got {total}")
    return w / total


def smooth_series(values: np.ndarray, window: int = 5, weights=None) -> np.ndarray:
    """Weighted moving average along axis 0, truncated at the boundaries.

    Truncation renormalizes the in-range weights, so a constant series is a
    fixed point and no padding values are invented at the edges.
    """
    w = _check_kernel(window, weights)
    values = np.asarray(values, dtype=np.float64)
    if window == 1:
        return values.copy()
    half = window // 2
    n = values.shape[0]
    acc = np.zeros_like(values)
    mass = np.zeros((n,) + (1,) * (values.ndim - 1))
    for k in range(-half, half + 1):
        wk = w[k + half]
        if wk == 0:
            continue
        src = slice(max(0, -k), min(n, n - k))
        dst = slice(max(0, k), min(n, n + k))
        acc[dst] += wk * values[src]
        mass[dst] += wk
    return acc / mass


def smooth_pose_sequence(seq: PoseSequence, window: int = 5, weights=None) -> PoseSequence:
    """Smooth joint rotations (in quaternion space) and translations.

    Per joint: quaternions are hemisphere-aligned over time, averaged with
    the kernel, renormalized, and converted back to axis-angle.
    Translations get the same kernel componentwise.
    """
    w = _check_kernel(window, weights)
    quats = hemisphere_align(seq.joint_quaternions())
    averaged = smooth_series(quats, window, w)
    smoothed = quaternion_to_axis_angle(normalize_quaternion(averaged))
    return PoseSequence(smoothed, seq.betas, smooth_series(seq.trans, window, w), seq.fps)


def smooth_motion_clip(clip: MotionClip, window: int = 5, weights=None) -> MotionClip:
    """Apply smooth_pose_sequence to every person in the clip."""
    return clip.with_people(smooth_pose_sequence(p, window, weights) for p in clip.people)
