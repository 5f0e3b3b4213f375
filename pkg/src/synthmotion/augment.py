"""Motion diversity generation.

Three augmentation families:

- additive quaternion noise, sampled once per clip (video), per frame, or at
  regular keyframes with linear interpolation in between;
- dynamic time warping alignment of two pose sequences under a per-frame
  rotation distance;
- interpolation between two time-aligned sequences of the same action class,
  blending quaternions linearly and renormalizing.

All operations are pure and deterministic given their inputs and seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .motion import JOINT_COUNT, MotionClip, PoseSequence
from .rotations import (
    axis_angle_to_quaternion,
    hemisphere_align,
    normalize_quaternion,
    quaternion_angle,
    quaternion_to_axis_angle,
)

NOISE_GRANULARITIES = ("video", "frame", "keyframe")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive quaternion noise: zero-mean Gaussian on the 4 components.

    granularity "video" samples one offset per joint for the whole clip,
    "frame" samples a fresh offset per frame, and "keyframe" samples every
    `interval` frames and linearly interpolates in between.
    """

    granularity: str = "video"
    sigma: float = 0.1
    seed: int = 0
    interval: int = 25

    def __post_init__(self):
        if self.granularity not in NOISE_GRANULARITIES:
            raise ValueError(
                f"granularity must be one of {NOISE_GRANULARITIES}, got {self.granularity!r}"
            )
        if not (np.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.interval < 2:
            raise ValueError(f"keyframe interval must be >= 2, got {self.interval}")


def keyframe_positions(num_frames: int, interval: int) -> np.ndarray:
    """Frames where keyframe noise is sampled: every `interval`, plus the last.

    The final frame is always a keyframe so the tail is interpolated, never
    extrapolated; for T=51, interval=25 this gives {0, 25, 50}.
    """
    positions = set(range(0, num_frames, interval))
    positions.add(num_frames - 1)
    return np.array(sorted(positions), dtype=np.intp)


def sample_noise_offsets(num_frames: int, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Per-frame additive offsets, shape (T, 24, 4), per the granularity."""
    if spec.granularity == "video":
        offset = rng.normal(0.0, spec.sigma, size=(JOINT_COUNT, 4))
        return np.broadcast_to(offset, (num_frames, JOINT_COUNT, 4)).copy()
    if spec.granularity == "frame":
        return rng.normal(0.0, spec.sigma, size=(num_frames, JOINT_COUNT, 4))
    keyframes = keyframe_positions(num_frames, spec.interval)
    samples = rng.normal(0.0, spec.sigma, size=(len(keyframes), JOINT_COUNT, 4))
    if len(keyframes) == 1:
        return np.broadcast_to(samples[0], (num_frames, JOINT_COUNT, 4)).copy()
    t = np.arange(num_frames)
    seg = np.clip(np.searchsorted(keyframes, t, side="right") - 1, 0, len(keyframes) - 2)
    span = (keyframes[seg + 1] - keyframes[seg]).astype(np.float64)
    frac = ((t - keyframes[seg]) / span)[:, None, None]
    return (1.0 - frac) * samples[seg] + frac * samples[seg + 1]


def additive_noise(clip: MotionClip, spec: NoiseSpec) -> MotionClip:
    """Perturb every person's joint rotations with additive quaternion noise.

    Offsets are added to hemisphere-aligned quaternion components, then each
    quaternion is renormalized and converted back to axis-angle. Labels,
    translations, betas, and frame count are untouched.
    """
    rng = np.random.default_rng(spec.seed)
    people = []
    for person in clip.people:
        quats = hemisphere_align(person.joint_quaternions())
        offsets = sample_noise_offsets(person.num_frames, spec, rng)
        noisy = normalize_quaternion(quats + offsets)
        people.append(
            PoseSequence(quaternion_to_axis_angle(noisy), person.betas, person.trans, person.fps)
        )
    return clip.with_people(people)


def frame_pose_distance(frame_a: np.ndarray, frame_b: np.ndarray) -> float:
    """Sum over the 24 joints of the geodesic rotation angle, in radians.

    Inputs are per-frame quaternion arrays of shape (24, 4); the result is a
    metric (symmetric, zero iff the rotations coincide) because each joint
    term is the geodesic distance on the rotation group.
    """
    frame_a = np.asarray(frame_a, dtype=np.float64)
    frame_b = np.asarray(frame_b, dtype=np.float64)
    if frame_a.shape != (JOINT_COUNT, 4) or frame_b.shape != (JOINT_COUNT, 4):
        raise ValueError(f"expected two ({JOINT_COUNT}, 4) frames, got {frame_a.shape} and {frame_b.shape}")
    return float(np.sum(quaternion_angle(frame_a, frame_b)))


def pose_cost_matrix(quats_a: np.ndarray, quats_b: np.ndarray) -> np.ndarray:
    """All-pairs frame_pose_distance for quaternion sequences (T, 24, 4)."""
    dots = np.abs(np.einsum("ijk,ljk->ilj", quats_a, quats_b))
    return np.sum(2.0 * np.arccos(np.clip(dots, 0.0, 1.0)), axis=-1)


@dataclass(frozen=True)
class WarpPath:
    """Monotone contiguous alignment between two frame ranges."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        if not pairs:
            raise ValueError("a warp path cannot be empty")
        if pairs[0] != (0, 0):
            raise ValueError(f"warp path must start at (0, 0), got {pairs[0]}")
        for (i0, j0), (i1, j1) in zip(pairs, pairs[1:]):
            step = (i1 - i0, j1 - j0)
            if step not in ((1, 0), (0, 1), (1, 1)):
                raise ValueError(f"invalid warp step {step} at ({i0}, {j0})")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def first_indices(self) -> np.ndarray:
        return np.array([i for i, _ in self.pairs], dtype=np.intp)

    @property
    def second_indices(self) -> np.ndarray:
        return np.array([j for _, j in self.pairs], dtype=np.intp)


def _dtw_on_cost(cost: np.ndarray) -> tuple[WarpPath, float]:
    n, m = cost.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        row = acc[i]
        prev = acc[i - 1]
        cost_row = cost[i - 1]
        for j in range(1, m + 1):
            row[j] = cost_row[j - 1] + min(prev[j - 1], prev[j], row[j - 1])
    # Backtrack, preferring diagonal, then (1, 0), then (0, 1) on ties.
    pairs = [(n - 1, m - 1)]
    i, j = n, m
    while (i, j) != (1, 1):
        candidates = (
            (acc[i - 1, j - 1], (i - 1, j - 1)),
            (acc[i - 1, j], (i - 1, j)),
            (acc[i, j - 1], (i, j - 1)),
        )
        best = min(value for value, _ in candidates)
        for value, nxt in candidates:
            if value == best:
                i, j = nxt
                break
        pairs.append((i - 1, j - 1))
    pairs.reverse()
    return WarpPath(tuple(pairs)), float(acc[n, m])


def dtw_align(a: PoseSequence, b: PoseSequence, dist=None) -> tuple[WarpPath, float]:
    """Minimum-cost monotone contiguous alignment of two pose sequences.

    Steps are {(1,0), (0,1), (1,1)} with no band or slope constraint. The
    returned cost is the sum of the frame distance over the path pairs.
    `dist` defaults to frame_pose_distance and is called on (24, 4)
    quaternion frames when overridden.
    """
    quats_a = a.joint_quaternions()
    quats_b = b.joint_quaternions()
    if dist is None:
        cost = pose_cost_matrix(quats_a, quats_b)
    else:
        cost = np.array(
            [[dist(fa, fb) for fb in quats_b] for fa in quats_a], dtype=np.float64
        )
    return _dtw_on_cost(cost)


def _blend_quats(qa: np.ndarray, qb: np.ndarray, weight: float) -> np.ndarray:
    """Normalized linear blend, with qb flipped into qa's hemisphere."""
    dots = np.sum(qa * qb, axis=-1, keepdims=True)
    qb = np.where(dots < 0, -qb, qb)
    return normalize_quaternion((1.0 - weight) * qa + weight * qb)


def interpolate_sequences(a: MotionClip, b: MotionClip, weight: float = 0.5) -> MotionClip:
    """Blend two same-class clips along their DTW alignment.

    The warp path is computed on the per-frame distance summed over persons,
    so all people stay on one shared timeline (for a single person this is
    exactly the person-wise alignment). Quaternions are blended linearly and
    renormalized; translations and betas are blended with the same weight.
    Output length equals the path length.
    """
    if a.action_label != b.action_label:
        raise ValueError(
            f"cannot interpolate across classes: {a.action_label} != {b.action_label}"
        )
    if len(a.people) != len(b.people):
        raise ValueError(
            f"person count mismatch: {len(a.people)} != {len(b.people)}"
        )
    if not (0.0 <= weight <= 1.0):
        raise ValueError(f"weight must be in [0, 1], got {weight}")

    quats_a = [p.joint_quaternions() for p in a.people]
    quats_b = [p.joint_quaternions() for p in b.people]
    cost = sum(pose_cost_matrix(qa, qb) for qa, qb in zip(quats_a, quats_b))
    path, _ = _dtw_on_cost(cost)
    ia, ib = path.first_indices, path.second_indices

    people = []
    for person_a, person_b, qa, qb in zip(a.people, b.people, quats_a, quats_b):
        blended = _blend_quats(qa[ia], qb[ib], weight)
        poses = quaternion_to_axis_angle(blended)
        trans = (1.0 - weight) * person_a.trans[ia] + weight * person_b.trans[ib]
        betas = (1.0 - weight) * person_a.betas + weight * person_b.betas
        people.append(PoseSequence(poses, betas, trans, person_a.fps))
    return MotionClip(
        tuple(people), a.action_label, f"{a.source_id}+{b.source_id}@{weight:g}"
    )
