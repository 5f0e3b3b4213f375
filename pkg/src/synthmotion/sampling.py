"""Video frame sampling strategies and epoch balancing.

Training strategies pick F frame indices from a T-frame video:

- uniform_consecutive / uniform_random_shift: F consecutive frames from a
  random start at native frame rate;
- random_fps: a random integer step k in [1, (T-1)//(F-1)] and a random
  valid start;
- smallest_fps: the maximal integer step (longest span) with a random
  residual shift;
- hybrid_segments: one uniform frame from each of F equal segments;
- nonuniform_random: an F-subset drawn uniformly without replacement,
  sorted when ordered.

Videos shorter than F are padded by sampling with replacement and sorting.
Test-time sampling yields N = ceil(max(T-F,0)/S) + 1 clips: sliding windows
for the uniform kinds (last window clamped to the end), independent random
draws otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STRATEGY_KINDS = (
    "uniform_consecutive",
    "uniform_random_shift",
    "random_fps",
    "smallest_fps",
    "hybrid_segments",
    "nonuniform_random",
)

_WINDOW_KINDS = ("uniform_consecutive", "uniform_random_shift")


@dataclass(frozen=True)
class SamplingStrategy:
    kind: str = "nonuniform_random"
    ordered: bool = True
    frames_per_clip: int = 16
    stride: int = 16

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.frames_per_clip < 1:
            raise ValueError(f"frames_per_clip must be >= 1, got {self.frames_per_clip}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if not self.ordered and self.kind != "nonuniform_random":
            raise ValueError("ordered=False is only meaningful for nonuniform_random")


@dataclass(frozen=True)
class ClipIndices:
    """Frame indices of one sampled clip."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if not self.indices:
            raise ValueError("a clip needs at least one frame index")

    def __len__(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.intp)


def _padded_draw(num_frames: int, count: int, rng: np.random.Generator) -> ClipIndices:
    # Short video: with replacement, kept in temporal order.
    return ClipIndices(tuple(sorted(rng.integers(0, num_frames, size=count).tolist())))


def sample_train_clip(
    num_frames: int, strategy: SamplingStrategy, rng: np.random.Generator
) -> ClipIndices:
    """Draw one training clip's frame indices per the strategy."""
    if num_frames <= 0:
        raise ValueError(f"num_frames must be >= 1, got {num_frames}")
    count = strategy.frames_per_clip
    if num_frames < count:
        return _padded_draw(num_frames, count, rng)

    kind = strategy.kind
    if kind in _WINDOW_KINDS:
        start = int(rng.integers(0, num_frames - count + 1))
        return ClipIndices(tuple(range(start, start + count)))
    if kind in ("random_fps", "smallest_fps"):
        if count == 1:
            return ClipIndices((int(rng.integers(0, num_frames)),))
        max_step = (num_frames - 1) // (count - 1)
        step = max_step if kind == "smallest_fps" else int(rng.integers(1, max_step + 1))
        span = (count - 1) * step
        start = int(rng.integers(0, num_frames - span))
        return ClipIndices(tuple(range(start, start + span + 1, step)))
    if kind == "hybrid_segments":
        bounds = [(i * num_frames) // count for i in range(count + 1)]
        picks = [int(rng.integers(bounds[i], bounds[i + 1])) for i in range(count)]
        return ClipIndices(tuple(picks))
    # nonuniform_random
    picks = rng.choice(num_frames, size=count, replace=False)
    if strategy.ordered:
        picks = np.sort(picks)
    return ClipIndices(tuple(picks.tolist()))


def num_test_clips(num_frames: int, frames_per_clip: int = 16, stride: int = 16) -> int:
    """Clip count for test-time coverage: ceil(max(T-F, 0)/S) + 1."""
    if num_frames < 1:
        raise ValueError(f"num_frames must be >= 1, got {num_frames}")
    overshoot = max(num_frames - frames_per_clip, 0)
    return math.ceil(overshoot / stride) + 1


def sample_test_clips(
    num_frames: int, strategy: SamplingStrategy, rng: np.random.Generator
) -> list[ClipIndices]:
    """Sample the test-time clip set; length equals num_test_clips."""
    if num_frames <= 0:
        raise ValueError(f"num_frames must be >= 1, got {num_frames}")
    count = strategy.frames_per_clip
    total = num_test_clips(num_frames, count, strategy.stride)
    if num_frames < count:
        return [_padded_draw(num_frames, count, rng) for _ in range(total)]
    if strategy.kind in _WINDOW_KINDS:
        clips = []
        for i in range(total):
            start = min(i * strategy.stride, num_frames - count)
            clips.append(ClipIndices(tuple(range(start, start + count))))
        return clips
    return [sample_train_clip(num_frames, strategy, rng) for _ in range(total)]


def balance_epoch(real_ids, synth_ids, rng: np.random.Generator) -> list:
    """One epoch's id list: all real plus an equal-size synthetic subsample.

    Picks min(|synth|, |real|) synthetic ids without replacement, concatenates
    with the real ids, and shuffles. Call once per epoch for fresh subsamples.
    """
    real_ids = list(real_ids)
    synth_ids = list(synth_ids)
    if not real_ids:
        raise ValueError("balance_epoch requires a nonempty real id list")
    take = min(len(synth_ids), len(real_ids))
    picked = []
    if take:
        picked = [synth_ids[i] for i in rng.choice(len(synth_ids), size=take, replace=False)]
    epoch = real_ids + picked
    order = rng.permutation(len(epoch))
    return [epoch[i] for i in order]
