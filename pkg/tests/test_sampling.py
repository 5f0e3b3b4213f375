"""Frame sampling strategy tests.

num_test_clips is checked against a literal sliding-window count; the
random_fps example enumerates all valid (step, start) pairs by hand.
"""

import numpy as np
import pytest

from synthmotion.sampling import (
    STRATEGY_KINDS,
    ClipIndices,
    SamplingStrategy,
    balance_epoch,
    num_test_clips,
    sample_test_clips,
    sample_train_clip,
)


def count_sliding_windows(num_frames, frames_per_clip=16, stride=16):
    """Oracle: walk window starts until the video is covered."""
    if num_frames <= frames_per_clip:
        return 1
    count, start = 0, 0
    while True:
        count += 1
        if start + frames_per_clip >= num_frames:
            return count
        start += stride


class TestStrategyValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            SamplingStrategy(kind="fibonacci")

    def test_ordered_false_only_for_nonuniform(self):
        with pytest.raises(ValueError, match="ordered"):
            SamplingStrategy(kind="random_fps", ordered=False)
        SamplingStrategy(kind="nonuniform_random", ordered=False)

    def test_bounds(self):
        with pytest.raises(ValueError):
            SamplingStrategy(frames_per_clip=0)
        with pytest.raises(ValueError):
            SamplingStrategy(stride=0)


class TestTrainSampling:
    def test_exact_length_video_is_forced(self):
        rng = np.random.default_rng(0)
        for kind in STRATEGY_KINDS:
            clip = sample_train_clip(16, SamplingStrategy(kind=kind), rng)
            assert clip.indices == tuple(range(16))

    def test_nonuniform_strictly_increasing_without_replacement(self):
        rng = np.random.default_rng(1)
        strategy = SamplingStrategy(kind="nonuniform_random")
        for _ in range(200):
            idx = sample_train_clip(100, strategy, rng).indices
            assert len(idx) == 16
            assert all(a < b for a, b in zip(idx, idx[1:]))

    def test_random_fps_t31_enumeration(self):
        # T=31, F=16: steps 1 or 2 only; step 2 forces start 0 -> {0,2,...,30}.
        rng = np.random.default_rng(2)
        strategy = SamplingStrategy(kind="random_fps")
        seen_steps = set()
        for _ in range(300):
            idx = sample_train_clip(31, strategy, rng).indices
            step = idx[1] - idx[0]
            seen_steps.add(step)
            assert step in (1, 2)
            assert all(b - a == step for a, b in zip(idx, idx[1:]))
            if step == 2:
                assert idx == tuple(range(0, 31, 2))
        assert seen_steps == {1, 2}

    def test_smallest_fps_uses_maximal_step(self):
        rng = np.random.default_rng(3)
        strategy = SamplingStrategy(kind="smallest_fps")
        for num_frames in (16, 31, 46, 100, 200):
            idx = sample_train_clip(num_frames, strategy, rng).indices
            expected_step = (num_frames - 1) // 15
            assert idx[1] - idx[0] == expected_step
            assert idx[-1] < num_frames

    def test_hybrid_one_frame_per_segment(self):
        rng = np.random.default_rng(4)
        strategy = SamplingStrategy(kind="hybrid_segments")
        idx = sample_train_clip(64, strategy, rng).indices
        for i, frame in enumerate(idx):
            assert 4 * i <= frame < 4 * (i + 1)

    def test_short_video_padded_with_replacement(self):
        rng = np.random.default_rng(5)
        for kind in STRATEGY_KINDS:
            idx = sample_train_clip(10, SamplingStrategy(kind=kind), rng).indices
            assert len(idx) == 16
            assert all(0 <= i < 10 for i in idx)
            assert list(idx) == sorted(idx)

    def test_invariants_over_strategies(self):
        rng = np.random.default_rng(6)
        for kind in STRATEGY_KINDS:
            strategy = SamplingStrategy(kind=kind)
            for _ in range(300):
                num_frames = int(rng.integers(1, 400))
                idx = sample_train_clip(num_frames, strategy, rng).indices
                assert len(idx) == 16
                assert all(0 <= i < num_frames for i in idx)
                if num_frames >= 16:
                    assert all(a < b for a, b in zip(idx, idx[1:]))

    def test_unordered_is_permutation_of_ordered_draw(self):
        rng = np.random.default_rng(7)
        strategy = SamplingStrategy(kind="nonuniform_random", ordered=False)
        shuffled = 0
        for _ in range(100):
            idx = sample_train_clip(64, strategy, rng).indices
            assert len(idx) == 16
            assert len(set(idx)) == 16  # still a without-replacement subset
            if list(idx) != sorted(idx):
                shuffled += 1
        assert shuffled > 50  # ordering actually disabled

    def test_nonuniform_marginal_is_uniform(self):
        rng = np.random.default_rng(8)
        strategy = SamplingStrategy(kind="nonuniform_random")
        hits = np.zeros(32)
        draws = 20_000
        for _ in range(draws):
            hits[list(sample_train_clip(32, strategy, rng).indices)] += 1
        freq = hits / draws
        assert np.max(np.abs(freq - 0.5)) < 0.02

    def test_domain_error(self):
        rng = np.random.default_rng(9)
        with pytest.raises(ValueError):
            sample_train_clip(0, SamplingStrategy(), rng)


class TestTestClips:
    def test_spot_values(self):
        assert num_test_clips(84) == 6
        assert num_test_clips(16) == 1
        assert num_test_clips(200) == 13

    def test_matches_window_count_oracle(self):
        for num_frames in range(1, 501):
            assert num_test_clips(num_frames) == count_sliding_windows(num_frames)

    def test_uniform_windows_t48(self):
        rng = np.random.default_rng(0)
        clips = sample_test_clips(48, SamplingStrategy(kind="uniform_consecutive"), rng)
        assert [c.indices[0] for c in clips] == [0, 16, 32]
        assert clips[-1].indices == tuple(range(32, 48))

    def test_last_window_clamped(self):
        rng = np.random.default_rng(1)
        clips = sample_test_clips(40, SamplingStrategy(kind="uniform_consecutive"), rng)
        assert len(clips) == num_test_clips(40) == 3
        assert clips[-1].indices == tuple(range(24, 40))

    def test_nonuniform_count_and_order(self):
        rng = np.random.default_rng(2)
        clips = sample_test_clips(48, SamplingStrategy(kind="nonuniform_random"), rng)
        assert len(clips) == 3
        for clip in clips:
            idx = clip.indices
            assert len(idx) == 16
            assert all(a < b for a, b in zip(idx, idx[1:]))
        assert len({c.indices for c in clips}) > 1

    def test_short_video_single_padded_clip(self):
        rng = np.random.default_rng(3)
        clips = sample_test_clips(10, SamplingStrategy(kind="uniform_consecutive"), rng)
        assert len(clips) == 1
        assert len(clips[0]) == 16
        assert all(0 <= i < 10 for i in clips[0].indices)


class TestBalanceEpoch:
    def test_subsamples_to_real_count(self):
        rng = np.random.default_rng(0)
        real = [f"r{i}" for i in range(100)]
        synth = [f"s{i}" for i in range(800)]
        epoch = balance_epoch(real, synth, rng)
        assert len(epoch) == 200
        picked = [x for x in epoch if x.startswith("s")]
        assert len(picked) == 100
        assert len(set(picked)) == 100

    def test_empty_synth(self):
        rng = np.random.default_rng(1)
        epoch = balance_epoch(["a", "b"], [], rng)
        assert sorted(epoch) == ["a", "b"]

    def test_small_synth_fully_included(self):
        rng = np.random.default_rng(2)
        real = [f"r{i}" for i in range(100)]
        synth = [f"s{i}" for i in range(50)]
        epoch = balance_epoch(real, synth, rng)
        assert len(epoch) == 150
        assert set(synth) <= set(epoch)

    def test_empty_real_rejected(self):
        rng = np.random.default_rng(3)
        with pytest.raises(ValueError):
            balance_epoch([], ["s"], rng)

    def test_fresh_subsample_per_call(self):
        rng = np.random.default_rng(4)
        real = ["r"]
        synth = [f"s{i}" for i in range(50)]
        picks = {tuple(sorted(x for x in balance_epoch(real, synth, rng) if x != "r")) for _ in range(10)}
        assert len(picks) > 1


def test_clip_indices_validation():
    with pytest.raises(ValueError):
        ClipIndices(())
    assert len(ClipIndices((1, 2, 3))) == 3
