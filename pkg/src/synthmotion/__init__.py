"""Deterministic synthetic-motion data generation toolkit.

Pose-sequence smoothing, motion augmentation (additive quaternion noise,
DTW-aligned interpolation), camera viewpoint sampling, multi-person
translation normalization, render-manifest emission, video frame sampling
strategies, and a DTW nearest-neighbor evaluation harness.
"""

__version__ = "0.1.0"
