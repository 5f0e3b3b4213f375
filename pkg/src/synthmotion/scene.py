"""Viewpoint sampling, translation normalization, and render manifests.

Coordinate convention (fixed so manifests are bit-exact): the world is
z-up with the subject at the origin; a camera at azimuth a, distance d,
height h sits at (d*sin(a), -d*cos(a), h) and looks at the origin. Camera
axes follow the computer-vision convention (x right, y down, z along the
optical axis), and extrinsics are the 3x4 world-to-camera matrix [R | t].

A manifest entry fully determines one synthetic clip to render: the
processed motion (content-addressed reference into the motion store), the
augmentation descriptor that produced it, the camera, the appearance draw,
and the action label. Per-entry RNG streams are derived from the build seed
and the entry coordinates, so builds are deterministic and the entry space
can be partitioned across workers in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .augment import NoiseSpec, additive_noise, interpolate_sequences
from .formats import content_hash, serialize_motion_clip
from .motion import MotionClip, smooth_series

DEFAULT_AZIMUTHS_DEG = (0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0)
TRANSLATION_MODES = ("none", "xy_always", "xy_when_multi", "xyz")
AUGMENTATION_MODES = ("none", "noise", "interpolate")


@dataclass(frozen=True)
class CameraRanges:
    """Sampling ranges for camera distance and height, in meters."""

    distance: tuple[float, float] = (4.0, 6.0)
    height: tuple[float, float] = (-1.0, 3.0)

    def __post_init__(self):
        for name, (lo, hi) in (("distance", self.distance), ("height", self.height)):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ValueError(f"invalid {name} range [{lo}, {hi}]")
        if self.distance[0] <= 0:
            raise ValueError("distance must be positive")

    @classmethod
    def fixed(cls, distance: float = 5.0, height: float = 1.0) -> "CameraRanges":
        """Degenerate ranges pinning distance and height to single values."""
        return cls((distance, distance), (height, height))


def camera_position(azimuth_deg: float, distance: float, height: float) -> np.ndarray:
    a = np.deg2rad(azimuth_deg)
    return np.array([distance * np.sin(a), -distance * np.cos(a), height])


def look_at_extrinsics(position: np.ndarray, target=(0.0, 0.0, 0.0)) -> np.ndarray:
    """World-to-camera [R | t] for a camera at `position` aimed at `target`."""
    position = np.asarray(position, dtype=np.float64)
    forward = np.asarray(target, dtype=np.float64) - position
    norm = np.linalg.norm(forward)
    if norm == 0:
        raise ValueError("camera position coincides with the look-at target")
    forward = forward / norm
    world_up = np.array([0.0, 0.0, 1.0])
    right = np.cross(forward, world_up)
    right_norm = np.linalg.norm(right)
    if right_norm < 1e-12:
        raise ValueError("camera optical axis is vertical; roll is undefined")
    right = right / right_norm
    down = np.cross(forward, right)
    rotation = np.stack([right, down, forward])
    return np.hstack([rotation, -(rotation @ position)[:, None]])


@dataclass(frozen=True)
class CameraSample:
    azimuth_deg: float
    distance_m: float
    height_m: float
    extrinsics: np.ndarray = field(repr=False)

    def to_record(self) -> dict:
        return {
            "azimuth_deg": self.azimuth_deg,
            "distance_m": self.distance_m,
            "height_m": self.height_m,
            "extrinsics": self.extrinsics.tolist(),
        }


def sample_camera(
    azimuth_deg: float,
    rng: np.random.Generator,
    ranges: CameraRanges = CameraRanges(),
    azimuth_set: Sequence[float] = DEFAULT_AZIMUTHS_DEG,
) -> CameraSample:
    """Sample distance and height uniformly for one of the allowed azimuths."""
    if float(azimuth_deg) not in {float(a) for a in azimuth_set}:
        raise ValueError(f"azimuth {azimuth_deg} not in the configured set {tuple(azimuth_set)}")
    distance = float(rng.uniform(*ranges.distance))
    height = float(rng.uniform(*ranges.height))
    extrinsics = look_at_extrinsics(camera_position(azimuth_deg, distance, height))
    return CameraSample(float(azimuth_deg), distance, height, extrinsics)


def weak_perspective_depth(scale: float, image_width: float, focal_length: float = 500.0) -> float:
    """Recover depth from a weak-perspective camera scale: F / (0.5 * W * s)."""
    if not (scale > 0):
        raise ValueError(f"scale must be positive, got {scale}")
    if not (image_width > 0):
        raise ValueError(f"image width must be positive, got {image_width}")
    return focal_length / (0.5 * image_width * scale)


def process_translations(
    clip: MotionClip, mode: str = "xy_when_multi", window: int = 1, weights=None
) -> MotionClip:
    """Normalize per-person root translations for rendering.

    Modes: "none" drops translations entirely; "xy_always" and "xyz" keep
    them; "xy_when_multi" keeps them only for multi-person clips, centering a
    single person at the origin every frame. Kept translations are smoothed
    (window 1 = no-op; the pose-smoothing step usually already did this),
    z is zeroed except in "xyz" mode, and the grand mean of x and y over all
    frames and people is subtracted, which centers the group while exactly
    preserving within-frame inter-person offsets.
    """
    if mode not in TRANSLATION_MODES:
        raise ValueError(f"mode must be one of {TRANSLATION_MODES}, got {mode!r}")
    translate = mode in ("xy_always", "xyz") or (
        mode == "xy_when_multi" and len(clip.people) > 1
    )
    if not translate:
        zero = np.zeros((clip.num_frames, 3))
        return clip.with_people(
            p.__class__(p.poses, p.betas, zero, p.fps) for p in clip.people
        )
    stacked = np.stack([smooth_series(p.trans, window, weights) for p in clip.people])
    mean_xy = stacked[..., :2].mean(axis=(0, 1))
    stacked[..., :2] -= mean_xy
    if mode != "xyz":
        stacked[..., 2] = 0.0
    return clip.with_people(
        p.__class__(p.poses, p.betas, stacked[i], p.fps) for i, p in enumerate(clip.people)
    )


@dataclass(frozen=True)
class AppearancePools:
    """Identifier pools for appearance randomization.

    Keep separate train and test pool objects; a manifest built from one
    never references ids from the other. body_shapes is an optional pool of
    10-vectors; without it shapes are drawn from a unit Gaussian.
    """

    cloth_textures: tuple[str, ...]
    backgrounds: tuple[str, ...]
    body_shapes: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "cloth_textures", tuple(self.cloth_textures))
        object.__setattr__(self, "backgrounds", tuple(self.backgrounds))
        if self.body_shapes is not None:
            shapes = tuple(tuple(float(x) for x in shape) for shape in self.body_shapes)
            if any(len(s) != 10 for s in shapes):
                raise ValueError("every body shape must have 10 coefficients")
            object.__setattr__(self, "body_shapes", shapes)

    def validate_nonempty(self) -> None:
        if not self.cloth_textures:
            raise ValueError("cloth texture pool is empty")
        if not self.backgrounds:
            raise ValueError("background pool is empty")
        if self.body_shapes is not None and not self.body_shapes:
            raise ValueError("body shape pool is empty")


@dataclass(frozen=True)
class AppearanceSpec:
    cloth_texture_id: str
    body_shape_betas: tuple[float, ...]
    background_id: str
    lighting_seed: int

    def __post_init__(self):
        if not self.cloth_texture_id or not self.background_id:
            raise ValueError("appearance ids must be nonempty")
        betas = tuple(float(x) for x in self.body_shape_betas)
        if len(betas) != 10 or not all(np.isfinite(betas)):
            raise ValueError("body shape betas must be 10 finite values")
        object.__setattr__(self, "body_shape_betas", betas)

    def to_record(self) -> dict:
        return {
            "cloth_texture_id": self.cloth_texture_id,
            "body_shape_betas": list(self.body_shape_betas),
            "background_id": self.background_id,
            "lighting_seed": self.lighting_seed,
        }


def sample_appearance(rng: np.random.Generator, pools: AppearancePools) -> AppearanceSpec:
    cloth = pools.cloth_textures[int(rng.integers(len(pools.cloth_textures)))]
    background = pools.backgrounds[int(rng.integers(len(pools.backgrounds)))]
    if pools.body_shapes is not None:
        betas = pools.body_shapes[int(rng.integers(len(pools.body_shapes)))]
    else:
        betas = tuple(rng.normal(0.0, 1.0, size=10).tolist())
    return AppearanceSpec(cloth, betas, background, int(rng.integers(2**31)))


@dataclass(frozen=True)
class MotionAugmentationPolicy:
    """How build_manifest diversifies motion across renders.

    mode "noise" draws a fresh additive-noise seed per (clip, render);
    "interpolate" blends each clip with a randomly picked same-label partner
    per render; "none" reuses the input motion for every render.
    """

    mode: str = "none"
    granularity: str = "video"
    sigma: float = 0.1
    interval: int = 25
    weight: float = 0.5
    translation_mode: str = "xy_when_multi"

    def __post_init__(self):
        if self.mode not in AUGMENTATION_MODES:
            raise ValueError(f"mode must be one of {AUGMENTATION_MODES}, got {self.mode!r}")
        if self.translation_mode not in TRANSLATION_MODES:
            raise ValueError(f"unknown translation mode {self.translation_mode!r}")
        if not (0.0 <= self.weight <= 1.0):
            raise ValueError(f"weight must be in [0, 1], got {self.weight}")


@dataclass(frozen=True)
class RenderManifestEntry:
    source_id: str
    action_label: int
    clip_index: int
    view_index: int
    render_index: int
    camera: CameraSample
    appearance: AppearanceSpec
    augmentation: dict
    motion_path: str
    motion_sha256: str

    def to_record(self) -> dict:
        return {
            "source_id": self.source_id,
            "action_label": self.action_label,
            "clip_index": self.clip_index,
            "view_index": self.view_index,
            "render_index": self.render_index,
            "camera": self.camera.to_record(),
            "appearance": self.appearance.to_record(),
            "augmentation": self.augmentation,
            "motion": {"path": self.motion_path, "sha256": self.motion_sha256},
        }


@dataclass(frozen=True)
class ManifestBuild:
    entries: tuple[RenderManifestEntry, ...]
    motions: dict  # path -> MotionClip, the processed motion store


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(tuple(parts)).generate_state(1)[0])


def _same_label_partners(clips: Sequence[MotionClip], index: int) -> list[int]:
    label = clips[index].action_label
    return [i for i, c in enumerate(clips) if i != index and c.action_label == label]


def build_manifest(
    clips: Sequence[MotionClip],
    views: Sequence[float] = DEFAULT_AZIMUTHS_DEG,
    renders_per_view: int = 1,
    policy: MotionAugmentationPolicy = MotionAugmentationPolicy(),
    pools: AppearancePools | None = None,
    seed: int = 0,
    camera_ranges: CameraRanges = CameraRanges(),
) -> ManifestBuild:
    """Emit one fully specified render entry per (clip, view, render).

    Motion variants are derived per (clip, render) and shared across views,
    so a motion is seen from every viewpoint while camera and appearance are
    resampled independently per entry. Deterministic given the seed.
    """
    if pools is None:
        raise ValueError("appearance pools are required")
    pools.validate_nonempty()
    if renders_per_view < 1:
        raise ValueError(f"renders_per_view must be >= 1, got {renders_per_view}")
    if not views:
        raise ValueError("need at least one view")

    entries: list[RenderManifestEntry] = []
    motions: dict[str, MotionClip] = {}
    motion_meta: dict[str, str] = {}

    for clip_index, clip in enumerate(clips):
        variants: list[tuple[str, dict]] = []
        for render_index in range(renders_per_view):
            descriptor = {
                "mode": policy.mode,
                "translation_mode": policy.translation_mode,
            }
            if policy.mode == "noise":
                noise_seed = _derived_seed(seed, clip_index, render_index)
                spec = NoiseSpec(policy.granularity, policy.sigma, noise_seed, policy.interval)
                variant = additive_noise(clip, spec)
                descriptor.update(
                    granularity=policy.granularity,
                    sigma=policy.sigma,
                    interval=policy.interval if policy.granularity == "keyframe" else None,
                    noise_seed=noise_seed,
                )
                key = f"{clip.source_id}__v{render_index}"
            elif policy.mode == "interpolate":
                partners = _same_label_partners(clips, clip_index)
                if partners:
                    pick_rng = np.random.default_rng((seed, clip_index, render_index))
                    partner_index = partners[int(pick_rng.integers(len(partners)))]
                    variant = interpolate_sequences(clip, clips[partner_index], policy.weight)
                    descriptor.update(
                        weight=policy.weight,
                        partner_source_id=clips[partner_index].source_id,
                    )
                else:
                    # No second clip with this label; nothing to blend with.
                    variant = clip
                    descriptor.update(weight=policy.weight, partner_source_id=None)
                key = f"{clip.source_id}__v{render_index}"
            else:
                variant = clip
                key = clip.source_id

            variant = process_translations(variant, policy.translation_mode)
            path = f"motions/{key}.jsonl"
            if path not in motions:
                motions[path] = variant
                motion_meta[path] = content_hash(serialize_motion_clip(variant))
            variants.append((path, descriptor))

        for view_index, azimuth in enumerate(views):
            for render_index in range(renders_per_view):
                entry_rng = np.random.default_rng((seed, clip_index, view_index, render_index))
                camera = sample_camera(azimuth, entry_rng, camera_ranges, azimuth_set=views)
                appearance = sample_appearance(entry_rng, pools)
                path, descriptor = variants[render_index]
                entries.append(
                    RenderManifestEntry(
                        source_id=clip.source_id,
                        action_label=clip.action_label,
                        clip_index=clip_index,
                        view_index=view_index,
                        render_index=render_index,
                        camera=camera,
                        appearance=appearance,
                        augmentation=descriptor,
                        motion_path=path,
                        motion_sha256=motion_meta[path],
                    )
                )
    return ManifestBuild(tuple(entries), motions)
