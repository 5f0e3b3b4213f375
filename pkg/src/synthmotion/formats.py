"""File formats: motion files and render manifests.

Motion file (UTF-8, line-delimited JSON):
    line 1            header: format_version, source_id, action_label, fps,
                      num_people, num_frames
    lines 2..P+1      one person each: person (index), betas (10), poses
                      (T x 24 x 3 axis-angle radians), trans (T x 3 meters)

Floats in motion files use Python's shortest round-trip repr, so a
parse/serialize cycle is lossless. Manifest files are also line-delimited
JSON but canonical: keys sorted, floats printed with 9 significant digits,
one entry per line, so equal-seed builds are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .motion import JOINT_COUNT, SHAPE_PARAM_COUNT, MotionClip, PoseSequence

FORMAT_VERSION = 1


class MotionDataError(ValueError):
    """A motion file or record violating the format or a type invariant."""


def canonical_json(value) -> str:
    """Deterministic JSON: sorted keys, floats at 9 significant digits."""
    parts: list[str] = []
    _write_canonical(value, parts)
    return "".join(parts)


def _write_canonical(value, parts: list[str]) -> None:
    if isinstance(value, dict):
        parts.append("{")
        for i, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise TypeError(f"manifest keys must be strings, got {type(key).__name__}")
            if i:
                parts.append(",")
            parts.append(json.dumps(key))
            parts.append(":")
            _write_canonical(value[key], parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(",")
            _write_canonical(item, parts)
        parts.append("]")
    elif isinstance(value, np.ndarray):
        _write_canonical(value.tolist(), parts)
    elif isinstance(value, bool):
        parts.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            raise ValueError("cannot serialize non-finite float")
        parts.append(f"{value:.9g}")
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif value is None:
        parts.append("null")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def serialize_motion_clip(clip: MotionClip) -> bytes:
    """Encode a clip in the motion-file format; deterministic bytes."""
    header = {
        "format_version": FORMAT_VERSION,
        "source_id": clip.source_id,
        "action_label": clip.action_label,
        "fps": clip.fps,
        "num_people": len(clip.people),
        "num_frames": clip.num_frames,
    }
    lines = [json.dumps(header, sort_keys=True)]
    for index, person in enumerate(clip.people):
        record = {
            "person": index,
            "betas": person.betas.tolist(),
            "poses": person.poses.tolist(),
            "trans": person.trans.tolist(),
        }
        lines.append(json.dumps(record, sort_keys=True))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _field(record: dict, name: str, where: str):
    if name not in record:
        raise MotionDataError(f"{where}: missing field {name!r}")
    return record[name]


def parse_motion_clip(data: bytes | str, source: str = "<memory>") -> MotionClip:
    """Decode and validate a motion file; raises MotionDataError on any
    malformed line, missing field, or violated type invariant."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise MotionDataError(f"{source}: empty motion file")

    def parse_line(index: int) -> dict:
        try:
            record = json.loads(lines[index])
        except json.JSONDecodeError as exc:
            raise MotionDataError(f"{source}, line {index + 1}: invalid JSON ({exc})") from exc
        if not isinstance(record, dict):
            raise MotionDataError(f"{source}, line {index + 1}: expected an object")
        return record

    header = parse_line(0)
    where = f"{source}, header"
    version = _field(header, "format_version", where)
    if version != FORMAT_VERSION:
        raise MotionDataError(f"{where}: unsupported format_version {version!r}")
    num_people = _field(header, "num_people", where)
    num_frames = _field(header, "num_frames", where)
    if not isinstance(num_people, int) or num_people < 1:
        raise MotionDataError(f"{where}: num_people must be a positive integer")
    if len(lines) != 1 + num_people:
        raise MotionDataError(
            f"{source}: header declares {num_people} people but file has {len(lines) - 1} person lines"
        )

    people = []
    for index in range(num_people):
        record = parse_line(1 + index)
        where = f"{source}, person {index}"
        poses = np.asarray(_field(record, "poses", where), dtype=np.float64)
        betas = np.asarray(_field(record, "betas", where), dtype=np.float64)
        trans = np.asarray(_field(record, "trans", where), dtype=np.float64)
        if poses.ndim != 3 or poses.shape[1:] != (JOINT_COUNT, 3):
            raise MotionDataError(
                f"{where}: poses must be T x {JOINT_COUNT} x 3, got shape {poses.shape}"
            )
        if poses.shape[0] != num_frames:
            raise MotionDataError(
                f"{where}: poses have {poses.shape[0]} frames, header says {num_frames}"
            )
        if betas.shape != (SHAPE_PARAM_COUNT,):
            raise MotionDataError(
                f"{where}: betas must have length {SHAPE_PARAM_COUNT}, got shape {betas.shape}"
            )
        try:
            people.append(PoseSequence(poses, betas, trans, _field(header, "fps", f"{source}, header")))
        except ValueError as exc:
            raise MotionDataError(f"{where}: {exc}") from exc

    try:
        return MotionClip(
            tuple(people),
            action_label=_field(header, "action_label", f"{source}, header"),
            source_id=_field(header, "source_id", f"{source}, header"),
        )
    except (ValueError, TypeError) as exc:
        raise MotionDataError(f"{source}: {exc}") from exc


def load_motion_file(path) -> MotionClip:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise MotionDataError(f"{path}: {exc}") from exc
    return parse_motion_clip(data, source=str(path))


def save_motion_file(clip: MotionClip, path) -> bytes:
    data = serialize_motion_clip(clip)
    Path(path).write_bytes(data)
    return data


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def serialize_manifest(records) -> bytes:
    """Render manifest: one canonical JSON record per line."""
    return "".join(canonical_json(record) + "\n" for record in records).encode("utf-8")
