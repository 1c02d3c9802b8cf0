"""Image and dataset ingestion, plus a synthetic identity-image generator.

Images travel as binary PGM (P5, maxval 255) and are mapped to float arrays
in [0, 1].  Dataset manifests are tab-separated text: identity, image path,
and an optional split tag (``gallery``/``probe``/``train``; missing tags read
as ``train``).  Relative image paths resolve against the manifest location.

The synthetic generator stands in for a licensed face database at desk scale:
each identity gets a reproducible base pattern (three oriented gratings plus a
Gaussian blob) and each image adds fresh pixel noise, so same-identity image
pairs differ less than cross-identity ones without being identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, ParameterError, PgmFormatError

__all__ = [
    "SyntheticSpec",
    "ManifestEntry",
    "load_pgm",
    "save_pgm",
    "generate_synthetic",
    "split_dataset",
    "read_manifest",
    "write_manifest",
]

_WHITESPACE = b" \t\r\n\x0b\x0c"
_SPLITS = ("gallery", "probe", "train")


def _skip_separators(data: bytes, pos: int) -> int:
    while pos < len(data):
        if data[pos] == ord("#"):
            newline = data.find(b"\n", pos)
            pos = len(data) if newline < 0 else newline + 1
        elif data[pos] in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    """Parse an ASCII integer; returns (value, token start, position after)."""
    pos = _skip_separators(data, pos)
    start = pos
    while pos < len(data) and data[pos : pos + 1].isdigit():
        pos += 1
    if start == pos:
        raise PgmFormatError(f"expected {what}", offset=start)
    return int(data[start:pos]), start, pos


def load_pgm(path: str | Path) -> np.ndarray:
    """Read a binary PGM (P5, maxval 255) as a float image in [0, 1]."""
    data = Path(path).read_bytes()
    if data[:2] == b"P2":
        raise PgmFormatError("ASCII PGM (P2) is not supported, need binary P5", offset=0)
    if data[:2] != b"P5":
        raise PgmFormatError("missing P5 magic", offset=0)
    width, _, pos = _read_int(data, 2, "width")
    height, _, pos = _read_int(data, pos, "height")
    maxval, maxval_at, pos = _read_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmFormatError(f"bad dimensions {width}x{height}", offset=2)
    if maxval != 255:
        raise PgmFormatError(f"unsupported maxval {maxval}", offset=maxval_at)
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PgmFormatError("expected single whitespace after maxval", offset=pos)
    pos += 1
    payload = data[pos:]
    if len(payload) != width * height:
        raise PgmFormatError(
            f"pixel payload holds {len(payload)} bytes, expected {width * height}",
            offset=pos,
        )
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return pixels.astype(np.float64) / 255.0


def save_pgm(path: str | Path, image: np.ndarray) -> None:
    """Write a float image in [0, 1] as binary PGM, quantized to 8 bits."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] < 1 or image.shape[1] < 1:
        raise ParameterError(f"image must be 2D, got shape {image.shape}")
    if image.min() < 0.0 or image.max() > 1.0:
        raise ParameterError("pixel values must lie in [0, 1]")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    payload = np.rint(image * 255.0).astype(np.uint8).tobytes()
    Path(path).write_bytes(header + payload)


@dataclass(frozen=True)
class SyntheticSpec:
    num_identities: int
    images_per_identity: int
    image_size: int = 64
    noise_sigma: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.num_identities < 1 or self.images_per_identity < 1:
            raise ParameterError("identity and image counts must be >= 1")
        if self.image_size < 1:
            raise ParameterError(f"image_size must be >= 1, got {self.image_size}")
        if self.noise_sigma < 0:
            raise ParameterError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.seed < 0:
            raise ParameterError(f"seed must be >= 0, got {self.seed}")


def generate_synthetic(spec: SyntheticSpec) -> list[tuple[str, np.ndarray]]:
    """Deterministic identity-labeled images, ``(identity, image)`` pairs.

    Identity ``i``'s base pattern and image ``k``'s noise are drawn from
    generators seeded by ``(seed, i)`` and ``(seed, i, k)``, so any subset of
    the dataset is reproducible independently of generation order.
    """
    size = spec.image_size
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    out: list[tuple[str, np.ndarray]] = []
    for i in range(spec.num_identities):
        identity = f"id{i:03d}"
        rng = np.random.default_rng([spec.seed, i])
        base = np.full((size, size), 0.5)
        for _ in range(3):
            freq = rng.uniform(0.05, 0.22)
            theta = rng.uniform(0.0, np.pi)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            amplitude = rng.uniform(0.08, 0.16)
            axis = xs * np.cos(theta) + ys * np.sin(theta)
            base += amplitude * np.sin(2.0 * np.pi * freq * axis + phase)
        cx, cy = rng.uniform(0.25 * size, 0.75 * size, size=2)
        blob_sigma = rng.uniform(size / 9.0, size / 5.0)
        blob_amp = rng.uniform(0.20, 0.35)
        base += blob_amp * np.exp(
            -((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * blob_sigma**2)
        )
        for k in range(spec.images_per_identity):
            image = base
            if spec.noise_sigma > 0:
                img_rng = np.random.default_rng([spec.seed, i, k])
                image = base + img_rng.normal(0.0, spec.noise_sigma, (size, size))
            out.append((identity, np.clip(image, 0.0, 1.0)))
    return out


@dataclass(frozen=True)
class ManifestEntry:
    identity: str
    path: Path
    split: str = "train"

    def __post_init__(self):
        if not self.identity:
            raise ParameterError("identity must be non-empty")
        if self.split not in _SPLITS:
            raise ParameterError(
                f"split must be one of {_SPLITS}, got {self.split!r}"
            )


def read_manifest(path: str | Path, check_exists: bool = True) -> list[ManifestEntry]:
    """Parse a manifest; relative image paths resolve against its directory."""
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) not in (2, 3):
            raise ParameterError(
                f"{path}:{line_no}: expected 2 or 3 tab-separated fields, got {len(parts)}"
            )
        identity, img = parts[0], Path(parts[1])
        split = parts[2] if len(parts) == 3 else "train"
        resolved = img if img.is_absolute() else base / img
        if check_exists and not resolved.is_file():
            raise ParameterError(f"{path}:{line_no}: image not found: {resolved}")
        entries.append(ManifestEntry(identity, resolved, split))
    if not entries:
        raise ParameterError(f"{path}: manifest is empty")
    return entries


def write_manifest(
    entries: list[ManifestEntry], path: str | Path, relative_to: str | Path | None = None
) -> None:
    path = Path(path)
    lines = []
    for e in entries:
        p = e.path
        if relative_to is not None:
            p = p.relative_to(relative_to)
        lines.append(f"{e.identity}\t{p}\t{e.split}")
    path.write_text("\n".join(lines) + "\n")


def split_dataset(
    entries: list[ManifestEntry], gallery_per_id: int, seed: int
) -> list[ManifestEntry]:
    """Tag ``gallery_per_id`` random images per identity as gallery, rest probe.

    Every identity must have strictly more images than ``gallery_per_id``;
    otherwise a :class:`CapacityError` names the offending identity.
    """
    if gallery_per_id < 1:
        raise ParameterError(f"gallery_per_id must be >= 1, got {gallery_per_id}")
    if not entries:
        raise ParameterError("no entries to split")
    by_identity: dict[str, list[int]] = {}
    for pos, e in enumerate(entries):
        by_identity.setdefault(e.identity, []).append(pos)

    tags = ["probe"] * len(entries)
    for idx, identity in enumerate(sorted(by_identity)):
        positions = by_identity[identity]
        if len(positions) <= gallery_per_id:
            raise CapacityError(
                f"identity {identity!r} has {len(positions)} images;"
                f" needs more than {gallery_per_id} to retain a probe"
            )
        rng = np.random.default_rng([seed, idx])
        for k in rng.choice(len(positions), gallery_per_id, replace=False):
            tags[positions[int(k)]] = "gallery"
    return [
        ManifestEntry(e.identity, e.path, tag) for e, tag in zip(entries, tags)
    ]
