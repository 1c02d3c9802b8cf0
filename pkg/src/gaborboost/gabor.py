"""Gabor filter bank generation and image feature extraction.

A bank is parameterized by a peak frequency ``f_max``, two frequency/sharpness
ratios ``gamma`` and ``eta``, and a grid of ``num_scales`` x ``num_orientations``
filters.  Scale ``u`` uses frequency ``f_max / sqrt(2**u)``; orientation ``v``
uses angle ``v / V * pi``.  Images are 2D float arrays in ``[0, 1]``, indexed
``[row, col]``.  Feature vectors concatenate filter-response magnitudes sampled
on a strided grid, scale-major, then orientation, then row-major positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ParameterError

__all__ = [
    "GaborBankConfig",
    "GaborKernel",
    "FeatureLayout",
    "make_kernel",
    "make_bank",
    "convolve_magnitude",
    "extract_features",
    "extract_selected",
    "load_bank_config",
]


@dataclass(frozen=True)
class GaborBankConfig:
    """Parameters of a Gabor filter bank.

    ``f_max`` is the peak frequency in cycles per pixel; ``gamma`` and ``eta``
    are the ratios of frequency to Gaussian sharpness along the wave axis and
    perpendicular to it.  Kernels are square with side ``2 * kernel_radius + 1``.
    ``downsample_step`` is the stride, in pixels, of the feature sampling grid.
    """

    f_max: float = 0.25
    gamma: float = math.sqrt(2.0)
    eta: float = math.sqrt(2.0)
    num_scales: int = 5
    num_orientations: int = 8
    kernel_radius: int = 16
    downsample_step: int = 4

    def __post_init__(self):
        if not self.f_max > 0:
            raise ParameterError(f"f_max must be > 0, got {self.f_max}")
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be > 0, got {self.gamma}")
        if not self.eta > 0:
            raise ParameterError(f"eta must be > 0, got {self.eta}")
        if self.num_scales < 1:
            raise ParameterError(f"num_scales must be >= 1, got {self.num_scales}")
        if self.num_orientations < 1:
            raise ParameterError(
                f"num_orientations must be >= 1, got {self.num_orientations}"
            )
        if self.kernel_radius < 1:
            raise ParameterError(
                f"kernel_radius must be >= 1, got {self.kernel_radius}"
            )
        if self.downsample_step < 1:
            raise ParameterError(
                f"downsample_step must be >= 1, got {self.downsample_step}"
            )

    def frequency(self, u: int) -> float:
        """Central frequency of scale ``u``, in cycles per pixel."""
        return self.f_max / math.sqrt(2.0**u)

    def orientation(self, v: int) -> float:
        """Rotation angle of orientation ``v``, in radians."""
        return (v / self.num_orientations) * math.pi


@dataclass(frozen=True)
class GaborKernel:
    """Sampled complex taps of one Gabor filter.

    ``taps[dy + radius, dx + radius]`` is the filter value at pixel offset
    ``(dx, dy)``; the grid is square with odd side ``2 * radius + 1``.
    """

    scale_index: int
    orientation_index: int
    f_u: float
    theta_v: float
    taps: np.ndarray

    @property
    def radius(self) -> int:
        return self.taps.shape[0] // 2


def make_kernel(config: GaborBankConfig, u: int, v: int) -> GaborKernel:
    """Sample the Gabor filter at scale ``u``, orientation ``v``.

    The tap at offset ``(x, y)`` is
    ``(f_u**2 / (pi * gamma * eta)) * exp(-(a*x')**2 - (b*y')**2) * exp(2j*pi*f_u*x')``
    with ``x' = x*cos(theta) + y*sin(theta)``, ``y' = -x*sin(theta) + y*cos(theta)``,
    ``a = f_u / gamma`` and ``b = f_u / eta``.
    """
    if not 0 <= u < config.num_scales:
        raise ParameterError(
            f"scale index {u} out of range [0, {config.num_scales})"
        )
    if not 0 <= v < config.num_orientations:
        raise ParameterError(
            f"orientation index {v} out of range [0, {config.num_orientations})"
        )
    f_u = config.frequency(u)
    theta_v = config.orientation(v)
    alpha = f_u / config.gamma
    beta = f_u / config.eta

    offsets = np.arange(-config.kernel_radius, config.kernel_radius + 1, dtype=np.float64)
    ys, xs = np.meshgrid(offsets, offsets, indexing="ij")
    cos_t, sin_t = math.cos(theta_v), math.sin(theta_v)
    x_rot = xs * cos_t + ys * sin_t
    y_rot = -xs * sin_t + ys * cos_t

    envelope = np.exp(-((alpha * x_rot) ** 2 + (beta * y_rot) ** 2))
    carrier = np.exp(2j * np.pi * f_u * x_rot)
    taps = (f_u**2 / (math.pi * config.gamma * config.eta)) * envelope * carrier
    return GaborKernel(u, v, f_u, theta_v, taps)


def make_bank(config: GaborBankConfig) -> list[GaborKernel]:
    """All ``num_scales * num_orientations`` kernels, scale-major.

    The list order ``(0,0), (0,1), ..., (U-1,V-1)`` is the canonical
    feature-index order used by :class:`FeatureLayout`.
    """
    return [
        make_kernel(config, u, v)
        for u in range(config.num_scales)
        for v in range(config.num_orientations)
    ]


def _validate_image(image: np.ndarray) -> np.ndarray:
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] < 1 or image.shape[1] < 1:
        raise ParameterError(f"image must be a 2D array, got shape {image.shape}")
    return image


def _padded_windows(image: np.ndarray, radius: int) -> np.ndarray:
    """Zero-padded sliding windows; ``[i, j]`` is the patch centered on pixel (i, j)."""
    side = 2 * radius + 1
    h, w = image.shape
    padded = np.zeros((h + 2 * radius, w + 2 * radius), dtype=np.float64)
    padded[radius : radius + h, radius : radius + w] = image
    return sliding_window_view(padded, (side, side))


def convolve_magnitude(image: np.ndarray, kernel: GaborKernel) -> np.ndarray:
    """Magnitude of the local correlation of ``image`` with ``kernel``.

    The output has the same shape as the image.  Pixels outside the image are
    treated as zero, and the kernel is applied as a correlation (no flip);
    only the discarded phase would differ under true convolution.
    """
    image = _validate_image(image)
    windows = _padded_windows(image, kernel.radius)
    real = np.einsum("xyij,ij->xy", windows, kernel.taps.real)
    imag = np.einsum("xyij,ij->xy", windows, kernel.taps.imag)
    return np.hypot(real, imag)


def extract_features(
    image: np.ndarray, bank: list[GaborKernel], step: int
) -> np.ndarray:
    """Gabor feature vector of ``image``: response magnitudes on a strided grid.

    Magnitudes are sampled at pixels ``(row*step, col*step)`` and concatenated
    in bank order, each response grid flattened row-major.  The result has
    length ``len(bank) * ceil(h/step) * ceil(w/step)``.
    """
    image = _validate_image(image)
    if step < 1:
        raise ParameterError(f"step must be >= 1, got {step}")
    if not bank:
        raise ParameterError("bank must contain at least one kernel")
    radius = bank[0].radius
    if any(k.radius != radius for k in bank):
        raise ParameterError("all kernels in a bank must share one radius")

    windows = _padded_windows(image, radius)[::step, ::step]
    parts = []
    for kernel in bank:
        real = np.einsum("xyij,ij->xy", windows, kernel.taps.real)
        imag = np.einsum("xyij,ij->xy", windows, kernel.taps.imag)
        parts.append(np.hypot(real, imag).ravel())
    return np.concatenate(parts)


def extract_selected(
    image: np.ndarray, selected: list[int], config: GaborBankConfig
) -> np.ndarray:
    """Only the requested components of the full feature vector.

    Each component is computed by one local correlation at its decoded
    (scale, orientation, position); no full-bank convolution is performed.
    Values equal the corresponding entries of :func:`extract_features`.
    """
    image = _validate_image(image)
    h, w = image.shape
    layout = FeatureLayout.for_image(config, width=w, height=h)
    radius = config.kernel_radius

    kernels: dict[tuple[int, int], np.ndarray] = {}
    out = np.empty(len(selected), dtype=np.float64)
    for pos, index in enumerate(selected):
        u, v, row, col = layout.decode(index)
        taps = kernels.get((u, v))
        if taps is None:
            taps = make_kernel(config, u, v).taps
            kernels[(u, v)] = taps
        y, x = row * layout.step, col * layout.step
        # Clip the tap grid against the image border; outside pixels are zero.
        y0, y1 = max(0, y - radius), min(h, y + radius + 1)
        x0, x1 = max(0, x - radius), min(w, x + radius + 1)
        patch = image[y0:y1, x0:x1]
        sub = taps[y0 - y + radius : y1 - y + radius, x0 - x + radius : x1 - x + radius]
        out[pos] = abs(np.sum(patch * sub))
    return out


@dataclass(frozen=True)
class FeatureLayout:
    """Describes how feature indices map to (scale, orientation, position).

    Carries the full bank parameterization plus the image geometry so that
    persisted models are self-contained: a layout is enough to re-extract the
    matching features from new images.  Index codec:
    ``index = ((u*V + v)*rows + row)*cols + col`` where ``row``/``col`` count
    sampled grid positions (pixel ``(row*step, col*step)``).
    """

    f_max: float
    gamma: float
    eta: float
    num_scales: int
    num_orientations: int
    kernel_radius: int
    step: int
    width: int
    height: int

    @classmethod
    def for_image(
        cls, config: GaborBankConfig, width: int, height: int
    ) -> "FeatureLayout":
        if width < 1 or height < 1:
            raise ParameterError(f"bad image geometry {width}x{height}")
        return cls(
            f_max=config.f_max,
            gamma=config.gamma,
            eta=config.eta,
            num_scales=config.num_scales,
            num_orientations=config.num_orientations,
            kernel_radius=config.kernel_radius,
            step=config.downsample_step,
            width=width,
            height=height,
        )

    def bank_config(self) -> GaborBankConfig:
        return GaborBankConfig(
            f_max=self.f_max,
            gamma=self.gamma,
            eta=self.eta,
            num_scales=self.num_scales,
            num_orientations=self.num_orientations,
            kernel_radius=self.kernel_radius,
            downsample_step=self.step,
        )

    @property
    def rows(self) -> int:
        return -(-self.height // self.step)

    @property
    def cols(self) -> int:
        return -(-self.width // self.step)

    @property
    def num_features(self) -> int:
        return self.num_scales * self.num_orientations * self.rows * self.cols

    def encode(self, u: int, v: int, row: int, col: int) -> int:
        V, rows, cols = self.num_orientations, self.rows, self.cols
        if not (
            0 <= u < self.num_scales
            and 0 <= v < V
            and 0 <= row < rows
            and 0 <= col < cols
        ):
            raise ParameterError(f"coordinates ({u}, {v}, {row}, {col}) out of range")
        return ((u * V + v) * rows + row) * cols + col

    def decode(self, index: int) -> tuple[int, int, int, int]:
        if not 0 <= index < self.num_features:
            raise ParameterError(
                f"feature index {index} out of range [0, {self.num_features})"
            )
        index, col = divmod(index, self.cols)
        index, row = divmod(index, self.rows)
        u, v = divmod(index, self.num_orientations)
        return u, v, row, col

    def position(self, index: int) -> tuple[int, int]:
        """Pixel coordinates (x, y) of a feature index."""
        _, _, row, col = self.decode(index)
        return col * self.step, row * self.step

    def descriptor(self) -> str:
        return (
            f"f_max={self.f_max:.17g} gamma={self.gamma:.17g} eta={self.eta:.17g} "
            f"scales={self.num_scales} orientations={self.num_orientations} "
            f"radius={self.kernel_radius} step={self.step} "
            f"width={self.width} height={self.height}"
        )

    @classmethod
    def from_descriptor(cls, text: str) -> "FeatureLayout":
        fields: dict[str, str] = {}
        for token in text.split():
            key, _, value = token.partition("=")
            if not value:
                raise ParameterError(f"bad layout token {token!r}")
            fields[key] = value
        try:
            return cls(
                f_max=float(fields["f_max"]),
                gamma=float(fields["gamma"]),
                eta=float(fields["eta"]),
                num_scales=int(fields["scales"]),
                num_orientations=int(fields["orientations"]),
                kernel_radius=int(fields["radius"]),
                step=int(fields["step"]),
                width=int(fields["width"]),
                height=int(fields["height"]),
            )
        except (KeyError, ValueError) as bad:
            raise ParameterError(f"bad layout descriptor: {bad}") from None


_CONFIG_KEYS: dict[str, type] = {
    "f_max": float,
    "gamma": float,
    "eta": float,
    "num_scales": int,
    "num_orientations": int,
    "kernel_radius": int,
    "downsample_step": int,
}


def load_bank_config(path: str | Path) -> GaborBankConfig:
    """Read a bank config from a flat ``key = value`` text file.

    Lines starting with ``#`` (and inline ``#`` comments) are ignored.
    Unknown keys are rejected; missing keys keep their defaults.
    """
    values: dict[str, float | int] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ParameterError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        if key not in _CONFIG_KEYS:
            raise ParameterError(f"{path}:{line_no}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError:
            raise ParameterError(
                f"{path}:{line_no}: bad value {value!r} for {key}"
            ) from None
    return GaborBankConfig(**values)
