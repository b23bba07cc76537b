"""Per-color-space range classification of pixels into skin / non-skin.

Default ranges (all bounds inclusive):

    RGB    R 95-255    G 40-255     B 20-255
    HSV    H 0.04-0.0882   S 0.11-0.68   V 0.38-1.0
    YCbCr  Cb 100-125  Cr 135-170   (Y unconstrained)

The published HSV value range is internally inconsistent (lower bound
above upper); the default reads it as [0.38, 1.0], with the literal
[0.112, 0.38] reading available via ``default_filter(narrow_value=True)``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .colorspace import image_to_hsv, image_to_ycbcr
from .imaging import BinaryMask, ImageBuffer

__all__ = [
    "ColorSpaceId",
    "ChannelRange",
    "SkinRangeFilter",
    "default_filter",
    "classify_pixel",
    "apply_filter",
    "calibrate_ranges",
    "parse_filter_config",
]

log = logging.getLogger(__name__)


class ColorSpaceId(enum.IntEnum):
    RGB = 0
    HSV = 1
    YCBCR = 2

    @classmethod
    def parse(cls, token: str) -> "ColorSpaceId":
        try:
            return _SPACE_TOKENS[token.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown color space {token!r}") from None

    @property
    def label(self) -> str:
        return {0: "RGB", 1: "HSV", 2: "YCbCr"}[int(self)]


_SPACE_TOKENS = {
    "rgb": ColorSpaceId.RGB,
    "hsv": ColorSpaceId.HSV,
    "ycbcr": ColorSpaceId.YCBCR,
}


@dataclass(frozen=True)
class ChannelRange:
    """Inclusive [lo, hi] interval; out-of-order bounds are swapped."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            log.warning("ChannelRange bounds out of order (%s, %s); swapping", self.lo, self.hi)
            lo, hi = self.hi, self.lo
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class SkinRangeFilter:
    """The three per-space channel range sets.

    The YCbCr entry constrains only Cb and Cr; luma never participates.
    """

    rgb: tuple[ChannelRange, ChannelRange, ChannelRange]
    hsv: tuple[ChannelRange, ChannelRange, ChannelRange]
    ycbcr: tuple[ChannelRange, ChannelRange]

    def to_dict(self) -> dict:
        return {
            "rgb": {c: [r.lo, r.hi] for c, r in zip("rgb", self.rgb)},
            "hsv": {c: [r.lo, r.hi] for c, r in zip("hsv", self.hsv)},
            "ycbcr": {c: [r.lo, r.hi] for c, r in zip(("cb", "cr"), self.ycbcr)},
        }


def default_filter(narrow_value: bool = False) -> SkinRangeFilter:
    """The published default ranges.

    narrow_value selects the literal [0.112, 0.38] reading of the HSV
    value range instead of the default [0.38, 1.0].
    """
    v = ChannelRange(0.112, 0.38) if narrow_value else ChannelRange(0.38, 1.0)
    return SkinRangeFilter(
        rgb=(ChannelRange(95, 255), ChannelRange(40, 255), ChannelRange(20, 255)),
        hsv=(ChannelRange(0.04, 0.0882), ChannelRange(0.11, 0.68), v),
        ycbcr=(ChannelRange(100, 125), ChannelRange(135, 170)),
    )


def _ranges_for(space: ColorSpaceId, filt: SkinRangeFilter):
    """(channel index in the space's pixel tuple, range) pairs."""
    if space == ColorSpaceId.RGB:
        return list(enumerate(filt.rgb))
    if space == ColorSpaceId.HSV:
        return list(enumerate(filt.hsv))
    # YCbCr pixel is (y, cb, cr); y is unconstrained
    return [(1, filt.ycbcr[0]), (2, filt.ycbcr[1])]


def classify_pixel(space: ColorSpaceId, pixel: Sequence[float], filt: SkinRangeFilter) -> bool:
    """True iff every constrained channel lies inside its range."""
    return all(r.contains(float(pixel[i])) for i, r in _ranges_for(space, filt))


def apply_filter(image: ImageBuffer, space: ColorSpaceId, filt: SkinRangeFilter) -> BinaryMask:
    """Per-pixel range test over the whole image in the given space."""
    if space == ColorSpaceId.RGB:
        planes = image.pixels.astype(np.float64)
    elif space == ColorSpaceId.HSV:
        planes = image_to_hsv(image)
    else:
        planes = image_to_ycbcr(image)
    bits = np.ones(planes.shape[:2], dtype=bool)
    for i, r in _ranges_for(space, filt):
        ch = planes[..., i]
        bits &= (ch >= r.lo) & (ch <= r.hi)
    return BinaryMask(bits)


# calibration -----------------------------------------------------------------

_UNIT_SPACES = {ColorSpaceId.HSV}


def _f1(values: np.ndarray, labels: np.ndarray, bounds: np.ndarray) -> float:
    """F1 of the range test given per-channel (lo, hi) rows."""
    pred = np.ones(len(labels), dtype=bool)
    for c in range(values.shape[1]):
        pred &= (values[:, c] >= bounds[c, 0]) & (values[:, c] <= bounds[c, 1])
    tp = int(np.sum(pred & labels))
    fp = int(np.sum(pred & ~labels))
    fn = int(np.sum(~pred & labels))
    if tp == 0:
        return 0.0
    return 2.0 * tp / (2.0 * tp + fp + fn)


def calibrate_ranges(
    samples: Iterable[tuple[Sequence[float], bool]],
    space: ColorSpaceId,
    initial: SkinRangeFilter,
) -> SkinRangeFilter:
    """Coordinate search over each range bound maximizing sample F1.

    Bounds move on a fixed grid (step 1 for [0,255] channels, 0.005 for
    [0,1] channels); each bound in turn is scanned over its full grid
    with the others held fixed, and a move is taken only on a strict F1
    improvement.  Passes repeat until a full sweep leaves every bound in
    place, so the result never scores below the initial filter.
    """
    samples = list(samples)
    labels = np.array([bool(lab) for _, lab in samples])
    if not labels.any() or labels.all():
        raise ValueError("calibration needs both skin and non-skin samples")

    constrained = _ranges_for(space, initial)
    values = np.array(
        [[float(px[i]) for i, _ in constrained] for px, _ in samples], dtype=np.float64
    )
    if space in _UNIT_SPACES:
        grid = np.round(np.arange(0.0, 1.0 + 1e-9, 0.005), 3)
    else:
        grid = np.arange(0.0, 256.0, 1.0)

    bounds = np.array([[r.lo, r.hi] for _, r in constrained], dtype=np.float64)
    best = _f1(values, labels, bounds)
    improved = True
    while improved:
        improved = False
        for c in range(bounds.shape[0]):
            for side in (0, 1):
                incumbent = bounds[c, side]
                for cand in grid:
                    if cand == incumbent:
                        continue
                    trial = bounds.copy()
                    trial[c, side] = cand
                    if trial[c, 0] > trial[c, 1]:
                        continue
                    score = _f1(values, labels, trial)
                    if score > best:
                        best = score
                        bounds = trial
                        improved = True

    new_ranges = tuple(ChannelRange(lo, hi) for lo, hi in bounds)
    if space == ColorSpaceId.RGB:
        return SkinRangeFilter(rgb=new_ranges, hsv=initial.hsv, ycbcr=initial.ycbcr)
    if space == ColorSpaceId.HSV:
        return SkinRangeFilter(rgb=initial.rgb, hsv=new_ranges, ycbcr=initial.ycbcr)
    return SkinRangeFilter(rgb=initial.rgb, hsv=initial.hsv, ycbcr=new_ranges)


# configuration ---------------------------------------------------------------

_CONFIG_SLOTS = {
    ("rgb", "r"): 0, ("rgb", "g"): 1, ("rgb", "b"): 2,
    ("hsv", "h"): 0, ("hsv", "s"): 1, ("hsv", "v"): 2,
    ("ycbcr", "cb"): 0, ("ycbcr", "cr"): 1,
}


def parse_filter_config(text: str, base: SkinRangeFilter | None = None) -> SkinRangeFilter:
    """Apply "space.channel.lo/hi = value" lines on top of the defaults.

    Blank lines and '#' comments are ignored; unknown keys are errors.
    """
    base = base or default_filter()
    table = {
        "rgb": [[r.lo, r.hi] for r in base.rgb],
        "hsv": [[r.lo, r.hi] for r in base.hsv],
        "ycbcr": [[r.lo, r.hi] for r in base.ycbcr],
    }
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"filter config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        parts = key.strip().lower().split(".")
        if len(parts) != 3 or parts[2] not in ("lo", "hi"):
            raise ValueError(f"filter config line {lineno}: bad key {key.strip()!r}")
        space, channel, side = parts
        if (space, channel) not in _CONFIG_SLOTS:
            raise ValueError(f"filter config line {lineno}: bad key {key.strip()!r}")
        try:
            num = float(value.strip())
        except ValueError:
            raise ValueError(f"filter config line {lineno}: bad value {value.strip()!r}") from None
        table[space][_CONFIG_SLOTS[(space, channel)]][side == "hi"] = num
    return SkinRangeFilter(
        rgb=tuple(ChannelRange(lo, hi) for lo, hi in table["rgb"]),
        hsv=tuple(ChannelRange(lo, hi) for lo, hi in table["hsv"]),
        ycbcr=tuple(ChannelRange(lo, hi) for lo, hi in table["ycbcr"]),
    )
