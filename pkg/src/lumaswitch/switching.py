"""The segmentation pipeline and the three color-space switching strategies.

Pipeline per space: range filter -> 3x3 majority denoise -> largest
8-connected blob -> overlay onto the original image.

Strategies:
  * ann:          a trained network picks the space from the image's
                  9-channel mean feature vector, then the pipeline runs
                  in that space only.
  * maxconnected: the pipeline runs in all three spaces and the space
                  with the biggest surviving blob wins.
  * sigmaconnect: the three per-space blobs are combined by pixel vote
                  (union by default) and the largest combined blob is
                  the result.

Ties between spaces always break in index order RGB < HSV < YCbCr.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blobs import denoise, largest_component
from .colorspace import feature_vector
from .imaging import BinaryMask, ImageBuffer, overlay
from .mlp import MlpModel, Normalization, predict_space
from .skinfilter import ColorSpaceId, SkinRangeFilter, apply_filter

__all__ = [
    "COMBINED",
    "RoutineOutput",
    "SegmentationResult",
    "bayesian_routine",
    "algorithm1_ann_switch",
    "algorithm2_max_connected",
    "algorithm3_sigma_connect",
]

COMBINED = "Combined"


@dataclass(frozen=True)
class RoutineOutput:
    """Artifacts of one per-space pipeline run."""

    raw_mask: BinaryMask  # straight filter output, pre-denoise
    mask: BinaryMask  # post-denoise, largest blob only
    blob_size: int
    overlay: ImageBuffer


@dataclass(frozen=True)
class SegmentationResult:
    strategy: str  # "ann" | "maxconnected" | "sigmaconnect"
    chosen: str  # "RGB" | "HSV" | "YCbCr" | "Combined"
    mask: BinaryMask
    blob_size: int
    overlay: ImageBuffer
    per_space_sizes: dict[str, int]
    raw_mask: BinaryMask  # pre-denoise mask of the chosen (or first) space


def bayesian_routine(
    image: ImageBuffer, space: ColorSpaceId, filt: SkinRangeFilter
) -> RoutineOutput:
    """Run the full per-space pipeline; an empty blob is a valid result."""
    raw = apply_filter(image, space, filt)
    cleaned = denoise(raw)
    blob, size = largest_component(cleaned)
    return RoutineOutput(
        raw_mask=raw, mask=blob, blob_size=size, overlay=overlay(image, blob)
    )


def algorithm1_ann_switch(
    image: ImageBuffer,
    model: MlpModel,
    normalization: Normalization,
    filt: SkinRangeFilter,
) -> SegmentationResult:
    """Network-selected color space, then the pipeline in that space."""
    features = feature_vector(image)
    chosen = predict_space(model, features, normalization)
    run = bayesian_routine(image, chosen, filt)
    return SegmentationResult(
        strategy="ann",
        chosen=chosen.label,
        mask=run.mask,
        blob_size=run.blob_size,
        overlay=run.overlay,
        per_space_sizes={chosen.label: run.blob_size},
        raw_mask=run.raw_mask,
    )


def algorithm2_max_connected(
    image: ImageBuffer, filt: SkinRangeFilter
) -> SegmentationResult:
    """All three spaces; the one with the biggest blob wins."""
    runs = {space: bayesian_routine(image, space, filt) for space in ColorSpaceId}
    chosen = max(ColorSpaceId, key=lambda s: (runs[s].blob_size, -int(s)))
    run = runs[chosen]
    return SegmentationResult(
        strategy="maxconnected",
        chosen=chosen.label,
        mask=run.mask,
        blob_size=run.blob_size,
        overlay=run.overlay,
        per_space_sizes={s.label: runs[s].blob_size for s in ColorSpaceId},
        raw_mask=run.raw_mask,
    )


def algorithm3_sigma_connect(
    image: ImageBuffer, filt: SkinRangeFilter, vote_threshold: int = 1
) -> SegmentationResult:
    """Pixel vote across the three per-space blobs, then the largest
    combined component.  vote_threshold 1 is a plain union; 2 or 3 ask
    for agreement between spaces."""
    if vote_threshold not in (1, 2, 3):
        raise ValueError(f"vote_threshold must be 1, 2 or 3, got {vote_threshold}")
    runs = {space: bayesian_routine(image, space, filt) for space in ColorSpaceId}
    votes = sum(runs[s].mask.bits.astype(np.int8) for s in ColorSpaceId)
    combined = BinaryMask(votes >= vote_threshold)
    blob, size = largest_component(combined)
    return SegmentationResult(
        strategy="sigmaconnect",
        chosen=COMBINED,
        mask=blob,
        blob_size=size,
        overlay=overlay(image, blob),
        per_space_sizes={s.label: runs[s].blob_size for s in ColorSpaceId},
        raw_mask=runs[ColorSpaceId.RGB].raw_mask,
    )
