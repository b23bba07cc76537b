"""Connected-component analysis and salt-and-pepper denoising of masks.

Connectivity is 8-way (diagonals included).  Labeling is two-pass with
union-find, never recursive, and labels are renumbered to row-major
first-encounter order so results are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import BinaryMask

__all__ = ["ComponentLabeling", "label_components", "largest_component", "denoise"]


@dataclass(frozen=True)
class ComponentLabeling:
    """labels: (h, w) int array, 0 = background, components numbered from 1
    in row-major first-encounter order; sizes[i] = pixel count of label i+1."""

    labels: np.ndarray
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)


_NEIGHBORS_ABOVE = ((-1, -1), (-1, 0), (-1, 1), (0, -1))


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = [0]

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra > rb:
                ra, rb = rb, ra
            self.parent[rb] = ra


def label_components(mask: BinaryMask) -> ComponentLabeling:
    """8-connected component labeling of a binary mask."""
    bits = mask.bits
    h, w = bits.shape
    provisional = np.zeros((h, w), dtype=np.int32)
    uf = _UnionFind()
    for y in range(h):
        for x in range(w):
            if not bits[y, x]:
                continue
            seen = []
            for dy, dx in _NEIGHBORS_ABOVE:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and bits[ny, nx]:
                    seen.append(provisional[ny, nx])
            if seen:
                provisional[y, x] = min(seen)
                for other in seen:
                    uf.union(provisional[y, x], other)
            else:
                provisional[y, x] = uf.make()

    # resolve equivalences, then renumber by first encounter in scan order
    labels = np.zeros((h, w), dtype=np.int32)
    remap: dict[int, int] = {}
    sizes: list[int] = []
    flat_bits = bits.ravel()
    flat_prov = provisional.ravel()
    flat_out = labels.ravel()
    for idx in np.flatnonzero(flat_bits):
        root = uf.find(int(flat_prov[idx]))
        label = remap.get(root)
        if label is None:
            label = len(sizes) + 1
            remap[root] = label
            sizes.append(0)
        flat_out[idx] = label
        sizes[label - 1] += 1
    return ComponentLabeling(labels=labels, sizes=tuple(sizes))


def largest_component(mask: BinaryMask) -> tuple[BinaryMask, int]:
    """Keep only a maximum-size component (lowest label wins ties)."""
    labeling = label_components(mask)
    if labeling.count == 0:
        return BinaryMask(np.zeros_like(mask.bits)), 0
    sizes = np.array(labeling.sizes)
    winner = int(np.argmax(sizes)) + 1  # argmax returns first maximum
    return BinaryMask(labeling.labels == winner), int(sizes[winner - 1])


def denoise(mask: BinaryMask) -> BinaryMask:
    """3x3 neighborhood-majority filter for salt-and-pepper noise.

    Out-of-image neighbors count as background.  A set pixel survives a
    4-of-9 tie region; a clear pixel needs a strict 5-of-9 majority to
    turn on.  This keeps solid regions (including their corners) intact
    while still deleting isolated specks and filling isolated holes.
    """
    bits = mask.bits
    padded = np.pad(bits.astype(np.int8), 1)
    counts = sum(
        padded[1 + dy : padded.shape[0] - 1 + dy, 1 + dx : padded.shape[1] - 1 + dx]
        for dy in (-1, 0, 1)
        for dx in (-1, 0, 1)
    )
    out = np.where(bits, counts >= 4, counts >= 5)
    return BinaryMask(out)
