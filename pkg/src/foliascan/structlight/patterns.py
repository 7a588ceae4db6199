"""Gray-code stripe patterns and photometric perturbation.

Projector columns are labelled with reflected binary (Gray) codes so that
adjacent columns differ in exactly one bit; each bit becomes one projected
plane of vertical black/white stripes, bracketed by all-white and all-black
reference frames.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientBits


def gray_encode(value):
    """Reflected binary code of an integer (array-safe)."""
    value = np.asarray(value)
    return value ^ (value >> 1)


def gray_decode(code):
    """Inverse of gray_encode (array-safe, codes below 2**63)."""
    code = np.asarray(code).copy()
    shift = 1
    while True:
        shifted = code >> shift
        if not np.any(shifted):
            break
        code ^= shifted
        shift <<= 1
    return code


@dataclass(frozen=True)
class ImageStack:
    """A stack of intensity images: one per code bit plus reference frames.

    Attributes:
        bit_planes: (n_bits, h, w) intensities in [0, 1], MSB first.
        white_ref / black_ref: (h, w) reference frames.
        valid: (h, w) boolean mask of pixels carrying a meaningful signal.
    """

    bit_planes: np.ndarray
    white_ref: np.ndarray
    black_ref: np.ndarray
    valid: np.ndarray

    @property
    def n_bits(self) -> int:
        return self.bit_planes.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bit_planes.shape[1:]


PatternStack = ImageStack  # emitted patterns are a fully-valid stack


def generate_gray_patterns(width: int, n_bits: int, height: int = 1) -> PatternStack:
    """Vertical-stripe Gray-code planes for ``width`` projector columns.

    Column c of plane k holds bit k (MSB first) of gray_encode(c).

    Raises:
        InsufficientBits: 2**n_bits < width.
    """
    if 2**n_bits < width:
        raise InsufficientBits(f"{n_bits} bits cannot encode {width} columns")
    codes = gray_encode(np.arange(width, dtype=np.int64))
    planes = np.empty((n_bits, height, width))
    for k in range(n_bits):
        bit = (codes >> (n_bits - 1 - k)) & 1
        planes[k] = np.broadcast_to(bit.astype(np.float64), (height, width))
    return ImageStack(
        bit_planes=planes,
        white_ref=np.ones((height, width)),
        black_ref=np.zeros((height, width)),
        valid=np.ones((height, width), dtype=bool),
    )


def perturb_images(stack: ImageStack, alpha: float, beta: float) -> ImageStack:
    """Affine brightness/contrast perturbation I -> clamp(alpha*I + beta).

    Applied identically to bit planes and reference frames, so binarization
    against the perturbed references is unchanged wherever clamping does not
    collapse a pixel onto its references.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")

    def f(img):
        return np.clip(alpha * img + beta, 0.0, 1.0)

    return ImageStack(
        bit_planes=f(stack.bit_planes),
        white_ref=f(stack.white_ref),
        black_ref=f(stack.black_ref),
        valid=stack.valid,
    )
