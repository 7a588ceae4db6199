"""Binarization of captured stacks and codeword decoding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import ImageStack, gray_decode

DEFAULT_CONTRAST_FLOOR = 0.05


@dataclass(frozen=True)
class CodeImage:
    """Per-pixel decoded projector-column codewords.

    Invalid pixels carry code 0 and valid=False.
    """

    codes: np.ndarray   # (h, w) int64
    valid: np.ndarray   # (h, w) bool
    n_bits: int


def binarize_stack(stack: ImageStack, contrast_floor: float = DEFAULT_CONTRAST_FLOOR):
    """Threshold each plane at the white/black reference midpoint.

    A pixel is valid only if its reference contrast exceeds the floor (and
    it was valid in the capture).  Returns (binary planes (n,h,w) uint8,
    valid mask).
    """
    mid = 0.5 * (stack.white_ref + stack.black_ref)
    bits = (stack.bit_planes > mid[None]).astype(np.uint8)
    valid = stack.valid & (stack.white_ref - stack.black_ref >= contrast_floor)
    return bits, valid


def decode_codewords(bits: np.ndarray, valid: np.ndarray) -> CodeImage:
    """Inverse-Gray decode MSB-first bit planes into integer codewords."""
    n_bits = bits.shape[0]
    gray = np.zeros(bits.shape[1:], dtype=np.int64)
    for k in range(n_bits):
        gray = (gray << 1) | bits[k].astype(np.int64)
    codes = gray_decode(gray)
    codes[~valid] = 0
    return CodeImage(codes=codes, valid=valid.copy(), n_bits=n_bits)
