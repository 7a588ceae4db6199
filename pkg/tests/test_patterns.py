import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foliascan.errors import InsufficientBits
from foliascan.structlight import (
    binarize_stack, generate_gray_patterns, gray_decode, gray_encode,
    perturb_images,
)


def test_gray_known_value():
    # bitwise oracle g = b xor (b >> 1)
    assert int(gray_encode(np.int64(5))) == 5 ^ 2 == 7
    assert int(gray_decode(np.int64(7))) == 5


@pytest.mark.parametrize("n_bits", [1, 4, 8, 12])
def test_gray_bijection_exhaustive(n_bits):
    values = np.arange(2**n_bits, dtype=np.int64)
    codes = gray_encode(values)
    assert len(np.unique(codes)) == len(values)
    assert np.array_equal(gray_decode(codes), values)


@pytest.mark.parametrize("n_bits", [1, 4, 8, 12])
def test_gray_adjacent_single_bit(n_bits):
    codes = gray_encode(np.arange(2**n_bits, dtype=np.int64))
    diff = codes[:-1] ^ codes[1:]
    popcount = np.array([bin(int(x)).count("1") for x in diff])
    assert np.all(popcount == 1)


def test_one_bit_pattern():
    stack = generate_gray_patterns(2, 1)
    assert np.array_equal(stack.bit_planes[0, 0], [0, 1])


def test_width8_column5():
    stack = generate_gray_patterns(8, 3)
    assert np.array_equal(stack.bit_planes[:, 0, 5], [1, 1, 1])  # gray(5) = 7


def test_columns_constant():
    stack = generate_gray_patterns(16, 4, height=6)
    assert np.all(stack.bit_planes == stack.bit_planes[:, :1, :])
    assert np.all(stack.white_ref == 1.0)
    assert np.all(stack.black_ref == 0.0)


def test_insufficient_bits():
    with pytest.raises(InsufficientBits):
        generate_gray_patterns(16, 3)


def test_perturb_identity():
    stack = generate_gray_patterns(8, 3)
    out = perturb_images(stack, 1.0, 0.0)
    assert np.array_equal(out.bit_planes, stack.bit_planes)


def test_perturb_affine_value():
    stack = generate_gray_patterns(8, 3)
    half = perturb_images(
        stack.__class__(bit_planes=np.full((1, 1, 8), 0.5),
                        white_ref=np.ones((1, 8)), black_ref=np.zeros((1, 8)),
                        valid=np.ones((1, 8), dtype=bool)),
        0.8, 0.05)
    assert np.allclose(half.bit_planes, 0.45)


def test_perturb_rejects_nonpositive_gain():
    stack = generate_gray_patterns(8, 3)
    with pytest.raises(ValueError):
        perturb_images(stack, 0.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(0.5, 1.5), beta=st.floats(-0.2, 0.2))
def test_binarization_invariant_under_perturbation(alpha, beta):
    # monotone affine maps preserve the midpoint order relation as long as
    # a pixel and its references are not jointly clamped together
    stack = generate_gray_patterns(32, 5, height=4)
    bits0, valid0 = binarize_stack(stack)
    bits1, valid1 = binarize_stack(perturb_images(stack, alpha, beta))
    both = valid0 & valid1
    assert np.any(both)
    assert np.array_equal(bits0[:, both], bits1[:, both])


def test_binarize_midpoint_cases():
    from foliascan.structlight import ImageStack
    planes = np.array([[[1.0, 0.49, 0.3]]])
    stack = ImageStack(bit_planes=planes,
                       white_ref=np.array([[1.0, 1.0, 0.3]]),
                       black_ref=np.array([[0.0, 0.0, 0.3]]),
                       valid=np.ones((1, 3), dtype=bool))
    bits, valid = binarize_stack(stack)
    assert bits[0, 0, 0] == 1     # at white
    assert bits[0, 0, 1] == 0     # below midpoint
    assert not valid[0, 2]        # zero contrast
    assert valid[0, 0] and valid[0, 1]
