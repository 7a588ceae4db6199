import numpy as np
import pytest

from foliascan.errors import InvalidScene
from foliascan.structlight import (
    DepthScene, binarize_stack, decode_codewords, generate_gray_patterns,
    simulate_capture,
)


def _decode(stack):
    bits, valid = binarize_stack(stack)
    return decode_codewords(bits, valid)


def test_plane_integer_shift(small_rig):
    # choose Z so f*B/Z = 4 exactly
    z = small_rig.f * small_rig.baseline / 4.0
    scene = DepthScene(kind="plane", plane_z=z)
    patterns = generate_gray_patterns(small_rig.width, 6)
    left, right, disp_gt = simulate_capture(scene, small_rig, patterns)
    assert np.allclose(disp_gt, 4.0)
    lc, rc = _decode(left), _decode(right)
    # right stack equals left stack shifted 4 columns
    assert np.array_equal(rc.codes[:, :-4], lc.codes[:, 4:])
    assert np.all(rc.valid[:, :-4])
    assert not np.any(rc.valid[:, -4:])  # nothing projects past the edge


def test_far_plane_zero_disparity(small_rig):
    # very distant plane: disparity rounds to zero columns of shift
    scene = DepthScene(kind="plane", plane_z=1e6)
    patterns = generate_gray_patterns(small_rig.width, 6)
    left, right, _ = simulate_capture(scene, small_rig, patterns)
    lc, rc = _decode(left), _decode(right)
    assert np.array_equal(lc.codes, rc.codes)
    assert np.all(rc.valid)


def test_occlusion_marked_invalid(small_rig):
    scene = DepthScene(kind="sphere", plane_z=1.0,
                       centers=((0.0, 0.0, 0.6),), radii=(0.12,))
    patterns = generate_gray_patterns(small_rig.width, 6)
    left, right, disp_gt = simulate_capture(scene, small_rig, patterns)

    # independent per-pixel occlusion oracle: forward-warp depths and mark
    # right pixels that received no projection
    h, w = disp_gt.shape
    depth = small_rig.f * small_rig.baseline / disp_gt
    received = np.zeros((h, w), dtype=bool)
    for y in range(h):
        zb = {}
        for x in range(w):
            xr = int(round(x - disp_gt[y, x]))
            if 0 <= xr < w:
                if xr not in zb or depth[y, x] < zb[xr]:
                    zb[xr] = depth[y, x]
        for xr in zb:
            received[y, xr] = True
    assert np.array_equal(right.valid, received)
    assert not np.all(received)  # the sphere does occlude something


def test_decode_round_trip_exhaustive():
    n_bits = 6
    patterns = generate_gray_patterns(2**n_bits, n_bits)
    code = _decode(patterns)
    assert np.array_equal(code.codes[0], np.arange(2**n_bits))
    assert np.all(code.valid)


def test_decode_all_zero_bits():
    bits = np.zeros((3, 2, 2), dtype=np.uint8)
    valid = np.ones((2, 2), dtype=bool)
    assert np.all(decode_codewords(bits, valid).codes == 0)


def test_invalid_pixels_code_zero():
    bits = np.ones((3, 2, 2), dtype=np.uint8)
    valid = np.zeros((2, 2), dtype=bool)
    code = decode_codewords(bits, valid)
    assert np.all(code.codes == 0)
    assert not np.any(code.valid)


def test_scene_validation():
    with pytest.raises(InvalidScene):
        DepthScene(kind="plane", plane_z=-1.0)
    with pytest.raises(InvalidScene):
        DepthScene(kind="sphere", plane_z=1.0)  # missing sphere
    with pytest.raises(InvalidScene):
        DepthScene(kind="waffle", plane_z=1.0)
