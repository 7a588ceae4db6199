from .patterns import (
    ImageStack, PatternStack, generate_gray_patterns, gray_decode, gray_encode,
    perturb_images,
)
from .scenes import DepthScene, StereoRig
from .capture import simulate_capture
from .decode import CodeImage, binarize_stack, decode_codewords
from .matching import DisparityMap, disparity_mae, disparity_to_depth, match_disparity
from .reconstruct import depth_to_mesh

__all__ = [
    "ImageStack", "PatternStack", "generate_gray_patterns",
    "gray_encode", "gray_decode", "perturb_images",
    "DepthScene", "StereoRig", "simulate_capture",
    "CodeImage", "binarize_stack", "decode_codewords",
    "DisparityMap", "match_disparity", "disparity_to_depth", "disparity_mae",
    "depth_to_mesh",
]
