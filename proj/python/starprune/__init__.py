"""Coarse-to-fine video-feature generation with similarity-based token
pruning and partial updates.

Thin numpy-facing wrapper over the C++ core. All feature maps are
``(rows, cols, channels)`` float32 arrays; similarity and score maps are
``(rows, cols)``; keep-masks are ``(rows, cols)`` uint8.
"""

try:  # wheel layout: the compiled module sits inside the package
    from ._starprune import (
        build_codebook,
        build_mask,
        default_config,
        fuse_scores,
        generate,
        interpolate,
        mse,
        psnr,
        quantize,
        spatial_similarity,
        ssim,
        temporal_similarity,
    )
except ImportError:  # build-tree layout: module next to the package on PYTHONPATH
    from _starprune import (
        build_codebook,
        build_mask,
        default_config,
        fuse_scores,
        generate,
        interpolate,
        mse,
        psnr,
        quantize,
        spatial_similarity,
        ssim,
        temporal_similarity,
    )

__all__ = [
    "build_codebook",
    "build_mask",
    "default_config",
    "fuse_scores",
    "generate",
    "interpolate",
    "mse",
    "psnr",
    "quantize",
    "spatial_similarity",
    "ssim",
    "temporal_similarity",
]
