"""Adaptive importance learning for lightweight super-resolution networks.

Thin Python surface over the C++ core: network construction and inference,
the closed-form importance update, teacher-based importance initialization,
bicubic degradation and the PSNR/SSIM metrics.
"""

from ._core import (
    AilsrError,
    ModelSpec,
    Network,
    __version__,
    bicubic_resize,
    build_network,
    count_flops,
    count_params,
    degrade,
    importance_update,
    load_checkpoint,
    penalty_h,
    psnr,
    ssim,
    teacher_importance,
    update_importance_map,
)

__all__ = [
    "AilsrError",
    "ModelSpec",
    "Network",
    "__version__",
    "bicubic_resize",
    "build_network",
    "count_flops",
    "count_params",
    "degrade",
    "importance_update",
    "load_checkpoint",
    "penalty_h",
    "psnr",
    "ssim",
    "teacher_importance",
    "update_importance_map",
]
