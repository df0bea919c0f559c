"""Low-rank tensor completion via joint-rank weighted log-composite norms.

Dense tensors cross the boundary as Fortran-ordered numpy arrays (the C++
core stores elements first-index-fastest). Observation masks are boolean
arrays of the same shape.
"""

from ._tjlc import (
    CompletionResult,
    MetricReport,
    SolverConfig,
    bcirc,
    complete,
    conj_transpose,
    cubic_real_roots,
    derive_betas,
    dft_mode3,
    ergas,
    fold_mode_n,
    fold_pair,
    frobenius_norm,
    g_cap,
    generate_mask,
    identity_tensor,
    idft_mode3,
    joint_rank,
    missing_rate,
    preset,
    preset_names,
    project,
    psnr,
    read_tns,
    scalar_prox,
    ssim,
    synth_low_tubal,
    t_product,
    t_svd,
    tensor_pqi,
    tensor_prox,
    tubal_rank,
    unfold_mode_n,
    unfold_pair,
    write_tns,
)

__all__ = [
    "CompletionResult",
    "MetricReport",
    "SolverConfig",
    "bcirc",
    "complete",
    "conj_transpose",
    "cubic_real_roots",
    "derive_betas",
    "dft_mode3",
    "ergas",
    "fold_mode_n",
    "fold_pair",
    "frobenius_norm",
    "g_cap",
    "generate_mask",
    "identity_tensor",
    "idft_mode3",
    "joint_rank",
    "missing_rate",
    "preset",
    "preset_names",
    "project",
    "psnr",
    "read_tns",
    "scalar_prox",
    "ssim",
    "synth_low_tubal",
    "t_product",
    "t_svd",
    "tensor_pqi",
    "tensor_prox",
    "tubal_rank",
    "unfold_mode_n",
    "unfold_pair",
    "write_tns",
]
