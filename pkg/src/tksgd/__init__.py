"""Online nonparametric regression on spheres via truncated-kernel SGD."""

from .combinatorics import (
    MonomialBasis,
    MultiIndex,
    dim_H,
    dim_P,
    dim_P_safe,
    dim_Pi_ambient,
    dim_Pi_sphere,
    enumerate_basis,
)
from .kernels import (
    KernelFamily,
    Variant,
    eval_circle_closed_form,
    eval_circle_full_kernel,
    eval_Kk,
    eval_truncated_kernel,
    Kk_gegenbauer_coeffs,
)
from .poly import (
    KernelCoeffTable,
    PolyCoeffs,
    axpy,
    build_kernel_table,
    eval_poly,
    inner_power_expansion,
    kernel_slice_at,
    kernel_table_increment,
)
from .tsgd import (
    StepSchedule,
    TKernelSGD,
    TKernelSGDDual,
    TruncationSchedule,
    default_theta,
    step_size,
    truncation_level,
)
from .baseline import KernelSGD, ksgd_step_exponent
from .data import NoiseModel, RngSpec, Sample, make_target, stream_samples
from .risk import (
    RiskCurve,
    SlopeFit,
    checkpoint_grid,
    excess_risk_exact_circle,
    excess_risk_mc,
    fit_slope,
    sphere_monomial_moment,
)
from .experiment import ExperimentConfig, PRESETS, RunRecord, preset_config, run_experiment

__version__ = "0.1.0"
