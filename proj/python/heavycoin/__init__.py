"""Most-biased-coin search: strategies, divergences, bounds and simulation."""

from ._core import (
    ArmFamily,
    BoundReport,
    Decision,
    FixedSampleConfig,
    GaussianTestPlan,
    MixtureSpec,
    PreconditionError,
    SprtConfig,
    chi2,
    chi2_mixture_vs_single,
    chi2_product,
    gaussian_tail_q,
    geometric_mixture_point,
    kl,
    landmarks,
    lb_adaptive_known,
    lb_fixed_known,
    lb_fixed_unknown,
    plan_gaussian_test,
    probe_lemma1,
    run_gaussian_test,
    simulate,
    theorem3_constants,
    ub_table1,
)

__all__ = [
    "ArmFamily",
    "BoundReport",
    "Decision",
    "FixedSampleConfig",
    "GaussianTestPlan",
    "MixtureSpec",
    "PreconditionError",
    "SprtConfig",
    "chi2",
    "chi2_mixture_vs_single",
    "chi2_product",
    "gaussian_tail_q",
    "geometric_mixture_point",
    "kl",
    "landmarks",
    "lb_adaptive_known",
    "lb_fixed_known",
    "lb_fixed_unknown",
    "plan_gaussian_test",
    "probe_lemma1",
    "run_gaussian_test",
    "simulate",
    "theorem3_constants",
    "ub_table1",
]
