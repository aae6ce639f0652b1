"""Learned-Fourier-feature value networks: python surface over the C++ core."""

from lffrl._core import (  # noqa: F401
    DiagnosticsReport,
    Env,
    EvalResult,
    FourierSpec,
    Grid,
    Mlp,
    Rng,
    SacAgent,
    SacConfig,
    Variant,
    __version__,
    build_critic,
    compute_diagnostics,
    effective_rank,
    estimate_beta,
    evaluate,
    li_sigma_to_beta,
    load_agent_critic,
    make_env,
    representation_frequency,
    save_agent,
    singular_values,
    train_sac,
    value_iteration,
)
