//! Barnes multiple gamma functions, Barnes beta distributions and the
//! probabilistic decomposition of the Selberg integral.

pub mod beta;
pub mod error;
pub mod euler;
pub mod format;
pub mod multigamma;
pub mod quadrature;
pub mod sampling;
pub mod selberg;
pub mod zeta;

pub use beta::{
    reduction_factors, s_bernoulli, s_log_gamma, s_operator, subset_shifts, AsymptoticProfile, BarnesBeta, BetaParams,
    EtaMethod, EtaValue, LevySpec, Mode, MomentSign, RamanujanCheck, ShintaniVariant,
};
pub use error::{Error, PoleReport, Result};
pub use multigamma::{
    bernoulli_poly, f_eval, gamma_m, log_gamma_asymptotic, log_gamma_m, log_gamma_m_eval, pole_query,
    taylor_coeffs_f, ComplexArg, GammaParams, QuadratureSpec, Valued,
};
pub use zeta::zeta_barnes;
pub use sampling::{empirical_mellin, sample, truncation_error_report, JumpTable, SampleBatch, SampleMeta, SampleMethod, Sampler, SamplerConfig};
pub use selberg::{
    factor_mellin_product, interpret_chain_report, mellin_m, selberg_average_mc, selberg_product, selberg_report, ChainReport,
    MFactorSet, McEstimate, MellinCheck, SelbergParams, SelbergReport,
};
