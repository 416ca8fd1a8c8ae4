//! Special functions: gamma and the Mittag-Leffler family.

mod gamma;
mod mittag_leffler;

pub use gamma::{
    gamma, gamma_complex, gamma_fn, ln_gamma, ln_gamma_signed, rgamma, sin_pi, GammaArg,
    GAMMA_MAX_ARG,
};
pub use mittag_leffler::{
    contour as mittag_leffler_contour, mittag_leffler, mittag_leffler_real,
    mittag_leffler_with_regime, series as mittag_leffler_series, MlParams, Regime, SeriesSum,
    MAX_SERIES_TERMS,
};
