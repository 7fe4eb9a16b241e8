//! Local divisor densities, local factors `β_p` and singular products.

mod alpha;
mod beta;
mod rational;

pub use alpha::{
    alpha, alpha_direct, alpha_prime_power, alpha_prime_power_brute, alpha_prime_power_fast,
    single_form_density_exponent, MinorProfile, PrimeProfile, DEFAULT_WORK_CAP,
};
pub use beta::{
    beta_p, beta_p_with_profile, singular_product, BetaCache, BetaP, DecayFit, SingularProduct,
    Truncation,
};
pub use rational::ExactRational;
