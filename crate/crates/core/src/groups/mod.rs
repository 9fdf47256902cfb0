//! Finite abelian groups, automorphism counts and random-group distributions.

mod abelian;
mod aut;
mod distribution;
mod factor;
mod zeta;

pub use abelian::{from_pgroups, AbelianGroup, PGroup};
pub use aut::{aut_order, aut_order_partition};
pub use distribution::{
    cl_distribution, cl_normalizer, cl_probability, groups_of_order, lambda_k,
    lambda_k_distribution, lambda_k_normalizer, partitions, ratio_table, tv_distance,
    GroupDistribution,
};
pub use factor::{factorize, is_probable_prime};
pub use zeta::{expected_phases, phase_continue_probability, phases_inner_sum, zeta, zeta_inverse_product};
