//! The L-function side at desk scale: Bessel J, the Delta_q(m,n) symbol
//! with a certified truncation, Petersson trace-formula validation
//! against the Ramanujan tau oracle, the prime sums P1/P2, the large
//! sieve bilinear form as a monitor, and the appendix toolbox (smooth
//! dyadic partitions, dyadic sums, the Picard-style Bessel sum).

pub mod appendix;
pub mod bessel;
pub mod delta;
pub mod sums;
pub mod tau;

pub use appendix::{dyadic_sum, partition_check, picard_monitor, smooth_partition, DyadicDirection};
pub use bessel::bessel_j;
pub use delta::{c_max, delta_symbol, petersson_ratio_suite, DeltaParams, PeterssonReport};
pub use sums::{
    prime_sum_first, prime_sum_second, sieve_form_monitor, EigenSource, PrimeSumMode, SieveRecord,
};
pub use tau::TauTable;
