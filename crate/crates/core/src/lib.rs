//! Exact log canonical thresholds of fibres, discriminant divisors and
//! moduli-part denominator bounds for lc-trivial fibrations whose general
//! fibre is a rational curve, over a curve base.

pub mod blowup;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod exact;
pub mod fibration;
pub mod poly;
pub mod suite;
