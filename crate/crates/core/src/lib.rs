//! AMD-coded robust secret sharing over trusted-repeater relay networks.
//!
//! **Simulator only.** Arithmetic is variable-time and keys are modelled as
//! ideal uniform values. Do not use this crate to protect real data.

pub mod amd;
pub mod cli;
pub mod games;
pub mod gf;
pub mod relay;
pub mod rng;
pub mod secoqc;
pub mod sss;
