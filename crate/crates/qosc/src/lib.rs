//! Verification driver for q-oscillator representations: scalar expressions,
//! JSON reports, check batteries and the acceptance suite.

pub mod checks;
pub mod expr;
pub mod report;
pub mod suite;
