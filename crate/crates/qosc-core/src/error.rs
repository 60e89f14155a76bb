use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("pole at z = {point}: denominator factor {factor}")]
    Pole { point: String, factor: String },
    #[error("symbolic parameter {0} is not supported by this coefficient type")]
    Symbolic(usize),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined ({0} free parameters)")]
    Underdetermined(usize),
    #[error("window too small: {0}")]
    Window(String),
    #[error("parameters not admissible: c{i}/c{j} = q^{exponent} is a pole")]
    NotAdmissible { i: usize, j: usize, exponent: i32 },
}
