use std::fmt;

pub const OK: u8 = 0;
pub const OTHER: u8 = 1;
pub const USAGE: u8 = 2;
pub const DATA: u8 = 3;
pub const INFEASIBLE: u8 = 4;
pub const BOUND_VIOLATION: u8 = 5;

/// Failures the CLI itself raises, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Infeasible(String),
    BoundViolation(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::BoundViolation(m) => {
                f.write_str(m)
            }
        }
    }
}

impl std::error::Error for Failure {}

pub fn code(err: &anyhow::Error) -> u8 {
    use budgetrf::Error as E;
    if let Some(f) = err.downcast_ref::<Failure>() {
        return match f {
            Failure::Usage(_) => USAGE,
            Failure::Infeasible(_) => INFEASIBLE,
            Failure::BoundViolation(_) => BOUND_VIOLATION,
        };
    }
    match err.downcast_ref::<E>() {
        Some(E::InvalidConfig(_) | E::InvalidImpuritySpec(_) | E::OracleLimits(_)) => USAGE,
        Some(
            E::InvalidDataset(_)
            | E::InvalidCosts(_)
            | E::Parse { .. }
            | E::Io { .. }
            | E::Schema(_)
            | E::ModelVersion { .. }
            | E::ModelFormat(_)
            | E::EmptyForest
            | E::NotBinary(_),
        ) => DATA,
        Some(E::ImpurityOverflow { .. }) | None => OTHER,
    }
}
