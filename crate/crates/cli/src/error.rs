use bhf::catalog::{ArcSlideError, CatalogError};
use bhf::dmod::DmodError;
use bhf::f2u::F2UError;
use bhf::json::DocError;
use bhf::knots::KnotError;
use bhf::pairing::PairingError;

/// Exit 1 for bad input, 2 when a `d² = 0` gate trips on computed data.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Gate(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Invalid(_) => 1,
            CliError::Gate(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => f.write_str(m),
            CliError::Gate(m) => write!(f, "internal verification failed: {m}"),
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        match &e {
            // catalog bimodules are built on demand; a failed search is ours
            DocError::Validation(m) if m.starts_with("ConstraintSearchFailed") => CliError::Gate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<DmodError> for CliError {
    fn from(e: DmodError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<F2UError> for CliError {
    fn from(e: F2UError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::NotAComplex(_) => CliError::Gate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Pairing(p) => p.into(),
            CatalogError::ArcSlide(ArcSlideError::ConstraintSearchFailed(_)) => CliError::Gate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<KnotError> for CliError {
    fn from(e: KnotError) -> Self {
        match e {
            KnotError::Pairing(p) => p.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates_exit_with_two() {
        assert_eq!(CliError::from(PairingError::NotAComplex(3)).exit_code(), 2);
        assert_eq!(CliError::from(KnotError::Pairing(PairingError::NotAComplex(1))).exit_code(), 2);
        assert_eq!(CliError::from(CatalogError::ArcSlide(ArcSlideError::ConstraintSearchFailed(4))).exit_code(), 2);
        assert_eq!(CliError::from(PairingError::AlgebraMismatch).exit_code(), 1);
        assert_eq!(CliError::from(KnotError::NoFreeSummand).exit_code(), 1);
    }
}
