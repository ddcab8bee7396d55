/// Numerical thresholds shared by every check in the crate.
///
/// `nullspace` is relative to the largest singular value; the others are
/// absolute thresholds on max-absolute-entry norms (or on objective values for
/// `optimizer`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub nullspace: f64,
    pub eigencluster: f64,
    pub residual: f64,
    pub optimizer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            nullspace: 1e-8,
            eigencluster: 1e-7,
            residual: 1e-9,
            optimizer: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }

    pub fn with_eigencluster(mut self, eigencluster: f64) -> Self {
        self.eigencluster = eigencluster;
        self
    }

    pub fn is_valid(&self) -> bool {
        [
            self.hermitian,
            self.nullspace,
            self.eigencluster,
            self.residual,
            self.optimizer,
        ]
        .iter()
        .all(|t| t.is_finite() && *t > 0.0)
    }
}
