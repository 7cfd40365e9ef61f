use std::fmt;

/// Outcome of checking one property over a set of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    /// What was checked, e.g. `log_convex` or `schur_concave`.
    pub property: String,
    pub samples: usize,
    pub violations: usize,
    /// Signed minimum slack over all samples; negative means the property's
    /// inequality failed there, before tolerances are applied.
    pub worst_margin: f64,
    /// Input tuple at which `worst_margin` was attained.
    pub worst_location: Vec<f64>,
    pub passed: bool,
    pub seed: Option<u64>,
}

impl PropertyReport {
    pub fn empty(property: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            samples: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_location: Vec::new(),
            passed: true,
            seed: None,
        }
    }

    /// Records one sample. `tolerance ≥ 0` is how far below zero the margin may
    /// fall before the sample counts as a violation.
    pub fn record(&mut self, margin: f64, tolerance: f64, location: &[f64]) {
        self.samples += 1;
        let violated = margin.is_nan() || margin < -tolerance;
        if violated {
            self.violations += 1;
            self.passed = false;
        }
        // a NaN margin is the worst possible and sticks
        let worse = margin.is_nan() || margin < self.worst_margin || self.worst_location.is_empty();
        if worse && !self.worst_margin.is_nan() {
            self.worst_margin = margin;
            self.worst_location = location.to_vec();
        }
    }

    /// Folds another report for the same property into this one.
    pub fn merge(&mut self, other: &PropertyReport) {
        self.samples += other.samples;
        self.violations += other.violations;
        self.passed = self.violations == 0;
        let worse = other.worst_margin.is_nan() || other.worst_margin < self.worst_margin;
        if other.samples > 0 && !self.worst_margin.is_nan() && (worse || self.worst_location.is_empty()) {
            self.worst_margin = other.worst_margin;
            self.worst_location = other.worst_location.clone();
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let location: Vec<String> = self.worst_location.iter().map(|v| format!("{v:e}")).collect();
        write!(
            f,
            "{} {}: samples={} violations={} worst_margin={:e} at=[{}]",
            if self.passed { "PASS" } else { "FAIL" },
            self.property,
            self.samples,
            self.violations,
            self.worst_margin,
            location.join(" ")
        )?;
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        Ok(())
    }
}
