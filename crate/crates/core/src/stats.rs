//! Small Monte Carlo summaries used by the verifiers.

/// Sample mean, unbiased variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary { n, mean: f64::NAN, variance: f64::NAN, std_error: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Summary { n, mean, variance, std_error: (variance / n as f64).sqrt() }
    }

    /// Plug-in standard error of the sample variance, from the fourth central moment.
    pub fn variance_std_error(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
        ((m4 - m2 * m2).max(0.0) / n).sqrt()
    }
}

/// Standard error of a proportion `p` estimated from `n` Bernoulli trials.
pub fn proportion_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Proportion estimate checked against `expected` with the standard error of
/// `expected` and a continuity correction of `1/(2n)`, so that rare events
/// observed a handful of times are not judged by a normal approximation that
/// cannot hold for them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionCheck {
    pub hits: usize,
    pub trials: usize,
    pub estimate: f64,
    pub expected: f64,
    pub std_error: f64,
}

impl ProportionCheck {
    pub fn new(hits: usize, trials: usize, expected: f64) -> Self {
        let estimate = hits as f64 / trials as f64;
        ProportionCheck { hits, trials, estimate, expected, std_error: proportion_se(expected, trials) }
    }

    pub fn correction(&self) -> f64 {
        0.5 / self.trials as f64
    }

    pub fn within(&self, k_se: f64) -> bool {
        (self.estimate - self.expected).abs() <= k_se * self.std_error + self.correction()
    }

    /// Two independent estimates of the same `expected` proportion agree.
    pub fn agrees_with(&self, other: &ProportionCheck, k_se: f64) -> bool {
        let se = (self.std_error.powi(2) + other.std_error.powi(2)).sqrt();
        (self.estimate - other.estimate).abs() <= k_se * se + self.correction() + other.correction()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_constant() {
        let s = Summary::of(&[2.0, 2.0, 2.0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 0.0);
        assert_eq!(Summary::variance_std_error(&[2.0, 2.0]), 0.0);
    }

    #[test]
    fn proportion_check() {
        let c = ProportionCheck::new(50, 100, 0.5);
        assert_eq!(c.estimate, 0.5);
        assert!(c.within(3.0));
        assert!(!ProportionCheck::new(90, 100, 0.5).within(3.0));
        // one hit where 0.32 are expected is not evidence against the rate
        assert!(ProportionCheck::new(1, 100_000, 3.2e-6).within(3.0));
        assert!(ProportionCheck::new(50, 100, 0.5).agrees_with(&ProportionCheck::new(60, 100, 0.5), 3.0));
    }
}
