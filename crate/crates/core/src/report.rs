use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How a law was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawStatus {
    /// Holds by an analytic argument covering all inputs of the family.
    Proven,
    /// Held on every drawn sample; not a proof.
    Sampled,
    /// A witness violates it.
    Failed,
    /// Informational entry (e.g. a falsifier that found its counterexample).
    Info,
}

/// One line of a law report: which law, how it was checked, on how many
/// samples, the worst signed margin seen (negative = violation), and a
/// witness rendering when it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub status: LawStatus,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl LawCheck {
    pub fn proven(law: &str) -> Self {
        LawCheck { law: law.into(), status: LawStatus::Proven, samples: 0, worst_margin: None, witness: None }
    }

    pub fn sampled(law: &str, samples: usize, worst_margin: f64) -> Self {
        LawCheck {
            law: law.into(),
            status: LawStatus::Sampled,
            samples,
            worst_margin: Some(worst_margin),
            witness: None,
        }
    }

    pub fn failed(law: &str, samples: usize, margin: f64, witness: String) -> Self {
        LawCheck {
            law: law.into(),
            status: LawStatus::Failed,
            samples,
            worst_margin: Some(margin),
            witness: Some(witness),
        }
    }

    pub fn info(law: &str, witness: String) -> Self {
        LawCheck { law: law.into(), status: LawStatus::Info, samples: 0, worst_margin: None, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.status != LawStatus::Failed
    }
}

/// A bundle of law checks with its sampling provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub seed: u64,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Deterministic sampling policy shared by all law validators: a geometric
/// grid 2^lo .. 2^hi plus seeded uniform draws, with a comparison slack for
/// float evaluation noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub seed: u64,
    pub draws: usize,
    pub grid_lo: i32,
    pub grid_hi: i32,
    pub slack: f64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy { seed: 0, draws: 100, grid_lo: -20, grid_hi: 20, slack: 1e-9 }
    }
}

impl SamplingPolicy {
    pub fn with_seed(seed: u64) -> Self {
        SamplingPolicy { seed, ..Default::default() }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Grid points 2^lo .. 2^hi followed by `draws` uniform samples of
    /// [0, 2^hi), always including 0.
    pub fn scalar_samples(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for j in self.grid_lo..=self.grid_hi {
            out.push(2f64.powi(j));
        }
        let mut rng = self.rng();
        let top = 2f64.powi(self.grid_hi);
        for _ in 0..self.draws {
            out.push(rng.gen_range(0.0..top));
        }
        out
    }
}
