//! Takagi-Sugeno inference with scalar rule consequents.
//!
//! Every input is covered by a partition of triangular membership functions.
//! The rule base is the full grid over those partitions; rule `l` picks one
//! membership function per input, with the first input varying slowest.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("expected {expected} inputs, got {got}")]
    InputArity { expected: usize, got: usize },
    #[error("firing vector has {phi} entries but {params} parameters were given")]
    LengthMismatch { phi: usize, params: usize },
    #[error("rule activations sum to {0}, too small to normalize")]
    DegenerateNormalizer(f64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// Triangle rising from `left` to 1 at `peak` and back to 0 at `right`.
/// A shouldered side holds membership 1 beyond the peak instead of falling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularMf {
    pub left: f64,
    pub peak: f64,
    pub right: f64,
    pub left_shoulder: bool,
    pub right_shoulder: bool,
}

impl TriangularMf {
    pub fn new(left: f64, peak: f64, right: f64) -> Self {
        TriangularMf {
            left,
            peak,
            right,
            left_shoulder: false,
            right_shoulder: false,
        }
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x == self.peak {
            1.0
        } else if x < self.peak {
            if self.left_shoulder {
                1.0
            } else if x <= self.left {
                0.0
            } else {
                (x - self.left) / (self.peak - self.left)
            }
        } else if self.right_shoulder {
            1.0
        } else if x >= self.right {
            0.0
        } else {
            (self.right - x) / (self.right - self.peak)
        }
    }
}

/// Membership functions covering one input domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputPartition {
    pub lo: f64,
    pub hi: f64,
    pub mfs: Vec<TriangularMf>,
}

impl InputPartition {
    /// `count` evenly spaced triangles with feet on the neighbouring peaks;
    /// the two outer ones are shouldered.
    pub fn evenly_spaced(lo: f64, hi: f64, count: usize) -> Result<Self, FuzzyError> {
        if count < 2 {
            return Err(FuzzyError::InvalidPartition(format!(
                "need at least 2 membership functions, got {count}"
            )));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(FuzzyError::InvalidPartition(format!("bad domain [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let peak = |k: usize| if k == count - 1 { hi } else { lo + step * k as f64 };
        let mfs = (0..count)
            .map(|k| {
                let p = peak(k);
                TriangularMf {
                    left: if k == 0 { p } else { peak(k - 1) },
                    peak: p,
                    right: if k == count - 1 { p } else { peak(k + 1) },
                    left_shoulder: k == 0,
                    right_shoulder: k == count - 1,
                }
            })
            .collect();
        Ok(InputPartition { lo, hi, mfs })
    }

    pub fn len(&self) -> usize {
        self.mfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mfs.is_empty()
    }

    pub fn peaks(&self) -> Vec<f64> {
        self.mfs.iter().map(|m| m.peak).collect()
    }

    /// Membership degrees of `x` after clamping it into the domain.
    pub fn memberships(&self, x: f64) -> Vec<f64> {
        let x = x.clamp(self.lo, self.hi);
        self.mfs.iter().map(|m| m.membership(x)).collect()
    }
}

/// Normalized rule firing strengths; entries lie in `[0, 1]` and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiringVector(Vec<f64>);

impl FiringVector {
    /// Normalizes raw non-negative activations.
    pub fn from_activations(raw: Vec<f64>) -> Result<Self, FuzzyError> {
        let total: f64 = raw.iter().sum();
        if !(total >= 1e-300) {
            return Err(FuzzyError::DegenerateNormalizer(total));
        }
        Ok(FiringVector(raw.into_iter().map(|v| v / total).collect()))
    }

    pub fn one_hot(len: usize, k: usize) -> Self {
        let mut v = vec![0.0; len];
        v[k] = 1.0;
        FiringVector(v)
    }

    pub fn uniform(len: usize) -> Self {
        FiringVector(vec![1.0 / len as f64; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shannon entropy in nats; zero when a single rule fires.
    pub fn entropy(&self) -> f64 {
        -self.0.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
    }
}

/// Weighted sum `sum_l phi_l * params_l`.
pub fn infer(phi: &FiringVector, params: &[f64]) -> Result<f64, FuzzyError> {
    if phi.len() != params.len() {
        return Err(FuzzyError::LengthMismatch {
            phi: phi.len(),
            params: params.len(),
        });
    }
    Ok(phi.0.iter().zip(params).map(|(p, w)| p * w).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBase {
    pub partitions: Vec<InputPartition>,
}

impl RuleBase {
    pub fn new(partitions: Vec<InputPartition>) -> Result<Self, FuzzyError> {
        if partitions.is_empty() {
            return Err(FuzzyError::InvalidPartition("rule base needs at least one input".into()));
        }
        if let Some(p) = partitions.iter().find(|p| p.is_empty()) {
            return Err(FuzzyError::InvalidPartition(format!(
                "input over [{}, {}] has no membership functions",
                p.lo, p.hi
            )));
        }
        Ok(RuleBase { partitions })
    }

    /// Four inputs `[distance, angle, distance, angle]` with five triangles
    /// each: distances over `[0, max_distance]`, angles over `[-pi, pi]`.
    pub fn pursuit_default(max_distance: f64) -> Self {
        let dist = InputPartition::evenly_spaced(0.0, max_distance, 5).expect("valid distance domain");
        let angle = InputPartition::evenly_spaced(-PI, PI, 5).expect("valid angle domain");
        RuleBase {
            partitions: vec![dist.clone(), angle.clone(), dist, angle],
        }
    }

    pub fn input_count(&self) -> usize {
        self.partitions.len()
    }

    pub fn rule_count(&self) -> usize {
        self.partitions.iter().map(InputPartition::len).product()
    }

    /// Membership-function index per input for rule `l`.
    pub fn rule_antecedents(&self, mut l: usize) -> Vec<usize> {
        let mut idx = vec![0; self.partitions.len()];
        for (slot, p) in idx.iter_mut().zip(&self.partitions).rev() {
            *slot = l % p.len();
            l /= p.len();
        }
        idx
    }

    /// Normalized firing strengths for input `x`. Memberships are evaluated
    /// once per input and expanded into the rule grid by outer products.
    pub fn fire(&self, x: &[f64]) -> Result<FiringVector, FuzzyError> {
        if x.len() != self.partitions.len() {
            return Err(FuzzyError::InputArity {
                expected: self.partitions.len(),
                got: x.len(),
            });
        }
        let mut grid = Vec::with_capacity(self.rule_count());
        grid.push(1.0);
        for (p, &xi) in self.partitions.iter().zip(x) {
            let mu = p.memberships(xi);
            grid = grid
                .iter()
                .flat_map(|&prefix| mu.iter().map(move |&m| prefix * m))
                .collect();
        }
        FiringVector::from_activations(grid)
    }
}
