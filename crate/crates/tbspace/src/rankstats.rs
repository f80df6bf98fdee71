//! Rank statistics: exact Migler rank counts for random matrices, the
//! xi/rho estimates for admissible-row matrices, Monte Carlo rank
//! histograms and the chi-square comparison behind the distinguisher.

use crate::algebra::{BitMatrix, BitVector};
use crate::embed::EmbeddingParams;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error)]
pub enum RankStatsError {
    #[error("rho(k, j) is only defined for j = k or j = k-1 (got k={k}, j={j})")]
    RhoUndefined { k: usize, j: usize },
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("significance must be in (0, 1), got {0}")]
    BadSignificance(f64),
}

/// Derive a per-trial seed from a master seed; mixing keeps parallel trial
/// streams independent of scheduling.
pub(crate) fn derive_seed(master: u64, trial: u64) -> u64 {
    let mut z = master
        .wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Exact counts for uniform random matrices

/// Gaussian binomial coefficient: the number of k-dimensional subspaces of
/// (F_q)^n.
pub fn q_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n as u32) - q.pow(i as u32);
        den *= q.pow(k as u32) - q.pow(i as u32);
    }
    num / den
}

/// Number of t x n matrices over F_q of rank exactly k.
pub fn migler_count(k: u64, t: u64, n: u64, q: u64) -> BigUint {
    if k > t.min(n) {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut prod = q_binomial(n, k, q);
    for i in 0..k {
        prod *= qb.pow(t as u32) - qb.pow(i as u32);
    }
    prod
}

/// Exact rank distribution of uniform t x n matrices over F_q as
/// probabilities.
pub fn migler_distribution(t: u64, n: u64, q: u64) -> Vec<(usize, BigRational)> {
    let total = BigUint::from(q).pow((t * n) as u32);
    (0..=t.min(n))
        .map(|k| {
            (
                k as usize,
                BigRational::new(migler_count(k, t, n, q).into(), total.clone().into()),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// xi / rho estimates for admissible-row matrices

/// The estimate model for matrices whose rows are admissible vectors of
/// <Im eps>: c = 2^m brick values, b bricks, z = dim <Im eps>.
#[derive(Clone, Debug)]
pub struct AdmissibleRankModel {
    /// total admissible vectors c^b
    cb: BigUint,
    /// 2^z
    z2: BigUint,
}

impl AdmissibleRankModel {
    pub fn new(m: u32, b: u32) -> Self {
        let c = BigUint::from(2u32).pow(m);
        let z = (1u32 << m) * b - (b - 1);
        AdmissibleRankModel {
            cb: c.pow(b),
            z2: BigUint::from(2u32).pow(z),
        }
    }

    pub fn for_params(params: &EmbeddingParams) -> Self {
        Self::new(params.m() as u32, params.b() as u32)
    }

    pub fn admissible_total(&self) -> &BigUint {
        &self.cb
    }

    /// Average number of admissible vectors in the span of h independent
    /// admissible vectors: xi(0..2) = 0, 1, 2 and
    /// xi(h) = h + (2^h - h - 1) c^b / 2^z for h >= 3.
    pub fn xi(&self, h: usize) -> BigRational {
        if h <= 2 {
            return BigRational::from_integer(BigUint::from(h).into());
        }
        let h_big = BigRational::from_integer(BigUint::from(h).into());
        let others = BigRational::from_integer(
            (BigUint::from(2u32).pow(h as u32) - BigUint::from(h) - BigUint::one()).into(),
        );
        let density = BigRational::new(self.cb.clone().into(), self.z2.clone().into());
        h_big + others * density
    }

    /// Estimated number of k x n admissible-row matrices of rank j, defined
    /// for j = k (full rank) and j = k - 1.
    pub fn rho(&self, k: usize, j: usize) -> Result<BigRational, RankStatsError> {
        let cb = BigRational::from_integer(self.cb.clone().into());
        if j == k && k >= 1 {
            let mut prod = BigRational::one();
            for i in 1..=k {
                prod *= cb.clone() - self.xi(i - 1);
            }
            return Ok(prod);
        }
        if j + 1 == k && k >= 2 {
            // rho(2,1) = c^b: the second row must equal the first
            if k == 2 {
                return Ok(cb);
            }
            let full = self.rho(k - 1, k - 1)?;
            let defect = self.rho(k - 1, k - 2)?;
            let indep_choices = if k == 3 {
                cb.clone() - BigRational::one()
            } else if k == 4 {
                cb.clone() - BigRational::from_integer(2.into())
            } else {
                let free = BigRational::from_integer(
                    (self.z2.clone() - BigUint::from(2u32).pow(k as u32 - 2)).into(),
                );
                free * BigRational::new(self.cb.clone().into(), self.z2.clone().into())
            };
            return Ok(full * self.xi(k - 1) + defect * indep_choices);
        }
        Err(RankStatsError::RhoUndefined { k, j })
    }

    /// Model distribution over ranks for k admissible rows: rho(k,k) and
    /// rho(k,k-1) as estimated, with the remaining mass lumped at rank k-2.
    pub fn rho_distribution(&self, k: usize) -> Result<Vec<(usize, BigRational)>, RankStatsError> {
        assert!(k >= 2);
        let total = BigRational::from_integer(self.cb.pow(k as u32).into());
        let full = self.rho(k, k)? / total.clone();
        let minus1 = self.rho(k, k - 1)? / total.clone();
        let rest = BigRational::one() - full.clone() - minus1.clone();
        Ok(vec![(k - 2, rest), (k - 1, minus1), (k, full)])
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Histogram of observed ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankHistogram {
    pub bins: BTreeMap<usize, u64>,
    pub label: String,
}

impl RankHistogram {
    pub fn new(label: &str) -> Self {
        RankHistogram {
            bins: BTreeMap::new(),
            label: label.to_string(),
        }
    }

    pub fn record(&mut self, rank: usize) {
        *self.bins.entry(rank).or_insert(0) += 1;
    }

    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn merge(&mut self, other: &RankHistogram) {
        for (&r, &c) in &other.bins {
            *self.bins.entry(r).or_insert(0) += c;
        }
    }

    pub fn proportions(&self) -> Vec<(usize, f64)> {
        let total = self.total() as f64;
        self.bins
            .iter()
            .map(|(&r, &c)| (r, c as f64 / total))
            .collect()
    }
}

/// Something that produces one random matrix per trial.
pub trait MatrixSampler: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitMatrix;
    fn label(&self) -> String;
}

/// k rows alpha(v) for uniform random states v.
pub struct AdmissibleSampler {
    pub params: EmbeddingParams,
    pub rows: usize,
}

impl MatrixSampler for AdmissibleSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitMatrix {
        let r = self.params.r();
        let rows: Vec<BitVector> = (0..self.rows)
            .map(|_| {
                let v = BitVector::from_fn_bits(r, |_| rng.gen_bool(0.5));
                self.params.alpha(&v)
            })
            .collect();
        BitMatrix::from_rows(&rows)
    }

    fn label(&self) -> String {
        format!("admissible rows={} r={}", self.rows, self.params.r())
    }
}

/// k rows drawn uniformly from a row space given by a basis.
pub struct SubspaceSampler {
    pub basis: BitMatrix,
    pub rows: usize,
}

impl MatrixSampler for SubspaceSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitMatrix {
        let rows: Vec<BitVector> = (0..self.rows)
            .map(|_| {
                let mut acc = BitVector::zero(self.basis.cols());
                for i in 0..self.basis.rows() {
                    if rng.gen_bool(0.5) {
                        acc.xor_assign(&self.basis.row_vec(i));
                    }
                }
                acc
            })
            .collect();
        BitMatrix::from_rows(&rows)
    }

    fn label(&self) -> String {
        format!("subspace dim={} rows={}", self.basis.rows(), self.rows)
    }
}

/// alpha rows of states confined to a low-dimensional coset of V: a
/// deliberately skewed plaintext source.
pub struct LowRankSampler {
    pub params: EmbeddingParams,
    pub rows: usize,
    pub directions: Vec<BitVector>,
    pub base: BitVector,
}

impl LowRankSampler {
    pub fn new(params: EmbeddingParams, rows: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = params.r();
        let directions = (0..dim)
            .map(|_| BitVector::from_fn_bits(r, |_| rng.gen_bool(0.5)))
            .collect();
        let base = BitVector::from_fn_bits(r, |_| rng.gen_bool(0.5));
        LowRankSampler {
            params,
            rows,
            directions,
            base,
        }
    }
}

impl MatrixSampler for LowRankSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitMatrix {
        let rows: Vec<BitVector> = (0..self.rows)
            .map(|_| {
                let mut v = self.base.clone();
                for d in &self.directions {
                    if rng.gen_bool(0.5) {
                        v.xor_assign(d);
                    }
                }
                self.params.alpha(&v)
            })
            .collect();
        BitMatrix::from_rows(&rows)
    }

    fn label(&self) -> String {
        format!("low-rank coset dim={} rows={}", self.directions.len(), self.rows)
    }
}

/// Uniform iid bits, the Migler reference case.
pub struct UniformSampler {
    pub rows: usize,
    pub cols: usize,
}

impl MatrixSampler for UniformSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitMatrix {
        BitMatrix::from_fn(self.rows, self.cols, |_, _| rng.gen_bool(0.5))
    }

    fn label(&self) -> String {
        format!("uniform {}x{}", self.rows, self.cols)
    }
}

/// Always the same matrix: a degenerate source with a single rank.
pub struct FixedMatrixSampler {
    pub matrix: BitMatrix,
}

impl MatrixSampler for FixedMatrixSampler {
    fn sample(&self, _rng: &mut ChaCha8Rng) -> BitMatrix {
        self.matrix.clone()
    }

    fn label(&self) -> String {
        format!("fixed {}x{}", self.matrix.rows(), self.matrix.cols())
    }
}

/// Rank histogram over `trials` sampled matrices. Each trial owns a
/// generator keyed by (seed, trial index), so results are identical with
/// and without the parallel feature.
pub fn monte_carlo_ranks<S: MatrixSampler + ?Sized>(
    sampler: &S,
    trials: u64,
    seed: u64,
) -> RankHistogram {
    let run = |i: u64| -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
        sampler.sample(&mut rng).rank()
    };
    let mut hist = RankHistogram::new(&sampler.label());
    #[cfg(feature = "parallel")]
    {
        let ranks: Vec<usize> = (0..trials).into_par_iter().map(run).collect();
        for r in ranks {
            hist.record(r);
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        for i in 0..trials {
            hist.record(run(i));
        }
    }
    hist
}

// ---------------------------------------------------------------------------
// Chi-square comparison

#[derive(Debug, Clone)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub significance: f64,
    pub distinguished: bool,
    /// merged (observed, expected) pairs actually compared
    pub cells: Vec<(f64, f64)>,
}

/// Pearson goodness-of-fit of an observed histogram against expected
/// proportions. Adjacent low-expectation bins (expected < 5) are merged.
pub fn chi_square_compare(
    observed: &RankHistogram,
    expected: &[(usize, f64)],
    significance: f64,
) -> Result<ChiSquareReport, RankStatsError> {
    if !(0.0..1.0).contains(&significance) || significance <= 0.0 {
        return Err(RankStatsError::BadSignificance(significance));
    }
    let total = observed.total();
    if total == 0 {
        return Err(RankStatsError::EmptyHistogram);
    }
    // union of ranks, ascending
    let mut ranks: Vec<usize> = observed.bins.keys().copied().collect();
    for (r, _) in expected {
        if !ranks.contains(r) {
            ranks.push(*r);
        }
    }
    ranks.sort_unstable();
    let exp_of = |r: usize| -> f64 {
        expected
            .iter()
            .find(|(er, _)| *er == r)
            .map(|(_, p)| p * total as f64)
            .unwrap_or(0.0)
    };
    let obs_of = |r: usize| -> f64 { observed.bins.get(&r).copied().unwrap_or(0) as f64 };
    // merge from the low-rank side
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for &r in &ranks {
        acc.0 += obs_of(r);
        acc.1 += exp_of(r);
        if acc.1 >= 5.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += acc.0;
            last.1 += acc.1;
        } else {
            cells.push(acc);
        }
    }
    let mut statistic = 0.0;
    for &(o, e) in &cells {
        if e > 0.0 {
            statistic += (o - e) * (o - e) / e;
        } else if o > 0.0 {
            statistic = f64::INFINITY;
        }
    }
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else if statistic.is_infinite() {
        0.0
    } else {
        statrs::function::gamma::gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquareReport {
        statistic,
        dof,
        p_value,
        significance,
        distinguished: p_value < significance,
        cells,
    })
}
