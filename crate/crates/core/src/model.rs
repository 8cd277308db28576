//! Random problem instances for the linear observation model y = A x + w.
//!
//! Two measurement ensembles are supported: iid Gaussian entries with
//! variance 1/N, and the row-orthogonal ensemble A = alpha^{-1/2} P O built
//! from a Haar orthogonal K x K matrix O. Signals are unit-variance Gaussian
//! or Bernoulli-Gaussian. Every sampler is a pure function of
//! (dimensions, parameters, seed).

use ndarray::{s, Array1, Array2};
use ndarray_linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SampError};

/// Measurement matrix ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    IidGaussian,
    RowOrthogonal,
}

/// Validated ensemble description: kind plus dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub k: usize,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(SampError::InvalidParameter(format!(
                "dimensions must be positive, got N = {n}, K = {k}"
            )));
        }
        if kind == EnsembleKind::RowOrthogonal && n > k {
            return Err(SampError::InvalidParameter(format!(
                "row-orthogonal ensemble requires N <= K (alpha <= 1), got N = {n}, K = {k}"
            )));
        }
        Ok(Self { kind, n, k })
    }

    pub fn alpha(&self) -> f64 {
        self.n as f64 / self.k as f64
    }
}

/// Signal prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorKind {
    GaussianUnit,
    BernoulliGaussian,
}

/// Prior specification. The active component always has unit variance, so
/// the prior second moment equals the activity probability `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub kind: PriorKind,
    pub rho: f64,
}

impl PriorSpec {
    pub fn gaussian_unit() -> Self {
        Self {
            kind: PriorKind::GaussianUnit,
            rho: 1.0,
        }
    }

    pub fn bernoulli_gaussian(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(SampError::InvalidParameter(format!(
                "activity probability must lie in (0, 1], got {rho}"
            )));
        }
        Ok(Self {
            kind: PriorKind::BernoulliGaussian,
            rho,
        })
    }

    /// E[x^2] under the prior.
    pub fn second_moment(&self) -> f64 {
        self.rho
    }
}

/// One realization of the observation model.
///
/// `observation = matrix * signal + noise` holds exactly by construction.
#[derive(Debug, Clone)]
pub struct SystemInstance {
    pub matrix: Array2<f64>,
    pub signal: Array1<f64>,
    pub noise: Array1<f64>,
    pub observation: Array1<f64>,
    pub noise_variance: f64,
    pub alpha: f64,
}

impl SystemInstance {
    /// Assemble an instance from its parts; the observation is computed here.
    pub fn new(
        matrix: Array2<f64>,
        signal: Array1<f64>,
        noise: Array1<f64>,
        noise_variance: f64,
    ) -> Result<Self> {
        let (n, k) = matrix.dim();
        if signal.len() != k {
            return Err(SampError::DimensionMismatch(format!(
                "signal length {} does not match matrix columns {k}",
                signal.len()
            )));
        }
        if noise.len() != n {
            return Err(SampError::DimensionMismatch(format!(
                "noise length {} does not match matrix rows {n}",
                noise.len()
            )));
        }
        if !(noise_variance > 0.0) {
            return Err(SampError::InvalidParameter(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        let observation = matrix.dot(&signal) + &noise;
        Ok(Self {
            matrix,
            signal,
            noise,
            observation,
            noise_variance,
            alpha: n as f64 / k as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Precomputed quantities for the EP/ADATAP family, in information form:
/// `precision = A^T A / sigma_w^2` and `information = A^T y / sigma_w^2`.
#[derive(Debug, Clone)]
pub struct Auxiliaries {
    pub precision: Array2<f64>,
    pub information: Array1<f64>,
}

/// J = A^T A / sigma_w^2, theta = A^T y / sigma_w^2.
pub fn compute_auxiliaries(instance: &SystemInstance) -> Auxiliaries {
    let at = instance.matrix.t();
    let mut precision = at.dot(&instance.matrix);
    precision.mapv_inplace(|v| v / instance.noise_variance);
    let mut information = at.dot(&instance.observation);
    information.mapv_inplace(|v| v / instance.noise_variance);
    Auxiliaries {
        precision,
        information,
    }
}

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

/// Labels for the independent substreams drawn from one master seed.
#[derive(Debug, Clone, Copy)]
pub enum SubStream {
    Matrix,
    Signal,
    Noise,
    Trial(u64),
}

impl SubStream {
    fn label(self) -> u64 {
        match self {
            SubStream::Matrix => 0x4d41_5452,
            SubStream::Signal => 0x5349_474e,
            SubStream::Noise => 0x4e4f_4953,
            SubStream::Trial(t) => 0x5452_4c00 ^ t,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based substream derivation: reproducible independently of the
/// order in which substreams are consumed.
pub fn substream_seed(master: u64, stream: SubStream) -> u64 {
    splitmix64(splitmix64(master) ^ stream.label())
}

fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// N x K matrix with iid Normal(0, 1/N) entries, filled row-major.
pub fn sample_iid_gaussian(n: usize, k: usize, seed: u64) -> Result<Array2<f64>> {
    if n == 0 || k == 0 {
        return Err(SampError::InvalidParameter(format!(
            "dimensions must be positive, got N = {n}, K = {k}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let scale = (1.0 / n as f64).sqrt();
    let data: Vec<f64> = (0..n * k)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(Array2::from_shape_vec((n, k), data).expect("shape matches data length"))
}

/// First N rows of a Haar orthogonal K x K matrix, scaled by alpha^{-1/2},
/// so that A A^T = (1/alpha) I_N.
///
/// Haar sampling: QR of an iid standard Gaussian K x K matrix with the
/// R-diagonal sign correction (column j of Q multiplied by sign(R_jj)).
pub fn sample_row_orthogonal(n: usize, k: usize, seed: u64) -> Result<Array2<f64>> {
    if n == 0 || k == 0 {
        return Err(SampError::InvalidParameter(format!(
            "dimensions must be positive, got N = {n}, K = {k}"
        )));
    }
    if n > k {
        return Err(SampError::InvalidParameter(format!(
            "row-orthogonal ensemble requires N <= K, got N = {n}, K = {k}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let data: Vec<f64> = (0..k * k)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let gaussian = Array2::from_shape_vec((k, k), data).expect("shape matches data length");
    let (mut q, r) = gaussian.qr()?;
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).mapv_inplace(|v| -v);
        }
    }
    let alpha = n as f64 / k as f64;
    let scale = 1.0 / alpha.sqrt();
    let mut a = q.slice(s![..n, ..]).to_owned();
    a.mapv_inplace(|v| scale * v);
    Ok(a)
}

/// K iid draws from the prior.
pub fn sample_signal(prior: &PriorSpec, k: usize, seed: u64) -> Array1<f64> {
    let mut rng = seeded_rng(seed);
    let data: Vec<f64> = match prior.kind {
        PriorKind::GaussianUnit => (0..k)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect(),
        PriorKind::BernoulliGaussian => (0..k)
            .map(|_| {
                // Draw both variates unconditionally so the stream layout is
                // fixed regardless of which branch each entry takes.
                let u: f64 = rng.random();
                let g: f64 = rng.sample(StandardNormal);
                if u < prior.rho {
                    g
                } else {
                    0.0
                }
            })
            .collect(),
    };
    Array1::from_vec(data)
}

/// Draw (A, x, w) from independent substreams of `seed` and assemble the
/// observation y = A x + w.
pub fn generate_instance(
    ensemble: &EnsembleSpec,
    prior: &PriorSpec,
    sigma_w2: f64,
    seed: u64,
) -> Result<SystemInstance> {
    if !(sigma_w2 > 0.0) {
        return Err(SampError::InvalidParameter(format!(
            "noise variance must be positive, got {sigma_w2}"
        )));
    }
    let matrix_seed = substream_seed(seed, SubStream::Matrix);
    let matrix = match ensemble.kind {
        EnsembleKind::IidGaussian => sample_iid_gaussian(ensemble.n, ensemble.k, matrix_seed)?,
        EnsembleKind::RowOrthogonal => {
            sample_row_orthogonal(ensemble.n, ensemble.k, matrix_seed)?
        }
    };
    let signal = sample_signal(prior, ensemble.k, substream_seed(seed, SubStream::Signal));
    let mut rng = seeded_rng(substream_seed(seed, SubStream::Noise));
    let sd = sigma_w2.sqrt();
    let noise = Array1::from_iter((0..ensemble.n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)));
    SystemInstance::new(matrix, signal, noise, sigma_w2)
}
