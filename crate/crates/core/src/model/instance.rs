use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, sample_complex_gaussian, ComplexMatrix};

/// IT channel `H` (n_r × n_t) and effective PT channel `g = H′f` (length n_r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct ChannelInstance {
    h: ComplexMatrix,
    g: Vec<Complex64>,
    seed: Option<u64>,
}

impl ChannelInstance {
    pub fn new(h: ComplexMatrix, g: Vec<Complex64>) -> Result<Self> {
        if h.rows() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "h has {} rows but g has {} entries",
                h.rows(),
                g.len()
            )));
        }
        if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("g entries must be finite".into()));
        }
        Ok(Self { h, g, seed: None })
    }

    #[must_use]
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_t(&self) -> usize {
        self.h.cols()
    }

    pub fn n_r(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Harvestable power per antenna, `|g_n|²`.
    pub fn harvest_weights(&self) -> Vec<f64> {
        self.g.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Wire form: `{"n_t", "n_r", "h": [[[re, im], ..], ..], "g": [[re, im], ..], "seed"}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ChannelRecord {
    pub(crate) n_t: usize,
    pub(crate) n_r: usize,
    pub(crate) h: Vec<Vec<Complex64>>,
    pub(crate) g: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub(crate) seed: Option<u64>,
}

impl TryFrom<ChannelRecord> for ChannelInstance {
    type Error = String;

    fn try_from(r: ChannelRecord) -> std::result::Result<Self, String> {
        if r.h.len() != r.n_r {
            return Err(format!(
                "field `h`: expected {} rows (n_r), found {}",
                r.n_r,
                r.h.len()
            ));
        }
        if let Some((i, row)) = r.h.iter().enumerate().find(|(_, row)| row.len() != r.n_t) {
            return Err(format!(
                "field `h`: row {i} has {} entries, expected {} (n_t)",
                row.len(),
                r.n_t
            ));
        }
        if r.g.len() != r.n_r {
            return Err(format!(
                "field `g`: expected {} entries (n_r), found {}",
                r.n_r,
                r.g.len()
            ));
        }
        let h = ComplexMatrix::from_row_major(r.n_r, r.n_t, r.h.concat())
            .map_err(|e| format!("field `h`: {e}"))?;
        let inst = ChannelInstance::new(h, r.g).map_err(|e| format!("field `g`: {e}"))?;
        Ok(inst.with_seed(r.seed))
    }
}

impl From<ChannelInstance> for ChannelRecord {
    fn from(c: ChannelInstance) -> Self {
        let h = (0..c.n_r()).map(|i| c.h.row(i).to_vec()).collect();
        ChannelRecord {
            n_t: c.n_t(),
            n_r: c.n_r(),
            h,
            g: c.g,
            seed: c.seed,
        }
    }
}

/// Choice of the power beacon's beamformer `f`.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum Beamformer {
    /// Dominant right singular vector of `H′` (maximum-ratio transmission).
    #[default]
    Mrt,
    /// Caller-supplied direction, normalized to unit length.
    Fixed(Vec<Complex64>),
}

impl Beamformer {
    /// Unit-norm beamforming vector for the PT channel `hp` (n_r × n_p).
    pub fn vector(&self, hp: &ComplexMatrix) -> Result<Vec<Complex64>> {
        match self {
            Beamformer::Mrt => {
                let eig = hermitian_eigen(&hp.col_gram())?;
                Ok(eig.vector(0))
            }
            Beamformer::Fixed(f) => {
                if f.len() != hp.cols() {
                    return Err(Error::DimensionMismatch(format!(
                        "beamformer has {} entries for {} beacon antennas",
                        f.len(),
                        hp.cols()
                    )));
                }
                let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if !(norm > 0.0 && norm.is_finite()) {
                    return Err(Error::InvalidArgument("beamformer must be nonzero".into()));
                }
                Ok(f.iter().map(|z| z / norm).collect())
            }
        }
    }
}

/// Draws a Rayleigh-faded instance: `H ~ CN(0,1)^{n_r×n_t}`, `H′ ~ CN(0,1)^{n_r×n_p}`, `g = H′f`.
pub fn generate_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n_t: usize,
    n_r: usize,
    n_p: usize,
    beamformer: &Beamformer,
) -> Result<ChannelInstance> {
    if n_t == 0 || n_r == 0 || n_p == 0 {
        return Err(Error::InvalidArgument(format!(
            "n_t, n_r, n_p must be >= 1 (got {n_t}, {n_r}, {n_p})"
        )));
    }
    let h = sample_complex_gaussian(rng, n_r, n_t);
    let hp = sample_complex_gaussian(rng, n_r, n_p);
    let f = beamformer.vector(&hp)?;
    let g = hp.mul_vec(&f)?;
    ChannelInstance::new(h, g)
}
