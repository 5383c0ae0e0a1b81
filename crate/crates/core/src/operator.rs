//! Dense complex operators on `C^n`, their spectral decompositions and the
//! two orders used throughout the crate: the projector order `P ≤ Q` and the
//! spectral order `A ≤_s B`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column vector of complex amplitudes.
pub type StateVector = DVector<Complex64>;

/// Comparison policy for floating-point operator identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius-norm tolerance for operator identities.
    pub tau: f64,
    /// Radius used when clustering eigenvalues.
    pub tau_eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau: 1e-9,
            tau_eig: 1e-8,
        }
    }
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self { m })
    }

    /// Builds an operator from row-major complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self {
            m: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self {
            m: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(entries[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// `|ψ⟩⟨ψ|` for the given vector (no normalisation is applied).
    pub fn ket_bra(psi: &StateVector) -> Self {
        Self {
            m: psi * psi.adjoint(),
        }
    }

    /// Projector onto the coordinate axis `index` of `C^dim`.
    pub fn basis_projector(dim: usize, index: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            m: self.m.map(|z| z * factor),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self − other‖`.
    pub fn distance(&self, other: &Operator) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Operator, tau: f64) -> bool {
        self.dim() == other.dim() && self.distance(other) <= tau
    }

    pub fn is_zero(&self, tau: f64) -> bool {
        self.frobenius_norm() <= tau
    }

    /// Real part of `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        (psi.adjoint() * &self.m * psi)[(0, 0)].re
    }

    pub fn self_adjoint_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    pub fn is_self_adjoint(&self, tau: f64) -> bool {
        self.self_adjoint_residual() <= tau
    }

    /// `max(‖A − A†‖, ‖A² − A‖)`.
    pub fn projector_residual(&self) -> f64 {
        let sq = self * self;
        self.self_adjoint_residual().max(sq.distance(self))
    }

    pub fn is_projector(&self, tau: f64) -> bool {
        self.projector_residual() <= tau
    }

    /// Rank of a projector, read off its trace.
    pub fn projector_rank(&self) -> usize {
        self.trace().re.round().max(0.0) as usize
    }

    pub fn commutes_with(&self, other: &Operator, tau: f64) -> bool {
        let ab = self * other;
        let ba = other * self;
        ab.distance(&ba) <= tau
    }

    /// `P ≤ Q` for projectors, tested as `QPQ = P`; no argument validation.
    pub(crate) fn below(&self, q: &Operator, tau: f64) -> bool {
        let qpq = q * &(self * q);
        qpq.distance(self) <= tau
    }

    /// True when `self · other` vanishes within `tau`.
    pub(crate) fn annihilates(&self, other: &Operator, tau: f64) -> bool {
        (self * other).is_zero(tau)
    }

    fn check_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn require_projector(&self, tau: f64) -> Result<()> {
        let residual = self.projector_residual();
        if residual > tau {
            return Err(Error::NotProjector { residual });
        }
        Ok(())
    }

    fn require_self_adjoint(&self, tau: f64) -> Result<()> {
        let residual = self.self_adjoint_residual();
        if residual > tau {
            return Err(Error::NotSelfAdjoint { residual });
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            m: &self.m - &rhs.m,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            m: &self.m * &rhs.m,
        }
    }
}

/// Sums a family of operators of dimension `dim`.
pub fn sum_operators<'a>(dim: usize, ops: impl IntoIterator<Item = &'a Operator>) -> Operator {
    ops.into_iter()
        .fold(Operator::zeros(dim), |acc, op| &acc + op)
}

pub(crate) fn require_projector(p: &Operator, tol: &Tolerances) -> Result<()> {
    p.require_projector(tol.tau)
}

pub(crate) fn require_self_adjoint(a: &Operator, tol: &Tolerances) -> Result<()> {
    a.require_self_adjoint(tol.tau)
}

/// `A = Σ λᵢ Pᵢ` with strictly increasing eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<Operator>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from eigenvalue/projector pairs. Pairs are
    /// sorted by eigenvalue; the caller guarantees orthogonality.
    pub(crate) fn from_pairs(mut pairs: Vec<(f64, Operator)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eigenvalues, projectors) = pairs.into_iter().unzip();
        Self {
            eigenvalues,
            projectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, Operator::dim)
    }

    pub fn reconstruct(&self) -> Operator {
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(Operator::zeros(self.dim()), |acc, (&l, p)| {
                &acc + &p.scale(l)
            })
    }

    pub fn family(&self) -> SpectralFamily {
        let mut running = Operator::zeros(self.dim());
        let cumulative = self
            .projectors
            .iter()
            .map(|p| {
                running = &running + p;
                running.clone()
            })
            .collect();
        SpectralFamily {
            thresholds: self.eigenvalues.clone(),
            cumulative,
            dim: self.dim(),
        }
    }
}

/// Right-continuous step family `r ↦ E_r` sampled on its jump points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily {
    thresholds: Vec<f64>,
    cumulative: Vec<Operator>,
    dim: usize,
}

impl SpectralFamily {
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn cumulative(&self) -> &[Operator] {
        &self.cumulative
    }

    /// `E_r`: the cumulative projector at the largest threshold `≤ r`, or 0.
    pub fn at(&self, r: f64) -> Operator {
        let count = self.thresholds.partition_point(|&t| t <= r);
        match count {
            0 => Operator::zeros(self.dim),
            k => self.cumulative[k - 1].clone(),
        }
    }
}

/// Eigendecomposition of a self-adjoint operator with eigenvalues clustered
/// within `tol.tau_eig`.
pub fn spectral_decomposition(a: &Operator, tol: &Tolerances) -> Result<SpectralDecomposition> {
    require_self_adjoint(a, tol)?;
    let n = a.dim();
    let h = faer::Mat::<Complex64>::from_fn(n, n, |i, j| (a.m[(i, j)] + a.m[(j, i)].conj()) * 0.5);
    let eig = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::Validation("eigendecomposition did not converge".into()))?;
    let (values, vectors) = (eig.S(), eig.U());

    // Eigenvalues come sorted; merge overlapping [λ - τ_eig, λ + τ_eig] runs.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in 0..n {
        let value = values[idx].re;
        match clusters.last_mut() {
            Some(last) if value - values[*last.last().unwrap()].re <= 2.0 * tol.tau_eig => {
                last.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }

    let pairs = clusters
        .into_iter()
        .map(|members| {
            let mean = members.iter().map(|&i| values[i].re).sum::<f64>() / members.len() as f64;
            let proj = DMatrix::from_fn(n, n, |r, c| {
                members
                    .iter()
                    .map(|&k| vectors[(r, k)] * vectors[(c, k)].conj())
                    .sum::<Complex64>()
            });
            (mean, Operator { m: proj })
        })
        .collect();
    Ok(SpectralDecomposition::from_pairs(pairs))
}

/// `E_r = Σ_{λᵢ ≤ r} Pᵢ`.
pub fn spectral_family_at(decomposition: &SpectralDecomposition, r: f64) -> Operator {
    decomposition.family().at(r)
}

/// `P ≤ Q` in the projector lattice.
pub fn projector_leq(p: &Operator, q: &Operator, tol: &Tolerances) -> Result<bool> {
    p.check_dim(q)?;
    require_projector(p, tol)?;
    require_projector(q, tol)?;
    Ok(p.below(q, tol.tau))
}

/// Spectral order: `A ≤_s B` iff `E^A_r ≥ E^B_r` for every `r`.
///
/// Both families are constant between consecutive points of the merged
/// eigenvalue grid, so each family is sampled just to the right of every grid
/// point (by `tau_eig`, so that equal eigenvalues of `A` and `B` that differ
/// by rounding noise compare as equal).
pub fn spectral_order_leq(a: &Operator, b: &Operator, tol: &Tolerances) -> Result<bool> {
    a.check_dim(b)?;
    let da = spectral_decomposition(a, tol)?;
    let db = spectral_decomposition(b, tol)?;
    Ok(spectral_order_leq_decomposed(&da, &db, tol))
}

pub(crate) fn spectral_order_leq_decomposed(
    a: &SpectralDecomposition,
    b: &SpectralDecomposition,
    tol: &Tolerances,
) -> bool {
    let fa = a.family();
    let fb = b.family();
    let mut grid: Vec<f64> = a
        .eigenvalues
        .iter()
        .chain(&b.eigenvalues)
        .copied()
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.iter().all(|&r| {
        let r = r + tol.tau_eig;
        fb.at(r).below(&fa.at(r), tol.tau)
    })
}
