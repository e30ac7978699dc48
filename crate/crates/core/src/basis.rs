//! Laplacian eigenbasis.
//!
//! Arm `v` is represented by row `v` of the (possibly truncated) eigenvector
//! matrix `Q`. The regularised spectrum `Λ = Λ_L + λI` is what the bandit
//! algorithms use as their prior precision.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    reg_lambda: f64,
    reg_eigenvalues: DVector<f64>,
    n_components: usize,
}

impl SpectralBasis {
    pub fn from_graph(
        g: &WeightedGraph,
        reg_lambda: f64,
        truncate_to: Option<usize>,
    ) -> Result<Self> {
        let mut basis = eigendecompose(&g.laplacian(), reg_lambda, truncate_to)?;
        basis.n_components = g.n_components();
        Ok(basis)
    }

    /// Builds a basis from explicit parts. Eigenvalues must be ascending and
    /// match the eigenvector column count.
    pub fn from_parts(
        eigenvalues: DVector<f64>,
        eigenvectors: DMatrix<f64>,
        reg_lambda: f64,
        n_components: usize,
    ) -> Result<Self> {
        check_reg_lambda(reg_lambda)?;
        if eigenvalues.len() != eigenvectors.ncols() || eigenvalues.is_empty() {
            return Err(Error::param(format!(
                "{} eigenvalues for {} eigenvector columns",
                eigenvalues.len(),
                eigenvectors.ncols()
            )));
        }
        if eigenvalues
            .iter()
            .zip(eigenvalues.iter().skip(1))
            .any(|(a, b)| b < a)
        {
            return Err(Error::param("eigenvalues must be ascending"));
        }
        if n_components == 0 {
            return Err(Error::param("component count must be at least 1"));
        }
        let reg_eigenvalues = eigenvalues.add_scalar(reg_lambda);
        Ok(Self {
            eigenvalues,
            eigenvectors,
            reg_lambda,
            reg_eigenvalues,
            n_components,
        })
    }

    /// Laplacian eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `N x L` matrix whose column `k` is `q_k` and whose row `v` is the
    /// feature vector of arm `v`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn reg_lambda(&self) -> f64 {
        self.reg_lambda
    }

    /// `λ_k + λ` for each retained eigenpair.
    pub fn reg_eigenvalues(&self) -> &DVector<f64> {
        &self.reg_eigenvalues
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn n_nodes(&self) -> usize {
        self.eigenvectors.nrows()
    }

    /// Number of retained eigenpairs `L`.
    pub fn dim(&self) -> usize {
        self.eigenvectors.ncols()
    }

    pub fn is_truncated(&self) -> bool {
        self.dim() < self.n_nodes()
    }

    /// Same eigenpairs under a different regulariser.
    pub fn with_reg_lambda(&self, reg_lambda: f64) -> Result<Self> {
        check_reg_lambda(reg_lambda)?;
        Ok(Self {
            reg_lambda,
            reg_eigenvalues: self.eigenvalues.add_scalar(reg_lambda),
            ..self.clone()
        })
    }

    /// First `l` eigenpairs.
    pub fn truncated(&self, l: usize) -> Result<Self> {
        if l == 0 || l > self.dim() {
            return Err(Error::param(format!(
                "cannot truncate a {}-dimensional basis to {l}",
                self.dim()
            )));
        }
        Ok(Self {
            eigenvalues: self.eigenvalues.rows(0, l).into_owned(),
            eigenvectors: self.eigenvectors.columns(0, l).into_owned(),
            reg_lambda: self.reg_lambda,
            reg_eigenvalues: self.reg_eigenvalues.rows(0, l).into_owned(),
            n_components: self.n_components,
        })
    }

    /// `max_k ‖L q_k − λ_k q_k‖₂ / max(1, λ_k)`.
    pub fn max_relative_residual(&self, laplacian: &DMatrix<f64>) -> f64 {
        let lq = laplacian * &self.eigenvectors;
        (0..self.dim())
            .map(|k| {
                let lam = self.eigenvalues[k];
                (lq.column(k) - self.eigenvectors.column(k) * lam).norm() / lam.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// `max |QᵀQ − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let l = gram.nrows();
        (gram - DMatrix::identity(l, l)).amax()
    }
}

fn check_reg_lambda(reg_lambda: f64) -> Result<()> {
    if !(reg_lambda.is_finite() && reg_lambda > 0.0) {
        return Err(Error::param(format!(
            "regularisation λ must be positive, got {reg_lambda}"
        )));
    }
    Ok(())
}

/// Dense symmetric eigendecomposition of a graph Laplacian.
///
/// Eigenpairs are sorted ascending; each eigenvector is sign-normalised so
/// its largest-magnitude entry (first one on ties) is positive. The
/// component count `K` comes from the Laplacian's off-diagonal pattern; the
/// `K` smallest eigenvalues are snapped to exactly zero when the solver
/// returns them within `1e-8 · max(1, λ_max)`.
pub fn eigendecompose(
    laplacian: &DMatrix<f64>,
    reg_lambda: f64,
    truncate_to: Option<usize>,
) -> Result<SpectralBasis> {
    check_reg_lambda(reg_lambda)?;
    let n = laplacian.nrows();
    if n == 0 || laplacian.ncols() != n {
        return Err(Error::param(format!(
            "laplacian must be square and non-empty, got {}x{}",
            laplacian.nrows(),
            laplacian.ncols()
        )));
    }
    if let Some(l) = truncate_to {
        if l == 0 || l > n {
            return Err(Error::param(format!("truncation L={l} outside 1..={n}")));
        }
    }
    let n_components = components_of(laplacian);

    let eig = SymmetricEigen::try_new(laplacian.clone(), f64::EPSILON, 100 * n.max(10))
        .ok_or(Error::EigenNonConvergence { size: n })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let keep = truncate_to.unwrap_or(n);

    let lam_max = eig.eigenvalues.amax().max(1.0);
    let zero_tol = 1e-8 * lam_max;
    let mut values = DVector::zeros(keep);
    let mut vectors = DMatrix::zeros(n, keep);
    for (dst, &src) in order.iter().take(keep).enumerate() {
        let mut lam = eig.eigenvalues[src];
        if dst < n_components && lam.abs() <= zero_tol {
            lam = 0.0;
        }
        values[dst] = lam.max(0.0);
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(col * sign));
    }
    SpectralBasis::from_parts(values, vectors, reg_lambda, n_components)
}

fn components_of(laplacian: &DMatrix<f64>) -> usize {
    let n = laplacian.nrows();
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if laplacian[(i, j)] != 0.0 {
                edges.push((i, j, 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges).map_or(1, |g| g.n_components())
}
