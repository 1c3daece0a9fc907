//! Inexact augmented Lagrange multiplier solvers for the self-representation
//! model `X = XZ + E`.
//!
//! Two objectives share one loop and differ only in the `J` block:
//!
//! * nuclear norm, `min ‖Z‖_* + λ‖E‖_{2,1}`: `J` is singular value thresholding
//!   of `Z + Y₂/μ` at `1/μ`;
//! * squared Frobenius norm, `min ‖Z‖_F² + λ‖E‖_{2,1}`: `J = μ/(μ+2)·(Z + Y₂/μ)`.
//!
//! The `Z` block solves `(XᵀX + I) Z = Xᵀ(X - E) + J + (XᵀY₁ - Y₂)/μ`. Since
//! `X` never changes, `(XᵀX + I)⁻¹` is formed once from its Cholesky factor.
//! The `E` block is column-wise shrinkage of `X - XZ + Y₁/μ` at `λ/μ`.

use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{l21_prox, svt};
use crate::scalar::{all_finite, max_abs, DenseMatrix, Real};

/// Which regularizer is placed on the representation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Nuclear norm (low-rank representation).
    Lrnr,
    /// Squared Frobenius norm.
    Lfnr,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Lrnr => "lrnr",
            SolverKind::Lfnr => "lfnr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    pub lambda: T,
    pub mu0: T,
    pub rho: T,
    pub mu_max: T,
    pub eps: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            lambda: T::lit(0.1),
            mu0: T::lit(1e-6),
            rho: T::lit(1.1),
            mu_max: T::lit(1e10),
            eps: T::lit(1e-8),
            max_iter: 1000,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if !pos(self.lambda) || !pos(self.mu0) || !pos(self.mu_max) || !pos(self.eps) {
            return Err(Error::input(
                "solver config: lambda, mu0, mu_max and eps must be positive and finite",
            ));
        }
        if !(self.rho > T::one()) {
            return Err(Error::input("solver config: rho must exceed 1"));
        }
        if self.max_iter == 0 {
            return Err(Error::input("solver config: max_iter must be positive"));
        }
        Ok(())
    }
}

/// Penalty schedule `μ ← min(ρμ, μ_max)`.
#[inline]
pub fn next_mu<T: Real>(mu: T, rho: T, mu_max: T) -> T {
    (rho * mu).min(mu_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult<T: Real> {
    pub z_star: DenseMatrix<T>,
    pub e_star: DenseMatrix<T>,
    pub iterations: usize,
    pub converged: bool,
    /// `(‖X - XZ - E‖_∞, ‖Z - J‖_∞)` at the last iteration.
    pub final_residuals: (T, T),
    pub final_mu: T,
}

/// Closed-form `J` block for the Frobenius objective: the minimizer of
/// `‖J‖_F² + (μ/2)‖zy - J‖_F²`, which is `μ/(μ+2) · zy`.
pub fn frob_j_update<T: Real>(zy: &DenseMatrix<T>, mu: T) -> DenseMatrix<T> {
    zy * (mu / (mu + T::lit(2.0)))
}

pub fn solve_lrr<T: Real>(x: &DenseMatrix<T>, cfg: &SolverConfig<T>) -> Result<SolverResult<T>> {
    solve(x, cfg, SolverKind::Lrnr)
}

pub fn solve_lfr<T: Real>(x: &DenseMatrix<T>, cfg: &SolverConfig<T>) -> Result<SolverResult<T>> {
    solve(x, cfg, SolverKind::Lfnr)
}

fn check_input<T: Real>(x: &DenseMatrix<T>) -> Result<()> {
    if !x.is_square() {
        return Err(Error::input(format!(
            "solver input must be square, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    if !all_finite(x) {
        return Err(Error::input("solver input has non-finite entries"));
    }
    let tol = T::lit(1e-12) * max_abs(x).max(T::one());
    let n = x.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (x[(i, j)] - x[(j, i)]).abs() > tol {
                return Err(Error::input(format!("solver input is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Runs the inexact ALM loop for the chosen objective.
///
/// Stops when both `‖X - XZ - E‖_∞` and `‖Z - J‖_∞` drop below `eps`, or after
/// `max_iter` iterations with `converged = false`.
pub fn solve<T: Real>(
    x: &DenseMatrix<T>,
    cfg: &SolverConfig<T>,
    kind: SolverKind,
) -> Result<SolverResult<T>> {
    cfg.validate()?;
    check_input(x)?;
    let n = x.nrows();
    let xt = x.transpose();
    let gram = &xt * x + DenseMatrix::<T>::identity(n, n);
    let gram_inv = Cholesky::new(gram)
        .ok_or_else(|| Error::Numerical {
            iteration: 0,
            msg: "XᵀX + I is not numerically positive definite".into(),
        })?
        .inverse();

    let mut z = DenseMatrix::<T>::zeros(n, n);
    let mut j;
    let mut e = DenseMatrix::<T>::zeros(n, n);
    let mut y1 = DenseMatrix::<T>::zeros(n, n);
    let mut y2 = DenseMatrix::<T>::zeros(n, n);
    let mut mu = cfg.mu0;
    let mut residuals = (T::zero(), T::zero());

    for it in 1..=cfg.max_iter {
        let inv_mu = T::one() / mu;
        let phi = &z + &y2 * inv_mu;
        j = match kind {
            SolverKind::Lrnr => svt(&phi, inv_mu).map_err(|_| Error::Numerical {
                iteration: it,
                msg: "non-finite value entering the J update".into(),
            })?,
            SolverKind::Lfnr => frob_j_update(&phi, mu),
        };

        // Xᵀ(X - E) + XᵀY₁/μ folded into one product.
        let mut rhs = &xt * (x - &e + &y1 * inv_mu);
        rhs += &j;
        rhs -= &y2 * inv_mu;
        z = &gram_inv * rhs;

        let xz = x * &z;
        let fit = x - &xz;
        e = l21_prox(&(&fit + &y1 * inv_mu), cfg.lambda * inv_mu).map_err(|_| {
            Error::Numerical {
                iteration: it,
                msg: "non-finite value entering the E update".into(),
            }
        })?;

        let r1 = fit - &e;
        let r2 = &z - &j;
        y1 += &r1 * mu;
        y2 += &r2 * mu;
        mu = next_mu(mu, cfg.rho, cfg.mu_max);

        residuals = (max_abs(&r1), max_abs(&r2));
        if !residuals.0.is_finite() || !residuals.1.is_finite() || !all_finite(&z) {
            return Err(Error::Numerical {
                iteration: it,
                msg: "non-finite iterate".into(),
            });
        }
        if residuals.0 < cfg.eps && residuals.1 < cfg.eps {
            log::debug!("{} converged after {it} iterations", kind.name());
            return Ok(SolverResult {
                z_star: z,
                e_star: e,
                iterations: it,
                converged: true,
                final_residuals: residuals,
                final_mu: mu,
            });
        }
    }
    log::warn!(
        "{} stopped at max_iter={} with residuals {:?}",
        kind.name(),
        cfg.max_iter,
        (residuals.0.as_f64(), residuals.1.as_f64())
    );
    Ok(SolverResult {
        z_star: z,
        e_star: e,
        iterations: cfg.max_iter,
        converged: false,
        final_residuals: residuals,
        final_mu: mu,
    })
}
