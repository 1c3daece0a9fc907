//! Neighborhood-based link predictors used as comparators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reconstruct::{ScoreMatrix, ScoreSource};
use crate::scalar::{DenseMatrix, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMethod {
    /// Common neighbours.
    Cn,
    /// Resource allocation.
    Ra,
    /// Local path, `A² + εA³`.
    Lp,
}

impl BaselineMethod {
    pub fn name(self) -> &'static str {
        match self {
            BaselineMethod::Cn => "cn",
            BaselineMethod::Ra => "ra",
            BaselineMethod::Lp => "lp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineSpec {
    pub method: BaselineMethod,
    /// Weight on length-3 paths; only read by [`BaselineMethod::Lp`].
    pub epsilon: f64,
}

impl BaselineSpec {
    pub const DEFAULT_LP_EPSILON: f64 = 0.01;

    pub fn new(method: BaselineMethod) -> Self {
        BaselineSpec {
            method,
            epsilon: Self::DEFAULT_LP_EPSILON,
        }
    }
}

pub fn baseline_scores<T: Real>(g: &Graph, spec: &BaselineSpec) -> Result<ScoreMatrix<T>> {
    if g.node_count() == 0 {
        return Err(Error::input("baseline scores need at least one node"));
    }
    if !(spec.epsilon >= 0.0 && spec.epsilon.is_finite()) {
        return Err(Error::input("LP epsilon must be a finite nonnegative number"));
    }
    let n = g.node_count();
    let a = g.adjacency_matrix::<T>();
    let mut s = match spec.method {
        BaselineMethod::Cn => &a * &a,
        BaselineMethod::Ra => {
            let deg = g.degrees();
            let mut weighted = a.clone();
            for (k, mut col) in weighted.column_iter_mut().enumerate() {
                if deg[k] > 0 {
                    col /= T::from_usize(deg[k]).expect("degree fits the scalar type");
                }
            }
            // Σ_k A_ik A_kj / deg(k)
            weighted * &a
        }
        BaselineMethod::Lp => {
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            a2 + a3 * T::lit(spec.epsilon)
        }
    };
    for i in 0..n {
        s[(i, i)] = T::zero();
    }
    let source = ScoreSource::Baseline {
        method: spec.method,
        epsilon: spec.epsilon,
    };
    Ok(ScoreMatrix::from_symmetric(symmetrize(s), source))
}

fn symmetrize<T: Real>(s: DenseMatrix<T>) -> DenseMatrix<T> {
    (&s + s.transpose()) * T::lit(0.5)
}
