//! Link-existence scores from a solved representation and the two rankings
//! built on them: candidate (missing) links and suspicious (spurious) links.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baselines::BaselineMethod;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::scalar::{DenseMatrix, Real};
use crate::solver::SolverKind;

/// Where a score matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScoreSource {
    Solver { solver: SolverKind, lambda: f64 },
    Baseline { method: BaselineMethod, epsilon: f64 },
    External,
}

impl fmt::Display for ScoreSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreSource::Solver { solver, lambda } => write!(f, "{}(lambda={lambda})", solver.name()),
            ScoreSource::Baseline {
                method: BaselineMethod::Lp,
                epsilon,
            } => write!(f, "lp(epsilon={epsilon})"),
            ScoreSource::Baseline { method, .. } => f.write_str(method.name()),
            ScoreSource::External => f.write_str("external"),
        }
    }
}

/// Symmetric pairwise score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix<T: Real> {
    entries: DenseMatrix<T>,
    source: ScoreSource,
}

impl<T: Real> ScoreMatrix<T> {
    /// Wraps a square matrix, symmetrizing it as `(m + mᵀ)/2`.
    pub fn from_matrix(m: DenseMatrix<T>, source: ScoreSource) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::input("score matrix must be square"));
        }
        let entries = (&m + m.transpose()) * T::lit(0.5);
        Ok(ScoreMatrix { entries, source })
    }

    pub(crate) fn from_symmetric(entries: DenseMatrix<T>, source: ScoreSource) -> Self {
        ScoreMatrix { entries, source }
    }

    pub fn entries(&self) -> &DenseMatrix<T> {
        &self.entries
    }

    pub fn source(&self) -> ScoreSource {
        self.source
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    #[inline]
    pub fn score(&self, (i, j): Edge) -> T {
        self.entries[(i, j)]
    }
}

/// `SM = X·Z* + (X·Z*)ᵀ`.
pub fn score_matrix<T: Real>(
    x: &DenseMatrix<T>,
    z_star: &DenseMatrix<T>,
    source: ScoreSource,
) -> Result<ScoreMatrix<T>> {
    if !x.is_square() || x.shape() != z_star.shape() {
        return Err(Error::input(format!(
            "score_matrix: X is {:?} but Z* is {:?}",
            x.shape(),
            z_star.shape()
        )));
    }
    let xz = x * z_star;
    let sm = &xz + xz.transpose();
    Ok(ScoreMatrix::from_symmetric(sm, source))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankDirection {
    /// Highest score first: likely missing links.
    MissingDesc,
    /// Lowest score first: likely spurious links.
    SpuriousAsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedLink<T> {
    pub edge: Edge,
    pub score: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedLinks<T> {
    pub direction: RankDirection,
    pub links: Vec<RankedLink<T>>,
}

impl<T: Real> RankedLinks<T> {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.links.iter().map(|l| l.edge)
    }

    /// 1-based rank of `edge`, if present.
    pub fn position(&self, edge: Edge) -> Option<usize> {
        self.links.iter().position(|l| l.edge == edge).map(|p| p + 1)
    }
}

fn rank<T: Real>(sm: &ScoreMatrix<T>, pairs: Vec<Edge>, direction: RankDirection) -> RankedLinks<T> {
    let mut links: Vec<RankedLink<T>> = pairs
        .into_iter()
        .map(|edge| RankedLink {
            edge,
            score: sm.score(edge),
        })
        .collect();
    links.sort_by(|a, b| {
        let by_score = a.score.partial_cmp(&b.score).unwrap_or(Ordering::Equal);
        let by_score = match direction {
            RankDirection::MissingDesc => by_score.reverse(),
            RankDirection::SpuriousAsc => by_score,
        };
        by_score.then(a.edge.cmp(&b.edge))
    });
    RankedLinks { direction, links }
}

fn check_dims<T: Real>(sm: &ScoreMatrix<T>, x: &DenseMatrix<T>) -> Result<()> {
    if x.nrows() != sm.dim() || x.ncols() != sm.dim() {
        return Err(Error::input("score matrix and adjacency differ in dimension"));
    }
    Ok(())
}

fn pairs_where<T: Real>(x: &DenseMatrix<T>, observed: bool) -> Vec<Edge> {
    let n = x.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (x[(i, j)] != T::zero()) == observed {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every unobserved pair `i < j`, highest score first. Ties fall back to
/// lexicographic pair order.
pub fn rank_missing<T: Real>(sm: &ScoreMatrix<T>, x: &DenseMatrix<T>) -> Result<RankedLinks<T>> {
    check_dims(sm, x)?;
    Ok(rank(sm, pairs_where(x, false), RankDirection::MissingDesc))
}

/// Every observed pair, lowest score first.
pub fn rank_spurious<T: Real>(sm: &ScoreMatrix<T>, x: &DenseMatrix<T>) -> Result<RankedLinks<T>> {
    check_dims(sm, x)?;
    Ok(rank(sm, pairs_where(x, true), RankDirection::SpuriousAsc))
}
