use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use super::poly::Poly;
use super::rat::Rat;

/// Jordan blocks for one rational eigenvalue, sizes descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenBlocks {
    pub eigenvalue: Rat,
    pub block_sizes: Vec<usize>,
}

/// A factor of the characteristic polynomial with no rational roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualFactor {
    /// Monic coefficients, ascending degree.
    pub coefficients: Vec<Rat>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanReport {
    #[serde(rename = "jordan")]
    pub blocks: Vec<EigenBlocks>,
    pub residual_factors: Vec<ResidualFactor>,
}

impl JordanReport {
    /// Generalized eigenvalues with algebraic multiplicity, ascending.
    pub fn eigenvalues(&self) -> Vec<Rat> {
        self.blocks
            .iter()
            .flat_map(|b| {
                let n: usize = b.block_sizes.iter().sum();
                std::iter::repeat(b.eigenvalue.clone()).take(n)
            })
            .collect()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|b| b.block_sizes.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Total dimension accounted for by blocks and residual factors.
    pub fn dimension(&self) -> usize {
        let blocks: usize = self.blocks.iter().flat_map(|b| &b.block_sizes).sum();
        let residual: usize = self
            .residual_factors
            .iter()
            .map(|f| (f.coefficients.len() - 1) * f.multiplicity)
            .sum();
        blocks + residual
    }

    pub fn is_diagonalizable_over_q(&self) -> bool {
        self.residual_factors.is_empty() && self.largest_block() <= 1
    }
}

/// Jordan structure over the rationals. Block counts come from ranks of powers:
/// the number of blocks of size at least `k` is
/// `rank((m − λ)^(k−1)) − rank((m − λ)^k)`.
pub fn jordan_structure(m: &RatMatrix) -> JordanReport {
    assert!(m.is_square(), "Jordan structure of a non-square matrix");
    let n = m.rows();
    let cp = Poly::charpoly(m);
    let mut rest = cp.clone();
    let mut blocks = Vec::new();
    for lambda in cp.rational_roots() {
        let lin = Poly::linear(&lambda);
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        let shifted = m.shift(&lambda);
        let mut ranks = vec![n];
        let mut power = RatMatrix::identity(n);
        while *ranks.last().unwrap() > n - mult {
            power = &power * &shifted;
            ranks.push(power.rank());
        }
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        let mut sizes = Vec::new();
        for k in (1..=at_least.len()).rev() {
            let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            sizes.extend(std::iter::repeat(k).take(exactly));
        }
        blocks.push(EigenBlocks {
            eigenvalue: lambda,
            block_sizes: sizes,
        });
    }
    let residual_factors = rest
        .squarefree()
        .into_iter()
        .map(|(f, k)| ResidualFactor {
            coefficients: f.coeffs().to_vec(),
            multiplicity: k,
        })
        .collect();
    let report = JordanReport {
        blocks,
        residual_factors,
    };
    debug_assert_eq!(report.dimension(), n);
    report
}
