use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{decompose, RatFunc};
use crate::error::{Error, Result};
use crate::gf::Poly;

/// Exponent vectors of a family of rational functions, one row per element,
/// one column per irreducible occurring in some row (canonical order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub columns: Vec<Poly>,
    pub rows: Vec<Vec<i64>>,
}

pub fn exponent_matrix(elems: &[RatFunc], seed: u64) -> Result<ExponentMatrix> {
    let decs = elems
        .iter()
        .map(|q| {
            if q.is_zero() {
                Err(Error::ZeroInput("multiplicative rank"))
            } else {
                decompose(q, seed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<Poly> = decs
        .iter()
        .flat_map(|d| d.factors().iter().map(|(f, _)| f.clone()))
        .collect();
    columns.sort();
    columns.dedup();
    let rows = decs
        .iter()
        .map(|d| columns.iter().map(|c| d.exponent_of(c)).collect())
        .collect();
    Ok(ExponentMatrix { columns, rows })
}

/// Rank over `Z` (equivalently `Q`) by fraction-free Bareiss elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for r in m.iter_mut() {
        r.resize(ncols, BigInt::zero());
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..ncols {
                let v = &prow[col] * &row[j] - &row[col] * &prow[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
        rank += 1;
    }
    rank
}

/// Rank of the subgroup of `F_q(x)^×` generated by `elems`; constants are
/// torsion and contribute nothing.
pub fn multiplicative_rank(elems: &[RatFunc], seed: u64) -> Result<usize> {
    Ok(integer_rank(&exponent_matrix(elems, seed)?.rows))
}
