//! Brute-force reference solvers. Each refuses instances above its cap
//! instead of sampling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, TourSolution};

pub const DEFAULT_TOUR_CAP: u128 = 1_000_000;
pub const UBQP_MAX: usize = 20;
pub const PARTITION_MAX: usize = 24;
pub const TSP_MAX: usize = 10;

/// Exact optimum by enumerating the instance's family, refusing more than
/// [`DEFAULT_TOUR_CAP`] tours. Ties keep the first tour in canonical order.
pub fn oracle_tour(inst: &Instance) -> Result<TourSolution> {
    oracle_tour_capped(inst, DEFAULT_TOUR_CAP)
}

pub fn oracle_tour_capped(inst: &Instance, cap: u128) -> Result<TourSolution> {
    let count = inst.count()?;
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut best: Option<TourSolution> = None;
    for tour in inst.tours()? {
        let value = inst.eval(&tour)?;
        if best.as_ref().map_or(true, |b| value < b.value) {
            best = Some(TourSolution { value, tour });
        }
    }
    best.ok_or_else(|| Error::Invariant("family enumerated no tours".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UbqpSolution {
    pub value: i64,
    pub x: Vec<bool>,
}

/// `min x^T Q x` over `{0,1}^n`; ties keep the smallest `x` read as a
/// binary number with `x_0` lowest.
pub fn oracle_ubqp(q: &[Vec<i64>]) -> Result<UbqpSolution> {
    let n = q.len();
    if n > UBQP_MAX {
        return Err(Error::CapExceeded { count: 1u128 << n.min(127), cap: 1 << UBQP_MAX });
    }
    if q.iter().any(|row| row.len() != n) {
        return Err(Error::ModelMismatch("Q must be square".into()));
    }
    let mut best = (i64::MAX, 0u32);
    for mask in 0u32..(1 << n) {
        let on: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let value: i64 = on.iter().flat_map(|&i| on.iter().map(move |&j| (i, j))).map(|(i, j)| q[i][j]).sum();
        if value < best.0 {
            best = (value, mask);
        }
    }
    Ok(UbqpSolution { value: best.0, x: (0..n).map(|i| best.1 >> i & 1 == 1).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub exists: bool,
    /// Index sets of equal sum.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Whether `alpha` splits into two parts of equal sum. The first witness
/// found puts the smallest qualifying bitmask into the first part.
pub fn oracle_partition(alpha: &[i64]) -> Result<PartitionResult> {
    let n = alpha.len();
    if n > PARTITION_MAX {
        return Err(Error::CapExceeded { count: 1u128 << n.min(127), cap: 1 << PARTITION_MAX });
    }
    let total: i64 = alpha.iter().sum();
    if total % 2 == 0 {
        for mask in 0u32..(1 << n) {
            let sum: i64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| alpha[i]).sum();
            if 2 * sum == total {
                let (a, b) = (0..n).partition(|&i| mask >> i & 1 == 1);
                return Ok(PartitionResult { exists: true, witness: Some((a, b)) });
            }
        }
    }
    Ok(PartitionResult { exists: false, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TspSolution {
    pub value: i64,
    /// Starts at city 0.
    pub order: Vec<usize>,
}

fn permute(k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == cur.len() {
        f(cur);
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(k + 1, cur, f);
        cur.swap(k, i);
    }
}

/// Shortest Hamiltonian cycle of the complete graph with costs `c`.
pub fn oracle_tsp(c: &[Vec<i64>]) -> Result<TspSolution> {
    let n = c.len();
    if n > TSP_MAX {
        return Err(Error::CapExceeded { count: (1..n as u128).product(), cap: (1..TSP_MAX as u128).product() });
    }
    if c.iter().any(|row| row.len() != n) {
        return Err(Error::ModelMismatch("cost matrix must be square".into()));
    }
    if n == 0 {
        return Ok(TspSolution { value: 0, order: Vec::new() });
    }
    let mut best: Option<TspSolution> = None;
    let mut cur: Vec<usize> = (0..n).collect();
    permute(1, &mut cur, &mut |order| {
        let value: i64 = (0..n).map(|i| c[order[i]][order[(i + 1) % n]]).sum();
        let better = match &best {
            None => true,
            Some(b) => (value, order) < (b.value, b.order.as_slice()),
        };
        if better {
            best = Some(TspSolution { value, order: order.to_vec() });
        }
    });
    Ok(best.expect("n >= 1"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QapSolution {
    pub value: i64,
    /// Column matched to each row.
    pub matching: Vec<usize>,
}

/// `min_P Σ_h (Σ_{(i,j) ∈ P} alpha^h_ij)(Σ_{(i,j) ∈ P} beta^h_ij)` over
/// perfect matchings of `K_{n,n}`.
pub fn oracle_qap(alpha: &[Vec<Vec<i64>>], beta: &[Vec<Vec<i64>>]) -> Result<QapSolution> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(Error::ModelMismatch(format!("{} alpha factors, {} beta factors", alpha.len(), beta.len())));
    }
    let n = alpha[0].len();
    if alpha.iter().chain(beta).any(|f| f.len() != n || f.iter().any(|row| row.len() != n)) {
        return Err(Error::ModelMismatch("factors must be square and of one size".into()));
    }
    if n > TSP_MAX {
        return Err(Error::CapExceeded { count: (1..=n as u128).product(), cap: (1..=TSP_MAX as u128).product() });
    }
    let mut best: Option<QapSolution> = None;
    let mut cur: Vec<usize> = (0..n).collect();
    permute(0, &mut cur, &mut |perm| {
        let value: i64 = alpha
            .iter()
            .zip(beta)
            .map(|(a, b)| {
                let sa: i64 = (0..n).map(|i| a[i][perm[i]]).sum();
                let sb: i64 = (0..n).map(|i| b[i][perm[i]]).sum();
                sa * sb
            })
            .sum();
        let better = match &best {
            None => true,
            Some(b) => (value, perm) < (b.value, b.matching.as_slice()),
        };
        if better {
            best = Some(QapSolution { value, matching: perm.to_vec() });
        }
    });
    Ok(best.expect("at least the empty matching"))
}
