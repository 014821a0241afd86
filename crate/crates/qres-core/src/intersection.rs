//! Intersection theory on the dual graph.
//!
//! The exceptional pairing matrix A has the stored self-intersections on the
//! diagonal and, off the diagonal, one summand 1/d per shared double point
//! of index d. Its negated inverse B is the curvette pairing: a curvette
//! through E_i meets one through E_j with multiplicity b_ij downstairs, and
//! every local intersection number of resolved branches is an entry of B
//! divided by the indices of the attachment points.
//!
//! All elimination is exact. Definiteness tests run fraction-free on an
//! integer rescaling of the matrix; inversion does a fraction-free forward
//! pass followed by rational back-substitution.

use crate::arith::{qq_mat_serde, QQ};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionMatrix {
    /// Exceptional vertex ids, in row order.
    pub ids: Vec<usize>,
    #[serde(rename = "A", with = "qq_mat_serde")]
    pub a: Vec<Vec<QQ>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvetteMatrix {
    pub ids: Vec<usize>,
    #[serde(rename = "B", with = "qq_mat_serde")]
    pub b: Vec<Vec<QQ>>,
}

/// Where a strict transform meets the exceptional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchAttachment {
    /// 1-based input branch index.
    pub branch: usize,
    /// Vertex id of the exceptional divisor the arrow meets.
    pub k: usize,
    /// Index of the meeting point.
    pub d: i64,
}

pub fn intersection_matrix(graph: &DualGraph) -> Result<IntersectionMatrix> {
    graph.validate()?;
    let ids = graph.exceptional_ids();
    let pos = |id: usize| ids.iter().position(|&v| v == id);
    let n = ids.len();
    let mut a = vec![vec![QQ::zero(); n]; n];
    for (i, &id) in ids.iter().enumerate() {
        let v = graph.vertex(id).expect("id from the graph");
        a[i][i] = v
            .self_int
            .clone()
            .ok_or_else(|| Error::MalformedGraph(format!("vertex {id} lacks self_int")))?;
    }
    for e in &graph.edges {
        if let (Some(i), Some(j)) = (pos(e.v1), pos(e.v2)) {
            let w = QQ::new(BigInt::one(), BigInt::from(e.index()));
            a[i][j] += &w;
            a[j][i] += &w;
        }
    }
    Ok(IntersectionMatrix { ids, a })
}

pub fn curvette_matrix(a: &IntersectionMatrix) -> Result<CurvetteMatrix> {
    let inv = invert(&a.a)?;
    let b = inv
        .into_iter()
        .map(|row| row.into_iter().map(|x| -x).collect())
        .collect();
    Ok(CurvetteMatrix {
        ids: a.ids.clone(),
        b,
    })
}

/// Attachment data of one input branch: the divisor its arrow meets and the
/// index of the meeting point.
pub fn attachment(graph: &DualGraph, branch: usize) -> Result<BranchAttachment> {
    let (_, edge) = graph.arrow_for_branch(branch)?;
    Ok(BranchAttachment {
        branch,
        k: edge.v1,
        d: edge.index(),
    })
}

/// (C_i . C_j) at the resolved point: b_{k_i k_j} / (d(C_i) d(C_j)).
pub fn local_intersection(graph: &DualGraph, i: usize, j: usize) -> Result<QQ> {
    if i == j {
        return Err(Error::SameBranch(format!("branch {i} paired with itself")));
    }
    let (ai, _) = graph.arrow_for_branch(i)?;
    let (aj, _) = graph.arrow_for_branch(j)?;
    if ai.id == aj.id {
        return Err(Error::SameBranch(format!(
            "branches {i} and {j} are the same resolved branch"
        )));
    }
    let at_i = attachment(graph, i)?;
    let at_j = attachment(graph, j)?;
    let b = curvette_matrix(&intersection_matrix(graph)?)?;
    let pi = position(&b.ids, at_i.k)?;
    let pj = position(&b.ids, at_j.k)?;
    Ok(&b.b[pi][pj] / QQ::from(BigInt::from(at_i.d * at_j.d)))
}

/// Coefficients c_j in the pullback of branch i: row k_i of B over d(C_i).
pub fn pullback_coefficients(graph: &DualGraph, i: usize) -> Result<Vec<QQ>> {
    let at = attachment(graph, i)?;
    let b = curvette_matrix(&intersection_matrix(graph)?)?;
    let p = position(&b.ids, at.k)?;
    let d = QQ::from(BigInt::from(at.d));
    Ok(b.b[p].iter().map(|x| x / &d).collect())
}

/// Exact definiteness test: leading principal minors alternate in sign
/// starting negative. A zero minor fails.
pub fn check_negative_definite(a: &IntersectionMatrix) -> bool {
    let n = a.ids.len();
    if a.a.len() != n || a.a.iter().any(|row| row.len() != n) {
        return false;
    }
    if n == 0 {
        return true;
    }
    // Clear denominators; this rescales minor_k by a positive k-th power.
    let mut den = BigInt::one();
    for row in &a.a {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let mut m: Vec<Vec<BigInt>> =
        a.a.iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * QQ::from(den.clone())).to_integer())
                    .collect()
            })
            .collect();
    // Bareiss: after step k the pivot equals the (k+1)-st leading minor.
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            return false;
        }
        let want_negative = k % 2 == 0;
        if pivot.is_negative() != want_negative {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &pivot - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = pivot;
    }
    true
}

fn position(ids: &[usize], id: usize) -> Result<usize> {
    ids.iter()
        .position(|&v| v == id)
        .ok_or_else(|| Error::MalformedGraph(format!("vertex {id} is not exceptional")))
}

/// Exact inverse. Fraction-free forward elimination on [M | I] with the
/// matrix rescaled to integers, then rational back-substitution.
fn invert(a: &[Vec<QQ>]) -> Result<Vec<Vec<QQ>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::MalformedGraph("ragged matrix".into()));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let mut den = BigInt::one();
    for row in a {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let width = 2 * n;
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = a[i]
                .iter()
                .map(|x| (x * QQ::from(den.clone())).to_integer())
                .collect();
            row.resize(width, BigInt::zero());
            row[n + i] = BigInt::one();
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        if w[k][k].is_zero() {
            // Entries below are minors over fixed leading rows, so a swap
            // keeps every later exact division exact.
            let swap = (k + 1..n).find(|&r| !w[r][k].is_zero());
            match swap {
                Some(r) => w.swap(k, r),
                None => return Err(Error::SingularMatrix(format!("rank < {n}"))),
            }
        }
        let pivot = w[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..width {
                let t = &w[i][j] * &pivot - &w[i][k] * &w[k][j];
                debug_assert!(t.is_multiple_of(&prev));
                w[i][j] = t / &prev;
            }
            w[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    // Back-substitute U X = V over the rationals; undo the rescaling.
    let mut out = vec![vec![QQ::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut s = QQ::from(w[i][n + col].clone());
            for j in i + 1..n {
                s -= QQ::from(w[i][j].clone()) * &out[j][col];
            }
            out[i][col] = s / QQ::from(w[i][i].clone());
        }
    }
    for row in &mut out {
        for x in row.iter_mut() {
            *x *= QQ::from(den.clone());
        }
    }
    Ok(out)
}
