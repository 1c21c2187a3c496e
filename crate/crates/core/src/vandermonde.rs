//! Vandermonde systems at the nodes `1, 2, …, n+1`, solved exactly.

use num::{One, Zero};

use crate::rational::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// The `(n+1)×(n+1)` matrix `L` with `L[j-1][i] = j^i`, which links the
/// pairings of `ψ_1 E, …, ψ_{n+1} E` to the vector `a_i = ∫ Â_{n-i} ch_i(E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeSystem {
    nodes: Vec<i64>,
    matrix: Matrix,
}

impl VandermondeSystem {
    pub fn new(n: usize) -> Self {
        let nodes: Vec<i64> = (1..=n as i64 + 1).collect();
        let matrix = nodes
            .iter()
            .map(|&j| (0..=n).map(|i| num::pow(rational::int(j), i)).collect())
            .collect();
        VandermondeSystem { nodes, matrix }
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[i64] {
        &self.nodes
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `∏_{i<j} (node_j - node_i)`.
    pub fn determinant(&self) -> Rational {
        let mut det = Rational::one();
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                det *= rational::int(b - a);
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.matrix, x)
    }

    /// The unique `a` with `L a = b`.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        solve(&self.matrix, b)
    }
}

/// System for the pairing argument at half-dimension `n`.
pub fn adams_integral_matrix(n: usize) -> VandermondeSystem {
    VandermondeSystem::new(n)
}

/// `det L = ∏_{1≤i<j≤n+1} (j - i)`.
pub fn vandermonde_det(n: usize) -> Rational {
    VandermondeSystem::new(n).determinant()
}

/// Weights `λ_1..λ_{r+1}` on the nodes `l = 1..r+1` with
/// `Σ_l λ_l l^{a'} = δ_{a', a}` for every `0 ≤ a' ≤ r`.
pub fn vandermonde_select(r: usize, a: usize) -> Vec<Rational> {
    assert!(a <= r, "selected exponent {a} exceeds {r}");
    let l = VandermondeSystem::new(r);
    let transpose = transpose(l.matrix());
    let mut rhs = vec![Rational::zero(); r + 1];
    rhs[a] = Rational::one();
    solve(&transpose, &rhs).expect("Vandermonde matrices at distinct nodes are invertible")
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

pub fn mat_vec(m: &Matrix, x: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant_by_elimination(m: &Matrix) -> Rational {
    let mut a = m.clone();
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact solve of a square system; `None` if singular.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let inv = Rational::one() / &a[col][col];
        for c in col..=n {
            a[col][c] *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_determinants() {
        assert_eq!(vandermonde_det(0), int(1));
        assert_eq!(vandermonde_det(1), int(1));
        assert_eq!(vandermonde_det(2), int(2));
        assert_eq!(vandermonde_det(3), int(12));
    }

    #[test]
    fn determinant_matches_elimination() {
        for n in 0..=8 {
            let l = VandermondeSystem::new(n);
            assert_eq!(determinant_by_elimination(l.matrix()), l.determinant(), "n = {n}");
        }
    }

    #[test]
    fn selections() {
        assert_eq!(vandermonde_select(0, 0), vec![int(1)]);
        assert_eq!(vandermonde_select(1, 1), vec![int(-1), int(1)]);
        assert_eq!(vandermonde_select(2, 1), vec![frac(-5, 2), int(4), frac(-3, 2)]);
    }

    #[test]
    fn matrix_layout() {
        let l = VandermondeSystem::new(2);
        assert_eq!(l.matrix()[2], vec![int(1), int(3), int(9)]);
        assert_eq!(l.nodes(), &[1, 2, 3]);
    }

    #[test]
    fn singular_systems_are_detected() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&m, &[int(1), int(0)]).is_none());
        assert_eq!(determinant_by_elimination(&m), int(0));
    }
}
