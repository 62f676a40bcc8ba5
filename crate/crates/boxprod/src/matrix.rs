//! Adjacency matrices and Kronecker sums.
//!
//! Graph products and Kronecker sums agree once the loop convention is fixed:
//! a positive diagonal entry means a loop. Diagonal entries of a Kronecker
//! sum may exceed one when several constituents carry loops; reconstruction
//! back to a graph clamps positives to a single loop.

use crate::{Error, Graph, Result};

/// A dense non-negative integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl IntMatrix {
    /// An all-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[&[u32]]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] = value;
    }

    /// Entrywise sum; panics on shape mismatch.
    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Copy with every positive diagonal entry clamped to 1.
    pub fn clamp_diagonal(&self) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            if out.get(i, i) > 0 {
                out.set(i, i, 1);
            }
        }
        out
    }
}

/// The adjacency matrix of `g`: symmetric, off-diagonal 1 for each 2-edge,
/// diagonal 1 for a loop.
pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let mut m = IntMatrix::zero(n, n);
    for v in 0..n {
        if g.has_loop(v) {
            m.set(v, v, 1);
        }
        for &w in g.neighbors(v) {
            m.set(v, w, 1);
        }
    }
    m
}

/// The Kronecker product `a ⊗ b`.
pub fn kronecker_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zero(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let factor = a.get(i, j);
            if factor == 0 {
                continue;
            }
            for p in 0..b.rows() {
                for q in 0..b.cols() {
                    out.set(i * b.rows() + p, j * b.cols() + q, factor * b.get(p, q));
                }
            }
        }
    }
    out
}

/// The Kronecker sum of square matrices: `I_n ⊗ b + a ⊗ I_m`.
pub fn kronecker_sum(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NonSquareInput {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !b.is_square() {
        return Err(Error::NonSquareInput {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let left = kronecker_product(&IntMatrix::identity(a.rows()), b);
    let right = kronecker_product(a, &IntMatrix::identity(b.rows()));
    Ok(left.add(&right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartesian_product;

    #[test]
    fn adjacency_basics() {
        let k1s = Graph::looped_vertex();
        assert_eq!(adjacency_matrix(&k1s), IntMatrix::from_rows(&[&[1]]));

        let k2 = Graph::complete(2);
        assert_eq!(adjacency_matrix(&k2), IntMatrix::from_rows(&[&[0, 1], &[1, 0]]));

        let k2l = Graph::new(2, &[(0, 1)], &[0]).unwrap();
        assert_eq!(
            adjacency_matrix(&k2l),
            IntMatrix::from_rows(&[&[1, 1], &[1, 0]])
        );
    }

    #[test]
    fn kronecker_sum_small_cases() {
        let a = IntMatrix::from_rows(&[&[0]]);
        let b = IntMatrix::from_rows(&[&[0]]);
        assert_eq!(kronecker_sum(&a, &b).unwrap(), IntMatrix::from_rows(&[&[0]]));

        let a = IntMatrix::from_rows(&[&[1]]);
        let b = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            kronecker_sum(&a, &b).unwrap(),
            IntMatrix::from_rows(&[&[1, 1], &[1, 1]])
        );
    }

    #[test]
    fn non_square_rejected() {
        let a = IntMatrix::zero(2, 3);
        let b = IntMatrix::identity(2);
        assert!(matches!(
            kronecker_sum(&a, &b),
            Err(Error::NonSquareInput { rows: 2, cols: 3 })
        ));
        assert!(matches!(
            kronecker_sum(&b, &a),
            Err(Error::NonSquareInput { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn product_matrix_is_kronecker_sum_after_clamping() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], &[0, 2]).unwrap();
        let h = Graph::new(2, &[(0, 1)], &[1]).unwrap();
        let (p, _) = cartesian_product(&[g.clone(), h.clone()]).unwrap();
        let ks = kronecker_sum(&adjacency_matrix(&g), &adjacency_matrix(&h)).unwrap();
        assert_eq!(adjacency_matrix(&p), ks.clamp_diagonal());
        // where both constituents are looped the raw sum exceeds 1
        assert_eq!(ks.get(1, 1), 2); // vertex (0,1): loop on 0 in g and on 1 in h
    }
}
