//! Dense nonnegative integer matrices with a cubic product and a Strassen path.

use crate::error::{KcutError, Result};

/// Dimension at or above which [`matmul`] switches to Strassen.
pub const DEFAULT_STRASSEN_THRESHOLD: usize = 256;

/// Below this size Strassen recursion falls back to the cubic kernel.
const STRASSEN_LEAF: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u64>) -> Result<IntMatrix> {
        if data.len() != rows * cols {
            return Err(KcutError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<IntMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(KcutError::Dimension("ragged rows".into()));
        }
        IntMatrix::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn max_entry(&self) -> u64 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

/// Exact product `a * b`, using Strassen once every dimension reaches
/// [`DEFAULT_STRASSEN_THRESHOLD`].
pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    matmul_with_threshold(a, b, DEFAULT_STRASSEN_THRESHOLD)
}

/// Exact product with an explicit Strassen threshold; `usize::MAX` forces the
/// cubic path. Both paths return identical matrices.
pub fn matmul_with_threshold(a: &IntMatrix, b: &IntMatrix, threshold: usize) -> Result<IntMatrix> {
    if a.cols != b.rows {
        return Err(KcutError::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    // every entry of the product is bounded by this, and so is every
    // intermediate Strassen combination once reduced mod 2^64
    let bound = (a.max_entry() as u128) * (b.max_entry() as u128) * (a.cols as u128);
    if bound > u64::MAX as u128 {
        return Err(KcutError::Overflow("matrix product"));
    }
    let smallest = a.rows.min(a.cols).min(b.cols);
    if smallest >= threshold {
        Ok(strassen(a, b))
    } else {
        Ok(cubic(a, b))
    }
}

fn cubic(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut c = IntMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let out = &mut c.data[i * b.cols..(i + 1) * b.cols];
        for (p, &x) in a.row(i).iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in out.iter_mut().zip(b.row(p)) {
                *o = o.wrapping_add(x.wrapping_mul(y));
            }
        }
    }
    c
}

fn strassen(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let size = a.rows.max(a.cols).max(b.cols).next_power_of_two();
    let pa = pad(a, size);
    let pb = pad(b, size);
    let pc = strassen_square(&pa, &pb, size);
    let mut c = IntMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        c.data[i * b.cols..(i + 1) * b.cols].copy_from_slice(&pc[i * size..i * size + b.cols]);
    }
    c
}

fn pad(m: &IntMatrix, size: usize) -> Vec<u64> {
    let mut out = vec![0; size * size];
    for i in 0..m.rows {
        out[i * size..i * size + m.cols].copy_from_slice(m.row(i));
    }
    out
}

// Square power-of-two Strassen over Z/2^64; exact because the true product
// fits in u64 (checked by the caller).
fn strassen_square(a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    if n <= STRASSEN_LEAF {
        let am = IntMatrix::from_vec(n, n, a.to_vec()).expect("square block");
        let bm = IntMatrix::from_vec(n, n, b.to_vec()).expect("square block");
        return cubic(&am, &bm).data;
    }
    let h = n / 2;
    let quad = |m: &[u64], qi: usize, qj: usize| -> Vec<u64> {
        let mut q = Vec::with_capacity(h * h);
        for i in 0..h {
            let start = (qi * h + i) * n + qj * h;
            q.extend_from_slice(&m[start..start + h]);
        }
        q
    };
    let add = |x: &[u64], y: &[u64]| -> Vec<u64> {
        x.iter().zip(y).map(|(p, q)| p.wrapping_add(*q)).collect()
    };
    let sub = |x: &[u64], y: &[u64]| -> Vec<u64> {
        x.iter().zip(y).map(|(p, q)| p.wrapping_sub(*q)).collect()
    };
    let (a11, a12, a21, a22) = (quad(a, 0, 0), quad(a, 0, 1), quad(a, 1, 0), quad(a, 1, 1));
    let (b11, b12, b21, b22) = (quad(b, 0, 0), quad(b, 0, 1), quad(b, 1, 0), quad(b, 1, 1));

    let m1 = strassen_square(&add(&a11, &a22), &add(&b11, &b22), h);
    let m2 = strassen_square(&add(&a21, &a22), &b11, h);
    let m3 = strassen_square(&a11, &sub(&b12, &b22), h);
    let m4 = strassen_square(&a22, &sub(&b21, &b11), h);
    let m5 = strassen_square(&add(&a11, &a12), &b22, h);
    let m6 = strassen_square(&sub(&a21, &a11), &add(&b11, &b12), h);
    let m7 = strassen_square(&sub(&a12, &a22), &add(&b21, &b22), h);

    let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
    let c12 = add(&m3, &m5);
    let c21 = add(&m2, &m4);
    let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);

    let mut c = vec![0; n * n];
    for i in 0..h {
        c[i * n..i * n + h].copy_from_slice(&c11[i * h..(i + 1) * h]);
        c[i * n + h..(i + 1) * n].copy_from_slice(&c12[i * h..(i + 1) * h]);
        c[(h + i) * n..(h + i) * n + h].copy_from_slice(&c21[i * h..(i + 1) * h]);
        c[(h + i) * n + h..(h + i + 1) * n].copy_from_slice(&c22[i * h..(i + 1) * h]);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, max: u64, rng: &mut ChaCha8Rng) -> IntMatrix {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..=max)).collect();
        IntMatrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random(5, 5, 9, &mut rng);
        assert_eq!(matmul(&IntMatrix::identity(5), &m).unwrap(), m);
        assert_eq!(matmul(&m, &IntMatrix::identity(5)).unwrap(), m);
    }

    #[test]
    fn two_by_two() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let c = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(matmul(&a, &b).unwrap(), c);
        assert_eq!(matmul_with_threshold(&a, &b, 1).unwrap(), c);
    }

    #[test]
    fn strassen_matches_cubic_on_binary_50() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let a = random(50, 50, 1, &mut rng);
        let b = random(50, 50, 1, &mut rng);
        assert_eq!(
            matmul_with_threshold(&a, &b, 1).unwrap(),
            matmul_with_threshold(&a, &b, usize::MAX).unwrap()
        );
    }

    #[test]
    fn strassen_handles_rectangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(37, 70, 1000, &mut rng);
        let b = random(70, 45, 1000, &mut rng);
        assert_eq!(
            matmul_with_threshold(&a, &b, 2).unwrap(),
            matmul_with_threshold(&a, &b, usize::MAX).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::zeros(2, 3);
        assert!(matches!(matmul(&a, &a), Err(KcutError::Dimension(_))));
        assert!(IntMatrix::from_rows(&[vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn overflow_is_refused() {
        let a = IntMatrix::from_rows(&[vec![u64::MAX, 1]]).unwrap();
        let b = IntMatrix::from_rows(&[vec![2], vec![1]]).unwrap();
        assert_eq!(matmul(&a, &b), Err(KcutError::Overflow("matrix product")));
    }
}
