//! Dense linear algebra over a [`Field`], on raw element codes.

use crate::error::{Error, Result};
use crate::finfield::Field;

pub type Matrix = Vec<Vec<u32>>;

/// Incremental row echelon basis; rows are kept with a leading 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<u32>,
    pivots: Vec<usize>,
    scratch: Vec<u32>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::with_capacity(ncols * ncols),
            pivots: Vec::with_capacity(ncols),
            scratch: vec![0; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn clear(&mut self) {
        self.rows.clear();
        self.pivots.clear();
    }

    fn reduce_into_scratch(&mut self, f: &Field, v: &[u32]) {
        let n = self.ncols;
        self.scratch.copy_from_slice(&v[..n]);
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = self.scratch[pc];
            if c == 0 {
                continue;
            }
            let row = &self.rows[k * n..(k + 1) * n];
            let nc = f.neg(c);
            for j in pc..n {
                if row[j] != 0 {
                    self.scratch[j] = f.add(self.scratch[j], f.mul(nc, row[j]));
                }
            }
        }
    }

    /// True iff v lies in the current row space.
    pub fn contains(&mut self, f: &Field, v: &[u32]) -> bool {
        self.reduce_into_scratch(f, v);
        self.scratch.iter().all(|&x| x == 0)
    }

    /// Adds v; returns true iff the rank grew.
    pub fn insert(&mut self, f: &Field, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce_into_scratch(f, v);
        let Some(pc) = self.scratch.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv_nz(self.scratch[pc]);
        for x in self.scratch[pc..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.extend_from_slice(&self.scratch);
        self.pivots.push(pc);
        true
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(f: &Field, m: &[Vec<u32>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv_nz(a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..nrows {
            if i != r && a[i][c] != 0 {
                let t = f.neg(a[i][c]);
                for j in c..ncols {
                    let v = f.mul(t, a[r][j]);
                    a[i][j] = f.add(a[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(f: &Field, m: &[Vec<u32>]) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(ncols);
    for row in m {
        e.insert(f, row);
    }
    e.rank()
}

/// Basis of {x : m·x = 0}, in RREF.
pub fn nullspace(f: &Field, m: &[Vec<u32>], ncols: usize) -> Matrix {
    let (r, piv) = rref(f, m);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u32; ncols];
        v[fc] = 1;
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = f.neg(r[i][fc]);
        }
        basis.push(v);
    }
    rref(f, &basis).0
}

pub fn mat_mul(f: &Field, a: &[Vec<u32>], b: &[Vec<u32>]) -> Matrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

/// m·v for a column vector v.
pub fn mat_vec(f: &Field, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

#[inline]
pub fn dot(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    let mut s = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = f.add(s, f.mul(x, y));
        }
    }
    s
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect()
}

pub fn transpose(m: &[Vec<u32>]) -> Matrix {
    let n = m.first().map_or(0, |r| r.len());
    (0..n).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn inverse(f: &Field, m: &[Vec<u32>]) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(
            "inverse of a non-square matrix".into(),
        ));
    }
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    let (red, piv) = rref(f, &aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::Degenerate("singular matrix".into()));
    }
    Ok(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scale v so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize(f: &Field, v: &mut [u32]) -> bool {
    let Some(i) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    if v[i] != 1 {
        let inv = f.inv_nz(v[i]);
        for x in v[i..].iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::field_create;
    use proptest::prelude::*;

    #[test]
    fn inverse_round_trip() {
        let f = field_create(3, 2).unwrap();
        let m = vec![vec![1, 2, 0], vec![0, 1, 5], vec![0, 0, 7]];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        let sing = vec![vec![1, 2], vec![2, f.mul(2, 2)]];
        assert!(inverse(&f, &sing).is_err());
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let f = field_create(2, 2).unwrap();
        let m = vec![vec![1, 2, 3, 0, 1], vec![0, 1, 1, 1, 0]];
        let ns = nullspace(&f, &m, 5);
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!(mat_vec(&f, &m, v).iter().all(|&x| x == 0));
        }
    }

    proptest! {
        #[test]
        fn prop_rank_matches_rref(rows in proptest::collection::vec(proptest::collection::vec(0u32..9, 5), 0..7)) {
            let f = field_create(3, 2).unwrap();
            let r = rank(&f, &rows);
            let (red, piv) = rref(&f, &rows);
            prop_assert_eq!(r, red.len());
            prop_assert_eq!(r, piv.len());
            let ns = nullspace(&f, &rows, 5);
            prop_assert_eq!(ns.len() + r, 5);
        }
    }
}
