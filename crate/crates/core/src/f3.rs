//! Small dense linear algebra over GF(3), used for the 3-primary checks
//! (mod-3 reduction, mod-3 Bockstein, first Steenrod power).

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F3Map {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<u8>, // values in {0, 1, 2}
}

impl std::fmt::Debug for F3Map {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F3Map {}x{} {:?}", self.rows, self.cols, self.entries)
    }
}

impl F3Map {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F3Map { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v % 3);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v % 3;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| *e == 0)
    }

    pub fn apply(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u32;
                for c in 0..self.cols {
                    acc += (self.get(r, c) as u32) * (x[c] as u32);
                }
                (acc % 3) as u8
            })
            .collect()
    }

    pub fn compose(&self, first: &F3Map) -> F3Map {
        assert_eq!(self.cols, first.rows);
        let mut out = F3Map::zero(self.rows, first.cols);
        for c in 0..first.cols {
            let col: Vec<u8> = (0..first.rows).map(|r| first.get(r, c)).collect();
            let img = self.apply(&col);
            for (r, v) in img.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        out
    }

    /// Gaussian elimination; returns (rank, kernel basis over columns).
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<u8>>) {
        // augment with identity tracking of column combinations
        let mut cols: Vec<Vec<u8>> = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).collect())
            .collect();
        let mut track: Vec<Vec<u8>> = (0..self.cols)
            .map(|c| {
                let mut t = vec![0u8; self.cols];
                t[c] = 1;
                t
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for j in 0..cols.len() {
            loop {
                let Some(lead) = cols[j].iter().position(|&v| v != 0) else { break };
                if let Some(&(_, pj)) = pivots.iter().find(|&&(pr, _)| pr == lead) {
                    // scale so the leading entries cancel: cols[j] -= f * cols[pj]
                    let a = cols[j][lead] as u32;
                    let b = cols[pj][lead] as u32;
                    // f = a * b^{-1} mod 3 (b in {1,2}; inverse of 2 is 2)
                    let binv = if b == 1 { 1 } else { 2 };
                    let f = (a * binv) % 3;
                    for r in 0..self.rows {
                        let v = (cols[j][r] as u32 + (3 - f) * cols[pj][r] as u32) % 3;
                        cols[j][r] = v as u8;
                    }
                    for r in 0..self.cols {
                        let v = (track[j][r] as u32 + (3 - f) * track[pj][r] as u32) % 3;
                        track[j][r] = v as u8;
                    }
                } else {
                    pivots.push((lead, j));
                    break;
                }
            }
        }
        let kernel: Vec<Vec<u8>> = (0..cols.len())
            .filter(|&j| cols[j].iter().all(|&v| v == 0))
            .map(|j| track[j].clone())
            .collect();
        (pivots.len(), kernel)
    }

    /// One solution of self(x) = b over GF(3), if any.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        // solve by elimination on the augmented row system
        let mut aug: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<u8> = (0..self.cols).map(|c| self.get(r, c)).collect();
                row.push(b[r] % 3);
                row
            })
            .collect();
        let n = self.cols;
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for col in 0..n {
            let Some(p) = (rank..aug.len()).find(|&r| aug[r][col] != 0) else { continue };
            aug.swap(rank, p);
            let inv = if aug[rank][col] == 1 { 1u32 } else { 2u32 };
            for v in aug[rank].iter_mut() {
                *v = ((*v as u32 * inv) % 3) as u8;
            }
            for r in 0..aug.len() {
                if r != rank && aug[r][col] != 0 {
                    let f = aug[r][col] as u32;
                    for c in 0..=n {
                        let v = (aug[r][c] as u32 + (3 - f) * aug[rank][c] as u32) % 3;
                        aug[r][c] = v as u8;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        for r in rank..aug.len() {
            if aug[r][n] != 0 {
                return None;
            }
        }
        let mut x = vec![0u8; n];
        for (i, &c) in pivot_cols.iter().enumerate() {
            x[c] = aug[i][n];
        }
        Some(x)
    }

    /// Span of the image restricted to the given domain vectors is zero.
    pub fn vanishes_on(&self, vectors: &[Vec<u8>]) -> bool {
        vectors.iter().all(|v| self.apply(v).iter().all(|&e| e == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_mod3() {
        // second column is twice the first mod 3, third is zero
        let m = F3Map::from_rows(&[vec![1, 2, 0], vec![2, 1, 0]]);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.apply(k).iter().all(|&v| v == 0));
        }

        let m = F3Map::from_rows(&[vec![1, 2, 0], vec![0, 1, 0]]);
        let (rank, ker) = m.rank_kernel();
        assert_eq!(rank, 2);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn solve_mod3() {
        let m = F3Map::from_rows(&[vec![1, 1], vec![0, 2]]);
        let x = m.solve(&[0, 1]).unwrap();
        assert_eq!(m.apply(&x), vec![0, 1]);
        let m = F3Map::from_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[1, 0]).is_none());
    }
}
