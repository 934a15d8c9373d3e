//! Dense integer matrices with exact arithmetic and Smith normal form.
//!
//! The convention throughout the crate: columns index domain generators,
//! rows index codomain generators, and composition `g∘f` is `g.mul(&f)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row in matrix literal");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    /// Build from column vectors (each of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hcat(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hcat");
        let mut out = Self::zero(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.at(r, c).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + q * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, dst) + q * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }
}

/// Result of `smith_normal_form`: `d = u * m * v` with `u`, `v` unimodular and
/// `d` diagonal with nonnegative entries satisfying d1 | d2 | ... .
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries, including zeros, up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.at(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|e| !e.is_zero()).count()
    }
}

/// Smith normal form over the integers.
///
/// Pivot selection is the minimum absolute value among remaining nonzero
/// entries, ties broken by lowest (row, col); this makes the output
/// reproducible bit for bit.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);

    let n = m.rows.min(m.cols);
    let mut k = 0usize;
    while k < n {
        let Some((pr, pc)) = min_abs_pivot(&d, k) else { break };
        d.swap_rows(k, pr);
        u.swap_rows(k, pr);
        d.swap_cols(k, pc);
        v.swap_cols(k, pc);

        // Euclidean reduction of row k and column k against the pivot.
        loop {
            let mut again = false;
            for r in (k + 1)..d.rows {
                if d.at(r, k).is_zero() {
                    continue;
                }
                let q = -(d.at(r, k) / d.at(k, k));
                d.add_row_multiple(r, k, &q);
                u.add_row_multiple(r, k, &q);
                if !d.at(r, k).is_zero() {
                    // remainder strictly smaller than pivot: swap it up and restart
                    d.swap_rows(k, r);
                    u.swap_rows(k, r);
                    again = true;
                }
            }
            for c in (k + 1)..d.cols {
                if d.at(k, c).is_zero() {
                    continue;
                }
                let q = -(d.at(k, c) / d.at(k, k));
                d.add_col_multiple(c, k, &q);
                v.add_col_multiple(c, k, &q);
                if !d.at(k, c).is_zero() {
                    d.swap_cols(k, c);
                    v.swap_cols(k, c);
                    again = true;
                }
            }
            if !again {
                break;
            }
        }

        // Pivot must divide every remaining entry; if not, fold the offending
        // row in and redo this position.
        let mut clean = true;
        'scan: for r in (k + 1)..d.rows {
            for c in (k + 1)..d.cols {
                if !(d.at(r, c) % d.at(k, k)).is_zero() {
                    d.add_row_multiple(k, r, &BigInt::one());
                    u.add_row_multiple(k, r, &BigInt::one());
                    clean = false;
                    break 'scan;
                }
            }
        }
        if clean {
            if d.at(k, k).is_negative() {
                d.negate_row(k);
                u.negate_row(k);
            }
            k += 1;
        }
    }

    SmithDecomposition { u, d, v }
}

fn min_abs_pivot(d: &IntegerMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in k..d.rows {
        for c in k..d.cols {
            let e = d.at(r, c);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// A basis of the integer kernel of `m` (columns are kernel vectors).
pub fn integer_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    // ker(m) = v * ker(d): the columns of v past the rank.
    let mut out = IntegerMatrix::zero(m.cols, m.cols - rank);
    for (j, c) in (rank..m.cols).enumerate() {
        for r in 0..m.cols {
            out.set(r, j, snf.v.at(r, c).clone());
        }
    }
    out
}

/// Solve `m * x = b` over the integers. Returns one solution if any exists.
pub fn solve(m: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len());
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let rank = snf.rank();
    let mut w = vec![BigInt::zero(); m.cols];
    for i in 0..m.rows {
        if i < rank {
            let di = snf.d.at(i, i);
            let (q, r) = ub[i].div_rem(di);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(m: &IntegerMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "D != U*m*V");
        let diag = snf.diagonal();
        for i in 1..diag.len() {
            if !diag[i].is_zero() || diag[i - 1].is_zero() {
                assert!(
                    diag[i - 1].is_zero() || (&diag[i] % &diag[i - 1]).is_zero(),
                    "divisibility chain broken: {:?}",
                    diag
                );
            }
            assert!(!diag[i - 1].is_negative() && !diag[i].is_negative());
        }
        // unimodularity: |det| = 1, checked via SNF of u itself being all ones
        let su = smith_normal_form(&snf.u);
        assert!(su.diagonal().iter().all(|e| e.is_one()), "U not unimodular");
        let sv = smith_normal_form(&snf.v);
        assert!(sv.diagonal().iter().all(|e| e.is_one()), "V not unimodular");
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntegerMatrix::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, m);
        assert_eq!(snf.u, IntegerMatrix::identity(3));
        assert_eq!(snf.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_forces_gcd_lcm() {
        let m = IntegerMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_decomposition(&m);
    }

    #[test]
    fn rectangular_and_negative_entries() {
        let m = IntegerMatrix::from_rows_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        check_decomposition(&m);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn kernel_of_projection() {
        // (x, y) -> x + 2y has kernel generated by (2, -1) (up to sign)
        let m = IntegerMatrix::from_rows_i64(&[vec![1, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).is_zero());
        let g = k.at(0, 0).gcd(k.at(1, 0));
        assert!(g.is_one(), "kernel basis not primitive");
    }

    #[test]
    fn solve_divisibility() {
        let m = IntegerMatrix::from_rows_i64(&[vec![2, 0], vec![0, 4]]);
        assert!(solve(&m, &[BigInt::from(2), BigInt::from(8)]).is_some());
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(8)]).is_none());
        let x = solve(&m, &[BigInt::from(6), BigInt::from(-4)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![BigInt::from(6), BigInt::from(-4)]);
    }
}
