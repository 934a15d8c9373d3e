//! Dense linear algebra over GF(2) with bit-packed rows.

use serde::{Deserialize, Serialize};

/// A vector over GF(2), bit-packed in 64-bit blocks.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    pub len: usize,
    blocks: Vec<u64>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "{}", bits)
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, blocks: vec![0; (len + 63) / 64] }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            if b % 2 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.blocks[i / 64] |= 1 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| *b == 0)
    }

    pub fn leading_one(&self) -> Option<usize> {
        (0..self.len).find(|&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

/// A linear map F2^cols -> F2^rows; rows index the codomain.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Map {
    pub rows: usize,
    pub cols: usize,
    /// row-major bit rows, each of length `cols`
    row_bits: Vec<BitVec>,
}

impl std::fmt::Debug for F2Map {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "F2Map {}x{} [", self.rows, self.cols)?;
        for r in &self.row_bits {
            writeln!(f, "  {:?}", r)?;
        }
        write!(f, "]")
    }
}

impl F2Map {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Map { rows, cols, row_bits: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row");
            for (j, v) in row.iter().enumerate() {
                if v % 2 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[BitVec]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len, rows);
            for i in 0..rows {
                if col.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_bits[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.row_bits[r].set(c, b);
    }

    pub fn is_zero(&self) -> bool {
        self.row_bits.iter().all(|r| r.is_zero())
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVec> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len, self.cols);
        let mut out = BitVec::zeros(self.rows);
        for c in 0..self.cols {
            if x.get(c) {
                for r in 0..self.rows {
                    if self.get(r, c) {
                        out.set(r, !out.get(r));
                    }
                }
            }
        }
        out
    }

    /// self ∘ first
    pub fn compose(&self, first: &F2Map) -> F2Map {
        assert_eq!(self.cols, first.rows, "composition shape mismatch");
        let cols: Vec<BitVec> = (0..first.cols).map(|c| self.apply(&first.column(c))).collect();
        F2Map::from_columns(self.rows, &cols)
    }

    pub fn add(&self, other: &F2Map) -> F2Map {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.row_bits.iter_mut().zip(&other.row_bits) {
            a.xor_assign(b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::of_vectors(self.rows, &self.columns()).basis.len()
    }

    /// Basis of {x : self(x) = 0}.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        // column-reduce while tracking column combinations
        let mut cols = self.columns();
        let mut track: Vec<BitVec> = (0..self.cols).map(|i| BitVec::unit(self.cols, i)).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col index in cols)
        for j in 0..cols.len() {
            // reduce column j by existing pivots
            loop {
                let Some(lead) = cols[j].leading_one() else { break };
                if let Some(&(_, pj)) = pivots.iter().find(|&&(pr, _)| pr == lead) {
                    let (a, b) = twin(&mut cols, j, pj);
                    a.xor_assign(b);
                    let (ta, tb) = twin(&mut track, j, pj);
                    ta.xor_assign(tb);
                } else {
                    pivots.push((lead, j));
                    break;
                }
            }
        }
        (0..cols.len()).filter(|&j| cols[j].is_zero()).map(|j| track[j].clone()).collect()
    }

    pub fn image_basis(&self) -> Vec<BitVec> {
        Echelon::of_vectors(self.rows, &self.columns()).basis
    }

    /// One solution of self(x) = b, if any.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        let mut ech = Echelon::new(self.rows, self.cols);
        for (j, col) in self.columns().into_iter().enumerate() {
            ech.insert_tracked(col, j);
        }
        ech.express(b)
    }
}

fn twin<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

/// Incremental echelon basis of a subspace of F2^dim, with optional tracking
/// of how each basis vector was expressed in the inserted vectors.
#[derive(Clone)]
pub struct Echelon {
    pub dim: usize,
    pub basis: Vec<BitVec>,
    /// combo[i] expresses basis[i] over the inserted vectors (length = track_len)
    combos: Vec<BitVec>,
    track_len: usize,
}

impl Echelon {
    pub fn new(dim: usize, track_len: usize) -> Self {
        Echelon { dim, basis: Vec::new(), combos: Vec::new(), track_len }
    }

    pub fn of_vectors(dim: usize, vecs: &[BitVec]) -> Self {
        let mut e = Echelon::new(dim, 0);
        for v in vecs {
            e.insert(v.clone());
        }
        e
    }

    /// Reduce v against the basis; if a nonzero remainder survives, add it.
    /// Returns true when the vector was independent.
    pub fn insert(&mut self, v: BitVec) -> bool {
        self.insert_inner(v, None)
    }

    pub fn insert_tracked(&mut self, v: BitVec, index: usize) -> bool {
        let mut combo = BitVec::zeros(self.track_len);
        combo.set(index, true);
        self.insert_inner(v, Some(combo))
    }

    fn insert_inner(&mut self, mut v: BitVec, combo: Option<BitVec>) -> bool {
        let mut c = combo.unwrap_or_else(|| BitVec::zeros(self.track_len));
        loop {
            let Some(lead) = v.leading_one() else { return false };
            match self.basis.iter().position(|b| b.leading_one() == Some(lead)) {
                Some(i) => {
                    let bi = self.basis[i].clone();
                    v.xor_assign(&bi);
                    let ci = self.combos[i].clone();
                    c.xor_assign(&ci);
                }
                None => {
                    self.basis.push(v);
                    self.combos.push(c);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        loop {
            let Some(lead) = v.leading_one() else { return true };
            match self.basis.iter().position(|b| b.leading_one() == Some(lead)) {
                Some(i) => {
                    let bi = self.basis[i].clone();
                    v.xor_assign(&bi);
                }
                None => return false,
            }
        }
    }

    pub fn contains_all(&self, vs: &[BitVec]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }

    /// Express v over the inserted vectors if v lies in the span.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut c = BitVec::zeros(self.track_len);
        loop {
            let Some(lead) = v.leading_one() else { return Some(c) };
            match self.basis.iter().position(|b| b.leading_one() == Some(lead)) {
                Some(i) => {
                    let bi = self.basis[i].clone();
                    v.xor_assign(&bi);
                    let ci = self.combos[i].clone();
                    c.xor_assign(&ci);
                }
                None => return None,
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// A quotient F2^dim / span(denominator), with deterministic coordinates:
/// the representative basis consists of the unit vectors away from the
/// denominator's pivot positions.
#[derive(Clone, Debug)]
pub struct F2Quotient {
    pub dim: usize,
    denom: Vec<BitVec>, // echelon basis
    free_positions: Vec<usize>,
}

impl F2Quotient {
    pub fn new(dim: usize, denominator_span: &[BitVec]) -> Self {
        let ech = Echelon::of_vectors(dim, denominator_span);
        let mut denom = ech.basis;
        // sort by pivot so projection can clear every pivot in one pass
        denom.sort_by_key(|b| b.leading_one().unwrap());
        let pivots: Vec<usize> = denom.iter().map(|b| b.leading_one().unwrap()).collect();
        let free_positions: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
        F2Quotient { dim, denom, free_positions }
    }

    pub fn full(dim: usize) -> Self {
        Self::new(dim, &[])
    }

    pub fn rank(&self) -> usize {
        self.free_positions.len()
    }

    /// Coordinates of [v] in the quotient basis. Every pivot position of the
    /// denominator must be cleared, not just leading ones: a vector's support
    /// lies at or above its own leading position, so one ascending-pivot pass
    /// reduces completely.
    pub fn project(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for b in &self.denom {
            let pivot = b.leading_one().unwrap();
            if v.get(pivot) {
                let b = b.clone();
                v.xor_assign(&b);
            }
        }
        debug_assert!(self
            .denom
            .iter()
            .all(|b| !v.get(b.leading_one().unwrap())));
        let mut out = BitVec::zeros(self.free_positions.len());
        for (k, &pos) in self.free_positions.iter().enumerate() {
            if v.get(pos) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn is_zero_class(&self, v: &BitVec) -> bool {
        self.project(v).is_zero()
    }

    /// The quotient as an elementary abelian 2-group.
    pub fn as_group(&self) -> crate::group::PresentedAbelianGroup {
        crate::group::PresentedAbelianGroup::elementary_two(self.rank())
    }
}

/// A subquotient span(sub) / span(denom) of F2^dim, with denom ⊆ span(sub).
/// Vectors are projected by expressing them over the subspace basis first.
#[derive(Clone)]
pub struct F2Subquotient {
    ech: Echelon,
    quot: F2Quotient,
}

impl F2Subquotient {
    pub fn new(dim: usize, sub: &[BitVec], denom: &[BitVec]) -> Result<Self, crate::error::Error> {
        let mut ech = Echelon::new(dim, sub.len());
        for (i, v) in sub.iter().enumerate() {
            ech.insert_tracked(v.clone(), i);
        }
        let denom_coords: Vec<BitVec> = denom
            .iter()
            .map(|v| {
                ech.express(v).ok_or_else(|| {
                    crate::error::Error::Containment(
                        "denominator vector lies outside the subspace".into(),
                    )
                })
            })
            .collect::<Result<_, _>>()?;
        // express() yields coordinates over the inserted vectors, of length
        // sub.len(); the quotient works in those coordinates
        let quot = F2Quotient::new(sub.len(), &denom_coords);
        Ok(F2Subquotient { ech, quot })
    }

    pub fn rank(&self) -> usize {
        self.quot.rank()
    }

    pub fn project(&self, v: &BitVec) -> Result<BitVec, crate::error::Error> {
        let coords = self.ech.express(v).ok_or_else(|| {
            crate::error::Error::Containment("vector lies outside the subspace".into())
        })?;
        Ok(self.quot.project(&coords))
    }

    pub fn is_zero_class(&self, v: &BitVec) -> Result<bool, crate::error::Error> {
        Ok(self.project(v)?.is_zero())
    }

    /// Dies in the quotient for every vector (used for lift-independence).
    pub fn kills_all(&self, vs: &[BitVec]) -> bool {
        vs.iter().all(|v| matches!(self.is_zero_class(v), Ok(true)))
    }
}
