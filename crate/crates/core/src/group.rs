//! Finitely generated abelian groups presented by generators and relations.
//!
//! A group is coker(relations: Z^r -> Z^g). The Smith normal form of the
//! relation matrix is computed once at construction; it canonicalizes to
//! Z^free ⊕ ⊕_i Z/d_i with d_1 | d_2 | ... and drives element equality,
//! torsion coordinates and all kernel/cokernel constructions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::matrix::{integer_kernel, smith_normal_form, solve, IntegerMatrix, SmithDecomposition};

#[derive(Clone)]
pub struct PresentedAbelianGroup {
    pub generator_names: Vec<String>,
    pub relations: IntegerMatrix,
    snf: SnfCache,
}

#[derive(Clone)]
struct SnfCache {
    u: IntegerMatrix,
    u_inverse: IntegerMatrix,
    /// Diagonal of U * relations * V, padded with zeros to generator count.
    diag: Vec<BigInt>,
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl std::fmt::Debug for PresentedAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PresentedAbelianGroup {
    pub fn new(generator_names: Vec<String>, relations: IntegerMatrix) -> Self {
        assert_eq!(generator_names.len(), relations.rows, "one row per generator");
        let snf = smith_normal_form(&relations);
        let SmithDecomposition { u, d, .. } = snf;
        let mut diag: Vec<BigInt> = (0..relations.rows)
            .map(|i| if i < d.cols { d.at(i, i).clone() } else { BigInt::zero() })
            .collect();
        // entries beyond min(rows, cols) are zero already; pad explicitly
        diag.truncate(relations.rows);
        let free_rank = diag.iter().filter(|e| e.is_zero()).count();
        let invariant_factors: Vec<BigInt> =
            diag.iter().filter(|e| !e.is_zero() && !e.is_one()).cloned().collect();
        let u_inverse = invert_unimodular(&u);
        PresentedAbelianGroup {
            generator_names,
            relations,
            snf: SnfCache { u, u_inverse, diag, free_rank, invariant_factors },
        }
    }

    pub fn from_orders(names: Vec<String>, orders: &[u64]) -> Self {
        // order 0 denotes a free generator
        let g = names.len();
        assert_eq!(g, orders.len());
        let rel_cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| **o != 0)
            .map(|(i, o)| {
                let mut col = vec![BigInt::zero(); g];
                col[i] = BigInt::from(*o);
                col
            })
            .collect();
        Self::new(names, IntegerMatrix::from_columns(g, &rel_cols))
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), IntegerMatrix::zero(0, 0))
    }

    /// Elementary abelian 2-group of the given rank.
    pub fn elementary_two(rank: usize) -> Self {
        let names = (0..rank).map(|i| format!("v{}", i)).collect();
        Self::from_orders(names, &vec![2; rank])
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn free_rank(&self) -> usize {
        self.snf.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.snf.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariant_factors().is_empty()
    }

    /// Order of the torsion subgroup (the group order when finite).
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors().iter().product()
    }

    /// Canonical coordinates of an element: y = U x, reduced mod the diagonal.
    fn canonical_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.num_generators());
        let y = self.snf.u.mul_vec(x);
        y.iter()
            .zip(&self.snf.diag)
            .map(|(yi, di)| {
                if di.is_zero() {
                    yi.clone()
                } else {
                    let m = yi % di;
                    if m.is_negative() {
                        m + di
                    } else {
                        m
                    }
                }
            })
            .collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.canonical_coords(x).iter().all(|c| c.is_zero())
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&diff)
    }

    /// The p-torsion subgroup {x : px = 0} for a prime p, as an elementary
    /// abelian p-group together with generator coordinates in this group.
    ///
    /// Generators are aligned with the invariant factors divisible by p:
    /// for each such d_i the element (d_i/p) e_i pulled back through U.
    pub fn p_torsion(&self, p: u64) -> (PresentedAbelianGroup, Vec<Vec<BigInt>>) {
        let p_big = BigInt::from(p);
        let uinv = &self.snf.u_inverse;
        let mut gens = Vec::new();
        for (i, d) in self.snf.diag.iter().enumerate() {
            if d.is_zero() || d.is_one() || !(d % &p_big).is_zero() {
                continue;
            }
            let scale = d / &p_big;
            let col: Vec<BigInt> = (0..self.num_generators())
                .map(|r| uinv.at(r, i) * &scale)
                .collect();
            gens.push(col);
        }
        let names = (0..gens.len()).map(|i| format!("t{}", i)).collect();
        let group = PresentedAbelianGroup::from_orders(names, &vec![p; gens.len()]);
        (group, gens)
    }

    /// Coordinates of a p-torsion element in the basis returned by
    /// `p_torsion`. Errors if the element is not p-torsion.
    pub fn p_torsion_coords(&self, p: u64, x: &[BigInt]) -> Result<Vec<u8>, Error> {
        let p_big = BigInt::from(p);
        let y = self.canonical_coords(x);
        let mut coords = Vec::new();
        for (yi, di) in y.iter().zip(&self.snf.diag) {
            if di.is_zero() || di.is_one() {
                if !yi.is_zero() {
                    return Err(Error::Data(format!(
                        "element is not {}-torsion (free/unit coordinate {})",
                        p, yi
                    )));
                }
                continue;
            }
            if !(di % &p_big).is_zero() {
                if !yi.is_zero() {
                    return Err(Error::Data(format!("element is not {}-torsion", p)));
                }
                continue;
            }
            let step = di / &p_big;
            let (q, r) = (yi / &step, yi % &step);
            if !r.is_zero() {
                return Err(Error::Data(format!("element is not {}-torsion", p)));
            }
            let qc = ((q % &p_big) + &p_big) % &p_big;
            coords.push(u64::try_from(&qc).unwrap() as u8);
        }
        Ok(coords)
    }

    pub fn render(&self) -> String {
        crate::report::render_group(self.free_rank(), self.invariant_factors())
    }
}

fn invert_unimodular(u: &IntegerMatrix) -> IntegerMatrix {
    // u is unimodular, so its SNF is the identity: d = a u b  =>  u^-1 = b a.
    let snf = smith_normal_form(u);
    debug_assert!(snf.diagonal().iter().all(|e| e.is_one()));
    snf.v.mul(&snf.u)
}

/// (free rank, invariant factors) of the canonical decomposition.
pub fn group_invariants(g: &PresentedAbelianGroup) -> (usize, Vec<BigInt>) {
    (g.free_rank(), g.invariant_factors().to_vec())
}

/// A homomorphism of presented groups, stored on generators.
#[derive(Clone)]
pub struct AbHom {
    pub domain: PresentedAbelianGroup,
    pub codomain: PresentedAbelianGroup,
    pub matrix: IntegerMatrix,
}

impl AbHom {
    /// Checks well-definedness: every domain relation must map into the
    /// integer span of the codomain relations.
    pub fn new(
        domain: PresentedAbelianGroup,
        codomain: PresentedAbelianGroup,
        matrix: IntegerMatrix,
    ) -> Result<Self, Error> {
        assert_eq!(matrix.cols, domain.num_generators());
        assert_eq!(matrix.rows, codomain.num_generators());
        for c in 0..domain.relations.cols {
            let image = matrix.mul_vec(&domain.relations.column(c));
            if !codomain.is_zero_element(&image) {
                return Err(Error::Data(format!(
                    "homomorphism not well defined: relation {} maps to a nonzero element",
                    c
                )));
            }
        }
        Ok(AbHom { domain, codomain, matrix })
    }

    pub fn zero(domain: PresentedAbelianGroup, codomain: PresentedAbelianGroup) -> Self {
        let m = IntegerMatrix::zero(codomain.num_generators(), domain.num_generators());
        AbHom { domain, codomain, matrix: m }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    pub fn is_zero_hom(&self) -> bool {
        (0..self.matrix.cols).all(|c| self.codomain.is_zero_element(&self.matrix.column(c)))
    }

    pub fn compose(&self, first: &AbHom) -> AbHom {
        AbHom {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&first.matrix),
        }
    }
}

/// A subgroup of an ambient presented group, spanned by the given generator
/// columns (ambient generator coordinates).
#[derive(Clone)]
pub struct Subgroup {
    pub ambient: PresentedAbelianGroup,
    pub gens: IntegerMatrix,
}

impl Subgroup {
    pub fn full(g: &PresentedAbelianGroup) -> Self {
        Subgroup { ambient: g.clone(), gens: IntegerMatrix::identity(g.num_generators()) }
    }

    pub fn trivial(g: &PresentedAbelianGroup) -> Self {
        Subgroup { ambient: g.clone(), gens: IntegerMatrix::zero(g.num_generators(), 0) }
    }

    /// The subgroup as an abstract group with its inclusion homomorphism.
    /// Relations of the presentation are all v with gens·v ∈ im(ambient relations).
    pub fn as_group(&self) -> (PresentedAbelianGroup, AbHom) {
        let rel = lattice_preimage(&self.gens, &self.ambient.relations);
        let names = (0..self.gens.cols).map(|i| format!("s{}", i)).collect();
        let group = PresentedAbelianGroup::new(names, rel);
        let incl = AbHom {
            domain: group.clone(),
            codomain: self.ambient.clone(),
            matrix: self.gens.clone(),
        };
        (group, incl)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        let sys = self.gens.hcat(&self.ambient.relations);
        solve(&sys, x).is_some()
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        (0..other.gens.cols).all(|c| self.contains(&other.gens.column(c)))
    }

    pub fn is_whole_group(&self) -> bool {
        (0..self.ambient.num_generators()).all(|i| {
            let mut e = vec![BigInt::zero(); self.ambient.num_generators()];
            e[i] = BigInt::one();
            self.contains(&e)
        })
    }
}

/// Solve {v : a·v ∈ column span of b}, the preimage lattice of im(b) under a.
/// Returns generators of that lattice as columns.
fn lattice_preimage(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
    assert_eq!(a.rows, b.rows);
    let sys = a.hcat(b);
    let ker = integer_kernel(&sys);
    // project onto the a-block coordinates
    let mut out = IntegerMatrix::zero(a.cols, ker.cols);
    for c in 0..ker.cols {
        for r in 0..a.cols {
            out.set(r, c, ker.at(r, c).clone());
        }
    }
    out
}

/// Kernel of f, with its inclusion into the domain.
pub fn hom_kernel(f: &AbHom) -> (PresentedAbelianGroup, AbHom) {
    // {x : f(x) ∈ im(codomain relations)} / im(domain relations)
    let lattice = lattice_preimage(&f.matrix, &f.codomain.relations);
    let sub = Subgroup { ambient: f.domain.clone(), gens: lattice };
    sub.as_group()
}

/// Kernel as a subgroup of the domain.
pub fn hom_kernel_subgroup(f: &AbHom) -> Subgroup {
    let lattice = lattice_preimage(&f.matrix, &f.codomain.relations);
    Subgroup { ambient: f.domain.clone(), gens: lattice }
}

/// Cokernel of f, with the projection from the codomain.
pub fn hom_cokernel(f: &AbHom) -> (PresentedAbelianGroup, AbHom) {
    let rel = f.matrix.hcat(&f.codomain.relations);
    let group = PresentedAbelianGroup::new(f.codomain.generator_names.clone(), rel);
    let proj = AbHom {
        domain: f.codomain.clone(),
        codomain: group.clone(),
        matrix: IntegerMatrix::identity(f.codomain.num_generators()),
    };
    (group, proj)
}

/// Image of f as a subgroup of the codomain.
pub fn hom_image(f: &AbHom) -> Subgroup {
    Subgroup { ambient: f.codomain.clone(), gens: f.matrix.clone() }
}

/// The elementary 2-torsion subgroup, with inclusion.
pub fn two_torsion(g: &PresentedAbelianGroup) -> (PresentedAbelianGroup, AbHom) {
    let (group, gens) = g.p_torsion(2);
    let m = IntegerMatrix::from_columns(g.num_generators(), &gens);
    let incl = AbHom { domain: group.clone(), codomain: g.clone(), matrix: m };
    (group, incl)
}

/// Quotient of the subgroup spanned by `numerator` by the subgroup spanned by
/// `denominator`. Errors unless the denominator lies in the numerator span.
pub fn subquotient(
    g: &PresentedAbelianGroup,
    numerator: &IntegerMatrix,
    denominator: &IntegerMatrix,
) -> Result<PresentedAbelianGroup, Error> {
    let num = Subgroup { ambient: g.clone(), gens: numerator.clone() };
    let den = Subgroup { ambient: g.clone(), gens: denominator.clone() };
    if !num.contains_subgroup(&den) {
        return Err(Error::Containment(
            "denominator is not contained in the numerator span".into(),
        ));
    }
    // relations: v with num·v ∈ im(den) + im(g.relations)
    let rel = lattice_preimage(numerator, &denominator.hcat(&g.relations));
    let names = (0..numerator.cols).map(|i| format!("q{}", i)).collect();
    Ok(PresentedAbelianGroup::new(names, rel))
}

/// Largest subgroup of the domain mapped into `target` by f; contains ker(f).
pub fn preimage(f: &AbHom, target: &Subgroup) -> Subgroup {
    assert_eq!(
        target.ambient.num_generators(),
        f.codomain.num_generators(),
        "target must live in the codomain"
    );
    let lattice = lattice_preimage(&f.matrix, &target.gens.hcat(&f.codomain.relations));
    Subgroup { ambient: f.domain.clone(), gens: lattice }
}

/// Direct sum, tagging generator names.
pub fn direct_sum(a: &PresentedAbelianGroup, b: &PresentedAbelianGroup) -> PresentedAbelianGroup {
    let mut names = Vec::with_capacity(a.num_generators() + b.num_generators());
    for n in &a.generator_names {
        names.push(format!("l.{}", n));
    }
    for n in &b.generator_names {
        names.push(format!("r.{}", n));
    }
    let g = names.len();
    let mut cols = Vec::new();
    for c in 0..a.relations.cols {
        let mut col = vec![BigInt::zero(); g];
        for (r, v) in a.relations.column(c).into_iter().enumerate() {
            col[r] = v;
        }
        cols.push(col);
    }
    for c in 0..b.relations.cols {
        let mut col = vec![BigInt::zero(); g];
        for (r, v) in b.relations.column(c).into_iter().enumerate() {
            col[a.num_generators() + r] = v;
        }
        cols.push(col);
    }
    PresentedAbelianGroup::new(names, IntegerMatrix::from_columns(g, &cols))
}
