//! The input data model: graded integral / mod-2 / mod-3 cohomology of a
//! space over a degree window, with all structure maps, plus the relation
//! validator and the kernel/quotient constructions the engines consume.
//!
//! Out-of-window access is a hard error, never an assumed zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::f2::{BitVec, Echelon, F2Map, F2Quotient};
use crate::f3::F3Map;
use crate::group::{
    hom_kernel_subgroup, AbHom, PresentedAbelianGroup, Subgroup,
};
use crate::matrix::IntegerMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureTag {
    Oriented,
    Spin,
    String,
    #[serde(rename = "cw")]
    CwOnly,
}

impl StructureTag {
    pub fn is_manifold(self) -> bool {
        !matches!(self, StructureTag::CwOnly)
    }
}

/// User-declared knowledge about the higher operations.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct OperationOverrides {
    /// Per-degree spanning vectors (codomain coordinates, degree + 3) of the
    /// image of the secondary operation Theta on its kernel domain at that
    /// degree. An empty list declares the operation trivial there.
    #[serde(default)]
    pub theta_images: BTreeMap<usize, Vec<Vec<u8>>>,
    /// epsilon(Phi): Some(true) = trivial.
    #[serde(default)]
    pub phi_trivial: Option<bool>,
    /// epsilon(T): Some(true) = trivial.
    #[serde(default)]
    pub t_trivial: Option<bool>,
    /// 3-primary epsilon: Some(true) = known zero.
    #[serde(default)]
    pub eps3_zero: Option<bool>,
}

impl OperationOverrides {
    /// String manifolds force the secondary Phi and tertiary T trivial.
    pub fn forced_for(mut self, tag: StructureTag) -> Self {
        if tag == StructureTag::String {
            self.phi_trivial = Some(true);
            self.t_trivial = Some(true);
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct HomologyData {
    pub h1: PresentedAbelianGroup,
    pub h2: PresentedAbelianGroup,
    pub h3: PresentedAbelianGroup,
    pub h1_mod2_rank: usize,
    pub h3_mod2_rank: usize,
    /// rho_2 on H_3: columns = H_3 generators.
    pub rho2_h3: F2Map,
    /// cap product with w_2 on mod-2 homology: H_3(F2) -> H_1(F2).
    pub cap_w2: F2Map,
    /// evaluation pairing <w_2, -> on integral H_2, one row.
    pub pairing_w2: F2Map,
    /// homology Bockstein H_3(F2) -> H_2(Z): columns = F2 basis vectors,
    /// entries are H_2 generator coordinates.
    pub homology_bockstein: IntegerMatrix,
}

#[derive(Clone, Debug)]
pub struct CohomologyDatum {
    pub name: String,
    /// total dimension n + k
    pub dimension: usize,
    /// codimension k in {2, 3}
    pub codimension: usize,
    pub tag: StructureTag,
    pub window_lo: usize,
    pub window_hi: usize,
    pub integral: BTreeMap<usize, PresentedAbelianGroup>,
    pub mod2_rank: BTreeMap<usize, usize>,
    /// mod-2 basis labels per degree when ring-derived, for report witnesses
    pub mod2_labels: BTreeMap<usize, Vec<String>>,
    pub rho2: BTreeMap<usize, F2Map>,
    pub bockstein: BTreeMap<usize, IntegerMatrix>,
    pub sq1: BTreeMap<usize, F2Map>,
    pub sq2: BTreeMap<usize, F2Map>,
    pub sq4: BTreeMap<usize, F2Map>,
    /// explicit composite Sq^2 Sq^1 when supplied directly (Wu fill)
    pub sq2sq1: BTreeMap<usize, F2Map>,
    pub w2_zero: Option<bool>,
    pub w3_zero: Option<bool>,
    pub cup_w2: BTreeMap<usize, F2Map>,
    pub cup_w3: BTreeMap<usize, F2Map>,
    /// ring presentation when the mod-2 side was ingested from one
    pub ring: Option<crate::ring::RingPresentation>,
    pub mod3_rank: BTreeMap<usize, usize>,
    pub rho3: Option<F3Map>,
    pub bockstein3: Option<IntegerMatrix>,
    pub p1_cup3: Option<F3Map>,
    pub p1_mod3_trivial: Option<bool>,
    pub homology: Option<HomologyData>,
}

impl CohomologyDatum {
    pub fn n(&self) -> usize {
        self.dimension - self.codimension
    }

    pub fn check_degree(&self, i: usize) -> Result<(), Error> {
        if i < self.window_lo || i > self.window_hi {
            return Err(Error::Degree(format!(
                "degree {} outside window [{}, {}]",
                i, self.window_lo, self.window_hi
            )));
        }
        Ok(())
    }

    pub fn integral(&self, i: usize) -> Result<&PresentedAbelianGroup, Error> {
        self.check_degree(i)?;
        self.integral
            .get(&i)
            .ok_or_else(|| Error::MissingData(format!("integral cohomology at degree {}", i)))
    }

    pub fn mod2_rank(&self, i: usize) -> Result<usize, Error> {
        self.check_degree(i)?;
        self.mod2_rank
            .get(&i)
            .copied()
            .ok_or_else(|| Error::MissingData(format!("mod-2 rank at degree {}", i)))
    }

    fn map_at<'a>(
        &self,
        table: &'a BTreeMap<usize, F2Map>,
        name: &str,
        i: usize,
    ) -> Result<&'a F2Map, Error> {
        self.check_degree(i)?;
        table
            .get(&i)
            .ok_or_else(|| Error::MissingData(format!("{} at degree {}", name, i)))
    }

    pub fn sq1(&self, i: usize) -> Result<&F2Map, Error> {
        self.map_at(&self.sq1, "Sq1", i)
    }

    pub fn sq2(&self, i: usize) -> Result<&F2Map, Error> {
        self.map_at(&self.sq2, "Sq2", i)
    }

    pub fn sq4(&self, i: usize) -> Result<&F2Map, Error> {
        self.map_at(&self.sq4, "Sq4", i)
    }

    pub fn rho2(&self, i: usize) -> Result<&F2Map, Error> {
        self.map_at(&self.rho2, "rho2", i)
    }

    pub fn bockstein(&self, i: usize) -> Result<&IntegerMatrix, Error> {
        self.check_degree(i)?;
        self.bockstein
            .get(&i)
            .ok_or_else(|| Error::MissingData(format!("Bockstein at degree {}", i)))
    }

    /// Effective Sq^2 Sq^1 at degree i: the explicit map when present, else
    /// the composite sq2(i+1) ∘ sq1(i).
    pub fn sq2sq1(&self, i: usize) -> Result<F2Map, Error> {
        if let Some(m) = self.sq2sq1.get(&i) {
            return Ok(m.clone());
        }
        Ok(self.sq2(i + 1)?.compose(self.sq1(i)?))
    }

    /// Sq^m_Z = Sq^m ∘ rho_2 from the integral group at degree i, as a
    /// homomorphism into the target mod-2 group presented as (Z/2)^r.
    pub fn sqm_z_hom(&self, m: usize, i: usize) -> Result<AbHom, Error> {
        let op = match m {
            2 => self.sq2(i)?.clone(),
            4 => self.sq4(i)?.clone(),
            _ => return Err(Error::Data(format!("unsupported integral square Sq^{}", m))),
        };
        let composite = op.compose(self.rho2(i)?);
        f2_target_hom(self.integral(i)?, &composite)
    }

    /// ker(Sq^2_Z : i) as a subgroup of H^i(Z).
    pub fn ker_sq2z(&self, i: usize) -> Result<Subgroup, Error> {
        Ok(hom_kernel_subgroup(&self.sqm_z_hom(2, i)?))
    }

    /// ker(Sq^2_Z : i) ∩ ker(Sq^4_Z : i) as a subgroup of H^i(Z).
    pub fn ker_sq2z_sq4z(&self, i: usize) -> Result<Subgroup, Error> {
        let s2 = self.sq2(i)?.compose(self.rho2(i)?);
        let s4 = self.sq4(i)?.compose(self.rho2(i)?);
        let stacked = stack_f2(&s2, &s4);
        Ok(hom_kernel_subgroup(&f2_target_hom(self.integral(i)?, &stacked)?))
    }

    /// Image of Sq^2_Z from degree i as an F2 subspace of degree i+2.
    pub fn im_sq2z(&self, i: usize) -> Result<Vec<BitVec>, Error> {
        let composite = self.sq2(i)?.compose(self.rho2(i)?);
        Ok(composite.image_basis())
    }

    /// Image of Sq^4_Z restricted to a subgroup of H^i(Z).
    pub fn im_sq4z_on(&self, i: usize, sub: &Subgroup) -> Result<Vec<BitVec>, Error> {
        let composite = self.sq4(i)?.compose(self.rho2(i)?);
        let mut span = Vec::new();
        for c in 0..sub.gens.cols {
            let col = sub.gens.column(c);
            span.push(composite.apply(&reduce_mod2(&col)));
        }
        Ok(Echelon::of_vectors(composite.rows, &span).basis)
    }

    /// Solve delta(x') = x for a 2-torsion class x in H^{i+1}(Z), where delta
    /// is the Bockstein out of degree i. Errors when no preimage exists.
    pub fn bockstein_preimage(&self, i: usize, x: &[BigInt]) -> Result<BitVec, Error> {
        let target = self.integral(i + 1)?;
        let delta = self.bockstein(i)?;
        let r = self.mod2_rank(i)?;
        let (t2, _) = target.p_torsion(2);
        let m = t2.num_generators();
        // delta in 2-torsion coordinates, column by column
        let mut dm = F2Map::zero(m, r);
        for c in 0..r {
            let col = delta.column(c);
            let coords = target.p_torsion_coords(2, &col).map_err(|_| {
                Error::Data(format!(
                    "Bockstein at degree {} does not land in 2-torsion (column {})",
                    i, c
                ))
            })?;
            for (row, v) in coords.iter().enumerate() {
                if v % 2 == 1 {
                    dm.set(row, c, true);
                }
            }
        }
        let xb = target.p_torsion_coords(2, x).map_err(|_| {
            Error::Data("Bockstein preimage requested for a non-2-torsion class".into())
        })?;
        let xv = BitVec::from_bits(&xb);
        dm.solve(&xv).ok_or_else(|| {
            Error::Data(format!(
                "2-torsion class at degree {} has no Bockstein preimage; Bockstein exactness \
                 is violated",
                i + 1
            ))
        })
    }

    /// The cup-with-w2 map at degree i: the explicit map when supplied, else
    /// (on a validated manifold datum) Sq^2, which equals it at Wu degrees.
    pub fn effective_cup_w2(&self, i: usize) -> Result<F2Map, Error> {
        if let Some(m) = self.cup_w2.get(&i) {
            return Ok(m.clone());
        }
        if self.tag.is_manifold() && (i == self.dimension - 2 || i == self.dimension - 3) {
            return Ok(self.sq2(i)?.clone());
        }
        Err(Error::MissingData(format!("cup product with w2 at degree {}", i)))
    }

    pub fn effective_cup_w3(&self, i: usize) -> Result<F2Map, Error> {
        if let Some(m) = self.cup_w3.get(&i) {
            return Ok(m.clone());
        }
        if self.tag.is_manifold() && i == self.dimension - 3 {
            return self.sq2sq1(i);
        }
        Err(Error::MissingData(format!("cup product with w3 at degree {}", i)))
    }
}

/// Promote a map into F2^r to a homomorphism into the presented group (Z/2)^r.
pub fn f2_target_hom(domain: &PresentedAbelianGroup, map: &F2Map) -> Result<AbHom, Error> {
    assert_eq!(map.cols, domain.num_generators());
    let target = PresentedAbelianGroup::elementary_two(map.rows);
    let mut m = IntegerMatrix::zero(map.rows, map.cols);
    for r in 0..map.rows {
        for c in 0..map.cols {
            if map.get(r, c) {
                m.set(r, c, BigInt::from(1));
            }
        }
    }
    AbHom::new(domain.clone(), target, m)
}

pub fn reduce_mod2(v: &[BigInt]) -> BitVec {
    let bits: Vec<u8> = v
        .iter()
        .map(|x| {
            let r = x % BigInt::from(2);
            (r != BigInt::from(0)) as u8
        })
        .collect();
    BitVec::from_bits(&bits)
}

/// Stack two maps with a common domain into the direct sum of their targets.
pub fn stack_f2(a: &F2Map, b: &F2Map) -> F2Map {
    assert_eq!(a.cols, b.cols);
    let mut out = F2Map::zero(a.rows + b.rows, a.cols);
    for c in 0..a.cols {
        for r in 0..a.rows {
            if a.get(r, c) {
                out.set(r, c, true);
            }
        }
        for r in 0..b.rows {
            if b.get(r, c) {
                out.set(a.rows + r, c, true);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Validator
// ---------------------------------------------------------------------------

pub const RELATION_NAMES: [&str; 7] = [
    "Sq1Sq1=0",
    "Sq1=rho2∘delta",
    "bockstein-exactness",
    "Sq2Sq2_Z=0",
    "Sq1Sq4_Z=Sq2Sq1Sq2_Z",
    "wu-consistency",
    "w3=Sq1(w2)",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationFailure {
    pub relation: String,
    pub degree: usize,
    pub witness: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<RelationFailure>,
    pub checked: Vec<String>,
    pub skipped: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, relation: &str, degree: usize, witness: String, detail: String) {
        self.failures.push(RelationFailure { relation: relation.into(), degree, witness, detail });
    }
}

/// Run the relation checks (a)-(g) plus the structure-tag checks on every
/// degree where both sides are defined. Report-valued; never errors.
pub fn validate_datum(d: &CohomologyDatum) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let lo = d.window_lo;
    let hi = d.window_hi;

    // (a) Sq1 ∘ Sq1 = 0
    for i in lo..hi {
        let (Ok(s1a), Ok(s1b)) = (d.sq1(i), d.sq1(i + 1)) else { continue };
        rep.checked.push(format!("Sq1Sq1=0@{}", i));
        let comp = s1b.compose(s1a);
        if !comp.is_zero() {
            let w = first_nonzero_column(&comp).unwrap_or(0);
            rep.fail(
                RELATION_NAMES[0],
                i,
                d.basis_label(i, w),
                format!("Sq1Sq1 of basis vector {} at degree {} is nonzero", w, i),
            );
        }
    }

    // (b) Sq1 = rho2 ∘ delta
    for i in lo..hi {
        let (Ok(s1), Ok(delta), Ok(r2)) = (d.sq1(i), d.bockstein(i), d.rho2(i + 1)) else {
            continue;
        };
        rep.checked.push(format!("Sq1=rho2∘delta@{}", i));
        let mut composite = F2Map::zero(r2.rows, delta.cols);
        for c in 0..delta.cols {
            let img = r2.apply(&reduce_mod2(&delta.column(c)));
            for r in 0..r2.rows {
                if img.get(r) {
                    composite.set(r, c, true);
                }
            }
        }
        if composite != *s1 {
            let diff = composite.add(s1);
            let w = first_nonzero_column(&diff).unwrap_or(0);
            rep.fail(
                RELATION_NAMES[1],
                i,
                d.basis_label(i, w),
                format!("Sq1 and rho2∘delta disagree on basis vector {} at degree {}", w, i),
            );
        }
    }

    // (c) exactness of ... -> H^i(Z) -x2-> H^i(Z) -rho2-> H^i(F2) -delta-> H^{i+1}(Z) -> ...
    for i in lo..=hi {
        check_bockstein_exactness(d, i, &mut rep);
    }

    // (d) Sq2 ∘ Sq2_Z = 0
    for i in lo..=hi.saturating_sub(4) {
        let (Ok(s2a), Ok(s2b), Ok(r2)) = (d.sq2(i), d.sq2(i + 2), d.rho2(i)) else { continue };
        rep.checked.push(format!("Sq2Sq2_Z=0@{}", i));
        let comp = s2b.compose(&s2a.compose(r2));
        if !comp.is_zero() {
            let w = first_nonzero_column(&comp).unwrap_or(0);
            rep.fail(
                RELATION_NAMES[3],
                i,
                format!("integral generator {}", w),
                format!("Sq2Sq2_Z nonzero on integral generator {} at degree {}", w, i),
            );
        }
    }

    // (e) Sq1 Sq4_Z = Sq2 Sq1 Sq2_Z
    for i in lo..=hi.saturating_sub(5) {
        let (Ok(s4), Ok(s1hi), Ok(r2)) = (d.sq4(i), d.sq1(i + 4), d.rho2(i)) else { continue };
        let (Ok(s2), Ok(s1mid), Ok(s2hi)) = (d.sq2(i), d.sq1(i + 2), d.sq2(i + 3)) else {
            continue;
        };
        rep.checked.push(format!("Sq1Sq4_Z=Sq2Sq1Sq2_Z@{}", i));
        let lhs = s1hi.compose(&s4.compose(r2));
        let rhs = s2hi.compose(&s1mid.compose(&s2.compose(r2)));
        if lhs != rhs {
            let diff = lhs.add(&rhs);
            let w = first_nonzero_column(&diff).unwrap_or(0);
            rep.fail(
                RELATION_NAMES[4],
                i,
                format!("integral generator {}", w),
                format!("Adem relation for Sq4_Z fails on integral generator {} at degree {}", w, i),
            );
        }
    }

    // (f) manifold checks: Sq2 at the Wu degrees equals cup with w2; the top
    // mod-2 group has rank 1
    if d.tag.is_manifold() {
        for i in [d.dimension.saturating_sub(3), d.dimension.saturating_sub(2)] {
            let Some(cup) = d.cup_w2.get(&i) else { continue };
            let Ok(s2) = d.sq2(i) else { continue };
            rep.checked.push(format!("wu-consistency@{}", i));
            if cup != s2 {
                let diff = cup.add(s2);
                let w = first_nonzero_column(&diff).unwrap_or(0);
                rep.fail(
                    RELATION_NAMES[5],
                    i,
                    d.basis_label(i, w),
                    format!("Sq2 differs from cup with w2 on basis vector {} at degree {}", w, i),
                );
            }
        }
        if let Ok(top) = d.mod2_rank(d.dimension) {
            rep.checked.push(format!("wu-consistency@{}", d.dimension));
            if top != 1 {
                rep.fail(
                    RELATION_NAMES[5],
                    d.dimension,
                    "top class".into(),
                    format!("top mod-2 rank is {}, expected 1", top),
                );
            }
        }
    } else {
        rep.skipped.push("wu-consistency (cw datum)".into());
    }

    // (g) w3 = Sq1(w2), checkable when a ring presentation is attached
    if let Some(ring) = &d.ring {
        rep.checked.push("w3=Sq1(w2)".into());
        match ring.sq(&ring.w2, 1) {
            Ok(sq1w2) => {
                let mut lhs = sq1w2;
                lhs.sort();
                let mut rhs = ring.w3.clone();
                rhs.sort();
                if lhs != rhs {
                    rep.fail(
                        RELATION_NAMES[6],
                        3,
                        "w2".into(),
                        "declared w3 differs from Sq1 of declared w2".into(),
                    );
                }
            }
            Err(e) => rep.fail(RELATION_NAMES[6], 3, "w2".into(), e.to_string()),
        }
    } else {
        rep.skipped.push("w3=Sq1(w2) (no ring presentation)".into());
    }

    // structure-tag checks
    match d.tag {
        StructureTag::Spin | StructureTag::String => {
            rep.checked.push("structure-tag".into());
            if d.w2_zero == Some(false) {
                rep.fail(
                    "structure-tag",
                    2,
                    "w2".into(),
                    format!("{:?} tag requires w2 = 0", d.tag),
                );
            }
        }
        StructureTag::Oriented => {
            rep.checked.push("structure-tag".into());
            if d.w2_zero.is_none() {
                rep.fail(
                    "structure-tag",
                    2,
                    "w2".into(),
                    "oriented manifold data must declare whether w2 vanishes".into(),
                );
            }
        }
        StructureTag::CwOnly => {}
    }

    // homology block consistency: mod-2 ranks against Poincare-dual degrees
    if let (Some(h), true) = (&d.homology, d.tag.is_manifold()) {
        let dual1 = d.dimension - 1;
        if let Ok(r) = d.mod2_rank(dual1) {
            rep.checked.push("homology-rank-consistency".into());
            if h.h1_mod2_rank != r {
                rep.fail(
                    "structure-tag",
                    1,
                    "H_1(F2)".into(),
                    format!(
                        "H_1 mod-2 rank {} does not match dual cohomology rank {} at degree {}",
                        h.h1_mod2_rank, r, dual1
                    ),
                );
            }
        }
    }

    rep
}

impl CohomologyDatum {
    fn basis_label(&self, degree: usize, index: usize) -> String {
        match self.mod2_labels.get(&degree) {
            Some(labels) if index < labels.len() => labels[index].clone(),
            _ => format!("e{}", index),
        }
    }
}

fn first_nonzero_column(m: &F2Map) -> Option<usize> {
    (0..m.cols).find(|&c| !m.column(c).is_zero())
}

fn check_bockstein_exactness(d: &CohomologyDatum, i: usize, rep: &mut ValidationReport) {
    let Ok(group) = d.integral(i) else { return };
    let Ok(r2) = d.rho2(i) else { return };
    rep.checked.push(format!("bockstein-exactness@{}", i));

    // rho2 must be well defined (relations die mod 2)
    let rho_hom = match f2_target_hom(group, r2) {
        Ok(h) => h,
        Err(_) => {
            rep.fail(
                RELATION_NAMES[2],
                i,
                "rho2".into(),
                format!("rho2 at degree {} does not kill the relations", i),
            );
            return;
        }
    };

    // exactness at H^i(Z): ker(rho2) = 2 H^i(Z)
    let ker = hom_kernel_subgroup(&rho_hom);
    let two_h = Subgroup {
        ambient: group.clone(),
        gens: {
            let mut m = IntegerMatrix::identity(group.num_generators());
            for r in 0..m.rows {
                let v = m.at(r, r) * BigInt::from(2);
                m.set(r, r, v);
            }
            m
        },
    };
    if !(ker.contains_subgroup(&two_h) && two_h.contains_subgroup(&ker)) {
        rep.fail(
            RELATION_NAMES[2],
            i,
            "ker(rho2)".into(),
            format!("ker(rho2) differs from 2·H^{}(Z)", i),
        );
    }

    // the slots involving delta need the next degree
    let (Ok(delta), Ok(target)) = (d.bockstein(i), d.integral(i + 1)) else { return };

    // image of delta must be 2-torsion, and rho2(H^i) must be exactly ker(delta)
    let (t2, _) = target.p_torsion(2);
    let m2 = t2.num_generators();
    let rank = match d.mod2_rank(i) {
        Ok(r) => r,
        Err(_) => return,
    };
    let mut dm = F2Map::zero(m2, rank);
    for c in 0..rank {
        let col = delta.column(c);
        match target.p_torsion_coords(2, &col) {
            Ok(coords) => {
                for (row, v) in coords.iter().enumerate() {
                    if v % 2 == 1 {
                        dm.set(row, c, true);
                    }
                }
            }
            Err(_) => {
                rep.fail(
                    RELATION_NAMES[2],
                    i,
                    d.basis_label(i, c),
                    format!("delta of basis vector {} at degree {} is not 2-torsion", c, i),
                );
                return;
            }
        }
    }

    // delta ∘ rho2 = 0 and ker(delta) = im(rho2)
    let ker_delta = dm.kernel_basis();
    let im_rho = Echelon::of_vectors(rank, &r2.image_basis());
    for v in &ker_delta {
        if !im_rho.contains(v) {
            rep.fail(
                RELATION_NAMES[2],
                i,
                format!("{:?}", v),
                format!("a mod-2 class at degree {} is killed by delta but not integral", i),
            );
            return;
        }
    }
    for b in r2.image_basis() {
        if !dm.apply(&b).is_zero() {
            rep.fail(
                RELATION_NAMES[2],
                i,
                format!("{:?}", b),
                format!("delta ∘ rho2 nonzero at degree {}", i),
            );
            return;
        }
    }

    // exactness at H^{i+1}(Z): im(delta) = 2-torsion
    if Echelon::of_vectors(m2, &dm.image_basis()).rank() != m2 {
        rep.fail(
            RELATION_NAMES[2],
            i + 1,
            "2-torsion".into(),
            format!("image of delta does not cover the 2-torsion of H^{}(Z)", i + 1),
        );
    }
}

// ---------------------------------------------------------------------------
// Wu derivation
// ---------------------------------------------------------------------------

/// Fill the near-top Steenrod actions of a manifold datum from cup products
/// with the Stiefel-Whitney classes, and the mod-3 power operation from the
/// first Pontryagin class. Idempotent.
pub fn derive_wu_actions(d: &CohomologyDatum) -> Result<CohomologyDatum, Error> {
    if !d.tag.is_manifold() {
        return Err(Error::Tag("Wu derivation needs a manifold structure tag".into()));
    }
    let mut out = d.clone();
    for i in [d.dimension - 3, d.dimension - 2] {
        if out.sq2.contains_key(&i) {
            continue;
        }
        let cup = d
            .cup_w2
            .get(&i)
            .cloned()
            .ok_or_else(|| Error::MissingData(format!("cup product with w2 at degree {}", i)))?;
        out.sq2.insert(i, cup);
    }
    // Sq^2 Sq^1 at dimension - 3 is cup with w3 (w1 = 0 gives w3 = Sq^1 w2)
    let i = d.dimension - 3;
    if !out.sq2sq1.contains_key(&i) {
        if let Some(cup3) = d.cup_w3.get(&i) {
            out.sq2sq1.insert(i, cup3.clone());
        }
    }
    if out.p1_cup3.is_none() && out.p1_mod3_trivial == Some(true) {
        let n = d.n();
        if let (Some(&rlo), Some(&rhi)) =
            (d.mod3_rank.get(&(n - 1)), d.mod3_rank.get(&(n + 3)))
        {
            out.p1_cup3 = Some(F3Map::zero(rhi, rlo));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// op_kernel / op_quotient
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpName {
    Sq2Z,
    Sq4Z,
    Sq2,
    Sq1,
    Sq2Sq1,
    P1Z,
}

pub enum OpKernel {
    /// subgroup of the integral cohomology group at the domain degree
    Integral(Subgroup),
    /// basis of the kernel subspace of the mod-2 group
    Mod2(Vec<BitVec>),
}

pub fn op_kernel(d: &CohomologyDatum, op: OpName, degree: usize) -> Result<OpKernel, Error> {
    d.check_degree(degree)?;
    match op {
        OpName::Sq2Z => Ok(OpKernel::Integral(d.ker_sq2z(degree)?)),
        OpName::Sq4Z => {
            let h = d.sqm_z_hom(4, degree)?;
            Ok(OpKernel::Integral(hom_kernel_subgroup(&h)))
        }
        OpName::P1Z => {
            let rho3 = d.rho3.as_ref().ok_or_else(|| Error::MissingData("rho3".into()))?;
            let p1 = d
                .p1_cup3
                .as_ref()
                .ok_or_else(|| Error::MissingData("P1 cup map".into()))?;
            if degree != d.n() - 1 {
                return Err(Error::Degree(format!(
                    "P1_Z is only tracked at degree {}",
                    d.n() - 1
                )));
            }
            let comp = p1.compose(rho3);
            let group = d.integral(degree)?;
            // integral kernel of a mod-3-valued map
            let target = PresentedAbelianGroup::from_orders(
                (0..comp.rows).map(|i| format!("t{}", i)).collect(),
                &vec![3; comp.rows],
            );
            let mut m = IntegerMatrix::zero(comp.rows, comp.cols);
            for r in 0..comp.rows {
                for c in 0..comp.cols {
                    m.set(r, c, BigInt::from(comp.get(r, c)));
                }
            }
            let h = AbHom::new(group.clone(), target, m)?;
            Ok(OpKernel::Integral(hom_kernel_subgroup(&h)))
        }
        OpName::Sq2 => Ok(OpKernel::Mod2(d.sq2(degree)?.kernel_basis())),
        OpName::Sq1 => Ok(OpKernel::Mod2(d.sq1(degree)?.kernel_basis())),
        OpName::Sq2Sq1 => Ok(OpKernel::Mod2(d.sq2sq1(degree)?.kernel_basis())),
    }
}

/// Cokernel of the named operation out of `degree`, as a presented group.
pub fn op_quotient(
    d: &CohomologyDatum,
    op: OpName,
    degree: usize,
) -> Result<PresentedAbelianGroup, Error> {
    d.check_degree(degree)?;
    match op {
        OpName::Sq2Z => {
            let target_rank = d.mod2_rank(degree + 2)?;
            let q = F2Quotient::new(target_rank, &d.im_sq2z(degree)?);
            Ok(q.as_group())
        }
        OpName::Sq4Z => {
            let target_rank = d.mod2_rank(degree + 4)?;
            let comp = d.sq4(degree)?.compose(d.rho2(degree)?);
            let q = F2Quotient::new(target_rank, &comp.image_basis());
            Ok(q.as_group())
        }
        OpName::Sq2 => {
            let m = d.sq2(degree)?;
            let q = F2Quotient::new(m.rows, &m.image_basis());
            Ok(q.as_group())
        }
        OpName::Sq1 => {
            let m = d.sq1(degree)?;
            let q = F2Quotient::new(m.rows, &m.image_basis());
            Ok(q.as_group())
        }
        OpName::Sq2Sq1 => {
            let m = d.sq2sq1(degree)?;
            let q = F2Quotient::new(m.rows, &m.image_basis());
            Ok(q.as_group())
        }
        OpName::P1Z => {
            let rho3 = d.rho3.as_ref().ok_or_else(|| Error::MissingData("rho3".into()))?;
            let p1 = d
                .p1_cup3
                .as_ref()
                .ok_or_else(|| Error::MissingData("P1 cup map".into()))?;
            let comp = p1.compose(rho3);
            // elementary 3-group of rank = corank of the image
            let (rank, _) = comp.rank_kernel();
            let names = (0..comp.rows - rank).map(|i| format!("q{}", i)).collect();
            Ok(PresentedAbelianGroup::from_orders(names, &vec![3; comp.rows - rank]))
        }
    }
}
