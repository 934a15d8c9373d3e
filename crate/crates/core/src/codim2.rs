//! Codimension-2 engine: the cohomotopy group of an (n+2)-dimensional datum
//! as an extension of ker(Sq^2_Z : n) by Z/2^{1-eps} ⊕ QH^{n+1}(X; Sq^2_Z),
//! classified by the Bockstein-square homomorphism; plus the homological dual
//! (dimension-2 framed bordism) and the framed/spin bordism variant.

use num_bigint::BigInt;

use crate::cochain::{f2_target_hom, CohomologyDatum, OperationOverrides, StructureTag};
use crate::error::Error;
use crate::extension::{classify_elementary_two_extension, ElementaryTwoExtensionProblem};
use crate::f2::{F2Map, F2Quotient};
use crate::group::{
    direct_sum, hom_kernel_subgroup, two_torsion, PresentedAbelianGroup, Subgroup,
};
use crate::report::{Branch, GroupClass, ParamInfo, ParametricGroup, Provenance, SesReport, Splitting};

/// An extension of `right` by an elementary abelian 2-group, assembled from
/// its classifying homomorphism.
pub struct AssembledExtension {
    pub right: PresentedAbelianGroup,
    pub left_rank: usize,
    pub classifier: F2Map,
    pub middle: PresentedAbelianGroup,
    pub splitting: Splitting,
}

pub fn assemble_from_classifier(
    right: &PresentedAbelianGroup,
    left_rank: usize,
    classifier: F2Map,
) -> Result<AssembledExtension, Error> {
    let problem =
        ElementaryTwoExtensionProblem::new(right.clone(), left_rank, classifier.clone())?;
    let (middle, splitting) = classify_elementary_two_extension(&problem);
    Ok(AssembledExtension { right: right.clone(), left_rank, classifier, middle, splitting })
}

/// 2-torsion generators of a subgroup, in ambient coordinates.
pub fn two_torsion_ambient(sub: &Subgroup) -> (usize, Vec<Vec<BigInt>>) {
    let (group, incl) = sub.as_group();
    let (t, t_incl) = two_torsion(&group);
    let ambient_cols: Vec<Vec<BigInt>> = (0..t.num_generators())
        .map(|j| incl.matrix.mul_vec(&t_incl.matrix.column(j)))
        .collect();
    (t.num_generators(), ambient_cols)
}

/// Whether `op(x')` is independent of the choice of Bockstein preimage x',
/// i.e. op(rho2(H^{degree}(Z))) dies in the quotient.
pub fn lift_independent(
    d: &CohomologyDatum,
    degree: usize,
    op: &F2Map,
    quot: &F2Quotient,
) -> Result<bool, Error> {
    let r2 = d.rho2(degree)?;
    for c in 0..r2.cols {
        let img = op.apply(&r2.column(c));
        if !quot.is_zero_class(&img) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The classifier tau -> [op(x')] with delta(x') = tau, for each operation /
/// quotient pair, on the 2-torsion generators of `a_sub` ⊆ H^{degree+1}(Z).
pub fn bockstein_classifier(
    d: &CohomologyDatum,
    preimage_degree: usize,
    a_sub: &Subgroup,
    ops: &[(&F2Map, &F2Quotient)],
) -> Result<Vec<F2Map>, Error> {
    let (t_rank, gens) = two_torsion_ambient(a_sub);
    let mut out: Vec<F2Map> =
        ops.iter().map(|(_, q)| F2Map::zero(q.rank(), t_rank)).collect();
    for (j, x) in gens.iter().enumerate() {
        let x_prime = d.bockstein_preimage(preimage_degree, x)?;
        for (k, (op, quot)) in ops.iter().enumerate() {
            let img = quot.project(&op.apply(&x_prime));
            for r in 0..img.len {
                if img.get(r) {
                    out[k].set(r, j, true);
                }
            }
        }
    }
    Ok(out)
}

/// QH^{target}(X; Sq^2_Z): the mod-2 group at `target_degree` modulo the
/// image of Sq^2_Z from two degrees below.
pub fn quotient_qh(d: &CohomologyDatum, target_degree: usize) -> Result<F2Quotient, Error> {
    let rank = d.mod2_rank(target_degree)?;
    let denom = d.im_sq2z(target_degree - 2)?;
    Ok(F2Quotient::new(rank, &denom))
}

pub struct Codim2Result {
    /// ker(Sq^2_Z : n)
    pub kernel_term: PresentedAbelianGroup,
    /// QH^{n+1}(X; Sq^2_Z)
    pub quotient_term: GroupClass,
    /// whether the Z/2^{1-eps} summand is present (eps = 0); None when the
    /// CW-case Theta parameter is unresolved
    pub framed_summand_present: Option<bool>,
    pub classifier: F2Map,
    pub middle: ParametricGroup,
    pub splitting: Splitting,
    pub ses: SesReport,
    pub dual: Option<DualCodim2>,
}

/// The classifier phi: 2-torsion of ker(Sq^2_Z : n) -> QH^{n+1}(X; Sq^2_Z).
pub fn codim2_classifier(d: &CohomologyDatum) -> Result<F2Map, Error> {
    let n = d.n();
    let a = d.ker_sq2z(n)?;
    let q = quotient_qh(d, n + 1)?;
    let sq2 = d.sq2(n - 1)?.clone();
    if !lift_independent(d, n - 1, &sq2, &q)? {
        return Err(Error::Data(
            "Sq2 of an integral class escapes the image of Sq2_Z; input data are inconsistent"
                .into(),
        ));
    }
    let mut v = bockstein_classifier(d, n - 1, &a, &[(&sq2, &q)])?;
    Ok(v.remove(0))
}

/// The splitting criterion Sq2(delta^{-1}(2-torsion of ker)) ⊆ im(Sq2_Z),
/// evaluated directly (used to cross-check the classifier verdict).
pub fn codim2_split_criterion(d: &CohomologyDatum) -> Result<bool, Error> {
    let n = d.n();
    let a = d.ker_sq2z(n)?;
    let q = quotient_qh(d, n + 1)?;
    let sq2 = d.sq2(n - 1)?.clone();
    let (_, gens) = two_torsion_ambient(&a);
    // all preimages of a fixed class differ by ker(delta); by exactness that
    // is rho2(H^{n-1}(Z)), so the criterion is lift-independence plus the
    // vanishing on one preimage per generator
    if !lift_independent(d, n - 1, &sq2, &q)? {
        return Ok(false);
    }
    for x in &gens {
        let x_prime = d.bockstein_preimage(n - 1, x)?;
        if !q.is_zero_class(&sq2.apply(&x_prime)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Theta at degree n-1 for codimension-2 CW data: epsilon from the overrides
/// or forced zero when the domain ker(Sq^2_Z : n-1) is trivial.
fn cw_eps_theta(d: &CohomologyDatum, o: &OperationOverrides) -> Result<Option<u8>, Error> {
    let n = d.n();
    let dom = d.ker_sq2z(n - 1)?;
    let (g, _) = dom.as_group();
    if g.is_trivial() {
        return Ok(Some(0));
    }
    match o.theta_images.get(&(n - 1)) {
        Some(span) if span.iter().all(|v| v.iter().all(|&b| b % 2 == 0)) => Ok(Some(0)),
        Some(_) => Ok(Some(1)),
        None => Ok(None),
    }
}

pub fn codim2_group(
    d: &CohomologyDatum,
    o: &OperationOverrides,
) -> Result<Codim2Result, Error> {
    if d.codimension != 2 {
        return Err(Error::Tag(format!("codimension-2 engine on codimension {}", d.codimension)));
    }
    let n = d.n();
    let a_sub = d.ker_sq2z(n)?;
    let (a_group, _) = a_sub.as_group();
    let q = quotient_qh(d, n + 1)?;
    let phi = codim2_classifier(d)?;
    let assembled = assemble_from_classifier(&a_group, q.rank(), phi.clone())?;

    // cross-check: classifier vanishing must agree with the stated criterion
    let criterion = codim2_split_criterion(d)?;
    if criterion != phi.is_zero() {
        return Err(Error::Data(
            "splitting criterion and classifier disagree; input data are inconsistent".into(),
        ));
    }

    let quotient_term = GroupClass::elementary_two(q.rank());
    let (middle, splitting, framed) = match d.tag {
        StructureTag::Oriented | StructureTag::Spin | StructureTag::String => {
            let w2_zero = d
                .w2_zero
                .ok_or_else(|| Error::Dispatch("w2 vanishing must be declared".into()))?;
            let eps = if w2_zero { 0u8 } else { 1u8 };
            let mut mid = assembled.middle.clone();
            if eps == 0 {
                mid = direct_sum(&mid, &PresentedAbelianGroup::elementary_two(1));
            }
            let splitting = assembled.splitting.clone();
            (
                ParametricGroup::concrete(GroupClass::of(&mid), splitting.clone()),
                splitting,
                Some(eps == 0),
            )
        }
        StructureTag::CwOnly => {
            if d.mod2_rank(n + 2)? != 1 {
                return Err(Error::Hypothesis(
                    "codimension-2 CW data must have top mod-2 rank 1".into(),
                ));
            }
            if !d.sq2(n)?.is_zero() {
                // case (1): Sq2 acts nontrivially on H^n(F2)
                let splitting = assembled.splitting.clone();
                (
                    ParametricGroup::concrete(GroupClass::of(&assembled.middle), splitting.clone()),
                    splitting,
                    None,
                )
            } else {
                // case (2): split as stated, with a Z/2^{1-eps(Theta)} summand
                let full = GroupClass::of(d.integral(n)?)
                    .sum(&GroupClass::elementary_two(q.rank()));
                match cw_eps_theta(d, o)? {
                    Some(eps_theta) => {
                        let mut g = full;
                        if eps_theta == 0 {
                            g = g.sum(&GroupClass::cyclic(2));
                        }
                        (
                            ParametricGroup::concrete(g, Splitting::Split),
                            Splitting::Split,
                            Some(eps_theta == 0),
                        )
                    }
                    None => {
                        let branches = vec![
                            Branch {
                                assumptions: vec![("eps(Theta)".into(), 0)],
                                group: full.sum(&GroupClass::cyclic(2)),
                                extension_status: Splitting::Split,
                            },
                            Branch {
                                assumptions: vec![("eps(Theta)".into(), 1)],
                                group: full,
                                extension_status: Splitting::Split,
                            },
                        ];
                        (
                            ParametricGroup {
                                parameters: vec![ParamInfo {
                                    name: "eps(Theta)".into(),
                                    provenance: Provenance::Unknown,
                                    value: None,
                                }],
                                branches,
                            },
                            Splitting::Split,
                            None,
                        )
                    }
                }
            }
        }
    };

    let mut left = GroupClass::elementary_two(q.rank());
    if framed == Some(true) {
        left = left.sum(&GroupClass::cyclic(2));
    }
    let ses = SesReport {
        label: "0 -> Z/2^{1-eps} + QH^{n+1}(Sq2_Z) -> pi^n -> ker(Sq2_Z:n) -> 0".into(),
        left: ParametricGroup::concrete(left, Splitting::Split),
        middle: middle.clone(),
        right: ParametricGroup::concrete(GroupClass::of(&a_group), Splitting::Split),
        splitting: splitting.clone(),
        classifier: Some(classifier_rows(&phi)),
    };

    Ok(Codim2Result {
        kernel_term: a_group,
        quotient_term,
        framed_summand_present: framed,
        classifier: phi,
        middle,
        splitting,
        ses,
        dual: None,
    })
}

pub fn classifier_rows(m: &F2Map) -> Vec<Vec<u8>> {
    (0..m.rows)
        .map(|r| (0..m.cols).map(|c| m.get(r, c) as u8).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Homological dual
// ---------------------------------------------------------------------------

pub struct DualCodim2 {
    /// ker <w2, ->_Z ⊆ H_2(M; Z)
    pub kernel_term: PresentedAbelianGroup,
    /// H_1(M; F2) / (w2 cap_Z H_3(M; Z))
    pub quotient_rank: usize,
    pub classifier: F2Map,
    pub middle: GroupClass,
    pub splitting: Splitting,
    pub ses: SesReport,
}

pub fn codim2_bordism_dual(d: &CohomologyDatum) -> Result<DualCodim2, Error> {
    if !d.tag.is_manifold() {
        return Err(Error::Tag("the bordism dual needs a manifold structure tag".into()));
    }
    let h = d
        .homology
        .as_ref()
        .ok_or_else(|| Error::MissingData("homology block (H_1, H_2, H_3)".into()))?;
    let w2_zero = d
        .w2_zero
        .ok_or_else(|| Error::Dispatch("w2 vanishing must be declared".into()))?;

    let pair_hom = f2_target_hom(&h.h2, &h.pairing_w2)?;
    let r_sub = hom_kernel_subgroup(&pair_hom);
    let (r_group, _) = r_sub.as_group();

    let cap_z = h.cap_w2.compose(&h.rho2_h3);
    let lquot = F2Quotient::new(h.h1_mod2_rank, &cap_z.image_basis());

    // classifier via the homology Bockstein H_3(F2) -> H_2(Z)
    let (t_rank, gens) = two_torsion_ambient(&r_sub);
    let mut psi = F2Map::zero(lquot.rank(), t_rank);
    let delta = &h.homology_bockstein;
    let (t2, _) = h.h2.p_torsion(2);
    let m2 = t2.num_generators();
    let mut dm = F2Map::zero(m2, h.h3_mod2_rank);
    for c in 0..h.h3_mod2_rank {
        let coords = h.h2.p_torsion_coords(2, &delta.column(c)).map_err(|_| {
            Error::Data("homology Bockstein does not land in the 2-torsion of H_2".into())
        })?;
        for (row, v) in coords.iter().enumerate() {
            if v % 2 == 1 {
                dm.set(row, c, true);
            }
        }
    }
    for (j, x) in gens.iter().enumerate() {
        let xb = h
            .h2
            .p_torsion_coords(2, x)
            .map_err(|_| Error::Data("2-torsion coordinates failed in H_2".into()))?;
        let y = dm
            .solve(&crate::f2::BitVec::from_bits(&xb))
            .ok_or_else(|| Error::Data("2-torsion class of H_2 has no Bockstein preimage".into()))?;
        let img = lquot.project(&h.cap_w2.apply(&y));
        for r in 0..img.len {
            if img.get(r) {
                psi.set(r, j, true);
            }
        }
    }

    let assembled = assemble_from_classifier(&r_group, lquot.rank(), psi.clone())?;
    let eps = if w2_zero { 0u8 } else { 1u8 };
    let mut mid = assembled.middle.clone();
    if eps == 0 {
        mid = direct_sum(&mid, &PresentedAbelianGroup::elementary_two(1));
    }
    let middle = GroupClass::of(&mid);
    let splitting = assembled.splitting.clone();

    let mut left = GroupClass::elementary_two(lquot.rank());
    if eps == 0 {
        left = left.sum(&GroupClass::cyclic(2));
    }
    let ses = SesReport {
        label: "0 -> Omega_2^fr[1-eps] + H_1/w2~H_3 -> Omega_2^fr(M) -> ker<w2,-> -> 0".into(),
        left: ParametricGroup::concrete(left, Splitting::Split),
        middle: ParametricGroup::concrete(middle.clone(), splitting.clone()),
        right: ParametricGroup::concrete(GroupClass::of(&r_group), Splitting::Split),
        splitting: splitting.clone(),
        classifier: Some(classifier_rows(&psi)),
    };

    Ok(DualCodim2 {
        kernel_term: r_group,
        quotient_rank: lquot.rank(),
        classifier: psi,
        middle,
        splitting,
        ses,
    })
}

/// Cohomological and homological routes, with the isomorphism cross-check.
pub fn codim2_with_dual(
    d: &CohomologyDatum,
    o: &OperationOverrides,
) -> Result<Codim2Result, Error> {
    let mut res = codim2_group(d, o)?;
    if d.homology.is_some() && d.tag.is_manifold() {
        let dual = codim2_bordism_dual(d)?;
        if let Some(b) = res.middle.single_branch() {
            if b.group != dual.middle {
                return Err(Error::Data(format!(
                    "cohomological middle {} and homological middle {} disagree",
                    b.group.rendered, dual.middle.rendered
                )));
            }
        }
        res.dual = Some(dual);
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// Framed/spin bordism in dimension 2
// ---------------------------------------------------------------------------

pub struct FramedSpin2 {
    pub ses: SesReport,
    /// invariant factors of Omega_2^{fr,Spin}(M) and Omega_2^fr(M) differ by
    /// exactly one Z/2 when w2 != 0, and agree when w2 = 0
    pub corollary_consistent: bool,
}

pub fn framed_spin_bordism2(d: &CohomologyDatum) -> Result<FramedSpin2, Error> {
    let dual = codim2_bordism_dual(d)?;
    let h = d.homology.as_ref().expect("dual computation checked the homology block");
    let w2_zero = d.w2_zero.expect("dual computation checked w2");

    // same classifier and quotient, but the Omega_2^Spin = Z/2 summand is
    // always present
    let cap_z = h.cap_w2.compose(&h.rho2_h3);
    let lquot = F2Quotient::new(h.h1_mod2_rank, &cap_z.image_basis());
    let assembled =
        assemble_from_classifier(&dual.kernel_term, lquot.rank(), dual.classifier.clone())?;
    let mid = direct_sum(&assembled.middle, &PresentedAbelianGroup::elementary_two(1));
    let middle = GroupClass::of(&mid);

    let corollary_consistent = if w2_zero {
        dual.middle == middle
    } else {
        let orders: Vec<u64> = dual
            .middle
            .invariant_factors
            .iter()
            .copied()
            .chain(std::iter::once(2))
            .chain(std::iter::repeat(0).take(dual.middle.free_rank))
            .collect();
        GroupClass::from_orders(&orders) == middle
    };

    let left = GroupClass::elementary_two(lquot.rank()).sum(&GroupClass::cyclic(2));
    let ses = SesReport {
        label: "0 -> Omega_2^Spin + H_1/w2~H_3 -> Omega_2^{fr,Spin}(M) -> ker<w2,-> -> 0".into(),
        left: ParametricGroup::concrete(left, Splitting::Split),
        middle: ParametricGroup::concrete(middle, assembled.splitting.clone()),
        right: ParametricGroup::concrete(GroupClass::of(&dual.kernel_term), Splitting::Split),
        splitting: assembled.splitting,
        classifier: Some(classifier_rows(&dual.classifier)),
    };
    Ok(FramedSpin2 { ses, corollary_consistent })
}
