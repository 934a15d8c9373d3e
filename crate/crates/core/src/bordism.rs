//! Bordism-theoretic reports: the coefficient tables for small framed, spin,
//! oriented and string bordism groups, the split G-to-H structure-group SES,
//! the section-existence decision procedure for G-vector bundles, and the
//! stable-wedge test oracle.

use serde::{Deserialize, Serialize};

use crate::cochain::{CohomologyDatum, OperationOverrides, StructureTag};
use crate::codim3::spin3_bordism;
use crate::error::Error;
use crate::report::{GroupClass, ParametricGroup, SesReport, Splitting};

/// Framed bordism of a point, Omega_k^fr = pi_k^S, for k <= 7:
/// Z, Z/2, Z/2, Z/24, 0, 0, Z/2, Z/240.
pub fn framed_stem(k: usize) -> Result<GroupClass, Error> {
    let class = match k {
        0 => GroupClass::from_orders(&[0]),
        1 | 2 | 6 => GroupClass::cyclic(2),
        3 => GroupClass::cyclic(24),
        4 | 5 => GroupClass::trivial(),
        7 => GroupClass::cyclic(240),
        _ => return Err(Error::Range(format!("framed bordism table ends at k = 7, got {}", k))),
    };
    Ok(class)
}

/// Omega_k^Spin for k <= 3: Z, Z/2, Z/2, 0.
pub fn spin_point(k: usize) -> Result<GroupClass, Error> {
    let class = match k {
        0 => GroupClass::from_orders(&[0]),
        1 | 2 => GroupClass::cyclic(2),
        3 => GroupClass::trivial(),
        _ => return Err(Error::Range(format!("spin bordism table ends at k = 3, got {}", k))),
    };
    Ok(class)
}

/// Omega_k^SO for k <= 3: Z, 0, 0, 0.
pub fn so_point(k: usize) -> Result<GroupClass, Error> {
    let class = match k {
        0 => GroupClass::from_orders(&[0]),
        1 | 2 | 3 => GroupClass::trivial(),
        _ => return Err(Error::Range(format!("oriented bordism table ends at k = 3, got {}", k))),
    };
    Ok(class)
}

/// The tabulated string bordism groups: Omega_3^String = Z/24, Omega_7^String = 0.
pub fn string_point(k: usize) -> Result<GroupClass, Error> {
    let class = match k {
        3 => GroupClass::cyclic(24),
        7 => GroupClass::trivial(),
        _ => {
            return Err(Error::Range(format!(
                "string bordism is only tabulated at k = 3 and 7, got {}",
                k
            )))
        }
    };
    Ok(class)
}

/// Internal coherence of the table: framed = spin for k <= 2 and framed =
/// string where both are tabulated below 7.
pub fn coefficient_table_coherent() -> bool {
    for k in 0..=2 {
        if framed_stem(k).unwrap() != spin_point(k).unwrap() {
            return false;
        }
    }
    framed_stem(3).unwrap() == string_point(3).unwrap()
}

/// pi^n of a stable wedge of spheres of the given dimensions: the direct sum
/// of the stable stems pi_{d-n}^S, zero for d < n, error beyond the table.
pub fn wedge_oracle(sphere_dims: &[usize], n: usize) -> Result<GroupClass, Error> {
    let mut acc = GroupClass::trivial();
    for &dim in sphere_dims {
        if dim < n {
            continue;
        }
        let k = dim - n;
        if k > 7 {
            return Err(Error::Range(format!(
                "wedge oracle needs stable stems above k = 7 (sphere dim {}, n = {})",
                dim, n
            )));
        }
        acc = acc.sum(&framed_stem(k)?);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// The split G -> H structure-group SES
// ---------------------------------------------------------------------------

/// 0 -> Omega_k^G -> Omega_k^G(M) -> Omega_k^H(M) -> 0, split by the constant
/// map, for the table pairs (Spin, SO) at k = 1, 2 and (String, Spin) at k = 3.
/// At k = 2 the kernel picks up the spin-structure torsor term H_1(M; F2).
pub fn g_to_h_ses(
    d: &CohomologyDatum,
    k: usize,
    o: &OperationOverrides,
) -> Result<SesReport, Error> {
    match k {
        1 => {
            require_spin(d, k)?;
            let h = homology_block(d)?;
            let left = spin_point(1)?;
            let right = GroupClass::of(&h.h1);
            split_sum_report(
                "0 -> Omega_1^Spin -> Omega_1^Spin(M) -> Omega_1^SO(M) = H_1(M;Z) -> 0",
                left,
                right,
            )
        }
        2 => {
            require_spin(d, k)?;
            let h = homology_block(d)?;
            let left = spin_point(2)?.sum(&GroupClass::elementary_two(h.h1_mod2_rank));
            let right = GroupClass::of(&h.h2);
            split_sum_report(
                "0 -> Omega_2^Spin + H_1(M;F2) -> Omega_2^Spin(M) -> Omega_2^SO(M) = H_2(M;Z) -> 0",
                left,
                right,
            )
        }
        3 => {
            if d.tag != StructureTag::String {
                return Err(Error::Tag("k = 3 needs a string structure tag".into()));
            }
            let spin3 = spin3_bordism(d, o)?;
            let left = ParametricGroup::concrete(string_point(3)?, Splitting::Split);
            let middle = crate::report::pg_sum(&left, &spin3.middle);
            Ok(SesReport {
                label: "0 -> Omega_3^String = Z/24 -> Omega_3^String(M) -> Omega_3^Spin(M) -> 0"
                    .into(),
                left,
                middle,
                right: spin3.middle,
                splitting: Splitting::Split,
                classifier: None,
            })
        }
        _ => Err(Error::Range(format!(
            "the structure-group SES is tabulated for k = 1, 2, 3; got {}",
            k
        ))),
    }
}

/// The k = 7 fivebrane report is stubbed: the same split sequence applies,
/// but the coefficient group Omega_7^Fivebrane is not tabulated here.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FivebraneStub {
    pub k: usize,
    pub left: String,
    pub right: String,
    pub verdict: String,
}

pub fn fivebrane_stub() -> FivebraneStub {
    FivebraneStub {
        k: 7,
        left: "unknown (Omega_7^Fivebrane not tabulated)".into(),
        right: "Omega_7^String(M) (not computed)".into(),
        verdict: "Split".into(),
    }
}

fn require_spin(d: &CohomologyDatum, k: usize) -> Result<(), Error> {
    if !matches!(d.tag, StructureTag::Spin | StructureTag::String) {
        return Err(Error::Tag(format!("k = {} needs a spin structure tag", k)));
    }
    Ok(())
}

fn homology_block(d: &CohomologyDatum) -> Result<&crate::cochain::HomologyData, Error> {
    d.homology
        .as_ref()
        .ok_or_else(|| Error::MissingData("homology block (H_1, H_2, H_3)".into()))
}

fn split_sum_report(label: &str, left: GroupClass, right: GroupClass) -> Result<SesReport, Error> {
    let middle = left.sum(&right);
    Ok(SesReport {
        label: label.into(),
        left: ParametricGroup::concrete(left, Splitting::Split),
        middle: ParametricGroup::concrete(middle, Splitting::Split),
        right: ParametricGroup::concrete(right, Splitting::Split),
        splitting: Splitting::Split,
        classifier: None,
    })
}

// ---------------------------------------------------------------------------
// Section existence
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureGroupK {
    /// Spin, k = 1
    Spin1,
    /// Spin, k = 2
    Spin2,
    /// String, k = 3
    String3,
}

/// Inputs to the nowhere-vanishing-section test for a rank-n G-vector bundle
/// over an (n+k)-dimensional G-manifold. Each tri-state records whether the
/// named obstruction is zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EulerData {
    pub group: StructureGroupK,
    /// the G-Euler class e_G(E)
    #[serde(default)]
    pub e_g_zero: Option<bool>,
    /// the G-divisor kappa_G(E) in Omega_k^G
    #[serde(default)]
    pub kappa_zero: Option<bool>,
    /// the H-Euler class e_H(E)
    #[serde(default)]
    pub e_h_zero: Option<bool>,
    /// the defect class delta_G(E) in H_1(M; F2); identically zero for k = 1, 3
    #[serde(default)]
    pub defect_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum SectionVerdict {
    Exists,
    NotExists { obstruction: String },
    Insufficient { missing: Vec<String> },
}

/// Decide nowhere-vanishing-section existence from the equivalences
/// e_G(E) = 0  <=>  (kappa_G(E) = 0 and e_H(E) = 0 and delta_G(E) = 0).
/// Inconsistent tri-states are rejected.
pub fn section_existence(e: &EulerData) -> Result<SectionVerdict, Error> {
    let mut data = e.clone();
    // the defect class is zero by definition for k = 1, 3
    match data.group {
        StructureGroupK::Spin1 | StructureGroupK::String3 => {
            if data.defect_zero == Some(false) {
                return Err(Error::InconsistentInput(
                    "the defect class is identically zero for k = 1 and k = 3".into(),
                ));
            }
            data.defect_zero = Some(true);
        }
        StructureGroupK::Spin2 => {}
    }

    let parts = [
        ("kappa_G(E)", data.kappa_zero),
        ("e_H(E)", data.e_h_zero),
        ("delta_G(E)", data.defect_zero),
    ];
    let any_part_nonzero = parts.iter().find(|(_, v)| *v == Some(false));
    let all_parts_zero = parts.iter().all(|(_, v)| *v == Some(true));

    match data.e_g_zero {
        Some(true) => {
            if let Some((name, _)) = any_part_nonzero {
                return Err(Error::InconsistentInput(format!(
                    "e_G(E) = 0 but {} declared nonzero",
                    name
                )));
            }
            Ok(SectionVerdict::Exists)
        }
        Some(false) => {
            if all_parts_zero {
                return Err(Error::InconsistentInput(
                    "e_G(E) != 0 but kappa, e_H and delta all declared zero".into(),
                ));
            }
            Ok(SectionVerdict::NotExists { obstruction: "e_G(E)".into() })
        }
        None => {
            if let Some((name, _)) = any_part_nonzero {
                return Ok(SectionVerdict::NotExists { obstruction: name.to_string() });
            }
            if all_parts_zero {
                return Ok(SectionVerdict::Exists);
            }
            let missing: Vec<String> = parts
                .iter()
                .filter(|(_, v)| v.is_none())
                .map(|(n, _)| n.to_string())
                .collect();
            Ok(SectionVerdict::Insufficient { missing })
        }
    }
}
