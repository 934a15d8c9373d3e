//! Report-side value types: group isomorphism classes, parametric groups over
//! a lattice of unresolved operation parameters, and short-exact-sequence
//! reports with splitting verdicts.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::group::PresentedAbelianGroup;

/// Rendering convention: free rank first, invariant factors ascending,
/// e.g. "Z^1 + Z/2 + Z/4"; "0" for the trivial group.
pub fn render_group(free_rank: usize, factors: &[BigInt]) -> String {
    let mut parts = Vec::new();
    if free_rank > 0 {
        parts.push(format!("Z^{}", free_rank));
    }
    for d in factors {
        parts.push(format!("Z/{}", d));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// An abelian group isomorphism class: free rank plus invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClass {
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
    #[serde(rename = "invariantFactors")]
    pub invariant_factors: Vec<u64>,
    pub rendered: String,
}

impl GroupClass {
    pub fn of(g: &PresentedAbelianGroup) -> Self {
        let factors: Vec<u64> = g
            .invariant_factors()
            .iter()
            .map(|d| u64::try_from(d).expect("invariant factor exceeds u64"))
            .collect();
        GroupClass {
            free_rank: g.free_rank(),
            invariant_factors: factors,
            rendered: g.render(),
        }
    }

    pub fn trivial() -> Self {
        GroupClass { free_rank: 0, invariant_factors: vec![], rendered: "0".into() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        GroupClass {
            free_rank: 0,
            invariant_factors: vec![n],
            rendered: render_group(0, &[BigInt::from(n)]),
        }
    }

    pub fn elementary_two(rank: usize) -> Self {
        let factors = vec![2u64; rank];
        let big: Vec<BigInt> = factors.iter().map(|&f| BigInt::from(f)).collect();
        GroupClass { free_rank: 0, invariant_factors: factors, rendered: render_group(0, &big) }
    }

    /// Direct sum, renormalized to canonical invariant factors.
    pub fn sum(&self, other: &GroupClass) -> GroupClass {
        let mut orders: Vec<u64> = self
            .invariant_factors
            .iter()
            .chain(other.invariant_factors.iter())
            .copied()
            .collect();
        orders.extend(std::iter::repeat(0).take(self.free_rank + other.free_rank));
        Self::from_orders(&orders)
    }

    /// Canonical class of ⊕ Z/orders\[i\] with 0 meaning a free summand.
    pub fn from_orders(orders: &[u64]) -> GroupClass {
        let free_rank = orders.iter().filter(|&&o| o == 0).count();
        let torsion: Vec<u64> = orders.iter().copied().filter(|&o| o > 1).collect();
        let factors = canonical_invariant_factors(&torsion);
        let big: Vec<BigInt> = factors.iter().map(|&f| BigInt::from(f)).collect();
        GroupClass {
            free_rank,
            invariant_factors: factors.clone(),
            rendered: render_group(free_rank, &big),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Torsion order (group order when the free rank is zero).
    pub fn torsion_order(&self) -> BigInt {
        let mut o = BigInt::from(1u32);
        for d in &self.invariant_factors {
            o *= BigInt::from(*d);
        }
        o
    }
}

/// Canonical invariant factors d1 | d2 | ... of ⊕ Z/orders\[i\].
fn canonical_invariant_factors(orders: &[u64]) -> Vec<u64> {
    // collect p-power multisets, then rebuild the divisibility chain
    use std::collections::BTreeMap;
    let mut ppowers: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &o in orders {
        let mut n = o;
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0u32;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                ppowers.entry(p).or_default().push(e);
            }
            p += 1;
        }
        if n > 1 {
            ppowers.entry(n).or_default().push(1);
        }
    }
    let width = ppowers.values().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; width];
    for (p, mut exps) in ppowers {
        exps.sort_unstable();
        // largest exponent goes to the last factor
        for (i, e) in exps.iter().rev().enumerate() {
            let slot = width - 1 - i;
            factors[slot] *= p.pow(*e);
        }
    }
    factors.retain(|&f| f > 1);
    factors
}

/// Whether an extension is known to split, known not to, or left open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Splitting {
    Split,
    NonSplit,
    Undetermined { criterion: String },
}

/// One evaluated point of the parameter lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// (parameter name, assumed value) pairs; empty for a concrete result.
    pub assumptions: Vec<(String, u8)>,
    pub group: GroupClass,
    #[serde(rename = "extensionStatus")]
    pub extension_status: Splitting,
}

/// Provenance of a parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Forced,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamInfo {
    pub name: String,
    pub provenance: Provenance,
    /// Present when computed or forced.
    pub value: Option<u8>,
}

/// A group isomorphism type as a function of unresolved boolean parameters.
/// Branches cover the full assignment lattice of unknown parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricGroup {
    pub parameters: Vec<ParamInfo>,
    pub branches: Vec<Branch>,
}

impl ParametricGroup {
    pub fn concrete(group: GroupClass, status: Splitting) -> Self {
        ParametricGroup {
            parameters: vec![],
            branches: vec![Branch { assumptions: vec![], group, extension_status: status }],
        }
    }

    pub fn single_branch(&self) -> Option<&Branch> {
        if self.branches.len() == 1 {
            Some(&self.branches[0])
        } else {
            None
        }
    }

    pub fn render(&self) -> String {
        if let Some(b) = self.single_branch() {
            b.group.rendered.clone()
        } else {
            let rows: Vec<String> = self
                .branches
                .iter()
                .map(|b| {
                    let assum: Vec<String> =
                        b.assumptions.iter().map(|(n, v)| format!("{}={}", n, v)).collect();
                    format!("[{}] {}", assum.join(", "), b.group.rendered)
                })
                .collect();
            rows.join(" | ")
        }
    }
}

/// Merge verdicts: a branch is split only when every constituent is.
pub fn merge_status(a: &Splitting, b: &Splitting) -> Splitting {
    match (a, b) {
        (Splitting::NonSplit, _) | (_, Splitting::NonSplit) => Splitting::NonSplit,
        (Splitting::Undetermined { criterion }, _) => {
            Splitting::Undetermined { criterion: criterion.clone() }
        }
        (_, Splitting::Undetermined { criterion }) => {
            Splitting::Undetermined { criterion: criterion.clone() }
        }
        _ => Splitting::Split,
    }
}

fn merge_assumptions(
    a: &[(String, u8)],
    b: &[(String, u8)],
) -> Option<Vec<(String, u8)>> {
    let mut out = a.to_vec();
    for (name, v) in b {
        match out.iter().find(|(n, _)| n == name) {
            Some((_, existing)) if existing != v => return None,
            Some(_) => {}
            None => out.push((name.clone(), *v)),
        }
    }
    Some(out)
}

/// Direct sum of parametric groups over the product of their branch lattices;
/// conflicting assumption pairs are dropped.
pub fn pg_sum(a: &ParametricGroup, b: &ParametricGroup) -> ParametricGroup {
    let mut parameters = a.parameters.clone();
    for p in &b.parameters {
        if !parameters.iter().any(|q| q.name == p.name) {
            parameters.push(p.clone());
        }
    }
    let mut branches = Vec::new();
    for ba in &a.branches {
        for bb in &b.branches {
            let Some(assumptions) = merge_assumptions(&ba.assumptions, &bb.assumptions) else {
                continue;
            };
            branches.push(Branch {
                assumptions,
                group: ba.group.sum(&bb.group),
                extension_status: merge_status(&ba.extension_status, &bb.extension_status),
            });
        }
    }
    ParametricGroup { parameters, branches }
}

/// A computed short exact sequence 0 -> left -> middle -> right -> 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SesReport {
    pub label: String,
    pub left: ParametricGroup,
    pub middle: ParametricGroup,
    pub right: ParametricGroup,
    pub splitting: Splitting,
    /// Matrix of the classifying homomorphism on 2-torsion generators,
    /// when one was computed (rows = left generators, cols = torsion gens).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier: Option<Vec<Vec<u8>>>,
}

impl SesReport {
    /// Exactness accounting: finite orders multiply, free ranks add.
    /// For parametric sides, checks every aligned branch triple.
    pub fn accounting_holds(&self) -> bool {
        for (l, m, r) in aligned_branches(&self.left, &self.middle, &self.right) {
            if l.free_rank + r.free_rank != m.free_rank {
                return false;
            }
            if l.torsion_order() * r.torsion_order() != m.torsion_order() {
                return false;
            }
        }
        true
    }
}

/// Pair up branches of the three sides by matching assumption sets; sides with
/// a single branch are broadcast against the middle's branches.
fn aligned_branches<'a>(
    left: &'a ParametricGroup,
    middle: &'a ParametricGroup,
    right: &'a ParametricGroup,
) -> Vec<(&'a GroupClass, &'a GroupClass, &'a GroupClass)> {
    let pick = |side: &'a ParametricGroup, assumptions: &[(String, u8)]| -> Option<&'a GroupClass> {
        if let Some(b) = side.single_branch() {
            return Some(&b.group);
        }
        side.branches
            .iter()
            .find(|b| b.assumptions.iter().all(|a| assumptions.contains(a)))
            .map(|b| &b.group)
    };
    middle
        .branches
        .iter()
        .filter_map(|mb| {
            let l = pick(left, &mb.assumptions)?;
            let r = pick(right, &mb.assumptions)?;
            Some((l, &mb.group, r))
        })
        .collect()
}
