//! Classification of extensions 0 -> V -> E -> A -> 0 with V elementary
//! abelian 2, by the connecting homomorphism phi: ₂A -> V of the snake lemma
//! applied to multiplication by 2. The middle group is presented explicitly:
//! each 2-torsion generator t of A with phi(t) != 0 fuses a Z/2^k of A with a
//! Z/2 of V into Z/2^{k+1}.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::f2::F2Map;
use crate::group::{group_invariants, PresentedAbelianGroup};
use crate::matrix::IntegerMatrix;
use crate::report::Splitting;

pub struct ElementaryTwoExtensionProblem {
    pub right: PresentedAbelianGroup,
    /// rank of the elementary abelian 2 left term
    pub left_rank: usize,
    /// phi on the canonical 2-torsion generators of `right`:
    /// rows = left generators, cols = 2-torsion generators
    pub classifier: F2Map,
}

impl ElementaryTwoExtensionProblem {
    pub fn new(
        right: PresentedAbelianGroup,
        left_rank: usize,
        classifier: F2Map,
    ) -> Result<Self, Error> {
        let (torsion_two, _) = right.p_torsion(2);
        if classifier.cols != torsion_two.num_generators() || classifier.rows != left_rank {
            return Err(Error::Data(format!(
                "classifier shape {}x{} does not match left rank {} and 2-torsion rank {}",
                classifier.rows,
                classifier.cols,
                left_rank,
                torsion_two.num_generators()
            )));
        }
        Ok(ElementaryTwoExtensionProblem { right, left_rank, classifier })
    }
}

/// Present the middle group of the classified extension and report whether it
/// splits (it splits exactly when phi = 0).
pub fn classify_elementary_two_extension(
    p: &ElementaryTwoExtensionProblem,
) -> (PresentedAbelianGroup, Splitting) {
    let (free_rank, factors) = group_invariants(&p.right);
    let a_gens = factors.len() + free_rank;
    let total = a_gens + p.left_rank;

    let mut names: Vec<String> = (0..factors.len()).map(|i| format!("a{}", i)).collect();
    names.extend((0..free_rank).map(|i| format!("f{}", i)));
    names.extend((0..p.left_rank).map(|j| format!("v{}", j)));

    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    // relations d_i * a_i - lift(phi(t_i)); torsion generator index runs over
    // the even invariant factors, in canonical order
    let mut torsion_index = 0usize;
    for (i, d) in factors.iter().enumerate() {
        let mut col = vec![BigInt::zero(); total];
        col[i] = d.clone();
        if (d % BigInt::from(2)).is_zero() {
            for j in 0..p.left_rank {
                if p.classifier.get(j, torsion_index) {
                    col[a_gens + j] = -BigInt::one();
                }
            }
            torsion_index += 1;
        }
        cols.push(col);
    }
    for j in 0..p.left_rank {
        let mut col = vec![BigInt::zero(); total];
        col[a_gens + j] = BigInt::from(2);
        cols.push(col);
    }

    let middle =
        PresentedAbelianGroup::new(names, IntegerMatrix::from_columns(total, &cols));
    let verdict = if p.classifier.is_zero() { Splitting::Split } else { Splitting::NonSplit };
    (middle, verdict)
}

// ---------------------------------------------------------------------------
// Small-group enumeration of candidate middles
// ---------------------------------------------------------------------------

/// All isomorphism types of finite abelian groups of order n, as order lists.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![vec![]];
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    let mut result: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factors {
        let parts = partitions(e);
        let mut next = Vec::new();
        for base in &result {
            for part in &parts {
                let mut g = base.clone();
                for &exp in part {
                    g.push(p.pow(exp));
                }
                next.push(g);
            }
        }
        result = next;
    }
    for g in &mut result {
        g.sort_unstable();
    }
    result.sort();
    result
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Candidate middles of an extension of `right_orders` by the elementary
/// abelian 2-group of rank `left_rank`: all isomorphism types E of the right
/// order that contain a subgroup V isomorphic to (Z/2)^left_rank with
/// E/V isomorphic to `right_orders`. Finite inputs only; used to bound
/// extensions the classifier leaves undetermined.
pub fn enumerate_extension_middles(
    right_orders: &[u64],
    left_rank: usize,
) -> Vec<crate::report::GroupClass> {
    use crate::report::GroupClass;
    let right = GroupClass::from_orders(right_orders);
    if right.free_rank > 0 {
        // reduce to the torsion part: the free part always splits off
        let torsion: Vec<u64> = right.invariant_factors.clone();
        return enumerate_extension_middles(&torsion, left_rank)
            .into_iter()
            .map(|g| {
                let orders: Vec<u64> = g
                    .invariant_factors
                    .iter()
                    .copied()
                    .chain(std::iter::repeat(0).take(right.free_rank))
                    .collect();
                GroupClass::from_orders(&orders)
            })
            .collect();
    }
    let order_r: u64 = right_orders.iter().product();
    let total = order_r << left_rank;
    let mut found = Vec::new();
    for candidate in abelian_groups_of_order(total) {
        let e = PresentedAbelianGroup::from_orders(
            (0..candidate.len()).map(|i| format!("e{}", i)).collect(),
            &candidate,
        );
        if has_elementary_sub_with_quotient(&e, left_rank, &right.invariant_factors) {
            found.push(GroupClass::from_orders(&candidate));
        }
    }
    found
}

fn has_elementary_sub_with_quotient(
    e: &PresentedAbelianGroup,
    rank: usize,
    quotient_factors: &[u64],
) -> bool {
    use crate::matrix::IntegerMatrix;
    // enumerate subgroups of the 2-torsion of rank `rank`
    let (t2, gens) = e.p_torsion(2);
    let m = t2.num_generators();
    if m < rank {
        return false;
    }
    // all rank-`rank` subspaces of F2^m, via tuples of increasing nonzero masks
    let masks: Vec<u32> = (1..(1u32 << m)).collect();
    let mut chosen = vec![0u32; rank];
    fn subspace_signature(basis: &[u32]) -> Vec<u32> {
        // row-reduce to a canonical basis signature
        let mut rows: Vec<u32> = basis.to_vec();
        let mut out = Vec::new();
        for i in 0..rows.len() {
            let Some(lead) = (0..32).rev().find(|b| rows[i] >> b & 1 == 1) else { continue };
            for j in 0..rows.len() {
                if j != i && rows[j] >> lead & 1 == 1 {
                    rows[j] ^= rows[i];
                }
            }
            out.push(rows[i]);
        }
        out.sort_unstable();
        out
    }
    fn go(
        e: &PresentedAbelianGroup,
        gens: &[Vec<num_bigint::BigInt>],
        masks: &[u32],
        chosen: &mut [u32],
        depth: usize,
        start: usize,
        quotient_factors: &[u64],
        seen: &mut std::collections::BTreeSet<Vec<u32>>,
    ) -> bool {
        if depth == chosen.len() {
            let sig = subspace_signature(chosen);
            if sig.len() != chosen.len() || !seen.insert(sig) {
                return false;
            }
            // build the subgroup generator matrix and test the quotient
            let cols: Vec<Vec<num_bigint::BigInt>> = chosen
                .iter()
                .map(|mask| {
                    let mut v = vec![num_bigint::BigInt::from(0); e.num_generators()];
                    for (i, g) in gens.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            for (r, x) in g.iter().enumerate() {
                                v[r] += x;
                            }
                        }
                    }
                    v
                })
                .collect();
            let vmat = IntegerMatrix::from_columns(e.num_generators(), &cols);
            let rel = vmat.hcat(&e.relations);
            let q = PresentedAbelianGroup::new(e.generator_names.clone(), rel);
            let factors: Vec<u64> = q
                .invariant_factors()
                .iter()
                .map(|d| u64::try_from(d).unwrap())
                .collect();
            return q.free_rank() == 0 && factors == quotient_factors;
        }
        for k in start..masks.len() {
            chosen[depth] = masks[k];
            if go(e, gens, masks, chosen, depth + 1, k + 1, quotient_factors, seen) {
                return true;
            }
        }
        false
    }
    let mut seen = std::collections::BTreeSet::new();
    go(e, &gens, &masks, &mut chosen, 0, 0, quotient_factors, &mut seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_sum;

    fn zn(n: u64) -> PresentedAbelianGroup {
        PresentedAbelianGroup::from_orders(vec!["g".into()], &[n])
    }

    #[test]
    fn identity_classifier_gives_z4() {
        let p = ElementaryTwoExtensionProblem::new(zn(2), 1, F2Map::from_rows(&[vec![1]]))
            .unwrap();
        let (e, verdict) = classify_elementary_two_extension(&p);
        assert_eq!(group_invariants(&e), (0, vec![BigInt::from(4)]));
        assert_eq!(verdict, Splitting::NonSplit);
    }

    #[test]
    fn zero_classifier_gives_direct_sum() {
        let a = PresentedAbelianGroup::from_orders(vec!["a".into(), "b".into()], &[4, 3]);
        let p = ElementaryTwoExtensionProblem::new(a.clone(), 2, F2Map::zero(2, 1)).unwrap();
        let (e, verdict) = classify_elementary_two_extension(&p);
        let expected = direct_sum(&a, &PresentedAbelianGroup::elementary_two(2));
        assert_eq!(group_invariants(&e), group_invariants(&expected));
        assert_eq!(verdict, Splitting::Split);
    }

    #[test]
    fn torsion_fusion_with_free_part() {
        // A = Z ⊕ Z/2, V = (Z/2)^2, phi(torsion gen) = (1, 0):
        // middle is Z ⊕ Z/4 ⊕ Z/2
        let a = PresentedAbelianGroup::from_orders(vec!["t".into(), "f".into()], &[2, 0]);
        let p = ElementaryTwoExtensionProblem::new(a, 2, F2Map::from_rows(&[vec![1], vec![0]]))
            .unwrap();
        let (e, verdict) = classify_elementary_two_extension(&p);
        assert_eq!(group_invariants(&e), (1, vec![BigInt::from(2), BigInt::from(4)]));
        assert_eq!(verdict, Splitting::NonSplit);
    }

    #[test]
    fn small_group_enumeration() {
        assert_eq!(
            abelian_groups_of_order(8),
            vec![vec![2, 2, 2], vec![2, 4], vec![8]]
        );
        assert_eq!(abelian_groups_of_order(12), vec![vec![2, 2, 3], vec![3, 4]]);
        // extensions of Z/2 by Z/2: exactly Z/4 and Z/2 ⊕ Z/2
        let middles = enumerate_extension_middles(&[2], 1);
        let rendered: Vec<String> = middles.iter().map(|g| g.rendered.clone()).collect();
        assert_eq!(rendered, vec!["Z/2 + Z/2", "Z/4"]);
        // Z/8 does not contain (Z/2)^2
        let middles = enumerate_extension_middles(&[4], 1);
        let rendered: Vec<String> = middles.iter().map(|g| g.rendered.clone()).collect();
        assert_eq!(rendered, vec!["Z/2 + Z/4", "Z/8"]);
    }

    #[test]
    fn order_accounting() {
        // |E| = |A| * |V| for finite inputs
        let a = PresentedAbelianGroup::from_orders(vec!["a".into(), "b".into()], &[2, 8]);
        for bits in 0..16u8 {
            let phi = F2Map::from_rows(&[
                vec![bits & 1, (bits >> 1) & 1],
                vec![(bits >> 2) & 1, (bits >> 3) & 1],
            ]);
            let p = ElementaryTwoExtensionProblem::new(a.clone(), 2, phi).unwrap();
            let (e, _) = classify_elementary_two_extension(&p);
            assert_eq!(e.torsion_order(), BigInt::from(64));
            assert_eq!(e.free_rank(), 0);
        }
    }
}
