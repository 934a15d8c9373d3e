//! JSON input schema for cohomology data and its loader.
//!
//! Two styles are supported per file and can be mixed:
//!  - ring mode: a truncated mod-2 polynomial ring is given and the whole
//!    mod-2 side (ranks, Sq^1/Sq^2/Sq^4, cup products with w2/w3) is expanded
//!    by the Cartan formula over the sorted monomial bases;
//!  - matrix mode: mod-2 ranks and operation matrices are listed explicitly
//!    (rows = codomain basis, columns = domain basis, entries 0/1).
//!
//! Explicit matrices win over ring-derived ones; a warning is recorded when
//! they disagree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cochain::{CohomologyDatum, HomologyData, OperationOverrides, StructureTag};
use crate::error::Error;
use crate::f2::F2Map;
use crate::f3::F3Map;
use crate::group::PresentedAbelianGroup;
use crate::matrix::IntegerMatrix;
use crate::ring::{RingGenerator, RingPresentation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub name: String,
    pub dimension: usize,
    pub codimension: usize,
    pub structure: StructureTag,
    #[serde(default)]
    pub ring: Option<RingDoc>,
    /// per-degree integral presentations (and mod-2 ranks in matrix mode)
    pub degrees: BTreeMap<String, DegreeDoc>,
    #[serde(default)]
    pub maps: MapsDoc,
    #[serde(default, rename = "w2zero")]
    pub w2_zero: Option<bool>,
    #[serde(default, rename = "w3zero")]
    pub w3_zero: Option<bool>,
    #[serde(default)]
    pub mod3: Option<Mod3Doc>,
    #[serde(default)]
    pub homology: Option<HomologyDoc>,
    #[serde(default)]
    pub overrides: Option<OperationOverrides>,
    /// free-form provenance notes; ignored by the loader
    #[serde(default)]
    pub notes: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub generators: Vec<RingGeneratorDoc>,
    pub w2: String,
    pub w3: String,
    pub top: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingGeneratorDoc {
    pub name: String,
    pub degree: usize,
    pub truncation: u32,
    /// Sq^i values as polynomial strings, keyed by i
    #[serde(default)]
    pub sq: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeDoc {
    /// invariant factors of the integral group; 0 denotes a free summand
    pub orders: Vec<u64>,
    #[serde(default, rename = "mod2Rank")]
    pub mod2_rank: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsDoc {
    /// ring mode: per degree, one polynomial string per integral generator
    #[serde(default)]
    pub rho2: BTreeMap<String, Vec<String>>,
    /// matrix mode: rows = mod-2 basis, cols = integral generators
    #[serde(default, rename = "rho2Matrix")]
    pub rho2_matrix: BTreeMap<String, Vec<Vec<u8>>>,
    /// ring mode: per degree, monomial string -> integer coordinates in the
    /// integral generators one degree up
    #[serde(default)]
    pub bockstein: BTreeMap<String, BTreeMap<String, Vec<i64>>>,
    /// matrix mode: rows = integral generators one degree up, cols = mod-2 basis
    #[serde(default, rename = "bocksteinMatrix")]
    pub bockstein_matrix: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub sq1: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default)]
    pub sq2: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default)]
    pub sq4: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default, rename = "sq2sq1")]
    pub sq2sq1: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default, rename = "cupW2")]
    pub cup_w2: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default, rename = "cupW3")]
    pub cup_w3: BTreeMap<String, Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mod3Doc {
    #[serde(default)]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default)]
    pub rho3: Option<Vec<Vec<u8>>>,
    #[serde(default)]
    pub bockstein3: Option<Vec<Vec<i64>>>,
    #[serde(default, rename = "p1cup3")]
    pub p1_cup3: Option<Vec<Vec<u8>>>,
    #[serde(default, rename = "p1Mod3Trivial")]
    pub p1_mod3_trivial: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyDoc {
    pub h1: Vec<u64>,
    pub h2: Vec<u64>,
    pub h3: Vec<u64>,
    #[serde(rename = "h1Mod2Rank")]
    pub h1_mod2_rank: usize,
    #[serde(rename = "h3Mod2Rank")]
    pub h3_mod2_rank: usize,
    #[serde(default, rename = "rho2H3")]
    pub rho2_h3: Option<Vec<Vec<u8>>>,
    #[serde(default, rename = "capW2")]
    pub cap_w2: Option<Vec<Vec<u8>>>,
    #[serde(default, rename = "pairingW2")]
    pub pairing_w2: Option<Vec<Vec<u8>>>,
    #[serde(default, rename = "homologyBockstein")]
    pub homology_bockstein: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Default)]
pub struct LoadOutcome {
    pub datum: CohomologyDatum,
    pub overrides: OperationOverrides,
    pub warnings: Vec<String>,
}

impl Default for CohomologyDatum {
    fn default() -> Self {
        CohomologyDatum {
            name: String::new(),
            dimension: 0,
            codimension: 2,
            tag: StructureTag::CwOnly,
            window_lo: 0,
            window_hi: 0,
            integral: BTreeMap::new(),
            mod2_rank: BTreeMap::new(),
            mod2_labels: BTreeMap::new(),
            rho2: BTreeMap::new(),
            bockstein: BTreeMap::new(),
            sq1: BTreeMap::new(),
            sq2: BTreeMap::new(),
            sq4: BTreeMap::new(),
            sq2sq1: BTreeMap::new(),
            w2_zero: None,
            w3_zero: None,
            cup_w2: BTreeMap::new(),
            cup_w3: BTreeMap::new(),
            ring: None,
            mod3_rank: BTreeMap::new(),
            rho3: None,
            bockstein3: None,
            p1_cup3: None,
            p1_mod3_trivial: None,
            homology: None,
        }
    }
}

pub fn parse_document(text: &str) -> Result<InputDoc, Error> {
    let doc: InputDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("input JSON: {}", e)))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "schemaVersion {} not supported (expected {})",
            doc.schema_version, SCHEMA_VERSION
        )));
    }
    Ok(doc)
}

pub fn load_datum(text: &str) -> Result<LoadOutcome, Error> {
    let doc = parse_document(text)?;
    build_datum(&doc)
}

fn degree_key(s: &str) -> Result<usize, Error> {
    s.parse::<usize>()
        .map_err(|_| Error::Parse(format!("degree key '{}' is not a number", s)))
}

pub fn build_datum(doc: &InputDoc) -> Result<LoadOutcome, Error> {
    if doc.codimension != 2 && doc.codimension != 3 {
        return Err(Error::Parse(format!(
            "codimension must be 2 or 3, got {}",
            doc.codimension
        )));
    }
    if doc.dimension <= doc.codimension + 4 {
        return Err(Error::Parse(format!(
            "dimension {} too small for codimension {} (stable range needs n >= k+2, and the \
             engines need n >= k+4... use a larger model dimension)",
            doc.dimension, doc.codimension
        )));
    }
    let n = doc.dimension - doc.codimension;
    let (window_lo, window_hi) = if doc.codimension == 2 { (n - 1, n + 2) } else { (n - 2, n + 3) };

    let mut warnings = Vec::new();
    let mut datum = CohomologyDatum {
        name: doc.name.clone(),
        dimension: doc.dimension,
        codimension: doc.codimension,
        tag: doc.structure,
        window_lo,
        window_hi,
        ..Default::default()
    };

    // ring expansion first
    let ring = match &doc.ring {
        Some(rd) => Some(build_ring(rd)?),
        None => None,
    };
    if let Some(ring) = &ring {
        for i in window_lo..=window_hi {
            let basis = ring.basis(i);
            datum.mod2_rank.insert(i, basis.len());
            datum
                .mod2_labels
                .insert(i, basis.iter().map(|m| ring.render_monomial(m)).collect());
            if i + 1 <= window_hi {
                datum.sq1.insert(i, ring.sq_matrix(1, i)?);
            }
            if i + 2 <= window_hi {
                datum.sq2.insert(i, ring.sq_matrix(2, i)?);
            }
            if i + 4 <= window_hi {
                datum.sq4.insert(i, ring.sq_matrix(4, i)?);
            }
        }
        // cup products with w2/w3 at the dispatch and Wu degrees
        for i in [doc.dimension - 3, doc.dimension - 2] {
            if i >= window_lo && i + 2 <= window_hi {
                datum.cup_w2.insert(i, ring.cup_matrix_padded(&ring.w2.clone(), i, 2)?);
            }
        }
        let i = doc.dimension - 3;
        if i >= window_lo && i + 3 <= window_hi {
            datum.cup_w3.insert(i, ring.cup_matrix_padded(&ring.w3.clone(), i, 3)?);
        }
        datum.w2_zero = Some(ring.w2.is_empty());
        datum.w3_zero = Some(ring.w3.is_empty());
        datum.ring = Some(ring.clone());
    }

    // explicit declarations win over ring-derived data
    if doc.w2_zero.is_some() {
        datum.w2_zero = doc.w2_zero;
    }
    if doc.w3_zero.is_some() {
        datum.w3_zero = doc.w3_zero;
    }

    // integral groups
    for (key, deg) in &doc.degrees {
        let i = degree_key(key)?;
        if i < window_lo || i > window_hi {
            return Err(Error::Degree(format!(
                "degree {} outside the window [{}, {}] for codimension {}",
                i, window_lo, window_hi, doc.codimension
            )));
        }
        let names = (0..deg.orders.len()).map(|j| format!("g{}_{}", i, j)).collect();
        datum.integral.insert(i, PresentedAbelianGroup::from_orders(names, &deg.orders));
        if let Some(r) = deg.mod2_rank {
            if let Some(existing) = datum.mod2_rank.get(&i) {
                if *existing != r {
                    warnings.push(format!(
                        "mod-2 rank at degree {} declared {} but the ring gives {}; keeping \
                         the declaration",
                        i, r, existing
                    ));
                }
            }
            datum.mod2_rank.insert(i, r);
        }
    }
    for i in window_lo..=window_hi {
        if !datum.integral.contains_key(&i) {
            return Err(Error::MissingData(format!(
                "integral cohomology at degree {} (whole window [{}, {}] is required)",
                i, window_lo, window_hi
            )));
        }
        if !datum.mod2_rank.contains_key(&i) {
            return Err(Error::MissingData(format!("mod-2 rank at degree {}", i)));
        }
    }

    // rho2
    for i in window_lo..=window_hi {
        let gens = datum.integral[&i].num_generators();
        let rank = datum.mod2_rank[&i];
        let key = i.to_string();
        let m = if let Some(rows) = doc.maps.rho2_matrix.get(&key) {
            shape_checked_f2(rows, rank, gens, &format!("rho2Matrix at degree {}", i))?
        } else if let Some(polys) = doc.maps.rho2.get(&key) {
            let ring = ring.as_ref().ok_or_else(|| {
                Error::Parse("polynomial-style rho2 needs a ring presentation".into())
            })?;
            if polys.len() != gens {
                return Err(Error::Parse(format!(
                    "rho2 at degree {}: {} polynomials for {} integral generators",
                    i,
                    polys.len(),
                    gens
                )));
            }
            let cols: Vec<crate::f2::BitVec> = polys
                .iter()
                .map(|p| {
                    let poly = ring.parse_polynomial(p)?;
                    ring.coords(&poly, i)
                })
                .collect::<Result<_, _>>()?;
            F2Map::from_columns(rank, &cols)
        } else if gens == 0 || rank == 0 {
            // the zero map is the only map when either side vanishes
            F2Map::zero(rank, gens)
        } else {
            return Err(Error::MissingData(format!("rho2 at degree {}", i)));
        };
        datum.rho2.insert(i, m);
    }

    // bockstein
    for i in window_lo..window_hi {
        let rank = datum.mod2_rank[&i];
        let target_gens = datum.integral[&(i + 1)].num_generators();
        let key = i.to_string();
        let m = if let Some(rows) = doc.maps.bockstein_matrix.get(&key) {
            shape_checked_int(rows, target_gens, rank, &format!("bocksteinMatrix at degree {}", i))?
        } else if let Some(entries) = doc.maps.bockstein.get(&key) {
            let ring = ring.as_ref().ok_or_else(|| {
                Error::Parse("monomial-style bockstein needs a ring presentation".into())
            })?;
            let basis = ring.basis(i);
            let mut m = IntegerMatrix::zero(target_gens, rank);
            for (mono_str, coords) in entries {
                let poly = ring.parse_polynomial(mono_str)?;
                if poly.len() != 1 {
                    return Err(Error::Parse(format!(
                        "bockstein key '{}' must be a single monomial",
                        mono_str
                    )));
                }
                let col = basis.binary_search(&poly[0]).map_err(|_| {
                    Error::Parse(format!("bockstein key '{}' not in degree-{} basis", mono_str, i))
                })?;
                if coords.len() != target_gens {
                    return Err(Error::Parse(format!(
                        "bockstein value for '{}' has {} coordinates, expected {}",
                        mono_str,
                        coords.len(),
                        target_gens
                    )));
                }
                for (r, v) in coords.iter().enumerate() {
                    m.set(r, col, BigInt::from(*v));
                }
            }
            m
        } else {
            IntegerMatrix::zero(target_gens, rank)
        };
        datum.bockstein.insert(i, m);
    }

    // explicit operation matrices override ring-derived ones
    override_f2_table(
        &doc.maps.sq1,
        &mut datum.sq1,
        &datum.mod2_rank,
        1,
        window_lo,
        window_hi,
        "sq1",
        &mut warnings,
    )?;
    override_f2_table(
        &doc.maps.sq2,
        &mut datum.sq2,
        &datum.mod2_rank,
        2,
        window_lo,
        window_hi,
        "sq2",
        &mut warnings,
    )?;
    override_f2_table(
        &doc.maps.sq4,
        &mut datum.sq4,
        &datum.mod2_rank,
        4,
        window_lo,
        window_hi,
        "sq4",
        &mut warnings,
    )?;
    override_f2_table(
        &doc.maps.sq2sq1,
        &mut datum.sq2sq1,
        &datum.mod2_rank,
        3,
        window_lo,
        window_hi,
        "sq2sq1",
        &mut warnings,
    )?;
    override_f2_table(
        &doc.maps.cup_w2,
        &mut datum.cup_w2,
        &datum.mod2_rank,
        2,
        window_lo,
        window_hi,
        "cupW2",
        &mut warnings,
    )?;
    override_f2_table(
        &doc.maps.cup_w3,
        &mut datum.cup_w3,
        &datum.mod2_rank,
        3,
        window_lo,
        window_hi,
        "cupW3",
        &mut warnings,
    )?;

    // a missing operation matrix is only auto-filled when one side has rank
    // zero, where the zero map is the unique map; anything else must be given
    for (table, shift) in [
        (&mut datum.sq1, 1usize),
        (&mut datum.sq2, 2),
        (&mut datum.sq4, 4),
    ] {
        for i in window_lo..=window_hi.saturating_sub(shift) {
            if table.contains_key(&i) {
                continue;
            }
            let dom = datum.mod2_rank[&i];
            let cod = datum.mod2_rank[&(i + shift)];
            if dom == 0 || cod == 0 {
                table.insert(i, F2Map::zero(cod, dom));
            }
        }
    }

    // spin and string structures have w2 = 0 and hence w3 = Sq1(w2) = 0
    if matches!(doc.structure, StructureTag::Spin | StructureTag::String) {
        if datum.w2_zero.is_none() {
            datum.w2_zero = Some(true);
        }
        if datum.w3_zero.is_none() {
            datum.w3_zero = Some(true);
        }
    }

    // mod-3 block
    if let Some(m3) = &doc.mod3 {
        for (key, r) in &m3.ranks {
            datum.mod3_rank.insert(degree_key(key)?, *r);
        }
        datum.p1_mod3_trivial = m3.p1_mod3_trivial;
        let rank_lo = datum.mod3_rank.get(&(n - 1)).copied();
        let rank_hi = datum.mod3_rank.get(&(n + 3)).copied();
        if let Some(rows) = &m3.rho3 {
            let gens = datum.integral[&(n - 1)].num_generators();
            let rl = rank_lo
                .ok_or_else(|| Error::MissingData(format!("mod-3 rank at degree {}", n - 1)))?;
            datum.rho3 = Some(shape_checked_f3(rows, rl, gens, "rho3")?);
        }
        if let Some(rows) = &m3.bockstein3 {
            let target = datum.integral[&n].num_generators();
            let rl = rank_lo
                .ok_or_else(|| Error::MissingData(format!("mod-3 rank at degree {}", n - 1)))?;
            datum.bockstein3 = Some(shape_checked_int(rows, target, rl, "bockstein3")?);
        }
        if let Some(rows) = &m3.p1_cup3 {
            let rl = rank_lo
                .ok_or_else(|| Error::MissingData(format!("mod-3 rank at degree {}", n - 1)))?;
            let rh = rank_hi
                .ok_or_else(|| Error::MissingData(format!("mod-3 rank at degree {}", n + 3)))?;
            datum.p1_cup3 = Some(shape_checked_f3(rows, rh, rl, "p1cup3")?);
        }
        if datum.p1_cup3.is_none() && datum.p1_mod3_trivial == Some(true) {
            if let (Some(rl), Some(rh)) = (rank_lo, rank_hi) {
                datum.p1_cup3 = Some(F3Map::zero(rh, rl));
            }
        }
    }

    // homology block
    if let Some(h) = &doc.homology {
        let h1 = PresentedAbelianGroup::from_orders(
            (0..h.h1.len()).map(|j| format!("a{}", j)).collect(),
            &h.h1,
        );
        let h2 = PresentedAbelianGroup::from_orders(
            (0..h.h2.len()).map(|j| format!("b{}", j)).collect(),
            &h.h2,
        );
        let h3 = PresentedAbelianGroup::from_orders(
            (0..h.h3.len()).map(|j| format!("c{}", j)).collect(),
            &h.h3,
        );
        let rho2_h3 = match &h.rho2_h3 {
            Some(rows) => shape_checked_f2(rows, h.h3_mod2_rank, h3.num_generators(), "rho2H3")?,
            None => F2Map::zero(h.h3_mod2_rank, h3.num_generators()),
        };
        let cap_w2 = match &h.cap_w2 {
            Some(rows) => shape_checked_f2(rows, h.h1_mod2_rank, h.h3_mod2_rank, "capW2")?,
            None => F2Map::zero(h.h1_mod2_rank, h.h3_mod2_rank),
        };
        let pairing_w2 = match &h.pairing_w2 {
            Some(rows) => shape_checked_f2(rows, 1, h2.num_generators(), "pairingW2")?,
            None => F2Map::zero(1, h2.num_generators()),
        };
        let homology_bockstein = match &h.homology_bockstein {
            Some(rows) => {
                shape_checked_int(rows, h2.num_generators(), h.h3_mod2_rank, "homologyBockstein")?
            }
            None => IntegerMatrix::zero(h2.num_generators(), h.h3_mod2_rank),
        };
        datum.homology = Some(HomologyData {
            h1,
            h2,
            h3,
            h1_mod2_rank: h.h1_mod2_rank,
            h3_mod2_rank: h.h3_mod2_rank,
            rho2_h3,
            cap_w2,
            pairing_w2,
            homology_bockstein,
        });
    }

    let overrides = doc.overrides.clone().unwrap_or_default().forced_for(doc.structure);
    Ok(LoadOutcome { datum, overrides, warnings })
}

impl RingPresentation {
    /// Cup matrix that tolerates an empty class (maps to the zero map with
    /// the correct target rank).
    fn cup_matrix_padded(
        &self,
        class: &crate::ring::Polynomial,
        degree: usize,
        shift: usize,
    ) -> Result<F2Map, Error> {
        if class.is_empty() {
            return Ok(F2Map::zero(self.basis(degree + shift).len(), self.basis(degree).len()));
        }
        self.cup_matrix(class, degree)
    }
}

fn build_ring(rd: &RingDoc) -> Result<RingPresentation, Error> {
    // two passes: the generator list first, then parse the square values
    let skeleton = RingPresentation {
        generators: rd
            .generators
            .iter()
            .map(|g| RingGenerator {
                name: g.name.clone(),
                degree: g.degree,
                truncation: g.truncation,
                squares: BTreeMap::new(),
            })
            .collect(),
        w2: Vec::new(),
        w3: Vec::new(),
        top: Vec::new(),
    };
    let mut generators = skeleton.generators.clone();
    for (idx, g) in rd.generators.iter().enumerate() {
        for (k, val) in &g.sq {
            let i: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("square index '{}' on generator {}", k, g.name)))?;
            let poly = skeleton.parse_polynomial(val)?;
            generators[idx].squares.insert(i, poly);
        }
    }
    let w2 = skeleton.parse_polynomial(&rd.w2)?;
    let w3 = skeleton.parse_polynomial(&rd.w3)?;
    let top_poly = skeleton.parse_polynomial(&rd.top)?;
    let top = top_poly
        .first()
        .cloned()
        .ok_or_else(|| Error::Parse("top monomial truncates to zero".into()))?;
    Ok(RingPresentation { generators, w2, w3, top })
}

fn shape_checked_f2(
    rows: &[Vec<u8>],
    expect_rows: usize,
    expect_cols: usize,
    what: &str,
) -> Result<F2Map, Error> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Parse(format!(
            "{}: expected a {}x{} matrix, got {}x{}",
            what,
            expect_rows,
            expect_cols,
            rows.len(),
            rows.first().map(|r| r.len()).unwrap_or(0)
        )));
    }
    Ok(F2Map::from_rows(rows))
}

fn shape_checked_f3(
    rows: &[Vec<u8>],
    expect_rows: usize,
    expect_cols: usize,
    what: &str,
) -> Result<F3Map, Error> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Parse(format!(
            "{}: expected a {}x{} matrix, got {}x{}",
            what,
            expect_rows,
            expect_cols,
            rows.len(),
            rows.first().map(|r| r.len()).unwrap_or(0)
        )));
    }
    Ok(F3Map::from_rows(rows))
}

fn shape_checked_int(
    rows: &[Vec<i64>],
    expect_rows: usize,
    expect_cols: usize,
    what: &str,
) -> Result<IntegerMatrix, Error> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::Parse(format!(
            "{}: expected a {}x{} matrix, got {}x{}",
            what,
            expect_rows,
            expect_cols,
            rows.len(),
            rows.first().map(|r| r.len()).unwrap_or(0)
        )));
    }
    let mut m = IntegerMatrix::zero(expect_rows, expect_cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, BigInt::from(*v));
        }
    }
    Ok(m)
}

#[allow(clippy::too_many_arguments)]
fn override_f2_table(
    source: &BTreeMap<String, Vec<Vec<u8>>>,
    table: &mut BTreeMap<usize, F2Map>,
    ranks: &BTreeMap<usize, usize>,
    shift: usize,
    lo: usize,
    hi: usize,
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<(), Error> {
    for (key, rows) in source {
        let i = degree_key(key)?;
        if i < lo || i + shift > hi {
            return Err(Error::Degree(format!(
                "{} at degree {} falls outside the window (target degree {})",
                what,
                i,
                i + shift
            )));
        }
        let dom = *ranks
            .get(&i)
            .ok_or_else(|| Error::MissingData(format!("mod-2 rank at degree {}", i)))?;
        let cod = *ranks
            .get(&(i + shift))
            .ok_or_else(|| Error::MissingData(format!("mod-2 rank at degree {}", i + shift)))?;
        let m = shape_checked_f2(rows, cod, dom, &format!("{} at degree {}", what, i))?;
        if let Some(existing) = table.get(&i) {
            if *existing != m {
                warnings.push(format!(
                    "{} at degree {} disagrees with the ring expansion; keeping the explicit \
                     matrix",
                    what, i
                ));
            }
        }
        table.insert(i, m);
    }
    Ok(())
}
