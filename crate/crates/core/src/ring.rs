//! Truncated graded-commutative mod-2 polynomial rings and the Cartan-formula
//! expansion of Steenrod squares over their monomial bases.
//!
//! A presentation lists generators with degrees, truncation exponents
//! (relations g^e = 0) and the squares Sq^i on each generator. Squares of
//! arbitrary monomials are computed through the multiplicative total square
//! Sq = Sq^0 + Sq^1 + ...; on a generator g the total square is assembled
//! from the given values with Sq^0 g = g, Sq^{|g|} g = g^2, Sq^i g = 0 for
//! i > |g|, and Sq^3 g = Sq^1 Sq^2 g.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::f2::F2Map;

/// monomial = exponent vector over the generators
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug)]
pub struct RingGenerator {
    pub name: String,
    pub degree: usize,
    /// relation g^truncation = 0
    pub truncation: u32,
    /// Sq^i(g) for 1 <= i < degree, as polynomials; absent entries are zero.
    /// Generators of degree >= 5 must be primitive (all listed squares zero).
    pub squares: BTreeMap<usize, Polynomial>,
}

/// A mod-2 sum of monomials.
pub type Polynomial = Vec<Monomial>;

#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub generators: Vec<RingGenerator>,
    pub w2: Polynomial,
    pub w3: Polynomial,
    pub top: Monomial,
}

fn normalize(poly: Polynomial) -> Polynomial {
    let mut counts: BTreeMap<Monomial, u32> = BTreeMap::new();
    for m in poly {
        *counts.entry(m).or_insert(0) += 1;
    }
    counts.into_iter().filter(|(_, c)| c % 2 == 1).map(|(m, _)| m).collect()
}

impl RingPresentation {
    pub fn degree_of(&self, m: &Monomial) -> usize {
        m.iter().zip(&self.generators).map(|(e, g)| *e as usize * g.degree).sum()
    }

    fn in_ring(&self, m: &Monomial) -> bool {
        m.iter().zip(&self.generators).all(|(e, g)| *e < g.truncation)
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if self.in_ring(&m) {
            Some(m)
        } else {
            None
        }
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut out = Vec::new();
        for x in a {
            for y in b {
                if let Some(m) = self.mul_monomials(x, y) {
                    out.push(m);
                }
            }
        }
        normalize(out)
    }

    /// All basis monomials of a given total degree.
    pub fn basis(&self, degree: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.generators.len()];
        self.enumerate(0, degree, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        idx: usize,
        remaining: usize,
        current: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if idx == self.generators.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let g = &self.generators[idx];
        let mut e = 0u32;
        loop {
            let used = e as usize * g.degree;
            if e >= g.truncation || used > remaining {
                break;
            }
            current[idx] = e;
            self.enumerate(idx + 1, remaining - used, current, out);
            e += 1;
        }
        current[idx] = 0;
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Total square of a generator, as a list of (degree shift, polynomial).
    fn total_square_of_generator(&self, idx: usize) -> Result<Vec<Polynomial>, Error> {
        let g = &self.generators[idx];
        let unit: Monomial = {
            let mut m = vec![0u32; self.generators.len()];
            m[idx] = 1;
            m
        };
        let mut comps: Vec<Polynomial> = vec![Vec::new(); g.degree + 1];
        comps[0] = vec![unit.clone()];
        if g.degree >= 5 {
            if g.squares.values().any(|p| !p.is_empty()) {
                return Err(Error::Degree(format!(
                    "generator {} of degree {} must be primitive (explicit squares are only \
                     supported up to degree 4)",
                    g.name, g.degree
                )));
            }
            // top square is the ring square, zero when truncated
            comps[g.degree] = normalize(
                self.mul_monomials(&unit, &unit).map(|m| vec![m]).unwrap_or_default(),
            );
            return Ok(comps);
        }
        for i in 1..g.degree {
            let val = g.squares.get(&i).cloned().unwrap_or_default();
            for m in &val {
                if self.degree_of(m) != g.degree + i {
                    return Err(Error::Degree(format!(
                        "Sq^{}({}) has a term of degree {}, expected {}",
                        i,
                        g.name,
                        self.degree_of(m),
                        g.degree + i
                    )));
                }
            }
            comps[i] = normalize(val);
        }
        // Sq^3 on a degree-4 generator comes from the relation Sq^3 = Sq^1 Sq^2
        if g.degree == 4 && comps[3].is_empty() {
            let sq2 = comps[2].clone();
            comps[3] = self.sq1_poly(&sq2)?;
        }
        comps[g.degree] = normalize(
            self.mul_monomials(&unit, &unit).map(|m| vec![m]).unwrap_or_default(),
        );
        Ok(comps)
    }

    /// Sq^1 of a polynomial, via the derivation property of Sq^1.
    fn sq1_poly(&self, p: &Polynomial) -> Result<Polynomial, Error> {
        let mut out = Vec::new();
        for m in p {
            out.extend(self.sq_component_of_monomial(m, 1)?);
        }
        Ok(normalize(out))
    }

    /// Total square of a monomial, returned as components by degree shift.
    pub fn total_square(&self, m: &Monomial) -> Result<Vec<Polynomial>, Error> {
        let deg = self.degree_of(m);
        let mut acc: Vec<Polynomial> = vec![vec![vec![0u32; self.generators.len()]]]; // Sq(1) = 1
        for (idx, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let gen_sq = self.total_square_of_generator(idx)?;
            for _ in 0..e {
                acc = self.multiply_totals(&acc, &gen_sq);
            }
        }
        acc.resize(2 * deg + 1, Vec::new());
        Ok(acc)
    }

    fn multiply_totals(&self, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = vec![Vec::new(); a.len() + b.len()];
        for (i, pa) in a.iter().enumerate() {
            if pa.is_empty() {
                continue;
            }
            for (j, pb) in b.iter().enumerate() {
                if pb.is_empty() {
                    continue;
                }
                let prod = self.mul(pa, pb);
                out[i + j] = normalize([out[i + j].clone(), prod].concat());
            }
        }
        out
    }

    /// Sq^k of a monomial.
    pub fn sq_component_of_monomial(&self, m: &Monomial, k: usize) -> Result<Polynomial, Error> {
        let total = self.total_square(m)?;
        Ok(total.get(k).cloned().unwrap_or_default())
    }

    /// Sq^k of a polynomial.
    pub fn sq(&self, p: &Polynomial, k: usize) -> Result<Polynomial, Error> {
        let mut out = Vec::new();
        for m in p {
            out.extend(self.sq_component_of_monomial(m, k)?);
        }
        Ok(normalize(out))
    }

    /// Coordinates of a polynomial in the sorted monomial basis of its degree.
    pub fn coords(&self, p: &Polynomial, degree: usize) -> Result<crate::f2::BitVec, Error> {
        let basis = self.basis(degree);
        let mut v = crate::f2::BitVec::zeros(basis.len());
        for m in p {
            if self.degree_of(m) != degree {
                return Err(Error::Degree(format!(
                    "term {} has degree {}, expected {}",
                    self.render_monomial(m),
                    self.degree_of(m),
                    degree
                )));
            }
            let i = basis
                .binary_search(m)
                .map_err(|_| Error::Data(format!("monomial {} not in basis", self.render_monomial(m))))?;
            v.set(i, !v.get(i));
        }
        Ok(v)
    }

    /// The matrix of Sq^k from degree d to degree d+k over the monomial bases.
    pub fn sq_matrix(&self, k: usize, degree: usize) -> Result<F2Map, Error> {
        let dom = self.basis(degree);
        let target_rank = self.basis(degree + k).len();
        let cols: Vec<crate::f2::BitVec> = dom
            .iter()
            .map(|m| {
                let img = self.sq_component_of_monomial(m, k)?;
                self.coords(&img, degree + k)
            })
            .collect::<Result<_, _>>()?;
        Ok(F2Map::from_columns(target_rank, &cols))
    }

    /// Matrix of cup product with a fixed class of degree `shift`.
    pub fn cup_matrix(&self, class: &Polynomial, degree: usize) -> Result<F2Map, Error> {
        let shift: usize = if class.is_empty() {
            return Ok(F2Map::zero(0, self.basis(degree).len()));
        } else {
            self.degree_of(&class[0])
        };
        let dom = self.basis(degree);
        let target_rank = self.basis(degree + shift).len();
        let cols: Vec<crate::f2::BitVec> = dom
            .iter()
            .map(|m| {
                let prod = self.mul(&vec![m.clone()], class);
                self.coords(&prod, degree + shift)
            })
            .collect::<Result<_, _>>()?;
        Ok(F2Map::from_columns(target_rank, &cols))
    }

    /// Parse "c^2*d + d^2" style expressions over the generator names.
    pub fn parse_polynomial(&self, s: &str) -> Result<Polynomial, Error> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in polynomial '{}'", s)));
            }
            if term == "1" {
                out.push(vec![0u32; self.generators.len()]);
                continue;
            }
            let mut mono = vec![0u32; self.generators.len()];
            for factor in term.split('*') {
                let factor = factor.trim();
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim().parse::<u32>().map_err(|_| {
                            Error::Parse(format!("bad exponent in '{}'", factor))
                        })?,
                    ),
                    None => (factor, 1),
                };
                let idx = self
                    .generators
                    .iter()
                    .position(|g| g.name == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator '{}'", name)))?;
                mono[idx] += exp;
            }
            if !self.in_ring(&mono) {
                // truncated away: contributes zero
                continue;
            }
            out.push(mono);
        }
        Ok(normalize(out))
    }
}
