//! Verlinde numbers for simply connected groups, their center quotients,
//! and quotients of products of simply connected groups.
//!
//! For a simply connected almost simple `G` at level ℓ,
//!
//! ```text
//! N_ℓ(G) = Σ_{λ ∈ P_ℓ} (|T_ℓ| / Δ(t_λ))^{g-1},
//! Δ(t_λ) = Π_{α > 0} 4 sin²(π (α|λ+ρ) / (ℓ+h)),
//! ```
//!
//! and for `G' = G/Γ`
//!
//! ```text
//! N_ℓ(G') = |Γ| Σ_{λ ∈ P'_ℓ/Γ} |Γ·λ|^{1-2g} (|T_ℓ| / Δ(t_λ))^{g-1}.
//! ```
//!
//! For products the ratio `|T|/Δ` is the product of the per-factor ratios.
//! Sums are evaluated in arbitrary precision and certified as integers by
//! [`crate::numeric::certify`]. Individual Δ values are computed in parallel
//! but always reduced in the canonical order of the orbit list, so the
//! residual is reproducible.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{self, four_sin_sq_pi, BigReal, Certified, DEFAULT_PRECISION};
use crate::rootsys::{Family, GroupType, RootSystem, WeightVector, Q};
use crate::weights::{
    enumerate_level_weights, enumerate_product_weights, orbit_decompose,
    orbit_decompose_product, restrict_product_to_quotient, restrict_to_quotient,
    CenterSubgroupSpec, LevelWeight,
};

/// A level, or a tuple of levels for a product group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Single(u32),
    Tuple(Vec<u32>),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Single(l) => write!(f, "{l}"),
            Level::Tuple(ls) => {
                let parts: Vec<String> = ls.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Dynkin indices of the standard representations.
///
/// The SO entries select the level of the determinant bundle; the Sp entry
/// is the standard value for `Sp(2r) ⊂ SL(2r)`.
pub struct DynkinIndexTable;

impl DynkinIndexTable {
    pub const SO_STANDARD_R_GE_5: u32 = 2;
    pub const SO3: u32 = 4;
    pub const SO4: (u32, u32) = (2, 2);
    pub const SP_STANDARD: u32 = 1;
}

/// A certified Verlinde number.
#[derive(Clone, Debug, PartialEq)]
pub struct VerlindeResult {
    pub value: BigUint,
    /// Distance of the raw floating-point sum to `value`.
    pub residual: f64,
    pub precision_bits: usize,
    pub term_count: usize,
    pub group_label: String,
    pub level: Level,
    pub genus: u32,
}

/// `Δ(t_λ)` as the positive-root product of `4 sin²` factors.
pub fn delta(rs: &RootSystem, level: u32, lambda: &WeightVector, precision_bits: usize) -> Result<BigReal> {
    let shifted = lambda + rs.rho();
    let k = Q::from_integer((level + rs.dual_coxeter()) as i64);
    let mut acc = BigReal::from_u64(1, precision_bits);
    for alpha in rs.positive_roots() {
        let x = rs.inner(alpha, &shifted)? / k;
        match four_sin_sq_pi(x, precision_bits)? {
            Some(f) => acc = acc.mul(&f)?,
            None => return Err(Error::SingularWeight(lambda.to_string())),
        }
    }
    Ok(acc)
}

/// `|T_ℓ| = (ℓ+h)^s · f · ν` for the types where ν is known.
pub fn torus_order(rs: &RootSystem, level: u32) -> Result<BigUint> {
    let nu = rs.nu().ok_or(Error::TorusOrderUnknown(rs.family()))?;
    let k = BigUint::from(level + rs.dual_coxeter());
    Ok(k.pow(rs.rank() as u32) * rs.center_order() * nu)
}

/// `Σ_{λ ∈ P_ℓ} Δ(t_λ)`, which equals `|T_ℓ|` by unitarity of the S-matrix.
pub fn torus_order_sum(rs: &RootSystem, level: u32, precision_bits: usize) -> Result<BigReal> {
    let set = enumerate_level_weights(rs, level);
    let deltas: Vec<BigReal> = set
        .weights()
        .par_iter()
        .map(|w| delta(rs, level, w.vector(), precision_bits))
        .collect::<Result<_>>()?;
    deltas
        .iter()
        .try_fold(BigReal::zero(precision_bits), |acc, d| acc.add(d))
}

/// [`torus_order_sum`] certified as an integer.
pub fn torus_order_oracle(rs: &RootSystem, level: u32, precision_bits: usize) -> Result<Certified> {
    numeric::certify(precision_bits, |bits| torus_order_sum(rs, level, bits))
}

/// `r^g`, the dimension of the level-r theta functions on a principally
/// polarized abelian variety of dimension g.
pub fn theta_dim(r: u32, genus: u32) -> BigUint {
    BigUint::from(r).pow(genus)
}

fn check_genus(genus: u32) -> Result<()> {
    if genus == 0 {
        return Err(Error::InvalidGenus(genus));
    }
    Ok(())
}

/// A prepared Verlinde sum: one term per orbit, each term a tuple of weights
/// (one per simple factor).
#[derive(Clone, Debug)]
pub struct VerlindeSum<'a> {
    group_label: String,
    level: Level,
    factors: Vec<(&'a RootSystem, u32)>,
    torus_orders: Vec<BigUint>,
    gamma_order: u32,
    terms: Vec<(u32, Vec<LevelWeight>)>,
}

impl<'a> VerlindeSum<'a> {
    /// Sum over all of `P_ℓ`.
    pub fn simply_connected(rs: &'a RootSystem, level: u32, precision_bits: usize) -> Result<Self> {
        let terms = enumerate_level_weights(rs, level)
            .weights()
            .iter()
            .map(|w| (1, vec![w.clone()]))
            .collect();
        Ok(Self {
            group_label: format!("Spin-type {} level {level}", rs.group_type()),
            level: Level::Single(level),
            factors: vec![(rs, level)],
            torus_orders: vec![factor_torus_order(rs, level, precision_bits)?],
            gamma_order: 1,
            terms,
        })
    }

    /// Sum over `P′_ℓ/Γ` for `G/Γ` with `G` simple.
    pub fn quotient(
        rs: &'a RootSystem,
        level: u32,
        spec: CenterSubgroupSpec,
        precision_bits: usize,
    ) -> Result<Self> {
        let all = enumerate_level_weights(rs, level);
        let pprime = restrict_to_quotient(&all, spec)?;
        let orbits = orbit_decompose(&pprime, spec)?;
        Ok(Self {
            group_label: format!("{}/{spec} level {level}", rs.group_type()),
            level: Level::Single(level),
            factors: vec![(rs, level)],
            torus_orders: vec![factor_torus_order(rs, level, precision_bits)?],
            gamma_order: spec.order(),
            terms: orbits
                .orbits
                .into_iter()
                .map(|o| (o.size, vec![o.representative]))
                .collect(),
        })
    }

    /// Sum over `P′_𝓵/Γ` for `(G_1 × … × G_q)/Γ`.
    pub fn product_quotient(
        factors: &[(&'a RootSystem, u32)],
        spec: CenterSubgroupSpec,
        precision_bits: usize,
    ) -> Result<Self> {
        let all = enumerate_product_weights(factors);
        let pprime = restrict_product_to_quotient(&all, spec)?;
        let orbits = orbit_decompose_product(&pprime, spec)?;
        let torus_orders = factors
            .iter()
            .map(|(rs, l)| factor_torus_order(rs, *l, precision_bits))
            .collect::<Result<_>>()?;
        let names: Vec<String> = factors.iter().map(|(rs, _)| rs.to_string()).collect();
        let levels: Vec<u32> = factors.iter().map(|(_, l)| *l).collect();
        let level = Level::Tuple(levels);
        Ok(Self {
            group_label: format!("({})/{spec} level {level}", names.join("×")),
            level,
            factors: factors.to_vec(),
            torus_orders,
            gamma_order: spec.order(),
            terms: orbits
                .orbits
                .into_iter()
                .map(|o| (o.size, o.representative))
                .collect(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.group_label = label.into();
        self
    }

    pub fn group_label(&self) -> &str {
        &self.group_label
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Orbit sizes and weight tuples, in summation order.
    pub fn orbits(&self) -> &[(u32, Vec<LevelWeight>)] {
        &self.terms
    }

    /// `|T|/Δ(t_λ)` for every term, at the given precision.
    pub fn ratios(&self, precision_bits: usize) -> Result<Vec<BigReal>> {
        self.terms
            .par_iter()
            .map(|(_, tuple)| {
                let mut ratio = BigReal::from_u64(1, precision_bits);
                for (((rs, level), w), t) in self.factors.iter().zip(tuple).zip(&self.torus_orders) {
                    let d = delta(rs, *level, w.vector(), precision_bits)?;
                    ratio = ratio.mul(&BigReal::from_biguint(t, precision_bits).div(&d)?)?;
                }
                Ok(ratio)
            })
            .collect()
    }

    /// The individual summands `|Γ|·|Γ·λ|^{1-2g}·(|T|/Δ)^{g-1}`.
    pub fn terms(&self, genus: u32, precision_bits: usize) -> Result<Vec<BigReal>> {
        check_genus(genus)?;
        let gamma = BigReal::from_u64(self.gamma_order as u64, precision_bits);
        self.ratios(precision_bits)?
            .iter()
            .zip(&self.terms)
            .map(|(ratio, (size, _))| {
                let mut term = ratio.powi(genus - 1)?;
                if *size > 1 {
                    let weight = BigReal::from_u64(*size as u64, precision_bits).powi(2 * genus - 1)?;
                    term = term.div(&weight)?;
                }
                term.mul(&gamma)
            })
            .collect()
    }

    /// The uncertified floating-point value of the sum.
    pub fn raw_sum(&self, genus: u32, precision_bits: usize) -> Result<BigReal> {
        self.terms(genus, precision_bits)?
            .iter()
            .try_fold(BigReal::zero(precision_bits), |acc, t| acc.add(t))
    }

    pub fn certify(&self, genus: u32, precision_bits: usize) -> Result<VerlindeResult> {
        check_genus(genus)?;
        let result = |value, residual, precision_bits| VerlindeResult {
            value,
            residual,
            precision_bits,
            term_count: self.term_count(),
            group_label: self.group_label.clone(),
            level: self.level.clone(),
            genus,
        };
        match numeric::certify(precision_bits, |bits| self.raw_sum(genus, bits)) {
            Ok(c) => Ok(result(c.value, c.residual, c.precision_bits)),
            Err(Error::Integrality {
                nearest,
                residual,
                precision_bits,
                ..
            }) => Err(Error::Uncertified(Box::new(result(nearest, residual, precision_bits)))),
            Err(e) => Err(e),
        }
    }
}

fn factor_torus_order(rs: &RootSystem, level: u32, precision_bits: usize) -> Result<BigUint> {
    match torus_order(rs, level) {
        Ok(t) => Ok(t),
        Err(Error::TorusOrderUnknown(_)) => Ok(torus_order_oracle(rs, level, precision_bits)?.value),
        Err(e) => Err(e),
    }
}

/// Evaluation entry points sharing a starting precision.
#[derive(Clone, Copy, Debug)]
pub struct Evaluator {
    precision_bits: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_PRECISION,
        }
    }
}

impl Evaluator {
    pub fn with_precision(precision_bits: usize) -> Result<Self> {
        numeric::check_precision(precision_bits)?;
        Ok(Self { precision_bits })
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn sc(&self, rs: &RootSystem, level: u32, genus: u32) -> Result<VerlindeResult> {
        check_genus(genus)?;
        VerlindeSum::simply_connected(rs, level, self.precision_bits)?.certify(genus, self.precision_bits)
    }

    pub fn quotient(
        &self,
        rs: &RootSystem,
        level: u32,
        spec: CenterSubgroupSpec,
        genus: u32,
    ) -> Result<VerlindeResult> {
        check_genus(genus)?;
        VerlindeSum::quotient(rs, level, spec, self.precision_bits)?.certify(genus, self.precision_bits)
    }

    pub fn product_quotient(
        &self,
        factors: &[(&RootSystem, u32)],
        spec: CenterSubgroupSpec,
        genus: u32,
    ) -> Result<VerlindeResult> {
        check_genus(genus)?;
        VerlindeSum::product_quotient(factors, spec, self.precision_bits)?
            .certify(genus, self.precision_bits)
    }

    /// Verlinde number of SO(r) at the level of its determinant bundle.
    pub fn n_so(&self, r: u32, genus: u32) -> Result<VerlindeResult> {
        check_genus(genus)?;
        let label = format!("SO({r})");
        let build = |family, rank| GroupType::new(family, rank).map(RootSystem::build);
        let sum_result = match r {
            0..=2 => {
                return Err(Error::InvalidArgument(format!("SO(r) needs r >= 3, got {r}")));
            }
            3 => {
                let a1 = build(Family::A, 1)?;
                VerlindeSum::quotient(&a1, DynkinIndexTable::SO3, CenterSubgroupSpec::So3, self.precision_bits)?
                    .with_label(label)
                    .certify(genus, self.precision_bits)
            }
            4 => {
                let a1 = build(Family::A, 1)?;
                let (l1, l2) = DynkinIndexTable::SO4;
                VerlindeSum::product_quotient(
                    &[(&a1, l1), (&a1, l2)],
                    CenterSubgroupSpec::So4Diagonal,
                    self.precision_bits,
                )?
                .with_label(label)
                .certify(genus, self.precision_bits)
            }
            _ => {
                let (rs, spec) = if r.is_multiple_of(2) {
                    (build(Family::D, (r / 2) as usize)?, CenterSubgroupSpec::SoEven)
                } else {
                    (build(Family::B, ((r - 1) / 2) as usize)?, CenterSubgroupSpec::SoOdd)
                };
                VerlindeSum::quotient(&rs, DynkinIndexTable::SO_STANDARD_R_GE_5, spec, self.precision_bits)?
                    .with_label(label)
                    .certify(genus, self.precision_bits)
            }
        };
        sum_result
    }

    /// Verlinde number of Sp(2r) at level ℓ (the ℓ-th power of the
    /// determinant bundle).
    pub fn n_sp(&self, r: u32, level: u32, genus: u32) -> Result<VerlindeResult> {
        check_genus(genus)?;
        let rs = RootSystem::build(GroupType::new(Family::C, r as usize)?);
        VerlindeSum::simply_connected(&rs, level * DynkinIndexTable::SP_STANDARD, self.precision_bits)?
            .with_label(format!("Sp({})", 2 * r))
            .certify(genus, self.precision_bits)
    }
}

pub fn verlinde_sc(rs: &RootSystem, level: u32, genus: u32) -> Result<VerlindeResult> {
    Evaluator::default().sc(rs, level, genus)
}

pub fn verlinde_quotient(
    rs: &RootSystem,
    level: u32,
    spec: CenterSubgroupSpec,
    genus: u32,
) -> Result<VerlindeResult> {
    Evaluator::default().quotient(rs, level, spec, genus)
}

pub fn verlinde_product_quotient(
    factors: &[(&RootSystem, u32)],
    spec: CenterSubgroupSpec,
    genus: u32,
) -> Result<VerlindeResult> {
    Evaluator::default().product_quotient(factors, spec, genus)
}

pub fn n_so(r: u32, genus: u32) -> Result<VerlindeResult> {
    Evaluator::default().n_so(r, genus)
}

pub fn n_sp(r: u32, level: u32, genus: u32) -> Result<VerlindeResult> {
    Evaluator::default().n_sp(r, level, genus)
}
