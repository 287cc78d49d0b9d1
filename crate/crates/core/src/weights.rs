//! Level-ℓ dominant weights, the subset trivial on a center subgroup Γ,
//! and the decomposition of that subset into Γ-orbits.
//!
//! Weights are enumerated by their coefficients `n_i` in the basis of
//! fundamental weights. Since `(ϖ_i|θ)` is a positive integer for every i,
//! the bound `(λ|θ) = Σ n_i (ϖ_i|θ) ≤ ℓ` cuts out a finite box that is
//! searched exhaustively. The canonical order of a level set is the
//! lexicographic order of coefficient tuples.
//!
//! Center actions are only provided for the order-2 subgroups that show up
//! for special orthogonal groups: SO(2s) and SO(2s+1) via the u-coordinate
//! formulas, SO(3) as a quotient of SL(2), and SO(4) as the diagonal
//! quotient of SL(2)×SL(2). For SL(2) at level ℓ the nontrivial central
//! element acts by `nρ ↦ (ℓ−n)ρ`, the unique automorphism of the affine
//! A₁ diagram.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem, WeightVector, Q};

/// A dominant weight together with its fundamental-weight coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelWeight {
    coeffs: Vec<u32>,
    vector: WeightVector,
}

impl LevelWeight {
    pub fn from_coefficients(rs: &RootSystem, coeffs: Vec<u32>) -> Result<Self> {
        let vector = rs.weight_from_coefficients(&coeffs)?;
        Ok(Self { coeffs, vector })
    }

    /// Recovers the coefficients of a dominant integral weight.
    pub fn from_vector(rs: &RootSystem, vector: WeightVector) -> Result<Self> {
        let coeffs = rs
            .fundamental_coefficients(&vector)?
            .into_iter()
            .map(|c| {
                if c.is_integer() && c >= Q::zero() {
                    Ok(c.to_integer() as u32)
                } else {
                    Err(Error::InvalidArgument(format!(
                        "{vector} is not a dominant integral weight"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs, vector })
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn vector(&self) -> &WeightVector {
        &self.vector
    }

    /// `(λ|θ) = Σ n_i (ϖ_i|θ)`.
    pub fn theta_level(&self, rs: &RootSystem) -> u32 {
        self.coeffs.iter().zip(rs.comarks()).map(|(n, a)| n * a).sum()
    }
}

impl fmt::Display for LevelWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coeffs.iter().join(","))
    }
}

/// The set P_ℓ (or a subset of it) in canonical order.
#[derive(Clone, Debug)]
pub struct LevelWeightSet<'a> {
    rs: &'a RootSystem,
    level: u32,
    weights: Vec<LevelWeight>,
}

impl<'a> LevelWeightSet<'a> {
    pub fn root_system(&self) -> &'a RootSystem {
        self.rs
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The shifted level `k = ℓ + h`.
    pub fn k(&self) -> u32 {
        self.level + self.rs.dual_coxeter()
    }

    pub fn weights(&self) -> &[LevelWeight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// All dominant weights `λ` with `(λ|θ) ≤ ℓ`, lexicographically ordered by
/// fundamental-weight coefficients.
pub fn enumerate_level_weights(rs: &RootSystem, level: u32) -> LevelWeightSet<'_> {
    fn walk(
        comarks: &[u32],
        budget: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let Some((&a, rest)) = comarks.split_first() else {
            out.push(prefix.clone());
            return;
        };
        for n in 0..=budget / a {
            prefix.push(n);
            walk(rest, budget - n * a, prefix, out);
            prefix.pop();
        }
    }

    let mut tuples = Vec::new();
    walk(rs.comarks(), level, &mut Vec::new(), &mut tuples);
    let weights = tuples
        .into_iter()
        .map(|c| LevelWeight::from_coefficients(rs, c).expect("coefficient count equals rank"))
        .collect();
    LevelWeightSet { rs, level, weights }
}

/// Coordinates of `λ + ρ` in the ε-basis (`u`) and the ϖ-basis (`t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UCoordinates {
    pub u: Vec<Q>,
    pub t: Vec<Q>,
}

pub fn u_coords(rs: &RootSystem, lambda: &WeightVector) -> Result<UCoordinates> {
    if !matches!(rs.family(), Family::B | Family::D) {
        return Err(Error::FamilyMismatch {
            expected: "B or D",
            got: rs.group_type(),
        });
    }
    let shifted = lambda + rs.rho();
    Ok(UCoordinates {
        t: rs.fundamental_coefficients(&shifted)?,
        u: shifted.coords().to_vec(),
    })
}

/// Order-2 (or trivial) center subgroups Γ used by the special orthogonal groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CenterSubgroupSpec {
    /// Type D_s, Γ generated by the class of ϖ₁; quotient SO(2s).
    SoEven,
    /// Type B_s, Γ the full center; quotient SO(2s+1).
    SoOdd,
    /// Type A₁, Γ = {±I}; quotient SO(3).
    So3,
    /// A₁ × A₁, Γ generated by (−I, −I); quotient SO(4).
    So4Diagonal,
    Trivial,
}

impl CenterSubgroupSpec {
    /// The subgroup whose quotient is the special orthogonal group, if any.
    pub fn special_orthogonal(rs: &RootSystem) -> Result<Self> {
        match (rs.family(), rs.rank()) {
            (Family::D, _) => Ok(Self::SoEven),
            (Family::B, _) => Ok(Self::SoOdd),
            (Family::A, 1) => Ok(Self::So3),
            _ => Err(Error::UnsupportedCenter {
                spec: "so".into(),
                groups: rs.to_string(),
            }),
        }
    }

    /// |Γ|
    pub fn order(self) -> u32 {
        match self {
            Self::Trivial => 1,
            _ => 2,
        }
    }

    fn unsupported(self, groups: impl fmt::Display) -> Error {
        Error::UnsupportedCenter {
            spec: self.to_string(),
            groups: groups.to_string(),
        }
    }

    fn check_simple(self, rs: &RootSystem) -> Result<()> {
        let ok = match self {
            Self::SoEven => rs.family() == Family::D,
            Self::SoOdd => rs.family() == Family::B,
            Self::So3 => rs.family() == Family::A && rs.rank() == 1,
            Self::So4Diagonal => false,
            Self::Trivial => true,
        };
        if ok {
            Ok(())
        } else {
            Err(self.unsupported(rs))
        }
    }

    fn check_product(self, factors: &[(&RootSystem, u32)]) -> Result<()> {
        let ok = match self {
            Self::So4Diagonal => {
                factors.len() == 2
                    && factors
                        .iter()
                        .all(|(rs, _)| rs.family() == Family::A && rs.rank() == 1)
            }
            Self::Trivial => true,
            _ => factors.len() == 1 && self.check_simple(factors[0].0).is_ok(),
        };
        if ok {
            Ok(())
        } else {
            Err(self.unsupported(factors.iter().map(|(rs, _)| rs).join("×")))
        }
    }
}

impl fmt::Display for CenterSubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SoEven => "so-even",
            Self::SoOdd => "so-odd",
            Self::So3 => "so3",
            Self::So4Diagonal => "so4-diagonal",
            Self::Trivial => "trivial",
        })
    }
}

fn from_u(rs: &RootSystem, u: Vec<Q>) -> Result<LevelWeight> {
    let lambda = &WeightVector::new(u) - rs.rho();
    LevelWeight::from_vector(rs, lambda)
}

/// Action of the nontrivial element of Γ on a weight of a simple factor.
pub fn center_act(
    spec: CenterSubgroupSpec,
    rs: &RootSystem,
    level: u32,
    weight: &LevelWeight,
) -> Result<LevelWeight> {
    spec.check_simple(rs)?;
    let k = Q::from_integer((level + rs.dual_coxeter()) as i64);
    match spec {
        CenterSubgroupSpec::Trivial => Ok(weight.clone()),
        CenterSubgroupSpec::SoEven => {
            let mut u = u_coords(rs, weight.vector())?.u;
            let s = u.len();
            u[0] = k - u[0];
            u[s - 1] = -u[s - 1];
            from_u(rs, u)
        }
        CenterSubgroupSpec::SoOdd => {
            let mut u = u_coords(rs, weight.vector())?.u;
            u[0] = k - u[0];
            from_u(rs, u)
        }
        CenterSubgroupSpec::So3 => sl2_flip(rs, level, weight),
        CenterSubgroupSpec::So4Diagonal => Err(spec.unsupported(rs)),
    }
}

fn sl2_flip(rs: &RootSystem, level: u32, weight: &LevelWeight) -> Result<LevelWeight> {
    let n = weight.coefficients()[0];
    if n > level {
        return Err(Error::InvalidArgument(format!(
            "{weight} is above level {level}"
        )));
    }
    LevelWeight::from_coefficients(rs, vec![level - n])
}

/// Action of the nontrivial element of Γ on a weight tuple of a product group.
pub fn center_act_product(
    spec: CenterSubgroupSpec,
    factors: &[(&RootSystem, u32)],
    tuple: &[LevelWeight],
) -> Result<Vec<LevelWeight>> {
    spec.check_product(factors)?;
    if tuple.len() != factors.len() {
        return Err(Error::DimensionMismatch {
            expected: factors.len(),
            got: tuple.len(),
        });
    }
    match spec {
        CenterSubgroupSpec::Trivial => Ok(tuple.to_vec()),
        CenterSubgroupSpec::So4Diagonal => factors
            .iter()
            .zip(tuple)
            .map(|((rs, level), w)| sl2_flip(rs, *level, w))
            .collect(),
        _ => Ok(vec![center_act(spec, factors[0].0, factors[0].1, &tuple[0])?]),
    }
}

/// Whether a weight of a simple factor is trivial on Γ.
pub fn is_trivial_on(spec: CenterSubgroupSpec, rs: &RootSystem, weight: &LevelWeight) -> Result<bool> {
    spec.check_simple(rs)?;
    Ok(match spec {
        CenterSubgroupSpec::Trivial => true,
        // integral ε-coordinates; ρ is integral for D and in (Z+½)^s for B
        CenterSubgroupSpec::SoEven | CenterSubgroupSpec::SoOdd => weight.vector().is_integral(),
        CenterSubgroupSpec::So3 => weight.coefficients()[0].is_multiple_of(2),
        CenterSubgroupSpec::So4Diagonal => unreachable!("rejected by check_simple"),
    })
}

fn level_label(levels: impl IntoIterator<Item = u32>) -> String {
    levels.into_iter().join(",")
}

/// The subset P′_ℓ of weights trivial on Γ.
pub fn restrict_to_quotient<'a>(
    set: &LevelWeightSet<'a>,
    spec: CenterSubgroupSpec,
) -> Result<LevelWeightSet<'a>> {
    spec.check_simple(set.rs)?;
    if spec == CenterSubgroupSpec::So3 && set.level % 2 == 1 {
        return Err(Error::IncompatibleLevel {
            spec: spec.to_string(),
            level: set.level.to_string(),
        });
    }
    let mut weights = Vec::new();
    for w in &set.weights {
        if is_trivial_on(spec, set.rs, w)? {
            weights.push(w.clone());
        }
    }
    Ok(LevelWeightSet {
        rs: set.rs,
        level: set.level,
        weights,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<R> {
    pub representative: R,
    pub size: u32,
    pub members: Vec<R>,
}

/// Γ-orbits with canonical (lexicographically minimal) representatives, in
/// canonical order of the representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet<R> {
    pub orbits: Vec<Orbit<R>>,
}

impl<R> OrbitSet<R> {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Σ |Γ·λ|
    pub fn total_size(&self) -> u32 {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

fn collect_orbits<R, K, F>(items: &[R], key: K, act: F) -> Result<OrbitSet<R>>
where
    R: Clone + Eq,
    K: Fn(&R) -> Vec<u32>,
    F: Fn(&R) -> Result<R>,
{
    let mut by_rep: BTreeMap<Vec<u32>, Orbit<R>> = BTreeMap::new();
    for item in items {
        let image = act(item)?;
        let (rep, other) = if key(&image) < key(item) {
            (image.clone(), item)
        } else {
            (item.clone(), &image)
        };
        let fixed = image == *item;
        let entry = by_rep.entry(key(&rep)).or_insert_with(|| Orbit {
            representative: rep.clone(),
            size: if fixed { 1 } else { 2 },
            members: if fixed { vec![rep.clone()] } else { vec![rep.clone(), other.clone()] },
        });
        debug_assert_eq!(entry.size, if fixed { 1 } else { 2 });
    }
    Ok(OrbitSet {
        orbits: by_rep.into_values().collect(),
    })
}

pub fn orbit_decompose(
    pprime: &LevelWeightSet<'_>,
    spec: CenterSubgroupSpec,
) -> Result<OrbitSet<LevelWeight>> {
    let orbits = collect_orbits(
        &pprime.weights,
        |w| w.coeffs.clone(),
        |w| center_act(spec, pprime.rs, pprime.level, w),
    )?;
    debug_assert_eq!(orbits.total_size() as usize, pprime.len());
    Ok(orbits)
}

/// `P_𝓵 = P_{ℓ_1} × … × P_{ℓ_q}` for a product of simply connected groups.
#[derive(Clone, Debug)]
pub struct ProductWeightSet<'a> {
    factors: Vec<(&'a RootSystem, u32)>,
    tuples: Vec<Vec<LevelWeight>>,
}

impl<'a> ProductWeightSet<'a> {
    pub fn factors(&self) -> &[(&'a RootSystem, u32)] {
        &self.factors
    }

    pub fn tuples(&self) -> &[Vec<LevelWeight>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

fn tuple_key(tuple: &[LevelWeight]) -> Vec<u32> {
    tuple.iter().flat_map(|w| w.coeffs.iter().copied()).collect()
}

pub fn enumerate_product_weights<'a>(factors: &[(&'a RootSystem, u32)]) -> ProductWeightSet<'a> {
    let tuples = factors
        .iter()
        .map(|(rs, level)| enumerate_level_weights(rs, *level).weights)
        .multi_cartesian_product()
        .collect();
    ProductWeightSet {
        factors: factors.to_vec(),
        tuples,
    }
}

pub fn restrict_product_to_quotient<'a>(
    set: &ProductWeightSet<'a>,
    spec: CenterSubgroupSpec,
) -> Result<ProductWeightSet<'a>> {
    spec.check_product(&set.factors)?;
    let tuples = match spec {
        CenterSubgroupSpec::Trivial => set.tuples.clone(),
        CenterSubgroupSpec::So4Diagonal => {
            let (l1, l2) = (set.factors[0].1, set.factors[1].1);
            if (l1 + l2) % 2 == 1 {
                return Err(Error::IncompatibleLevel {
                    spec: spec.to_string(),
                    level: level_label([l1, l2]),
                });
            }
            // (−I,−I) acts on (kρ, lρ) by (−1)^{k+l}
            set.tuples
                .iter()
                .filter(|t| (t[0].coeffs[0] + t[1].coeffs[0]) % 2 == 0)
                .cloned()
                .collect()
        }
        _ => {
            let (rs, level) = set.factors[0];
            let simple = LevelWeightSet {
                rs,
                level,
                weights: set.tuples.iter().map(|t| t[0].clone()).collect(),
            };
            restrict_to_quotient(&simple, spec)?
                .weights
                .into_iter()
                .map(|w| vec![w])
                .collect()
        }
    };
    Ok(ProductWeightSet {
        factors: set.factors.clone(),
        tuples,
    })
}

pub fn orbit_decompose_product(
    pprime: &ProductWeightSet<'_>,
    spec: CenterSubgroupSpec,
) -> Result<OrbitSet<Vec<LevelWeight>>> {
    collect_orbits(&pprime.tuples, |t| tuple_key(t), |t| {
        center_act_product(spec, &pprime.factors, t)
    })
}
