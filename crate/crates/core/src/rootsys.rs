//! Exact root-system data for the classical families A, B, C, D.
//!
//! Everything is stored in the ε-coordinate realization with exact rational
//! entries. The invariant form is scaled so that long roots have squared
//! length 2, which is the normalization the Verlinde formula is stated in.
//! Type A_n lives in the hyperplane `Σ x_i = 0` of an (n+1)-dimensional
//! space; the form there is the restriction of the standard dot product.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar used for all root-system data.
pub type Q = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    /// Smallest admissible rank.
    pub const fn min_rank(self) -> usize {
        match self {
            Family::A | Family::C => 1,
            Family::B => 2,
            Family::D => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(c)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            other => Err(Error::InvalidArgument(format!(
                "unknown root system type {other:?} (expected A, B, C or D)"
            ))),
        }
    }
}

/// A classical Cartan type with a validated rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    family: Family,
    rank: usize,
}

impl GroupType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = family.min_rank();
        if rank < min {
            return Err(Error::RankOutOfBounds { family, rank, min });
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of ε-coordinates of the realization.
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Exact coordinate vector in the ε-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<Q>);

impl WeightVector {
    pub fn new(coords: Vec<Q>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| Q::from_integer(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Q::zero(); dim])
    }

    /// `scale · ε_i`.
    pub fn unit(dim: usize, i: usize, scale: Q) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = scale;
        v
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// True when every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// True when every coordinate lies in `Z + 1/2`.
    pub fn is_half_odd(&self) -> bool {
        self.0.iter().all(|c| (*c * 2).is_integer() && !c.is_integer())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Q, Q) -> Q) -> Self {
        assert_eq!(self.dim(), other.dim(), "weight vectors of different dimension");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }
}

impl Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: Self) -> WeightVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: Self) -> WeightVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector(self.0.iter().map(|&a| -a).collect())
    }
}

impl Mul<Q> for &WeightVector {
    type Output = WeightVector;
    fn mul(self, rhs: Q) -> WeightVector {
        WeightVector(self.0.iter().map(|&a| a * rhs).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Root-system data for one classical type.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct RootSystem {
    group_type: GroupType,
    simple_roots: Vec<WeightVector>,
    positive_roots: Vec<WeightVector>,
    long_roots: Vec<WeightVector>,
    fundamental_weights: Vec<WeightVector>,
    rho: WeightVector,
    theta: WeightVector,
    dual_coxeter: u32,
    center_order: u32,
    nu: Option<u32>,
    gram_scale: Q,
    comarks: Vec<u32>,
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn half() -> Q {
    Q::new(1, 2)
}

/// `ε_i + sign·ε_j`
fn pair(dim: usize, i: usize, j: usize, sign: i64) -> WeightVector {
    let mut v = WeightVector::zero(dim);
    v.0[i] += Q::one();
    v.0[j] += q(sign);
    v
}

/// `ε_1 + … + ε_m`
fn prefix_sum(dim: usize, m: usize) -> WeightVector {
    let mut v = WeightVector::zero(dim);
    for c in v.0.iter_mut().take(m) {
        *c = Q::one();
    }
    v
}

impl RootSystem {
    pub fn build(group_type: GroupType) -> Self {
        let n = group_type.rank();
        let dim = group_type.ambient_dim();
        let mut simple_roots = Vec::with_capacity(n);
        let mut positive_roots = Vec::new();
        let mut fundamental_weights = Vec::with_capacity(n);

        // ε_i - ε_{i+1} is simple in every family for i < n-1 (all i < n for A).
        let chain = if group_type.family() == Family::A { n } else { n - 1 };
        for i in 0..chain {
            simple_roots.push(pair(dim, i, i + 1, -1));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                positive_roots.push(pair(dim, i, j, -1));
            }
        }

        let (gram_scale, center_order, nu) = match group_type.family() {
            Family::A => {
                let shift = Q::new(1, (n + 1) as i64);
                for i in 1..=n {
                    let mut w = prefix_sum(dim, i);
                    for c in w.0.iter_mut() {
                        *c -= shift * q(i as i64);
                    }
                    fundamental_weights.push(w);
                }
                (Q::one(), (n + 1) as u32, Some(1))
            }
            Family::B => {
                simple_roots.push(WeightVector::unit(dim, n - 1, Q::one()));
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive_roots.push(pair(dim, i, j, 1));
                    }
                    positive_roots.push(WeightVector::unit(dim, i, Q::one()));
                }
                for i in 1..n {
                    fundamental_weights.push(prefix_sum(dim, i));
                }
                fundamental_weights.push(&prefix_sum(dim, n) * half());
                (Q::one(), 2, Some(2))
            }
            Family::C => {
                simple_roots.push(WeightVector::unit(dim, n - 1, q(2)));
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive_roots.push(pair(dim, i, j, 1));
                    }
                    positive_roots.push(WeightVector::unit(dim, i, q(2)));
                }
                for i in 1..=n {
                    fundamental_weights.push(prefix_sum(dim, i));
                }
                (half(), 2, None)
            }
            Family::D => {
                simple_roots.push(pair(dim, n - 2, n - 1, 1));
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive_roots.push(pair(dim, i, j, 1));
                    }
                }
                for i in 1..=n - 2 {
                    fundamental_weights.push(prefix_sum(dim, i));
                }
                let mut spin_minus = &prefix_sum(dim, n) * half();
                spin_minus.0[n - 1] = -half();
                fundamental_weights.push(spin_minus);
                fundamental_weights.push(&prefix_sum(dim, n) * half());
                (Q::one(), 4, Some(1))
            }
        };

        let mut rs = RootSystem {
            group_type,
            simple_roots,
            positive_roots,
            long_roots: Vec::new(),
            fundamental_weights,
            rho: WeightVector::zero(dim),
            theta: WeightVector::zero(dim),
            dual_coxeter: 0,
            center_order,
            nu,
            gram_scale,
            comarks: Vec::new(),
        };

        let sum = rs
            .positive_roots
            .iter()
            .fold(WeightVector::zero(dim), |acc, a| &acc + a);
        rs.rho = &sum * half();

        rs.long_roots = rs
            .positive_roots
            .iter()
            .filter(|a| rs.dot(a, a) == q(2))
            .cloned()
            .collect();

        rs.theta = rs
            .positive_roots
            .iter()
            .max_by_key(|a| rs.height(a))
            .cloned()
            .expect("root system has at least one positive root");

        let h = rs.dot(&rs.rho, &rs.theta) + Q::one();
        debug_assert!(h.is_integer());
        rs.dual_coxeter = h.to_integer() as u32;

        rs.comarks = rs
            .fundamental_weights
            .iter()
            .map(|w| {
                let c = rs.dot(w, &rs.theta);
                debug_assert!(c.is_integer() && c.is_positive());
                c.to_integer() as u32
            })
            .collect();
        rs
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn family(&self) -> Family {
        self.group_type.family()
    }

    pub fn rank(&self) -> usize {
        self.group_type.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.group_type.ambient_dim()
    }

    pub fn simple_roots(&self) -> &[WeightVector] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[WeightVector] {
        &self.positive_roots
    }

    /// Positive long roots.
    pub fn long_roots(&self) -> &[WeightVector] {
        &self.long_roots
    }

    /// ϖ_1, …, ϖ_s.
    pub fn fundamental_weights(&self) -> &[WeightVector] {
        &self.fundamental_weights
    }

    pub fn rho(&self) -> &WeightVector {
        &self.rho
    }

    /// Highest root.
    pub fn theta(&self) -> &WeightVector {
        &self.theta
    }

    pub fn dual_coxeter(&self) -> u32 {
        self.dual_coxeter
    }

    /// Order of the center of the simply connected group.
    pub fn center_order(&self) -> u32 {
        self.center_order
    }

    /// Torus-order constant ν; absent for type C.
    pub fn nu(&self) -> Option<u32> {
        self.nu
    }

    /// `c` with `(ε_i|ε_j) = c·δ_ij` (before projection, for type A).
    pub fn gram_scale(&self) -> Q {
        self.gram_scale
    }

    /// `(ϖ_i|θ)` for each fundamental weight; all positive integers.
    pub fn comarks(&self) -> &[u32] {
        &self.comarks
    }

    fn check_dim(&self, v: &WeightVector) -> Result<()> {
        if v.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Invariant form on vectors already known to have the right dimension.
    pub(crate) fn dot(&self, v: &WeightVector, w: &WeightVector) -> Q {
        let raw: Q = v.0.iter().zip(&w.0).map(|(&a, &b)| a * b).sum();
        match self.family() {
            Family::A => {
                let sv: Q = v.0.iter().copied().sum();
                let sw: Q = w.0.iter().copied().sum();
                raw - sv * sw / q(self.ambient_dim() as i64)
            }
            _ => raw * self.gram_scale,
        }
    }

    /// The normalized invariant form `(v|w)`.
    pub fn inner(&self, v: &WeightVector, w: &WeightVector) -> Result<Q> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        Ok(self.dot(v, w))
    }

    pub fn is_root(&self, alpha: &WeightVector) -> bool {
        self.positive_roots
            .iter()
            .any(|a| a == alpha || &-a == alpha)
    }

    /// `⟨λ, α^∨⟩ = 2(λ|α)/(α|α)`.
    pub fn coroot_pairing(&self, lambda: &WeightVector, alpha: &WeightVector) -> Result<Q> {
        self.check_dim(lambda)?;
        self.check_dim(alpha)?;
        if !self.is_root(alpha) {
            return Err(Error::NotARoot(alpha.to_string()));
        }
        Ok(self.pairing_unchecked(lambda, alpha))
    }

    fn pairing_unchecked(&self, lambda: &WeightVector, alpha: &WeightVector) -> Q {
        q(2) * self.dot(lambda, alpha) / self.dot(alpha, alpha)
    }

    /// Coefficients of `λ` in the basis of fundamental weights.
    pub fn fundamental_coefficients(&self, lambda: &WeightVector) -> Result<Vec<Q>> {
        self.check_dim(lambda)?;
        Ok(self
            .simple_roots
            .iter()
            .map(|a| self.pairing_unchecked(lambda, a))
            .collect())
    }

    /// Coefficients of `v` in the basis of simple roots.
    pub fn simple_root_coefficients(&self, v: &WeightVector) -> Result<Vec<Q>> {
        self.check_dim(v)?;
        Ok(self
            .simple_roots
            .iter()
            .zip(&self.fundamental_weights)
            .map(|(a, w)| q(2) * self.dot(v, w) / self.dot(a, a))
            .collect())
    }

    fn height(&self, alpha: &WeightVector) -> Q {
        self.simple_root_coefficients(alpha)
            .expect("roots have the ambient dimension")
            .into_iter()
            .sum()
    }

    /// `Σ n_i ϖ_i`.
    pub fn weight_from_coefficients(&self, coeffs: &[u32]) -> Result<WeightVector> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coeffs.len(),
            });
        }
        Ok(coeffs
            .iter()
            .zip(&self.fundamental_weights)
            .fold(WeightVector::zero(self.ambient_dim()), |acc, (&n, w)| {
                &acc + &(w * q(n as i64))
            }))
    }

    /// True when `λ` is integral and pairs nonnegatively with every simple coroot.
    pub fn is_dominant_integral(&self, lambda: &WeightVector) -> Result<bool> {
        Ok(self
            .fundamental_coefficients(lambda)?
            .iter()
            .all(|c| c.is_integer() && !c.is_negative()))
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group_type)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn rs(family: Family, rank: usize) -> RootSystem {
        RootSystem::build(GroupType::new(family, rank).unwrap())
    }

    /// Closure of the simple roots under simple reflections.
    fn brute_force_roots(rs: &RootSystem) -> BTreeSet<WeightVector> {
        let mut roots: BTreeSet<WeightVector> = rs.simple_roots().iter().cloned().collect();
        loop {
            let mut next = roots.clone();
            for r in &roots {
                for a in rs.simple_roots() {
                    let c = rs.coroot_pairing(r, a).unwrap();
                    next.insert(r - &(a * c));
                }
            }
            if next.len() == roots.len() {
                return roots;
            }
            roots = next;
        }
    }

    #[test]
    fn rank_bounds_are_enforced() {
        assert!(GroupType::new(Family::A, 0).is_err());
        assert!(GroupType::new(Family::B, 1).is_err());
        assert!(GroupType::new(Family::C, 0).is_err());
        let err = GroupType::new(Family::D, 2).unwrap_err();
        assert!(err.to_string().contains("at least 3"), "{err}");
        assert!(GroupType::new(Family::D, 3).is_ok());
    }

    #[test]
    fn a1_data() {
        let a1 = rs(Family::A, 1);
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.theta(), &(a1.rho() * q(2)));
        assert_eq!(a1.dual_coxeter(), 2);
        assert_eq!(a1.center_order(), 2);
        assert_eq!(a1.nu(), Some(1));
        assert_eq!(a1.inner(a1.rho(), a1.rho()).unwrap(), half());
        assert_eq!(a1.coroot_pairing(a1.rho(), a1.theta()).unwrap(), q(1));
    }

    #[test]
    fn d4_data() {
        let d4 = rs(Family::D, 4);
        assert_eq!(d4.positive_roots().len(), 12);
        assert_eq!(brute_force_roots(&d4).len(), 24);
        assert_eq!(d4.dual_coxeter(), 6);
        assert_eq!(d4.center_order(), 4);
        assert_eq!(d4.nu(), Some(1));
        let w2 = &d4.fundamental_weights()[1];
        assert_eq!(d4.coroot_pairing(w2, d4.theta()).unwrap(), q(2));
        assert_eq!(d4.comarks(), &[1, 2, 1, 1]);
    }

    #[test]
    fn b2_data() {
        let b2 = rs(Family::B, 2);
        assert_eq!(b2.positive_roots().len(), 4);
        assert_eq!(b2.dual_coxeter(), 3);
        assert_eq!(b2.center_order(), 2);
        assert_eq!(b2.nu(), Some(2));
        let w2 = &b2.fundamental_weights()[1];
        assert_eq!(b2.coroot_pairing(w2, b2.theta()).unwrap(), q(1));
    }

    #[test]
    fn c2_gram_scale() {
        let c2 = rs(Family::C, 2);
        assert_eq!(c2.gram_scale(), half());
        let e1 = WeightVector::unit(2, 0, Q::one());
        assert_eq!(c2.inner(&e1, &e1).unwrap(), half());
        assert_eq!(c2.nu(), None);
        assert_eq!(c2.dual_coxeter(), 3);
        assert_eq!(c2.theta(), &WeightVector::from_ints(&[2, 0]));
    }

    #[test]
    fn invariants_hold_for_small_ranks() {
        for family in [Family::A, Family::B, Family::C, Family::D] {
            for rank in family.min_rank()..=8 {
                let r = rs(family, rank);
                let s = rank;
                let (count, h, f) = match family {
                    Family::A => (s * (s + 1) / 2, s + 1, s + 1),
                    Family::B => (s * s, 2 * s - 1, 2),
                    Family::C => (s * s, s + 1, 2),
                    Family::D => (s * (s - 1), 2 * s - 2, 4),
                };
                let label = r.to_string();
                assert_eq!(r.positive_roots().len(), count, "{label}");
                assert_eq!(brute_force_roots(&r).len(), 2 * count, "{label}");
                assert_eq!(r.dual_coxeter() as usize, h, "{label}");
                assert_eq!(r.center_order() as usize, f, "{label}");
                assert_eq!(r.inner(r.theta(), r.theta()).unwrap(), q(2), "{label}");
                assert!(r.long_roots().contains(r.theta()), "{label}");

                // the generated roots agree with the explicit list
                let explicit: BTreeSet<_> = r
                    .positive_roots()
                    .iter()
                    .flat_map(|a| [a.clone(), -a])
                    .collect();
                assert_eq!(explicit, brute_force_roots(&r), "{label}");

                // ϖ_i dual to the simple coroots
                for (i, w) in r.fundamental_weights().iter().enumerate() {
                    for (j, a) in r.simple_roots().iter().enumerate() {
                        let expect = if i == j { Q::one() } else { Q::zero() };
                        assert_eq!(r.coroot_pairing(w, a).unwrap(), expect, "{label}");
                    }
                }

                let sum = r
                    .fundamental_weights()
                    .iter()
                    .fold(WeightVector::zero(r.ambient_dim()), |acc, w| &acc + w);
                assert_eq!(&sum, r.rho(), "{label}");

                // positive roots are nonnegative integer combinations of simple roots
                for a in r.positive_roots() {
                    for c in r.simple_root_coefficients(a).unwrap() {
                        assert!(c.is_integer() && !c.is_negative(), "{label} {a}");
                    }
                }

                // θ is the unique maximal root: θ - α is a nonnegative combination
                for a in r.positive_roots() {
                    let diff = r.theta() - a;
                    for c in r.simple_root_coefficients(&diff).unwrap() {
                        assert!(!c.is_negative(), "{label} {a}");
                    }
                }
            }
        }
    }

    #[test]
    fn coroot_pairing_rejects_non_roots() {
        let d4 = rs(Family::D, 4);
        let v = WeightVector::from_ints(&[1, 0, 0, 0]);
        assert!(matches!(d4.coroot_pairing(&v, &v), Err(Error::NotARoot(_))));
        let short = WeightVector::from_ints(&[1, 0]);
        assert!(matches!(
            d4.inner(&short, &short),
            Err(Error::DimensionMismatch { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn bd_shifted_weights_have_half_integer_steps() {
        for (family, rank) in [(Family::B, 3), (Family::D, 4), (Family::D, 5)] {
            let r = rs(family, rank);
            for coeffs in [[0u32, 1, 0], [2, 0, 1], [1, 1, 1]] {
                let mut c = vec![0; rank];
                c[..3].copy_from_slice(&coeffs);
                let u = &r.weight_from_coefficients(&c).unwrap() + r.rho();
                for w in u.coords().windows(2) {
                    assert!((w[0] - w[1]).is_integer());
                }
                assert!(u.coords().iter().all(|x| (*x * 2).is_integer()));
            }
        }
    }
}
