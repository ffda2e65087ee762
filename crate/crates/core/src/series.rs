//! Truncated multivariate power series over an exact coefficient ring.
//!
//! A series is a sparse map from exponent vectors to coefficients,
//! truncated at a componentwise bound: every operation drops degrees
//! that exceed the bound in any component. Coefficient rings are passed
//! as ring objects so that rings needing group context (and memo
//! caches) fit the same interface as the integers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_integer::binomial;

use crate::burnside::{EqClassId, EqElement, EqRing};

/// Exponent vector of a monomial `t1^{v1} ... tr^{vr}`.
pub type MultiDegree = Vec<u32>;

pub fn degree_total(d: &[u32]) -> u64 {
    d.iter().map(|&x| x as u64).sum()
}

pub fn degree_le(d: &[u32], bound: &[u32]) -> bool {
    d.iter().zip(bound).all(|(&a, &b)| a <= b)
}

pub fn degree_add(a: &[u32], b: &[u32]) -> MultiDegree {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn degree_is_zero(d: &[u32]) -> bool {
    d.iter().all(|&x| x == 0)
}

/// Graded order: total degree first, then lexicographic.
pub fn graded_cmp(a: &[u32], b: &[u32]) -> core::cmp::Ordering {
    degree_total(a).cmp(&degree_total(b)).then_with(|| a.cmp(b))
}

/// A commutative ring with a chosen unit, used as the coefficient
/// domain of a series. `mul` takes `&mut self` so rings may memoize.
pub trait CoeffRing {
    type Elem: Clone + Eq + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, e: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&mut self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.neg(b);
        self.add(a, &n)
    }
}

/// The integers as a coefficient ring.
pub struct IntRing;

impl CoeffRing for IntRing {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }

    fn one(&self) -> i64 {
        1
    }

    fn is_zero(&self, e: &i64) -> bool {
        *e == 0
    }

    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn neg(&self, a: &i64) -> i64 {
        -a
    }

    fn mul(&mut self, a: &i64, b: &i64) -> i64 {
        a * b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    ArityMismatch { left: usize, right: usize },
    BoundMismatch,
    DegreeOutOfBound { degree: MultiDegree },
    NonUnitConstant,
    ZeroFactorDegree,
    ZeroImage { variable: usize },
    NonUnitResidual { description: String },
}

impl core::error::Error for SeriesError {}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ArityMismatch { left, right } => {
                write!(f, "arity mismatch: {} vs {}", left, right)
            }
            SeriesError::BoundMismatch => write!(f, "truncation bounds differ"),
            SeriesError::DegreeOutOfBound { degree } => {
                write!(f, "degree {:?} exceeds the truncation bound", degree)
            }
            SeriesError::NonUnitConstant => write!(f, "constant term is not the unit"),
            SeriesError::ZeroFactorDegree => write!(f, "binomial factor has zero degree"),
            SeriesError::ZeroImage { variable } => {
                write!(f, "substitution image of variable {} is zero", variable)
            }
            SeriesError::NonUnitResidual { description } => {
                write!(f, "factorization left a non-unit residual: {}", description)
            }
        }
    }
}

/// A truncated multivariate power series with sparse coefficients.
///
/// Invariants: every stored degree is componentwise at most `bound`,
/// and no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiSeries<E> {
    arity: usize,
    bound: MultiDegree,
    terms: BTreeMap<MultiDegree, E>,
}

impl<E: Clone + Eq + fmt::Debug + Ord> MultiSeries<E> {
    pub fn zero(arity: usize, bound: MultiDegree) -> Self {
        assert_eq!(arity, bound.len());
        MultiSeries { arity, bound, terms: BTreeMap::new() }
    }

    pub fn constant<R: CoeffRing<Elem = E>>(ring: &R, arity: usize, bound: MultiDegree, c: E) -> Self {
        let mut s = Self::zero(arity, bound);
        s.set(ring, vec![0; arity], c);
        s
    }

    pub fn one<R: CoeffRing<Elem = E>>(ring: &R, arity: usize, bound: MultiDegree) -> Self {
        let c = ring.one();
        Self::constant(ring, arity, bound, c)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiDegree, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff<R: CoeffRing<Elem = E>>(&self, ring: &R, d: &[u32]) -> E {
        self.terms.get(d).cloned().unwrap_or_else(|| ring.zero())
    }

    /// Set a coefficient, dropping zeros; degrees beyond the bound are
    /// rejected.
    pub fn set<R: CoeffRing<Elem = E>>(&mut self, ring: &R, d: MultiDegree, c: E) {
        assert_eq!(d.len(), self.arity);
        assert!(degree_le(&d, &self.bound), "degree beyond the bound");
        if ring.is_zero(&c) {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, c);
        }
    }

    pub fn add_term<R: CoeffRing<Elem = E>>(&mut self, ring: &R, d: MultiDegree, c: E) {
        if !degree_le(&d, &self.bound) {
            return;
        }
        let cur = self.coeff(ring, &d);
        let sum = ring.add(&cur, &c);
        self.set(ring, d, sum);
    }

    pub fn add<R: CoeffRing<Elem = E>>(ring: &R, a: &Self, b: &Self) -> Result<Self, SeriesError> {
        Self::check_compatible(a, b)?;
        let mut out = a.clone();
        for (d, c) in b.terms() {
            out.add_term(ring, d.clone(), c.clone());
        }
        Ok(out)
    }

    /// Whether the series is the constant one.
    pub fn is_one<R: CoeffRing<Elem = E>>(&self, ring: &R) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.arity])
                .map_or(false, |c| *c == ring.one())
    }

    fn check_compatible(a: &Self, b: &Self) -> Result<(), SeriesError> {
        if a.arity != b.arity {
            return Err(SeriesError::ArityMismatch { left: a.arity, right: b.arity });
        }
        if a.bound != b.bound {
            return Err(SeriesError::BoundMismatch);
        }
        Ok(())
    }

    /// Cauchy product, truncated at the common bound.
    pub fn mul<R: CoeffRing<Elem = E>>(ring: &mut R, a: &Self, b: &Self) -> Result<Self, SeriesError> {
        Self::check_compatible(a, b)?;
        let mut out = Self::zero(a.arity, a.bound.clone());
        for (da, ca) in a.terms() {
            for (db, cb) in b.terms() {
                let d = degree_add(da, db);
                if !degree_le(&d, &a.bound) {
                    continue;
                }
                let p = ring.mul(ca, cb);
                out.add_term(ring, d, p);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be the unit.
    pub fn inverse<R: CoeffRing<Elem = E>>(ring: &mut R, a: &Self) -> Result<Self, SeriesError> {
        let zero_deg = vec![0u32; a.arity];
        if a.coeff(ring, &zero_deg) != ring.one() {
            return Err(SeriesError::NonUnitConstant);
        }
        // degrees reachable as sums of nonzero support degrees
        let support: Vec<MultiDegree> = a
            .terms()
            .map(|(d, _)| d.clone())
            .filter(|d| !degree_is_zero(d))
            .collect();
        let mut reachable: BTreeSet<MultiDegree> = BTreeSet::new();
        reachable.insert(zero_deg.clone());
        let mut frontier = vec![zero_deg.clone()];
        while let Some(d) = frontier.pop() {
            for s in &support {
                let nd = degree_add(&d, s);
                if degree_le(&nd, &a.bound) && reachable.insert(nd.clone()) {
                    frontier.push(nd);
                }
            }
        }
        let mut order: Vec<MultiDegree> = reachable.into_iter().collect();
        order.sort_by(|x, y| graded_cmp(x, y));

        let mut inv = Self::zero(a.arity, a.bound.clone());
        inv.set(ring, zero_deg.clone(), ring.one());
        for d in order.into_iter().skip(1) {
            let mut acc = ring.zero();
            for s in &support {
                if !degree_le(s, &d) {
                    continue;
                }
                let rem: MultiDegree = d.iter().zip(s).map(|(&x, &y)| x - y).collect();
                let prev = inv.coeff(ring, &rem);
                if ring.is_zero(&prev) {
                    continue;
                }
                let c = a.coeff(ring, s);
                let p = ring.mul(&c, &prev);
                acc = ring.add(&acc, &p);
            }
            let val = ring.neg(&acc);
            inv.set(ring, d, val);
        }
        Ok(inv)
    }

    /// Substitute each variable by a monomial in a new variable set.
    ///
    /// A term `c * t^v` maps to `c * u^{sum_j v_j * images_j}`; terms
    /// exceeding `target_bound` are dropped.
    pub fn substitute<R: CoeffRing<Elem = E>>(
        ring: &R,
        a: &Self,
        images: &[MultiDegree],
        target_bound: MultiDegree,
    ) -> Result<MultiSeries<E>, SeriesError> {
        if images.len() != a.arity {
            return Err(SeriesError::ArityMismatch { left: a.arity, right: images.len() });
        }
        let target_arity = target_bound.len();
        for (variable, im) in images.iter().enumerate() {
            if im.len() != target_arity {
                return Err(SeriesError::ArityMismatch { left: target_arity, right: im.len() });
            }
            if degree_is_zero(im) {
                return Err(SeriesError::ZeroImage { variable });
            }
        }
        let mut out = MultiSeries::zero(target_arity, target_bound);
        for (d, c) in a.terms() {
            let mut nd = vec![0u32; target_arity];
            for (j, &v) in d.iter().enumerate() {
                for (slot, &w) in nd.iter_mut().zip(&images[j]) {
                    *slot += v * w;
                }
            }
            out.add_term(ring, nd, c.clone());
        }
        Ok(out)
    }

    /// Apply a map to every coefficient (for the reduction
    /// homomorphisms), dropping zeros of the target ring.
    pub fn map_coefficients<E2, R2, F>(&self, target: &R2, f: F) -> MultiSeries<E2>
    where
        E2: Clone + Eq + Ord + fmt::Debug,
        R2: CoeffRing<Elem = E2>,
        F: Fn(&E) -> E2,
    {
        let mut out = MultiSeries::zero(self.arity, self.bound.clone());
        for (d, c) in self.terms() {
            out.set(target, d.clone(), f(c));
        }
        out
    }

    /// Re-truncate to a smaller (componentwise) bound.
    pub fn truncated(&self, bound: MultiDegree) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(d, _)| degree_le(d, &bound))
            .map(|(d, c)| (d.clone(), c.clone()))
            .collect();
        MultiSeries { arity: self.arity, bound, terms }
    }

    /// The minimal nonconstant term in graded order, if any.
    pub fn min_nonconstant(&self) -> Option<(&MultiDegree, &E)> {
        self.terms
            .iter()
            .filter(|(d, _)| !degree_is_zero(d))
            .min_by(|(a, _), (b, _)| graded_cmp(a, b))
    }
}

/// One binomial `(1 - t^w)^{-s [G/H]_alpha}` in a factored series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinomialFactor {
    pub w: MultiDegree,
    pub s: i64,
    pub cls: EqClassId,
}

/// A canonical product of binomial factors: sorted by (total degree,
/// exponent, class), with equal `(w, cls)` pairs merged and zero
/// exponents dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredSeries {
    arity: usize,
    factors: Vec<BinomialFactor>,
}

impl FactoredSeries {
    pub fn new(arity: usize, factors: Vec<BinomialFactor>) -> Result<Self, SeriesError> {
        for f in &factors {
            if f.w.len() != arity {
                return Err(SeriesError::ArityMismatch { left: arity, right: f.w.len() });
            }
            if degree_is_zero(&f.w) {
                return Err(SeriesError::ZeroFactorDegree);
            }
        }
        let mut out = FactoredSeries { arity, factors };
        out.canonicalize();
        Ok(out)
    }

    pub fn empty(arity: usize) -> Self {
        FactoredSeries { arity, factors: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn factors(&self) -> &[BinomialFactor] {
        &self.factors
    }

    fn canonicalize(&mut self) {
        let mut merged: BTreeMap<(MultiDegree, EqClassId), i64> = BTreeMap::new();
        for f in &self.factors {
            *merged.entry((f.w.clone(), f.cls)).or_insert(0) += f.s;
        }
        let mut factors: Vec<BinomialFactor> = merged
            .into_iter()
            .filter(|(_, s)| *s != 0)
            .map(|((w, cls), s)| BinomialFactor { w, s, cls })
            .collect();
        factors.sort_by(|a, b| graded_cmp(&a.w, &b.w).then(a.cls.cmp(&b.cls)));
        self.factors = factors;
    }

    /// Expand the product to the given bound.
    pub fn expand(
        &self,
        ring: &mut EqRing<'_>,
        bound: &[u32],
    ) -> Result<MultiSeries<EqElement>, SeriesError> {
        let mut acc = MultiSeries::one(ring, self.arity, bound.to_vec());
        for f in &self.factors {
            let e = expand_eq_binomial(ring, &f.w, f.s, f.cls, bound)?;
            acc = MultiSeries::mul(ring, &acc, &e)?;
        }
        Ok(acc)
    }
}

/// Expansion of `(1 - t^w)^{-s [cls]}` truncated at `bound`.
///
/// For `s = 1` the coefficient of `t^{kw}` is the k-th symmetric power
/// of the class; positive `s` multiplies `s` copies; negative `s`
/// inverts the positive expansion. `s = 0` gives the unit series.
pub fn expand_eq_binomial(
    ring: &mut EqRing<'_>,
    w: &[u32],
    s: i64,
    cls: EqClassId,
    bound: &[u32],
) -> Result<MultiSeries<EqElement>, SeriesError> {
    if degree_is_zero(w) {
        return Err(SeriesError::ZeroFactorDegree);
    }
    let arity = w.len();
    if bound.len() != arity {
        return Err(SeriesError::ArityMismatch { left: arity, right: bound.len() });
    }
    if s == 0 {
        return Ok(MultiSeries::one(ring, arity, bound.to_vec()));
    }
    let kmax = w
        .iter()
        .zip(bound)
        .filter(|(&wi, _)| wi > 0)
        .map(|(&wi, &bi)| bi / wi)
        .min()
        .unwrap_or(0);
    let mut base = MultiSeries::zero(arity, bound.to_vec());
    for k in 0..=kmax as usize {
        let coeff = ring.class_sym_power(cls, k);
        let deg: MultiDegree = w.iter().map(|&wi| wi * k as u32).collect();
        base.set(ring, deg, coeff);
    }
    let mut acc = base.clone();
    for _ in 1..s.unsigned_abs() {
        acc = MultiSeries::mul(ring, &acc, &base)?;
    }
    if s < 0 {
        acc = MultiSeries::inverse(ring, &acc)?;
    }
    Ok(acc)
}

/// Expansion of `(1 - t^w)^{-s}` over the integers.
pub fn expand_int_binomial(
    w: &[u32],
    s: i64,
    bound: &[u32],
) -> Result<MultiSeries<i64>, SeriesError> {
    if degree_is_zero(w) {
        return Err(SeriesError::ZeroFactorDegree);
    }
    let arity = w.len();
    if bound.len() != arity {
        return Err(SeriesError::ArityMismatch { left: arity, right: bound.len() });
    }
    let ring = IntRing;
    let kmax = w
        .iter()
        .zip(bound)
        .filter(|(&wi, _)| wi > 0)
        .map(|(&wi, &bi)| bi / wi)
        .min()
        .unwrap_or(0);
    let mut out = MultiSeries::zero(arity, bound.to_vec());
    for k in 0..=kmax as i64 {
        let c = if s >= 0 {
            binomial(s + k - 1, k)
        } else {
            // (1 - t^w)^{|s|}: alternating binomial coefficients
            let m = -s;
            if k > m {
                0
            } else {
                let b = binomial(m, k);
                if k % 2 == 0 {
                    b
                } else {
                    -b
                }
            }
        };
        let deg: MultiDegree = w.iter().map(|&wi| wi * k as u32).collect();
        out.set(&ring, deg, c);
    }
    Ok(out)
}

/// A factored series over the integers (for the non-equivariant side of
/// the consistency check): a product of `(1 - u^w)^{-s}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NonEquivFactored {
    pub arity: usize,
    pub factors: Vec<(MultiDegree, i64)>,
}

impl NonEquivFactored {
    pub fn expand(&self, bound: &[u32]) -> Result<MultiSeries<i64>, SeriesError> {
        let mut ring = IntRing;
        let mut acc = MultiSeries::one(&ring, self.arity, bound.to_vec());
        for (w, s) in &self.factors {
            let e = expand_int_binomial(w, *s, bound)?;
            acc = MultiSeries::mul(&mut ring, &acc, &e)?;
        }
        Ok(acc)
    }
}

/// Unique factorization of a truncated series with unit constant term
/// into binomial factors.
///
/// Repeatedly take the minimal nonconstant term in graded order, read
/// its coefficient in the canonical class basis, peel all classes at
/// that degree at once, and continue until the residual is the unit.
pub fn factorize(
    ring: &mut EqRing<'_>,
    p: &MultiSeries<EqElement>,
) -> Result<FactoredSeries, SeriesError> {
    let arity = p.arity();
    let zero_deg = vec![0u32; arity];
    if p.coeff(ring, &zero_deg) != ring.one() {
        return Err(SeriesError::NonUnitConstant);
    }
    let mut residual = p.clone();
    let mut factors: Vec<BinomialFactor> = Vec::new();
    // each pass strictly raises the minimal term in graded order, so
    // the number of passes is bounded by the number of degrees in the box
    let mut passes = p
        .bound()
        .iter()
        .fold(1u64, |acc, &b| acc.saturating_mul(b as u64 + 1))
        .saturating_add(1);
    while let Some((w, coeff)) = residual.min_nonconstant().map(|(d, c)| (d.clone(), c.clone())) {
        if passes == 0 {
            return Err(SeriesError::NonUnitResidual {
                description: format!("peeling did not terminate; minimal term at {:?}", w),
            });
        }
        passes -= 1;
        let mut peel = MultiSeries::one(ring, arity, residual.bound().to_vec());
        for (cls, s) in coeff.terms() {
            factors.push(BinomialFactor { w: w.clone(), s, cls });
            let inv = expand_eq_binomial(ring, &w, -s, cls, residual.bound())?;
            peel = MultiSeries::mul(ring, &peel, &inv)?;
        }
        residual = MultiSeries::mul(ring, &residual, &peel)?;
    }
    if !residual.is_one(ring) {
        return Err(SeriesError::NonUnitResidual {
            description: format!("residual has {} terms", residual.len()),
        });
    }
    FactoredSeries::new(arity, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{rho, rhohat, BurnsideQElement, BurnsideQRing, EqRing};
    use crate::group::{FiniteGroup, GroupContext};

    fn z2_ctx() -> GroupContext {
        GroupContext::new(FiniteGroup::cyclic(2))
    }

    fn class_by(ctx: &GroupContext, order: usize, trivial: bool) -> EqClassId {
        for id in 0..ctx.eq_class_count() as u32 {
            let (class, ch) = ctx.eq_class_data(id);
            if ctx.class_representative(class).order() == order && ch.is_trivial() == trivial {
                return EqClassId(id);
            }
        }
        panic!("class not found");
    }

    #[test]
    fn geometric_series_from_unit_class() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let unit = EqClassId(ctx.unit_class());
        let s = expand_eq_binomial(&mut ring, &[1], 1, unit, &[5]).unwrap();
        for k in 0..=5u32 {
            assert_eq!(s.coeff(&ring, &[k]), EqElement::one(&ctx));
        }
    }

    #[test]
    fn sigma_expansion_alternates() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let sigma = class_by(&ctx, 2, false);
        let s = expand_eq_binomial(&mut ring, &[1], 1, sigma, &[6]).unwrap();
        for k in 0..=6u32 {
            let expected = if k % 2 == 0 {
                EqElement::one(&ctx)
            } else {
                EqElement::from_class(sigma)
            };
            assert_eq!(s.coeff(&ring, &[k]), expected, "degree {}", k);
        }
    }

    #[test]
    fn free_class_expansion_closed_form() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let free = class_by(&ctx, 1, true);
        let s = expand_eq_binomial(&mut ring, &[1], 1, free, &[9]).unwrap();
        for k in 0..=9u32 {
            let mut expected = EqElement::zero();
            if k % 2 == 0 {
                expected.add_class(free, k as i64 / 2);
                expected.add_assign(&EqElement::one(&ctx));
            } else {
                expected.add_class(free, (k as i64 + 1) / 2);
            }
            assert_eq!(s.coeff(&ring, &[k]), expected, "degree {}", k);
        }
    }

    #[test]
    fn mul_by_one_and_inverse_roundtrip() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let sigma = class_by(&ctx, 2, false);
        let a = expand_eq_binomial(&mut ring, &[1, 1], 2, sigma, &[4, 4]).unwrap();
        let one = MultiSeries::one(&ring, 2, vec![4, 4]);
        assert_eq!(MultiSeries::mul(&mut ring, &a, &one).unwrap(), a);
        let inv = MultiSeries::inverse(&mut ring, &a).unwrap();
        assert_eq!(MultiSeries::mul(&mut ring, &a, &inv).unwrap(), one);
    }

    #[test]
    fn literal_one_minus_t_times_its_inverse() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let mut lit = MultiSeries::one(&ring, 1, vec![7]);
        lit.set(&ring, vec![1], EqElement::one(&ctx).neg());
        let inv = MultiSeries::inverse(&mut ring, &lit).unwrap();
        let geo = expand_eq_binomial(&mut ring, &[1], 1, EqClassId(ctx.unit_class()), &[7]).unwrap();
        assert_eq!(inv, geo);
        assert_eq!(
            MultiSeries::mul(&mut ring, &lit, &inv).unwrap(),
            MultiSeries::one(&ring, 1, vec![7])
        );
    }

    #[test]
    fn inverse_requires_unit_constant() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let mut bad = MultiSeries::zero(1, vec![3]);
        bad.set(&ring, vec![0], EqElement::one(&ctx).scaled(2));
        assert_eq!(
            MultiSeries::inverse(&mut ring, &bad).unwrap_err(),
            SeriesError::NonUnitConstant
        );
    }

    #[test]
    fn substitution_identity_and_monomial() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let unit = EqClassId(ctx.unit_class());
        let s = expand_eq_binomial(&mut ring, &[1], 1, unit, &[4]).unwrap();
        let same = MultiSeries::substitute(&ring, &s, &[vec![1]], vec![4]).unwrap();
        assert_eq!(same, s);
        // t -> t1 t2
        let sub = MultiSeries::substitute(&ring, &s, &[vec![1, 1]], vec![4, 4]).unwrap();
        let direct = expand_eq_binomial(&mut ring, &[1, 1], 1, unit, &[4, 4]).unwrap();
        assert_eq!(sub, direct);
    }

    #[test]
    fn substitution_rejects_zero_image() {
        let ctx = z2_ctx();
        let ring = EqRing::new(&ctx);
        let s = MultiSeries::<EqElement>::one(&ring, 1, vec![3]);
        assert_eq!(
            MultiSeries::substitute(&ring, &s, &[vec![0, 0]], vec![3, 3]).unwrap_err(),
            SeriesError::ZeroImage { variable: 0 }
        );
    }

    #[test]
    fn substitution_is_multiplicative() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let sigma = class_by(&ctx, 2, false);
        let free = class_by(&ctx, 1, true);
        let a = expand_eq_binomial(&mut ring, &[1, 0], 1, sigma, &[3, 3]).unwrap();
        let b = expand_eq_binomial(&mut ring, &[1, 1], 1, free, &[3, 3]).unwrap();
        let ab = MultiSeries::mul(&mut ring, &a, &b).unwrap();
        let images = [vec![1u32, 1, 0], vec![0u32, 1, 1]];
        let target = vec![6u32, 6, 6];
        let sub_ab = MultiSeries::substitute(&ring, &ab, &images, target.clone()).unwrap();
        let sa = MultiSeries::substitute(&ring, &a, &images, target.clone()).unwrap();
        let sb = MultiSeries::substitute(&ring, &b, &images, target).unwrap();
        // compare after truncating the product of images to where the
        // substituted product is fully represented
        let prod = MultiSeries::mul(&mut ring, &sa, &sb).unwrap();
        for (d, c) in sub_ab.terms() {
            assert_eq!(&prod.coeff(&ring, d), c);
        }
    }

    #[test]
    fn factorize_one_is_empty() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let one = MultiSeries::one(&ring, 2, vec![4, 4]);
        let f = factorize(&mut ring, &one).unwrap();
        assert!(f.factors().is_empty());
    }

    #[test]
    fn factorize_single_factor_roundtrip() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let free = class_by(&ctx, 1, true);
        let f = FactoredSeries::new(
            1,
            vec![BinomialFactor { w: vec![2], s: -2, cls: free }],
        )
        .unwrap();
        let e = f.expand(&mut ring, &[8]).unwrap();
        assert_eq!(factorize(&mut ring, &e).unwrap(), f);
    }

    #[test]
    fn factorize_rejects_non_unit_constant() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let z = MultiSeries::<EqElement>::zero(1, vec![3]);
        assert_eq!(factorize(&mut ring, &z).unwrap_err(), SeriesError::NonUnitConstant);
    }

    #[test]
    fn four_factor_product_over_s3() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 64).unwrap();
        let ctx = GroupContext::new(g);
        let mut ring = EqRing::new(&ctx);
        let classes: Vec<EqClassId> = (0..ctx.eq_class_count() as u32).map(EqClassId).collect();
        let f = FactoredSeries::new(
            2,
            vec![
                BinomialFactor { w: vec![1, 0], s: 1, cls: classes[1] },
                BinomialFactor { w: vec![0, 1], s: 2, cls: classes[3] },
                BinomialFactor { w: vec![1, 1], s: -1, cls: classes[0] },
                BinomialFactor { w: vec![2, 1], s: 1, cls: classes[5] },
            ],
        )
        .unwrap();
        let e = f.expand(&mut ring, &[8, 8]).unwrap();
        assert_eq!(factorize(&mut ring, &e).unwrap(), f);
    }

    #[test]
    fn pre_lambda_additivity_small() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let free = class_by(&ctx, 1, true);
        for (s1, s2) in [(1i64, 1i64), (2, -1), (-2, 1), (3, -3)] {
            let lhs = expand_eq_binomial(&mut ring, &[1], s1 + s2, free, &[6]).unwrap();
            let a = expand_eq_binomial(&mut ring, &[1], s1, free, &[6]).unwrap();
            let b = expand_eq_binomial(&mut ring, &[1], s2, free, &[6]).unwrap();
            let rhs = MultiSeries::mul(&mut ring, &a, &b).unwrap();
            assert_eq!(lhs, rhs, "s1={} s2={}", s1, s2);
        }
    }

    #[test]
    fn int_binomial_expansions() {
        // (1 - t)^{-2} has coefficients k+1
        let s = expand_int_binomial(&[1], 2, &[5]).unwrap();
        let ring = IntRing;
        for k in 0..=5u32 {
            assert_eq!(s.coeff(&ring, &[k]), k as i64 + 1);
        }
        // (1 - t)^{2} = 1 - 2t + t^2
        let n = expand_int_binomial(&[1], -2, &[5]).unwrap();
        assert_eq!(n.coeff(&ring, &[0]), 1);
        assert_eq!(n.coeff(&ring, &[1]), -2);
        assert_eq!(n.coeff(&ring, &[2]), 1);
        assert_eq!(n.coeff(&ring, &[3]), 0);
    }

    #[test]
    fn rho_of_sigma_expansion_is_constant_geometric() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let sigma = class_by(&ctx, 2, false);
        let s = expand_eq_binomial(&mut ring, &[1], 1, sigma, &[6]).unwrap();
        let full = ctx.full_subgroup_class();
        for k in 0..=6u32 {
            let r = rho(&ctx, &s.coeff(&ring, &[k]));
            assert_eq!(r, crate::burnside::BurnsideElement::from_class(full), "degree {}", k);
        }
    }

    #[test]
    fn map_coefficients_commutes_with_mul() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let mut qring = BurnsideQRing::new(&ctx);
        let sigma = class_by(&ctx, 2, false);
        let free = class_by(&ctx, 1, true);
        let a = expand_eq_binomial(&mut ring, &[1], 1, sigma, &[5]).unwrap();
        let b = expand_eq_binomial(&mut ring, &[2], -1, free, &[5]).unwrap();
        let ab = MultiSeries::mul(&mut ring, &a, &b).unwrap();
        let to_q = |e: &EqElement| BurnsideQElement::from_integer(&rho(&ctx, e));
        let lhs = ab.map_coefficients(&qring, to_q);
        let ra = a.map_coefficients(&qring, to_q);
        let rb = b.map_coefficients(&qring, to_q);
        let rhs = MultiSeries::mul(&mut qring, &ra, &rb).unwrap();
        assert_eq!(lhs, rhs);
        // and through rhohat into the integers
        let mut iring = IntRing;
        let lhs_z = ab.map_coefficients(&iring, |e| rhohat(&ctx, e));
        let rhs_z = MultiSeries::mul(
            &mut iring,
            &a.map_coefficients(&IntRing, |e| rhohat(&ctx, e)),
            &b.map_coefficients(&IntRing, |e| rhohat(&ctx, e)),
        )
        .unwrap();
        assert_eq!(lhs_z, rhs_z);
    }
}
