//! The equivariant Poincare series of a resolution in factored form,
//! the two equivariant monodromy zeta functions, and the recovery of
//! the zeta functions from a factored Poincare series.
//!
//! Zeta functions are kept in factored form only: a canonical multiset
//! of binomials `(1 - t^n)^{-q [G/K]}` with exact rational `q`.
//! Expanding a rational-multiplicity binomial would need formal
//! exponentials, which nothing here requires.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::burnside::{eps, rhohat, CharRing, CharRingElement, EqClassId, EqRing};
use crate::group::GroupContext;
use crate::resolution::{
    multiplicity_matrix, n_value, omega_vector, validate, Resolution, ResolutionError,
};
use crate::series::{
    degree_is_zero, degree_total, BinomialFactor, FactoredSeries, IntRing, MultiSeries,
    NonEquivFactored, SeriesError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantError {
    Resolution(ResolutionError),
    Series(SeriesError),
    InvalidResolution { failures: Vec<String> },
    ZeroDegreeStratum { stratum: String },
    NonIntegralExponent { stratum: String, value: Ratio<i64> },
    NotDivisible { factor: usize, total: u64, divisor: u64 },
    AmbiguousMinimalFactor { base: String, degrees: Vec<Vec<u32>> },
    ExceptionalFactorNotReduced { base: String, s: i64 },
    NoSecondCharacter { base: String },
}

impl core::error::Error for InvariantError {}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantError::Resolution(e) => write!(f, "{}", e),
            InvariantError::Series(e) => write!(f, "{}", e),
            InvariantError::InvalidResolution { failures } => {
                write!(f, "resolution data is inconsistent: {}", failures.join("; "))
            }
            InvariantError::ZeroDegreeStratum { stratum } => write!(
                f,
                "stratum {} has zero degree vector but nonzero Euler characteristic",
                stratum
            ),
            InvariantError::NonIntegralExponent { stratum, value } => write!(
                f,
                "stratum {} yields the non-integral exponent {} in the integral zeta variant",
                stratum, value
            ),
            InvariantError::NotDivisible { factor, total, divisor } => write!(
                f,
                "factor {}: total degree {} is not divisible by {}",
                factor, total, divisor
            ),
            InvariantError::AmbiguousMinimalFactor { base, degrees } => write!(
                f,
                "base {}: two incomparable minimal exponents of equal total degree {:?}",
                base, degrees
            ),
            InvariantError::ExceptionalFactorNotReduced { base, s } => write!(
                f,
                "base {}: selected exceptional factor has multiplicity {} instead of 1",
                base, s
            ),
            InvariantError::NoSecondCharacter { base } => write!(
                f,
                "base {}: no second character with positive multiplicity exists and the base is a proper subgroup",
                base
            ),
        }
    }
}

impl From<ResolutionError> for InvariantError {
    fn from(e: ResolutionError) -> Self {
        InvariantError::Resolution(e)
    }
}

impl From<SeriesError> for InvariantError {
    fn from(e: SeriesError) -> Self {
        InvariantError::Series(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaVariant {
    Zeta,
    ZetaTilde,
}

/// One binomial `(1 - t^n)^{-q [G/K]}` of a factored zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFactor {
    /// Power of `t`; exact rational, validated positive (and integral
    /// for the integral variant).
    pub n: Ratio<i64>,
    /// Multiplicity; exact rational, nonzero.
    pub q: Ratio<i64>,
    /// Subgroup conjugacy class of the base `[G/K]`.
    pub base: usize,
}

/// A zeta function in canonical factored form: factors sorted by
/// (exponent, base), merged, with zero multiplicities dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredZeta {
    pub variant: ZetaVariant,
    factors: Vec<ZetaFactor>,
}

impl FactoredZeta {
    pub fn new(variant: ZetaVariant, factors: Vec<ZetaFactor>) -> Self {
        let mut merged: BTreeMap<(Ratio<i64>, usize), Ratio<i64>> = BTreeMap::new();
        for f in factors {
            *merged.entry((f.n, f.base)).or_insert_with(Ratio::zero) += f.q;
        }
        let factors = merged
            .into_iter()
            .filter(|(_, q)| !q.is_zero())
            .map(|((n, base), q)| ZetaFactor { n, q, base })
            .collect();
        FactoredZeta { variant, factors }
    }

    pub fn empty(variant: ZetaVariant) -> Self {
        FactoredZeta { variant, factors: Vec::new() }
    }

    pub fn factors(&self) -> &[ZetaFactor] {
        &self.factors
    }
}

/// The factored Poincare series of a resolution together with its
/// expansion to a bound.
///
/// Each stratum with nonzero Euler characteristic contributes the
/// binomial with its degree vector, its characteristic as multiplicity,
/// and the class of its isotropy pair.
pub fn poincare_series(
    ctx: &GroupContext,
    ring: &mut EqRing<'_>,
    res: &Resolution,
    bound: &[u32],
) -> Result<(FactoredSeries, MultiSeries<crate::burnside::EqElement>), InvariantError> {
    let report = validate(ctx, res);
    if !report.is_ok() {
        return Err(InvariantError::InvalidResolution { failures: report.failures });
    }
    let m = multiplicity_matrix(&res.graph)?;
    let mut factors = Vec::new();
    for st in &res.strata {
        if st.chi == 0 {
            continue;
        }
        let w = omega_vector(ctx, res, &m, st);
        if degree_is_zero(&w) {
            return Err(InvariantError::ZeroDegreeStratum { stratum: st.id.clone() });
        }
        let cls = ctx
            .eq_class_of(&st.isotropy, st.character.values())
            .expect("validated stratum pairs are interned");
        factors.push(BinomialFactor { w, s: st.chi, cls: EqClassId(cls) });
    }
    let factored = FactoredSeries::new(res.arity(), factors)?;
    let expansion = factored.expand(ring, bound)?;
    Ok((factored, expansion))
}

/// The two zeta functions of a resolution, in canonical factored form.
///
/// Per stratum with characteristic `chi`, isotropy `H`, slice isotropy
/// `K` and total multiplicity `n`: the rational variant contributes
/// `(1 - t^n)^{-(|K| chi / |H|) [G/K]}` and the integral variant
/// `(1 - t^{n |K| / |H|})^{-chi [G/K]}`, whose exponent must come out
/// integral.
pub fn zeta_functions(
    ctx: &GroupContext,
    res: &Resolution,
) -> Result<(FactoredZeta, FactoredZeta), InvariantError> {
    let report = validate(ctx, res);
    if !report.is_ok() {
        return Err(InvariantError::InvalidResolution { failures: report.failures });
    }
    let m = multiplicity_matrix(&res.graph)?;
    let mut zeta = Vec::new();
    let mut tilde = Vec::new();
    for st in &res.strata {
        if st.chi == 0 {
            continue;
        }
        let n = n_value(res, &m, st);
        let h_ord = st.isotropy.order() as i64;
        let k_ord = st.slice_isotropy.order() as i64;
        let slice_idx = ctx
            .subgroup_index(&st.slice_isotropy)
            .expect("validated slice isotropy is interned");
        let base = ctx.class_of_subgroup(slice_idx);
        zeta.push(ZetaFactor {
            n: Ratio::new(n, 1),
            q: Ratio::new(k_ord * st.chi, h_ord),
            base,
        });
        let tilde_exp = Ratio::new(n * k_ord, h_ord);
        if !tilde_exp.is_integer() {
            return Err(InvariantError::NonIntegralExponent {
                stratum: st.id.clone(),
                value: tilde_exp,
            });
        }
        tilde.push(ZetaFactor { n: tilde_exp, q: Ratio::new(st.chi, 1), base });
    }
    Ok((
        FactoredZeta::new(ZetaVariant::Zeta, zeta),
        FactoredZeta::new(ZetaVariant::ZetaTilde, tilde),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoverMode {
    Free,
    General,
}

/// Result of a zeta recovery, with the selections made and any
/// warnings that the caller must surface.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub zeta: FactoredZeta,
    pub zeta_tilde: FactoredZeta,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

/// Free-action rule for one factor `(1 - t^w)^{-s [G/H]_alpha}`:
/// the rational variant gets `(1 - t^{|w|/|G|})^{-(s/|H|) [G/e]}`, the
/// integral variant `(1 - t^{|w|/(|G||H|)})^{-s [G/e]}`. Divisibility
/// failures are hard errors.
fn free_rule(
    ctx: &GroupContext,
    index: usize,
    f: &BinomialFactor,
    zeta: &mut Vec<ZetaFactor>,
    tilde: &mut Vec<ZetaFactor>,
) -> Result<(), InvariantError> {
    let g_ord = ctx.order() as u64;
    let total = degree_total(&f.w);
    if total % g_ord != 0 {
        return Err(InvariantError::NotDivisible { factor: index, total, divisor: g_ord });
    }
    let (class, _) = ctx.eq_class_data(f.cls.0);
    let h_ord = ctx.class_representative(class).order() as u64;
    let trivial = ctx.trivial_subgroup_class();
    zeta.push(ZetaFactor {
        n: Ratio::new((total / g_ord) as i64, 1),
        q: Ratio::new(f.s, h_ord as i64),
        base: trivial,
    });
    if total % (g_ord * h_ord) != 0 {
        return Err(InvariantError::NotDivisible {
            factor: index,
            total,
            divisor: g_ord * h_ord,
        });
    }
    tilde.push(ZetaFactor {
        n: Ratio::new((total / (g_ord * h_ord)) as i64, 1),
        q: Ratio::new(f.s, 1),
        base: trivial,
    });
    Ok(())
}

/// Minimal factor by (total degree, lexicographic exponent) among the
/// given candidates; errors if two distinct exponents tie on the
/// minimal total degree (the underlying order is only partial).
fn select_minimal<'f>(
    base_name: &str,
    candidates: &[(usize, &'f BinomialFactor)],
) -> Result<(usize, &'f BinomialFactor), InvariantError> {
    let min_total = candidates
        .iter()
        .map(|(_, f)| degree_total(&f.w))
        .min()
        .expect("nonempty candidate list");
    let mut degrees: Vec<Vec<u32>> = candidates
        .iter()
        .filter(|(_, f)| degree_total(&f.w) == min_total)
        .map(|(_, f)| f.w.clone())
        .collect();
    degrees.sort();
    degrees.dedup();
    if degrees.len() > 1 {
        return Err(InvariantError::AmbiguousMinimalFactor {
            base: String::from(base_name),
            degrees,
        });
    }
    let best = candidates
        .iter()
        .filter(|(_, f)| f.w == degrees[0])
        .min_by_key(|(_, f)| f.cls)
        .expect("nonempty");
    Ok((best.0, best.1))
}

/// Recover the two zeta functions from a factored Poincare series.
///
/// In free mode every factor follows the free-action rule. In general
/// mode, for every proper nontrivial subgroup class appearing as a
/// factor base, the two minimal positive factors with distinct
/// characters are treated as the exceptional pair and substituted with
/// the roles of their characters exchanged; everything else follows the
/// free rule. When a full-group base has no second character the action
/// is taken to be scalar and the whole series falls back to the free
/// rule, with a warning: the series alone cannot certify the
/// hypothesis, and distinct actions may share the same series.
pub fn recover_zeta(
    ctx: &GroupContext,
    p: &FactoredSeries,
    mode: RecoverMode,
) -> Result<Recovery, InvariantError> {
    let mut warnings = Vec::new();
    let mut notes = Vec::new();
    let factors = p.factors();
    let free_all = |warnings: &mut Vec<String>, notes: &mut Vec<String>| -> Result<Recovery, InvariantError> {
        let mut zeta = Vec::new();
        let mut tilde = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            free_rule(ctx, i, f, &mut zeta, &mut tilde)?;
        }
        Ok(Recovery {
            zeta: FactoredZeta::new(ZetaVariant::Zeta, zeta),
            zeta_tilde: FactoredZeta::new(ZetaVariant::ZetaTilde, tilde),
            warnings: core::mem::take(warnings),
            notes: core::mem::take(notes),
        })
    };

    if matches!(mode, RecoverMode::Free) {
        return free_all(&mut warnings, &mut notes);
    }

    // general mode: group the factors by the subgroup class of the base
    let trivial_class = ctx.trivial_subgroup_class();
    let full_class = ctx.full_subgroup_class();
    let mut by_base: BTreeMap<usize, Vec<(usize, &BinomialFactor)>> = BTreeMap::new();
    for (i, f) in factors.iter().enumerate() {
        let (class, _) = ctx.eq_class_data(f.cls.0);
        by_base.entry(class).or_default().push((i, f));
    }

    let mut exceptional: BTreeMap<usize, (Ratio<i64>, usize)> = BTreeMap::new();
    for (&base, members) in &by_base {
        if base == trivial_class {
            continue;
        }
        let base_name = format!("[G/{}]", base);
        let positive: Vec<(usize, &BinomialFactor)> = members
            .iter()
            .copied()
            .filter(|(_, f)| f.s > 0)
            .collect();
        if positive.is_empty() {
            warnings.push(format!(
                "base {}: no factor with positive multiplicity; treated by the free-action rule",
                base_name
            ));
            continue;
        }
        let (i1, f1) = select_minimal(&base_name, &positive)?;
        if f1.s != 1 {
            return Err(InvariantError::ExceptionalFactorNotReduced { base: base_name, s: f1.s });
        }
        let (_, alpha) = ctx.eq_class_data(f1.cls.0);
        let alpha = alpha.clone();
        let second: Vec<(usize, &BinomialFactor)> = positive
            .iter()
            .copied()
            .filter(|(i, f)| {
                let (_, ch) = ctx.eq_class_data(f.cls.0);
                *i != i1 && ch.values() != alpha.values()
            })
            .collect();
        if second.is_empty() {
            if base == full_class {
                warnings.push(String::from(
                    "single full-group character: the action is taken to be scalar and every \
                     factor follows the free-action rule; the series alone cannot verify this, \
                     and distinct actions can share the same series",
                ));
                return free_all(&mut warnings, &mut notes);
            }
            return Err(InvariantError::NoSecondCharacter { base: base_name });
        }
        let (i2, f2) = select_minimal(&base_name, &second)?;
        if f2.s != 1 {
            return Err(InvariantError::ExceptionalFactorNotReduced { base: base_name, s: f2.s });
        }
        let (_, beta) = ctx.eq_class_data(f2.cls.0);
        let beta = beta.clone();
        notes.push(format!(
            "base {}: exceptional pair selected at exponents {:?} and {:?}",
            base_name, f1.w, f2.w
        ));
        // kernels inside the base subgroup
        let ker_alpha = alpha.kernel();
        let ker_beta = beta.kernel();
        let ka_idx = ctx.subgroup_index(&ker_alpha).expect("kernel is interned");
        let kb_idx = ctx.subgroup_index(&ker_beta).expect("kernel is interned");
        let ka_class = ctx.class_of_subgroup(ka_idx);
        let kb_class = ctx.class_of_subgroup(kb_idx);
        exceptional.insert(i1, (Ratio::new(ker_beta.order() as i64, 1), kb_class));
        exceptional.insert(i2, (Ratio::new(ker_alpha.order() as i64, 1), ka_class));
    }

    let g_ord = ctx.order() as i64;
    let mut zeta = Vec::new();
    let mut tilde = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        match exceptional.get(&i) {
            None => free_rule(ctx, i, f, &mut zeta, &mut tilde)?,
            Some(&(ker_ord, ker_class)) => {
                let (class, _) = ctx.eq_class_data(f.cls.0);
                let k_ord = ctx.class_representative(class).order() as i64;
                let total = Ratio::new(degree_total(&f.w) as i64, 1);
                let n1 = total / Ratio::new(g_ord, 1);
                if !n1.is_integer() {
                    return Err(InvariantError::NotDivisible {
                        factor: i,
                        total: degree_total(&f.w),
                        divisor: g_ord as u64,
                    });
                }
                zeta.push(ZetaFactor { n: n1, q: ker_ord / Ratio::new(k_ord, 1), base: ker_class });
                let n2 = total * ker_ord / Ratio::new(g_ord * k_ord, 1);
                if !n2.is_integer() {
                    return Err(InvariantError::NonIntegralExponent {
                        stratum: format!("factor {}", i),
                        value: n2,
                    });
                }
                tilde.push(ZetaFactor { n: n2, q: Ratio::new(1, 1), base: ker_class });
            }
        }
    }
    Ok(Recovery {
        zeta: FactoredZeta::new(ZetaVariant::Zeta, zeta),
        zeta_tilde: FactoredZeta::new(ZetaVariant::ZetaTilde, tilde),
        warnings,
        notes,
    })
}

/// Outcome of the reduction consistency check, with both expanded
/// sides for reporting.
#[derive(Clone, Debug)]
pub struct RhohatCheck {
    pub equal: bool,
    pub reduced: MultiSeries<i64>,
    pub substituted: MultiSeries<i64>,
}

/// Check that forgetting characters and action in the expanded factored
/// series agrees with the independently given plain series after
/// identifying its variables in consecutive blocks of size `|G|`.
pub fn rhohat_check(
    ctx: &GroupContext,
    ring: &mut EqRing<'_>,
    p: &FactoredSeries,
    plain: &NonEquivFactored,
    bound: &[u32],
) -> Result<RhohatCheck, InvariantError> {
    if bound.len() != p.arity() {
        return Err(InvariantError::Series(SeriesError::ArityMismatch {
            left: p.arity(),
            right: bound.len(),
        }));
    }
    let g_ord = ctx.order();
    if plain.arity != p.arity() * g_ord {
        return Err(InvariantError::Series(SeriesError::ArityMismatch {
            left: p.arity() * g_ord,
            right: plain.arity,
        }));
    }
    let expanded = p.expand(ring, bound)?;
    let reduced = expanded.map_coefficients(&IntRing, |e| rhohat(ctx, e));
    // expand the plain side far enough that nothing inside the target
    // box is lost: every source variable in block i is bounded by
    // bound[i]
    let source_bound: Vec<u32> = (0..plain.arity).map(|j| bound[j / g_ord]).collect();
    let plain_expanded = plain.expand(&source_bound)?;
    let images: Vec<Vec<u32>> = (0..plain.arity)
        .map(|j| {
            let mut im = vec![0u32; p.arity()];
            im[j / g_ord] = 1;
            im
        })
        .collect();
    let substituted =
        MultiSeries::substitute(&IntRing, &plain_expanded, &images, bound.to_vec())?;
    Ok(RhohatCheck { equal: reduced == substituted, reduced, substituted })
}

/// Apply the fixed-point reduction to the expansion of a factored
/// series, producing a series over the character ring for external
/// comparison.
pub fn eps_reduction(
    ctx: &GroupContext,
    ring: &mut EqRing<'_>,
    p: &FactoredSeries,
    bound: &[u32],
) -> Result<MultiSeries<CharRingElement>, InvariantError> {
    let expanded = p.expand(ring, bound)?;
    let target = CharRing::new(ctx);
    Ok(expanded.map_coefficients(&target, |e| eps(ctx, e)))
}
