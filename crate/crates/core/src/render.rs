//! Canonical text renderings and the legend that decodes them.
//!
//! Subgroup conjugacy classes are named by their position in the
//! deterministic enumeration: `e` for the trivial class, `G` for the
//! full group, `H<k>` otherwise. Characters are named by their position
//! in the sorted character list of the class representative: the
//! trivial character has no suffix, the j-th nontrivial one is `a<j>`.
//! A class token is then `[G/H2]_{a1}`. Reports should always carry the
//! legend so the tokens stay decodable.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::Signed;

use crate::burnside::{BurnsideElement, BurnsideQElement, CharRingElement, EqElement};
use crate::group::GroupContext;
use crate::invariants::{FactoredZeta, ZetaVariant};
use crate::qz::QZ;
use crate::series::{FactoredSeries, MultiSeries};

impl GroupContext {
    /// Name of a subgroup conjugacy class: `e`, `G`, or `H<index>`.
    pub fn subgroup_class_name(&self, class: usize) -> String {
        let rep = self.class_representative(class);
        if rep.order() == 1 {
            "e".to_string()
        } else if rep.order() == self.order() {
            "G".to_string()
        } else {
            format!("H{}", class)
        }
    }

    /// Name of the j-th character of a class representative: empty for
    /// the trivial character, `a<j>` otherwise.
    pub fn character_name(&self, char_index: usize) -> String {
        if char_index == 0 {
            String::new()
        } else {
            format!("a{}", char_index)
        }
    }

    /// Token of an equipped class, e.g. `[G/e]` or `[G/G]_{a1}`.
    pub fn eq_class_token(&self, id: u32) -> String {
        let (class, j) = self.eq_class_char_index(id);
        let base = self.subgroup_class_name(class);
        if j == 0 {
            format!("[G/{}]", base)
        } else {
            format!("[G/{}]_{{{}}}", base, self.character_name(j))
        }
    }

    /// Token of a plain Burnside class, e.g. `[G/H1]`.
    pub fn burnside_class_token(&self, class: usize) -> String {
        format!("[G/{}]", self.subgroup_class_name(class))
    }
}

fn push_signed_term(out: &mut String, first: bool, negative: bool, body: &str) {
    if first {
        if negative {
            out.push('-');
        }
    } else if negative {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    out.push_str(body);
}

/// Render an equipped ring element, unit term first, the remaining
/// classes in canonical order: `1 + 2*[G/e] - [G/G]_{a1}`.
pub fn eq_element(ctx: &GroupContext, e: &EqElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let unit = crate::burnside::EqClassId(ctx.unit_class());
    let mut parts: Vec<(Option<String>, i64)> = Vec::new();
    let u = e.coeff(unit);
    if u != 0 {
        parts.push((None, u));
    }
    for (cls, k) in e.terms() {
        if cls != unit {
            parts.push((Some(ctx.eq_class_token(cls.0)), k));
        }
    }
    let mut out = String::new();
    for (i, (token, k)) in parts.iter().enumerate() {
        let body = match token {
            None => format!("{}", k.abs()),
            Some(t) => {
                if k.abs() == 1 {
                    t.clone()
                } else {
                    format!("{}*{}", k.abs(), t)
                }
            }
        };
        push_signed_term(&mut out, i == 0, *k < 0, &body);
    }
    out
}

/// Render a Burnside ring element the same way.
pub fn burnside_element(ctx: &GroupContext, e: &BurnsideElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let unit_class = ctx.full_subgroup_class();
    let mut parts: Vec<(Option<String>, i64)> = Vec::new();
    let mut unit = 0;
    for (c, k) in e.terms() {
        if c == unit_class {
            unit = k;
        }
    }
    if unit != 0 {
        parts.push((None, unit));
    }
    for (c, k) in e.terms() {
        if c != unit_class {
            parts.push((Some(ctx.burnside_class_token(c)), k));
        }
    }
    let mut out = String::new();
    for (i, (token, k)) in parts.iter().enumerate() {
        let body = match token {
            None => format!("{}", k.abs()),
            Some(t) => {
                if k.abs() == 1 {
                    t.clone()
                } else {
                    format!("{}*{}", k.abs(), t)
                }
            }
        };
        push_signed_term(&mut out, i == 0, *k < 0, &body);
    }
    out
}

pub fn rational(q: &Ratio<i64>) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Render a rational Burnside element: `1 - 1/2*[G/e]`.
pub fn burnside_q_element(ctx: &GroupContext, e: &BurnsideQElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let unit_class = ctx.full_subgroup_class();
    let mut parts: Vec<(Option<String>, Ratio<i64>)> = Vec::new();
    for (c, q) in e.terms() {
        if c == unit_class {
            parts.push((None, q));
        }
    }
    for (c, q) in e.terms() {
        if c != unit_class {
            parts.push((Some(ctx.burnside_class_token(c)), q));
        }
    }
    let mut out = String::new();
    for (i, (token, q)) in parts.iter().enumerate() {
        let a = q.abs();
        let body = match token {
            None => rational(&a),
            Some(t) => {
                if a == Ratio::new(1, 1) {
                    t.clone()
                } else {
                    format!("{}*{}", rational(&a), t)
                }
            }
        };
        push_signed_term(&mut out, i == 0, q.is_negative(), &body);
    }
    out
}

/// Render a character ring element; basis characters of the full group
/// print as `1`, `a1`, `a2`, ...
pub fn char_ring_element(ctx: &GroupContext, e: &CharRingElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (idx, k) in e.terms() {
        let token = if idx == 0 { "1".to_string() } else { ctx.character_name(idx) };
        let body = if k.abs() == 1 && idx != 0 {
            token
        } else if idx == 0 {
            format!("{}", k.abs())
        } else {
            format!("{}*{}", k.abs(), token)
        };
        push_signed_term(&mut out, first, k < 0, &body);
        first = false;
    }
    out
}

/// Monomial in `t1..tr`: `t1^2*t3`, or `1` for the zero degree.
pub fn monomial(degree: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &v) in degree.iter().enumerate() {
        if v == 0 {
            continue;
        }
        if v == 1 {
            parts.push(format!("t{}", i + 1));
        } else {
            parts.push(format!("t{}^{}", i + 1, v));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Render a series as a sum of `(coefficient)*monomial` terms in graded
/// order. The coefficient renderer is passed in so one function serves
/// every ring.
pub fn series<E, F>(s: &MultiSeries<E>, coeff: F) -> String
where
    E: Clone + Eq + Ord + core::fmt::Debug,
    F: Fn(&E) -> String,
{
    if s.is_empty() {
        return "0".to_string();
    }
    let mut degrees: Vec<&Vec<u32>> = s.terms().map(|(d, _)| d).collect();
    degrees.sort_by(|a, b| crate::series::graded_cmp(a, b));
    let mut parts = Vec::new();
    for d in degrees {
        let c = s.terms().find(|(dd, _)| dd == &d).unwrap().1;
        let ctext = coeff(c);
        if crate::series::degree_is_zero(d) {
            parts.push(ctext);
        } else if ctext == "1" {
            parts.push(monomial(d));
        } else {
            parts.push(format!("({})*{}", ctext, monomial(d)));
        }
    }
    parts.join(" + ")
}

/// Render a series over the integers with plain coefficients.
pub fn int_series(s: &MultiSeries<i64>) -> String {
    series(s, |c| format!("{}", c))
}

/// Exponent body of a factored token: `-s[cls]` with the sign folded,
/// so multiplicity 1 prints as `-[cls]` and -2 prints as `2[cls]`.
fn folded_exponent(mult_abs: String, is_one: bool, negative_outside: bool, token: &str) -> String {
    let sign = if negative_outside { "-" } else { "" };
    if is_one {
        format!("{}{}", sign, token)
    } else {
        format!("{}{}{}", sign, mult_abs, token)
    }
}

/// Canonical text of a factored series:
/// `(1 - t1^2*t2^2)^{-[G/G]_{a1}} * ...`.
pub fn factored_series(ctx: &GroupContext, f: &FactoredSeries) -> String {
    if f.factors().is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for factor in f.factors() {
        let token = ctx.eq_class_token(factor.cls.0);
        let body = folded_exponent(
            format!("{}", factor.s.abs()),
            factor.s.abs() == 1,
            factor.s > 0,
            &token,
        );
        parts.push(format!("(1 - {})^{{{}}}", monomial(&factor.w), body));
    }
    parts.join(" * ")
}

/// Power of `t` in a zeta factor: `t`, `t^3`, or `t^{3/2}` when the
/// exponent is not integral.
fn t_power(n: &Ratio<i64>) -> String {
    if n.is_integer() {
        if *n.numer() == 1 {
            "t".to_string()
        } else {
            format!("t^{}", n.numer())
        }
    } else {
        format!("t^{{{}}}", rational(n))
    }
}

/// Canonical text of a factored zeta function:
/// `(1 - t^2)^{-1/2[G/e]} * ...`; the empty product prints as `1`.
pub fn factored_zeta(ctx: &GroupContext, z: &FactoredZeta) -> String {
    if z.factors().is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for factor in z.factors() {
        let token = ctx.burnside_class_token(factor.base);
        let a = factor.q.abs();
        let body = folded_exponent(
            rational(&a),
            a == Ratio::new(1, 1),
            factor.q.is_positive(),
            &token,
        );
        parts.push(format!("(1 - {})^{{{}}}", t_power(&factor.n), body));
    }
    parts.join(" * ")
}

pub fn zeta_variant_name(v: ZetaVariant) -> &'static str {
    match v {
        ZetaVariant::Zeta => "zeta",
        ZetaVariant::ZetaTilde => "zeta-tilde",
    }
}

/// One legend line per subgroup class and per character, so canonical
/// tokens can be decoded without recomputing the enumeration.
pub fn legend(ctx: &GroupContext) -> Vec<String> {
    let mut out = Vec::new();
    for (cid, class) in ctx.classes().iter().enumerate() {
        let rep = ctx.class_representative(cid);
        let elems: Vec<String> = rep
            .elems()
            .iter()
            .map(|&e| ctx.group().label(e))
            .collect();
        out.push(format!(
            "{} = subgroup {{{}}} ({} conjugate{})",
            ctx.subgroup_class_name(cid),
            elems.join(", "),
            class.members.len(),
            if class.members.len() == 1 { "" } else { "s" }
        ));
        let chars = ctx.characters(class.rep);
        for (j, ch) in chars.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let values: Vec<String> = rep
                .elems()
                .iter()
                .zip(ch.values())
                .map(|(&e, v)| format!("{} -> {}", ctx.group().label(e), v))
                .collect();
            out.push(format!(
                "  {}.{} : {}",
                ctx.subgroup_class_name(cid),
                ctx.character_name(j),
                values.join(", ")
            ));
        }
    }
    out
}

/// Character values as `elem -> value` pairs (used by the JSON mirror).
pub fn character_values(ch: &crate::group::Character) -> Vec<(u16, QZ)> {
    ch.domain()
        .elems()
        .iter()
        .zip(ch.values())
        .map(|(&e, &v)| (e, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{EqClassId, EqElement, EqRing};
    use crate::group::{FiniteGroup, GroupContext};
    use crate::series::{expand_eq_binomial, BinomialFactor};

    fn z2_ctx() -> GroupContext {
        GroupContext::new(FiniteGroup::cyclic(2))
    }

    fn sigma(ctx: &GroupContext) -> EqClassId {
        (0..ctx.eq_class_count() as u32)
            .map(EqClassId)
            .find(|&id| {
                let (class, ch) = ctx.eq_class_data(id.0);
                ctx.class_representative(class).order() == 2 && !ch.is_trivial()
            })
            .unwrap()
    }

    #[test]
    fn class_tokens() {
        let ctx = z2_ctx();
        assert_eq!(ctx.eq_class_token(ctx.unit_class()), "[G/G]");
        assert_eq!(ctx.eq_class_token(sigma(&ctx).0), "[G/G]_{a1}");
        let free = (0..ctx.eq_class_count() as u32)
            .find(|&id| {
                let (class, _) = ctx.eq_class_data(id);
                ctx.class_representative(class).order() == 1
            })
            .unwrap();
        assert_eq!(ctx.eq_class_token(free), "[G/e]");
    }

    #[test]
    fn element_rendering_puts_unit_first() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let free = (0..ctx.eq_class_count() as u32)
            .map(EqClassId)
            .find(|&id| {
                let (class, _) = ctx.eq_class_data(id.0);
                ctx.class_representative(class).order() == 1
            })
            .unwrap();
        let s2 = ring.class_sym_power(free, 2);
        assert_eq!(eq_element(&ctx, &s2), "1 + [G/e]");
        let mut e = EqElement::one(&ctx).scaled(-1);
        e.add_class(free, 2);
        assert_eq!(eq_element(&ctx, &e), "-1 + 2*[G/e]");
        assert_eq!(eq_element(&ctx, &EqElement::zero()), "0");
    }

    #[test]
    fn monomials() {
        assert_eq!(monomial(&[0, 0]), "1");
        assert_eq!(monomial(&[2, 0, 1]), "t1^2*t3");
        assert_eq!(monomial(&[1, 1, 1, 1, 1, 1]), "t1*t2*t3*t4*t5*t6");
    }

    #[test]
    fn factored_series_tokens() {
        let ctx = z2_ctx();
        let f = crate::series::FactoredSeries::new(
            2,
            alloc::vec![
                BinomialFactor { w: alloc::vec![2, 2], s: 1, cls: sigma(&ctx) },
                BinomialFactor { w: alloc::vec![1, 0], s: -2, cls: sigma(&ctx) },
            ],
        )
        .unwrap();
        assert_eq!(
            factored_series(&ctx, &f),
            "(1 - t1)^{2[G/G]_{a1}} * (1 - t1^2*t2^2)^{-[G/G]_{a1}}"
        );
        assert_eq!(factored_series(&ctx, &crate::series::FactoredSeries::empty(1)), "1");
    }

    #[test]
    fn series_rendering() {
        let ctx = z2_ctx();
        let mut ring = EqRing::new(&ctx);
        let s = expand_eq_binomial(&mut ring, &[1], 1, sigma(&ctx), &[2]).unwrap();
        assert_eq!(series(&s, |c| eq_element(&ctx, c)), "1 + ([G/G]_{a1})*t1 + t1^2");
    }

    #[test]
    fn legend_mentions_every_class() {
        let ctx = z2_ctx();
        let lines = legend(&ctx);
        assert!(lines.iter().any(|l| l.starts_with("e = ")));
        assert!(lines.iter().any(|l| l.starts_with("G = ")));
        assert!(lines.iter().any(|l| l.contains("G.a1")));
    }
}
