//! Parsers for the canonical text renderings, so text output can be
//! read back without the JSON mirror.

use anyhow::{anyhow, bail, Result};
use num_rational::Ratio;

use eqzeta_core::burnside::{EqClassId, EqElement};
use eqzeta_core::group::GroupContext;
use eqzeta_core::invariants::{FactoredZeta, ZetaFactor, ZetaVariant};
use eqzeta_core::series::{BinomialFactor, FactoredSeries, MultiDegree};

use crate::io::parse_rational;

/// Subgroup class from its canonical name `e`, `G` or `H<k>`.
pub fn parse_subgroup_name(ctx: &GroupContext, name: &str) -> Result<usize> {
    for class in 0..ctx.classes().len() {
        if ctx.subgroup_class_name(class) == name {
            return Ok(class);
        }
    }
    bail!("unknown subgroup class name {:?}", name)
}

/// Equipped class from a token like `[G/H1]_{a2}`.
pub fn parse_class_token(ctx: &GroupContext, token: &str) -> Result<EqClassId> {
    let token = token.trim();
    let inner = token
        .strip_prefix("[G/")
        .ok_or_else(|| anyhow!("class token must start with [G/: {:?}", token))?;
    let (name, rest) = inner
        .split_once(']')
        .ok_or_else(|| anyhow!("unterminated class token {:?}", token))?;
    let char_index = if rest.is_empty() {
        0usize
    } else {
        let suffix = rest
            .strip_prefix("_{")
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| anyhow!("bad character suffix in {:?}", token))?;
        let j = suffix
            .strip_prefix('a')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| anyhow!("bad character name {:?}", suffix))?;
        j
    };
    let class = parse_subgroup_name(ctx, name)?;
    for id in 0..ctx.eq_class_count() as u32 {
        if ctx.eq_class_char_index(id) == (class, char_index) {
            return Ok(EqClassId(id));
        }
    }
    bail!(
        "{:?} does not name a canonical class (the character may be a conjugate of a canonical one)",
        token
    )
}

/// Burnside class from a token like `[G/e]`.
pub fn parse_burnside_token(ctx: &GroupContext, token: &str) -> Result<usize> {
    let token = token.trim();
    let inner = token
        .strip_prefix("[G/")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| anyhow!("bad subgroup class token {:?}", token))?;
    parse_subgroup_name(ctx, inner)
}

/// Split a sum into signed chunks at top-level `+` and `-` (never
/// inside brackets or braces).
fn signed_chunks(s: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '[' | '{' | '(' => {
                depth += 1;
                cur.push(c);
            }
            ']' | '}' | ')' => {
                depth -= 1;
                cur.push(c);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() && out.is_empty() && c == '-' {
                    sign = -1;
                } else if cur.trim().is_empty() {
                    bail!("dangling sign in {:?}", s);
                } else {
                    out.push((sign, cur.trim().to_string()));
                    cur.clear();
                    sign = if c == '-' { -1 } else { 1 };
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    Ok(out)
}

/// Parse the canonical element rendering, e.g. `1 + 2*[G/e] - [G/G]_{a1}`.
pub fn parse_eq_element(ctx: &GroupContext, s: &str) -> Result<EqElement> {
    let s = s.trim();
    if s == "0" {
        return Ok(EqElement::zero());
    }
    let mut out = EqElement::zero();
    for (sign, chunk) in signed_chunks(s)? {
        let (count, class_text) = match chunk.split_once('*') {
            Some((n, rest)) => (
                n.trim()
                    .parse::<i64>()
                    .map_err(|_| anyhow!("bad coefficient {:?}", n))?,
                Some(rest.trim().to_string()),
            ),
            None => {
                if chunk.starts_with('[') {
                    (1, Some(chunk.clone()))
                } else {
                    (
                        chunk
                            .trim()
                            .parse::<i64>()
                            .map_err(|_| anyhow!("bad term {:?}", chunk))?,
                        None,
                    )
                }
            }
        };
        let cls = match class_text {
            Some(t) => parse_class_token(ctx, &t)?,
            None => EqClassId(ctx.unit_class()),
        };
        out.add_class(cls, sign * count);
    }
    Ok(out)
}

/// Parse a monomial like `t1^2*t3` into an exponent vector.
pub fn parse_monomial(s: &str, arity: usize) -> Result<MultiDegree> {
    let mut deg = vec![0u32; arity];
    let s = s.trim();
    if s == "1" {
        return Ok(deg);
    }
    for part in s.split('*') {
        let part = part.trim();
        let body = part
            .strip_prefix('t')
            .ok_or_else(|| anyhow!("bad monomial part {:?}", part))?;
        let (var, exp) = match body.split_once('^') {
            Some((v, e)) => (v, e.parse::<u32>().map_err(|_| anyhow!("bad exponent {:?}", e))?),
            None => (body, 1),
        };
        let idx: usize = var.parse().map_err(|_| anyhow!("bad variable {:?}", part))?;
        if idx == 0 || idx > arity {
            bail!("variable t{} out of range for arity {}", idx, arity);
        }
        deg[idx - 1] += exp;
    }
    Ok(deg)
}

/// Split a factored product into `(1 - BODY)^{EXP}` pieces.
fn factor_pieces(s: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for piece in s.split(" * ") {
        let piece = piece.trim();
        let rest = piece
            .strip_prefix("(1 - ")
            .ok_or_else(|| anyhow!("factor must start with (1 - : {:?}", piece))?;
        let close = rest
            .find(")^{")
            .ok_or_else(|| anyhow!("factor must contain )^{{ : {:?}", piece))?;
        let body = &rest[..close];
        let exp = rest[close + 3..]
            .strip_suffix('}')
            .ok_or_else(|| anyhow!("unterminated exponent in {:?}", piece))?;
        out.push((body.to_string(), exp.to_string()));
    }
    Ok(out)
}

/// Exponent body `-2[G/H1]_{a1}`: sign, absolute multiplicity, token.
fn split_exponent(exp: &str) -> Result<(bool, String, String)> {
    let exp = exp.trim();
    let (neg, rest) = match exp.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, exp),
    };
    let bracket = rest
        .find('[')
        .ok_or_else(|| anyhow!("exponent without class token {:?}", exp))?;
    let mult = rest[..bracket].trim();
    let token = rest[bracket..].to_string();
    let mult = if mult.is_empty() { "1".to_string() } else { mult.to_string() };
    Ok((neg, mult, token))
}

/// Parse the canonical factored series rendering.
pub fn parse_factored_series(ctx: &GroupContext, s: &str, arity: usize) -> Result<FactoredSeries> {
    let s = s.trim();
    if s == "1" {
        return Ok(FactoredSeries::empty(arity));
    }
    let mut factors = Vec::new();
    for (body, exp) in factor_pieces(s)? {
        let w = parse_monomial(&body, arity)?;
        let (neg, mult, token) = split_exponent(&exp)?;
        let m: i64 = mult.parse().map_err(|_| anyhow!("bad multiplicity {:?}", mult))?;
        let s_value = if neg { m } else { -m };
        factors.push(BinomialFactor { w, s: s_value, cls: parse_class_token(ctx, &token)? });
    }
    FactoredSeries::new(arity, factors).map_err(|e| anyhow!("{}", e))
}

/// Parse a power of `t`: `t`, `t^3` or `t^{3/2}`.
fn parse_t_power(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let body = s
        .strip_prefix('t')
        .ok_or_else(|| anyhow!("bad power of t: {:?}", s))?;
    if body.is_empty() {
        return Ok(Ratio::new(1, 1));
    }
    let exp = body
        .strip_prefix('^')
        .ok_or_else(|| anyhow!("bad power of t: {:?}", s))?;
    let exp = exp.strip_prefix('{').and_then(|e| e.strip_suffix('}')).unwrap_or(exp);
    parse_rational(exp)
}

/// Parse the canonical factored zeta rendering.
pub fn parse_zeta(ctx: &GroupContext, s: &str, variant: ZetaVariant) -> Result<FactoredZeta> {
    let s = s.trim();
    if s == "1" {
        return Ok(FactoredZeta::empty(variant));
    }
    let mut factors = Vec::new();
    for (body, exp) in factor_pieces(s)? {
        let n = parse_t_power(&body)?;
        let (neg, mult, token) = split_exponent(&exp)?;
        let m = parse_rational(&mult)?;
        let q = if neg { m } else { -m };
        factors.push(ZetaFactor { n, q, base: parse_burnside_token(ctx, &token)? });
    }
    Ok(FactoredZeta::new(variant, factors))
}
