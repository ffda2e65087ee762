//! JSON schemas and their conversion to core types.
//!
//! Group file: either a multiplication table or permutation generators,
//! element 0 always the identity:
//!
//! ```json
//! {"order": 2, "table": [[0,1],[1,0]], "labels": ["e","s"]}
//! {"permutation_generators": [[1,0,2],[1,2,0]], "degree": 3}
//! ```
//!
//! Resolution file: dual graph with action, valuations and strata;
//! `group` is either an inline group object or a path relative to the
//! resolution file. Characters map element ids to rationals in [0,1).
//!
//! Series files carry a `ring` tag; coefficients are lists of
//! `{class, n}` terms decoded against the group's canonical tokens.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use eqzeta_core::burnside::{BurnsideQElement, CharRingElement, EqElement};
use eqzeta_core::group::{Character, FiniteGroup, GroupContext, Subgroup};
use eqzeta_core::invariants::{FactoredZeta, ZetaFactor, ZetaVariant};
use eqzeta_core::qz::QZ;
use eqzeta_core::resolution::{
    DualGraph, Resolution, Stratum, Valuation, ValuationKind,
};
use eqzeta_core::series::{
    BinomialFactor, FactoredSeries, MultiSeries, NonEquivFactored,
};

use crate::text;

/// Size limit for permutation-generator closure.
pub const MAX_GROUP_ORDER: usize = 1024;

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum GroupFile {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Permutations {
        permutation_generators: Vec<Vec<usize>>,
        degree: usize,
    },
}

pub fn group_from_file(file: &GroupFile) -> Result<FiniteGroup> {
    match file {
        GroupFile::Table { order, table, labels } => {
            if table.len() != *order {
                bail!("declared order {} does not match the table size {}", order, table.len());
            }
            FiniteGroup::from_table(table, labels.clone()).map_err(|e| anyhow!("{}", e))
        }
        GroupFile::Permutations { permutation_generators, degree } => {
            FiniteGroup::from_permutations(permutation_generators, *degree, MAX_GROUP_ORDER)
                .map_err(|e| anyhow!("{}", e))
        }
    }
}

pub fn load_group(path: &Path) -> Result<GroupContext> {
    let data = std::fs::read_to_string(path)
        .with_context(|| format!("reading group file {}", path.display()))?;
    let file: GroupFile = serde_json::from_str(&data)
        .with_context(|| format!("parsing group file {}", path.display()))?;
    Ok(GroupContext::new(group_from_file(&file)?))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupFile),
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ValuationFile {
    pub i: usize,
    pub kind: String,
    pub component: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StratumFile {
    pub id: serde_json::Value,
    pub component: u32,
    pub chi: i64,
    #[serde(rename = "H")]
    pub isotropy: Vec<u16>,
    pub alpha: BTreeMap<String, String>,
    #[serde(rename = "Hhat")]
    pub slice_isotropy: Vec<u16>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ResolutionFile {
    pub group: GroupRef,
    pub r: usize,
    pub vertices: Vec<u32>,
    /// Vertex permutation per group element id; identity rows may be
    /// omitted.
    #[serde(default)]
    pub action: BTreeMap<String, Vec<u32>>,
    pub self_int: BTreeMap<String, i64>,
    #[serde(default)]
    pub edges: Vec<(u32, u32)>,
    pub valuations: Vec<ValuationFile>,
    pub strata: Vec<StratumFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub smooth_euler: BTreeMap<String, i64>,
}

pub fn parse_rational(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().with_context(|| format!("bad rational {}", s))?;
        let d: i64 = den.trim().parse().with_context(|| format!("bad rational {}", s))?;
        if d == 0 {
            bail!("zero denominator in {}", s);
        }
        Ok(Ratio::new(n, d))
    } else {
        let n: i64 = s.parse().with_context(|| format!("bad rational {}", s))?;
        Ok(Ratio::new(n, 1))
    }
}

pub fn render_rational(q: &Ratio<i64>) -> String {
    eqzeta_core::render::rational(q)
}

/// Load a resolution file; the group may live in its own file next to
/// the resolution.
pub fn load_resolution(path: &Path) -> Result<(GroupContext, Resolution)> {
    let data = std::fs::read_to_string(path)
        .with_context(|| format!("reading resolution file {}", path.display()))?;
    let file: ResolutionFile = serde_json::from_str(&data)
        .with_context(|| format!("parsing resolution file {}", path.display()))?;
    let group = match &file.group {
        GroupRef::Inline(g) => group_from_file(g)?,
        GroupRef::Path(rel) => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            let gpath = base.join(rel);
            let gdata = std::fs::read_to_string(&gpath)
                .with_context(|| format!("reading group file {}", gpath.display()))?;
            let gfile: GroupFile = serde_json::from_str(&gdata)
                .with_context(|| format!("parsing group file {}", gpath.display()))?;
            group_from_file(&gfile)?
        }
    };
    let ctx = GroupContext::new(group);
    let res = resolution_from_file(&ctx, &file)?;
    Ok((ctx, res))
}

pub fn resolution_from_file(ctx: &GroupContext, file: &ResolutionFile) -> Result<Resolution> {
    let n = file.vertices.len();
    let mut sorted = file.vertices.clone();
    sorted.sort_unstable();
    if sorted != (0..n as u32).collect::<Vec<_>>() {
        bail!("vertices must be exactly 0..{}", n);
    }
    let mut action: Vec<Vec<u32>> = Vec::with_capacity(ctx.order());
    for a in 0..ctx.order() {
        match file.action.get(&a.to_string()) {
            Some(row) => {
                if row.len() != n {
                    bail!("action row for element {} has length {}, expected {}", a, row.len(), n);
                }
                action.push(row.clone());
            }
            None => action.push((0..n as u32).collect()),
        }
    }
    for key in file.action.keys() {
        let id: usize = key.parse().with_context(|| format!("bad action key {}", key))?;
        if id >= ctx.order() {
            bail!("action key {} is not a group element", key);
        }
    }
    let mut self_int = vec![0i64; n];
    for v in 0..n {
        let value = file
            .self_int
            .get(&v.to_string())
            .ok_or_else(|| anyhow!("missing self-intersection for vertex {}", v))?;
        self_int[v] = *value;
    }
    let graph = DualGraph::new(n, action, self_int, file.edges.iter().copied());

    if file.valuations.len() != file.r {
        bail!("r = {} but {} valuations are given", file.r, file.valuations.len());
    }
    let mut valuations = vec![None; file.r];
    for v in &file.valuations {
        if v.i == 0 || v.i > file.r {
            bail!("valuation index {} out of range 1..={}", v.i, file.r);
        }
        let kind = match v.kind.as_str() {
            "curve" => ValuationKind::Curve,
            "divisorial" => ValuationKind::Divisorial,
            other => bail!("unknown valuation kind {:?}", other),
        };
        if valuations[v.i - 1].is_some() {
            bail!("valuation index {} appears twice", v.i);
        }
        valuations[v.i - 1] = Some(Valuation { kind, component: v.component });
    }
    let valuations: Vec<Valuation> = valuations
        .into_iter()
        .map(|v| v.expect("all indices covered"))
        .collect();

    let mut strata = Vec::with_capacity(file.strata.len());
    for st in &file.strata {
        let isotropy = Subgroup::new_checked(ctx.group(), &st.isotropy)
            .map_err(|e| anyhow!("stratum {}: {}", st.id, e))?;
        let slice = Subgroup::new_checked(ctx.group(), &st.slice_isotropy)
            .map_err(|e| anyhow!("stratum {}: {}", st.id, e))?;
        let mut values = Vec::with_capacity(isotropy.order());
        for &e in isotropy.elems() {
            let raw = st
                .alpha
                .get(&e.to_string())
                .ok_or_else(|| anyhow!("stratum {}: alpha missing element {}", st.id, e))?;
            let q = parse_rational(raw)?;
            values.push(QZ::new(*q.numer(), *q.denom()));
        }
        for key in st.alpha.keys() {
            let e: u16 = key.parse().with_context(|| format!("bad alpha key {}", key))?;
            if !isotropy.contains(e) {
                bail!("stratum {}: alpha defined outside the isotropy at {}", st.id, e);
            }
        }
        let character = Character::new(isotropy.clone(), values);
        let id = match &st.id {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        strata.push(Stratum {
            id,
            component: st.component,
            chi: st.chi,
            isotropy,
            character,
            slice_isotropy: slice,
        });
    }
    let mut smooth_euler = Vec::new();
    for (k, &chi) in &file.smooth_euler {
        let v: u32 = k.parse().with_context(|| format!("bad smooth_euler key {}", k))?;
        smooth_euler.push((v, chi));
    }
    Ok(Resolution { graph, valuations, strata, smooth_euler })
}

/// Ring tags used in series files.
pub const RING_EQUIPPED: &str = "equipped";
pub const RING_BURNSIDE_Q: &str = "burnside_q";
pub const RING_CHAR: &str = "char_ring";
pub const RING_INT: &str = "int";

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CoeffTermFile {
    pub class: String,
    pub n: serde_json::Value,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SeriesTermFile {
    pub deg: Vec<u32>,
    pub coeff: serde_json::Value,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SeriesFile {
    pub arity: usize,
    pub bound: Vec<u32>,
    pub ring: String,
    pub terms: Vec<SeriesTermFile>,
}

fn coeff_terms(value: &serde_json::Value) -> Result<Vec<CoeffTermFile>> {
    serde_json::from_value(value.clone()).context("coefficient must be a list of {class, n} terms")
}

fn int_of(value: &serde_json::Value) -> Result<i64> {
    value
        .as_i64()
        .ok_or_else(|| anyhow!("expected an integer, found {}", value))
}

fn rational_of(value: &serde_json::Value) -> Result<Ratio<i64>> {
    match value {
        serde_json::Value::Number(n) => {
            Ok(Ratio::new(n.as_i64().ok_or_else(|| anyhow!("bad number {}", n))?, 1))
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => bail!("expected a rational, found {}", other),
    }
}

/// Decode a series file over the equipped ring.
pub fn eq_series_from_file(
    ctx: &GroupContext,
    file: &SeriesFile,
) -> Result<MultiSeries<EqElement>> {
    if file.ring != RING_EQUIPPED {
        bail!("expected ring {:?}, found {:?}", RING_EQUIPPED, file.ring);
    }
    let ring = eqzeta_core::burnside::EqRing::new(ctx);
    let mut out = MultiSeries::zero(file.arity, file.bound.clone());
    for term in &file.terms {
        let mut coeff = EqElement::zero();
        for t in coeff_terms(&term.coeff)? {
            let cls = text::parse_class_token(ctx, &t.class)?;
            coeff.add_class(cls, int_of(&t.n)?);
        }
        out.set(&ring, term.deg.clone(), coeff);
    }
    Ok(out)
}

pub fn eq_series_to_file(ctx: &GroupContext, s: &MultiSeries<EqElement>) -> SeriesFile {
    let terms = s
        .terms()
        .map(|(d, c)| SeriesTermFile {
            deg: d.clone(),
            coeff: serde_json::to_value(
                c.terms()
                    .map(|(cls, n)| CoeffTermFile {
                        class: ctx.eq_class_token(cls.0),
                        n: serde_json::Value::from(n),
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("serializable"),
        })
        .collect();
    SeriesFile {
        arity: s.arity(),
        bound: s.bound().to_vec(),
        ring: RING_EQUIPPED.into(),
        terms,
    }
}

pub fn burnside_q_series_to_file(
    ctx: &GroupContext,
    s: &MultiSeries<BurnsideQElement>,
) -> SeriesFile {
    let terms = s
        .terms()
        .map(|(d, c)| SeriesTermFile {
            deg: d.clone(),
            coeff: serde_json::to_value(
                c.terms()
                    .map(|(cls, q)| CoeffTermFile {
                        class: ctx.burnside_class_token(cls),
                        n: serde_json::Value::from(render_rational(&q)),
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("serializable"),
        })
        .collect();
    SeriesFile {
        arity: s.arity(),
        bound: s.bound().to_vec(),
        ring: RING_BURNSIDE_Q.into(),
        terms,
    }
}

pub fn burnside_q_series_from_file(
    ctx: &GroupContext,
    file: &SeriesFile,
) -> Result<MultiSeries<BurnsideQElement>> {
    if file.ring != RING_BURNSIDE_Q {
        bail!("expected ring {:?}, found {:?}", RING_BURNSIDE_Q, file.ring);
    }
    let ring = eqzeta_core::burnside::BurnsideQRing::new(ctx);
    let mut out = MultiSeries::zero(file.arity, file.bound.clone());
    for term in &file.terms {
        let mut coeff = BurnsideQElement::zero();
        for t in coeff_terms(&term.coeff)? {
            let class = text::parse_burnside_token(ctx, &t.class)?;
            coeff.add_class(class, rational_of(&t.n)?);
        }
        out.set(&ring, term.deg.clone(), coeff);
    }
    Ok(out)
}

pub fn char_series_to_file(ctx: &GroupContext, s: &MultiSeries<CharRingElement>) -> SeriesFile {
    let terms = s
        .terms()
        .map(|(d, c)| SeriesTermFile {
            deg: d.clone(),
            coeff: serde_json::to_value(
                c.terms()
                    .map(|(idx, n)| CoeffTermFile {
                        class: if idx == 0 { "1".into() } else { ctx.character_name(idx) },
                        n: serde_json::Value::from(n),
                    })
                    .collect::<Vec<_>>(),
            )
            .expect("serializable"),
        })
        .collect();
    SeriesFile {
        arity: s.arity(),
        bound: s.bound().to_vec(),
        ring: RING_CHAR.into(),
        terms,
    }
}

pub fn char_series_from_file(
    ctx: &GroupContext,
    file: &SeriesFile,
) -> Result<MultiSeries<CharRingElement>> {
    if file.ring != RING_CHAR {
        bail!("expected ring {:?}, found {:?}", RING_CHAR, file.ring);
    }
    let ring = eqzeta_core::burnside::CharRing::new(ctx);
    let full_rep = ctx.classes()[ctx.full_subgroup_class()].rep;
    let nchars = ctx.characters(full_rep).len();
    let mut out = MultiSeries::zero(file.arity, file.bound.clone());
    for term in &file.terms {
        let mut coeff = CharRingElement::zero();
        for t in coeff_terms(&term.coeff)? {
            let idx = if t.class == "1" {
                0
            } else {
                let j: usize = t
                    .class
                    .strip_prefix('a')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| anyhow!("bad character token {:?}", t.class))?;
                if j == 0 || j >= nchars {
                    bail!("character token {:?} out of range", t.class);
                }
                j
            };
            coeff.add_char(idx, int_of(&t.n)?);
        }
        out.set(&ring, term.deg.clone(), coeff);
    }
    Ok(out)
}

pub fn int_series_to_file(s: &MultiSeries<i64>) -> SeriesFile {
    let terms = s
        .terms()
        .map(|(d, c)| SeriesTermFile { deg: d.clone(), coeff: serde_json::Value::from(*c) })
        .collect();
    SeriesFile {
        arity: s.arity(),
        bound: s.bound().to_vec(),
        ring: RING_INT.into(),
        terms,
    }
}

pub fn int_series_from_file(file: &SeriesFile) -> Result<MultiSeries<i64>> {
    if file.ring != RING_INT {
        bail!("expected ring {:?}, found {:?}", RING_INT, file.ring);
    }
    let ring = eqzeta_core::series::IntRing;
    let mut out = MultiSeries::zero(file.arity, file.bound.clone());
    for term in &file.terms {
        out.set(&ring, term.deg.clone(), int_of(&term.coeff)?);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FactorFile {
    pub w: Vec<u32>,
    pub s: i64,
    pub class: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FactoredSeriesFile {
    pub arity: usize,
    pub factors: Vec<FactorFile>,
}

pub fn factored_series_to_file(ctx: &GroupContext, f: &FactoredSeries) -> FactoredSeriesFile {
    FactoredSeriesFile {
        arity: f.arity(),
        factors: f
            .factors()
            .iter()
            .map(|b| FactorFile { w: b.w.clone(), s: b.s, class: ctx.eq_class_token(b.cls.0) })
            .collect(),
    }
}

pub fn factored_series_from_file(
    ctx: &GroupContext,
    file: &FactoredSeriesFile,
) -> Result<FactoredSeries> {
    let mut factors = Vec::with_capacity(file.factors.len());
    for f in &file.factors {
        factors.push(BinomialFactor {
            w: f.w.clone(),
            s: f.s,
            cls: text::parse_class_token(ctx, &f.class)?,
        });
    }
    FactoredSeries::new(file.arity, factors).map_err(|e| anyhow!("{}", e))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NonEquivFactorFile {
    pub w: Vec<u32>,
    pub s: i64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NonEquivFile {
    pub arity: usize,
    pub factors: Vec<NonEquivFactorFile>,
}

pub fn nonequiv_from_file(file: &NonEquivFile) -> NonEquivFactored {
    NonEquivFactored {
        arity: file.arity,
        factors: file.factors.iter().map(|f| (f.w.clone(), f.s)).collect(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ZetaFactorFile {
    pub n: String,
    pub q: String,
    pub base: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ZetaFile {
    pub variant: String,
    pub factors: Vec<ZetaFactorFile>,
}

pub fn zeta_to_file(ctx: &GroupContext, z: &FactoredZeta) -> ZetaFile {
    ZetaFile {
        variant: eqzeta_core::render::zeta_variant_name(z.variant).into(),
        factors: z
            .factors()
            .iter()
            .map(|f| ZetaFactorFile {
                n: render_rational(&f.n),
                q: render_rational(&f.q),
                base: ctx.burnside_class_token(f.base),
            })
            .collect(),
    }
}

pub fn zeta_from_file(ctx: &GroupContext, file: &ZetaFile) -> Result<FactoredZeta> {
    let variant = match file.variant.as_str() {
        "zeta" => ZetaVariant::Zeta,
        "zeta-tilde" => ZetaVariant::ZetaTilde,
        other => bail!("unknown zeta variant {:?}", other),
    };
    let mut factors = Vec::with_capacity(file.factors.len());
    for f in &file.factors {
        factors.push(ZetaFactor {
            n: parse_rational(&f.n)?,
            q: parse_rational(&f.q)?,
            base: text::parse_burnside_token(ctx, &f.base)?,
        });
    }
    Ok(FactoredZeta::new(variant, factors))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let data = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&data).with_context(|| format!("parsing {}", path.display()))
}
