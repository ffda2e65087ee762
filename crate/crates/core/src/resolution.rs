//! Dual graphs of equivariant resolutions: the intersection matrix,
//! its negated inverse (the multiplicity matrix), valuation
//! attachments, strata records, and the degree data derived from them.
//!
//! Strata carry user-declared data (Euler characteristic, isotropy,
//! character, slice isotropy); validation checks the combinatorial
//! consistency of the declaration but cannot re-derive it from the
//! graph alone.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::group::{Character, Elem, GroupContext, Subgroup};
use crate::series::MultiDegree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolutionError {
    BadActionRow { elem: Elem, reason: String },
    SingularIntersectionMatrix,
    NonIntegralMultiplicity { row: usize, col: usize },
    NonPositiveDiagonal { vertex: usize },
    NegativeMultiplicity { row: usize, col: usize },
    AsymmetricMultiplicity,
    VertexOutOfRange { vertex: usize },
    MultiplicityOverflow,
    Invalid { failures: Vec<String> },
}

impl core::error::Error for ResolutionError {}

impl fmt::Display for ResolutionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolutionError::BadActionRow { elem, reason } => {
                write!(f, "graph action of element {} is invalid: {}", elem, reason)
            }
            ResolutionError::SingularIntersectionMatrix => {
                write!(f, "intersection matrix is singular")
            }
            ResolutionError::NonIntegralMultiplicity { row, col } => write!(
                f,
                "multiplicity entry ({}, {}) is not an integer; not a resolution graph",
                row, col
            ),
            ResolutionError::NonPositiveDiagonal { vertex } => write!(
                f,
                "multiplicity diagonal at vertex {} is not positive; not a resolution graph",
                vertex
            ),
            ResolutionError::NegativeMultiplicity { row, col } => write!(
                f,
                "multiplicity entry ({}, {}) is negative; not a resolution graph",
                row, col
            ),
            ResolutionError::AsymmetricMultiplicity => {
                write!(f, "multiplicity matrix is not symmetric")
            }
            ResolutionError::VertexOutOfRange { vertex } => {
                write!(f, "vertex {} does not exist", vertex)
            }
            ResolutionError::MultiplicityOverflow => {
                write!(f, "multiplicity entries exceed the machine integer range")
            }
            ResolutionError::Invalid { failures } => {
                write!(f, "validation failed: {}", failures.join("; "))
            }
        }
    }
}

/// The dual graph of an exceptional divisor with a group action.
///
/// Off-diagonal intersection numbers are 0 or 1 (normal crossings), so
/// the edge set determines them; self-intersections are the negative
/// diagonal.
#[derive(Clone, Debug)]
pub struct DualGraph {
    n: usize,
    /// `action[a][v]` is the image vertex of `v` under group element `a`.
    action: Vec<Vec<u32>>,
    self_int: Vec<i64>,
    edges: BTreeSet<(u32, u32)>,
}

impl DualGraph {
    pub fn new(
        n: usize,
        action: Vec<Vec<u32>>,
        self_int: Vec<i64>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        DualGraph { n, action, self_int, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn apply(&self, a: Elem, v: u32) -> u32 {
        self.action[a as usize][v as usize]
    }

    pub fn self_int(&self, v: u32) -> i64 {
        self.self_int[v as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    pub fn intersection(&self, a: u32, b: u32) -> i64 {
        if a == b {
            self.self_int(a)
        } else if self.has_edge(a, b) {
            1
        } else {
            0
        }
    }

    /// Orbits of the vertex action.
    pub fn vertex_orbits(&self, ctx: &GroupContext) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n as u32 {
            if seen[v as usize] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for a in 0..ctx.order() as Elem {
                orbit.insert(self.apply(a, v));
            }
            for &w in &orbit {
                seen[w as usize] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    fn check_action(&self, ctx: &GroupContext) -> Result<(), ResolutionError> {
        if self.action.len() != ctx.order() {
            return Err(ResolutionError::BadActionRow {
                elem: self.action.len() as Elem,
                reason: format!("expected {} rows", ctx.order()),
            });
        }
        for (a, row) in self.action.iter().enumerate() {
            if row.len() != self.n {
                return Err(ResolutionError::BadActionRow {
                    elem: a as Elem,
                    reason: format!("expected {} entries", self.n),
                });
            }
            let mut seen = vec![false; self.n];
            for &v in row {
                if v as usize >= self.n || seen[v as usize] {
                    return Err(ResolutionError::BadActionRow {
                        elem: a as Elem,
                        reason: "not a permutation of the vertices".to_string(),
                    });
                }
                seen[v as usize] = true;
            }
        }
        let g = ctx.group();
        for v in 0..self.n as u32 {
            if self.apply(0, v) != v {
                return Err(ResolutionError::BadActionRow {
                    elem: 0,
                    reason: "identity does not fix the vertices".to_string(),
                });
            }
        }
        for a in 0..ctx.order() as Elem {
            for b in 0..ctx.order() as Elem {
                let ab = g.mul(a, b);
                for v in 0..self.n as u32 {
                    if self.apply(ab, v) != self.apply(a, self.apply(b, v)) {
                        return Err(ResolutionError::BadActionRow {
                            elem: ab,
                            reason: format!("action law fails at vertex {}", v),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Minus the inverse of the intersection matrix; entries are the values
/// of the divisorial valuations on curvettes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl MultiplicityMatrix {
    pub fn get(&self, row: u32, col: u32) -> i64 {
        self.entries[row as usize * self.n + col as usize]
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

/// Exact inversion of the intersection matrix by fraction-free
/// Gauss-Jordan elimination over big integers; validates that minus
/// the inverse is integral, symmetric, nonnegative with positive
/// diagonal.
pub fn multiplicity_matrix(graph: &DualGraph) -> Result<MultiplicityMatrix, ResolutionError> {
    let n = graph.vertex_count();
    // work with A = -(intersection matrix) so the target is its inverse
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigInt::from(-graph.intersection(i as u32, j as u32))
                    } else if j - n == i {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => a.swap(k, r),
                None => return Err(ResolutionError::SingularIntersectionMatrix),
            }
        }
        let pivot = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = a[i][k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let num = &pivot * &a[i][j] - &factor * &a[k][j];
                debug_assert!((&num % &prev).is_zero(), "fraction-free step divides exactly");
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    // the left block is now diagonal; row i of the augmented block is
    // that diagonal entry times row i of the inverse
    let mut entries = vec![0i64; n * n];
    for i in 0..n {
        let d = a[i][i].clone();
        if d.is_zero() {
            return Err(ResolutionError::SingularIntersectionMatrix);
        }
        for j in 0..n {
            let num = a[i][n + j].clone();
            if !(&num % &d).is_zero() {
                return Err(ResolutionError::NonIntegralMultiplicity { row: i, col: j });
            }
            let q = num / &d;
            let v = i64::try_from(&q).map_err(|_| ResolutionError::MultiplicityOverflow)?;
            entries[i * n + j] = v;
        }
    }
    let m = MultiplicityMatrix { n, entries };
    // exact verification: -(intersection) * m = identity
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for k in 0..n {
                acc += (-graph.intersection(i as u32, k as u32)) as i128 * m.get(k as u32, j as u32) as i128;
            }
            let expected = if i == j { 1 } else { 0 };
            if acc != expected {
                return Err(ResolutionError::SingularIntersectionMatrix);
            }
        }
    }
    for i in 0..n {
        if m.get(i as u32, i as u32) <= 0 {
            return Err(ResolutionError::NonPositiveDiagonal { vertex: i });
        }
        for j in 0..n {
            if m.get(i as u32, j as u32) < 0 {
                return Err(ResolutionError::NegativeMultiplicity { row: i, col: j });
            }
            if m.get(i as u32, j as u32) != m.get(j as u32, i as u32) {
                return Err(ResolutionError::AsymmetricMultiplicity);
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationKind {
    Curve,
    Divisorial,
}

/// One valuation of the collection: either the divisorial valuation of
/// a component, or a curve valuation whose strict transform meets that
/// component.
#[derive(Clone, Debug)]
pub struct Valuation {
    pub kind: ValuationKind,
    pub component: u32,
}

/// A stratum of the quotient of the smooth part of the exceptional
/// divisor, with its declared invariants.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub id: String,
    /// A component met by the stratum's preimage.
    pub component: u32,
    pub chi: i64,
    pub isotropy: Subgroup,
    pub character: Character,
    pub slice_isotropy: Subgroup,
}

/// Full resolution combinatorics: graph, valuations and strata.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub graph: DualGraph,
    pub valuations: Vec<Valuation>,
    pub strata: Vec<Stratum>,
    /// Optional declared Euler characteristic of the smooth part over a
    /// vertex orbit, keyed by any orbit member.
    pub smooth_euler: Vec<(u32, i64)>,
}

impl Resolution {
    pub fn arity(&self) -> usize {
        self.valuations.len()
    }
}

/// Outcome of the consistency checks; failures are hard errors, notes
/// record what was accepted on declaration only.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the declared data: the action is a graph action leaving
/// self-intersections and edges invariant, valuations point at real
/// components, strata isotropy stabilizes the component, slice isotropy
/// is contained in isotropy, characters are homomorphisms on their
/// declared domain, and (when declared) the per-orbit Euler
/// characteristics aggregate correctly.
pub fn validate(ctx: &GroupContext, res: &Resolution) -> ValidationReport {
    let mut report = ValidationReport::default();
    let g = ctx.group();
    let graph = &res.graph;
    if let Err(e) = graph.check_action(ctx) {
        report.failures.push(format!("{}", e));
        return report;
    }
    // invariance of the decorations
    for a in 0..ctx.order() as Elem {
        for v in 0..graph.vertex_count() as u32 {
            if graph.self_int(graph.apply(a, v)) != graph.self_int(v) {
                report.failures.push(format!(
                    "self-intersection is not invariant: element {} moves vertex {}",
                    a, v
                ));
            }
        }
        for (x, y) in graph.edges() {
            if !graph.has_edge(graph.apply(a, x), graph.apply(a, y)) {
                report
                    .failures
                    .push(format!("edge ({}, {}) is not invariant under element {}", x, y, a));
            }
        }
    }
    for (i, val) in res.valuations.iter().enumerate() {
        if val.component as usize >= graph.vertex_count() {
            report
                .failures
                .push(format!("valuation {} references missing component {}", i + 1, val.component));
        }
    }
    for st in &res.strata {
        if st.component as usize >= graph.vertex_count() {
            report
                .failures
                .push(format!("stratum {} references missing component {}", st.id, st.component));
            continue;
        }
        if Subgroup::new_checked(g, st.isotropy.elems()).is_err() {
            report
                .failures
                .push(format!("stratum {}: isotropy is not a subgroup", st.id));
            continue;
        }
        for &a in st.isotropy.elems() {
            if graph.apply(a, st.component) != st.component {
                report.failures.push(format!(
                    "stratum {}: isotropy element {} does not stabilize component {}",
                    st.id, a, st.component
                ));
            }
        }
        if !st.slice_isotropy.is_subset_of(&st.isotropy) {
            report.failures.push(format!(
                "stratum {}: slice isotropy is not contained in the isotropy",
                st.id
            ));
        }
        if Subgroup::new_checked(g, st.slice_isotropy.elems()).is_err() {
            report
                .failures
                .push(format!("stratum {}: slice isotropy is not a subgroup", st.id));
        }
        if st.character.domain() != &st.isotropy {
            report.failures.push(format!(
                "stratum {}: character domain differs from the isotropy subgroup",
                st.id
            ));
        } else if let Err(e) = st.character.check(g) {
            report.failures.push(format!("stratum {}: {}", st.id, e));
        }
    }
    // aggregate Euler characteristics per vertex orbit when declared
    for &(vertex, declared) in &res.smooth_euler {
        if vertex as usize >= graph.vertex_count() {
            report
                .failures
                .push(format!("euler declaration references missing vertex {}", vertex));
            continue;
        }
        let orbit: BTreeSet<u32> = (0..ctx.order() as Elem)
            .map(|a| graph.apply(a, vertex))
            .collect();
        let mut total = 0i64;
        for st in &res.strata {
            if orbit.contains(&st.component) {
                total += st.chi * (ctx.order() / st.isotropy.order()) as i64;
            }
        }
        if total != declared {
            report.failures.push(format!(
                "smooth part over the orbit of vertex {}: strata aggregate to Euler characteristic {}, declared {}",
                vertex, total, declared
            ));
        }
    }
    report
        .notes
        .push("stratum Euler characteristics are declared data, not derived".to_string());
    report
}

/// Degree vector of a stratum: component `i` sums the multiplicities
/// `m[attached(i)][a * component]` over all group elements `a`.
pub fn omega_vector(
    ctx: &GroupContext,
    res: &Resolution,
    m: &MultiplicityMatrix,
    stratum: &Stratum,
) -> MultiDegree {
    res.valuations
        .iter()
        .map(|val| {
            let mut acc: u64 = 0;
            for a in 0..ctx.order() as Elem {
                let target = res.graph.apply(a, stratum.component);
                acc += m.get(val.component, target) as u64;
            }
            u32::try_from(acc).expect("degree fits in 32 bits")
        })
        .collect()
}

/// Total multiplicity of a stratum's component across the collection.
pub fn n_value(res: &Resolution, m: &MultiplicityMatrix, stratum: &Stratum) -> i64 {
    res.valuations
        .iter()
        .map(|val| m.get(val.component, stratum.component))
        .sum()
}
