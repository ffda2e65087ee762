//! Equipped G-sets and the Grothendieck ring they generate, together
//! with the reductions to the ordinary Burnside ring, to the integers,
//! and to the ring spanned by the one-dimensional characters of the
//! whole group.
//!
//! A class `[G/H]_alpha` is interned as an [`EqClassId`] inside a
//! [`crate::group::GroupContext`]; elements are sparse integer
//! combinations of class ids. Products and symmetric powers are
//! computed by realizing classes as concrete equipped sets and
//! decomposing orbits, which is exact and fast at the intended scale.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::group::{Character, Elem, GroupContext, Subgroup};
use crate::qz::QZ;
use crate::series::CoeffRing;

/// Interned id of an irreducible equipped class `[G/H]_alpha`.
///
/// Ids are ordered by (subgroup conjugacy class, canonical character),
/// which is the canonical order used everywhere for rendering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct EqClassId(pub u32);

/// An element of the Grothendieck ring of equipped G-sets: an integer
/// combination of canonical classes. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct EqElement {
    terms: BTreeMap<EqClassId, i64>,
}

impl EqElement {
    pub fn zero() -> Self {
        EqElement::default()
    }

    pub fn one(ctx: &GroupContext) -> Self {
        EqElement::from_class(EqClassId(ctx.unit_class()))
    }

    pub fn from_class(cls: EqClassId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(cls, 1);
        EqElement { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (EqClassId, i64)>) -> Self {
        let mut e = EqElement::zero();
        for (c, k) in pairs {
            e.add_class(c, k);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (EqClassId, i64)> + '_ {
        self.terms.iter().map(|(&c, &k)| (c, k))
    }

    pub fn coeff(&self, cls: EqClassId) -> i64 {
        self.terms.get(&cls).copied().unwrap_or(0)
    }

    pub fn add_class(&mut self, cls: EqClassId, k: i64) {
        if k == 0 {
            return;
        }
        let entry = self.terms.entry(cls).or_insert(0);
        *entry += k;
        if *entry == 0 {
            self.terms.remove(&cls);
        }
    }

    pub fn add_assign(&mut self, other: &EqElement) {
        for (c, k) in other.terms() {
            self.add_class(c, k);
        }
    }

    pub fn sub_assign(&mut self, other: &EqElement) {
        for (c, k) in other.terms() {
            self.add_class(c, -k);
        }
    }

    pub fn neg(&self) -> EqElement {
        EqElement {
            terms: self.terms.iter().map(|(&c, &k)| (c, -k)).collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> EqElement {
        if k == 0 {
            return EqElement::zero();
        }
        EqElement {
            terms: self.terms.iter().map(|(&c, &v)| (c, v * k)).collect(),
        }
    }

    /// Single positive class with coefficient one, if that is the shape.
    pub fn as_single_class(&self) -> Option<EqClassId> {
        if self.terms.len() == 1 {
            let (&c, &k) = self.terms.iter().next().unwrap();
            if k == 1 {
                return Some(c);
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetError {
    BadActionRow { elem: Elem, reason: String },
    NotAnAction { a: Elem, b: Elem, point: u32 },
    CharacterDomainMismatch { point: u32 },
    CharacterNotHomomorphism { point: u32, reason: String },
    IncompatibleCharacters { a: Elem, point: u32, at: Elem },
    UnknownClass { point: u32 },
}

impl core::error::Error for SetError {}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::BadActionRow { elem, reason } => {
                write!(f, "action row of element {} is invalid: {}", elem, reason)
            }
            SetError::NotAnAction { a, b, point } => write!(
                f,
                "action law fails: ({}*{}) and {} then {} disagree at point {}",
                a, b, b, a, point
            ),
            SetError::CharacterDomainMismatch { point } => write!(
                f,
                "character at point {} is not defined exactly on its isotropy subgroup",
                point
            ),
            SetError::CharacterNotHomomorphism { point, reason } => {
                write!(f, "character at point {} is not a homomorphism: {}", point, reason)
            }
            SetError::IncompatibleCharacters { a, point, at } => write!(
                f,
                "characters at point {} and its image under {} disagree at {}",
                point, a, at
            ),
            SetError::UnknownClass { point } => {
                write!(f, "no canonical class found for the orbit of point {}", point)
            }
        }
    }
}

/// A finite equipped G-set: a finite set with a group action and a
/// one-dimensional character of the isotropy subgroup of each point,
/// compatible with conjugation.
#[derive(Clone, Debug)]
pub struct EquippedSet {
    size: usize,
    /// `action[a][x]` is the image of point `x` under group element `a`.
    action: Vec<Vec<u32>>,
    chars: Vec<Character>,
}

impl EquippedSet {
    pub fn new(action: Vec<Vec<u32>>, chars: Vec<Character>) -> Self {
        let size = chars.len();
        EquippedSet { size, action, chars }
    }

    /// The empty set.
    pub fn empty(ctx: &GroupContext) -> Self {
        EquippedSet {
            size: 0,
            action: vec![Vec::new(); ctx.order()],
            chars: Vec::new(),
        }
    }

    /// One fixed point carrying the given character of the full group.
    pub fn point(ctx: &GroupContext, ch: Character) -> Self {
        EquippedSet {
            size: 1,
            action: vec![vec![0]; ctx.order()],
            chars: vec![ch],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, a: Elem, x: u32) -> u32 {
        self.action[a as usize][x as usize]
    }

    pub fn char_at(&self, x: u32) -> &Character {
        &self.chars[x as usize]
    }

    pub fn stabilizer(&self, ctx: &GroupContext, x: u32) -> Subgroup {
        let elems: Vec<Elem> = (0..ctx.order() as Elem)
            .filter(|&a| self.apply(a, x) == x)
            .collect();
        Subgroup::new_checked(ctx.group(), &elems).expect("stabilizers are subgroups")
    }

    /// Validate the action law, the character domains, and the
    /// conjugation compatibility of the characters.
    pub fn validate(&self, ctx: &GroupContext) -> Result<(), SetError> {
        let g = ctx.group();
        let n = self.size as u32;
        if self.action.len() != ctx.order() {
            return Err(SetError::BadActionRow {
                elem: self.action.len() as Elem,
                reason: format!("expected {} rows, found {}", ctx.order(), self.action.len()),
            });
        }
        for (a, row) in self.action.iter().enumerate() {
            if row.len() != self.size {
                return Err(SetError::BadActionRow {
                    elem: a as Elem,
                    reason: format!("expected {} entries, found {}", self.size, row.len()),
                });
            }
            let mut seen = vec![false; self.size];
            for &y in row {
                if y >= n || seen[y as usize] {
                    return Err(SetError::BadActionRow {
                        elem: a as Elem,
                        reason: "not a permutation of the points".to_string(),
                    });
                }
                seen[y as usize] = true;
            }
        }
        for x in 0..n {
            if self.apply(0, x) != x {
                return Err(SetError::NotAnAction { a: 0, b: 0, point: x });
            }
        }
        for a in 0..ctx.order() as Elem {
            for b in 0..ctx.order() as Elem {
                let ab = g.mul(a, b);
                for x in 0..n {
                    if self.apply(ab, x) != self.apply(a, self.apply(b, x)) {
                        return Err(SetError::NotAnAction { a, b, point: x });
                    }
                }
            }
        }
        for x in 0..n {
            let stab = self.stabilizer(ctx, x);
            if self.chars[x as usize].domain() != &stab {
                return Err(SetError::CharacterDomainMismatch { point: x });
            }
            if let Err(e) = self.chars[x as usize].check(g) {
                return Err(SetError::CharacterNotHomomorphism {
                    point: x,
                    reason: format!("{}", e),
                });
            }
        }
        // compatibility: char at a*x is the a-conjugate of char at x
        for a in 0..ctx.order() as Elem {
            for x in 0..n {
                let ax = self.apply(a, x);
                let expected = self.chars[x as usize].conjugate(g, a);
                for &b in expected.domain().elems() {
                    if self.chars[ax as usize].value_of(b) != expected.value_of(b) {
                        return Err(SetError::IncompatibleCharacters { a, point: x, at: b });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn disjoint_union(&self, other: &EquippedSet) -> EquippedSet {
        let offset = self.size as u32;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(ra, rb)| {
                let mut row = ra.clone();
                row.extend(rb.iter().map(|&y| y + offset));
                row
            })
            .collect();
        let mut chars = self.chars.clone();
        chars.extend(other.chars.iter().cloned());
        EquippedSet { size: self.size + other.size, action, chars }
    }

    /// Cartesian product with the diagonal action; the character at a
    /// pair is the sum of the two characters on the intersection of the
    /// isotropy subgroups.
    pub fn product(&self, ctx: &GroupContext, other: &EquippedSet) -> EquippedSet {
        let n2 = other.size as u32;
        let size = self.size * other.size;
        let mut action = Vec::with_capacity(ctx.order());
        for a in 0..ctx.order() {
            let mut row = Vec::with_capacity(size);
            for x in 0..self.size as u32 {
                for y in 0..n2 {
                    row.push(self.action[a][x as usize] * n2 + other.action[a][y as usize]);
                }
            }
            action.push(row);
        }
        let mut chars = Vec::with_capacity(size);
        for x in 0..self.size as u32 {
            for y in 0..n2 {
                let dom = self.chars[x as usize]
                    .domain()
                    .intersect(other.chars[y as usize].domain());
                let values = dom
                    .elems()
                    .iter()
                    .map(|&b| {
                        self.chars[x as usize]
                            .value_of(b)
                            .add(other.chars[y as usize].value_of(b))
                    })
                    .collect();
                chars.push(Character::new(dom, values));
            }
        }
        EquippedSet { size, action, chars }
    }

    /// Orbits of the action, each as a sorted list of points.
    pub fn orbits(&self, ctx: &GroupContext) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for a in 0..ctx.order() as Elem {
                orbit.insert(self.apply(a, x));
            }
            for &y in &orbit {
                seen[y as usize] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }
}

/// Decompose a validated equipped set into canonical classes.
pub fn orbit_decompose(ctx: &GroupContext, set: &EquippedSet) -> Result<EqElement, SetError> {
    set.validate(ctx)?;
    Ok(decompose_unchecked(ctx, set))
}

/// Orbit decomposition without re-validating (for internally built sets).
fn decompose_unchecked(ctx: &GroupContext, set: &EquippedSet) -> EqElement {
    let mut out = EqElement::zero();
    for orbit in set.orbits(ctx) {
        let x = orbit[0];
        let stab = set.stabilizer(ctx, x);
        let ch = set.char_at(x);
        let id = ctx
            .eq_class_of(&stab, ch.values())
            .expect("isotropy pairs are interned");
        out.add_class(EqClassId(id), 1);
    }
    out
}

/// Realize a canonical class as a concrete equipped set on the cosets
/// of its subgroup, points ordered by their least coset representative.
pub fn realize(ctx: &GroupContext, cls: EqClassId) -> EquippedSet {
    let g = ctx.group();
    let (class, ch) = ctx.eq_class_data(cls.0);
    let h = ctx.class_representative(class);
    // left cosets aH, keyed by least representative
    let mut coset_of_elem: BTreeMap<Elem, usize> = BTreeMap::new();
    let mut reps: Vec<Elem> = Vec::new();
    for a in 0..g.order() as Elem {
        if coset_of_elem.contains_key(&a) {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for &x in h.elems() {
            coset_of_elem.insert(g.mul(a, x), id);
        }
    }
    let size = reps.len();
    let mut action = Vec::with_capacity(g.order());
    for a in 0..g.order() as Elem {
        let row = (0..size)
            .map(|i| coset_of_elem[&g.mul(a, reps[i])] as u32)
            .collect();
        action.push(row);
    }
    let chars = (0..size).map(|i| ch.conjugate(g, reps[i])).collect();
    EquippedSet { size, action, chars }
}

/// Product of two ring elements by bilinearity over concrete products.
pub fn mul_elements(ctx: &GroupContext, a: &EqElement, b: &EqElement) -> EqElement {
    let mut out = EqElement::zero();
    for (ca, ka) in a.terms() {
        let xa = realize(ctx, ca);
        for (cb, kb) in b.terms() {
            let xb = realize(ctx, cb);
            let prod = xa.product(ctx, &xb);
            out.add_assign(&decompose_unchecked(ctx, &prod).scaled(ka * kb));
        }
    }
    out
}

/// The k-th symmetric power of a concrete equipped set.
///
/// Points of the power are size-k multisets; the stabilizer of a
/// multiset consists of the elements permuting its support while
/// preserving multiplicities, and the attached character sums, over the
/// cycles of that permutation, the cycle's point character evaluated at
/// the cycle power, repeated by the multiplicity.
pub fn sym_power_set(ctx: &GroupContext, set: &EquippedSet, k: usize) -> EqElement {
    if k == 0 {
        return EqElement::one(ctx);
    }
    if set.size() == 0 {
        return EqElement::zero();
    }
    let g = ctx.group();
    let mut out = EqElement::zero();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut multiset: Vec<u32> = vec![0; k];
    loop {
        if !seen.contains(&multiset) {
            // orbit of the multiset under the action
            let mut orbit: BTreeSet<Vec<u32>> = BTreeSet::new();
            let mut stab_elems: Vec<Elem> = Vec::new();
            for a in 0..ctx.order() as Elem {
                let mut img: Vec<u32> = multiset.iter().map(|&x| set.apply(a, x)).collect();
                img.sort_unstable();
                if img == multiset {
                    stab_elems.push(a);
                }
                orbit.insert(img);
            }
            for m in &orbit {
                seen.insert(m.clone());
            }
            // support with multiplicities
            let mut support: Vec<u32> = multiset.clone();
            support.dedup();
            let mult_of = |y: u32| multiset.iter().filter(|&&x| x == y).count() as i64;
            let stab = Subgroup::new_checked(g, &stab_elems).expect("stabilizer is a subgroup");
            let values: Vec<QZ> = stab
                .elems()
                .iter()
                .map(|&a| {
                    let mut total = QZ::zero();
                    let mut done: BTreeSet<u32> = BTreeSet::new();
                    for &y0 in &support {
                        if done.contains(&y0) {
                            continue;
                        }
                        // cycle of a through y0 on the support
                        let mut len = 0usize;
                        let mut y = y0;
                        loop {
                            done.insert(y);
                            len += 1;
                            y = set.apply(a, y);
                            if y == y0 {
                                break;
                            }
                        }
                        let power = g.pow(a, len);
                        let v = set.char_at(y0).value_of(power);
                        total = total.add(v.scale(mult_of(y0)));
                    }
                    total
                })
                .collect();
            let id = ctx
                .eq_class_of(&stab, &values)
                .expect("symmetric power isotropy pairs are interned");
            out.add_class(EqClassId(id), 1);
        }
        if !next_multiset(&mut multiset, set.size() as u32) {
            break;
        }
    }
    out
}

/// Advance a sorted multiset (odometer order); false when exhausted.
fn next_multiset(m: &mut [u32], n: u32) -> bool {
    let k = m.len();
    let mut i = k;
    while i > 0 {
        if m[i - 1] + 1 < n {
            let v = m[i - 1] + 1;
            for slot in m.iter_mut().skip(i - 1) {
                *slot = v;
            }
            return true;
        }
        i -= 1;
    }
    false
}

/// An element of the ordinary Burnside ring: integer combination of
/// subgroup conjugacy classes `[G/H]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct BurnsideElement {
    terms: BTreeMap<usize, i64>,
}

impl BurnsideElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(ctx: &GroupContext) -> Self {
        Self::from_class(ctx.full_subgroup_class())
    }

    pub fn from_class(class: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(class, 1);
        BurnsideElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().map(|(&c, &k)| (c, k))
    }

    pub fn add_class(&mut self, class: usize, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(class).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&class);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (c, k) in other.terms() {
            self.add_class(c, k);
        }
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        BurnsideElement {
            terms: self.terms.iter().map(|(&c, &v)| (c, v * k)).collect(),
        }
    }

    /// Product by realizing `G/H x G/K` and counting orbit stabilizers.
    pub fn mul(ctx: &GroupContext, a: &Self, b: &Self) -> Self {
        let mut out = Self::zero();
        for (ca, ka) in a.terms() {
            for (cb, kb) in b.terms() {
                out.add_assign(&class_product(ctx, ca, cb).scaled(ka * kb));
            }
        }
        out
    }
}

fn class_product(ctx: &GroupContext, a: usize, b: usize) -> BurnsideElement {
    let g = ctx.group();
    let h = ctx.class_representative(a);
    let k = ctx.class_representative(b);
    let cosets_h = cosets(ctx, h);
    let cosets_k = cosets(ctx, k);
    let nh = cosets_h.reps.len();
    let nk = cosets_k.reps.len();
    let mut seen = vec![false; nh * nk];
    let mut out = BurnsideElement::zero();
    for x in 0..nh {
        for y in 0..nk {
            if seen[x * nk + y] {
                continue;
            }
            let mut stab: Vec<Elem> = Vec::new();
            for a in 0..g.order() as Elem {
                let xi = cosets_h.index[&g.mul(a, cosets_h.reps[x])];
                let yi = cosets_k.index[&g.mul(a, cosets_k.reps[y])];
                seen[xi * nk + yi] = true;
                if xi == x && yi == y {
                    stab.push(a);
                }
            }
            let sub = Subgroup::new_checked(g, &stab).expect("stabilizer");
            let sidx = ctx.subgroup_index(&sub).expect("interned");
            out.add_class(ctx.class_of_subgroup(sidx), 1);
        }
    }
    out
}

struct Cosets {
    reps: Vec<Elem>,
    index: BTreeMap<Elem, usize>,
}

fn cosets(ctx: &GroupContext, h: &Subgroup) -> Cosets {
    let g = ctx.group();
    let mut index = BTreeMap::new();
    let mut reps = Vec::new();
    for a in 0..g.order() as Elem {
        if index.contains_key(&a) {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for &x in h.elems() {
            index.insert(g.mul(a, x), id);
        }
    }
    Cosets { reps, index }
}

/// An element of the Burnside ring with rational multiplicities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct BurnsideQElement {
    terms: BTreeMap<usize, Ratio<i64>>,
}

impl BurnsideQElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(ctx: &GroupContext) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ctx.full_subgroup_class(), Ratio::new(1, 1));
        BurnsideQElement { terms }
    }

    pub fn from_integer(e: &BurnsideElement) -> Self {
        BurnsideQElement {
            terms: e.terms().map(|(c, k)| (c, Ratio::new(k, 1))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, Ratio<i64>)> + '_ {
        self.terms.iter().map(|(&c, &q)| (c, q))
    }

    pub fn add_class(&mut self, class: usize, q: Ratio<i64>) {
        if q.is_zero() {
            return;
        }
        let e = self.terms.entry(class).or_insert_with(Ratio::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&class);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (c, q) in other.terms() {
            self.add_class(c, q);
        }
    }

    pub fn neg(&self) -> Self {
        BurnsideQElement {
            terms: self.terms.iter().map(|(&c, &q)| (c, -q)).collect(),
        }
    }

    pub fn mul(ctx: &GroupContext, a: &Self, b: &Self) -> Self {
        let mut out = Self::zero();
        for (ca, qa) in a.terms() {
            for (cb, qb) in b.terms() {
                let basis = class_product(ctx, ca, cb);
                for (c, k) in basis.terms() {
                    out.add_class(c, qa * qb * Ratio::new(k, 1));
                }
            }
        }
        out
    }
}

/// An element of the ring spanned by the one-dimensional characters of
/// the whole group, keyed by character index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct CharRingElement {
    terms: BTreeMap<usize, i64>,
}

impl CharRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        // the trivial character is always index 0
        let mut terms = BTreeMap::new();
        terms.insert(0, 1);
        CharRingElement { terms }
    }

    pub fn from_char(idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(idx, 1);
        CharRingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().map(|(&c, &k)| (c, k))
    }

    pub fn add_char(&mut self, idx: usize, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(idx).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&idx);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (c, k) in other.terms() {
            self.add_char(c, k);
        }
    }

    /// Product: basis characters multiply by pointwise character sum.
    pub fn mul(ctx: &GroupContext, a: &Self, b: &Self) -> Self {
        let full_idx = {
            let rep = ctx.classes()[ctx.full_subgroup_class()].rep;
            rep
        };
        let chars = ctx.characters(full_idx);
        let mut out = Self::zero();
        for (ia, ka) in a.terms() {
            for (ib, kb) in b.terms() {
                let sum = chars[ia].sum(&chars[ib]);
                let idx = chars
                    .binary_search_by(|c| c.values().cmp(sum.values()))
                    .expect("character group is closed under sums");
                out.add_char(idx, ka * kb);
            }
        }
        out
    }
}

/// Forget the characters: `[G/H]_alpha -> [G/H]`.
pub fn rho(ctx: &GroupContext, e: &EqElement) -> BurnsideElement {
    let mut out = BurnsideElement::zero();
    for (c, k) in e.terms() {
        let (class, _) = ctx.eq_class_data(c.0);
        out.add_class(class, k);
    }
    out
}

/// Forget characters and action: `[G/H]_alpha -> [G : H]`.
pub fn rhohat(ctx: &GroupContext, e: &EqElement) -> i64 {
    let mut out = 0i64;
    for (c, k) in e.terms() {
        let (class, _) = ctx.eq_class_data(c.0);
        let h = ctx.class_representative(class);
        out += k * (ctx.order() / h.order()) as i64;
    }
    out
}

/// Keep only the fixed points: classes with full isotropy map to their
/// character, everything else dies.
pub fn eps(ctx: &GroupContext, e: &EqElement) -> CharRingElement {
    let full_class = ctx.full_subgroup_class();
    let rep = ctx.classes()[full_class].rep;
    let chars = ctx.characters(rep);
    let mut out = CharRingElement::zero();
    for (c, k) in e.terms() {
        let (class, ch) = ctx.eq_class_data(c.0);
        if class != full_class {
            continue;
        }
        let idx = chars
            .binary_search_by(|x| x.values().cmp(ch.values()))
            .expect("character of the full group is listed");
        out.add_char(idx, k);
    }
    out
}

/// The equipped Grothendieck ring with memoized class products and
/// symmetric powers. One instance per thread; the context is shared.
pub struct EqRing<'a> {
    ctx: &'a GroupContext,
    prod_cache: BTreeMap<(EqClassId, EqClassId), EqElement>,
    sym_cache: BTreeMap<(EqClassId, usize), EqElement>,
}

impl<'a> EqRing<'a> {
    pub fn new(ctx: &'a GroupContext) -> Self {
        EqRing { ctx, prod_cache: BTreeMap::new(), sym_cache: BTreeMap::new() }
    }

    pub fn ctx(&self) -> &'a GroupContext {
        self.ctx
    }

    fn class_mul(&mut self, a: EqClassId, b: EqClassId) -> EqElement {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(hit) = self.prod_cache.get(&key) {
            return hit.clone();
        }
        let xa = realize(self.ctx, key.0);
        let xb = realize(self.ctx, key.1);
        let result = decompose_unchecked(self.ctx, &xa.product(self.ctx, &xb));
        self.prod_cache.insert(key, result.clone());
        result
    }

    pub fn mul_elements(&mut self, a: &EqElement, b: &EqElement) -> EqElement {
        let mut out = EqElement::zero();
        let pairs: Vec<(EqClassId, i64, EqClassId, i64)> = a
            .terms()
            .flat_map(|(ca, ka)| b.terms().map(move |(cb, kb)| (ca, ka, cb, kb)))
            .collect();
        for (ca, ka, cb, kb) in pairs {
            out.add_assign(&self.class_mul(ca, cb).scaled(ka * kb));
        }
        out
    }

    /// Memoized `S^k [G/H]_alpha`.
    pub fn class_sym_power(&mut self, cls: EqClassId, k: usize) -> EqElement {
        if k == 0 {
            return EqElement::one(self.ctx);
        }
        if let Some(hit) = self.sym_cache.get(&(cls, k)) {
            return hit.clone();
        }
        let set = realize(self.ctx, cls);
        let result = sym_power_set(self.ctx, &set, k);
        self.sym_cache.insert((cls, k), result.clone());
        result
    }
}

impl CoeffRing for EqRing<'_> {
    type Elem = EqElement;

    fn zero(&self) -> EqElement {
        EqElement::zero()
    }

    fn one(&self) -> EqElement {
        EqElement::one(self.ctx)
    }

    fn is_zero(&self, e: &EqElement) -> bool {
        e.is_zero()
    }

    fn add(&self, a: &EqElement, b: &EqElement) -> EqElement {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }

    fn neg(&self, a: &EqElement) -> EqElement {
        a.neg()
    }

    fn mul(&mut self, a: &EqElement, b: &EqElement) -> EqElement {
        self.mul_elements(a, b)
    }
}

/// The Burnside ring with rational multiplicities as a series
/// coefficient ring.
pub struct BurnsideQRing<'a> {
    ctx: &'a GroupContext,
}

impl<'a> BurnsideQRing<'a> {
    pub fn new(ctx: &'a GroupContext) -> Self {
        BurnsideQRing { ctx }
    }
}

impl CoeffRing for BurnsideQRing<'_> {
    type Elem = BurnsideQElement;

    fn zero(&self) -> BurnsideQElement {
        BurnsideQElement::zero()
    }

    fn one(&self) -> BurnsideQElement {
        BurnsideQElement::one(self.ctx)
    }

    fn is_zero(&self, e: &BurnsideQElement) -> bool {
        e.is_zero()
    }

    fn add(&self, a: &BurnsideQElement, b: &BurnsideQElement) -> BurnsideQElement {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }

    fn neg(&self, a: &BurnsideQElement) -> BurnsideQElement {
        a.neg()
    }

    fn mul(&mut self, a: &BurnsideQElement, b: &BurnsideQElement) -> BurnsideQElement {
        BurnsideQElement::mul(self.ctx, a, b)
    }
}

/// The character ring as a series coefficient ring.
pub struct CharRing<'a> {
    ctx: &'a GroupContext,
}

impl<'a> CharRing<'a> {
    pub fn new(ctx: &'a GroupContext) -> Self {
        CharRing { ctx }
    }
}

impl CoeffRing for CharRing<'_> {
    type Elem = CharRingElement;

    fn zero(&self) -> CharRingElement {
        CharRingElement::zero()
    }

    fn one(&self) -> CharRingElement {
        CharRingElement::one()
    }

    fn is_zero(&self, e: &CharRingElement) -> bool {
        e.is_zero()
    }

    fn add(&self, a: &CharRingElement, b: &CharRingElement) -> CharRingElement {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }

    fn neg(&self, a: &CharRingElement) -> CharRingElement {
        CharRingElement {
            terms: a.terms.iter().map(|(&c, &k)| (c, -k)).collect(),
        }
    }

    fn mul(&mut self, a: &CharRingElement, b: &CharRingElement) -> CharRingElement {
        CharRingElement::mul(self.ctx, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{characters_of, FiniteGroup};
    use num_integer::binomial;

    fn ctx_of(g: FiniteGroup) -> GroupContext {
        GroupContext::new(g)
    }

    fn z2() -> GroupContext {
        ctx_of(FiniteGroup::cyclic(2))
    }

    fn s3() -> GroupContext {
        ctx_of(FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 64).unwrap())
    }

    /// Class id of `[G/H]_alpha` found by subgroup order and character.
    fn find_class(ctx: &GroupContext, order: usize, trivial: bool) -> EqClassId {
        for id in 0..ctx.eq_class_count() as u32 {
            let (class, ch) = ctx.eq_class_data(id);
            let h = ctx.class_representative(class);
            if h.order() == order && ch.is_trivial() == trivial {
                return EqClassId(id);
            }
        }
        panic!("no class with subgroup order {} and trivial={}", order, trivial);
    }

    #[test]
    fn unit_is_one_point_trivial() {
        let ctx = z2();
        let one = EqElement::one(&ctx);
        let set = EquippedSet::point(&ctx, Character::trivial(Subgroup::full(ctx.group())));
        assert_eq!(orbit_decompose(&ctx, &set).unwrap(), one);
    }

    #[test]
    fn free_orbit_decomposes_to_free_class() {
        let ctx = z2();
        // two points swapped, trivial characters
        let set = EquippedSet::new(
            vec![vec![0, 1], vec![1, 0]],
            vec![
                Character::trivial(Subgroup::trivial()),
                Character::trivial(Subgroup::trivial()),
            ],
        );
        let free = find_class(&ctx, 1, true);
        assert_eq!(orbit_decompose(&ctx, &set).unwrap(), EqElement::from_class(free));
    }

    #[test]
    fn invalid_set_is_reported() {
        let ctx = z2();
        // character domain does not match the stabilizer
        let set = EquippedSet::new(
            vec![vec![0, 1], vec![1, 0]],
            vec![
                Character::trivial(Subgroup::full(ctx.group())),
                Character::trivial(Subgroup::trivial()),
            ],
        );
        assert!(matches!(
            orbit_decompose(&ctx, &set),
            Err(SetError::CharacterDomainMismatch { .. })
        ));
    }

    #[test]
    fn sigma_times_free_is_free() {
        let ctx = z2();
        let sigma = find_class(&ctx, 2, false);
        let free = find_class(&ctx, 1, true);
        let mut ring = EqRing::new(&ctx);
        let prod = ring.mul_elements(&EqElement::from_class(sigma), &EqElement::from_class(free));
        assert_eq!(prod, EqElement::from_class(free));
    }

    #[test]
    fn unit_law() {
        let ctx = s3();
        let mut ring = EqRing::new(&ctx);
        let one = EqElement::one(&ctx);
        for id in 0..ctx.eq_class_count() as u32 {
            let x = EqElement::from_class(EqClassId(id));
            assert_eq!(ring.mul_elements(&one, &x), x);
            assert_eq!(ring.mul_elements(&x, &one), x);
        }
    }

    #[test]
    fn free_square_over_z3() {
        let ctx = ctx_of(FiniteGroup::cyclic(3));
        let free = find_class(&ctx, 1, true);
        let mut ring = EqRing::new(&ctx);
        let x = EqElement::from_class(free);
        // nine points in three free orbits
        assert_eq!(ring.mul_elements(&x, &x), x.scaled(3));
    }

    #[test]
    fn sym_powers_of_sigma_point_alternate() {
        let ctx = z2();
        let sigma = find_class(&ctx, 2, false);
        let one = EqElement::one(&ctx);
        let mut ring = EqRing::new(&ctx);
        for k in 0..8 {
            let p = ring.class_sym_power(sigma, k);
            if k % 2 == 0 {
                assert_eq!(p, one, "k={}", k);
            } else {
                assert_eq!(p, EqElement::from_class(sigma), "k={}", k);
            }
        }
    }

    #[test]
    fn sym_square_of_free_orbit() {
        let ctx = z2();
        let free = find_class(&ctx, 1, true);
        let mut ring = EqRing::new(&ctx);
        let p = ring.class_sym_power(free, 2);
        let mut expected = EqElement::one(&ctx);
        expected.add_class(free, 1);
        assert_eq!(p, expected);
    }

    #[test]
    fn sym_powers_of_unit_stay_unit() {
        let ctx = s3();
        let mut ring = EqRing::new(&ctx);
        let unit = EqClassId(ctx.unit_class());
        for k in 0..6 {
            assert_eq!(ring.class_sym_power(unit, k), EqElement::one(&ctx));
        }
    }

    #[test]
    fn sym_powers_of_twisted_point_add_characters() {
        // over a cyclic group, powers of a one-point set with a faithful
        // character step through the whole character group
        let ctx = ctx_of(FiniteGroup::cyclic(6));
        let full = Subgroup::full(ctx.group());
        let faithful = characters_of(ctx.group(), &full)
            .into_iter()
            .find(|c| c.value_of(1) == crate::qz::QZ::new(1, 6))
            .unwrap();
        let base = ctx.eq_class_of(&full, faithful.values()).unwrap();
        let mut ring = EqRing::new(&ctx);
        for k in 0..=12usize {
            let got = ring.class_sym_power(EqClassId(base), k);
            let mut expected_char = Character::trivial(full.clone());
            for _ in 0..k {
                expected_char = expected_char.sum(&faithful);
            }
            let expected = ctx.eq_class_of(&full, expected_char.values()).unwrap();
            assert_eq!(got, EqElement::from_class(EqClassId(expected)), "k={}", k);
        }
    }

    #[test]
    fn rhohat_of_sym_power_counts_multisets() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)] {
            let ctx = ctx_of(g);
            let mut ring = EqRing::new(&ctx);
            for id in 0..ctx.eq_class_count() as u32 {
                let cls = EqClassId(id);
                let n = rhohat(&ctx, &EqElement::from_class(cls));
                for k in 0..6usize {
                    let p = ring.class_sym_power(cls, k);
                    assert_eq!(rhohat(&ctx, &p), binomial(n + k as i64 - 1, k as i64));
                }
            }
        }
    }

    #[test]
    fn reductions_on_basic_elements() {
        let ctx = z2();
        let sigma = find_class(&ctx, 2, false);
        let free = find_class(&ctx, 1, true);
        // rho drops the character
        let r = rho(&ctx, &EqElement::from_class(sigma));
        assert_eq!(r, BurnsideElement::from_class(ctx.full_subgroup_class()));
        let mut e = EqElement::one(&ctx);
        e.add_class(free, 2);
        let r2 = rho(&ctx, &e);
        let mut expected = BurnsideElement::from_class(ctx.full_subgroup_class());
        expected.add_class(ctx.trivial_subgroup_class(), 2);
        assert_eq!(r2, expected);
        // rhohat counts points
        assert_eq!(rhohat(&ctx, &EqElement::one(&ctx)), 1);
        assert_eq!(rhohat(&ctx, &EqElement::from_class(free)), 2);
        // eps keeps only full-isotropy classes
        assert!(eps(&ctx, &EqElement::from_class(free)).is_zero());
        let s = eps(&ctx, &EqElement::from_class(sigma));
        assert_eq!(s, CharRingElement::from_char(1));
    }

    #[test]
    fn rhohat_of_s3_z3_class() {
        let ctx = s3();
        let cls = find_class(&ctx, 3, true);
        assert_eq!(rhohat(&ctx, &EqElement::from_class(cls)), 2);
    }

    #[test]
    fn eps_multiplies_full_group_characters() {
        let ctx = ctx_of(FiniteGroup::cyclic(4));
        let full = ctx.full_subgroup_class();
        let rep = ctx.classes()[full].rep;
        let chars = ctx.characters(rep).to_vec();
        let mut ring = EqRing::new(&ctx);
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let ca = ctx.eq_class_of(a.domain(), a.values()).unwrap();
                let cb = ctx.eq_class_of(b.domain(), b.values()).unwrap();
                let prod = ring.mul_elements(
                    &EqElement::from_class(EqClassId(ca)),
                    &EqElement::from_class(EqClassId(cb)),
                );
                let got = eps(&ctx, &prod);
                let sum = a.sum(b);
                let idx = chars.binary_search_by(|c| c.values().cmp(sum.values())).unwrap();
                assert_eq!(got, CharRingElement::from_char(idx), "chars {} and {}", i, j);
            }
        }
    }

    #[test]
    fn decomposition_is_relabeling_invariant() {
        let ctx = s3();
        let cls = find_class(&ctx, 2, true);
        let set = realize(&ctx, cls);
        // relabel points by an arbitrary permutation
        let n = set.size() as u32;
        let perm: Vec<u32> = (0..n).rev().collect();
        let inv: Vec<u32> = {
            let mut v = vec![0; n as usize];
            for (i, &p) in perm.iter().enumerate() {
                v[p as usize] = i as u32;
            }
            v
        };
        let action = (0..ctx.order())
            .map(|a| {
                (0..n)
                    .map(|x| perm[set.apply(a as Elem, inv[x as usize]) as usize])
                    .collect()
            })
            .collect();
        let chars = (0..n).map(|x| set.char_at(inv[x as usize]).clone()).collect();
        let relabeled = EquippedSet::new(action, chars);
        assert_eq!(
            orbit_decompose(&ctx, &set).unwrap(),
            orbit_decompose(&ctx, &relabeled).unwrap()
        );
    }

    #[test]
    fn sym_power_of_disjoint_union_convolves() {
        let ctx = s3();
        let a = realize(&ctx, find_class(&ctx, 2, true));
        let b = realize(&ctx, find_class(&ctx, 3, true));
        let union = a.disjoint_union(&b);
        let mut ring = EqRing::new(&ctx);
        for k in 0..5usize {
            let lhs = sym_power_set(&ctx, &union, k);
            let mut rhs = EqElement::zero();
            for i in 0..=k {
                let pa = sym_power_set(&ctx, &a, i);
                let pb = sym_power_set(&ctx, &b, k - i);
                rhs.add_assign(&ring.mul_elements(&pa, &pb));
            }
            assert_eq!(lhs, rhs, "k={}", k);
        }
    }

    /// Fixed points of a subgroup acting on a concrete set.
    fn mark_at(set: &EquippedSet, h: &Subgroup) -> i64 {
        (0..set.size() as u32)
            .filter(|&x| h.elems().iter().all(|&a| set.apply(a, x) == x))
            .count() as i64
    }

    /// Independent oracle for the G-set structure of symmetric powers:
    /// the number of H-fixed size-k multisets equals the coefficient of
    /// u^k in the product of 1/(1 - u^{|O|}) over the H-orbits O.
    #[test]
    fn sym_power_marks_match_orbit_generating_function() {
        let groups = [
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(6),
            FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 64).unwrap(),
        ];
        const KMAX: usize = 5;
        for g in groups {
            let ctx = ctx_of(g);
            for id in 0..ctx.eq_class_count() as u32 {
                let set = realize(&ctx, EqClassId(id));
                for class in 0..ctx.classes().len() {
                    let h = ctx.class_representative(class);
                    // H-orbit sizes on the set
                    let mut seen = vec![false; set.size()];
                    let mut sizes = Vec::new();
                    for x in 0..set.size() as u32 {
                        if seen[x as usize] {
                            continue;
                        }
                        let orbit: BTreeSet<u32> =
                            h.elems().iter().map(|&a| set.apply(a, x)).collect();
                        // close under repeated application
                        let mut orbit = orbit;
                        loop {
                            let extra: BTreeSet<u32> = orbit
                                .iter()
                                .flat_map(|&y| h.elems().iter().map(move |&a| (a, y)))
                                .map(|(a, y)| set.apply(a, y))
                                .collect();
                            let before = orbit.len();
                            orbit.extend(extra);
                            if orbit.len() == before {
                                break;
                            }
                        }
                        for &y in &orbit {
                            seen[y as usize] = true;
                        }
                        sizes.push(orbit.len());
                    }
                    // generating function product, truncated at KMAX
                    let mut gf = vec![0i64; KMAX + 1];
                    gf[0] = 1;
                    for d in sizes {
                        let mut next = vec![0i64; KMAX + 1];
                        for start in 0..=KMAX {
                            if gf[start] == 0 {
                                continue;
                            }
                            let mut e = start;
                            while e <= KMAX {
                                next[e] += gf[start];
                                e += d;
                            }
                        }
                        gf = next;
                    }
                    for (k, &expected) in gf.iter().enumerate() {
                        let sk = sym_power_set(&ctx, &set, k);
                        let mark: i64 = sk
                            .terms()
                            .map(|(c, n)| n * mark_at(&realize(&ctx, c), h))
                            .sum();
                        assert_eq!(
                            mark, expected,
                            "class {} subgroup class {} power {}",
                            id, class, k
                        );
                    }
                }
            }
        }
    }

    /// Independent Burnside product via double cosets:
    /// `[G/H][G/K] = sum over double cosets HgK of [G/(H cap gKg^-1)]`.
    fn burnside_product_by_double_cosets(
        ctx: &GroupContext,
        ha: usize,
        kb: usize,
    ) -> BurnsideElement {
        let g = ctx.group();
        let h = ctx.class_representative(ha);
        let k = ctx.class_representative(kb);
        let mut seen = vec![false; g.order()];
        let mut out = BurnsideElement::zero();
        for x in 0..g.order() as Elem {
            if seen[x as usize] {
                continue;
            }
            for &a in h.elems() {
                for &b in k.elems() {
                    seen[g.mul(g.mul(a, x), b) as usize] = true;
                }
            }
            let conj = k.conjugate(g, x);
            let inter = h.intersect(&conj);
            let sidx = ctx.subgroup_index(&inter).unwrap();
            out.add_class(ctx.class_of_subgroup(sidx), 1);
        }
        out
    }

    #[test]
    fn burnside_product_matches_double_coset_oracle() {
        for g in [
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(6),
            FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3, 64).unwrap(),
        ] {
            let ctx = ctx_of(g);
            let nclasses = ctx.classes().len();
            for a in 0..nclasses {
                for b in 0..nclasses {
                    let via_orbits = BurnsideElement::mul(
                        &ctx,
                        &BurnsideElement::from_class(a),
                        &BurnsideElement::from_class(b),
                    );
                    let via_cosets = burnside_product_by_double_cosets(&ctx, a, b);
                    assert_eq!(via_orbits, via_cosets, "classes {} x {}", a, b);
                }
            }
        }
    }
}
