//! Finite groups from explicit multiplication tables, subgroups up to
//! conjugacy, and one-dimensional characters valued in Q/Z.
//!
//! Element 0 is always the identity. Groups are validated on load:
//! closure, associativity, identity and inverses are all checked. The
//! intended scale is group order up to a few dozen, where exhaustive
//! enumeration is exact and fast.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use crate::qz::QZ;

/// Index of a group element into the multiplication table.
pub type Elem = u16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupError {
    EmptyTable,
    NotSquare,
    EntryOutOfRange { row: usize, col: usize, entry: usize },
    NotIdentity { elem: usize },
    NoInverse { elem: usize },
    NonAssociative { a: usize, b: usize, c: usize },
    BadPermutation { index: usize, reason: String },
    ClosureLimit { limit: usize },
    NotASubgroup { reason: String },
    BadCharacter { reason: String },
}

impl core::error::Error for GroupError {}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::EmptyTable => write!(f, "multiplication table is empty"),
            GroupError::NotSquare => write!(f, "multiplication table is not square"),
            GroupError::EntryOutOfRange { row, col, entry } => write!(
                f,
                "table entry {} at ({}, {}) is out of range",
                entry, row, col
            ),
            GroupError::NotIdentity { elem } => {
                write!(f, "element 0 is not a two-sided identity (fails at {})", elem)
            }
            GroupError::NoInverse { elem } => write!(f, "element {} has no two-sided inverse", elem),
            GroupError::NonAssociative { a, b, c } => {
                write!(f, "associativity fails on the triple ({}, {}, {})", a, b, c)
            }
            GroupError::BadPermutation { index, reason } => {
                write!(f, "generator {} is not a permutation: {}", index, reason)
            }
            GroupError::ClosureLimit { limit } => {
                write!(f, "generator closure exceeds the size limit {}", limit)
            }
            GroupError::NotASubgroup { reason } => write!(f, "not a subgroup: {}", reason),
            GroupError::BadCharacter { reason } => write!(f, "invalid character: {}", reason),
        }
    }
}

/// A finite group given by a total multiplication table.
///
/// `mul(a, b)` is the product `a*b`; inverses are precomputed at load.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inv: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validate a multiplication table and build the group.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare);
            }
            for (j, &e) in row.iter().enumerate() {
                if e >= n {
                    return Err(GroupError::EntryOutOfRange { row: i, col: j, entry: e });
                }
                flat.push(e as Elem);
            }
        }
        // identity
        for a in 0..n {
            if flat[a] as usize != a || flat[a * n] as usize != a {
                return Err(GroupError::NotIdentity { elem: a });
            }
        }
        // inverses
        let mut inv = vec![Elem::MAX; n];
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if flat[a * n + b] == 0 && flat[b * n + a] == 0 {
                    found = Some(b as Elem);
                    break;
                }
            }
            match found {
                Some(b) => inv[a] = b,
                None => return Err(GroupError::NoInverse { elem: a }),
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b] as usize;
                for c in 0..n {
                    let bc = flat[b * n + c] as usize;
                    if flat[ab * n + c] != flat[a * n + bc] {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        if let Some(ref ls) = labels {
            if ls.len() != n {
                return Err(GroupError::NotSquare);
            }
        }
        Ok(FiniteGroup { order: n, table: flat, inv, labels })
    }

    /// Close a set of permutations of `0..degree` under composition.
    ///
    /// Elements are numbered breadth first from the identity, taking the
    /// generators in the order given, so the numbering is deterministic.
    /// `(p*q)(i) = p(q(i))`.
    pub fn from_permutations(
        gens: &[Vec<usize>],
        degree: usize,
        max_order: usize,
    ) -> Result<Self, GroupError> {
        for (index, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::BadPermutation {
                    index,
                    reason: format!("length {} does not match degree {}", g.len(), degree),
                });
            }
            let mut seen = vec![false; degree];
            for &v in g {
                if v >= degree || seen[v] {
                    return Err(GroupError::BadPermutation {
                        index,
                        reason: "not a bijection".to_string(),
                    });
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            for g in gens {
                // cur * g: apply g first, then cur
                let prod: Vec<usize> = (0..degree).map(|i| cur[g[i]]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= max_order {
                        return Err(GroupError::ClosureLimit { limit: max_order });
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|i| elems[a][elems[b][i]]).collect();
                table[a][b] = *index.get(&prod).expect("closure is complete");
            }
        }
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(&table, Some(labels))
    }

    /// Cyclic group of order `n` (handy for tests and fixtures).
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&table, None).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn conj(&self, g: Elem, a: Elem) -> Elem {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn elem_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(ls) => ls[a as usize].clone(),
            None => format!("{}", a),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x];
            if x == start {
                break;
            }
            out.push(' ');
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A subgroup stored as the strictly increasing list of its elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    elems: Vec<Elem>,
}

impl Subgroup {
    /// Check closure, identity and inverses, then build.
    pub fn new_checked(g: &FiniteGroup, elems: &[Elem]) -> Result<Self, GroupError> {
        let mut sorted: Vec<Elem> = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.binary_search(&0).is_err() {
            return Err(GroupError::NotASubgroup { reason: "missing the identity".to_string() });
        }
        for &a in &sorted {
            if (a as usize) >= g.order() {
                return Err(GroupError::NotASubgroup {
                    reason: format!("element {} out of range", a),
                });
            }
            if sorted.binary_search(&g.inv(a)).is_err() {
                return Err(GroupError::NotASubgroup {
                    reason: format!("not closed under inverse at {}", a),
                });
            }
            for &b in &sorted {
                if sorted.binary_search(&g.mul(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup {
                        reason: format!("not closed under product at ({}, {})", a, b),
                    });
                }
            }
        }
        Ok(Subgroup { elems: sorted })
    }

    pub fn trivial() -> Self {
        Subgroup { elems: vec![0] }
    }

    pub fn full(g: &FiniteGroup) -> Self {
        Subgroup { elems: (0..g.order() as Elem).collect() }
    }

    /// Subgroup generated by `gens` (closure under multiplication).
    pub fn generated(g: &FiniteGroup, gens: &[Elem]) -> Self {
        let mut members = vec![false; g.order()];
        members[0] = true;
        for &x in gens {
            members[x as usize] = true;
        }
        // close under products; inverses come for free in a finite group
        let mut changed = true;
        while changed {
            changed = false;
            let current: Vec<Elem> = (0..g.order() as Elem).filter(|&e| members[e as usize]).collect();
            for &a in &current {
                for &b in &current {
                    let p = g.mul(a, b);
                    if !members[p as usize] {
                        members[p as usize] = true;
                        changed = true;
                    }
                }
            }
        }
        Subgroup {
            elems: (0..g.order() as Elem).filter(|&e| members[e as usize]).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elems.binary_search(&e).is_ok()
    }

    /// Position of `e` in the sorted element list.
    pub fn index_of(&self, e: Elem) -> Option<usize> {
        self.elems.binary_search(&e).ok()
    }

    pub fn conjugate(&self, g: &FiniteGroup, a: Elem) -> Subgroup {
        let mut elems: Vec<Elem> = self.elems.iter().map(|&h| g.conj(a, h)).collect();
        elems.sort_unstable();
        Subgroup { elems }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&e| other.contains(e))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elems: self.elems.iter().copied().filter(|&e| other.contains(e)).collect(),
        }
    }

    /// Join of two subgroups: the subgroup generated by their union.
    pub fn join(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let mut gens: Vec<Elem> = self.elems.clone();
        gens.extend_from_slice(&other.elems);
        Subgroup::generated(g, &gens)
    }
}

/// Normalizer of `h` in `g`: all elements conjugating `h` to itself.
pub fn normalizer(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let elems: Vec<Elem> = (0..g.order() as Elem)
        .filter(|&a| &h.conjugate(g, a) == h)
        .collect();
    Subgroup { elems }
}

/// Whether `h` and `k` are conjugate subgroups of `g`.
pub fn is_conjugate(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> bool {
    if h.order() != k.order() {
        return false;
    }
    (0..g.order() as Elem).any(|a| &h.conjugate(g, a) == k)
}

/// A one-dimensional character of a subgroup, valued in Q/Z.
///
/// `values[i]` is the value at `domain.elems()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    domain: Subgroup,
    values: Vec<QZ>,
}

impl Character {
    pub fn new(domain: Subgroup, values: Vec<QZ>) -> Self {
        assert_eq!(domain.order(), values.len());
        Character { domain, values }
    }

    pub fn trivial(domain: Subgroup) -> Self {
        let n = domain.order();
        Character { domain, values: vec![QZ::zero(); n] }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn values(&self) -> &[QZ] {
        &self.values
    }

    pub fn value_of(&self, e: Elem) -> QZ {
        let i = self.domain.index_of(e).expect("element outside the character domain");
        self.values[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Homomorphism law, value at the identity, and denominators
    /// dividing element orders.
    pub fn check(&self, g: &FiniteGroup) -> Result<(), GroupError> {
        if !self.value_of(0).is_zero() {
            return Err(GroupError::BadCharacter {
                reason: "value at the identity is nonzero".to_string(),
            });
        }
        for &a in self.domain.elems() {
            let ord = g.elem_order(a) as i64;
            let v = self.value_of(a);
            if ord % v.denom() != 0 {
                return Err(GroupError::BadCharacter {
                    reason: format!("value {} at element {} has denominator not dividing its order {}", v, a, ord),
                });
            }
            for &b in self.domain.elems() {
                let lhs = self.value_of(g.mul(a, b));
                let rhs = self.value_of(a).add(self.value_of(b));
                if lhs != rhs {
                    return Err(GroupError::BadCharacter {
                        reason: format!("homomorphism law fails at ({}, {})", a, b),
                    });
                }
            }
        }
        Ok(())
    }

    /// The conjugate character on `a H a^{-1}`, valued `b -> self(a^{-1} b a)`.
    pub fn conjugate(&self, g: &FiniteGroup, a: Elem) -> Character {
        let domain = self.domain.conjugate(g, a);
        let ainv = g.inv(a);
        let values = domain
            .elems()
            .iter()
            .map(|&b| self.value_of(g.conj(ainv, b)))
            .collect();
        Character { domain, values }
    }

    /// Elements where the character vanishes.
    pub fn kernel(&self) -> Subgroup {
        Subgroup {
            elems: self
                .domain
                .elems()
                .iter()
                .copied()
                .filter(|&e| self.value_of(e).is_zero())
                .collect(),
        }
    }

    /// Pointwise sum with another character on the same domain.
    pub fn sum(&self, other: &Character) -> Character {
        assert_eq!(self.domain, other.domain);
        Character {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn restrict(&self, to: &Subgroup) -> Character {
        let values = to.elems().iter().map(|&e| self.value_of(e)).collect();
        Character { domain: to.clone(), values }
    }
}

/// All homomorphisms `h -> Q/Z`, i.e. the characters of the
/// abelianization of `h`, sorted by value vector.
pub fn characters_of(g: &FiniteGroup, h: &Subgroup) -> Vec<Character> {
    // commutator subgroup of h
    let mut comms = Vec::new();
    for &a in h.elems() {
        for &b in h.elems() {
            comms.push(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
        }
    }
    let derived = Subgroup::generated(g, &comms);

    // cosets of the derived subgroup inside h
    let mut coset_of: BTreeMap<Elem, usize> = BTreeMap::new();
    let mut reps: Vec<Elem> = Vec::new();
    for &x in h.elems() {
        if coset_of.contains_key(&x) {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &d in derived.elems() {
            coset_of.insert(g.mul(x, d), id);
        }
    }
    let q = reps.len();
    let qmul = |a: usize, b: usize| -> usize { coset_of[&g.mul(reps[a], reps[b])] };

    // Characters of the abelian quotient, built by extending along a
    // chain of subgroups: each new coset generator g with g^k the first
    // power landing in the span extends every character in k ways.
    let mut span = vec![false; q];
    span[coset_of[&0]] = true;
    let mut span_list = vec![coset_of[&0]];
    // value maps indexed by coset id
    let mut chars: Vec<Vec<Option<QZ>>> = vec![vec![None; q]];
    chars[0][coset_of[&0]] = Some(QZ::zero());

    loop {
        let next = (0..q).find(|&c| !span[c]);
        let gen = match next {
            None => break,
            Some(c) => c,
        };
        // least k >= 1 with gen^k in the current span
        let mut k = 1;
        let mut p = gen;
        while !span[p] {
            p = qmul(p, gen);
            k += 1;
        }
        let powers: Vec<usize> = {
            let mut v = vec![coset_of[&0]];
            let mut x = gen;
            for _ in 1..k {
                v.push(x);
                x = qmul(x, gen);
            }
            v.push(p); // gen^k, inside the span
            v
        };
        let mut new_chars = Vec::with_capacity(chars.len() * k);
        for ch in &chars {
            let anchor = ch[powers[k]].expect("gen^k lies in the span");
            for i in 0..k as i64 {
                // v with k*v = anchor (mod 1)
                let v = QZ::new(anchor.numer() + i * anchor.denom(), anchor.denom() * k as i64);
                let mut ext = ch.clone();
                for &s in &span_list {
                    for (j, &pw) in powers.iter().enumerate().take(k) {
                        let target = qmul(s, pw);
                        let val = ch[s].expect("span is assigned").add(v.scale(j as i64));
                        ext[target] = Some(val);
                    }
                }
                new_chars.push(ext);
            }
        }
        chars = new_chars;
        // grow the span
        let mut new_span_list = Vec::new();
        for &s in &span_list {
            let mut x = s;
            for _ in 0..k {
                if !span[x] {
                    span[x] = true;
                }
                new_span_list.push(x);
                x = qmul(x, gen);
            }
        }
        span_list = new_span_list;
        span_list.sort_unstable();
        span_list.dedup();
    }

    let mut out: Vec<Character> = chars
        .into_iter()
        .map(|ch| {
            let values = h
                .elems()
                .iter()
                .map(|&e| ch[coset_of[&e]].expect("total assignment"))
                .collect();
            Character { domain: h.clone(), values }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Enumerate every subgroup: all cyclic subgroups first, then close the
/// set under pairwise joins until nothing new appears.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut set: alloc::collections::BTreeSet<Subgroup> = alloc::collections::BTreeSet::new();
    set.insert(Subgroup::trivial());
    for a in 0..g.order() as Elem {
        set.insert(Subgroup::generated(g, &[a]));
    }
    loop {
        let snapshot: Vec<Subgroup> = set.iter().cloned().collect();
        let before = set.len();
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                if snapshot[i].is_subset_of(&snapshot[j]) || snapshot[j].is_subset_of(&snapshot[i]) {
                    continue;
                }
                set.insert(snapshot[i].join(g, &snapshot[j]));
            }
        }
        if set.len() == before {
            break;
        }
    }
    let mut out: Vec<Subgroup> = set.into_iter().collect();
    out.sort_by(|a, b| (a.order(), a.elems()).cmp(&(b.order(), b.elems())));
    out
}

/// A conjugacy class of subgroups: the index of the representative
/// (the least member) and the indices of all members.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

/// Precomputed data for one group: every subgroup, conjugacy classes,
/// characters of every subgroup, and the interned classes of the
/// equipped Grothendieck ring.
pub struct GroupContext {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    subgroup_idx: BTreeMap<Vec<Elem>, usize>,
    class_of: Vec<usize>,
    classes: Vec<SubgroupClass>,
    chars: Vec<Vec<Character>>,
    eq_classes: Vec<(usize, usize)>, // (subgroup class, char index on the representative)
    eq_class_of_pair: BTreeMap<(usize, Vec<QZ>), u32>,
    unit: u32,
    full_class: usize,
}

impl GroupContext {
    pub fn new(group: FiniteGroup) -> Self {
        let subgroups = all_subgroups(&group);
        let mut subgroup_idx = BTreeMap::new();
        for (i, s) in subgroups.iter().enumerate() {
            subgroup_idx.insert(s.elems().to_vec(), i);
        }
        // conjugacy classes, representative = least member
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes: Vec<SubgroupClass> = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members = Vec::new();
            for a in 0..group.order() as Elem {
                let c = subgroups[i].conjugate(&group, a);
                let j = subgroup_idx[c.elems()];
                if !members.contains(&j) {
                    members.push(j);
                }
            }
            members.sort_unstable();
            let rep = members[0];
            let id = classes.len();
            for &j in &members {
                class_of[j] = id;
            }
            classes.push(SubgroupClass { rep, members });
        }
        // subgroups are sorted by (order, elems); the first subgroup of a
        // class in that order is its representative, so classes inherit
        // the (order, representative) sort automatically
        debug_assert!(classes
            .windows(2)
            .all(|w| (subgroups[w[0].rep].order(), subgroups[w[0].rep].elems())
                < (subgroups[w[1].rep].order(), subgroups[w[1].rep].elems())));

        let chars: Vec<Vec<Character>> = subgroups
            .iter()
            .map(|h| characters_of(&group, h))
            .collect();

        // equipped classes: orbits of (class representative, character)
        // under conjugation by the normalizer of the representative
        let mut eq_classes = Vec::new();
        let mut head_of: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (cid, class) in classes.iter().enumerate() {
            let rep = &subgroups[class.rep];
            let nrm = normalizer(&group, rep);
            for (j, ch) in chars[class.rep].iter().enumerate() {
                let mut least = ch.values().to_vec();
                for &n in nrm.elems() {
                    let conj = ch.conjugate(&group, n);
                    debug_assert_eq!(conj.domain(), rep);
                    if conj.values() < &least[..] {
                        least = conj.values().to_vec();
                    }
                }
                if least == ch.values() {
                    let id = eq_classes.len() as u32;
                    eq_classes.push((cid, j));
                    head_of.insert((cid, j), id);
                }
            }
        }

        // canonical class of every (subgroup, character) pair
        let mut eq_class_of_pair = BTreeMap::new();
        for (sidx, h) in subgroups.iter().enumerate() {
            let cid = class_of[sidx];
            let rep_idx = classes[cid].rep;
            let rep = &subgroups[rep_idx];
            for ch in &chars[sidx] {
                let mut least: Option<Vec<QZ>> = None;
                for a in 0..group.order() as Elem {
                    if &h.conjugate(&group, a) != rep {
                        continue;
                    }
                    let conj = ch.conjugate(&group, a);
                    let v = conj.values().to_vec();
                    if least.as_ref().map_or(true, |l| &v < l) {
                        least = Some(v);
                    }
                }
                let least = least.expect("some conjugator maps h to its representative");
                let j = chars[rep_idx]
                    .binary_search_by(|c| c.values().cmp(&least[..]))
                    .expect("conjugate of a character is a character");
                let id = head_of[&(cid, j)];
                eq_class_of_pair.insert((sidx, ch.values().to_vec()), id);
            }
        }

        let full_idx = subgroup_idx[&(0..group.order() as Elem).collect::<Vec<_>>()];
        let full_class = class_of[full_idx];
        let unit_pair = (full_class, 0usize);
        let unit = head_of[&unit_pair];

        GroupContext {
            group,
            subgroups,
            subgroup_idx,
            class_of,
            classes,
            chars,
            eq_classes,
            eq_class_of_pair,
            unit,
            full_class,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, idx: usize) -> &Subgroup {
        &self.subgroups[idx]
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> Option<usize> {
        self.subgroup_idx.get(h.elems()).copied()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_of_subgroup(&self, idx: usize) -> usize {
        self.class_of[idx]
    }

    /// Conjugacy classes with members expanded, for reporting.
    pub fn subgroup_conjugacy_classes(&self) -> Vec<(Subgroup, Vec<Subgroup>)> {
        self.classes
            .iter()
            .map(|c| {
                (
                    self.subgroups[c.rep].clone(),
                    c.members.iter().map(|&m| self.subgroups[m].clone()).collect(),
                )
            })
            .collect()
    }

    /// Characters of a subgroup, in the deterministic sorted order.
    pub fn characters(&self, subgroup_idx: usize) -> &[Character] {
        &self.chars[subgroup_idx]
    }

    pub fn class_representative(&self, class: usize) -> &Subgroup {
        &self.subgroups[self.classes[class].rep]
    }

    /// Number of interned equipped classes.
    pub fn eq_class_count(&self) -> usize {
        self.eq_classes.len()
    }

    /// The (subgroup class, character index) behind an equipped class id.
    pub fn eq_class_data(&self, id: u32) -> (usize, &Character) {
        let (cid, j) = self.eq_classes[id as usize];
        (cid, &self.chars[self.classes[cid].rep][j])
    }

    pub fn eq_class_char_index(&self, id: u32) -> (usize, usize) {
        self.eq_classes[id as usize]
    }

    /// Class id of the unit (the one-point set with trivial character).
    pub fn unit_class(&self) -> u32 {
        self.unit
    }

    pub fn full_subgroup_class(&self) -> usize {
        self.full_class
    }

    pub fn trivial_subgroup_class(&self) -> usize {
        self.class_of[self.subgroup_idx[&vec![0 as Elem]]]
    }

    /// Canonical equipped class of an (isotropy subgroup, character) pair.
    ///
    /// The pair need not be in canonical position; any conjugate maps to
    /// the same id.
    pub fn eq_class_of(&self, h: &Subgroup, values: &[QZ]) -> Option<u32> {
        let sidx = self.subgroup_index(h)?;
        self.eq_class_of_pair.get(&(sidx, values.to_vec())).copied()
    }

    /// Canonical form of a pair: the lexicographically least simultaneous
    /// conjugate `(g H g^{-1}, g . alpha)` over all `g`.
    pub fn canonical_pair(&self, h: &Subgroup, alpha: &Character) -> (Subgroup, Character) {
        let id = self
            .eq_class_of(h, alpha.values())
            .expect("valid subgroup and character");
        let (cid, ch) = self.eq_class_data(id);
        (self.class_representative(cid).clone(), ch.clone())
    }
}
