//! Hereditarily finite sets in canonical form.
//!
//! An [`HSet`] stores its elements sorted by a fixed total order (rank first, then recursive
//! lexicographic comparison of the canonical element sequences) with duplicates removed, so structural equality
//! of the representation is extensional equality of the sets. Nodes are reference counted and
//! carry their rank and a structural hash, which makes cloning cheap and lets equality bail out
//! early on differing hashes.
//!
//! Ordered pairs are Kuratowski pairs `{{x},{x,y}}` and naturals are von Neumann ordinals.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::{Caps, Error, Result};

struct Node {
    elems: Box<[HSet]>,
    rank: u32,
    hash: u64,
}

/// A canonical hereditarily finite set.
#[derive(Clone)]
pub struct HSet(Arc<Node>);

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl HSet {
    /// Builds a set from an arbitrary collection of elements, sorting and deduplicating.
    pub fn new(elems: impl IntoIterator<Item = HSet>) -> HSet {
        let mut v: Vec<HSet> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        HSet::from_sorted(v)
    }

    /// Builds a set from elements already in canonical order without duplicates.
    fn from_sorted(v: Vec<HSet>) -> HSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        let rank = v.iter().map(|e| e.rank() + 1).max().unwrap_or(0);
        let mut hash = 0x2545_f491_4f6c_dd1d_u64 ^ (v.len() as u64);
        for e in &v {
            hash = mix(hash.rotate_left(5) ^ e.0.hash);
        }
        HSet(Arc::new(Node {
            elems: v.into_boxed_slice(),
            rank,
            hash,
        }))
    }

    pub fn empty() -> HSet {
        HSet::from_sorted(Vec::new())
    }

    /// `{x}`
    pub fn singleton(x: HSet) -> HSet {
        HSet::from_sorted(vec![x])
    }

    /// `{x, y}`
    pub fn upair(x: HSet, y: HSet) -> HSet {
        match x.cmp(&y) {
            Ordering::Less => HSet::from_sorted(vec![x, y]),
            Ordering::Greater => HSet::from_sorted(vec![y, x]),
            Ordering::Equal => HSet::singleton(x),
        }
    }

    /// The von Neumann natural `n = {0, …, n-1}`.
    pub fn nat(n: usize) -> HSet {
        let mut cur = HSet::empty();
        let mut elems = Vec::with_capacity(n);
        for _ in 0..n {
            elems.push(cur.clone());
            cur = HSet::from_sorted(elems.clone());
        }
        cur
    }

    /// Inverse of [`HSet::nat`].
    pub fn as_nat(&self) -> Option<usize> {
        let n = self.len();
        if *self == HSet::nat(n) {
            Some(n)
        } else {
            None
        }
    }

    pub fn elements(&self) -> &[HSet] {
        &self.0.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HSet> {
        self.0.elems.iter()
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    /// Least `k` with `self ∈ V_{k+1}`.
    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// `x ∈ self`
    pub fn contains(&self, x: &HSet) -> bool {
        if x.rank() >= self.rank() {
            return false;
        }
        self.0.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HSet) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &HSet) -> HSet {
        HSet::new(self.iter().chain(other.iter()).cloned())
    }

    /// `⋃ self`
    pub fn big_union(&self) -> HSet {
        HSet::new(self.iter().flat_map(|x| x.iter().cloned()))
    }

    pub fn insert(&self, x: HSet) -> HSet {
        if self.contains(&x) {
            return self.clone();
        }
        HSet::new(self.iter().cloned().chain(std::iter::once(x)))
    }

    /// `self ∪ {self}`
    pub fn succ(&self) -> HSet {
        self.insert(self.clone())
    }

    /// Splits a Kuratowski pair into its components.
    pub fn as_pair(&self) -> Option<(HSet, HSet)> {
        match self.elements() {
            [single] => {
                // {{x}} = <x,x>
                match single.elements() {
                    [x] => Some((x.clone(), x.clone())),
                    _ => None,
                }
            }
            [a, b] => {
                let (small, big) = if a.len() == 1 { (a, b) } else { (b, a) };
                let [x] = small.elements() else { return None };
                let [u, v] = big.elements() else { return None };
                if u == x {
                    Some((x.clone(), v.clone()))
                } else if v == x {
                    Some((x.clone(), u.clone()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_pair(&self) -> bool {
        self.as_pair().is_some()
    }
}

impl PartialEq for HSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.rank == other.0.rank
                && self.0.elems == other.0.elems)
    }
}

impl Eq for HSet {}

impl Ord for HSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .rank
            .cmp(&other.0.rank)
            .then_with(|| self.0.elems.iter().cmp(other.0.elems.iter()))
    }
}

impl PartialOrd for HSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for HSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Default for HSet {
    fn default() -> Self {
        HSet::empty()
    }
}

impl fmt::Debug for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Prints naturals as numbers and everything else in braces.
impl fmt::Display for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_nat() {
            return write!(f, "{n}");
        }
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a HSet {
    type Item = &'a HSet;
    type IntoIter = std::slice::Iter<'a, HSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

impl FromIterator<HSet> for HSet {
    fn from_iter<I: IntoIterator<Item = HSet>>(iter: I) -> Self {
        HSet::new(iter)
    }
}

/// Raw nested-list input, possibly with duplicates and in any order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawSet(pub Vec<RawSet>);

/// Canonicalizes a raw nested list.
pub fn canon(raw: &RawSet) -> HSet {
    HSet::new(raw.0.iter().map(canon))
}

impl From<&HSet> for RawSet {
    fn from(x: &HSet) -> Self {
        RawSet(x.iter().map(RawSet::from).collect())
    }
}

impl Serialize for HSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for e in self.iter() {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for HSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SetVisitor;

        impl<'de> Visitor<'de> for SetVisitor {
            type Value = HSet;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nested array")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<HSet, A::Error> {
                let mut v = Vec::new();
                while let Some(e) = seq.next_element::<HSet>()? {
                    v.push(e);
                }
                Ok(HSet::new(v))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<HSet, E> {
                // Convenience: a bare number denotes a von Neumann natural.
                if n > 64 {
                    return Err(E::custom("natural literal too large"));
                }
                Ok(HSet::nat(n as usize))
            }
        }

        deserializer.deserialize_any(SetVisitor)
    }
}

/// `membership x ∈ y`.
pub fn mem(x: &HSet, y: &HSet) -> bool {
    y.contains(x)
}

pub fn rank(x: &HSet) -> u32 {
    x.rank()
}

/// Sizes of `V_0, V_1, …` up to `k`, or `None` past what fits in `u64`.
fn stage_size(k: usize) -> Option<u64> {
    let mut size: u64 = 0;
    for _ in 0..k {
        if size >= 63 {
            return None;
        }
        size = 1u64 << size;
    }
    Some(size)
}

/// All sets of rank `< k`, in canonical order, using the default caps.
pub fn v_stage(k: usize) -> Result<Vec<HSet>> {
    v_stage_with(k, &Caps::default())
}

/// All sets of rank `< k`, in canonical order.
pub fn v_stage_with(k: usize, caps: &Caps) -> Result<Vec<HSet>> {
    if k > caps.max_stage {
        return Err(Error::StageTooLarge {
            stage: k,
            cap: caps.max_stage,
        });
    }
    match stage_size(k) {
        Some(n) if n <= caps.element_cap as u64 => {}
        _ => {
            return Err(Error::StageTooLarge {
                stage: k,
                cap: caps.element_cap,
            })
        }
    }
    let mut stage: Vec<HSet> = Vec::new();
    for _ in 0..k {
        stage = powerset_of_sorted(&stage);
    }
    Ok(stage)
}

/// Every subset of a canonically sorted, duplicate-free slice, in canonical order.
fn powerset_of_sorted(base: &[HSet]) -> Vec<HSet> {
    let n = base.len();
    assert!(n < usize::BITS as usize);
    let mut out: Vec<HSet> = (0..1usize << n)
        .map(|mask| {
            HSet::from_sorted(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| base[i].clone())
                    .collect(),
            )
        })
        .collect();
    out.sort();
    out
}

/// The power set of a finite set.
pub fn powerset(x: &HSet) -> HSet {
    HSet::from_sorted(powerset_of_sorted(x.elements()))
}

/// The smallest transitive set containing every element of `x`.
pub fn eclose(x: &HSet) -> HSet {
    let mut seen: HashSet<HSet> = HashSet::new();
    let mut stack: Vec<HSet> = x.iter().cloned().collect();
    while let Some(y) = stack.pop() {
        if seen.insert(y.clone()) {
            stack.extend(y.iter().cloned());
        }
    }
    HSet::new(seen)
}

/// `⟨x, y⟩ = {{x}, {x, y}}`
pub fn opair(x: &HSet, y: &HSet) -> HSet {
    HSet::upair(
        HSet::singleton(x.clone()),
        HSet::upair(x.clone(), y.clone()),
    )
}

pub fn fst(p: &HSet) -> Result<HSet> {
    p.as_pair().map(|(x, _)| x).ok_or(Error::NotAPair)
}

pub fn snd(p: &HSet) -> Result<HSet> {
    p.as_pair().map(|(_, y)| y).ok_or(Error::NotAPair)
}

/// First components of the pairs in `r`; non-pair elements are ignored.
pub fn domain(r: &HSet) -> HSet {
    HSet::new(r.iter().filter_map(|p| p.as_pair().map(|(x, _)| x)))
}

pub fn range(r: &HSet) -> HSet {
    HSet::new(r.iter().filter_map(|p| p.as_pair().map(|(_, y)| y)))
}

pub fn cartprod(a: &HSet, b: &HSet) -> HSet {
    HSet::new(a.iter().flat_map(|x| b.iter().map(move |y| opair(x, y))))
}

/// True iff every element of every member of `a` is again a member.
pub fn is_transitive<'a>(a: impl IntoIterator<Item = &'a HSet>) -> bool {
    let members: HashSet<&HSet> = a.into_iter().collect();
    members
        .iter()
        .all(|x| x.iter().all(|y| members.contains(y)))
}

/// [`is_transitive`] on the elements of a set.
pub fn is_transitive_set(a: &HSet) -> bool {
    a.iter().all(|x| x.is_subset(a))
}

/// A finite binary relation on sets, stored as native pairs.
///
/// Iteration order is unspecified; use [`HRelation::sorted`] where order matters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HRelation {
    pairs: HashSet<(HSet, HSet)>,
}

impl HRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: HSet, y: HSet) -> bool {
        self.pairs.insert((x, y))
    }

    pub fn contains(&self, x: &HSet, y: &HSet) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(HSet, HSet)> {
        self.pairs.iter()
    }

    /// The pairs in canonical order.
    pub fn sorted(&self) -> Vec<(HSet, HSet)> {
        let mut v: Vec<_> = self.pairs.iter().cloned().collect();
        v.sort();
        v
    }

    /// Every set occurring on either side of a pair.
    pub fn field(&self) -> BTreeSet<HSet> {
        self.pairs
            .iter()
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect()
    }

    /// `{x : (x, a) ∈ r}`
    pub fn predecessors<'a>(&'a self, a: &'a HSet) -> impl Iterator<Item = &'a HSet> + 'a {
        self.pairs
            .iter()
            .filter(move |(_, y)| y == a)
            .map(|(x, _)| x)
    }

    /// `r ∩ A×A`
    pub fn restrict(&self, a: &BTreeSet<HSet>) -> HRelation {
        self.pairs
            .iter()
            .filter(|(x, y)| a.contains(x) && a.contains(y))
            .cloned()
            .collect()
    }

    /// The relation as a set of Kuratowski pairs.
    pub fn to_hset(&self) -> HSet {
        HSet::new(self.pairs.iter().map(|(x, y)| opair(x, y)))
    }

    /// Reads back a set of Kuratowski pairs.
    pub fn from_hset(r: &HSet) -> Result<HRelation> {
        r.iter()
            .map(|p| p.as_pair().ok_or(Error::NotAPair))
            .collect()
    }
}

impl FromIterator<(HSet, HSet)> for HRelation {
    fn from_iter<I: IntoIterator<Item = (HSet, HSet)>>(iter: I) -> Self {
        HRelation {
            pairs: iter.into_iter().collect(),
        }
    }
}
