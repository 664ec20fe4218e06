//! Finite forcing notions and their filters.
//!
//! Conditions are addressed by their index in [`ForcingNotion::elements`]; subsets of conditions
//! are bit masks ([`CondSet`]), so a notion holds at most 64 conditions. The order is a partial
//! order with a top element; `p ≤ q` reads "p is stronger than q".
//!
//! Over a finite poset every dense set contains every minimal condition, so the generic filters
//! are exactly the upward closures of the minimal conditions. [`ForcingNotion::generic_filters`]
//! uses that characterization; [`ForcingNotion::is_generic`] checks genericity the long way, by
//! scanning every subset of the poset.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::hfset::{opair, HSet};
use crate::{Caps, Error, Result};

/// A set of conditions as a bit mask over condition indices.
pub type CondSet = u64;

pub fn cond_iter(set: CondSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set & (1u64 << i) != 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingNotion {
    elements: Vec<HSet>,
    index: HashMap<HSet, usize>,
    /// `le[p]` is the down-set of `p`: bit `q` set iff `q ≤ p`.
    below: Vec<CondSet>,
    /// `above[p]`: bit `q` set iff `p ≤ q`.
    above: Vec<CondSet>,
    top: usize,
    minimal: Vec<usize>,
}

impl ForcingNotion {
    /// Validates `⟨P, ≤, 𝟙⟩` given as elements, pairs `(p, q)` meaning `p ≤ q`, and a top.
    pub fn validate(
        elements: Vec<HSet>,
        le: &[(HSet, HSet)],
        top: &HSet,
        auto_reflexive: bool,
    ) -> Result<ForcingNotion> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidPoset("no conditions".into()));
        }
        if n > 64 {
            return Err(Error::InvalidPoset(format!(
                "{n} conditions, at most 64 supported"
            )));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate condition {e}")));
            }
        }
        let lookup = |x: &HSet| {
            index
                .get(x)
                .copied()
                .ok_or_else(|| Error::InvalidPoset(format!("{x} is not a condition")))
        };
        let mut below = vec![0u64; n];
        for (p, q) in le {
            let (p, q) = (lookup(p)?, lookup(q)?);
            below[q] |= 1 << p;
        }
        for (p, b) in below.iter_mut().enumerate() {
            if *b & (1 << p) == 0 {
                if auto_reflexive {
                    *b |= 1 << p;
                } else {
                    return Err(Error::NotReflexive(elements[p].to_string()));
                }
            }
        }
        for q in 0..n {
            for p in cond_iter(below[q]) {
                // r ≤ p ≤ q ⇒ r ≤ q
                let missing = below[p] & !below[q];
                if missing != 0 {
                    let r = missing.trailing_zeros() as usize;
                    return Err(Error::NotTransitive(format!(
                        "{} ≤ {} ≤ {} but not {} ≤ {}",
                        elements[r], elements[p], elements[q], elements[r], elements[q]
                    )));
                }
            }
        }
        for q in 0..n {
            for p in cond_iter(below[q]) {
                if p != q && below[p] & (1 << q) != 0 {
                    return Err(Error::NotAntisymmetric(format!(
                        "{} and {}",
                        elements[p], elements[q]
                    )));
                }
            }
        }
        let top = index
            .get(top)
            .copied()
            .ok_or_else(|| Error::NoTop(format!("{top} is not a condition")))?;
        let all = full_set(n);
        if below[top] != all {
            return Err(Error::NoTop(format!(
                "not every condition is below {}",
                elements[top]
            )));
        }
        let mut above = vec![0u64; n];
        for q in 0..n {
            for p in cond_iter(below[q]) {
                above[p] |= 1 << q;
            }
        }
        let minimal = (0..n).filter(|&p| below[p] == 1 << p).collect();
        Ok(ForcingNotion {
            elements,
            index,
            below,
            above,
            top,
            minimal,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HSet] {
        &self.elements
    }

    pub fn element(&self, p: usize) -> &HSet {
        &self.elements[p]
    }

    pub fn index_of(&self, x: &HSet) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn top_element(&self) -> &HSet {
        &self.elements[self.top]
    }

    /// `p ≤ q`
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.below[q] & (1 << p) != 0
    }

    /// `p ≤ q` on condition values; false when either is not a condition.
    pub fn le_sets(&self, p: &HSet, q: &HSet) -> bool {
        match (self.index_of(p), self.index_of(q)) {
            (Some(p), Some(q)) => self.le(p, q),
            _ => false,
        }
    }

    pub fn down(&self, p: usize) -> CondSet {
        self.below[p]
    }

    pub fn up(&self, p: usize) -> CondSet {
        self.above[p]
    }

    pub fn minimal(&self) -> &[usize] {
        &self.minimal
    }

    pub fn full(&self) -> CondSet {
        full_set(self.len())
    }

    /// `P` as a set.
    pub fn carrier(&self) -> HSet {
        HSet::new(self.elements.iter().cloned())
    }

    /// `≤` as a set of Kuratowski pairs.
    pub fn order_set(&self) -> HSet {
        HSet::new(
            (0..self.len())
                .flat_map(|q| cond_iter(self.below[q]).map(move |p| (p, q)))
                .map(|(p, q)| opair(&self.elements[p], &self.elements[q])),
        )
    }

    /// Conditions of a mask as a set.
    pub fn subset_hset(&self, set: CondSet) -> HSet {
        HSet::new(cond_iter(set).map(|p| self.elements[p].clone()))
    }

    pub fn is_dense(&self, d: CondSet) -> bool {
        (0..self.len()).all(|p| self.below[p] & d != 0)
    }

    /// `d` is dense below `p`: every `q ≤ p` has an extension in `d`.
    pub fn dense_below(&self, d: CondSet, p: usize) -> bool {
        cond_iter(self.below[p]).all(|q| self.below[q] & d != 0)
    }

    /// Nonempty, upward closed and downward directed.
    pub fn is_filter(&self, set: CondSet) -> bool {
        if set == 0 || set & !self.full() != 0 {
            return false;
        }
        let upward = cond_iter(set).all(|p| self.above[p] & !set == 0);
        let directed = cond_iter(set)
            .all(|p| cond_iter(set).all(|q| self.below[p] & self.below[q] & set != 0));
        upward && directed
    }

    /// Upward closures of the minimal conditions, ordered by condition index.
    pub fn generic_filters(&self) -> Vec<GFilter> {
        self.minimal
            .iter()
            .map(|&m| GFilter {
                members: self.above[m],
                certificate: Certificate::MinimalUpset(m),
            })
            .collect()
    }

    /// Every dense subset, found by scanning all `2^|P|` subsets.
    pub fn dense_sets(&self, caps: &Caps) -> Result<Vec<CondSet>> {
        self.check_scan_cap(caps)?;
        Ok((0..=self.full()).filter(|&d| self.is_dense(d)).collect())
    }

    /// Every filter, found by scanning all `2^|P|` subsets.
    pub fn all_filters(&self, caps: &Caps) -> Result<Vec<CondSet>> {
        self.check_scan_cap(caps)?;
        Ok((1..=self.full()).filter(|&s| self.is_filter(s)).collect())
    }

    fn check_scan_cap(&self, caps: &Caps) -> Result<()> {
        if self.len() > caps.generic_scan_cap {
            return Err(Error::PosetTooLarge {
                size: self.len(),
                cap: caps.generic_scan_cap,
            });
        }
        Ok(())
    }

    /// True iff `members` meets every dense subset of the poset.
    pub fn is_generic(&self, members: CondSet, caps: &Caps) -> Result<bool> {
        self.check_scan_cap(caps)?;
        Ok((0..=self.full()).all(|d| !self.is_dense(d) || d & members != 0))
    }

    /// Builds a filter through `p` meeting each set of `family`, by descending one step per set.
    ///
    /// Each step picks, among the members of the set below the current condition, one that is
    /// minimal among those candidates, breaking ties by the least index. The family may be any
    /// iterator; sets are consumed as they are needed.
    pub fn rasiowa_sikorski(
        &self,
        family: impl IntoIterator<Item = CondSet>,
        p: usize,
    ) -> Result<GFilter> {
        if p >= self.len() {
            return Err(Error::InvalidPoset(format!("no condition with index {p}")));
        }
        let mut chain = vec![p];
        let mut current = p;
        for (i, d) in family.into_iter().enumerate() {
            if !self.is_dense(d) {
                return Err(Error::DensityViolated(i));
            }
            let candidates = d & self.below[current];
            let next = cond_iter(candidates)
                .find(|&q| self.below[q] & candidates == 1 << q)
                .ok_or(Error::DensityViolated(i))?;
            chain.push(next);
            current = next;
        }
        Ok(GFilter {
            members: self.above[current],
            certificate: Certificate::Chain(chain),
        })
    }
}

fn full_set(n: usize) -> CondSet {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Why a filter is the filter it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The upward closure of this minimal condition.
    MinimalUpset(usize),
    /// The upward closure of this descending chain of conditions.
    Chain(Vec<usize>),
    /// Found by scanning every subset for filters that meet every dense set.
    Scanned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFilter {
    pub members: CondSet,
    pub certificate: Certificate,
}

impl GFilter {
    pub fn contains(&self, p: usize) -> bool {
        self.members & (1 << p) != 0
    }

    pub fn conditions(&self) -> impl Iterator<Item = usize> {
        cond_iter(self.members)
    }

    /// The filter as a set of conditions.
    pub fn to_hset(&self, notion: &ForcingNotion) -> HSet {
        notion.subset_hset(self.members)
    }
}

/// JSON form of a poset: `{"elements":[0,1,2], "le":[[0,2],…], "top":2}`.
///
/// Numbers denote von Neumann naturals; nested arrays denote arbitrary sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<serde_json::Value>,
    pub le: Vec<[serde_json::Value; 2]>,
    pub top: serde_json::Value,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub auto_reflexive: bool,
}

/// A condition label: a number for naturals, nested arrays otherwise.
pub fn label(x: &HSet) -> serde_json::Value {
    match x.as_nat() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::to_value(x).expect("sets serialize"),
    }
}

fn from_label(v: &serde_json::Value) -> Result<HSet> {
    serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidPoset(format!("bad condition {v}: {e}")))
}

impl PosetSpec {
    pub fn build(&self) -> Result<ForcingNotion> {
        let elements = self
            .elements
            .iter()
            .map(from_label)
            .collect::<Result<Vec<_>>>()?;
        let le = self
            .le
            .iter()
            .map(|[p, q]| Ok((from_label(p)?, from_label(q)?)))
            .collect::<Result<Vec<_>>>()?;
        ForcingNotion::validate(elements, &le, &from_label(&self.top)?, self.auto_reflexive)
    }
}

impl From<&ForcingNotion> for PosetSpec {
    fn from(n: &ForcingNotion) -> Self {
        let le = (0..n.len())
            .flat_map(|q| cond_iter(n.down(q)).map(move |p| (p, q)))
            .map(|(p, q)| [label(n.element(p)), label(n.element(q))])
            .collect();
        PosetSpec {
            elements: n.elements().iter().map(label).collect(),
            le,
            top: label(n.top_element()),
            auto_reflexive: false,
        }
    }
}
