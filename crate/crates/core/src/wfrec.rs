//! Well-founded recursion over finite relations.
//!
//! `wfrec(r, a, H)` computes `F(a)` where `F(x) = H(x, F↾pred_r(x))`. The functional only ever
//! sees the restriction of `F` to the `r`-predecessors of its argument; reading outside that
//! domain is an error.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::hfset::{HRelation, HSet};
use crate::{Error, Result};

/// `F↾pred_r(a)`: the recursive values at the predecessors of the current argument.
#[derive(Debug, Default)]
pub struct Predecessors {
    values: HashMap<HSet, HSet>,
}

impl Predecessors {
    pub fn get(&self, x: &HSet) -> Result<&HSet> {
        self.values
            .get(x)
            .ok_or_else(|| Error::UndefinedPredecessor(x.to_string()))
    }

    pub fn contains(&self, x: &HSet) -> bool {
        self.values.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Predecessors with their values, in canonical order of the predecessor.
    pub fn entries(&self) -> Vec<(&HSet, &HSet)> {
        let mut v: Vec<_> = self.values.iter().collect();
        v.sort();
        v
    }
}

/// The `H` of a recursive definition.
pub trait Functional {
    fn apply(&self, a: &HSet, below: &Predecessors) -> Result<HSet>;
}

impl<F> Functional for F
where
    F: Fn(&HSet, &Predecessors) -> Result<HSet>,
{
    fn apply(&self, a: &HSet, below: &Predecessors) -> Result<HSet> {
        self(a, below)
    }
}

fn successor_index(r: &HRelation) -> HashMap<&HSet, Vec<&HSet>> {
    let mut succ: HashMap<&HSet, Vec<&HSet>> = HashMap::new();
    for (x, y) in r.iter() {
        succ.entry(x).or_default().push(y);
    }
    succ
}

fn predecessor_index(r: &HRelation) -> HashMap<&HSet, Vec<&HSet>> {
    let mut pred: HashMap<&HSet, Vec<&HSet>> = HashMap::new();
    for (x, y) in r.iter() {
        pred.entry(y).or_default().push(x);
    }
    pred
}

/// Transitive closure `r⁺`.
pub fn trancl(r: &HRelation) -> HRelation {
    let succ = successor_index(r);
    let mut out = HRelation::new();
    for start in succ.keys() {
        let mut seen: HashSet<&HSet> = HashSet::new();
        let mut stack: Vec<&HSet> = succ[start].clone();
        while let Some(y) = stack.pop() {
            if seen.insert(y) {
                out.insert((*start).clone(), y.clone());
                if let Some(next) = succ.get(y) {
                    stack.extend(next.iter().copied());
                }
            }
        }
    }
    out
}

/// Finite well-foundedness: the relation has no cycle.
pub fn is_wf(r: &HRelation) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let succ = successor_index(r);
    let mut marks: HashMap<&HSet, Mark> = HashMap::new();
    for &root in succ.keys() {
        if marks.contains_key(root) {
            continue;
        }
        // Iterative DFS; the frame holds the node and the next successor to visit.
        let mut stack: Vec<(&HSet, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some((node, next)) = stack.pop() {
            let children = succ.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if next < children.len() {
                stack.push((node, next + 1));
                let child = children[next];
                match marks.get(child) {
                    Some(Mark::Active) => return false,
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
            }
        }
    }
    true
}

/// `{(x, y) ∈ A×A : ⟨x, p⟩ ∈ y for some p}`
pub fn edrel(a: &HSet) -> HRelation {
    let members: HashSet<&HSet> = a.iter().collect();
    let mut out = HRelation::new();
    for y in a.iter() {
        for e in y.iter() {
            if let Some((x, _)) = e.as_pair() {
                if members.contains(&x) {
                    out.insert(x, y.clone());
                }
            }
        }
    }
    out
}

/// `F(a)` for the function defined by well-founded recursion on `r` with functional `h`.
pub fn wfrec(r: &HRelation, a: &HSet, h: &dyn Functional) -> Result<HSet> {
    if !is_wf(r) {
        return Err(Error::NotWellFounded);
    }
    let pred = predecessor_index(r);
    let mut memo: HashMap<HSet, HSet> = HashMap::new();
    eval(&pred, a, h, &mut memo)
}

fn eval(
    pred: &HashMap<&HSet, Vec<&HSet>>,
    a: &HSet,
    h: &dyn Functional,
    memo: &mut HashMap<HSet, HSet>,
) -> Result<HSet> {
    if let Some(v) = memo.get(a) {
        return Ok(v.clone());
    }
    let mut below = Predecessors::default();
    for &x in pred.get(a).map(Vec::as_slice).unwrap_or(&[]) {
        let v = eval(pred, x, h, memo)?;
        below.values.insert(x.clone(), v);
    }
    let v = h.apply(a, &below)?;
    memo.insert(a.clone(), v.clone());
    Ok(v)
}

/// `F` on every listed argument, sharing one memo table across them.
pub fn wfrec_all<'a>(
    r: &HRelation,
    args: impl IntoIterator<Item = &'a HSet>,
    h: &dyn Functional,
) -> Result<HashMap<HSet, HSet>> {
    if !is_wf(r) {
        return Err(Error::NotWellFounded);
    }
    let pred = predecessor_index(r);
    let mut memo: HashMap<HSet, HSet> = HashMap::new();
    for a in args {
        eval(&pred, a, h, &mut memo)?;
    }
    Ok(memo)
}

/// `{x : (x, a) ∈ r⁺}`
pub fn trancl_predecessors(r: &HRelation, a: &HSet) -> BTreeSet<HSet> {
    let pred = predecessor_index(r);
    let mut seen: BTreeSet<HSet> = BTreeSet::new();
    let mut stack: Vec<&HSet> = pred.get(a).cloned().unwrap_or_default();
    while let Some(x) = stack.pop() {
        if seen.insert(x.clone()) {
            if let Some(more) = pred.get(x) {
                stack.extend(more.iter().copied());
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfset::{eclose, opair, v_stage};

    fn n(k: usize) -> HSet {
        HSet::nat(k)
    }

    fn rel(pairs: &[(usize, usize)]) -> HRelation {
        pairs.iter().map(|&(x, y)| (n(x), n(y))).collect()
    }

    #[test]
    fn trancl_examples() {
        assert_eq!(
            trancl(&rel(&[(0, 1), (1, 2)])),
            rel(&[(0, 1), (1, 2), (0, 2)])
        );
        assert!(trancl(&HRelation::new()).is_empty());
        assert_eq!(trancl(&rel(&[(0, 0)])), rel(&[(0, 0)]));
    }

    #[test]
    fn wf_examples() {
        assert!(is_wf(&rel(&[(0, 1)])));
        assert!(!is_wf(&rel(&[(0, 0)])));
        assert!(!is_wf(&rel(&[(0, 1), (1, 2), (2, 0)])));
        assert!(is_wf(&rel(&[(0, 1), (1, 2), (0, 2)])));
        assert!(is_wf(&HRelation::new()));
    }

    #[test]
    fn edrel_examples() {
        let q = n(1);
        let tau = HSet::singleton(opair(&HSet::empty(), &q));
        let r = edrel(&eclose(&HSet::singleton(tau.clone())));
        assert!(r.contains(&HSet::empty(), &tau));
        assert!(edrel(&HSet::singleton(HSet::empty())).is_empty());
    }

    #[test]
    fn edrel_of_v4_closures_is_well_founded() {
        for tau in v_stage(4).unwrap() {
            assert!(is_wf(&edrel(&eclose(&HSet::singleton(tau)))));
        }
    }

    #[test]
    fn constant_functional() {
        let r = rel(&[(0, 1), (1, 2)]);
        let h = |_: &HSet, _: &Predecessors| Ok(HSet::empty());
        assert_eq!(wfrec(&r, &n(2), &h).unwrap(), HSet::empty());
    }

    #[test]
    fn rank_by_recursion() {
        // F(x) = sup of successors of the values below: the height in the relation as an ordinal.
        let r = rel(&[(0, 1), (1, 2), (0, 3), (3, 4), (2, 4)]);
        let h =
            |_: &HSet, below: &Predecessors| {
                Ok(below.entries().into_iter().map(|(_, v)| v.succ()).fold(
                    HSet::empty(),
                    |acc, v| if v.len() > acc.len() { v } else { acc },
                ))
            };
        assert_eq!(wfrec(&r, &n(4), &h).unwrap(), n(3));
    }

    #[test]
    fn wfrec_errors() {
        let h = |_: &HSet, _: &Predecessors| Ok(HSet::empty());
        assert_eq!(
            wfrec(&rel(&[(0, 1), (1, 0)]), &n(0), &h),
            Err(Error::NotWellFounded)
        );
        let peek = |_: &HSet, below: &Predecessors| below.get(&n(7)).cloned();
        assert!(matches!(
            wfrec(&rel(&[(0, 1)]), &n(1), &peek),
            Err(Error::UndefinedPredecessor(_))
        ));
    }

    #[test]
    fn trancl_predecessor_set() {
        let r = rel(&[(0, 1), (1, 2), (3, 2), (4, 5)]);
        let got: Vec<HSet> = trancl_predecessors(&r, &n(2)).into_iter().collect();
        assert_eq!(got, vec![n(0), n(1), n(3)]);
    }
}
