//! Named forcing notions on von Neumann naturals.

use crate::forcing::ForcingNotion;
use crate::hfset::HSet;
use crate::{Error, Result};

fn build(n: usize, le: impl IntoIterator<Item = (usize, usize)>, top: usize) -> ForcingNotion {
    let elements = (0..n).map(HSet::nat).collect();
    let pairs: Vec<(HSet, HSet)> = le
        .into_iter()
        .map(|(p, q)| (HSet::nat(p), HSet::nat(q)))
        .collect();
    ForcingNotion::validate(elements, &pairs, &HSet::nat(top), true).expect("preset is a poset")
}

/// `{𝟙}`
pub fn one_point() -> ForcingNotion {
    chain(1)
}

/// `0 ≤ 1 ≤ … ≤ n-1`, top `n-1`.
pub fn chain(n: usize) -> ForcingNotion {
    assert!(n > 0);
    build(n, (0..n).flat_map(|p| (p..n).map(move |q| (p, q))), n - 1)
}

/// `n` pairwise incompatible conditions below a top `n`.
pub fn antichain_with_top(n: usize) -> ForcingNotion {
    build(n + 1, (0..n).map(|p| (p, n)), n)
}

/// Two incompatible conditions `0, 1` below `2`.
pub fn v_shape() -> ForcingNotion {
    antichain_with_top(2)
}

/// `0 ≤ 1, 2 ≤ 3` with `1` and `2` incomparable.
pub fn diamond() -> ForcingNotion {
    build(4, [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)], 3)
}

/// Two incompatible branches under the top: `0 ≤ 1 ≤ 4`, `2 ≤ 3 ≤ 4`.
pub fn fork() -> ForcingNotion {
    build(5, [(0, 1), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)], 4)
}

/// Looks up `one-point`, `v-shape`, `diamond`, `fork`, `chain-N`, `antichain-N-with-top`.
pub fn by_name(name: &str) -> Result<ForcingNotion> {
    let bad = || Error::Config(format!("unknown poset preset `{name}`"));
    let size = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(n) if (1..=64).contains(&n) => Ok(n),
            _ => Err(bad()),
        }
    };
    match name {
        "one-point" => Ok(one_point()),
        "v-shape" => Ok(v_shape()),
        "diamond" => Ok(diamond()),
        "fork" => Ok(fork()),
        _ => {
            if let Some(n) = name.strip_prefix("chain-") {
                Ok(chain(size(n)?))
            } else if let Some(n) = name
                .strip_prefix("antichain-")
                .and_then(|rest| rest.strip_suffix("-with-top"))
            {
                let n = size(n)?;
                if n >= 64 {
                    return Err(bad());
                }
                Ok(antichain_with_top(n))
            } else {
                Err(bad())
            }
        }
    }
}

/// Every named preset with at most `max_size` conditions, smallest first.
pub fn family(max_size: usize) -> Vec<(String, ForcingNotion)> {
    let mut out: Vec<(String, ForcingNotion)> = Vec::new();
    let mut push = |name: String| {
        let n = by_name(&name).expect("known preset");
        if n.len() <= max_size {
            out.push((name, n));
        }
    };
    push("one-point".into());
    push("v-shape".into());
    push("diamond".into());
    push("fork".into());
    for n in 2..=max_size {
        push(format!("chain-{n}"));
    }
    for n in 3..max_size {
        push(format!("antichain-{n}-with-top"));
    }
    out.sort_by_key(|(_, n)| n.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("chain-3").unwrap(), chain(3));
        assert_eq!(by_name("antichain-2-with-top").unwrap(), v_shape());
        assert_eq!(by_name("v-shape").unwrap().len(), 3);
        assert_eq!(by_name("diamond").unwrap().minimal(), &[0]);
        assert_eq!(by_name("fork").unwrap().minimal(), &[0, 2]);
        assert!(by_name("chain-0").is_err());
        assert!(by_name("lattice").is_err());
    }

    #[test]
    fn family_sizes() {
        let small = family(4);
        let names: Vec<&str> = small.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "one-point",
                "chain-2",
                "v-shape",
                "chain-3",
                "diamond",
                "chain-4",
                "antichain-3-with-top"
            ]
        );
        assert!(family(8).iter().all(|(_, n)| n.len() <= 8));
    }
}
