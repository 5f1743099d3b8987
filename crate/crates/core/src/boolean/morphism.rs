//! Exhaustive check that a map of orthomodular lattices preserving
//! complements, binary joins and orthogonal suprema preserves all suprema.

use serde::{Deserialize, Serialize};

use super::oml::FiniteOml;
use crate::error::{Error, Result};

/// Carriers up to this size have every subset scanned; larger ones only
/// subsets of at most three elements.
const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupViolation {
    pub kind: String,
    pub subset: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupCheckReport {
    pub preserves_ortho: bool,
    pub preserves_binary_joins: bool,
    pub preserves_orthogonal_sups: bool,
    pub preserves_all_sups: bool,
    /// All three hypotheses hold.
    pub hypotheses: bool,
    pub exhaustive: bool,
    pub subsets_checked: u64,
    /// First failure found, hypotheses before conclusion.
    pub violation: Option<SupViolation>,
    /// Hypotheses imply the conclusion.
    pub verdict: bool,
}

fn subsets(n: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if n <= EXHAUSTIVE_LIMIT {
        Box::new((0..1u64 << n).map(move |bits| (0..n).filter(|k| bits >> k & 1 == 1).collect()))
    } else {
        let small = std::iter::once(Vec::new())
            .chain((0..n).map(|a| vec![a]))
            .chain((0..n).flat_map(move |a| (a + 1..n).map(move |b| vec![a, b])))
            .chain((0..n).flat_map(move |a| {
                (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| vec![a, b, c]))
            }));
        Box::new(small)
    }
}

/// `f[i]` is the image in `q` of element `i` of `p`.
pub fn morphism_sup_check(f: &[usize], p: &FiniteOml, q: &FiniteOml) -> Result<SupCheckReport> {
    if f.len() != p.size() {
        return Err(Error::domain(format!(
            "map has {} entries for a carrier of {}",
            f.len(),
            p.size()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= q.size()) {
        return Err(Error::domain(format!(
            "image index {bad} is outside the codomain"
        )));
    }
    let names = |s: &[usize]| s.iter().map(|&i| p.name(i).to_string()).collect::<Vec<_>>();
    let mut first: [Option<Vec<usize>>; 4] = [None, None, None, None];
    let n = p.size();
    for i in 0..n {
        if f[p.ortho(i)] != q.ortho(f[i]) && first[0].is_none() {
            first[0] = Some(vec![i]);
        }
        for j in i + 1..n {
            if f[p.join(i, j)] != q.join(f[i], f[j]) && first[1].is_none() {
                first[1] = Some(vec![i, j]);
            }
        }
    }
    let mut checked = 0u64;
    for s in subsets(n) {
        checked += 1;
        let preserved = f[p.sup(&s)] == q.sup(&s.iter().map(|&x| f[x]).collect::<Vec<_>>());
        if preserved {
            continue;
        }
        let orthogonal = s
            .iter()
            .all(|&a| s.iter().all(|&b| a == b || p.orthogonal(a, b)));
        if orthogonal && first[2].is_none() {
            first[2] = Some(s.clone());
        }
        if first[3].is_none() {
            first[3] = Some(s);
        }
    }
    let kinds = ["ortho", "binary_join", "orthogonal_sup", "sup"];
    let violation = first.iter().zip(kinds).find_map(|(s, kind)| {
        s.as_ref().map(|s| SupViolation {
            kind: kind.into(),
            subset: names(s),
        })
    });
    let hypotheses = first[..3].iter().all(Option::is_none);
    let preserves_all_sups = first[3].is_none();
    Ok(SupCheckReport {
        preserves_ortho: first[0].is_none(),
        preserves_binary_joins: first[1].is_none(),
        preserves_orthogonal_sups: first[2].is_none(),
        preserves_all_sups,
        hypotheses,
        exhaustive: n <= EXHAUSTIVE_LIMIT,
        subsets_checked: checked,
        violation,
        verdict: !hypotheses || preserves_all_sups,
    })
}
