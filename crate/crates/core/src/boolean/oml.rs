//! Finite orthomodular lattices given by an order table and an orthocomplement.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::structure::boolean_block;
use super::{FiniteBooleanAlgebra, DEFAULT_CARRIER_CAP};
use crate::error::{Error, Result};

/// A finite orthomodular lattice. Construction validates every axiom exhaustively.
#[derive(Clone, Debug)]
pub struct FiniteOml {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    ortho: Vec<usize>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl PartialEq for FiniteOml {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq && self.ortho == other.ortho
    }
}

impl Eq for FiniteOml {}

pub(crate) fn check_carrier(names: &[String], cap: usize) -> Result<()> {
    if names.is_empty() {
        return Err(Error::domain("carrier is empty"));
    }
    if names.len() > cap {
        return Err(Error::domain(format!(
            "carrier has {} elements, above the cap of {cap}",
            names.len()
        )));
    }
    let mut sorted: Vec<&String> = names.iter().collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::domain(format!("duplicate element name {:?}", w[0])));
    }
    Ok(())
}

pub(crate) fn relation_from_pairs(
    n: usize,
    pairs: &[(usize, usize)],
    what: &str,
) -> Result<Vec<Vec<bool>>> {
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j) in pairs {
        if i >= n || j >= n {
            return Err(Error::domain(format!(
                "{what} pair ({i}, {j}) is out of range"
            )));
        }
        rel[i][j] = true;
    }
    Ok(rel)
}

pub(crate) fn check_involution(ortho: &[usize], n: usize) -> Result<()> {
    if ortho.len() != n {
        return Err(Error::domain(format!(
            "complement table has {} entries for {n} elements",
            ortho.len()
        )));
    }
    if let Some(i) = (0..n).find(|&i| ortho[i] >= n || ortho[ortho[i]] != i) {
        return Err(Error::domain(format!(
            "complement is not an involution at index {i}"
        )));
    }
    Ok(())
}

pub(crate) fn pairs_of(rel: &[Vec<bool>], strict_upper: bool) -> Vec<(usize, usize)> {
    let n = rel.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && rel[i][j] && (!strict_upper || i < j))
        .collect()
}

impl FiniteOml {
    /// Build from names, `leq` pairs (reflexive pairs may be omitted) and the
    /// orthocomplement table, under the default carrier cap.
    pub fn new(names: Vec<String>, leq: &[(usize, usize)], ortho: Vec<usize>) -> Result<Self> {
        Self::with_cap(names, leq, ortho, DEFAULT_CARRIER_CAP)
    }

    pub fn with_cap(
        names: Vec<String>,
        leq: &[(usize, usize)],
        ortho: Vec<usize>,
        cap: usize,
    ) -> Result<Self> {
        check_carrier(&names, cap)?;
        let rel = relation_from_pairs(names.len(), leq, "order")?;
        Self::from_relation(names, rel, ortho)
    }

    pub(crate) fn from_relation(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        ortho: Vec<usize>,
    ) -> Result<Self> {
        let n = names.len();
        let nm = |i: usize| names[i].clone();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::domain(format!(
                        "{} ≤ {} ≤ {} with distinct elements",
                        nm(i),
                        nm(j),
                        nm(i)
                    )));
                }
                if !leq[i][j] {
                    continue;
                }
                if let Some(k) = (0..n).find(|&k| leq[j][k] && !leq[i][k]) {
                    return Err(Error::domain(format!(
                        "order is not transitive: {} ≤ {} ≤ {} but not {} ≤ {}",
                        nm(i),
                        nm(j),
                        nm(k),
                        nm(i),
                        nm(k)
                    )));
                }
            }
        }
        check_involution(&ortho, n)?;
        let bottom = (0..n)
            .find(|&b| (0..n).all(|m| leq[b][m]))
            .ok_or_else(|| Error::domain("no least element"))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|m| leq[m][t]))
            .ok_or_else(|| Error::domain("no greatest element"))?;
        let least = |candidates: Vec<usize>| {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| leq[c][d]))
        };
        let greatest = |candidates: Vec<usize>| {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| leq[d][c]))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                join[i][j] = least((0..n).filter(|&u| leq[i][u] && leq[j][u]).collect())
                    .ok_or_else(|| {
                        Error::domain(format!("{} and {} have no least upper bound", nm(i), nm(j)))
                    })?;
                meet[i][j] = greatest((0..n).filter(|&l| leq[l][i] && leq[l][j]).collect())
                    .ok_or_else(|| {
                        Error::domain(format!(
                            "{} and {} have no greatest lower bound",
                            nm(i),
                            nm(j)
                        ))
                    })?;
            }
        }
        for i in 0..n {
            let c = ortho[i];
            if join[i][c] != top || meet[i][c] != bottom {
                return Err(Error::domain(format!(
                    "{} is not a complement of {}",
                    nm(c),
                    nm(i)
                )));
            }
            for j in 0..n {
                if leq[i][j] && !leq[ortho[j]][c] {
                    return Err(Error::domain(format!(
                        "orthocomplement does not reverse the order between {} and {}",
                        nm(i),
                        nm(j)
                    )));
                }
                if leq[i][j] && join[i][meet[c][j]] != j {
                    return Err(Error::domain(format!(
                        "orthomodular law fails for {} ≤ {}",
                        nm(i),
                        nm(j)
                    )));
                }
            }
        }
        Ok(FiniteOml {
            names,
            leq,
            ortho,
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("lattice serialization is infallible")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i][j]
    }

    pub fn ortho(&self, i: usize) -> usize {
        self.ortho[i]
    }

    pub fn ortho_table(&self) -> &[usize] {
        &self.ortho
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `i ≤ j⊥`.
    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.leq[i][self.ortho[j]]
    }

    /// Supremum of a finite set; the empty set gives the bottom element.
    pub fn sup(&self, items: &[usize]) -> usize {
        items.iter().fold(self.bottom, |acc, &x| self.join[acc][x])
    }

    /// `(p ∨ q) ∧ (p ∨ q⊥) ∧ (p⊥ ∨ q) ∧ (p⊥ ∨ q⊥)`.
    pub fn commutator(&self, p: usize, q: usize) -> usize {
        let (pc, qc) = (self.ortho[p], self.ortho[q]);
        let a = self.meet[self.join[p][q]][self.join[p][qc]];
        let b = self.meet[self.join[pc][q]][self.join[pc][qc]];
        self.meet[a][b]
    }

    pub fn commeasurable(&self, p: usize, q: usize) -> bool {
        self.commutator(p, q) == self.bottom
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet[a][self.join[b][c]] == self.join[self.meet[a][b]][self.meet[a][c]]
                })
            })
        })
    }

    /// The Boolean algebra this lattice is, if any, with the element realizing each atom set.
    pub fn as_boolean(&self) -> Option<(FiniteBooleanAlgebra, Vec<usize>)> {
        let members: Vec<usize> = (0..self.size()).collect();
        let block = boolean_block(
            &members,
            |a, b| self.leq[a][b],
            &self.ortho,
            |i| self.names[i].clone(),
        )
        .ok()?;
        let algebra = FiniteBooleanAlgebra::new(block.atoms.len());
        let by_mask = (0..self.size() as u64).map(|m| block.by_mask[&m]).collect();
        Some((algebra, by_mask))
    }

    pub(crate) fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

#[derive(Serialize, Deserialize)]
struct OmlRepr {
    elements: Vec<String>,
    leq: Vec<(usize, usize)>,
    ortho: Vec<usize>,
}

impl Serialize for FiniteOml {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        OmlRepr {
            elements: self.names.clone(),
            leq: pairs_of(&self.leq, false),
            ortho: self.ortho.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteOml {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = OmlRepr::deserialize(deserializer)?;
        FiniteOml::new(repr.elements, &repr.leq, repr.ortho).map_err(serde::de::Error::custom)
    }
}

/// The horizontal sum of `k` four-element Boolean algebras: `0`, `1` and the
/// pairs `a, a'`, `b, b'`, ...
pub fn mo_lattice(k: usize) -> FiniteOml {
    let mut names = vec!["0".to_string(), "1".to_string()];
    let mut ortho = vec![1, 0];
    for i in 0..k {
        let base = if k <= 26 {
            char::from(b'a' + i as u8).to_string()
        } else {
            format!("x{i}")
        };
        names.push(base.clone());
        names.push(format!("{base}'"));
        ortho.push(3 + 2 * i);
        ortho.push(2 + 2 * i);
    }
    let n = names.len();
    let leq: Vec<(usize, usize)> = (0..n).flat_map(|i| [(0, i), (i, 1)]).collect();
    FiniteOml::with_cap(names, &leq, ortho, n.max(DEFAULT_CARRIER_CAP))
        .expect("MO_k satisfies the axioms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mo_family() {
        let mo1 = mo_lattice(1);
        assert_eq!(mo1.size(), 4);
        let (b, _) = mo1.as_boolean().unwrap();
        assert_eq!(b.atom_count(), 2);
        let mo2 = mo_lattice(2);
        assert_eq!(mo2.size(), 6);
        assert!(!mo2.is_distributive());
        assert!(mo2.as_boolean().is_none());
        assert_eq!(mo_lattice(0).size(), 2);
    }

    #[test]
    fn commeasurability_in_mo2() {
        let p = mo_lattice(2);
        let a = p.index_of("a").unwrap();
        let with_a: Vec<&str> = (0..p.size())
            .filter(|&q| p.commeasurable(a, q))
            .map(|q| p.name(q))
            .collect();
        assert_eq!(with_a, vec!["0", "1", "a", "a'"]);
        for i in 0..p.size() {
            assert!(p.commeasurable(i, i));
            assert!(p.commeasurable(i, p.ortho(i)));
            for j in 0..p.size() {
                assert_eq!(p.commeasurable(i, j), p.commeasurable(j, i));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = mo_lattice(3);
        assert_eq!(FiniteOml::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rejects_broken_lattices() {
        let names = |k: usize| (0..k).map(|i| i.to_string()).collect::<Vec<_>>();
        // a chain 0 < 1 < 2 with 1 self-complementary is not complemented
        assert!(FiniteOml::new(names(3), &[(0, 1), (1, 2), (0, 2)], vec![2, 1, 0]).is_err());
        // non-transitive order
        assert!(FiniteOml::new(names(3), &[(0, 1), (1, 2)], vec![2, 1, 0]).is_err());
        // complement table not an involution
        assert!(FiniteOml::new(names(2), &[(0, 1)], vec![1, 1]).is_err());
        // duplicate names
        assert!(FiniteOml::new(vec!["x".into(), "x".into()], &[(0, 1)], vec![1, 0]).is_err());
        // the benzene ring O6 is orthocomplemented but not orthomodular
        let hex = vec!["0", "a", "b", "b'", "a'", "1"]
            .into_iter()
            .map(String::from)
            .collect();
        let leq = [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 5),
            (2, 5),
            (3, 5),
            (4, 5),
            (1, 2),
            (3, 4),
        ];
        let err = FiniteOml::new(hex, &leq, vec![5, 4, 3, 2, 1, 0]).unwrap_err();
        assert!(err.to_string().contains("orthomodular"), "{err}");
        assert!(FiniteOml::from_json(r#"{"elements":["0"],"leq":[],"ortho":[0]}"#).is_ok());
    }
}
