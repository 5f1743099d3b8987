//! Finite piecewise Boolean algebras and their passage to and from orthomodular lattices.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::oml::{check_carrier, check_involution, pairs_of, relation_from_pairs, FiniteOml};
use super::structure::{boolean_block, maximal_cliques, Block};
use super::DEFAULT_CARRIER_CAP;
use crate::error::{Error, Result};

/// A finite piecewise Boolean algebra: a carrier with a commeasurability
/// relation, a total complement, and an order known only between
/// commeasurable elements. Partial suprema are read off the Boolean block
/// containing their arguments.
#[derive(Clone, Debug)]
pub struct FinitePcba {
    names: Vec<String>,
    commeas: Vec<Vec<bool>>,
    complement: Vec<usize>,
    leq: Vec<Vec<bool>>,
    blocks: Vec<Block>,
    bottom: usize,
    top: usize,
}

impl PartialEq for FinitePcba {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.commeas == other.commeas
            && self.complement == other.complement
            && self.leq == other.leq
    }
}

impl Eq for FinitePcba {}

impl FinitePcba {
    /// Build and validate. `commeas` is closed under reflexivity and symmetry,
    /// `leq` under reflexivity; every `leq` pair must be commeasurable.
    pub fn new(
        names: Vec<String>,
        commeas: &[(usize, usize)],
        complement: Vec<usize>,
        leq: &[(usize, usize)],
    ) -> Result<Self> {
        Self::with_cap(names, commeas, complement, leq, DEFAULT_CARRIER_CAP)
    }

    pub fn with_cap(
        names: Vec<String>,
        commeas: &[(usize, usize)],
        complement: Vec<usize>,
        leq: &[(usize, usize)],
        cap: usize,
    ) -> Result<Self> {
        check_carrier(&names, cap)?;
        let n = names.len();
        let given = relation_from_pairs(n, commeas, "commeasurability")?;
        let rel = (0..n)
            .map(|i| (0..n).map(|j| given[i][j] || given[j][i]).collect())
            .collect();
        let order = relation_from_pairs(n, leq, "order")?;
        Self::from_relations(names, rel, complement, order)
    }

    pub(crate) fn from_relations(
        names: Vec<String>,
        commeas: Vec<Vec<bool>>,
        complement: Vec<usize>,
        leq: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let n = names.len();
        check_involution(&complement, n)?;
        let nm = |i: usize| names[i].clone();
        if let Some((i, j)) = pairs_of(&leq, false)
            .into_iter()
            .find(|&(i, j)| !commeas[i][j])
        {
            return Err(Error::domain(format!(
                "{} ≤ {} is declared but the two are not commeasurable",
                nm(i),
                nm(j)
            )));
        }
        let mut blocks = Vec::new();
        for clique in maximal_cliques(&commeas) {
            let block =
                boolean_block(&clique, |a, b| leq[a][b], &complement, nm).map_err(|why| {
                    let members: Vec<String> = clique.iter().map(|&i| nm(i)).collect();
                    Error::domain(format!(
                        "maximal commeasurable set {{{}}} is not a Boolean algebra: {why}",
                        members.join(", ")
                    ))
                })?;
            blocks.push(block);
        }
        let bottom_of = |b: &Block| b.by_mask[&0];
        let top_of = |b: &Block| b.by_mask[&b.full()];
        let (bottom, top) = (bottom_of(&blocks[0]), top_of(&blocks[0]));
        if let Some(b) = blocks
            .iter()
            .find(|b| bottom_of(b) != bottom || top_of(b) != top)
        {
            return Err(Error::domain(format!(
                "blocks disagree on 0 and 1 ({} vs {})",
                nm(bottom),
                nm(bottom_of(b))
            )));
        }
        for (k, b1) in blocks.iter().enumerate() {
            for b2 in &blocks[k + 1..] {
                let shared: Vec<usize> = b1
                    .members
                    .iter()
                    .copied()
                    .filter(|&x| b2.contains(x))
                    .collect();
                for &x in &shared {
                    for &y in &shared {
                        if b1.join(x, y) != b2.join(x, y) {
                            return Err(Error::domain(format!(
                                "the join of {} and {} depends on the block it is computed in",
                                nm(x),
                                nm(y)
                            )));
                        }
                    }
                }
            }
        }
        Ok(FinitePcba {
            names,
            commeas,
            complement,
            leq,
            blocks,
            bottom,
            top,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pcba serialization is infallible")
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

    pub fn commeasurable(&self, i: usize, j: usize) -> bool {
        self.commeas[i][j]
    }

    pub fn pairwise_commeasurable(&self, items: &[usize]) -> bool {
        items
            .iter()
            .all(|&i| items.iter().all(|&j| self.commeas[i][j]))
    }

    pub fn complement(&self, i: usize) -> usize {
        self.complement[i]
    }

    /// The union of the orders of the Boolean blocks.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Members of each maximal Boolean block, in a fixed order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.members.clone()).collect()
    }

    /// Atoms of each maximal Boolean block.
    pub fn block_atoms(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.atoms.clone()).collect()
    }

    pub(crate) fn block_structures(&self) -> &[Block] {
        &self.blocks
    }

    pub(crate) fn block_containing(&self, items: &[usize]) -> Option<&Block> {
        self.blocks.iter().find(|b| b.contains_all(items))
    }

    /// Supremum of a pairwise commeasurable set.
    pub fn sup(&self, items: &[usize]) -> Result<usize> {
        let block = self.block_containing(items).ok_or_else(|| {
            Error::domain("supremum requested for a set that is not pairwise commeasurable")
        })?;
        let bits = items.iter().fold(0u64, |acc, x| acc | block.mask[x]);
        Ok(block.by_mask[&bits])
    }

    pub(crate) fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

#[derive(Serialize, Deserialize)]
struct PcbaRepr {
    elements: Vec<String>,
    leq: Vec<(usize, usize)>,
    ortho: Vec<usize>,
    commeas: Vec<(usize, usize)>,
}

impl Serialize for FinitePcba {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PcbaRepr {
            elements: self.names.clone(),
            leq: pairs_of(&self.leq, false),
            ortho: self.complement.clone(),
            commeas: pairs_of(&self.commeas, true),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinitePcba {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PcbaRepr::deserialize(deserializer)?;
        FinitePcba::new(repr.elements, &repr.commeas, repr.ortho, &repr.leq)
            .map_err(serde::de::Error::custom)
    }
}

/// The piecewise Boolean algebra of an orthomodular lattice: `p, q` are
/// commeasurable iff their commutator vanishes.
pub fn oml_commeas(p: &FiniteOml) -> Result<FinitePcba> {
    let n = p.size();
    let commeas = (0..n)
        .map(|i| (0..n).map(|j| p.commeasurable(i, j)).collect())
        .collect();
    FinitePcba::from_relations(
        p.names().to_vec(),
        commeas,
        p.ortho_table().to_vec(),
        p.leq_table().to_vec(),
    )
}

/// Reassemble the orthomodular lattice of a transitive, joined piecewise Boolean algebra.
pub fn pcba_to_oml(b: &FinitePcba) -> Result<FiniteOml> {
    let n = b.size();
    let leq = b.leq_table();
    for x in 0..n {
        for y in 0..n {
            if !leq[x][y] || x == y {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| leq[y][z] && !leq[x][z]) {
                return Err(Error::domain(format!(
                    "induced order is not transitive: {} ≤ {} ≤ {} but not {} ≤ {}",
                    b.name(x),
                    b.name(y),
                    b.name(z),
                    b.name(x),
                    b.name(z)
                )));
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let upper: Vec<usize> = (0..n).filter(|&u| leq[x][u] && leq[y][u]).collect();
            if !upper.iter().any(|&u| upper.iter().all(|&v| leq[u][v])) {
                return Err(Error::domain(format!(
                    "not joined: {} and {} have no least upper bound",
                    b.name(x),
                    b.name(y)
                )));
            }
        }
    }
    FiniteOml::from_relation(
        b.names().to_vec(),
        leq.to_vec(),
        (0..n).map(|i| b.complement(i)).collect(),
    )
}

/// Two eight-element Boolean algebras glued along `{0, 1, y, y'}`, with
/// `x ≤ y` in the first and `y ≤ z` in the second. Nothing relates `x` and `z`,
/// so the induced order is not transitive.
pub fn non_transitive_example() -> FinitePcba {
    // first block: atoms x, u, v with y = x∨u, y' = v
    // second block: atoms y, w, t with z = y∨w, w∨t = v
    let names: Vec<String> = [
        "0", "1", "x", "u", "v", "y", "x+v", "u+v", "w", "t", "z", "y+t",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let idx = |s: &str| names.iter().position(|n| n == s).expect("listed name");
    let first = ["0", "x", "u", "v", "y", "x+v", "u+v", "1"];
    let second = ["0", "y", "w", "t", "z", "y+t", "v", "1"];
    let mut commeas = Vec::new();
    for block in [&first, &second] {
        for a in block.iter() {
            for b in block.iter() {
                commeas.push((idx(a), idx(b)));
            }
        }
    }
    let below = [
        ("x", "y"),
        ("x", "x+v"),
        ("u", "y"),
        ("u", "u+v"),
        ("v", "x+v"),
        ("v", "u+v"),
        ("y", "z"),
        ("y", "y+t"),
        ("w", "z"),
        ("w", "v"),
        ("t", "y+t"),
        ("t", "v"),
    ];
    let mut leq: Vec<(usize, usize)> = below.iter().map(|(a, b)| (idx(a), idx(b))).collect();
    for block in [&first, &second] {
        for a in block.iter() {
            leq.push((idx("0"), idx(a)));
            leq.push((idx(a), idx("1")));
        }
    }
    let complement_pairs = [
        ("0", "1"),
        ("x", "u+v"),
        ("u", "x+v"),
        ("v", "y"),
        ("w", "y+t"),
        ("t", "z"),
    ];
    let mut complement = vec![0; names.len()];
    for (a, b) in complement_pairs {
        complement[idx(a)] = idx(b);
        complement[idx(b)] = idx(a);
    }
    FinitePcba::new(names.clone(), &commeas, complement, &leq).expect("both blocks are Boolean")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{boolean_algebra, mo_lattice};

    #[test]
    fn mo2_round_trip() {
        let p = mo_lattice(2);
        let b = oml_commeas(&p).unwrap();
        assert_eq!(b.blocks().len(), 2);
        assert_eq!(pcba_to_oml(&b).unwrap(), p);
        assert_eq!(oml_commeas(&pcba_to_oml(&b).unwrap()).unwrap(), b);
        let a = b.index_of("a").unwrap();
        let ac = b.index_of("a'").unwrap();
        assert_eq!(b.sup(&[a, ac]).unwrap(), b.top());
        assert!(b.sup(&[a, b.index_of("b").unwrap()]).is_err());
    }

    #[test]
    fn boolean_round_trip() {
        for n in 0..=4 {
            let p = boolean_algebra(n).to_oml().unwrap();
            let b = oml_commeas(&p).unwrap();
            assert_eq!(b.blocks().len(), 1);
            assert_eq!(pcba_to_oml(&b).unwrap(), p);
        }
    }

    #[test]
    fn glued_blocks_are_not_transitive() {
        let b = non_transitive_example();
        assert_eq!(b.blocks().len(), 2);
        let err = pcba_to_oml(&b).unwrap_err();
        assert!(err.to_string().contains("x ≤ y ≤ z"), "{err}");
    }

    #[test]
    fn json_round_trip_and_validation() {
        let b = oml_commeas(&mo_lattice(3)).unwrap();
        assert_eq!(FinitePcba::from_json(&b.to_json()).unwrap(), b);
        // three mutually commeasurable atoms-to-be with no Boolean structure
        let names: Vec<String> = ["0", "a", "1"].into_iter().map(String::from).collect();
        let all = [(0, 1), (0, 2), (1, 2)];
        assert!(FinitePcba::new(
            names.clone(),
            &all,
            vec![2, 1, 0],
            &[(0, 1), (1, 2), (0, 2)]
        )
        .is_err());
        // order between non-commeasurable elements is rejected
        let mo = mo_lattice(2);
        let mut leq = pairs_of(mo.leq_table(), false);
        leq.push((2, 4));
        assert!(
            FinitePcba::new(mo.names().to_vec(), &[], mo.ortho_table().to_vec(), &leq).is_err()
        );
    }
}
