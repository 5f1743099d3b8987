//! Shared combinatorics: recognizing Boolean blocks and enumerating maximal cliques.

use std::collections::HashMap;

/// A finite Boolean algebra sitting inside a larger carrier, with every member
/// identified with the set of atoms below it.
#[derive(Clone, Debug)]
pub(crate) struct Block {
    pub members: Vec<usize>,
    pub atoms: Vec<usize>,
    pub mask: HashMap<usize, u64>,
    pub by_mask: HashMap<u64, usize>,
}

impl Block {
    pub fn full(&self) -> u64 {
        if self.atoms.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.atoms.len())
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.contains_key(&x)
    }

    pub fn contains_all(&self, xs: &[usize]) -> bool {
        xs.iter().all(|x| self.contains(*x))
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.by_mask[&(self.mask[&a] | self.mask[&b])]
    }
}

/// Check that `members` is a Boolean algebra under `leq` and `complement`,
/// returning its atom decomposition or a description of the first failure.
pub(crate) fn boolean_block(
    members: &[usize],
    leq: impl Fn(usize, usize) -> bool,
    complement: &[usize],
    name: impl Fn(usize) -> String,
) -> Result<Block, String> {
    let bottoms: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&b| members.iter().all(|&m| leq(b, m)))
        .collect();
    let bottom = match bottoms.as_slice() {
        [b] => *b,
        [] => return Err("no least element".into()),
        _ => return Err("several least elements".into()),
    };
    let atoms: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&a| a != bottom)
        .filter(|&a| members.iter().all(|&m| m == a || m == bottom || !leq(m, a)))
        .collect();
    if atoms.len() >= 64 {
        return Err(format!("{} atoms exceed the supported 63", atoms.len()));
    }
    if members.len() != 1usize << atoms.len() {
        return Err(format!(
            "{} elements but {} atoms; a Boolean algebra has 2^atoms elements",
            members.len(),
            atoms.len()
        ));
    }
    let mut mask = HashMap::new();
    let mut by_mask = HashMap::new();
    for &m in members {
        let bits = atoms
            .iter()
            .enumerate()
            .filter(|(_, &a)| leq(a, m))
            .fold(0u64, |acc, (k, _)| acc | (1 << k));
        if let Some(prev) = by_mask.insert(bits, m) {
            return Err(format!(
                "{} and {} lie above the same atoms",
                name(prev),
                name(m)
            ));
        }
        mask.insert(m, bits);
    }
    for &x in members {
        for &y in members {
            let subset = mask[&x] & !mask[&y] == 0;
            if subset != leq(x, y) {
                return Err(format!(
                    "order between {} and {} disagrees with their atoms",
                    name(x),
                    name(y)
                ));
            }
        }
    }
    let block = Block {
        members: members.to_vec(),
        atoms,
        mask,
        by_mask,
    };
    let full = block.full();
    for &x in members {
        let c = complement[x];
        if block.mask.get(&c) != Some(&(full ^ block.mask[&x])) {
            return Err(format!(
                "complement of {} is {}, not its Boolean complement",
                name(x),
                name(c)
            ));
        }
    }
    Ok(block)
}

/// Maximal cliques of a reflexive symmetric relation, each sorted, listed in
/// lexicographic order.
pub(crate) fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn extend(
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        adj: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| adj(u, v)).count())
            .expect("p or x is nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj(pivot, v)).collect();
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adj(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| adj(v, w)).collect();
            extend(r, np, nx, adj, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }

    let neighbours = |u: usize, v: usize| u != v && adj[u][v];
    let mut out = Vec::new();
    extend(
        &mut Vec::new(),
        (0..adj.len()).collect(),
        Vec::new(),
        &neighbours,
        &mut out,
    );
    out.sort();
    out
}
