//! Root systems of reductive Lie algebras.
//!
//! Node labels follow Bourbaki. Internally nodes are 0-based, so Bourbaki
//! `α_i` is node `i - 1`. Conventions worth stating explicitly:
//!
//! * `B_n`: `α_n` is the short simple root. `C_n`: `α_n` is the long one.
//! * `D_n`: `α_1 … α_{n-2}` form a chain, `α_{n-1}` and `α_n` both attach
//!   to `α_{n-2}`.
//! * `E_n`: chain `α_1 - α_3 - α_4 - … - α_n`, with `α_2` attached to `α_4`.
//! * `G_2`: `α_1` is short, so the highest root is `3α_1 + 2α_2`.
//!
//! The Cartan matrix is `a_ij = ⟨α_i, α_j^∨⟩ = 2(α_i, α_j)/(α_j, α_j)`.
//!
//! A product of simple factors concatenates coordinates block by block;
//! every root lives in exactly one block, recorded by its component id.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A connected Dynkin diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InvalidDynkin(format!(
                "{}{} is not a valid simple type",
                family, rank
            )))
        }
    }

    /// Symmetric invariant form on simple roots, scaled to integers.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut g = vec![vec![0i64; n]; n];
        let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self.family {
            Family::A => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            Family::B => {
                for i in 0..n - 1 {
                    g[i][i] = 4;
                }
                g[n - 1][n - 1] = 2;
                for i in 1..n {
                    link(&mut g, i - 1, i, -2);
                }
            }
            Family::C => {
                for i in 0..n - 1 {
                    g[i][i] = 2;
                }
                g[n - 1][n - 1] = 4;
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 2, n - 1, -2);
            }
            Family::D => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 3, n - 1, -1);
            }
            Family::E => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                link(&mut g, 0, 2, -1);
                link(&mut g, 1, 3, -1);
                for i in 3..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            Family::F => {
                g[0][0] = 4;
                g[1][1] = 4;
                g[2][2] = 2;
                g[3][3] = 2;
                link(&mut g, 0, 1, -2);
                link(&mut g, 1, 2, -2);
                link(&mut g, 2, 3, -1);
            }
            Family::G => {
                g[0][0] = 2;
                g[1][1] = 6;
                link(&mut g, 0, 1, -3);
            }
        }
        g
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        cartan_from_gram(&self.gram())
    }

    /// Cominuscule nodes (0-based, local), read from the classification table.
    pub fn cominuscule_nodes(&self) -> Vec<usize> {
        let n = self.rank;
        match self.family {
            Family::A => (0..n).collect(),
            Family::B => vec![0],
            Family::C => vec![n - 1],
            Family::D => vec![0, n - 2, n - 1],
            Family::E if n == 6 => vec![0, 5],
            Family::E if n == 7 => vec![6],
            Family::E | Family::F | Family::G => vec![],
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

fn cartan_from_gram(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = 2 * g[i][j] / g[j][j];
        }
    }
    a
}

/// Simple factors plus the dimension of the central torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinType {
    pub components: Vec<SimpleType>,
    pub torus: usize,
}

impl DynkinType {
    pub fn new(components: Vec<SimpleType>, torus: usize) -> Result<Self> {
        if components.is_empty() && torus == 0 {
            return Err(Error::InvalidDynkin("empty type".into()));
        }
        Ok(DynkinType { components, torus })
    }

    pub fn simple(family: Family, rank: usize) -> Result<Self> {
        Ok(DynkinType {
            components: vec![SimpleType::new(family, rank)?],
            torus: 0,
        })
    }

    pub fn semisimple_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn rank(&self) -> usize {
        self.semisimple_rank() + self.torus
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    /// Parses `"A3"`, `"D4xA1+T2"`, `"T1"`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::InvalidDynkin("empty type string".into()));
        }
        let bad = || Error::InvalidDynkin(format!("cannot parse {:?}", s));
        let mut components = Vec::new();
        let mut torus = 0usize;
        for (pos, summand) in s.split('+').enumerate() {
            if summand.is_empty() {
                return Err(bad());
            }
            if let Some(k) = summand.strip_prefix(['T', 't']) {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                torus += k;
                continue;
            }
            if pos > 0 && !components.is_empty() {
                // simple factors are joined with 'x', tori with '+'
                return Err(bad());
            }
            for factor in summand.split(['x', 'X', '*']) {
                let mut chars = factor.chars();
                let family = chars.next().and_then(Family::from_char).ok_or_else(bad)?;
                let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
                components.push(SimpleType::new(family, rank)?);
            }
        }
        DynkinType::new(components, torus)
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        let ss = parts.join("x");
        match (ss.is_empty(), self.torus) {
            (true, k) => write!(f, "T{}", k),
            (false, 0) => write!(f, "{}", ss),
            (false, k) => write!(f, "{}+T{}", ss, k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub coords: Vec<i64>,
    pub component: usize,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
            component: self.component,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    dynkin: DynkinType,
    cartan: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    node_component: Vec<usize>,
    component_offset: Vec<usize>,
    simple: Vec<Root>,
    positive: Vec<Root>,
    /// Negatives (reversed) then positives.
    roots: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
}

/// Result of deleting a node set from a Dynkin diagram.
#[derive(Clone, Debug)]
pub struct LeviSubsystem {
    pub root_system: RootSystem,
    /// `node_map[k]` is the original node of the Levi's simple node `k`.
    pub node_map: Vec<usize>,
    pub torus_increment: usize,
}

impl RootSystem {
    pub fn new(dynkin: DynkinType) -> RootSystem {
        let n = dynkin.semisimple_rank();
        let mut gram = vec![vec![0i64; n]; n];
        let mut node_component = Vec::with_capacity(n);
        let mut component_offset = Vec::new();
        let mut positive = Vec::new();
        let mut offset = 0;
        for (cid, comp) in dynkin.components.iter().enumerate() {
            let g = comp.gram();
            for i in 0..comp.rank {
                for j in 0..comp.rank {
                    gram[offset + i][offset + j] = g[i][j];
                }
                node_component.push(cid);
            }
            component_offset.push(offset);
            for local in enumerate_positive(&comp.cartan()) {
                let mut coords = vec![0i64; n];
                coords[offset..offset + comp.rank].copy_from_slice(&local);
                positive.push(Root {
                    coords,
                    component: cid,
                });
            }
            offset += comp.rank;
        }
        positive.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| a.coords.cmp(&b.coords))
        });
        let cartan = cartan_from_gram(&gram);
        let simple: Vec<Root> = (0..n)
            .map(|i| {
                let mut coords = vec![0; n];
                coords[i] = 1;
                Root {
                    coords,
                    component: node_component[i],
                }
            })
            .collect();
        let mut roots: Vec<Root> = positive.iter().rev().map(Root::neg).collect();
        roots.extend(positive.iter().cloned());
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.coords.clone(), i))
            .collect();
        RootSystem {
            dynkin,
            cartan,
            gram,
            node_component,
            component_offset,
            simple,
            positive,
            roots,
            index,
        }
    }

    pub fn from_spec(spec: &str) -> Result<RootSystem> {
        Ok(RootSystem::new(spec.parse()?))
    }

    pub fn dynkin(&self) -> &DynkinType {
        &self.dynkin
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// All roots: negatives from lowest to highest, then positives.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Position in [`RootSystem::roots`].
    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.index.contains_key(coords)
    }

    pub fn node_component(&self, node: usize) -> usize {
        self.node_component[node]
    }

    /// Global nodes of simple component `cid`.
    pub fn component_nodes(&self, cid: usize) -> std::ops::Range<usize> {
        let off = self.component_offset[cid];
        off..off + self.dynkin.components[cid].rank
    }

    /// `⟨β, α_i^∨⟩`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter()
            .enumerate()
            .map(|(j, c)| c * self.cartan[j][i])
            .sum()
    }

    /// Invariant form `(a, b)` in the integer scaling of [`SimpleType::gram`].
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * bj * self.gram[i][j];
            }
        }
        s
    }

    pub fn highest_root(&self, cid: usize) -> &Root {
        self.positive
            .iter()
            .rev()
            .find(|r| r.component == cid)
            .expect("every component has roots")
    }

    fn check_sigma(&self, sigma: &[usize]) -> Result<()> {
        let mut seen = HashSet::new();
        for &v in sigma {
            if v >= self.rank() {
                return Err(Error::InvalidSigma(format!(
                    "node {} out of range for rank {}",
                    v + 1,
                    self.rank()
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidSigma(format!("node {} repeated", v + 1)));
            }
        }
        Ok(())
    }

    /// Sum of the coefficients of `alpha` over the nodes in `sigma`.
    pub fn ht_sigma(&self, sigma: &[usize], alpha: &Root) -> i64 {
        sigma.iter().map(|&i| alpha.coords[i]).sum()
    }

    /// True iff every positive root has Σ-height 0 or 1.
    pub fn is_cominuscule(&self, sigma: &[usize]) -> Result<bool> {
        if sigma.is_empty() {
            return Err(Error::EmptySigma);
        }
        self.check_sigma(sigma)?;
        Ok(self
            .positive
            .iter()
            .all(|r| matches!(self.ht_sigma(sigma, r), 0 | 1)))
    }

    /// Cominuscule nodes of each simple component (global indices).
    pub fn cominuscule_nodes(&self) -> Vec<Vec<usize>> {
        self.dynkin
            .components
            .iter()
            .enumerate()
            .map(|(cid, c)| {
                let off = self.component_offset[cid];
                c.cominuscule_nodes().into_iter().map(|i| i + off).collect()
            })
            .collect()
    }

    /// Nodes not orthogonal to the highest root, per component.
    pub fn contact_sigma(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.dynkin.components.len()).map(|cid| self.contact_nodes(cid)).collect()
    }

    /// Nodes of component `cid` not orthogonal to its highest root.
    pub fn contact_nodes(&self, cid: usize) -> Result<Vec<usize>> {
        let c = &self.dynkin.components[cid];
        if c.rank < 2 {
            return Err(Error::RankOneContact(c.to_string()));
        }
        let theta = &self.highest_root(cid).coords;
        Ok(self
            .component_nodes(cid)
            .filter(|&i| self.inner(theta, &self.simple[i].coords) != 0)
            .collect())
    }

    /// Delete `sigma` from the diagram and identify what remains.
    pub fn levi_subsystem(&self, sigma: &[usize]) -> Result<LeviSubsystem> {
        self.check_sigma(sigma)?;
        let marked: HashSet<usize> = sigma.iter().copied().collect();
        let remaining: Vec<usize> = (0..self.rank()).filter(|i| !marked.contains(i)).collect();

        // connected components of the remaining diagram
        let mut seen = HashSet::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &start in &remaining {
            if seen.contains(&start) {
                continue;
            }
            let mut block = vec![start];
            seen.insert(start);
            let mut k = 0;
            while k < block.len() {
                let v = block[k];
                for &u in &remaining {
                    if !seen.contains(&u) && self.cartan[v][u] != 0 {
                        seen.insert(u);
                        block.push(u);
                    }
                }
                k += 1;
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks.sort_by_key(|b| b[0]);

        let mut components = Vec::new();
        let mut node_map = Vec::new();
        for block in &blocks {
            let sub: Vec<Vec<i64>> = block
                .iter()
                .map(|&i| block.iter().map(|&j| self.cartan[i][j]).collect())
                .collect();
            let (ty, perm) = identify(&sub).ok_or_else(|| {
                Error::InvalidDynkin(format!("unrecognized subdiagram on nodes {:?}", block))
            })?;
            components.push(ty);
            node_map.extend(perm.into_iter().map(|p| block[p]));
        }
        let dynkin = DynkinType {
            components,
            torus: self.dynkin.torus + sigma.len(),
        };
        Ok(LeviSubsystem {
            root_system: RootSystem::new(dynkin),
            node_map,
            torus_increment: sigma.len(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dynkin": self.dynkin.to_string(),
            "rank": self.rank(),
            "torus": self.dynkin.torus,
            "cartan_matrix": self.cartan,
            "positive_roots": self.positive.iter().map(|r| &r.coords).collect::<Vec<_>>(),
            "components": self.positive.iter().map(|r| r.component).collect::<Vec<_>>(),
        })
    }
}

/// Positive roots of a connected diagram via root strings, by height.
fn enumerate_positive(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let pairing = |b: &[i64], i: usize| -> i64 { (0..n).map(|j| b[j] * cartan[j][i]).sum() };
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut all = layer.clone();
    known.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // p = longest string β - kα_i inside Φ
                let mut p = 0;
                loop {
                    let mut down = beta.clone();
                    down[i] -= p + 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing(beta, i) > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn candidates(rank: usize) -> Vec<SimpleType> {
    use Family::*;
    [A, B, C, D, E, F, G]
        .into_iter()
        .filter_map(|f| SimpleType::new(f, rank).ok())
        .filter(|t| !(t.family == C && rank == 2) && !(t.family == D && rank == 3))
        .collect()
}

/// Find a simple type and a bijection `perm` (Bourbaki node -> row of `sub`)
/// with `cartan(type)[k][l] == sub[perm[k]][perm[l]]`.
fn identify(sub: &[Vec<i64>]) -> Option<(SimpleType, Vec<usize>)> {
    let m = sub.len();
    for ty in candidates(m) {
        let target = ty.cartan();
        let mut perm = Vec::with_capacity(m);
        let mut used = vec![false; m];
        if extend_perm(&target, sub, &mut perm, &mut used) {
            return Some((ty, perm));
        }
    }
    None
}

fn extend_perm(target: &[Vec<i64>], sub: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let k = perm.len();
    if k == target.len() {
        return true;
    }
    for cand in 0..sub.len() {
        if used[cand] {
            continue;
        }
        let fits = (0..k).all(|l| {
            target[k][l] == sub[cand][perm[l]] && target[l][k] == sub[perm[l]][cand]
        });
        if fits {
            used[cand] = true;
            perm.push(cand);
            if extend_perm(target, sub, perm, used) {
                return true;
            }
            perm.pop();
            used[cand] = false;
        }
    }
    false
}
