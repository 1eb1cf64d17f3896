//! Finite groups given by Cayley tables, their actions on finite sets, and
//! homomorphism counting into symmetric groups.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored as its image list.
pub type Perm = Vec<usize>;

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Parity of a permutation: `true` when odd.
pub fn is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// A finite group as an extensional multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table (`table[g][h] = g·h`).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_labels(table, None)
    }

    pub fn with_labels(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotLatinSquare("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotLatinSquare(format!("row {g} has length {}", row.len())));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::NotLatinSquare(format!("row {g} has an entry out of range")));
            }
            if !is_permutation(row) {
                return Err(Error::NotLatinSquare(format!("row {g} repeats an element")));
            }
        }
        for h in 0..n {
            let col: Vec<usize> = table.iter().map(|row| row[h]).collect();
            if !is_permutation(&col) {
                return Err(Error::NotLatinSquare(format!("column {h} repeats an element")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(Error::NoInverse(g))?;
            inverse.push(inv);
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Shape(format!("{} labels for a group of order {n}", l.len())));
            }
        }
        let mut group = FiniteGroup { table, identity, inverse, generators: Vec::new(), labels };
        group.generators = group.greedy_generators();
        Ok(group)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_m` with elements `0..m` and addition mod `m`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1, "cyclic group of order 0");
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// Built-in groups: `trivial`, `Z2`, `Z3`, `Z4`, `Zm:<m>`.
    pub fn by_name(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "trivial" | "G0" | "Z1" => Ok(Self::trivial()),
            _ => {
                let m = name
                    .strip_prefix("Zm:")
                    .or_else(|| name.strip_prefix('Z'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
                Ok(Self::cyclic(m))
            }
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    /// Closure of a set of elements under multiplication.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(h) = queue.pop_front() {
            for &s in gens {
                let hs = self.mul(h, s);
                if !inside[hs] {
                    inside[hs] = true;
                    queue.push_back(hs);
                }
            }
        }
        (0..self.order()).filter(|&g| inside[g]).collect()
    }

    /// Lowest-index-first greedy generating set.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.order()];
        covered[self.identity] = true;
        for g in self.elements() {
            if !covered[g] {
                gens.push(g);
                for h in self.subgroup_generated(&gens) {
                    covered[h] = true;
                }
            }
        }
        gens
    }

    /// Whether `map: self -> target` respects multiplication.
    pub fn is_homomorphism_to(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&x| x < target.order())
            && self.elements().all(|a| {
                self.elements().all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    /// The regular action of the group on itself by left multiplication.
    pub fn regular_action(&self) -> GroupAction {
        let perms = self.elements().map(|g| self.table[g].clone()).collect();
        GroupAction::new(self.clone(), perms).expect("left multiplication is an action")
    }
}

/// An action of a finite group on `{0, .., degree-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    group: FiniteGroup,
    degree: usize,
    perms: Vec<Perm>,
}

/// One orbit with the stabilizer of its lowest-index point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitStabilizer {
    pub representative: usize,
    pub orbit: Vec<usize>,
    pub stabilizer: Vec<usize>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, perms: Vec<Perm>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let degree = perms.first().map_or(0, Vec::len);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != degree || !is_permutation(p) {
                return Err(Error::InvalidAction(format!("entry {g} is not a permutation of {degree} points")));
            }
        }
        if perms[group.identity()] != identity_perm(degree) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for g in group.elements() {
            for h in group.elements() {
                if perms[group.mul(g, h)] != compose(&perms[g], &perms[h]) {
                    return Err(Error::InvalidAction(format!(
                        "perm[{g}*{h}] != perm[{g}] o perm[{h}]"
                    )));
                }
            }
        }
        Ok(GroupAction { group, degree, perms })
    }

    /// Action determined by the images of the group's generators.
    pub fn from_generator_images(group: FiniteGroup, images: &[Perm]) -> Result<Self> {
        let gens = group.generators().to_vec();
        if images.len() != gens.len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        let degree = images.first().map_or(0, Vec::len);
        let perms = extend_generator_images(&group, &gens, images, degree)
            .ok_or_else(|| Error::InvalidAction("generator images violate a relation".into()))?;
        Self::new(group, perms)
    }

    pub fn trivial_on(group: FiniteGroup, degree: usize) -> Self {
        let perms = vec![identity_perm(degree); group.order()];
        GroupAction { group, degree, perms }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.perms.iter().map(|p| p[x]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.group.elements().filter(|&g| self.perms[g][x] == x).collect()
    }

    /// Orbit id of every point, orbits numbered by their lowest point.
    pub fn orbit_ids(&self) -> (Vec<usize>, usize) {
        let mut ids = vec![usize::MAX; self.degree];
        let mut count = 0;
        for x in 0..self.degree {
            if ids[x] == usize::MAX {
                for p in &self.perms {
                    ids[p[x]] = count;
                }
                count += 1;
            }
        }
        (ids, count)
    }

    pub fn orbits_and_stabilizers(&self) -> Vec<OrbitStabilizer> {
        let (ids, count) = self.orbit_ids();
        let mut out: Vec<OrbitStabilizer> = Vec::with_capacity(count);
        for x in 0..self.degree {
            if out.len() == ids[x] {
                out.push(OrbitStabilizer {
                    representative: x,
                    orbit: self.orbit(x),
                    stabilizer: self.stabilizer(x),
                });
            }
        }
        out
    }

    /// Pulls the action back along a homomorphism `hom: source -> self.group()`.
    pub fn pullback(&self, source: &FiniteGroup, hom: &[usize]) -> Result<Self> {
        if !source.is_homomorphism_to(&self.group, hom) {
            return Err(Error::InvalidAction("pullback map is not a homomorphism".into()));
        }
        let perms = hom.iter().map(|&g| self.perms[g].clone()).collect();
        GroupAction::new(source.clone(), perms)
    }
}

/// Extends generator images to the whole group, or `None` if some relation fails.
fn extend_generator_images(
    group: &FiniteGroup,
    gens: &[usize],
    images: &[Perm],
    degree: usize,
) -> Option<Vec<Perm>> {
    let mut map: Vec<Option<Perm>> = vec![None; group.order()];
    map[group.identity()] = Some(identity_perm(degree));
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(h) = queue.pop_front() {
        let img_h = map[h].clone().expect("queued elements are mapped");
        for (s, img_s) in gens.iter().zip(images) {
            let hs = group.mul(h, *s);
            let img = compose(&img_h, img_s);
            match &map[hs] {
                Some(existing) if *existing != img => return None,
                Some(_) => {}
                None => {
                    map[hs] = Some(img);
                    queue.push_back(hs);
                }
            }
        }
    }
    // Elements outside the generated subgroup stay unmapped.
    Some(map.into_iter().map(|p| p.unwrap_or_default()).collect())
}

/// Size guard for homomorphism enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomBudget {
    pub max_group_order: usize,
    pub max_degree: usize,
}

impl Default for HomBudget {
    fn default() -> Self {
        HomBudget { max_group_order: 12, max_degree: 8 }
    }
}

/// All permutations of `{0..j-1}` in lexicographic order.
fn all_permutations(j: usize) -> Vec<Perm> {
    fn rec(cur: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(j), &mut vec![false; j], &mut out);
    out
}

fn perm_order(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1;
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            order = num_integer::lcm(order, len);
        }
    }
    order
}

/// Enumerates `hom(G, S_j)` by backtracking over generator images; each
/// partial assignment is checked against every relation of the subgroup it
/// generates.
pub fn homs_to_symmetric(group: &FiniteGroup, j: usize, budget: HomBudget) -> Result<Vec<Vec<Perm>>> {
    check_hom_budget(group, j, budget)?;
    let gens = group.generators().to_vec();
    if gens.is_empty() {
        return Ok(vec![vec![identity_perm(j); group.order()]]);
    }
    let perms = all_permutations(j);
    let candidates: Vec<Vec<&Perm>> = gens
        .iter()
        .map(|&s| {
            let ord = group.element_order(s);
            perms.iter().filter(|p| ord % perm_order(p) == 0).collect()
        })
        .collect();

    fn rec(
        group: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<&Perm>],
        chosen: &mut Vec<Perm>,
        j: usize,
        out: &mut Vec<Vec<Perm>>,
    ) {
        let k = chosen.len();
        if k == gens.len() {
            let full = extend_generator_images(group, gens, chosen, j).expect("checked at last level");
            out.push(full);
            return;
        }
        for cand in &candidates[k] {
            chosen.push((*cand).clone());
            if extend_generator_images(group, &gens[..=k], chosen, j).is_some() {
                rec(group, gens, candidates, chosen, j, out);
            }
            chosen.pop();
        }
    }

    let results: Vec<Vec<Vec<Perm>>> = candidates[0]
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut chosen = vec![(*first).clone()];
            if extend_generator_images(group, &gens[..1], &chosen, j).is_some() {
                rec(group, &gens, &candidates, &mut chosen, j, &mut out);
            }
            out
        })
        .collect();
    Ok(results.into_iter().flatten().collect())
}

fn check_hom_budget(group: &FiniteGroup, j: usize, budget: HomBudget) -> Result<()> {
    if j == 0 {
        return Err(Error::BadParams("symmetric group degree must be positive".into()));
    }
    if group.order() > budget.max_group_order || j > budget.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "hom enumeration for |G| = {}, j = {} exceeds limits |G| <= {}, j <= {}",
            group.order(),
            j,
            budget.max_group_order,
            budget.max_degree
        )));
    }
    Ok(())
}

/// `|hom(G, S_j)|`.
pub fn count_homs_to_symmetric(group: &FiniteGroup, j: usize, budget: HomBudget) -> Result<u64> {
    Ok(homs_to_symmetric(group, j, budget)?.len() as u64)
}

/// `Σ_{j=1}^{N} j^{(j²-j)/2} · |hom(G, S_j)|`, the number of ε-balls that cover
/// a precompact family of G-spaces with covering number `N`.
pub fn covering_ball_count(group: &FiniteGroup, n: usize, budget: HomBudget) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::BadParams("covering number must be positive".into()));
    }
    let mut total = BigUint::zero();
    for j in 1..=n {
        let homs = count_homs_to_symmetric(group, j, budget)?;
        let exp = (j * j - j) / 2;
        let mut term = BigUint::one();
        let base = BigUint::from(j);
        for _ in 0..exp {
            term *= &base;
        }
        total += term * BigUint::from(homs);
    }
    Ok(total)
}
