use crate::error::{Error, Result};
use crate::perm::Perm;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Default ceiling on group order enforced by `FiniteGroup::from_generators`.
pub const DEFAULT_ORDER_BOUND: usize = 10_000;

/// Bound large enough for every named corpus group (Σ8 has order 40320).
pub const CORPUS_ORDER_BOUND: usize = 50_000;

pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n % p == 0 {
        part *= p;
        n /= p;
    }
    part
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            ps.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

struct GroupData {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    identity: u32,
    id: String,
}

/// A finite permutation group with fully enumerated, canonically ordered
/// element set.  Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.data.id == other.data.id
    }
}
impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}, degree={})", self.order(), self.degree())
    }
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, gens: &[Perm], bound: usize) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::domain("generator degree mismatch"));
            }
        }
        let mut elems: Vec<Perm> = vec![Perm::identity(degree)];
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(elems[0].clone(), ());
        let mut frontier = 0usize;
        while frontier < elems.len() {
            let cur = elems[frontier].clone();
            frontier += 1;
            for g in gens {
                let next = cur.compose(g);
                if !seen.contains_key(&next) {
                    if elems.len() >= bound {
                        return Err(Error::GroupTooLarge { bound });
                    }
                    seen.insert(next.clone(), ());
                    elems.push(next);
                }
            }
        }
        Self::from_elements(degree, elems, gens)
    }

    fn from_elements(degree: usize, mut elems: Vec<Perm>, gens: &[Perm]) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            index.insert(e.clone(), i as u32);
        }
        let inverses: Vec<u32> = elems
            .iter()
            .map(|e| *index.get(&e.inverse()).expect("closed under inverse"))
            .collect();
        let identity = *index
            .get(&Perm::identity(degree))
            .ok_or_else(|| Error::domain("element set lacks identity"))?;
        let generators: Vec<u32> = gens
            .iter()
            .map(|g| *index.get(g).expect("generators in closure"))
            .collect();
        let mut hasher = Sha256::new();
        hasher.update((degree as u64).to_le_bytes());
        for e in &elems {
            hasher.update(e.images());
        }
        let id = hex_prefix(&hasher.finalize(), 16);
        Ok(FiniteGroup {
            data: Arc::new(GroupData {
                degree,
                elements: elems,
                index,
                inverses,
                generators,
                identity,
                id,
            }),
        })
    }

    /// Rebuild a group from a closed element set (e.g. a subgroup viewed as a
    /// group in its own right, acting on the same points).
    pub fn from_closed_set(degree: usize, elems: Vec<Perm>) -> Result<Self> {
        let gens = greedy_generators(&elems);
        Self::from_elements(degree, elems, &gens)
    }

    pub fn degree(&self) -> usize {
        self.data.degree
    }
    pub fn order(&self) -> u64 {
        self.data.elements.len() as u64
    }
    pub fn id(&self) -> &str {
        &self.data.id
    }
    pub fn identity(&self) -> u32 {
        self.data.identity
    }
    pub fn element(&self, i: u32) -> &Perm {
        &self.data.elements[i as usize]
    }
    pub fn elements(&self) -> &[Perm] {
        &self.data.elements
    }
    pub fn generator_ids(&self) -> &[u32] {
        &self.data.generators
    }
    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.data.index.get(p).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.element(a).compose(self.element(b));
        *self.data.index.get(&p).expect("closed under composition")
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.data.inverses[a as usize]
    }

    /// g x g^{-1}
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        let p = self.element(g).conjugate(self.element(x));
        *self.data.index.get(&p).expect("closed under conjugation")
    }

    pub fn element_order(&self, a: u32) -> u64 {
        self.element(a).order()
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.data.generators;
        gens.iter().all(|&a| {
            gens.iter().all(|&b| {
                self.element(a).compose(self.element(b)) == self.element(b).compose(self.element(a))
            })
        })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_ids_unchecked(self.clone(), vec![self.identity()], vec![])
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let ids: Vec<u32> = (0..self.order() as u32).collect();
        Subgroup::from_sorted_ids_unchecked(self.clone(), ids, self.data.generators.clone())
    }

    /// Closure of a set of element ids inside this group.
    pub fn closure_ids(&self, gens: &[u32]) -> Vec<u32> {
        let n = self.order() as usize;
        let mut member = FixedBitSet::new(n);
        let mut out: Vec<u32> = vec![self.identity()];
        member.insert(self.identity() as usize);
        let mut frontier = 0usize;
        while frontier < out.len() {
            let cur = out[frontier];
            frontier += 1;
            for &g in gens {
                let next = self.mul(cur, g);
                if !member.contains(next as usize) {
                    member.insert(next as usize);
                    out.push(next);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn subgroup_from_gens(&self, gens: &[u32]) -> Subgroup {
        let ids = self.closure_ids(gens);
        Subgroup::from_sorted_ids_unchecked(self.clone(), ids, gens.to_vec())
    }

    /// Validates closure under composition and inverse.
    pub fn subgroup_from_ids(&self, mut ids: Vec<u32>) -> Result<Subgroup> {
        ids.sort_unstable();
        ids.dedup();
        let member: std::collections::HashSet<u32> = ids.iter().copied().collect();
        if !member.contains(&self.identity()) {
            return Err(Error::domain("subgroup must contain the identity"));
        }
        for &a in &ids {
            if !member.contains(&self.inv(a)) {
                return Err(Error::domain("set not closed under inverse"));
            }
            for &b in &ids {
                if !member.contains(&self.mul(a, b)) {
                    return Err(Error::domain("set not closed under composition"));
                }
            }
        }
        let gens = self.greedy_subgroup_gens(&ids);
        Ok(Subgroup::from_sorted_ids_unchecked(self.clone(), ids, gens))
    }

    fn greedy_subgroup_gens(&self, sorted_ids: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut have: Vec<u32> = vec![self.identity()];
        for &x in sorted_ids {
            if have.binary_search(&x).is_err() {
                gens.push(x);
                have = self.closure_ids(&gens);
                if have.len() == sorted_ids.len() {
                    break;
                }
            }
        }
        gens
    }

    /// C_G(set): all g commuting with every listed element.
    pub fn centralizer_of(&self, elems: &[u32]) -> Subgroup {
        let perms: Vec<&Perm> = elems.iter().map(|&x| self.element(x)).collect();
        let ids: Vec<u32> = (0..self.order() as u32)
            .filter(|&g| {
                let gp = self.element(g);
                perms
                    .iter()
                    .all(|x| gp.compose(x) == x.compose(gp))
            })
            .collect();
        let gens = self.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.clone(), ids, gens)
    }

    pub fn centralizer(&self, p: &Subgroup) -> Subgroup {
        self.centralizer_of(p.gens())
    }

    /// N_G(P) = {g : gPg^{-1} = P}.
    pub fn normalizer(&self, p: &Subgroup) -> Subgroup {
        let ids: Vec<u32> = (0..self.order() as u32)
            .filter(|&g| p.gens().iter().all(|&x| p.contains(self.conj(g, x))))
            .collect();
        let gens = self.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.clone(), ids, gens)
    }

    pub fn center(&self) -> Subgroup {
        let gens: Vec<u32> = self.data.generators.clone();
        self.centralizer_of(&gens)
    }

    /// Full transporter {g ∈ G : g P g^{-1} ≤ Q}.
    pub fn transporter_all(&self, p: &Subgroup, q: &Subgroup) -> Vec<u32> {
        if p.order() > q.order() {
            return Vec::new();
        }
        (0..self.order() as u32)
            .filter(|&g| p.gens().iter().all(|&x| q.contains(self.conj(g, x))))
            .collect()
    }

    /// One representative per coset g·C_G(P) inside the transporter; the list
    /// is in bijection with Hom_G(P, Q).
    pub fn transporter_reps(&self, p: &Subgroup, q: &Subgroup) -> Vec<u32> {
        let full = self.transporter_all(p, q);
        let cent = self.centralizer(p);
        coset_reps(self, &full, cent.elems())
    }

    /// A Sylow p-subgroup, constructed by greedy p-element closure with
    /// normalizer growth; deterministic.
    pub fn sylow(&self, p: u64) -> Subgroup {
        let target = p_part(self.order(), p);
        let mut current = self.trivial_subgroup();
        while current.order() < target {
            let norm = self.normalizer(&current);
            let next = norm
                .elems()
                .iter()
                .copied()
                .find(|&x| {
                    !current.contains(x) && {
                        let o = self.element_order(x);
                        o > 1 && o == p_part(o, p)
                    }
                })
                .expect("normalizer of a non-Sylow p-subgroup contains a new p-element");
            let mut gens = current.gens().to_vec();
            gens.push(next);
            current = self.subgroup_from_gens(&gens);
        }
        current
    }

    /// O_p(G): the largest normal p-subgroup, as the intersection of the
    /// conjugates of one Sylow p-subgroup.
    pub fn o_p(&self, p: u64) -> Subgroup {
        let syl = self.sylow(p);
        let mut member = FixedBitSet::new(self.order() as usize);
        for &x in syl.elems() {
            member.insert(x as usize);
        }
        for g in 0..self.order() as u32 {
            let mut keep = FixedBitSet::new(self.order() as usize);
            let mut any_removed = false;
            for &x in syl.elems() {
                let y = self.conj(g, x);
                if member.contains(y as usize) {
                    keep.insert(y as usize);
                } else {
                    any_removed = true;
                }
            }
            let _ = any_removed;
            member = intersect_via(&member, &keep);
            if member.count() == 1 {
                break;
            }
        }
        let ids: Vec<u32> = member.iter().map(|i| i as u32).collect();
        let gens = self.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.clone(), ids, gens)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let n = self.order() as usize;
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n as u32 {
            if assigned[x as usize] {
                continue;
            }
            let mut orbit = vec![x];
            assigned[x as usize] = true;
            let mut frontier = 0;
            while frontier < orbit.len() {
                let cur = orbit[frontier];
                frontier += 1;
                for &g in &self.data.generators {
                    let y = self.conj(g, cur);
                    if !assigned[y as usize] {
                        assigned[y as usize] = true;
                        orbit.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        classes
    }

    /// All normal subgroups, by closing unions of conjugacy classes.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        let mut found: HashMap<Vec<u32>, Subgroup> = HashMap::new();
        let triv = self.trivial_subgroup();
        let mut queue = vec![triv.elems().to_vec()];
        found.insert(triv.elems().to_vec(), triv);
        while let Some(cur) = queue.pop() {
            for cls in &classes {
                if cls.iter().all(|x| cur.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = self.greedy_subgroup_gens(&cur);
                gens.extend_from_slice(cls);
                let bigger = self.closure_ids(&gens);
                if !found.contains_key(&bigger) {
                    let g = self.greedy_subgroup_gens(&bigger);
                    found.insert(
                        bigger.clone(),
                        Subgroup::from_sorted_ids_unchecked(self.clone(), bigger.clone(), g),
                    );
                    queue.push(bigger);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_values().collect();
        out.sort_by_key(|s| (s.order(), s.elems().to_vec()));
        out
    }

    /// The quotient G/N as a permutation group on the cosets of N, together
    /// with the projection map on element ids.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
        if !n.is_normal() {
            return Err(Error::domain("quotient by a non-normal subgroup"));
        }
        let order = self.order() as usize;
        let index = order / n.order() as usize;
        if index > 250 {
            return Err(Error::domain(format!(
                "quotient degree {index} exceeds permutation degree limit"
            )));
        }
        let mut coset_of = vec![u32::MAX; order];
        let mut reps: Vec<u32> = Vec::with_capacity(index);
        for x in 0..order as u32 {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &h in n.elems() {
                coset_of[self.mul(x, h) as usize] = c;
            }
        }
        // left multiplication action on cosets
        let coset_perm = |g: u32| -> Perm {
            let images: Vec<u8> = reps
                .iter()
                .map(|&r| coset_of[self.mul(g, r) as usize] as u8)
                .collect();
            Perm::from_images(images).expect("coset action is a permutation")
        };
        let mut quotient_elems: Vec<Perm> = Vec::new();
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        for g in 0..order as u32 {
            let p = coset_perm(g);
            if !seen.contains_key(&p) {
                seen.insert(p.clone(), ());
                quotient_elems.push(p);
            }
        }
        debug_assert_eq!(quotient_elems.len(), index);
        let q = FiniteGroup::from_closed_set(index, quotient_elems)?;
        let projection: Vec<u32> = (0..order as u32)
            .map(|g| q.index_of(&coset_perm(g)).expect("projection lands in quotient"))
            .collect();
        Ok((q, projection))
    }
}

fn hex_prefix(bytes: &[u8], len: usize) -> String {
    let mut s = String::with_capacity(len);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
        if s.len() >= len {
            break;
        }
    }
    s.truncate(len);
    s
}

fn greedy_generators(elems: &[Perm]) -> Vec<Perm> {
    let degree = elems.first().map(|p| p.degree()).unwrap_or(0);
    let mut sorted: Vec<Perm> = elems.to_vec();
    sorted.sort_unstable();
    let mut gens: Vec<Perm> = Vec::new();
    let mut have: Vec<Perm> = vec![Perm::identity(degree)];
    for e in &sorted {
        if have.binary_search(e).is_err() {
            gens.push(e.clone());
            have = perm_closure(degree, &gens);
            if have.len() == sorted.len() {
                break;
            }
        }
    }
    gens
}

fn perm_closure(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut out = vec![Perm::identity(degree)];
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(out[0].clone(), ());
    let mut frontier = 0;
    while frontier < out.len() {
        let cur = out[frontier].clone();
        frontier += 1;
        for g in gens {
            let next = cur.compose(g);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                out.push(next);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One representative per coset g·H among `pool`, assuming `pool` is a union
/// of such cosets.  Representatives are the least element id of each coset.
pub fn coset_reps(g: &FiniteGroup, pool: &[u32], h_elems: &[u32]) -> Vec<u32> {
    let mut covered = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for &x in pool {
        if covered.contains(&x) {
            continue;
        }
        reps.push(x);
        for &h in h_elems {
            covered.insert(g.mul(x, h));
        }
    }
    reps
}

/// A subgroup of an ambient `FiniteGroup`, stored as a sorted element-id set
/// plus a small generating set and a membership bitset.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    elems: Arc<Vec<u32>>,
    gens: Arc<Vec<u32>>,
    member: Arc<FixedBitSet>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elems == other.elems
    }
}
impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order={})", self.order())
    }
}

impl Subgroup {
    pub(crate) fn from_sorted_ids_unchecked(
        parent: FiniteGroup,
        elems: Vec<u32>,
        gens: Vec<u32>,
    ) -> Self {
        let mut member = FixedBitSet::new(parent.order() as usize);
        for &x in &elems {
            member.insert(x as usize);
        }
        Subgroup {
            parent,
            elems: Arc::new(elems),
            gens: Arc::new(gens),
            member: Arc::new(member),
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }
    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }
    pub fn elems(&self) -> &[u32] {
        &self.elems
    }
    pub fn gens(&self) -> &[u32] {
        &self.gens
    }
    pub fn contains(&self, x: u32) -> bool {
        self.member.contains(x as usize)
    }
    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.elems.iter().all(|&x| self.contains(x))
    }

    pub fn is_normal(&self) -> bool {
        self.parent
            .generator_ids()
            .iter()
            .all(|&g| self.gens.iter().all(|&x| self.contains(self.parent.conj(g, x))))
    }

    pub fn is_normalized_by(&self, other: &Subgroup) -> bool {
        other
            .gens()
            .iter()
            .all(|&g| self.gens.iter().all(|&x| self.contains(self.parent.conj(g, x))))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| {
            self.gens.iter().all(|&b| {
                self.parent.mul(a, b) == self.parent.mul(b, a)
            })
        })
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.order() == p_part(self.order(), p)
    }

    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.is_abelian()
            && self
                .elems
                .iter()
                .all(|&x| x == self.parent.identity() || self.parent.element_order(x) == p)
    }

    /// Conjugate subgroup g·self·g^{-1}.
    pub fn conjugate_by(&self, g: u32) -> Subgroup {
        let ids: Vec<u32> = {
            let mut v: Vec<u32> = self.elems.iter().map(|&x| self.parent.conj(g, x)).collect();
            v.sort_unstable();
            v
        };
        let gens: Vec<u32> = self.gens.iter().map(|&x| self.parent.conj(g, x)).collect();
        Subgroup::from_sorted_ids_unchecked(self.parent.clone(), ids, gens)
    }

    /// The subgroup as a standalone group on the same points.
    pub fn to_group(&self) -> FiniteGroup {
        let perms: Vec<Perm> = self.elems.iter().map(|&x| self.parent.element(x).clone()).collect();
        FiniteGroup::from_closed_set(self.parent.degree(), perms).expect("subgroup is closed")
    }

    /// Intersection with another subgroup of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let ids: Vec<u32> = self
            .elems
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        let gens = self.parent.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.parent.clone(), ids, gens)
    }

    /// Element-set product H·K (a plain subset; callers check groupness).
    pub fn product_set(&self, other: &Subgroup) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        let mut seen = FixedBitSet::new(self.parent.order() as usize);
        for &h in self.elems.iter() {
            for &k in other.elems.iter() {
                let x = self.parent.mul(h, k);
                if !seen.contains(x as usize) {
                    seen.insert(x as usize);
                    out.push(x);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Centralizer computed inside this subgroup: C_H(set).
    pub fn centralizer_within(&self, elems: &[u32]) -> Subgroup {
        let perms: Vec<&Perm> = elems.iter().map(|&x| self.parent.element(x)).collect();
        let ids: Vec<u32> = self
            .elems
            .iter()
            .copied()
            .filter(|&g| {
                let gp = self.parent.element(g);
                perms.iter().all(|x| gp.compose(x) == x.compose(gp))
            })
            .collect();
        let gens = self.parent.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.parent.clone(), ids, gens)
    }

    /// Normalizer computed inside this subgroup: N_H(P).
    pub fn normalizer_within(&self, p: &Subgroup) -> Subgroup {
        let ids: Vec<u32> = self
            .elems
            .iter()
            .copied()
            .filter(|&g| p.gens().iter().all(|&x| p.contains(self.parent.conj(g, x))))
            .collect();
        let gens = self.parent.greedy_subgroup_gens(&ids);
        Subgroup::from_sorted_ids_unchecked(self.parent.clone(), ids, gens)
    }

    /// Z(H) for this subgroup.
    pub fn center_of(&self) -> Subgroup {
        self.centralizer_within(self.gens())
    }

    /// Φ(P) = ⟨commutators, p-th powers⟩ for a p-group.
    pub fn frattini(&self, p: u64) -> Result<Subgroup> {
        if !self.is_p_group(p) {
            return Err(Error::domain("Frattini subgroup requested on a non-p-group"));
        }
        let g = &self.parent;
        let mut gens: Vec<u32> = Vec::new();
        for &x in self.elems.iter() {
            // x^p
            let mut y = x;
            for _ in 1..p {
                y = g.mul(y, x);
            }
            gens.push(y);
        }
        for &x in self.elems.iter() {
            for &y in self.elems.iter() {
                // [x,y] = x y x^{-1} y^{-1}
                let c = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
                gens.push(c);
            }
        }
        gens.sort_unstable();
        gens.dedup();
        Ok(g.subgroup_from_gens(&gens))
    }

    /// Ω_1(A) = {x : x^p = 1} for an abelian p-group.
    pub fn omega_1(&self, p: u64) -> Result<Subgroup> {
        if !self.is_abelian() || !self.is_p_group(p) {
            return Err(Error::domain("Ω_1 requested on a non-abelian or non-p input"));
        }
        let g = &self.parent;
        let ids: Vec<u32> = self
            .elems
            .iter()
            .copied()
            .filter(|&x| {
                let mut y = x;
                for _ in 1..p {
                    y = g.mul(y, x);
                }
                y == g.identity()
            })
            .collect();
        let gens = g.greedy_subgroup_gens(&ids);
        Ok(Subgroup::from_sorted_ids_unchecked(g.clone(), ids, gens))
    }

    /// Deterministic key for dedup maps.
    pub fn key(&self) -> Vec<u32> {
        self.elems.to_vec()
    }
}

/// Minimal fixed-size bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedBitSet {
    bits: Vec<u64>,
    len: usize,
}

impl FixedBitSet {
    pub fn new(len: usize) -> Self {
        FixedBitSet {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }
    pub fn insert(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }
    pub fn count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

fn intersect_via(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    for (x, y) in out.bits.iter_mut().zip(b.bits.iter()) {
        *x &= *y;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn s3_enumeration() {
        let g = corpus::named("S3").unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn s4_from_explicit_generators() {
        let gens = vec![
            Perm::parse_cycles("(1 2)", 4).unwrap(),
            Perm::parse_cycles("(1 2 3 4)", 4).unwrap(),
        ];
        let g = FiniteGroup::from_generators(4, &gens, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn closure_bound_enforced() {
        let gens = vec![Perm::parse_cycles("(1 2 3 4 5 6 7 8 9 10)", 10).unwrap(),
                        Perm::parse_cycles("(1 2)", 10).unwrap()];
        let err = FiniteGroup::from_generators(10, &gens, 1000).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { .. }));
    }

    #[test]
    fn centralizer_normalizer_of_klein_four_in_s4() {
        let g = corpus::named("S4").unwrap();
        let v4 = g.o_p(2);
        assert_eq!(v4.order(), 4);
        assert_eq!(g.centralizer(&v4).order(), 4);
        assert_eq!(g.normalizer(&v4).order(), 24);
    }

    #[test]
    fn centralizer_normalizer_of_transposition_in_s3() {
        let g = corpus::named("S3").unwrap();
        let t = g
            .index_of(&Perm::parse_cycles("(1 2)", 3).unwrap())
            .unwrap();
        let p = g.subgroup_from_gens(&[t]);
        let c = g.centralizer(&p);
        assert_eq!(c.order(), 2);
        assert_eq!(c.elems(), p.elems());
        assert_eq!(g.normalizer(&p).order(), 2);
    }

    #[test]
    fn trivial_subgroup_has_full_stabilizers() {
        let g = corpus::named("S4").unwrap();
        let t = g.trivial_subgroup();
        assert_eq!(g.centralizer(&t).order(), 24);
        assert_eq!(g.normalizer(&t).order(), 24);
    }

    #[test]
    fn characteristic_subgroups_examples() {
        let s4 = corpus::named("S4").unwrap();
        assert_eq!(s4.o_p(2).order(), 4);
        assert_eq!(s4.center().order(), 1);

        let d8 = corpus::named("D8").unwrap();
        assert_eq!(d8.center().order(), 2);
        let d8s = d8.full_subgroup();
        assert_eq!(d8s.frattini(2).unwrap().order(), 2);

        let c4 = FiniteGroup::from_generators(
            4,
            &[Perm::parse_cycles("(1 2 3 4)", 4).unwrap()],
            100,
        )
        .unwrap();
        let full = c4.full_subgroup();
        assert_eq!(full.omega_1(2).unwrap().order(), 2);
        assert!(full.omega_1(2).unwrap().is_elementary_abelian(2));
    }

    #[test]
    fn sylow_examples() {
        let s4 = corpus::named("S4").unwrap();
        let syl2 = s4.sylow(2);
        assert_eq!(syl2.order(), 8);
        // D8 signature: nonabelian with exactly 2 elements of order 4
        assert!(!syl2.is_abelian());
        let order4 = syl2
            .elems()
            .iter()
            .filter(|&&x| s4.element_order(x) == 4)
            .count();
        assert_eq!(order4, 2);

        let s3 = corpus::named("S3").unwrap();
        let syl3 = s3.sylow(3);
        assert_eq!(syl3.order(), 3);

        let c6 = FiniteGroup::from_generators(
            6,
            &[Perm::parse_cycles("(1 2 3 4 5 6)", 6).unwrap()],
            100,
        )
        .unwrap();
        assert_eq!(c6.sylow(5).order(), 1);
    }

    #[test]
    fn sylow_is_deterministic() {
        let g = corpus::named("S5").unwrap();
        let a = g.sylow(2);
        let b = g.sylow(2);
        assert_eq!(a.elems(), b.elems());
    }

    #[test]
    fn transporter_examples() {
        let s3 = corpus::named("S3").unwrap();
        let p = s3.subgroup_from_gens(&[s3
            .index_of(&Perm::parse_cycles("(1 2)", 3).unwrap())
            .unwrap()]);
        let q = s3.subgroup_from_gens(&[s3
            .index_of(&Perm::parse_cycles("(1 3)", 3).unwrap())
            .unwrap()]);
        assert_eq!(s3.transporter_reps(&p, &q).len(), 1);

        // abelian G: exactly one morphism G -> G
        let c4 = FiniteGroup::from_generators(
            4,
            &[Perm::parse_cycles("(1 2 3 4)", 4).unwrap()],
            100,
        )
        .unwrap();
        let full = c4.full_subgroup();
        assert_eq!(c4.transporter_reps(&full, &full).len(), 1);

        // |Hom_G(G,G)| = |Inn(G)| in general
        let full3 = s3.full_subgroup();
        assert_eq!(s3.transporter_reps(&full3, &full3).len(), 6);

        let s4 = corpus::named("S4").unwrap();
        let v4 = s4.o_p(2);
        let syl = s4.sylow(2);
        assert_eq!(s4.transporter_reps(&v4, &syl).len(), 6);
    }

    #[test]
    fn transporter_reps_generate_aut_g_of_correct_order() {
        let s4 = corpus::named("S4").unwrap();
        for sub in [s4.o_p(2), s4.sylow(2), s4.sylow(3)] {
            let reps = s4.transporter_reps(&sub, &sub);
            let n = s4.normalizer(&sub);
            let c = s4.centralizer(&sub);
            assert_eq!(reps.len() as u64, n.order() / c.order());
        }
    }

    #[test]
    fn quotient_s4_by_v4_is_s3() {
        let s4 = corpus::named("S4").unwrap();
        let v4 = s4.o_p(2);
        let (q, proj) = s4.quotient(&v4).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        // projection is a homomorphism
        for a in 0..24u32 {
            for b in 0..24u32 {
                assert_eq!(q.mul(proj[a as usize], proj[b as usize]), proj[s4.mul(a, b) as usize]);
            }
        }
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let s4 = corpus::named("S4").unwrap();
        let normals = s4.normal_subgroups();
        let orders: Vec<u64> = normals.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
    }

    #[test]
    fn frattini_argument_on_corpus_pairs() {
        // H ⊴ G, T ∈ Syl_p(H) ⇒ G = H · N_G(T)
        for name in ["S4", "S5", "A5"] {
            let g = corpus::named(name).unwrap();
            for h in g.normal_subgroups() {
                if h.order() == 1 {
                    continue;
                }
                for p in prime_divisors(h.order()) {
                    let hg = h.to_group();
                    let t_in_h = hg.sylow(p);
                    let t_ids: Vec<u32> = t_in_h
                        .elems()
                        .iter()
                        .map(|&x| g.index_of(hg.element(x)).unwrap())
                        .collect();
                    let t = g.subgroup_from_ids(t_ids).unwrap();
                    let n = g.normalizer(&t);
                    let prod = h.product_set(&n);
                    assert_eq!(prod.len() as u64, g.order(), "Frattini fails for {name}");
                }
            }
        }
    }
}
