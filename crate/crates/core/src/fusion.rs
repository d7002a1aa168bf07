use crate::error::{Error, Result};
use crate::group::{coset_reps, p_part, FiniteGroup, Subgroup};
use crate::lattice::{self, PClasses};
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

/// The fusion system F_S(G) of a finite group at a prime: all subgroups of a
/// fixed Sylow p-subgroup S, with morphisms the conjugation maps carried by
/// elements of G.  Construction enumerates the subgroup lattice of S and
/// fuses it into F-conjugacy classes with one transporter sweep per class.
pub struct FusionSystem {
    g: FiniteGroup,
    s: Subgroup,
    p: u64,
    classes: PClasses,
    /// |C_S(P)|, |N_S(P)| per lattice index
    c_s_order: Vec<u64>,
    n_s_order: Vec<u64>,
    /// per class: max |C_S|, max |N_S| over members, centric flag
    max_c_s: Vec<u64>,
    max_n_s: Vec<u64>,
    centric: Vec<bool>,
    /// memoized C_G(rep) per class and per lattice index
    cg_class: RwLock<HashMap<usize, Arc<Subgroup>>>,
    /// memoized transporter rep lists: source lattice index -> target lattice
    /// index -> coset representatives (mod C_G(source))
    hom_cache: RwLock<HashMap<usize, Arc<HashMap<usize, Vec<u32>>>>>,
}

/// A morphism of F: conjugation by `witness`, from `src` into `dst` (lattice
/// indices).  Two witnesses induce the same morphism iff they lie in the same
/// coset g·C_G(src); stored witnesses are canonical coset representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FMorphism {
    pub src: usize,
    pub dst: usize,
    pub witness: u32,
}

/// An F-conjugacy class of subgroups of S.
#[derive(Clone, Debug)]
pub struct FClass {
    pub class: usize,
    pub members: Vec<usize>,
}

/// A conjugation-invariant interval of subgroups of S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub members: Vec<usize>,
    pub f_invariant: bool,
    pub closed_under_overgroups: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatusFlags {
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub f_centric: bool,
}

#[derive(Debug)]
pub struct SaturationReport {
    pub saturated: bool,
    pub violations: Vec<String>,
}

impl FusionSystem {
    pub fn new(g: &FiniteGroup, p: u64, lattice_bound: u64) -> Result<Self> {
        let classes = lattice::p_subgroup_classes(g, p, lattice_bound)?;
        Self::from_classes(g.clone(), p, classes)
    }

    /// Build with an explicitly given Sylow subgroup (used by normalizer
    /// systems so the object set is literally the subgroups of N_S(Q)).
    pub fn with_sylow(g: &FiniteGroup, s: &Subgroup, p: u64, lattice_bound: u64) -> Result<Self> {
        if s.order() != p_part(g.order(), p) || !s.is_p_group(p) {
            return Err(Error::domain("given subgroup is not a Sylow p-subgroup"));
        }
        let classes = p_classes_with_sylow(g, s, p, lattice_bound)?;
        Self::from_classes(g.clone(), p, classes)
    }

    fn from_classes(g: FiniteGroup, p: u64, classes: PClasses) -> Result<Self> {
        let s = classes.sylow.clone();
        let n = classes.lattice.len();
        let mut c_s_order = Vec::with_capacity(n);
        let mut n_s_order = Vec::with_capacity(n);
        for h in &classes.lattice {
            c_s_order.push(s.centralizer_within(h.gens()).order());
            n_s_order.push(s.normalizer_within(h).order());
        }
        let k = classes.class_count();
        let mut max_c_s = vec![0u64; k];
        let mut max_n_s = vec![0u64; k];
        let mut centric = vec![true; k];
        for i in 0..n {
            let c = classes.class_of[i];
            max_c_s[c] = max_c_s[c].max(c_s_order[i]);
            max_n_s[c] = max_n_s[c].max(n_s_order[i]);
            // F-centric: C_S(Q) ≤ Q for all members Q
            let h = &classes.lattice[i];
            let cs = s.centralizer_within(h.gens());
            if !h.contains_subgroup(&cs) {
                centric[c] = false;
            }
        }
        Ok(FusionSystem {
            g,
            s,
            p,
            classes,
            c_s_order,
            n_s_order,
            max_c_s,
            max_n_s,
            centric,
            cg_class: RwLock::new(HashMap::new()),
            hom_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }
    pub fn sylow(&self) -> &Subgroup {
        &self.s
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.classes.lattice
    }
    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.classes.lattice[i]
    }
    pub fn class_count(&self) -> usize {
        self.classes.class_count()
    }
    pub fn class_of(&self, i: usize) -> usize {
        self.classes.class_of[i]
    }
    pub fn rep_index(&self, class: usize) -> usize {
        self.classes.reps[class]
    }
    pub fn rep(&self, class: usize) -> &Subgroup {
        self.classes.rep(class)
    }
    pub fn normalizer_in_g(&self, class: usize) -> &Subgroup {
        &self.classes.normalizers[class]
    }
    pub fn class_members(&self, class: usize) -> Vec<usize> {
        self.classes.members(class)
    }
    pub fn n_s_order(&self, i: usize) -> u64 {
        self.n_s_order[i]
    }
    pub fn c_s_order(&self, i: usize) -> u64 {
        self.c_s_order[i]
    }

    /// Lattice index of a subgroup of S given by its element ids.
    pub fn index_of_subgroup(&self, h: &Subgroup) -> Option<usize> {
        self.classes
            .lattice
            .binary_search_by_key(&(h.order(), h.key()), |x| (x.order(), x.key()))
            .ok()
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn sylow_index(&self) -> usize {
        self.classes.lattice.len() - 1
    }

    /// C_G(rep of class), memoized.
    pub fn centralizer_of_class(&self, class: usize) -> Arc<Subgroup> {
        if let Some(c) = self.cg_class.read().unwrap().get(&class) {
            return c.clone();
        }
        let rep = self.classes.rep(class);
        let c = Arc::new(self.g.centralizer(rep));
        self.cg_class.write().unwrap().insert(class, c.clone());
        c
    }

    /// Transporter coset representatives from lattice index `src` to every
    /// other lattice member, computed in a single sweep over G and memoized.
    /// The representative list for (src, dst) is in bijection with
    /// Hom_F(src, dst).
    pub fn hom_witnesses(&self, src: usize, dst: usize) -> Vec<u32> {
        if let Some(m) = self.hom_cache.read().unwrap().get(&src) {
            return m.get(&dst).cloned().unwrap_or_default();
        }
        let map = self.sweep_from(src);
        let out = map.get(&dst).cloned().unwrap_or_default();
        self.hom_cache.write().unwrap().insert(src, Arc::new(map));
        out
    }

    fn sweep_from(&self, src: usize) -> HashMap<usize, Vec<u32>> {
        let h = &self.classes.lattice[src];
        let cg = {
            // centralizer of the source subgroup itself (not its class rep)
            self.g.centralizer(h)
        };
        // full transporters into S, bucketed by image subgroup
        let mut full: HashMap<usize, Vec<u32>> = HashMap::new();
        for gg in 0..self.g.order() as u32 {
            let mut inside_s = true;
            for &x in h.gens() {
                if !self.s.contains(self.g.conj(gg, x)) {
                    inside_s = false;
                    break;
                }
            }
            if !inside_s {
                continue;
            }
            let image = h.conjugate_by(gg);
            if let Some(j) = self.index_of_subgroup(&image) {
                full.entry(j).or_default().push(gg);
            }
        }
        // a morphism src -> dst exists for each coset g·C_G(src) with
        // g·src·g^{-1} ≤ dst: collect transporters into dst by unioning the
        // buckets of all lattice members contained in dst
        let mut out: HashMap<usize, Vec<u32>> = HashMap::new();
        for (j, target) in self.classes.lattice.iter().enumerate() {
            if target.order() < h.order() {
                continue;
            }
            let mut pool: Vec<u32> = Vec::new();
            for (&img, bucket) in &full {
                if target.contains_subgroup(&self.classes.lattice[img]) {
                    pool.extend_from_slice(bucket);
                }
            }
            if pool.is_empty() {
                continue;
            }
            pool.sort_unstable();
            let reps = coset_reps(&self.g, &pool, cg.elems());
            out.insert(j, reps);
        }
        out
    }

    /// Hom_F(P, Q) as witness-carried morphisms.
    pub fn hom_f(&self, src: usize, dst: usize) -> Vec<FMorphism> {
        self.hom_witnesses(src, dst)
            .into_iter()
            .map(|w| FMorphism {
                src,
                dst,
                witness: w,
            })
            .collect()
    }

    /// Image subgroup of a morphism (a lattice index).
    pub fn image_of(&self, m: &FMorphism) -> usize {
        let img = self.classes.lattice[m.src].conjugate_by(m.witness);
        self.index_of_subgroup(&img).expect("image is in the lattice")
    }

    pub fn f_class(&self, i: usize) -> FClass {
        let class = self.classes.class_of[i];
        FClass {
            class,
            members: self.classes.members(class),
        }
    }

    pub fn status_flags(&self, i: usize) -> StatusFlags {
        let c = self.classes.class_of[i];
        StatusFlags {
            fully_normalized: self.n_s_order[i] == self.max_n_s[c],
            fully_centralized: self.c_s_order[i] == self.max_c_s[c],
            f_centric: self.centric[c],
        }
    }

    pub fn is_centric_class(&self, class: usize) -> bool {
        self.centric[class]
    }

    /// All F-centric classes, ordered by representative.
    pub fn centric_classes(&self) -> Vec<usize> {
        (0..self.class_count())
            .filter(|&c| self.centric[c])
            .collect()
    }

    /// A fully normalized member of the class (least lattice index).
    pub fn fully_normalized_member(&self, class: usize) -> usize {
        self.classes
            .members(class)
            .into_iter()
            .find(|&i| self.n_s_order[i] == self.max_n_s[class])
            .expect("every class has a fully normalized member")
    }

    /// |Aut_F(P)| = |N_G(P)| / |C_G(P)| (class invariant).
    pub fn aut_f_order(&self, class: usize) -> u64 {
        self.classes.normalizers[class].order() / self.centralizer_of_class(class).order()
    }

    /// Definition of saturation, checked literally: axiom (I) on a fully
    /// normalized member of every class, axiom (II) for every morphism from
    /// a class representative into S whose image is fully centralized.
    pub fn check_saturation(&self) -> SaturationReport {
        let mut violations = Vec::new();
        for c in 0..self.class_count() {
            let i = self.fully_normalized_member(c);
            // (I): fully normalized ⇒ fully centralized and Aut_S(P) Sylow in Aut_F(P)
            if self.c_s_order[i] != self.max_c_s[c] {
                violations.push(format!(
                    "axiom I: fully normalized member of class {c} is not fully centralized"
                ));
            }
            let aut_s = self.n_s_order[i] / self.c_s_order[i].min(self.n_s_order[i]);
            let aut_f = self.aut_f_order(c);
            if aut_s != p_part(aut_f, self.p) {
                violations.push(format!(
                    "axiom I: |Aut_S(P)| = {aut_s} is not the {}-part of |Aut_F(P)| = {aut_f} (class {c})",
                    self.p
                ));
            }
        }
        // (II)
        for c in 0..self.class_count() {
            let p_idx = self.classes.reps[c];
            let p_sub = &self.classes.lattice[p_idx];
            let cg_p = self.g.centralizer(p_sub);
            for m in self.hom_f(p_idx, self.sylow_index()) {
                let img = self.image_of(&m);
                let img_class = self.classes.class_of[img];
                if self.c_s_order[img] != self.max_c_s[img_class] {
                    continue; // axiom applies only to fully centralized targets
                }
                if !self.axiom_two_extends(p_idx, &cg_p, m.witness, img) {
                    violations.push(format!(
                        "axiom II: morphism from class {c} (witness {}) admits no extension to N_phi",
                        m.witness
                    ));
                }
            }
        }
        SaturationReport {
            saturated: violations.is_empty(),
            violations,
        }
    }

    fn axiom_two_extends(&self, p_idx: usize, cg_p: &Subgroup, witness: u32, img: usize) -> bool {
        let g = &self.g;
        let p_sub = &self.classes.lattice[p_idx];
        let img_sub = &self.classes.lattice[img];
        let n_s_p = self.s.normalizer_within(p_sub);
        let n_s_img = self.s.normalizer_within(img_sub);
        // N_phi = { x in N_S(P) : w x w^{-1} in N_S(phi P)·C_G(phi P) }
        let cg_img = g.centralizer(img_sub);
        let mut n_phi_ids = Vec::new();
        for &x in n_s_p.elems() {
            let y = g.conj(witness, x);
            let mut ok = false;
            for &s in n_s_img.elems() {
                let z = g.mul(g.inv(s), y);
                if cg_img.contains(z) {
                    ok = true;
                    break;
                }
            }
            if ok {
                n_phi_ids.push(x);
            }
        }
        let n_phi = g
            .subgroup_from_ids(n_phi_ids)
            .expect("N_phi is a subgroup");
        debug_assert!(n_phi.contains_subgroup(p_sub));
        // extension: h in witness·C_G(P) with h·N_phi·h^{-1} ≤ S
        for &cc in cg_p.elems() {
            let h = g.mul(witness, cc);
            if n_phi.gens().iter().all(|&x| self.s.contains(g.conj(h, x))) {
                return true;
            }
        }
        false
    }

    /// Validate and build an interval from an explicit set of lattice indices.
    pub fn make_interval(&self, members: &[usize]) -> Result<Interval> {
        let set: HashSet<usize> = members.iter().copied().collect();
        // betweenness: P < Q < R with P, R in the set forces Q in it
        for &pi in &set {
            for &ri in &set {
                let (p_sub, r_sub) = (&self.classes.lattice[pi], &self.classes.lattice[ri]);
                if p_sub.order() >= r_sub.order() || !r_sub.contains_subgroup(p_sub) {
                    continue;
                }
                for (qi, q_sub) in self.classes.lattice.iter().enumerate() {
                    if set.contains(&qi) {
                        continue;
                    }
                    if q_sub.order() > p_sub.order()
                        && q_sub.order() < r_sub.order()
                        && q_sub.contains_subgroup(p_sub)
                        && r_sub.contains_subgroup(q_sub)
                    {
                        return Err(Error::NotAnInterval(format!(
                            "omits a subgroup of order {} between orders {} and {}",
                            q_sub.order(),
                            p_sub.order(),
                            r_sub.order()
                        )));
                    }
                }
            }
        }
        let f_invariant = set
            .iter()
            .all(|&i| self.classes.members(self.classes.class_of[i]).iter().all(|m| set.contains(m)));
        let closed_under_overgroups = set.contains(&self.sylow_index());
        let mut members: Vec<usize> = set.into_iter().collect();
        members.sort_unstable();
        Ok(Interval {
            members,
            f_invariant,
            closed_under_overgroups,
        })
    }

    pub fn interval_from_predicate(&self, pred: impl Fn(usize) -> bool) -> Result<Interval> {
        let members: Vec<usize> = (0..self.classes.lattice.len()).filter(|&i| pred(i)).collect();
        self.make_interval(&members)
    }

    /// I(Y, S): all subgroups of S containing Y.
    pub fn overgroup_interval(&self, y: usize) -> Interval {
        let y_sub = &self.classes.lattice[y];
        let members: Vec<usize> = self
            .classes
            .lattice
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains_subgroup(y_sub))
            .map(|(i, _)| i)
            .collect();
        let f_invariant = members.iter().all(|&i| {
            self.classes
                .members(self.classes.class_of[i])
                .iter()
                .all(|m| members.contains(m))
        });
        Interval {
            members,
            f_invariant,
            closed_under_overgroups: true,
        }
    }

    /// The normalizer fusion system N_F(Q) = F_{N_S(Q)}(N_G(Q)) for a fully
    /// normalized Q.
    pub fn normalizer_system(&self, q: usize) -> Result<FusionSystem> {
        let flags = self.status_flags(q);
        if !flags.fully_normalized {
            return Err(Error::domain("normalizer system requires a fully normalized subgroup"));
        }
        let q_sub = &self.classes.lattice[q];
        let n_g = self.g.normalizer(q_sub);
        let n_s = self.s.normalizer_within(q_sub);
        debug_assert_eq!(
            n_s.order(),
            p_part(n_g.order(), self.p),
            "fully normalized subgroup: N_S(Q) is Sylow in N_G(Q)"
        );
        let n_group = n_g.to_group();
        let s_ids: Vec<u32> = n_s
            .elems()
            .iter()
            .map(|&x| n_group.index_of(self.g.element(x)).expect("N_S ≤ N_G"))
            .collect();
        let s_in_n = n_group.subgroup_from_ids(s_ids)?;
        FusionSystem::with_sylow(&n_group, &s_in_n, self.p, u64::MAX)
    }

    /// Morphism count identity oracle: |Hom_F(P,Q)| = |T_G(P,Q)| / |C_G(P)|.
    pub fn hom_count_oracle(&self, src: usize, dst: usize) -> u64 {
        let t = self
            .g
            .transporter_all(&self.classes.lattice[src], &self.classes.lattice[dst]);
        let c = self.g.centralizer(&self.classes.lattice[src]);
        t.len() as u64 / c.order()
    }
}

fn p_classes_with_sylow(
    g: &FiniteGroup,
    s: &Subgroup,
    p: u64,
    lattice_bound: u64,
) -> Result<PClasses> {
    // Same sweep as lattice::p_subgroup_classes but with a caller-fixed Sylow.
    let sylow = s.clone();
    let lattice = lattice::subgroup_lattice(&sylow, p, lattice_bound)?;
    let index_of: HashMap<Vec<u32>, usize> = lattice
        .iter()
        .enumerate()
        .map(|(i, h)| (h.key(), i))
        .collect();
    let n = lattice.len();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut normalizers = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let class_idx = reps.len();
        reps.push(i);
        let h = &lattice[i];
        let mut norm_ids = Vec::new();
        for gg in 0..g.order() as u32 {
            let mut inside_s = true;
            let mut inside_h = true;
            for &x in h.gens() {
                let y = g.conj(gg, x);
                if !sylow.contains(y) {
                    inside_s = false;
                    inside_h = false;
                    break;
                }
                if !h.contains(y) {
                    inside_h = false;
                }
            }
            if inside_h {
                norm_ids.push(gg);
            }
            if inside_s {
                let image = h.conjugate_by(gg);
                if let Some(&j) = index_of.get(&image.key()) {
                    if class_of[j] == usize::MAX {
                        class_of[j] = class_idx;
                    }
                }
            }
        }
        let gens = {
            let mut gens: Vec<u32> = Vec::new();
            let mut have: Vec<u32> = vec![g.identity()];
            for &x in &norm_ids {
                if have.binary_search(&x).is_err() {
                    gens.push(x);
                    have = g.closure_ids(&gens);
                    if have.len() == norm_ids.len() {
                        break;
                    }
                }
            }
            gens
        };
        normalizers.push(Subgroup::from_sorted_ids_unchecked(g.clone(), norm_ids, gens));
    }
    Ok(PClasses {
        sylow,
        lattice,
        class_of,
        reps,
        normalizers,
    })
}

/// Automorphism group of a small group, as full element-image maps.
pub fn automorphisms(h: &FiniteGroup, bound: u64) -> Result<Vec<Vec<u32>>> {
    if h.order() > bound {
        return Err(Error::AutBoundExceeded {
            order: h.order(),
            bound,
        });
    }
    let n = h.order() as usize;
    let gens = h.generator_ids().to_vec();
    // word tree: each element as (parent, generator index)
    let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
    let mut order_bfs = vec![h.identity()];
    let mut seen = vec![false; n];
    seen[h.identity() as usize] = true;
    let mut head = 0;
    while head < order_bfs.len() {
        let cur = order_bfs[head];
        head += 1;
        for (gi, &gg) in gens.iter().enumerate() {
            let next = h.mul(cur, gg);
            if !seen[next as usize] {
                seen[next as usize] = true;
                parent[next as usize] = Some((cur, gi));
                order_bfs.push(next);
            }
        }
    }
    let orders: Vec<u64> = (0..n as u32).map(|x| h.element_order(x)).collect();
    let mut result = Vec::new();
    let mut images = vec![0u32; gens.len()];
    enumerate_auts(h, &gens, &orders, &parent, &order_bfs, 0, &mut images, &mut result);
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_auts(
    h: &FiniteGroup,
    gens: &[u32],
    orders: &[u64],
    parent: &[Option<(u32, usize)>],
    order_bfs: &[u32],
    pos: usize,
    images: &mut Vec<u32>,
    result: &mut Vec<Vec<u32>>,
) {
    if pos == gens.len() {
        // build the candidate map along the BFS tree
        let n = h.order() as usize;
        let mut map = vec![u32::MAX; n];
        map[h.identity() as usize] = h.identity();
        for &x in order_bfs.iter().skip(1) {
            let (par, gi) = parent[x as usize].unwrap();
            map[x as usize] = h.mul(map[par as usize], images[gi]);
            if orders[x as usize] != orders[map[x as usize] as usize] {
                return;
            }
        }
        // bijectivity
        let mut hit = vec![false; n];
        for &y in &map {
            if hit[y as usize] {
                return;
            }
            hit[y as usize] = true;
        }
        // multiplicativity
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if map[h.mul(a, b) as usize] != h.mul(map[a as usize], map[b as usize]) {
                    return;
                }
            }
        }
        result.push(map);
        return;
    }
    let want = orders[gens[pos] as usize];
    for cand in 0..h.order() as u32 {
        if orders[cand as usize] == want {
            images[pos] = cand;
            enumerate_auts(h, gens, orders, parent, order_bfs, pos + 1, images, result);
        }
    }
}

/// Fusion-preserving outer automorphisms of (S, F).
pub struct OutSF {
    /// automorphisms α of S with αF = F, as element maps on S's own group
    pub aut_sf: Vec<Vec<u32>>,
    pub aut_f_s: Vec<Vec<u32>>,
    pub out_order: u64,
}

pub fn fusion_preserving_out(f: &FusionSystem, aut_bound: u64) -> Result<OutSF> {
    let s_group = f.sylow().to_group();
    let auts = automorphisms(&s_group, aut_bound)?;
    // translate between G element ids and S-group element ids
    let g = f.group();
    let to_s = |gid: u32| s_group.index_of(g.element(gid)).expect("element of S");
    let to_g = |sid: u32| g.index_of(s_group.element(sid)).expect("element of G");

    // Aut_F(S): maps induced by N_G(S)
    let s_index = f.sylow_index();
    let n_g_s = f.normalizer_in_g(f.class_of(s_index));
    let mut aut_f_s: Vec<Vec<u32>> = Vec::new();
    let mut seen = HashSet::new();
    for &ng in n_g_s.elems() {
        let map: Vec<u32> = (0..s_group.order() as u32)
            .map(|x| to_s(g.conj(ng, to_g(x))))
            .collect();
        if seen.insert(map.clone()) {
            aut_f_s.push(map);
        }
    }

    // subgroup images under an automorphism map
    let alpha_image = |alpha: &[u32], idx: usize| -> Option<usize> {
        let sub = f.subgroup(idx);
        let ids: Vec<u32> = sub.elems().iter().map(|&x| to_g(alpha[to_s(x) as usize])).collect();
        let img = g.subgroup_from_ids(ids).ok()?;
        f.index_of_subgroup(&img)
    };

    // morphism restricted to generators of its source, as a canonical key
    let morphism_key = |src: usize, image_of: &dyn Fn(u32) -> u32| -> Vec<(u32, u32)> {
        let mut key: Vec<(u32, u32)> = f
            .subgroup(src)
            .gens()
            .iter()
            .map(|&x| (x, image_of(x)))
            .collect();
        key.sort_unstable();
        key
    };

    let n_subs = f.subgroups().len();
    let mut aut_sf = Vec::new();
    'alpha: for alpha in &auts {
        let mut image_idx = vec![usize::MAX; n_subs];
        for (i, slot) in image_idx.iter_mut().enumerate() {
            match alpha_image(alpha, i) {
                Some(j) => *slot = j,
                None => continue 'alpha,
            }
        }
        // cheap prefilter: α must preserve F-classes setwise
        for i in 0..n_subs {
            let rep = f.rep_index(f.class_of(i));
            if f.class_of(image_idx[i]) != f.class_of(image_idx[rep]) {
                continue 'alpha;
            }
        }
        // Hom_{αF}(P,Q) = α ∘ Hom_F(α^{-1}P, α^{-1}Q) ∘ α^{-1} must equal
        // Hom_F(P,Q); tested as α Hom_F(P,Q) α^{-1} = Hom_F(αP, αQ) over all
        // lattice pairs
        let alpha_inv = invert_map(alpha);
        for p_idx in 0..n_subs {
            for q_idx in 0..n_subs {
                let ap = image_idx[p_idx];
                let aq = image_idx[q_idx];
                let lhs: HashSet<Vec<(u32, u32)>> = f
                    .hom_f(ap, aq)
                    .iter()
                    .map(|m| {
                        let w = m.witness;
                        morphism_key(ap, &|x| g.conj(w, x))
                    })
                    .collect();
                let rhs: HashSet<Vec<(u32, u32)>> = f
                    .hom_f(p_idx, q_idx)
                    .iter()
                    .map(|m| {
                        let w = m.witness;
                        morphism_key(ap, &|x| {
                            // α ∘ c_w ∘ α^{-1}
                            to_g(alpha[to_s(g.conj(w, to_g(alpha_inv[to_s(x) as usize]))) as usize])
                        })
                    })
                    .collect();
                if lhs != rhs {
                    continue 'alpha;
                }
            }
        }
        aut_sf.push(alpha.clone());
    }
    let out_order = aut_sf.len() as u64 / aut_f_s.len() as u64;
    Ok(OutSF {
        aut_sf,
        aut_f_s,
        out_order,
    })
}

fn invert_map(m: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; m.len()];
    for (i, &x) in m.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn f_s4() -> FusionSystem {
        let g = corpus::named("S4").unwrap();
        FusionSystem::new(&g, 2, 64).unwrap()
    }

    #[test]
    fn d8_in_s4_centric_classes() {
        let f = f_s4();
        let centric = f.centric_classes();
        // {D8}, {C4}, {normal V4}, {transposition-type V4}
        assert_eq!(centric.len(), 4);
        let orders: Vec<u64> = centric.iter().map(|&c| f.rep(c).order()).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 8).count(), 1);
    }

    #[test]
    fn status_flags_examples() {
        let f = f_s4();
        // Z(S) is not centric: C_S(Z(S)) = S
        let z_s = {
            let s = f.sylow().clone();
            let z = s.center_of();
            f.index_of_subgroup(&z).unwrap()
        };
        assert!(!f.status_flags(z_s).f_centric);
        // S itself: everything true
        let s_idx = f.sylow_index();
        let flags = f.status_flags(s_idx);
        assert!(flags.fully_normalized && flags.fully_centralized && flags.f_centric);
        // C4 ≤ D8: centric and fully normalized
        let c4 = (0..f.subgroups().len())
            .find(|&i| {
                f.subgroup(i).order() == 4 && f.subgroup(i).is_abelian() && {
                    let g = f.group();
                    f.subgroup(i).elems().iter().any(|&x| g.element_order(x) == 4)
                }
            })
            .unwrap();
        let flags = f.status_flags(c4);
        assert!(flags.f_centric && flags.fully_normalized);
        assert_eq!(f.c_s_order(c4), 4);
        assert_eq!(f.n_s_order(c4), 8);
    }

    #[test]
    fn f_class_examples() {
        let f = f_s4();
        // S is F-conjugate only to itself
        let s_idx = f.sylow_index();
        assert_eq!(f.f_class(s_idx).members, vec![s_idx]);
        // the normal Klein four is alone in its class
        let v4 = f
            .index_of_subgroup(&f.group().o_p(2))
            .unwrap();
        assert_eq!(f.f_class(v4).members.len(), 1);
    }

    #[test]
    fn morphism_count_identity() {
        let f = f_s4();
        for src in 0..f.subgroups().len() {
            for dst in 0..f.subgroups().len() {
                let got = f.hom_witnesses(src, dst).len() as u64;
                let want = f.hom_count_oracle(src, dst);
                assert_eq!(got, want, "src={src} dst={dst}");
            }
        }
    }

    #[test]
    fn every_class_has_fully_normalized_member() {
        for name in ["S4", "S5", "A4", "SL(2,3)"] {
            let g = corpus::named(name).unwrap();
            let f = FusionSystem::new(&g, 2, 64).unwrap();
            for c in 0..f.class_count() {
                let _ = f.fully_normalized_member(c);
            }
        }
    }

    #[test]
    fn saturation_of_small_corpus() {
        for (name, p) in [("S4", 2), ("S3", 3), ("C2xC2", 2), ("A4", 2), ("SL(2,3)", 2)] {
            let g = corpus::named(name).unwrap();
            let f = FusionSystem::new(&g, p, 64).unwrap();
            let rep = f.check_saturation();
            assert!(rep.saturated, "{name} at p={p}: {:?}", rep.violations);
        }
    }

    #[test]
    fn interval_examples() {
        let f = f_s4();
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let iv = f.overgroup_interval(v4);
        assert_eq!(iv.members.len(), 2); // {V4, D8}
        assert!(iv.f_invariant && iv.closed_under_overgroups);

        // {D8, Z(D8)} omits the middle subgroups
        let z = f.index_of_subgroup(&f.sylow().center_of()).unwrap();
        let bad = f.make_interval(&[f.sylow_index(), z]);
        assert!(bad.is_err());

        // the full centric collection is an interval
        let centric: Vec<usize> = (0..f.subgroups().len())
            .filter(|&i| f.status_flags(i).f_centric)
            .collect();
        let iv = f.make_interval(&centric).unwrap();
        assert!(iv.closed_under_overgroups);
    }

    #[test]
    fn normalizer_system_examples() {
        let f = f_s4();
        // Q = normal V4: N_G(V4) = S4, so N_F(Q) has the same group order
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let nf = f.normalizer_system(v4).unwrap();
        assert_eq!(nf.group().order(), 24);
        assert!(nf.check_saturation().saturated);

        // Q = C4: N_{S4}(C4) = D8
        let c4 = (0..f.subgroups().len())
            .find(|&i| {
                f.subgroup(i).order() == 4
                    && f.subgroup(i).elems().iter().any(|&x| f.group().element_order(x) == 4)
            })
            .unwrap();
        let nf = f.normalizer_system(c4).unwrap();
        assert_eq!(nf.group().order(), 8);
        assert!(nf.check_saturation().saturated);
    }

    #[test]
    fn fusion_preserving_out_examples() {
        // S = C2: Aut(C2) = 1
        let c2 = corpus::cyclic(2).unwrap();
        let f = FusionSystem::new(&c2, 2, 64).unwrap();
        let out = fusion_preserving_out(&f, 32).unwrap();
        assert_eq!(out.out_order, 1);

        // S = V4, G = A4: Aut(S,F) = Σ3, Aut_F(S) = C3, Out = 2
        let a4 = corpus::named("A4").unwrap();
        let f = FusionSystem::new(&a4, 2, 64).unwrap();
        let out = fusion_preserving_out(&f, 32).unwrap();
        assert_eq!(out.aut_sf.len(), 6);
        assert_eq!(out.aut_f_s.len(), 3);
        assert_eq!(out.out_order, 2);

        // S = V4, G = V4: no fusion, Out = Aut(V4) = Σ3
        let v4 = corpus::named("C2xC2").unwrap();
        let f = FusionSystem::new(&v4, 2, 64).unwrap();
        let out = fusion_preserving_out(&f, 32).unwrap();
        assert_eq!(out.out_order, 6);
    }

    #[test]
    fn centric_is_constant_on_classes() {
        for (name, p) in [("S4", 2u64), ("S5", 2), ("GL(3,2)", 2)] {
            let g = corpus::named(name).unwrap();
            let f = FusionSystem::new(&g, p, 256).unwrap();
            for i in 0..f.subgroups().len() {
                let c = f.class_of(i);
                // recompute directly for the member
                let s = f.sylow();
                let cs = s.centralizer_within(f.subgroup(i).gens());
                let member_centric_here = f.subgroup(i).contains_subgroup(&cs);
                if f.is_centric_class(c) {
                    assert!(member_centric_here);
                }
            }
        }
    }
}
