use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use std::collections::HashMap;

/// Default ceiling on |S| for full lattice enumeration.
pub const DEFAULT_LATTICE_BOUND: u64 = 64;

/// Large enough for every Sylow subgroup in the named corpus (Σ8 has a Sylow
/// 2-subgroup of order 128).
pub const CORPUS_LATTICE_BOUND: u64 = 256;

/// All subgroups of a p-group `s`, by breadth-first closure over index-p
/// cyclic extensions, deduplicated by canonical element-set.  Sorted by
/// (order, element ids) so the listing is deterministic.
pub fn subgroup_lattice(s: &Subgroup, p: u64, bound: u64) -> Result<Vec<Subgroup>> {
    let floor = s.parent().trivial_subgroup();
    subgroups_above(s, &floor, p, bound)
}

/// All subgroups H with floor ≤ H ≤ s, for a p-group s.
pub fn subgroups_above(
    s: &Subgroup,
    floor: &Subgroup,
    p: u64,
    bound: u64,
) -> Result<Vec<Subgroup>> {
    if !s.is_p_group(p) {
        return Err(Error::domain("subgroup lattice requires a p-group"));
    }
    if s.order() > bound {
        return Err(Error::LatticeTooLarge {
            order: s.order(),
            bound,
        });
    }
    if !s.contains_subgroup(floor) {
        return Err(Error::domain("floor is not contained in the group"));
    }
    let g = s.parent().clone();
    let mut found: HashMap<Vec<u32>, Subgroup> = HashMap::new();
    found.insert(floor.key(), floor.clone());
    let mut frontier = vec![floor.clone()];
    while let Some(h) = frontier.pop() {
        if h.order() == s.order() {
            continue;
        }
        // candidates: x in N_s(H) \ H with x^p in H
        let normalizer = s.normalizer_within(&h);
        for &x in normalizer.elems() {
            if h.contains(x) {
                continue;
            }
            let mut xp = x;
            for _ in 1..p {
                xp = g.mul(xp, x);
            }
            if !h.contains(xp) {
                continue;
            }
            let mut gens = h.gens().to_vec();
            gens.push(x);
            let bigger = g.subgroup_from_gens(&gens);
            debug_assert_eq!(bigger.order(), h.order() * p);
            if !found.contains_key(&bigger.key()) {
                found.insert(bigger.key(), bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_values().collect();
    out.sort_by_key(|h| (h.order(), h.key()));
    Ok(out)
}

/// The containment relation on a subgroup list, as directed edges i -> j for
/// subs[i] < subs[j].
pub fn containment_edges(subs: &[Subgroup]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, a) in subs.iter().enumerate() {
        for (j, b) in subs.iter().enumerate() {
            if i != j && a.order() < b.order() && b.contains_subgroup(a) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Conjugacy classes of p-subgroups of G (including the trivial subgroup):
/// representatives are taken inside a fixed Sylow p-subgroup and fused under
/// G-conjugacy by a transporter sweep.
pub struct PClasses {
    pub sylow: Subgroup,
    /// all subgroups of the Sylow, lattice order
    pub lattice: Vec<Subgroup>,
    /// class index of each lattice member
    pub class_of: Vec<usize>,
    /// representative lattice index per class (least lattice index)
    pub reps: Vec<usize>,
    /// N_G(rep) for each class
    pub normalizers: Vec<Subgroup>,
}

impl PClasses {
    pub fn rep(&self, class: usize) -> &Subgroup {
        &self.lattice[self.reps[class]]
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    /// Lattice members belonging to a class.
    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.lattice.len())
            .filter(|&i| self.class_of[i] == class)
            .collect()
    }
}

/// Fuse the subgroups of a fixed Sylow p-subgroup under G-conjugacy.
///
/// One sweep over G per class: for every g with g·H·g^{-1} ≤ S the image is
/// another lattice member of the same class; g with g·H·g^{-1} = H make up
/// N_G(H).
pub fn p_subgroup_classes(g: &FiniteGroup, p: u64, lattice_bound: u64) -> Result<PClasses> {
    let sylow = g.sylow(p);
    let lattice = subgroup_lattice(&sylow, p, lattice_bound)?;
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
                    } else {
                        debug_assert_eq!(class_of[j], class_idx);
                    }
                }
            }
        }
        debug_assert_eq!(class_of[i], class_idx);
        let gens = gens_for_sorted(g, &norm_ids);
        normalizers.push(crate::group::Subgroup::from_sorted_ids_unchecked(
            g.clone(),
            norm_ids,
            gens,
        ));
    }
    Ok(PClasses {
        sylow,
        lattice,
        class_of,
        reps,
        normalizers,
    })
}

fn gens_for_sorted(g: &FiniteGroup, sorted_ids: &[u32]) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut have: Vec<u32> = vec![g.identity()];
    for &x in sorted_ids {
        if have.binary_search(&x).is_err() {
            gens.push(x);
            have = g.closure_ids(&gens);
            if have.len() == sorted_ids.len() {
                break;
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn lattice_counts() {
        let d8 = corpus::named("D8").unwrap();
        let lat = subgroup_lattice(&d8.full_subgroup(), 2, 64).unwrap();
        assert_eq!(lat.len(), 10);

        let q8 = corpus::named("Q8").unwrap();
        let lat = subgroup_lattice(&q8.full_subgroup(), 2, 64).unwrap();
        assert_eq!(lat.len(), 6);

        let c3 = corpus::cyclic(3).unwrap();
        let lat = subgroup_lattice(&c3.full_subgroup(), 3, 64).unwrap();
        assert_eq!(lat.len(), 2);
    }

    #[test]
    fn lattice_bound_is_enforced() {
        let g = corpus::named("SD16").unwrap();
        let err = subgroup_lattice(&g.full_subgroup(), 2, 8).unwrap_err();
        assert!(matches!(err, Error::LatticeTooLarge { .. }));
    }

    #[test]
    fn normalizer_grows_strictly_in_p_groups() {
        // N_Q(P) > P for every proper containment of p-groups
        for name in ["D8", "Q8", "SD16"] {
            let g = corpus::named(name).unwrap();
            let s = g.full_subgroup();
            let lat = subgroup_lattice(&s, 2, 64).unwrap();
            for h in &lat {
                if h.order() < s.order() {
                    let n = s.normalizer_within(h);
                    assert!(n.order() > h.order(), "{name}");
                }
            }
        }
    }

    #[test]
    fn containment_relation_on_d8() {
        let d8 = corpus::named("D8").unwrap();
        let lat = subgroup_lattice(&d8.full_subgroup(), 2, 64).unwrap();
        let edges = containment_edges(&lat);
        // trivial is below everything else, everything proper is below D8
        let below_top = edges.iter().filter(|(_, j)| lat[*j].order() == 8).count();
        assert_eq!(below_top, 9);
    }

    #[test]
    fn s4_two_subgroup_classes() {
        let s4 = corpus::named("S4").unwrap();
        let cls = p_subgroup_classes(&s4, 2, 64).unwrap();
        // classes: 1, C2 (transposition), C2 (double transposition), C4,
        // V4 normal, V4 dihedral-type, D8 = 7
        assert_eq!(cls.class_count(), 7);
        // normalizer of the normal Klein four is all of S4
        let v4_class = (0..cls.class_count())
            .find(|&c| cls.rep(c).order() == 4 && cls.normalizers[c].order() == 24)
            .expect("normal V4 class");
        assert!(cls.rep(v4_class).is_normal());
    }

    #[test]
    fn subgroups_above_floor() {
        let s4 = corpus::named("S4").unwrap();
        let syl = s4.sylow(2);
        let v4 = s4.o_p(2);
        let above = subgroups_above(&syl, &v4, 2, 64).unwrap();
        // I(V4, D8) = {V4, D8}
        assert_eq!(above.len(), 2);
    }
}
