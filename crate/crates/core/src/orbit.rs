use crate::category::{AbFunctor, FiniteCategory};
use crate::error::{Error, Result};
use crate::finab::{as_finab, induced_hom, AbelianIso, FinAb, FinAbHom};
use crate::fusion::{FusionSystem, Interval};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::{self, PClasses};
use std::collections::HashMap;
use std::sync::Arc;

/// A skeletal orbit-style category whose morphisms are double cosets
/// D(Q)\T_G(P,Q)/E(P) of transporter elements, carried by canonical witness
/// representatives (least element id in the double coset).
pub struct WitnessCategory {
    pub cat: Arc<FiniteCategory>,
    /// canonical witness element per morphism
    pub witness: Vec<u32>,
    /// ambient group the witnesses live in
    pub group: FiniteGroup,
    /// object representatives
    pub objects: Vec<Subgroup>,
}

fn canonical_witness(g: &FiniteGroup, left: &[u32], w: u32, right: &[u32]) -> u32 {
    let mut best = u32::MAX;
    for &l in left {
        let lw = g.mul(l, w);
        for &r in right {
            best = best.min(g.mul(lw, r));
        }
    }
    best
}

/// Build a witness category from transporter pools.
///
/// `left[j]` are the elements of the subgroup acting by post-composition at
/// object j; `right[i]` the elements acting by pre-composition at object i.
fn build_witness_category(
    g: &FiniteGroup,
    objects: Vec<Subgroup>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    pool: impl Fn(usize, usize) -> Vec<u32>,
) -> Result<WitnessCategory> {
    let n = objects.len();
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut witness = Vec::new();
    let mut lookup: HashMap<(u32, u32, u32), u32> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let mut canon: Vec<u32> = pool(i, j)
                .into_iter()
                .map(|w| canonical_witness(g, &left[j], w, &right[i]))
                .collect();
            canon.sort_unstable();
            canon.dedup();
            for w in canon {
                let id = src.len() as u32;
                src.push(i as u32);
                dst.push(j as u32);
                witness.push(w);
                lookup.insert((i as u32, j as u32, w), id);
            }
        }
    }
    let mut identity = vec![u32::MAX; n];
    for (x, ident) in identity.iter_mut().enumerate() {
        let w = canonical_witness(g, &left[x], g.identity(), &right[x]);
        *ident = *lookup
            .get(&(x as u32, x as u32, w))
            .ok_or_else(|| Error::domain("identity morphism missing"))?;
    }
    let tags = witness.clone();
    let src_c = src.clone();
    let dst_c = dst.clone();
    let witness_c = witness.clone();
    let compose_fn = move |g2: u32, f: u32| -> u32 {
        let a = src_c[f as usize];
        let c = dst_c[g2 as usize];
        let w = g.mul(witness_c[g2 as usize], witness_c[f as usize]);
        let cw = canonical_witness(g, &left[c as usize], w, &right[a as usize]);
        *lookup
            .get(&(a, c, cw))
            .expect("composite double coset is a morphism")
    };
    let cat = FiniteCategory::new(n, src, dst, identity, tags, compose_fn)?;
    Ok(WitnessCategory {
        cat: Arc::new(cat),
        witness,
        group: g.clone(),
        objects,
    })
}

/// The centric orbit category O(F^c): objects are the F-centric classes (one
/// representative each), morphisms Inn(Q)\Hom_F(P,Q).
pub struct OrbitCategory {
    pub wc: WitnessCategory,
    /// F-class per object
    pub object_class: Vec<usize>,
    /// lattice index of each object representative
    pub object_rep: Vec<usize>,
}

pub fn orbit_category(f: &FusionSystem) -> Result<OrbitCategory> {
    let g = f.group();
    let centric = f.centric_classes();
    let object_rep: Vec<usize> = centric.iter().map(|&c| f.rep_index(c)).collect();
    let objects: Vec<Subgroup> = object_rep.iter().map(|&i| f.subgroup(i).clone()).collect();
    let left: Vec<Vec<u32>> = objects.iter().map(|q| q.elems().to_vec()).collect();
    let right: Vec<Vec<u32>> = objects
        .iter()
        .map(|p| g.centralizer(p).elems().to_vec())
        .collect();
    let wc = build_witness_category(g, objects, left, right, |i, j| {
        f.hom_witnesses(object_rep[i], object_rep[j])
    })?;
    Ok(OrbitCategory {
        wc,
        object_class: centric,
        object_rep,
    })
}

/// The p-orbit category O_p(G): objects are all conjugacy classes of
/// p-subgroups including the trivial one; Mor(P,Q) = Q\{g : gPg^{-1} ≤ Q}.
pub struct POrbitCategory {
    pub wc: WitnessCategory,
    pub classes: PClasses,
}

pub fn p_orbit_category(g: &FiniteGroup, p: u64, lattice_bound: u64) -> Result<POrbitCategory> {
    let classes = lattice::p_subgroup_classes(g, p, lattice_bound)?;
    let objects: Vec<Subgroup> = (0..classes.class_count())
        .map(|c| classes.rep(c).clone())
        .collect();
    let left: Vec<Vec<u32>> = objects.iter().map(|q| q.elems().to_vec()).collect();
    let right: Vec<Vec<u32>> = objects.iter().map(|_| vec![g.identity()]).collect();
    let pool = |i: usize, j: usize| g.transporter_all(&objects[i], &objects[j]);
    let wc = build_witness_category(g, objects.clone(), left, right, pool)?;
    Ok(POrbitCategory { wc, classes })
}

/// The functor Z_F^R on O(F^c): value Z(P) on classes inside the interval,
/// zero outside; a morphism [φ] acts by φ^{-1} on centers.
pub struct ZFunctor {
    pub functor: AbFunctor,
    /// per object: the center iso when the object lies in the interval
    pub isos: Vec<Option<AbelianIso>>,
}

pub fn z_functor(f: &FusionSystem, oc: &OrbitCategory, r: &Interval) -> Result<ZFunctor> {
    if !r.f_invariant {
        return Err(Error::domain("Z-functor interval must be F-invariant"));
    }
    for &i in &r.members {
        if !f.status_flags(i).f_centric {
            return Err(Error::domain("Z-functor interval must consist of F-centric subgroups"));
        }
    }
    let g = f.group();
    let member_classes: std::collections::HashSet<usize> =
        r.members.iter().map(|&i| f.class_of(i)).collect();
    let n_obj = oc.wc.cat.n_objects;
    let mut isos: Vec<Option<AbelianIso>> = Vec::with_capacity(n_obj);
    let mut values: Vec<FinAb> = Vec::with_capacity(n_obj);
    for obj in 0..n_obj {
        if member_classes.contains(&oc.object_class[obj]) {
            let z = oc.wc.objects[obj].center_of();
            let iso = as_finab(&z)?;
            values.push(iso.finab.clone());
            isos.push(Some(iso));
        } else {
            values.push(FinAb::trivial());
            isos.push(None);
        }
    }
    let cat = oc.wc.cat.clone();
    let mut maps = Vec::with_capacity(cat.n_morphisms());
    for m in 0..cat.n_morphisms() {
        let a = cat.src[m] as usize;
        let b = cat.dst[m] as usize;
        let w = oc.wc.witness[m];
        let map = match (&isos[a], &isos[b]) {
            (Some(iso_a), Some(iso_b)) => {
                let w_inv = g.inv(w);
                let hom = induced_hom(iso_b, iso_a, |x| g.conj(w_inv, x))?;
                // the map may not depend on the double-coset representative:
                // inner automorphisms of the target act trivially on Z(Q)
                debug_assert!({
                    let q = &oc.wc.objects[b];
                    q.gens().iter().all(|&qg| {
                        let w2 = g.mul(qg, w);
                        let w2_inv = g.inv(w2);
                        induced_hom(iso_b, iso_a, |x| g.conj(w2_inv, x))
                            .map(|h2| h2 == hom)
                            .unwrap_or(false)
                    })
                });
                hom
            }
            _ => FinAbHom::zero(&values[b], &values[a]),
        };
        maps.push(map);
    }
    let functor = AbFunctor::new(cat, values, maps)?;
    Ok(ZFunctor { functor, isos })
}

/// A functor concentrated at one object, with a prescribed action of that
/// object's automorphism monoid in the category.
pub fn atomic_functor(
    cat: Arc<FiniteCategory>,
    at: usize,
    m: FinAb,
    action: impl Fn(u32) -> FinAbHom,
) -> Result<AbFunctor> {
    let mut values = vec![FinAb::trivial(); cat.n_objects];
    values[at] = m.clone();
    let mut maps = Vec::with_capacity(cat.n_morphisms());
    for mor in 0..cat.n_morphisms() as u32 {
        let a = cat.src[mor as usize] as usize;
        let b = cat.dst[mor as usize] as usize;
        if a == at && b == at {
            let h = action(mor);
            if !(h.src == m && h.dst == m) {
                return Err(Error::domain("atomic action has wrong endpoints"));
            }
            maps.push(h);
        } else {
            maps.push(FinAbHom::zero(&values[b], &values[a]));
        }
    }
    AbFunctor::new(cat, values, maps)
}

/// Realize Out_F(Q) = N_G(Q)/(Q·C_G(Q)) as a permutation group, together
/// with the projection from normalizer element ids and the induced action on
/// Z(Q) in canonical coordinates.
pub struct OutFData {
    pub group: FiniteGroup,
    /// Z(Q) in canonical form
    pub module: FinAb,
    /// action of each element of `group` on the module (left action)
    pub action: Vec<FinAbHom>,
    /// projection N_G(Q) element id (in G) → element id of `group`
    pub proj_from_normalizer: std::collections::HashMap<u32, u32>,
}

pub fn out_f_action_on_center(f: &FusionSystem, class: usize) -> Result<OutFData> {
    let g = f.group();
    let q = f.rep(class).clone();
    let n_g = f.normalizer_in_g(class).clone();
    let c_g = g.centralizer(&q);
    let mut qc_ids = q.product_set(&c_g);
    qc_ids.sort_unstable();
    let qc = g.subgroup_from_ids(qc_ids)?;
    let n_group = n_g.to_group();
    let qc_in_n: Vec<u32> = qc
        .elems()
        .iter()
        .map(|&x| n_group.index_of(g.element(x)).expect("QC ≤ N"))
        .collect();
    let qc_sub = n_group.subgroup_from_ids(qc_in_n)?;
    let (out_group, proj) = n_group.quotient(&qc_sub)?;
    // pick one preimage in N_G(Q) per Out element; record the projection
    let mut preimage = vec![u32::MAX; out_group.order() as usize];
    let mut proj_from_normalizer = std::collections::HashMap::new();
    for (idx, &x) in n_g.elems().iter().enumerate() {
        let nx = n_group
            .index_of(g.element(x))
            .expect("element of N in its own group");
        let o = proj[nx as usize];
        proj_from_normalizer.insert(x, o);
        if preimage[o as usize] == u32::MAX {
            preimage[o as usize] = idx as u32;
        }
    }
    let z = q.center_of();
    let iso = as_finab(&z)?;
    let module = iso.finab.clone();
    let mut action = Vec::with_capacity(out_group.order() as usize);
    for o in 0..out_group.order() as usize {
        let rep = n_g.elems()[preimage[o] as usize];
        let hom = induced_hom(&iso, &iso, |x| g.conj(rep, x))?;
        action.push(hom);
    }
    Ok(OutFData {
        group: out_group,
        module,
        action,
        proj_from_normalizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn orbit_category_of_c2() {
        let c2 = corpus::cyclic(2).unwrap();
        let f = FusionSystem::new(&c2, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        assert_eq!(oc.wc.cat.n_objects, 1);
        assert_eq!(oc.wc.cat.n_morphisms(), 1);
    }

    #[test]
    fn orbit_category_of_s3_at_3() {
        let s3 = corpus::named("S3").unwrap();
        let f = FusionSystem::new(&s3, 3, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        assert_eq!(oc.wc.cat.n_objects, 1);
        // Inn(C3)\Aut_F(C3) = Aut_F(C3) = C2
        assert_eq!(oc.wc.cat.n_morphisms(), 2);
    }

    #[test]
    fn orbit_category_of_s4() {
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        assert_eq!(oc.wc.cat.n_objects, 4);
        // Aut_O(D8) = Out_F(D8) = 1
        let d8_obj = (0..4)
            .find(|&o| oc.wc.objects[o].order() == 8)
            .unwrap() as u32;
        assert_eq!(oc.wc.cat.morphisms(d8_obj, d8_obj).len(), 1);
    }

    #[test]
    fn p_orbit_category_examples() {
        let c2 = corpus::cyclic(2).unwrap();
        let po = p_orbit_category(&c2, 2, 64).unwrap();
        assert_eq!(po.wc.cat.n_objects, 2);
        let (t, c) = (0u32, 1u32);
        assert_eq!(po.wc.cat.morphisms(t, t).len(), 2); // Aut(1) = C2
        assert_eq!(po.wc.cat.morphisms(t, c).len(), 1);

        let trivial = corpus::cyclic(1);
        // cyclic(1) would be degenerate; use S3 instead for the second case
        drop(trivial);
        let s3 = corpus::named("S3").unwrap();
        let po = p_orbit_category(&s3, 2, 64).unwrap();
        assert_eq!(po.wc.cat.n_objects, 2); // {1, C2}
        let t = 0u32;
        let c = 1u32;
        assert_eq!(po.wc.cat.morphisms(t, t).len(), 6);
        assert_eq!(po.wc.cat.morphisms(t, c).len(), 3);
        assert_eq!(po.wc.cat.morphisms(c, c).len(), 1);
    }

    #[test]
    fn z_functor_on_s4() {
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        // full centric interval
        let centric: Vec<usize> = (0..f.subgroups().len())
            .filter(|&i| f.status_flags(i).f_centric)
            .collect();
        let r = f.make_interval(&centric).unwrap();
        let zf = z_functor(&f, &oc, &r).unwrap();
        // values: Z(D8) = Z/2, Z(C4) = Z/4, Z(V4) = (Z/2)^2 both types
        let mut orders: Vec<u64> = zf.functor.values.iter().map(|v| v.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 4, 4, 4]);

        // I(V4, S) = {V4, D8}: values (Z/2)^2 at V4, Z/2 at D8, zero elsewhere
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let iv = f.overgroup_interval(v4);
        let zr = z_functor(&f, &oc, &iv).unwrap();
        let mut orders: Vec<u64> = zr.functor.values.iter().map(|v| v.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 1, 2, 4]);
    }

    #[test]
    fn atomic_functor_on_p_orbit() {
        let c2 = corpus::cyclic(2).unwrap();
        let po = p_orbit_category(&c2, 2, 64).unwrap();
        let m = FinAb::from_orders(&[2]);
        // trivial action of Aut(1) = C2
        let f = atomic_functor(po.wc.cat.clone(), 0, m.clone(), |_| FinAbHom::identity(&m)).unwrap();
        assert_eq!(f.values[0].order(), 2);
        assert!(f.values[1].is_trivial());
    }

    #[test]
    fn out_f_action_examples() {
        // Out_F(V4) for F = F_{D8}(S4) on the normal Klein four is Σ3 = GL(2,2)
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let data = out_f_action_on_center(&f, f.class_of(v4)).unwrap();
        assert_eq!(data.group.order(), 6);
        assert_eq!(data.module.factors(), &[2, 2]);
        // the action is faithful
        let faithful = (0..data.group.order() as usize)
            .filter(|&o| data.action[o] == FinAbHom::identity(&data.module))
            .count();
        assert_eq!(faithful, 1);
    }
}
