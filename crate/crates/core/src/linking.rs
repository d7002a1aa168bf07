use crate::bar::BarOptions;
use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{p_part, FiniteGroup, Subgroup};
use crate::limits;
use crate::orbit::OrbitCategory;
use std::collections::{HashMap, HashSet};

/// p-centricity data: P is p-centric in G iff Z(P) ∈ Syl_p(C_G(P)),
/// in which case C_G(P) = Z(P) × C'_G(P) with C'_G(P) of order prime to p.
pub struct PCentric {
    pub is_p_centric: bool,
    pub z: Subgroup,
    pub cprime: Option<Subgroup>,
}

pub fn p_centric(g: &FiniteGroup, p: u64, sub: &Subgroup) -> Result<PCentric> {
    if !sub.is_p_group(p) {
        return Err(Error::domain("p-centric test needs a p-subgroup"));
    }
    let z = sub.center_of();
    let c = g.centralizer(sub);
    let is = z.order() == p_part(c.order(), p);
    let cprime = if is {
        // the p′-elements of C_G(P) form a (normal) complement
        let ids: Vec<u32> = c
            .elems()
            .iter()
            .copied()
            .filter(|&x| {
                let o = g.element_order(x);
                o % p != 0
            })
            .collect();
        let cp = g.subgroup_from_ids(ids).map_err(|_| {
            Error::violation("p'-elements of C_G(P) do not close for a p-centric subgroup")
        })?;
        // direct product decomposition C = Z × C'
        if cp.order() * z.order() != c.order() {
            return Err(Error::violation("C_G(P) ≠ Z(P) × C'_G(P) for a p-centric subgroup"));
        }
        if z.intersect(&cp).order() != 1 {
            return Err(Error::violation("Z(P) ∩ C'_G(P) ≠ 1"));
        }
        Some(cp)
    } else {
        None
    };
    Ok(PCentric {
        is_p_centric: is,
        z,
        cprime,
    })
}

/// The centric linking system L_S^c(G): objects are the F-centric classes,
/// Mor(P,Q) = {g : gPg^{-1} ≤ Q} / C'_G(P) as left cosets g·C'_G(P).
pub struct LinkingSystem {
    pub g: FiniteGroup,
    pub p: u64,
    /// centric class indices in the fusion system
    pub object_class: Vec<usize>,
    pub objects: Vec<Subgroup>,
    pub z: Vec<Subgroup>,
    pub cprime: Vec<Subgroup>,
    /// per object pair: canonical coset representatives
    pub mor: HashMap<(u32, u32), Vec<u32>>,
}

impl LinkingSystem {
    /// canonical representative of the coset w·C'(P_src)
    fn canon(&self, src: usize, w: u32) -> u32 {
        self.cprime[src]
            .elems()
            .iter()
            .map(|&c| self.g.mul(w, c))
            .min()
            .unwrap()
    }

    /// composition (h: Q→R) ∘ (g: P→Q) = hg: P→R as canonical cosets
    pub fn compose(&self, src: usize, w_second: u32, w_first: u32) -> u32 {
        self.canon(src, self.g.mul(w_second, w_first))
    }

    pub fn mor_count(&self, a: usize, b: usize) -> usize {
        self.mor.get(&(a as u32, b as u32)).map_or(0, |v| v.len())
    }
}

/// Build the linking system, asserting the classical agreement between
/// p-centric subgroups of S and F-centric subgroups along the way.
pub fn construct_linking(f: &FusionSystem) -> Result<LinkingSystem> {
    let g = f.group().clone();
    let p = f.prime();
    // agreement: p-centric ⟺ F-centric, for every subgroup of S
    for i in 0..f.subgroups().len() {
        let pc = p_centric(&g, p, f.subgroup(i))?;
        let fc = f.status_flags(i).f_centric;
        if pc.is_p_centric != fc {
            return Err(Error::violation(format!(
                "p-centric/F-centric disagreement at a subgroup of order {}",
                f.subgroup(i).order()
            )));
        }
    }
    let centric = f.centric_classes();
    let mut objects = Vec::new();
    let mut z = Vec::new();
    let mut cprime = Vec::new();
    for &c in &centric {
        let rep = f.rep(c).clone();
        let pc = p_centric(&g, p, &rep)?;
        z.push(pc.z);
        cprime.push(pc.cprime.expect("centric representative is p-centric"));
        objects.push(rep);
    }
    let mut mor = HashMap::new();
    for (a, pa) in objects.iter().enumerate() {
        let ca = g.centralizer(pa);
        for (b, _) in objects.iter().enumerate() {
            // full transporter = ∪ hom-witness · C_G(P)
            let witnesses = f.hom_witnesses(f.rep_index(centric[a]), f.rep_index(centric[b]));
            if witnesses.is_empty() {
                continue;
            }
            let mut reps: HashSet<u32> = HashSet::new();
            for &w in &witnesses {
                for &c in ca.elems() {
                    let t = g.mul(w, c);
                    // canonical form of t·C'(P)
                    let canon = cprime[a]
                        .elems()
                        .iter()
                        .map(|&cc| g.mul(t, cc))
                        .min()
                        .unwrap();
                    reps.insert(canon);
                }
            }
            let mut reps: Vec<u32> = reps.into_iter().collect();
            reps.sort_unstable();
            mor.insert((a as u32, b as u32), reps);
        }
    }
    let ls = LinkingSystem {
        g,
        p,
        object_class: centric,
        objects,
        z,
        cprime,
        mor,
    };
    verify_composition_well_defined(&ls)?;
    Ok(ls)
}

fn verify_composition_well_defined(ls: &LinkingSystem) -> Result<()> {
    // representative independence: (h c')·(g c'') lands in (hg)·C'(P) for
    // c' ∈ C'(Q), c'' ∈ C'(P)
    let g = &ls.g;
    let n = ls.objects.len();
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = ls.mor.get(&(a as u32, b as u32)) else { continue };
            for c in 0..n {
                let Some(bc) = ls.mor.get(&(b as u32, c as u32)) else { continue };
                for &w1 in ab.iter() {
                    for &w2 in bc.iter() {
                        let base = ls.compose(a, w2, w1);
                        for &cq in ls.cprime[b].gens() {
                            for &cp in ls.cprime[a].gens() {
                                let alt = g.mul(g.mul(g.mul(w2, cq), w1), cp);
                                if ls.canon(a, alt) != base {
                                    return Err(Error::violation(
                                        "linking composition depends on coset representatives",
                                    ));
                                }
                            }
                        }
                        // composite must be a recorded morphism
                        let ac = ls.mor.get(&(a as u32, c as u32)).ok_or_else(|| {
                            Error::violation("composite morphism set missing")
                        })?;
                        if ac.binary_search(&base).is_err() {
                            return Err(Error::violation("composite coset missing from Mor(P,R)"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, serde::Serialize)]
pub struct AxiomReport {
    pub a_pass: bool,
    pub b_pass: bool,
    pub c_pass: bool,
    pub mor_count_identity: bool,
    pub associative: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.a_pass && self.b_pass && self.c_pass && self.mor_count_identity && self.associative
    }
}

/// Exhaustive check of the linking-system axioms (A), (B), (C) and the
/// morphism-count identity |Mor_L(P,Q)| = |Z(P)|·|Hom_F(P,Q)|.
pub fn verify_axioms(f: &FusionSystem, ls: &LinkingSystem) -> Result<AxiomReport> {
    let g = &ls.g;
    let n = ls.objects.len();
    let mut a_pass = true;
    let mut b_pass = true;
    let mut c_pass = true;
    let mut mor_count_identity = true;

    for a in 0..n {
        let pa = &ls.objects[a];
        let za = &ls.z[a];
        for b in 0..n {
            let Some(morphisms) = ls.mor.get(&(a as u32, b as u32)) else { continue };
            // (A): δ_P(Z(P)) acts freely by precomposition and the orbit set
            // is Hom_F(P,Q)
            let mut orbit_of: HashMap<u32, usize> = HashMap::new();
            let mut n_orbits = 0usize;
            for &w in morphisms {
                if orbit_of.contains_key(&w) {
                    continue;
                }
                let mut orbit = Vec::new();
                for &zel in za.elems() {
                    let img = ls.canon(a, g.mul(w, zel));
                    orbit.push(img);
                }
                let distinct: HashSet<u32> = orbit.iter().copied().collect();
                if distinct.len() != za.order() as usize {
                    a_pass = false; // action not free
                }
                for x in distinct {
                    orbit_of.insert(x, n_orbits);
                }
                n_orbits += 1;
            }
            let hom_count = f
                .hom_witnesses(f.rep_index(ls.object_class[a]), f.rep_index(ls.object_class[b]))
                .len();
            if n_orbits != hom_count {
                a_pass = false;
            }
            if morphisms.len() != za.order() as usize * hom_count {
                mor_count_identity = false;
            }
            // orbits must project to distinct F-morphisms: two cosets in one
            // orbit induce the same conjugation on P
            for (&w1, &o1) in orbit_of.iter() {
                for (&w2, &o2) in orbit_of.iter() {
                    if o1 == o2 {
                        let same = pa
                            .gens()
                            .iter()
                            .all(|&x| g.conj(w1, x) == g.conj(w2, x));
                        if !same {
                            a_pass = false;
                        }
                    }
                }
            }
            // (C): ψ ∘ δ_P(x) = δ_Q(π(ψ)(x)) ∘ ψ for every ψ and x ∈ P
            for &w in morphisms {
                for &x in pa.elems() {
                    let lhs = ls.compose(a, w, ls.canon(a, g.mul(x, g.identity())));
                    // δ_P(x) is the coset x·C'(P); π(ψ)(x) = w x w^{-1} ∈ Q
                    let pix = g.conj(w, x);
                    let rhs = ls.canon(a, g.mul(pix, w));
                    if lhs != ls.canon(a, g.mul(w, x)) || lhs != rhs {
                        c_pass = false;
                    }
                }
            }
        }
        // (B): π sends δ_P(x) to c_x
        for &x in pa.elems() {
            let coset_rep = ls.canon(a, x);
            let same = pa.gens().iter().all(|&y| g.conj(coset_rep, y) == g.conj(x, y));
            if !same {
                b_pass = false;
            }
        }
    }

    // associativity and identity behavior on the skeleton (delta of identity)
    let mut associative = true;
    for a in 0..n {
        let e = ls.canon(a, g.identity());
        if let Some(selfmor) = ls.mor.get(&(a as u32, a as u32)) {
            if selfmor.binary_search(&e).is_err() {
                associative = false;
            }
        }
        for b in 0..n {
            let Some(ab) = ls.mor.get(&(a as u32, b as u32)) else { continue };
            for c in 0..n {
                let Some(bc) = ls.mor.get(&(b as u32, c as u32)) else { continue };
                for d in 0..n {
                    let Some(cd) = ls.mor.get(&(c as u32, d as u32)) else { continue };
                    for &w1 in ab.iter().take(4) {
                        for &w2 in bc.iter().take(4) {
                            for &w3 in cd.iter().take(4) {
                                let left = ls.compose(a, w3, ls.compose(a, w2, w1));
                                let right = ls.compose(a, ls.compose(b, w3, w2), w1);
                                if left != right {
                                    associative = false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let report = AxiomReport {
        a_pass,
        b_pass,
        c_pass,
        mor_count_identity,
        associative,
    };
    if !report.all_pass() {
        return Err(Error::violation(format!("linking-system axiom failure: {report:?}")));
    }
    Ok(report)
}

#[derive(Debug)]
pub struct TheoremBReport {
    pub out_sf_order: Option<u64>,
    pub lim1: limits::LimitResult,
    pub lim2: limits::LimitResult,
    pub consistency: bool,
}

/// Out(S, F), lim^1(Z_F) and lim^2(Z_F); lim^2 must vanish, and at odd p
/// lim^1 must vanish as well (so restriction is an isomorphism there).
pub fn theorem_b_report(
    f: &FusionSystem,
    oc: &OrbitCategory,
    opts: BarOptions,
    aut_bound: u64,
) -> Result<TheoremBReport> {
    let centric: Vec<usize> = (0..f.subgroups().len())
        .filter(|&i| f.status_flags(i).f_centric)
        .collect();
    let full = f.make_interval(&centric)?;
    let lims = limits::interval_limits(f, oc, &full, 2, opts)?;
    let lim1 = lims[1].clone();
    let lim2 = lims[2].clone();
    let out_sf_order = match crate::fusion::fusion_preserving_out(f, aut_bound) {
        Ok(out) => Some(out.out_order),
        Err(Error::AutBoundExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut consistency = lim2.is_zero();
    if f.prime() != 2 {
        consistency = consistency && lim1.is_zero();
    }
    if !consistency {
        return Err(Error::violation(format!(
            "obstruction groups fail to vanish: lim^1 = {}, lim^2 = {}",
            lim1.describe(),
            lim2.describe()
        )));
    }
    Ok(TheoremBReport {
        out_sf_order,
        lim1,
        lim2,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::orbit::orbit_category;

    #[test]
    fn p_centric_examples() {
        let s4 = corpus::named("S4").unwrap();
        let d8 = s4.sylow(2);
        let pc = p_centric(&s4, 2, &d8).unwrap();
        assert!(pc.is_p_centric);
        assert_eq!(pc.cprime.unwrap().order(), 1);

        let t = s4
            .index_of(&crate::perm::Perm::parse_cycles("(1 2)", 4).unwrap())
            .unwrap();
        let c2 = s4.subgroup_from_gens(&[t]);
        let pc = p_centric(&s4, 2, &c2).unwrap();
        assert!(!pc.is_p_centric); // C_G = <(1 2)> x <(3 4)> of order 4

        // a Sylow subgroup is always p-centric
        for name in ["S5", "SL(2,3)", "GL(3,2)"] {
            let g = corpus::named(name).unwrap();
            let s = g.sylow(2);
            assert!(p_centric(&g, 2, &s).unwrap().is_p_centric, "{name}");
        }
    }

    #[test]
    fn linking_system_of_c2() {
        let c2 = corpus::cyclic(2).unwrap();
        let f = FusionSystem::new(&c2, 2, 64).unwrap();
        let ls = construct_linking(&f).unwrap();
        assert_eq!(ls.objects.len(), 1);
        assert_eq!(ls.mor_count(0, 0), 2); // Aut_L = C2
        verify_axioms(&f, &ls).unwrap();
    }

    #[test]
    fn linking_system_of_s4() {
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let ls = construct_linking(&f).unwrap();
        // |Aut_L(D8)| = |N(D8)|/|C'| = 8
        let d8_obj = (0..ls.objects.len()).find(|&o| ls.objects[o].order() == 8).unwrap();
        assert_eq!(ls.mor_count(d8_obj, d8_obj), 8);
        // |Mor_L(V4, D8)| = 24/1 for the normal Klein four
        let v4n_obj = (0..ls.objects.len())
            .find(|&o| ls.objects[o].order() == 4 && ls.objects[o].is_normal())
            .unwrap();
        assert_eq!(ls.mor_count(v4n_obj, d8_obj), 24);
        verify_axioms(&f, &ls).unwrap();
    }

    #[test]
    fn linking_system_of_s3_at_3() {
        let s3 = corpus::named("S3").unwrap();
        let f = FusionSystem::new(&s3, 3, 64).unwrap();
        let ls = construct_linking(&f).unwrap();
        assert_eq!(ls.objects.len(), 1);
        assert_eq!(ls.mor_count(0, 0), 6); // |Mor_L(C3,C3)| = 6/1
        let rep = verify_axioms(&f, &ls).unwrap();
        assert!(rep.all_pass());
    }

    #[test]
    fn theorem_b_small() {
        let c2 = corpus::cyclic(2).unwrap();
        let f = FusionSystem::new(&c2, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let rep = theorem_b_report(&f, &oc, BarOptions::default(), 32).unwrap();
        assert_eq!(rep.out_sf_order, Some(1));
        assert!(rep.lim1.is_zero() && rep.lim2.is_zero());

        let s3 = corpus::named("S3").unwrap();
        let f = FusionSystem::new(&s3, 3, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let rep = theorem_b_report(&f, &oc, BarOptions::default(), 32).unwrap();
        assert!(rep.lim1.is_zero() && rep.lim2.is_zero());
    }
}
