use crate::bar::{self, BarComplex, BarOptions};
pub use crate::bar::LimitResult;
use crate::category::AbFunctor;
use crate::error::{Error, Result};
use crate::finab::{FinAb, FinAbHom};
use crate::fusion::{FusionSystem, Interval};
use crate::group::{FiniteGroup, Subgroup};
use crate::offenders::{Setup, SetupKind};
use crate::orbit::{self, atomic_functor, OrbitCategory, POrbitCategory};
use std::collections::HashMap;
use std::sync::Arc;

/// lim^0..lim^kmax of a functor, sharing one bar complex built to exactly
/// the degree the top limit needs.
pub fn limits_of_functor(
    functor: &Arc<AbFunctor>,
    kmax: usize,
    opts: BarOptions,
) -> Result<Vec<LimitResult>> {
    let opts = BarOptions {
        n_max: kmax + 1,
        ..opts
    };
    let start = std::time::Instant::now();
    let complex = BarComplex::build(functor.clone(), opts)?;
    (0..=kmax)
        .map(|k| bar::limit_from_bar(&complex, k, start))
        .collect()
}

/// lim^* of Z_F^R over the centric orbit category.
pub fn interval_limits(
    f: &FusionSystem,
    oc: &OrbitCategory,
    r: &Interval,
    kmax: usize,
    opts: BarOptions,
) -> Result<Vec<LimitResult>> {
    let zf = Arc::new(orbit::z_functor(f, oc, r)?.functor);
    limits_of_functor(&zf, kmax, opts)
}

/// The functor F_M on O_p(G) for a left action of G on M (one automorphism
/// per group element).
pub fn lambda_functor(
    po: &POrbitCategory,
    m: &FinAb,
    action: &[FinAbHom],
) -> Result<Arc<AbFunctor>> {
    let trivial_obj = (0..po.wc.cat.n_objects)
        .find(|&o| po.wc.objects[o].order() == 1)
        .ok_or_else(|| Error::domain("p-orbit category lacks the trivial object"))?;
    let g = po.wc.group.clone();
    if action.len() != g.order() as usize {
        return Err(Error::domain("need one action matrix per group element"));
    }
    let witness = po.wc.witness.clone();
    let action = action.to_vec();
    let m2 = m.clone();
    let functor = atomic_functor(po.wc.cat.clone(), trivial_obj, m.clone(), move |mor| {
        // contravariant: F([g]) = ρ(g^{-1})
        let w = witness[mor as usize];
        let _ = &m2;
        action[g.inv(w) as usize].clone()
    })?;
    Ok(Arc::new(functor))
}

/// Λ^0..Λ^kmax(G; M) computed over the p-orbit category.
pub fn lambda(
    g: &FiniteGroup,
    p: u64,
    m: &FinAb,
    action: &[FinAbHom],
    kmax: usize,
    opts: BarOptions,
    lattice_bound: u64,
) -> Result<Vec<LimitResult>> {
    let po = orbit::p_orbit_category(g, p, lattice_bound)?;
    let functor = lambda_functor(&po, m, action)?;
    limits_of_functor(&functor, kmax, opts)
}

/// Trivial action of a group on a module.
pub fn trivial_action(g: &FiniteGroup, m: &FinAb) -> Vec<FinAbHom> {
    (0..g.order()).map(|_| FinAbHom::identity(m)).collect()
}

/// An atomic functor on O(F^c) concentrated on one centric class, carrying a
/// left action of Out_F(Q) on M.
pub fn one_class_functor(
    oc: &OrbitCategory,
    class: usize,
    m: &FinAb,
    out_group: &FiniteGroup,
    out_of_normalizer_elem: &HashMap<u32, u32>,
    action: &[FinAbHom],
) -> Result<Arc<AbFunctor>> {
    let obj = oc
        .object_class
        .iter()
        .position(|&c| c == class)
        .ok_or_else(|| Error::domain("class is not a centric object"))?;
    let witness = oc.wc.witness.clone();
    let proj = out_of_normalizer_elem.clone();
    let og = out_group.clone();
    let action = action.to_vec();
    let functor = atomic_functor(oc.wc.cat.clone(), obj, m.clone(), move |mor| {
        let w = witness[mor as usize];
        let out_elem = *proj.get(&w).expect("endomorphism witness normalizes Q");
        action[og.inv(out_elem) as usize].clone()
    })?;
    Ok(Arc::new(functor))
}

/// Γ* of Lemma ex.seq.(b): the subgroup generated by all g carrying some
/// member of Q to a member of Q, together with the verification of the short
/// exact sequence 1 → C_{Z(Y)}(Γ) → C_{Z(Y)}(Γ*) → lim^1(Z^R) → 1 by
/// independent order computations on both sides.
pub struct GammaStarResult {
    pub gamma_star: Subgroup,
    pub c_zy_gamma: u64,
    pub c_zy_gamma_star: u64,
    pub lim1_r: LimitResult,
    pub ses_check: bool,
}

pub fn gamma_star(
    setup: &Setup,
    f: &FusionSystem,
    oc: &OrbitCategory,
    q: &Interval,
    opts: BarOptions,
) -> Result<GammaStarResult> {
    if setup.kind == SetupKind::Invalid {
        return Err(Error::domain("gamma_star needs a general setup"));
    }
    let g = f.group();
    let y_idx = f
        .index_of_subgroup(&setup.y)
        .ok_or_else(|| Error::domain("Y not inside S"))?;
    let whole = f.overgroup_interval(y_idx);
    if !q.members.iter().all(|i| whole.members.contains(i)) {
        return Err(Error::domain("Q must sit inside I(Y,S)"));
    }
    if !q.members.contains(&f.sylow_index()) {
        return Err(Error::domain("Q must contain S (closed under overgroups)"));
    }
    let r_members: Vec<usize> = whole
        .members
        .iter()
        .copied()
        .filter(|i| !q.members.contains(i))
        .collect();
    let r = f.make_interval(&r_members)?;
    if !r.f_invariant || !q.f_invariant {
        return Err(Error::domain("interval pair must be F-invariant"));
    }

    // Γ* by generator collection
    let member_keys: std::collections::HashSet<Vec<u32>> = q
        .members
        .iter()
        .map(|&i| f.subgroup(i).key())
        .collect();
    let mut gens: Vec<u32> = Vec::new();
    for gg in 0..g.order() as u32 {
        let moves_some = q.members.iter().any(|&i| {
            let img = f.subgroup(i).conjugate_by(gg);
            member_keys.contains(&img.key())
        });
        if moves_some {
            gens.push(gg);
        }
    }
    let gamma_star = g.subgroup_from_gens(&gens);

    // C_{Z(Y)}(Γ) and C_{Z(Y)}(Γ*)
    let d = &setup.d;
    let fixed_in = |h: &Subgroup| -> u64 {
        d.elems()
            .iter()
            .filter(|&&z| h.gens().iter().all(|&x| g.conj(x, z) == z))
            .count() as u64
    };
    let c_zy_gamma = fixed_in(&g.full_subgroup());
    let c_zy_gamma_star = fixed_in(&gamma_star);

    let lim = interval_limits(f, oc, &r, 1, opts)?;
    let lim1_r = lim[1].clone();
    let lim1_order = lim1_r.order.to_u64().unwrap_or(u64::MAX);
    let ses_check = c_zy_gamma_star == c_zy_gamma * lim1_order;
    Ok(GammaStarResult {
        gamma_star,
        c_zy_gamma,
        c_zy_gamma_star,
        lim1_r,
        ses_check,
    })
}

/// A single vanishing claim and its outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VanishingLine {
    pub degree: usize,
    pub order: String,
    pub vanishes: bool,
    pub asserted: bool,
}

#[derive(Debug)]
pub struct VanishingReport {
    pub prime: u64,
    pub lines: Vec<VanishingLine>,
}

/// Compute lim^k(Z_F) for the requested degrees; any nonzero value at
/// k ≥ k(p) is a theorem violation (the main vanishing theorem).
pub fn verify_vanishing(
    f: &FusionSystem,
    oc: &OrbitCategory,
    degrees: &[usize],
    opts: BarOptions,
) -> Result<VanishingReport> {
    let sat = f.check_saturation();
    if !sat.saturated {
        return Err(Error::violation(format!(
            "fusion system of a finite group failed the saturation axioms: {:?}",
            sat.violations
        )));
    }
    let centric: Vec<usize> = (0..f.subgroups().len())
        .filter(|&i| f.status_flags(i).f_centric)
        .collect();
    let full = f.make_interval(&centric)?;
    let kmax = degrees.iter().copied().max().unwrap_or(0);
    let lims = interval_limits(f, oc, &full, kmax, opts)?;
    let threshold = bar::k_of_p(f.prime());
    let mut lines = Vec::new();
    for &k in degrees {
        let lim = &lims[k];
        let vanishes = lim.is_zero();
        let asserted = k >= threshold;
        if asserted && !vanishes {
            return Err(Error::violation(format!(
                "lim^{k}(Z_F) = {} is nonzero at p = {} (main vanishing theorem)",
                lim.describe(),
                f.prime()
            )));
        }
        lines.push(VanishingLine {
            degree: k,
            order: lim.order.to_string(),
            vanishes,
            asserted,
        });
    }
    Ok(VanishingReport {
        prime: f.prime(),
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fusion::FusionSystem;
    use crate::orbit::orbit_category;

    #[test]
    fn vanishing_for_small_corpus() {
        for (name, p, ks) in [
            ("S4", 2u64, vec![2usize, 3]),
            ("S3", 3, vec![1, 2]),
            ("D8", 2, vec![2, 3]),
            ("SL(2,3)", 2, vec![2, 3]),
        ] {
            let g = corpus::named(name).unwrap();
            let f = FusionSystem::new(&g, p, 64).unwrap();
            let oc = orbit_category(&f).unwrap();
            let rep = verify_vanishing(&f, &oc, &ks, BarOptions::default()).unwrap();
            assert!(rep.lines.iter().all(|l| l.vanishes), "{name}: {:?}", rep.lines);
        }
    }

    #[test]
    fn gamma_star_on_s4() {
        // Q = {D8}, R = {V4}: Γ* = N_Γ(D8) = D8,
        // |C_{V4}(D8)| = 2 = |C_{V4}(Σ4)| · |lim^1(Z^R)| = 1 · 2
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let syl = s4.sylow(2);
        let v4 = s4.o_p(2);
        let setup = crate::offenders::setup_classify(&s4, &syl, &v4, 2).unwrap();
        let q = f.make_interval(&[f.sylow_index()]).unwrap();
        let res = gamma_star(&setup, &f, &oc, &q, BarOptions::default()).unwrap();
        assert_eq!(res.gamma_star.order(), 8);
        assert_eq!(res.c_zy_gamma, 1);
        assert_eq!(res.c_zy_gamma_star, 2);
        assert!(res.ses_check);
    }

    #[test]
    fn gamma_star_degenerate_whole_interval() {
        // Q = I(Y,S) entire: R = ∅, Γ* = Γ, both sides 1·|C_{Z(Y)}(Γ)|
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let syl = s4.sylow(2);
        let v4 = s4.o_p(2);
        let setup = crate::offenders::setup_classify(&s4, &syl, &v4, 2).unwrap();
        let v4_idx = f.index_of_subgroup(&v4).unwrap();
        let q = f.overgroup_interval(v4_idx);
        let res = gamma_star(&setup, &f, &oc, &q, BarOptions::default()).unwrap();
        assert_eq!(res.gamma_star.order(), 24);
        assert!(res.ses_check);
        assert!(res.lim1_r.is_zero());
    }

    #[test]
    fn lambda_via_wrapper() {
        let c3 = corpus::cyclic(3).unwrap();
        let m = FinAb::from_orders(&[2]);
        let act = trivial_action(&c3, &m);
        let lams = lambda(&c3, 2, &m, &act, 2, BarOptions::default(), 64).unwrap();
        assert_eq!(lams[0].group.as_ref().unwrap().factors(), &[2]);
        assert!(lams[1].is_zero() && lams[2].is_zero());
    }
}
