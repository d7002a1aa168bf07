use crate::error::{Error, Result};
use crate::finab::{as_finab, fixed_points, induced_hom, span_structure, FinAb, FinAbHom, SubFinAb};
use crate::fusion::{FusionSystem, Interval};
use crate::group::{p_part, FiniteGroup, Subgroup};
use crate::lattice;
use std::collections::HashMap;

/// An action of a finite group on a finite abelian p-group, with one matrix
/// per group element.
pub struct ModuleAction {
    pub group: FiniteGroup,
    pub module: FinAb,
    pub act: Vec<FinAbHom>,
    pub p: u64,
}

impl ModuleAction {
    pub fn new(group: FiniteGroup, module: FinAb, act: Vec<FinAbHom>, p: u64) -> Result<Self> {
        if act.len() != group.order() as usize {
            return Err(Error::domain("need one matrix per group element"));
        }
        if p_part(module.order().max(1), p) != module.order().max(1) {
            return Err(Error::domain("module must be a p-group"));
        }
        let a = ModuleAction {
            group,
            module,
            act,
            p,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        for g in 0..self.group.order() as u32 {
            if !self.act[g as usize].is_automorphism() {
                return Err(Error::domain("action element is not an automorphism"));
            }
        }
        for &g in self.group.generator_ids() {
            for h in 0..self.group.order() as u32 {
                let lhs = &self.act[self.group.mul(g, h) as usize];
                let rhs = self.act[g as usize].compose(&self.act[h as usize]);
                if *lhs != rhs {
                    return Err(Error::domain("action is not a homomorphism"));
                }
            }
        }
        Ok(())
    }

    /// Conjugation action of Γ on a normal abelian p-subgroup D, factored
    /// through Γ/C_Γ(D) so the result is faithful.  Returns the action of the
    /// quotient together with the projection from Γ element ids.
    pub fn by_conjugation(gamma: &FiniteGroup, d: &Subgroup, p: u64) -> Result<(Self, Vec<u32>)> {
        if !d.is_abelian() || !d.is_p_group(p) {
            return Err(Error::domain("module must be a normal abelian p-subgroup"));
        }
        if !d.is_normal() {
            return Err(Error::domain("module subgroup must be normal"));
        }
        let c = gamma.centralizer(d);
        let (q, proj) = gamma.quotient(&c)?;
        let iso = as_finab(d)?;
        // one representative per quotient element
        let mut rep = vec![u32::MAX; q.order() as usize];
        for g in 0..gamma.order() as u32 {
            let o = proj[g as usize] as usize;
            if rep[o] == u32::MAX {
                rep[o] = g;
            }
        }
        let mut act = Vec::with_capacity(q.order() as usize);
        for o in 0..q.order() as usize {
            let g = rep[o];
            act.push(induced_hom(&iso, &iso, |x| gamma.conj(g, x))?);
        }
        let action = ModuleAction::new(q, iso.finab.clone(), act, p)?;
        debug_assert!(action.is_faithful());
        Ok((action, proj))
    }

    /// Conjugation action of a subgroup Γ₀ on D ≤ Γ₀ without factoring out
    /// the centralizer (the group of the action is Γ₀ itself re-enumerated).
    pub fn by_conjugation_of_subgroup(gamma: &Subgroup, d: &Subgroup, p: u64) -> Result<(Self, Vec<u32>)> {
        let g0 = gamma.to_group();
        let parent = gamma.parent();
        let d_ids: Vec<u32> = d
            .elems()
            .iter()
            .map(|&x| g0.index_of(parent.element(x)).expect("D ≤ Γ₀"))
            .collect();
        let d_in = g0.subgroup_from_ids(d_ids)?;
        Self::by_conjugation(&g0, &d_in, p)
    }

    pub fn is_faithful(&self) -> bool {
        let id = FinAbHom::identity(&self.module);
        (0..self.group.order() as u32)
            .filter(|&g| self.act[g as usize] == id)
            .count()
            == 1
    }

    /// Elements acting trivially.
    pub fn kernel_elems(&self) -> Vec<u32> {
        let id = FinAbHom::identity(&self.module);
        (0..self.group.order() as u32)
            .filter(|&g| self.act[g as usize] == id)
            .collect()
    }

    pub fn fixed_by(&self, elems: &[u32]) -> SubFinAb {
        let gens: Vec<FinAbHom> = elems.iter().map(|&g| self.act[g as usize].clone()).collect();
        fixed_points(&self.module, &gens).expect("action elements are automorphisms")
    }

    pub fn fixed_order(&self, sub: &Subgroup) -> u64 {
        self.fixed_by(sub.gens()).group.order()
    }

    /// [A, D]: the submodule generated by a·v - v.
    pub fn commutator_submodule(&self, sub: &Subgroup) -> SubFinAb {
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for &a in sub.elems() {
            let h = &self.act[a as usize];
            for j in 0..self.module.rank() {
                let mut e = self.module.zero();
                e[j] = 1;
                let mut w = h.apply(&e);
                w[j] -= 1;
                self.module.reduce(&mut w);
                if w.iter().any(|&x| x != 0) {
                    gens.push(w);
                }
            }
        }
        span_structure(&self.module, &gens)
    }

    /// [A, [A, D]] = 1?
    pub fn is_quadratic(&self, sub: &Subgroup) -> bool {
        let cm = self.commutator_submodule(sub);
        sub.elems().iter().all(|&a| {
            let h = &self.act[a as usize];
            (0..cm.group.rank()).all(|k| {
                let mut e = cm.group.zero();
                e[k] = 1;
                let v = cm.inclusion.apply(&e);
                h.apply(&v) == v
            })
        })
    }

    pub fn score(&self, sub: &Subgroup) -> u64 {
        sub.order() * self.fixed_order(sub)
    }

    /// Best offender test: |A||C_D(A)| ≥ |B||C_D(B)| for every B ≤ A.
    pub fn is_best_offender(&self, a: &Subgroup) -> bool {
        let target = self.score(a);
        all_subgroups_of_abelian(&self.group, a)
            .iter()
            .all(|b| self.score(b) <= target)
    }
}

/// All subgroups of an abelian subgroup, by closure over centralizing
/// extensions.
pub fn all_subgroups_of_abelian(g: &FiniteGroup, a: &Subgroup) -> Vec<Subgroup> {
    debug_assert!(a.is_abelian());
    let mut found: HashMap<Vec<u32>, Subgroup> = HashMap::new();
    let triv = g.trivial_subgroup();
    found.insert(triv.key(), triv.clone());
    let mut frontier = vec![triv];
    while let Some(h) = frontier.pop() {
        for &x in a.elems() {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.gens().to_vec();
            gens.push(x);
            let bigger = g.subgroup_from_gens(&gens);
            if !found.contains_key(&bigger.key()) {
                found.insert(bigger.key(), bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_values().collect();
    out.sort_by_key(|h| (h.order(), h.key()));
    out
}

/// All abelian p-subgroups of a group (候补 offenders), by closure over
/// centralizing p-element extensions.
pub fn abelian_p_subgroups(g: &FiniteGroup, p: u64) -> Vec<Subgroup> {
    let p_elems: Vec<u32> = (0..g.order() as u32)
        .filter(|&x| {
            let o = g.element_order(x);
            o == p_part(o, p)
        })
        .collect();
    let mut found: HashMap<Vec<u32>, Subgroup> = HashMap::new();
    let triv = g.trivial_subgroup();
    found.insert(triv.key(), triv.clone());
    let mut frontier = vec![triv];
    while let Some(h) = frontier.pop() {
        let c = g.centralizer(&h);
        for &x in &p_elems {
            if h.contains(x) || !c.contains(x) {
                continue;
            }
            let mut gens = h.gens().to_vec();
            gens.push(x);
            let bigger = g.subgroup_from_gens(&gens);
            if bigger.is_abelian() && !found.contains_key(&bigger.key()) {
                found.insert(bigger.key(), bigger.clone());
                frontier.push(bigger.clone());
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_values().collect();
    out.sort_by_key(|h| (h.order(), h.key()));
    out
}

/// Thompson subgroup data of a p-group.
pub struct ThompsonData {
    pub d_s: u64,
    pub a_s: Vec<Subgroup>,
    pub j_s: Subgroup,
}

pub fn thompson(s: &Subgroup, p: u64, lattice_bound: u64) -> Result<ThompsonData> {
    let lat = lattice::subgroup_lattice(s, p, lattice_bound)?;
    let d_s = lat
        .iter()
        .filter(|h| h.is_abelian())
        .map(|h| h.order())
        .max()
        .unwrap_or(1);
    let a_s: Vec<Subgroup> = lat
        .into_iter()
        .filter(|h| h.is_abelian() && h.order() == d_s)
        .collect();
    let mut gens: Vec<u32> = Vec::new();
    for h in &a_s {
        gens.extend_from_slice(h.gens());
    }
    let j_s = s.parent().subgroup_from_gens(&gens);
    Ok(ThompsonData { d_s, a_s, j_s })
}

#[derive(Debug, Clone)]
pub struct OffenderRecord {
    pub subgroup: Subgroup,
    pub score: u64,
    pub quadratic: bool,
    pub best: bool,
}

/// Score every abelian p-subgroup of the acting group; requires the action
/// faithful (Definition frame for offenders).
pub fn best_offenders(action: &ModuleAction) -> Result<Vec<OffenderRecord>> {
    if !action.is_faithful() {
        return Err(Error::domain("offenders are defined for faithful actions"));
    }
    let mut out = Vec::new();
    for a in abelian_p_subgroups(&action.group, action.p) {
        let score = action.score(&a);
        let best = action.is_best_offender(&a);
        let quadratic = action.is_quadratic(&a);
        out.push(OffenderRecord {
            subgroup: a,
            score,
            quadratic,
            best,
        });
    }
    Ok(out)
}

/// J_D(G) = subgroup generated by the best offenders.
pub fn j_d(action: &ModuleAction) -> Result<Subgroup> {
    let recs = best_offenders(action)?;
    let mut gens: Vec<u32> = Vec::new();
    for r in recs.iter().filter(|r| r.best) {
        gens.extend_from_slice(r.subgroup.gens());
    }
    Ok(action.group.subgroup_from_gens(&gens))
}

/// J(Γ, D): the preimage in Γ of J_D(Γ/C_Γ(D)).
pub fn j_gamma_d(gamma: &FiniteGroup, d: &Subgroup, p: u64) -> Result<Subgroup> {
    let (action, proj) = ModuleAction::by_conjugation(gamma, d, p)?;
    let jq = j_d(&action)?;
    let ids: Vec<u32> = (0..gamma.order() as u32)
        .filter(|&g| jq.contains(proj[g as usize]))
        .collect();
    let j = gamma.subgroup_from_ids(ids)?;
    // D ≤ C_Γ(D) ≤ J(Γ,D) ≤ Γ
    debug_assert!(j.contains_subgroup(&gamma.centralizer(d)));
    debug_assert!(j.contains_subgroup(d));
    Ok(j)
}

/// J(Γ₀, D) computed inside a subgroup Γ₀ of some ambient group; the result
/// is a subgroup of the ambient group contained in Γ₀.
pub fn j_gamma_d_within(gamma: &Subgroup, d: &Subgroup, p: u64) -> Result<Subgroup> {
    let g0 = gamma.to_group();
    let parent = gamma.parent();
    let d_ids: Vec<u32> = d
        .elems()
        .iter()
        .map(|&x| g0.index_of(parent.element(x)).expect("D ≤ Γ₀"))
        .collect();
    let d_in = g0.subgroup_from_ids(d_ids)?;
    let j_in = j_gamma_d(&g0, &d_in, p)?;
    let ids: Vec<u32> = j_in
        .elems()
        .iter()
        .map(|&x| parent.index_of(g0.element(x)).expect("Γ₀ ≤ parent"))
        .collect();
    parent.subgroup_from_ids(ids)
}

/// The constructive Timmesfeld replacement B = C_A([A,V]) with its full
/// verification record.
pub struct TimmesfeldRecord {
    pub b: Subgroup,
    pub b_nontrivial: bool,
    pub b_quadratic: bool,
    pub b_best: bool,
    pub scores_equal: bool,
    pub cvb_is_av_plus_cva: bool,
    pub cvb_proper: bool,
}

impl TimmesfeldRecord {
    pub fn all_pass(&self) -> bool {
        self.b_nontrivial
            && self.b_quadratic
            && self.b_best
            && self.scores_equal
            && self.cvb_is_av_plus_cva
            && self.cvb_proper
    }
}

pub fn timmesfeld(action: &ModuleAction, a: &Subgroup) -> Result<TimmesfeldRecord> {
    if !a.is_abelian() {
        return Err(Error::domain("Timmesfeld replacement needs an abelian offender"));
    }
    // faithfulness of A itself on V
    let id = FinAbHom::identity(&action.module);
    let a_kernel = a
        .elems()
        .iter()
        .filter(|&&x| action.act[x as usize] == id)
        .count();
    if a_kernel != 1 {
        return Err(Error::domain("offender must act faithfully"));
    }
    if !action.is_best_offender(a) {
        return Err(Error::domain("input subgroup is not a best offender"));
    }
    let av = action.commutator_submodule(a);
    // B = C_A([A,V])
    let av_vectors: Vec<Vec<i64>> = av
        .group
        .elements()
        .into_iter()
        .map(|e| av.inclusion.apply(&e))
        .collect();
    let b_ids: Vec<u32> = a
        .elems()
        .iter()
        .copied()
        .filter(|&x| {
            let h = &action.act[x as usize];
            av_vectors.iter().all(|v| h.apply(v) == *v)
        })
        .collect();
    let b = action.group.subgroup_from_ids(b_ids)?;

    let cva = action.fixed_by(a.gens());
    let cvb = action.fixed_by(b.gens());
    // [A,V] + C_V(A)
    let mut gens: Vec<Vec<i64>> = av_vectors.clone();
    for k in 0..cva.group.rank() {
        let mut e = cva.group.zero();
        e[k] = 1;
        gens.push(cva.inclusion.apply(&e));
    }
    let sum = span_structure(&action.module, &gens);

    let record = TimmesfeldRecord {
        b_nontrivial: b.order() > 1,
        b_quadratic: action.is_quadratic(&b),
        b_best: action.is_best_offender(&b),
        scores_equal: action.score(a) == action.score(&b),
        cvb_is_av_plus_cva: sum.group.order() == cvb.group.order() && {
            // containment of the sum inside C_V(B)
            let cvb_set: std::collections::HashSet<Vec<i64>> = cvb
                .group
                .elements()
                .into_iter()
                .map(|e| cvb.inclusion.apply(&e))
                .collect();
            sum.group
                .elements()
                .into_iter()
                .all(|e| cvb_set.contains(&sum.inclusion.apply(&e)))
        },
        cvb_proper: cvb.group.order() < action.module.order(),
        b,
    };
    Ok(record)
}

/// General / reduced setup classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SetupKind {
    General,
    Reduced,
    Invalid,
}

pub struct Setup {
    pub gamma: FiniteGroup,
    pub sylow: Subgroup,
    pub y: Subgroup,
    pub p: u64,
    pub kind: SetupKind,
    /// D = Z(Y)
    pub d: Subgroup,
    /// V = Ω₁(D)
    pub v: Subgroup,
}

pub fn setup_classify(gamma: &FiniteGroup, s: &Subgroup, y: &Subgroup, p: u64) -> Result<Setup> {
    let d = y.center_of();
    let v = d.omega_1(p)?;
    let valid_general = s.order() == p_part(gamma.order(), p)
        && s.is_p_group(p)
        && s.contains_subgroup(y)
        && y.is_p_group(p)
        && y.is_normal()
        && y.contains_subgroup(&gamma.centralizer(y));
    let kind = if !valid_general {
        SetupKind::Invalid
    } else {
        let o_p = gamma.o_p(p);
        let c_s_d = s.centralizer_within(d.gens());
        let reduced = o_p.elems() == y.elems() && c_s_d.elems() == y.elems() && {
            let c_gamma_d = gamma.centralizer(&d);
            let (q, _) = gamma.quotient(&c_gamma_d)?;
            q.o_p(p).order() == 1
        };
        if reduced {
            SetupKind::Reduced
        } else {
            SetupKind::General
        }
    };
    Ok(Setup {
        gamma: gamma.clone(),
        sylow: s.clone(),
        y: y.clone(),
        p,
        kind,
        d,
        v,
    })
}

/// The offender interval of a general setup: R = {R ∈ I(Y,S) : J(R,D) = Y},
/// with its complement Q = {Q : J(Q,D) > Y}.
pub struct OffenderInterval {
    pub r: Interval,
    pub q: Interval,
}

pub fn offender_interval(setup: &Setup, f: &FusionSystem) -> Result<OffenderInterval> {
    if setup.kind == SetupKind::Invalid {
        return Err(Error::domain("offender interval needs a general setup"));
    }
    let y_idx = f
        .index_of_subgroup(&setup.y)
        .ok_or_else(|| Error::domain("Y is not a subgroup of S"))?;
    let iv = f.overgroup_interval(y_idx);
    let mut r_members = Vec::new();
    let mut q_members = Vec::new();
    for &i in &iv.members {
        let r_sub = f.subgroup(i);
        let j = j_gamma_d_within(r_sub, &setup.d, setup.p)?;
        if j.elems() == setup.y.elems() {
            r_members.push(i);
        } else {
            q_members.push(i);
        }
    }
    let r = f.make_interval(&r_members)?;
    let q = f.make_interval(&q_members)?;
    if !r.f_invariant {
        return Err(Error::violation("offender interval is not F-invariant"));
    }
    Ok(OffenderInterval { r, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn transvection_action() -> ModuleAction {
        // C2 = <transvection> on (Z/2)^2
        let lg = corpus::linear_group(
            2,
            2,
            &[vec![vec![1, 1], vec![0, 1]]],
            100,
        )
        .unwrap();
        let m = FinAb::from_orders(&[2, 2]);
        let act: Vec<FinAbHom> = (0..lg.group.order() as u32)
            .map(|g| {
                let mat = lg.matrix_of(g);
                FinAbHom::new(m.clone(), m.clone(), mat).unwrap()
            })
            .collect();
        ModuleAction::new(lg.group.clone(), m, act, 2).unwrap()
    }

    #[test]
    fn thompson_examples() {
        let d8 = corpus::named("D8").unwrap();
        let t = thompson(&d8.full_subgroup(), 2, 64).unwrap();
        assert_eq!(t.d_s, 4);
        assert_eq!(t.a_s.len(), 3); // two Klein fours and one C4
        assert_eq!(t.j_s.order(), 8);

        let q8 = corpus::named("Q8").unwrap();
        let t = thompson(&q8.full_subgroup(), 2, 64).unwrap();
        assert_eq!(t.d_s, 4);
        assert_eq!(t.a_s.len(), 3); // three C4
        assert!(t.a_s.iter().all(|a| !a.is_elementary_abelian(2)));
        assert_eq!(t.j_s.order(), 8);

        let v4 = corpus::named("C2xC2").unwrap();
        let t = thompson(&v4.full_subgroup(), 2, 64).unwrap();
        assert_eq!(t.d_s, 4);
        assert_eq!(t.a_s.len(), 1);
        assert_eq!(t.j_s.order(), 4);
    }

    #[test]
    fn transvection_is_best_offender() {
        let action = transvection_action();
        let full = action.group.full_subgroup();
        assert_eq!(action.score(&full), 4); // 2 · 2 = |D|
        assert!(action.is_best_offender(&full));
        assert!(action.is_quadratic(&full));
    }

    #[test]
    fn order_3_group_has_no_nontrivial_2_offenders() {
        // C3 on (Z/2)^2: no nontrivial abelian 2-subgroups at all
        let lg = corpus::linear_group(2, 2, &[vec![vec![0, 1], vec![1, 1]]], 100).unwrap();
        let m = FinAb::from_orders(&[2, 2]);
        let act: Vec<FinAbHom> = (0..lg.group.order() as u32)
            .map(|g| FinAbHom::new(m.clone(), m.clone(), lg.matrix_of(g)).unwrap())
            .collect();
        let action = ModuleAction::new(lg.group.clone(), m, act, 2).unwrap();
        let recs = best_offenders(&action).unwrap();
        let nontrivial: Vec<_> = recs
            .iter()
            .filter(|r| r.best && r.subgroup.order() > 1)
            .collect();
        assert!(nontrivial.is_empty());
    }

    #[test]
    fn j_gamma_d_examples() {
        // central D: J = Γ
        let d8 = corpus::named("D8").unwrap();
        let z = d8.center();
        let j = j_gamma_d(&d8, &z, 2).unwrap();
        assert_eq!(j.order(), 8);

        // Γ = Σ4, D = V4: quotient Σ3 on V4 has transposition-image offenders
        let s4 = corpus::named("S4").unwrap();
        let v4 = s4.o_p(2);
        let j = j_gamma_d(&s4, &v4, 2).unwrap();
        assert_eq!(j.order(), 24);
    }

    #[test]
    fn j_idempotence() {
        let s4 = corpus::named("S4").unwrap();
        let v4 = s4.o_p(2);
        let j = j_gamma_d(&s4, &v4, 2).unwrap();
        let jj = j_gamma_d_within(&j, &v4, 2).unwrap();
        assert_eq!(jj.elems(), j.elems());
    }

    #[test]
    fn timmesfeld_on_transvection() {
        let action = transvection_action();
        let a = action.group.full_subgroup();
        let rec = timmesfeld(&action, &a).unwrap();
        assert!(rec.all_pass());
        assert_eq!(rec.b.order(), 2); // B = A here
    }

    #[test]
    fn timmesfeld_rejects_non_offender() {
        // swap action of C2 on (Z/3)^2 is not an offender hunt at p=2 on a
        // 3-group module; build instead a non-best offender: the trivial
        // subgroup is always best, so use a faithful C4 on (Z/2)^2? C4 does
        // not embed; use instead A = full GL(2,2) Sylow = <transvection> but
        // pass a non-abelian group check via S3 action.
        let lg = corpus::linear_group(
            2,
            2,
            &[vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
            100,
        )
        .unwrap();
        assert_eq!(lg.group.order(), 6);
        let m = FinAb::from_orders(&[2, 2]);
        let act: Vec<FinAbHom> = (0..6u32)
            .map(|g| FinAbHom::new(m.clone(), m.clone(), lg.matrix_of(g)).unwrap())
            .collect();
        let action = ModuleAction::new(lg.group.clone(), m, act, 2).unwrap();
        let full = action.group.full_subgroup();
        assert!(timmesfeld(&action, &full).is_err()); // not abelian
    }

    #[test]
    fn setup_classification_examples() {
        let s4 = corpus::named("S4").unwrap();
        let syl = s4.sylow(2);
        let v4 = s4.o_p(2);
        let setup = setup_classify(&s4, &syl, &v4, 2).unwrap();
        assert_eq!(setup.kind, SetupKind::Reduced);
        assert_eq!(setup.d.order(), 4); // Z(V4) = V4

        // Y must be normal in Γ: the Sylow D8 is not normal in Σ4
        let setup2 = setup_classify(&s4, &syl, &syl, 2).unwrap();
        assert_eq!(setup2.kind, SetupKind::Invalid);

        // inside its own normalizer, (D8, D8, D8) is a general setup and in
        // fact reduced
        let d8 = corpus::named("D8").unwrap();
        let full = d8.full_subgroup();
        let setup_d8 = setup_classify(&d8, &full, &full, 2).unwrap();
        assert_eq!(setup_d8.kind, SetupKind::Reduced);

        // (D8, D8, C4): general but not reduced (C4 ≠ O_2(D8))
        let c4 = {
            let x = (0..8u32).find(|&x| d8.element_order(x) == 4).unwrap();
            d8.subgroup_from_gens(&[x])
        };
        let setup_c4 = setup_classify(&d8, &full, &c4, 2).unwrap();
        assert_eq!(setup_c4.kind, SetupKind::General);

        // non-normal Y is invalid
        let c4_in_s4 = (0..24u32)
            .find(|&x| s4.element_order(x) == 4)
            .map(|x| s4.subgroup_from_gens(&[x]))
            .unwrap();
        let setup3 = setup_classify(&s4, &syl, &c4_in_s4, 2).unwrap();
        assert_eq!(setup3.kind, SetupKind::Invalid);
    }

    #[test]
    fn offender_interval_for_s4_setup() {
        let s4 = corpus::named("S4").unwrap();
        let syl = s4.sylow(2);
        let v4 = s4.o_p(2);
        let setup = setup_classify(&s4, &syl, &v4, 2).unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oi = offender_interval(&setup, &f).unwrap();
        // R = {V4}, Q = {D8}
        assert_eq!(oi.r.members.len(), 1);
        assert_eq!(f.subgroup(oi.r.members[0]).order(), 4);
        assert_eq!(oi.q.members.len(), 1);
        assert_eq!(f.subgroup(oi.q.members[0]).order(), 8);
    }

    #[test]
    fn y_equals_s_gives_full_interval() {
        // Γ a p-group acting trivially: R = I(Y,S) entire
        let d8 = corpus::named("D8").unwrap();
        let syl = d8.full_subgroup();
        let c4 = {
            let x = (0..8u32).find(|&x| d8.element_order(x) == 4).unwrap();
            d8.subgroup_from_gens(&[x])
        };
        let setup = setup_classify(&d8, &syl, &c4, 2).unwrap();
        assert_eq!(setup.kind, SetupKind::General);
        let f = FusionSystem::new(&d8, 2, 64).unwrap();
        let oi = offender_interval(&setup, &f).unwrap();
        // J(C4, C4) = C4 and J(D8, C4) = D8 > Y: R = {C4}, Q = {D8}
        assert_eq!(oi.r.members.len(), 1);
        assert_eq!(oi.q.members.len(), 1);
    }

    #[test]
    fn quadratic_faithful_groups_are_elementary_abelian() {
        // Lemma: quadratic faithful action forces elementary abelian
        let action = transvection_action();
        for a in abelian_p_subgroups(&action.group, 2) {
            if a.order() > 1 && action.is_quadratic(&a) {
                assert!(a.is_elementary_abelian(2));
            }
        }
    }
}
