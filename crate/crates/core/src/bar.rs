use crate::category::AbFunctor;
use crate::error::{Error, Result};
use crate::finab::{self, subquotient_raw, FinAb, Subquotient};
use crate::modl::{FactoredOrder, Howell, SparseVec};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug)]
pub struct BarOptions {
    /// highest cochain degree materialized (lim^k needs n_max ≥ k+1)
    pub n_max: usize,
    /// per-degree string ceiling
    pub string_bound: usize,
    /// max rank of C^k for which invariant factors and witnesses are computed
    pub structure_bound: usize,
}

impl Default for BarOptions {
    fn default() -> Self {
        BarOptions {
            n_max: 4,
            string_bound: 2_000_000,
            structure_bound: 700,
        }
    }
}

/// One degree of the normalized bar complex: composable strings
/// x_0 → x_1 → ... → x_n of nonidentity morphisms with F(x_0) ≠ 0, and the
/// concatenated coordinates of F(x_0) over the strings.
pub struct BarDegree {
    /// (x0, chain of morphism ids)
    pub strings: Vec<(u32, Vec<u32>)>,
    pub index: HashMap<(u32, Vec<u32>), u32>,
    pub offsets: Vec<u32>,
    pub orders: Vec<u64>,
}

impl BarDegree {
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn total_order(&self) -> FactoredOrder {
        let mut f = FactoredOrder::one();
        for &d in &self.orders {
            f.mul_assign(&FactoredOrder::of(d));
        }
        f
    }
}

/// Sparse differential C^n → C^{n+1} stored column-wise.
pub struct SparseDiff {
    pub cols: Vec<SparseVec>,
    pub n_rows: usize,
}

/// The normalized bar-resolution cochain complex of a contravariant functor
/// on a finite category.  Identity morphisms are excluded from strings and
/// strings with F(x_0) = 0 are never materialized.
pub struct BarComplex {
    pub functor: Arc<AbFunctor>,
    pub degrees: Vec<BarDegree>,
    pub diffs: Vec<SparseDiff>,
    /// lcm of all coordinate orders
    pub exponent: i64,
    structure_bound: usize,
}

impl BarComplex {
    pub fn build(functor: Arc<AbFunctor>, opts: BarOptions) -> Result<Self> {
        let cat = functor.cat.clone();
        let out_mor = cat.nonidentity_out();
        let mut degrees: Vec<BarDegree> = Vec::with_capacity(opts.n_max + 1);

        // degree 0: one string per object with nonzero value
        let mut strings0: Vec<(u32, Vec<u32>)> = Vec::new();
        for x in 0..cat.n_objects as u32 {
            if !functor.values[x as usize].is_trivial() {
                strings0.push((x, Vec::new()));
            }
        }
        degrees.push(make_degree(&functor, strings0));

        for n in 1..=opts.n_max {
            let prev = &degrees[n - 1];
            let mut strings: Vec<(u32, Vec<u32>)> = Vec::new();
            for (x0, chain) in &prev.strings {
                let last_obj = chain
                    .last()
                    .map(|&m| cat.dst[m as usize])
                    .unwrap_or(*x0);
                for &m in &out_mor[last_obj as usize] {
                    let mut c = chain.clone();
                    c.push(m);
                    strings.push((*x0, c));
                    if strings.len() > opts.string_bound {
                        return Err(Error::ComplexTooLarge {
                            degree: n,
                            count: strings.len(),
                            bound: opts.string_bound,
                        });
                    }
                }
            }
            degrees.push(make_degree(&functor, strings));
        }

        // differentials
        let mut diffs = Vec::with_capacity(opts.n_max);
        for n in 0..opts.n_max {
            diffs.push(build_differential(&functor, &degrees[n], &degrees[n + 1], n));
        }

        let mut exps: Vec<u64> = functor.values.iter().map(|v| v.exponent()).collect();
        exps.push(2);
        let exponent = finab::working_exponent(&exps);

        let complex = BarComplex {
            functor,
            degrees,
            diffs,
            exponent,
            structure_bound: opts.structure_bound,
        };
        complex.assert_d_squared_zero()?;
        Ok(complex)
    }

    fn assert_d_squared_zero(&self) -> Result<()> {
        for n in 0..self.diffs.len().saturating_sub(1) {
            let d0 = &self.diffs[n];
            let d1 = &self.diffs[n + 1];
            let target_orders = &self.degrees[n + 2].orders;
            for col in &d0.cols {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(mid, v) in col {
                    for &(row, w) in &d1.cols[mid as usize] {
                        *acc.entry(row).or_insert(0) += v * w;
                    }
                }
                for (row, v) in acc {
                    if v.rem_euclid(target_orders[row as usize] as i64) != 0 {
                        return Err(Error::violation(format!(
                            "d∘d ≠ 0 at degree {n}, row {row}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Order of C^n.
    pub fn cochain_order(&self, n: usize) -> FactoredOrder {
        self.degrees[n].total_order()
    }

    /// Order of im(d^n) as a subgroup of C^{n+1}.
    pub fn image_order(&self, n: usize) -> FactoredOrder {
        let l = self.exponent;
        let target = &self.degrees[n + 1];
        let mut how = Howell::new(l, None);
        // descending lead order: tails of new pivots then reduce against the
        // pivots already installed below them, which keeps fill-in down
        let mut cols: Vec<SparseVec> = self
            .diffs[n]
            .cols
            .iter()
            .map(|col| scale_into(col, &target.orders, l))
            .collect();
        cols.sort_unstable_by_key(|c| std::cmp::Reverse(c.first().map(|&(r, _)| r).unwrap_or(u32::MAX)));
        for col in cols {
            how.insert(col, None);
        }
        how.span_order()
    }

    /// |H^k| = |C^k| / |im d^k| / |im d^{k-1}|, computed purely from spans.
    pub fn cohomology_order(&self, k: usize) -> FactoredOrder {
        let mut ord = self.cochain_order(k);
        ord.div_assign(&self.image_order(k));
        if k > 0 {
            ord.div_assign(&self.image_order(k - 1));
        }
        ord
    }

    /// Full invariant-factor structure of H^k with witnesses; requires
    /// rank(C^k) within the structure bound.
    pub fn cohomology_structure(&self, k: usize) -> Result<Subquotient> {
        let rank = self.degrees[k].rank();
        if rank > self.structure_bound {
            return Err(Error::ComplexTooLarge {
                degree: k,
                count: rank,
                bound: self.structure_bound,
            });
        }
        let l = self.exponent;
        let domain = &self.degrees[k];
        let target = &self.degrees[k + 1];
        // kernel generators of d^k
        let mut how = Howell::new(l, Some(rank));
        for (j, col) in self.diffs[k].cols.iter().enumerate() {
            let mut track = vec![0i64; rank];
            track[j] = 1;
            how.insert(scale_into(col, &target.orders, l), Some(track));
        }
        let mut gens: Vec<Vec<i64>> = how.kernel().to_vec();
        for (j, &d) in domain.orders.iter().enumerate() {
            let mut v = vec![0i64; rank];
            v[j] = d as i64;
            gens.push(v);
        }
        for g in &mut gens {
            for (x, &d) in g.iter_mut().zip(&domain.orders) {
                *x = x.rem_euclid(d as i64);
            }
        }
        gens.retain(|g| g.iter().any(|&x| x != 0));
        // relations: image of d^{k-1} plus the coordinate orders
        let mut rels: Vec<Vec<i64>> = Vec::new();
        if k > 0 {
            for col in &self.diffs[k - 1].cols {
                let mut v = vec![0i64; rank];
                for &(row, val) in col {
                    v[row as usize] = val;
                }
                rels.push(v);
            }
        }
        for (j, &d) in domain.orders.iter().enumerate() {
            let mut v = vec![0i64; rank];
            v[j] = d as i64;
            rels.push(v);
        }
        let sq = subquotient_raw(&domain.orders, gens, &rels)?;
        // cross-check against the order-only route
        let span_route = self.cohomology_order(k);
        if sq.group.order_factored() != span_route {
            return Err(Error::violation(format!(
                "cohomology order mismatch at degree {k}: structure {} vs spans {}",
                sq.group.order_factored(),
                span_route
            )));
        }
        Ok(sq)
    }

    /// Direct inverse-limit oracle: compatible families (m_x) with
    /// F(α)(m_dst) = m_src for every morphism, computed without the bar
    /// complex.  Returns the subgroup of C^0 it carves out.
    pub fn h0_oracle(&self) -> Result<Subquotient> {
        let functor = &self.functor;
        let cat = &functor.cat;
        let deg0 = &self.degrees[0];
        let rank = deg0.rank();
        let l = self.exponent;
        // object -> (position in degree-0 strings)
        let mut obj_pos: HashMap<u32, usize> = HashMap::new();
        for (s, (x, _)) in deg0.strings.iter().enumerate() {
            obj_pos.insert(*x, s);
        }
        // constraints: for each nonidentity morphism a -> b:
        // m_a - F(α)(m_b) = 0, rows live in value(a)
        let mut how = Howell::new(l, Some(rank));
        let mut constraint_rows = 0u32;
        let mut cols: Vec<SparseVec> = vec![Vec::new(); rank];
        for m in 0..cat.n_morphisms() as u32 {
            if cat.is_identity(m) {
                continue;
            }
            let a = cat.src[m as usize];
            let b = cat.dst[m as usize];
            let va = &functor.values[a as usize];
            if va.is_trivial() {
                continue;
            }
            let base = constraint_rows;
            constraint_rows += va.rank() as u32;
            if let Some(&sa) = obj_pos.get(&a) {
                for i in 0..va.rank() as u32 {
                    let scale = l / va.factors()[i as usize] as i64;
                    cols[deg0.offsets[sa] as usize + i as usize].push((base + i, scale));
                }
            }
            if let Some(&sb) = obj_pos.get(&b) {
                let h = &functor.maps[m as usize];
                for (i, rowm) in h.mat.iter().enumerate() {
                    let scale = l / va.factors()[i] as i64;
                    for (j, &v) in rowm.iter().enumerate() {
                        let val = (-(v as i128) * scale as i128).rem_euclid(l as i128) as i64;
                        if val != 0 {
                            cols[deg0.offsets[sb] as usize + j].push((base + i as u32, val));
                        }
                    }
                }
            }
        }
        for (j, col) in cols.iter_mut().enumerate() {
            // endomorphism constraints contribute two blocks at the same
            // rows; coalesce before inserting
            col.sort_unstable_by_key(|&(r, _)| r);
            let mut merged: SparseVec = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain_mut(|(_, v)| {
                *v = v.rem_euclid(l);
                *v != 0
            });
            let mut track = vec![0i64; rank];
            track[j] = 1;
            how.insert(merged, Some(track));
            col.clear();
        }
        let mut gens: Vec<Vec<i64>> = how.kernel().to_vec();
        for (j, &d) in deg0.orders.iter().enumerate() {
            let mut v = vec![0i64; rank];
            v[j] = d as i64;
            gens.push(v);
        }
        for g in &mut gens {
            for (x, &d) in g.iter_mut().zip(&deg0.orders) {
                *x = x.rem_euclid(d as i64);
            }
        }
        gens.retain(|g| g.iter().any(|&x| x != 0));
        let rels: Vec<Vec<i64>> = deg0
            .orders
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let mut v = vec![0i64; rank];
                v[j] = d as i64;
                v
            })
            .collect();
        subquotient_raw(&deg0.orders, gens, &rels)
    }
}

fn make_degree(functor: &AbFunctor, strings: Vec<(u32, Vec<u32>)>) -> BarDegree {
    let mut offsets = Vec::with_capacity(strings.len());
    let mut orders = Vec::new();
    let mut index = HashMap::with_capacity(strings.len());
    for (i, s) in strings.iter().enumerate() {
        index.insert(s.clone(), i as u32);
        offsets.push(orders.len() as u32);
        let v = &functor.values[s.0 as usize];
        orders.extend_from_slice(v.factors());
    }
    BarDegree {
        strings,
        index,
        offsets,
        orders,
    }
}

fn build_differential(
    functor: &AbFunctor,
    domain: &BarDegree,
    target: &BarDegree,
    n: usize,
) -> SparseDiff {
    let cat = &functor.cat;
    let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); domain.rank()];
    for (t_idx, (x0, chain)) in target.strings.iter().enumerate() {
        let t_off = target.offsets[t_idx] as usize;
        let v0 = &functor.values[*x0 as usize];
        let r0 = v0.rank();
        // accumulate face contributions per (row, col)
        let mut acc: HashMap<(u32, u32), i64> = HashMap::new();

        // face 0: drop x0, apply F(first morphism)
        {
            let m1 = chain[0];
            let x1 = cat.dst[m1 as usize];
            let tail_key = (x1, chain[1..].to_vec());
            if let Some(&s_idx) = domain.index.get(&tail_key) {
                let s_off = domain.offsets[s_idx as usize] as usize;
                let h = &functor.maps[m1 as usize]; // value(x1) -> value(x0)
                for (i, rowm) in h.mat.iter().enumerate() {
                    for (j, &v) in rowm.iter().enumerate() {
                        if v != 0 {
                            *acc.entry(((t_off + i) as u32, (s_off + j) as u32)).or_insert(0) += v;
                        }
                    }
                }
            }
        }

        // faces 1..n: compose adjacent morphisms
        for i in 1..=n {
            let composite = cat.compose_mor(chain[i], chain[i - 1]);
            if cat.is_identity(composite) {
                continue; // normalized complex: degenerate face vanishes
            }
            let mut c = Vec::with_capacity(chain.len() - 1);
            c.extend_from_slice(&chain[..i - 1]);
            c.push(composite);
            c.extend_from_slice(&chain[i + 1..]);
            let key = (*x0, c);
            let s_idx = domain.index[&key];
            let s_off = domain.offsets[s_idx as usize] as usize;
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for k in 0..r0 {
                *acc.entry(((t_off + k) as u32, (s_off + k) as u32)).or_insert(0) += sign;
            }
        }

        // face n+1: drop the last object
        {
            let key = (*x0, chain[..n].to_vec());
            let s_idx = domain.index[&key];
            let s_off = domain.offsets[s_idx as usize] as usize;
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            for k in 0..r0 {
                *acc.entry(((t_off + k) as u32, (s_off + k) as u32)).or_insert(0) += sign;
            }
        }

        for ((row, col), v) in acc {
            let order = target.orders[row as usize] as i64;
            let v = v.rem_euclid(order);
            if v != 0 {
                cols[col as usize].push((row, v));
            }
        }
    }
    for col in &mut cols {
        col.sort_unstable_by_key(|&(r, _)| r);
    }
    SparseDiff {
        cols,
        n_rows: target.rank(),
    }
}

fn scale_into(col: &SparseVec, target_orders: &[u64], l: i64) -> SparseVec {
    col.iter()
        .filter_map(|&(row, v)| {
            let scale = l / target_orders[row as usize] as i64;
            let x = (v as i128 * scale as i128).rem_euclid(l as i128) as i64;
            (x != 0).then_some((row, x))
        })
        .collect()
}

/// The constant k(p): the lowest degree at which the interval vanishing
/// results are asserted.
pub fn k_of_p(p: u64) -> usize {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Result of a higher-limit computation.
#[derive(Clone, Debug)]
pub struct LimitResult {
    pub degree: usize,
    pub order: FactoredOrder,
    /// invariant factors, when the structure path ran (always for order 1)
    pub group: Option<FinAb>,
    pub ms: u64,
}

impl LimitResult {
    pub fn is_zero(&self) -> bool {
        self.order.is_one()
    }

    pub fn describe(&self) -> String {
        match &self.group {
            Some(g) => g.describe(),
            None => format!("order {}", self.order),
        }
    }
}

/// lim^k of the functor via the bar complex.  The order is always computed
/// exactly; invariant factors and witnesses are included when rank(C^k) is
/// within the structure bound.  At k = 0 the direct stabilization oracle is
/// run unconditionally and must agree.
pub fn higher_limit(functor: &Arc<AbFunctor>, k: usize, opts: BarOptions) -> Result<LimitResult> {
    let opts = BarOptions {
        n_max: opts.n_max.max(k + 1),
        ..opts
    };
    let start = std::time::Instant::now();
    let bar = BarComplex::build(functor.clone(), opts)?;
    limit_from_bar(&bar, k, start)
}

pub fn limit_from_bar(bar: &BarComplex, k: usize, start: std::time::Instant) -> Result<LimitResult> {
    let order = bar.cohomology_order(k);
    let group = if bar.degrees[k].rank() <= bar.structure_bound {
        Some(bar.cohomology_structure(k)?.group)
    } else if order.is_one() {
        Some(FinAb::trivial())
    } else {
        None
    };
    if k == 0 {
        let oracle = bar.h0_oracle()?;
        if oracle.group.order_factored() != order {
            return Err(Error::violation(format!(
                "H^0 oracle mismatch: stabilization gives {}, bar complex gives {}",
                oracle.group.order_factored(),
                order
            )));
        }
        if let Some(g) = &group {
            if g != &oracle.group {
                return Err(Error::violation(
                    "H^0 oracle mismatch: invariant factors differ".to_string(),
                ));
            }
        }
    }
    Ok(LimitResult {
        degree: k,
        order,
        group,
        ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::corpus;
    use crate::finab::FinAbHom;
    use crate::fusion::FusionSystem;
    use crate::orbit::{atomic_functor, orbit_category, p_orbit_category, z_functor};

    fn one_object_one_morphism_z2() -> Arc<AbFunctor> {
        let cat = FiniteCategory::new(1, vec![0], vec![0], vec![0], vec![0], |_, _| 0).unwrap();
        let z2 = FinAb::from_orders(&[2]);
        Arc::new(
            AbFunctor::new(Arc::new(cat), vec![z2.clone()], vec![FinAbHom::identity(&z2)]).unwrap(),
        )
    }

    #[test]
    fn trivial_category_complex_shape() {
        let f = one_object_one_morphism_z2();
        let bar = BarComplex::build(f, BarOptions::default()).unwrap();
        assert_eq!(bar.degrees[0].rank(), 1);
        for n in 1..=4 {
            assert_eq!(bar.degrees[n].rank(), 0, "normalized complex kills identity strings");
        }
    }

    #[test]
    fn zero_functor_gives_zero_complex() {
        let cat = FiniteCategory::new(1, vec![0], vec![0], vec![0], vec![0], |_, _| 0).unwrap();
        let f = Arc::new(
            AbFunctor::new(
                Arc::new(cat),
                vec![FinAb::trivial()],
                vec![FinAbHom::identity(&FinAb::trivial())],
            )
            .unwrap(),
        );
        let bar = BarComplex::build(f, BarOptions::default()).unwrap();
        for n in 0..=4 {
            assert_eq!(bar.degrees[n].rank(), 0);
        }
    }

    #[test]
    fn limits_of_z_functor_on_c2() {
        let c2 = corpus::cyclic(2).unwrap();
        let f = FusionSystem::new(&c2, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let r = f.make_interval(&[f.sylow_index()]).unwrap();
        let zf = Arc::new(z_functor(&f, &oc, &r).unwrap().functor);
        let l0 = higher_limit(&zf, 0, BarOptions::default()).unwrap();
        assert_eq!(l0.group.as_ref().unwrap().factors(), &[2]);
        for k in 1..=2 {
            let lk = higher_limit(&zf, k, BarOptions::default()).unwrap();
            assert!(lk.is_zero(), "k={k}");
        }
    }

    #[test]
    fn limits_of_z_functor_on_s3_at_3() {
        // one object C3 with Aut_O = C2 acting by inversion on Z/3:
        // lim^0 = fixed points = 0, higher limits vanish
        let s3 = corpus::named("S3").unwrap();
        let f = FusionSystem::new(&s3, 3, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let centric: Vec<usize> = (0..f.subgroups().len())
            .filter(|&i| f.status_flags(i).f_centric)
            .collect();
        let r = f.make_interval(&centric).unwrap();
        let zf = Arc::new(z_functor(&f, &oc, &r).unwrap().functor);
        for k in 0..=2 {
            let lk = higher_limit(&zf, k, BarOptions::default()).unwrap();
            assert!(lk.is_zero(), "k={k}: {}", lk.describe());
        }
    }

    #[test]
    fn lemma_fixpt_instance_s4() {
        // Γ = Σ4, Y = V4, Q = I(Y,S): lim^0 = Z(Σ4) = 1, lim^k = 0 for k=1,2
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let q = f.overgroup_interval(v4);
        let zf = Arc::new(z_functor(&f, &oc, &q).unwrap().functor);
        for k in 0..=2 {
            let lk = higher_limit(&zf, k, BarOptions::default()).unwrap();
            assert!(lk.is_zero(), "k={k}: {}", lk.describe());
        }
    }

    #[test]
    fn lim1_of_v4_interval_in_s4_is_z2() {
        // the complement interval R = {V4}: lim^1(Z^R) = Z/2 (matching the
        // Γ* short exact sequence with Γ* = D8)
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let oc = orbit_category(&f).unwrap();
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let r = f.make_interval(&[v4]).unwrap();
        let zf = Arc::new(z_functor(&f, &oc, &r).unwrap().functor);
        let l0 = higher_limit(&zf, 0, BarOptions::default()).unwrap();
        assert!(l0.is_zero());
        let l1 = higher_limit(&zf, 1, BarOptions::default()).unwrap();
        assert_eq!(l1.group.as_ref().unwrap().factors(), &[2]);
    }

    #[test]
    fn lambda_examples_via_p_orbit() {
        // Λ*(C3; Z/2) at p=2: Λ^0 = M^G = Z/2, higher vanish (p ∤ |G|)
        let c3 = corpus::cyclic(3).unwrap();
        let po = p_orbit_category(&c3, 2, 64).unwrap();
        let m = FinAb::from_orders(&[2]);
        let f = Arc::new(
            atomic_functor(po.wc.cat.clone(), 0, m.clone(), |_| FinAbHom::identity(&m)).unwrap(),
        );
        let l0 = higher_limit(&f, 0, BarOptions::default()).unwrap();
        assert_eq!(l0.group.as_ref().unwrap().factors(), &[2]);
        for k in 1..=2 {
            assert!(higher_limit(&f, k, BarOptions::default()).unwrap().is_zero());
        }

        // Λ*(C2; M) = 0 at p=2 for any M (O_p(G) ≠ 1)
        let c2 = corpus::cyclic(2).unwrap();
        let po = p_orbit_category(&c2, 2, 64).unwrap();
        let trivial_obj = (0..po.wc.cat.n_objects)
            .find(|&o| po.wc.objects[o].order() == 1)
            .unwrap();
        let m = FinAb::from_orders(&[4]);
        let f = Arc::new(
            atomic_functor(po.wc.cat.clone(), trivial_obj, m.clone(), |_| {
                FinAbHom::identity(&m)
            })
            .unwrap(),
        );
        for k in 0..=2 {
            assert!(higher_limit(&f, k, BarOptions::default()).unwrap().is_zero(), "k={k}");
        }

        // Λ*(Σ3; Z/2 trivial) = 0 at p=2 (p divides the action kernel)
        let s3 = corpus::named("S3").unwrap();
        let po = p_orbit_category(&s3, 2, 64).unwrap();
        let trivial_obj = (0..po.wc.cat.n_objects)
            .find(|&o| po.wc.objects[o].order() == 1)
            .unwrap();
        let m = FinAb::from_orders(&[2]);
        let f = Arc::new(
            atomic_functor(po.wc.cat.clone(), trivial_obj, m.clone(), |_| {
                FinAbHom::identity(&m)
            })
            .unwrap(),
        );
        for k in 0..=2 {
            assert!(higher_limit(&f, k, BarOptions::default()).unwrap().is_zero(), "k={k}");
        }
    }

    #[test]
    fn lambda_of_gl22_natural_module_is_z2_in_degree_1() {
        // Λ^1(Σ3; F2^2) with the natural GL(2,2)-action: the nonvanishing
        // example that pins the obstruction machinery
        let s4 = corpus::named("S4").unwrap();
        let f = FusionSystem::new(&s4, 2, 64).unwrap();
        let v4 = f.index_of_subgroup(&f.group().o_p(2)).unwrap();
        let data = crate::orbit::out_f_action_on_center(&f, f.class_of(v4)).unwrap();
        let po = p_orbit_category(&data.group, 2, 64).unwrap();
        let trivial_obj = (0..po.wc.cat.n_objects)
            .find(|&o| po.wc.objects[o].order() == 1)
            .unwrap();
        let m = data.module.clone();
        let act = data.action.clone();
        let g = data.group.clone();
        let wit = po.wc.witness.clone();
        let functor = Arc::new(
            atomic_functor(po.wc.cat.clone(), trivial_obj, m, move |mor| {
                act[g.inv(wit[mor as usize]) as usize].clone()
            })
            .unwrap(),
        );
        let l0 = higher_limit(&functor, 0, BarOptions::default()).unwrap();
        assert!(l0.is_zero());
        let l1 = higher_limit(&functor, 1, BarOptions::default()).unwrap();
        assert_eq!(l1.group.as_ref().unwrap().factors(), &[2], "Λ^1(GL2(2); nat)");
        let l2 = higher_limit(&functor, 2, BarOptions::default()).unwrap();
        assert!(l2.is_zero(), "Λ^2 = {}", l2.describe());
    }
}
