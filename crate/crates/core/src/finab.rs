use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::modl::{self, FactoredOrder, Howell, SparseVec};
use crate::snf::{smith, IntMat};
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_r with
/// every d_i ≥ 2.  The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct FinAb {
    factors: Vec<u64>,
}

impl FinAb {
    pub fn trivial() -> Self {
        FinAb { factors: vec![] }
    }

    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::domain("invariant factors must form a divisibility chain"));
            }
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::domain("invariant factors must be at least 2"));
        }
        Ok(FinAb { factors })
    }

    /// Canonical form of a product of cyclic groups of the given orders.
    pub fn from_orders(orders: &[u64]) -> Self {
        let mut per_prime: HashMap<u64, Vec<u64>> = HashMap::new();
        for &o in orders {
            let f = FactoredOrder::of(o);
            for (&p, &e) in &f.0 {
                per_prime.entry(p).or_default().push(e);
            }
        }
        let mut depth = 0;
        for exps in per_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            depth = depth.max(exps.len());
        }
        let mut factors = Vec::new();
        for k in 0..depth {
            let mut d: u64 = 1;
            for (&p, exps) in &per_prime {
                if let Some(&e) = exps.get(k) {
                    d *= p.pow(e as u32);
                }
            }
            if d > 1 {
                factors.push(d);
            }
        }
        factors.reverse();
        FinAb { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }
    pub fn order_factored(&self) -> FactoredOrder {
        let mut f = FactoredOrder::one();
        for &d in &self.factors {
            f.mul_assign(&FactoredOrder::of(d));
        }
        f
    }
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.factors) {
            *x = x.rem_euclid(d as i64);
        }
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().map(|&x| -x).collect();
        self.reduce(&mut out);
        out
    }

    /// All elements; guarded for oracle-scale use.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.order() <= 1 << 16, "element enumeration guard");
        let mut out = vec![self.zero()];
        for (i, &d) in self.factors.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for v in prev {
                for k in 0..d as i64 {
                    let mut w = v.clone();
                    w[i] = k;
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        if self.is_trivial() {
            "0".to_string()
        } else {
            self.factors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }
}

/// Homomorphism between finite abelian groups: column j is the image of the
/// j-th canonical generator of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbHom {
    pub src: FinAb,
    pub dst: FinAb,
    /// dst.rank rows × src.rank columns
    pub mat: Vec<Vec<i64>>,
}

impl FinAbHom {
    pub fn new(src: FinAb, dst: FinAb, mut mat: Vec<Vec<i64>>) -> Result<Self> {
        if mat.len() != dst.rank() || mat.iter().any(|r| r.len() != src.rank()) {
            return Err(Error::domain("homomorphism matrix has wrong shape"));
        }
        for (i, row) in mat.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x = x.rem_euclid(dst.factors[i] as i64);
            }
        }
        let h = FinAbHom { src, dst, mat };
        if !h.is_well_defined() {
            return Err(Error::domain(
                "matrix does not respect generator orders (not a homomorphism)",
            ));
        }
        Ok(h)
    }

    pub fn is_well_defined(&self) -> bool {
        for j in 0..self.src.rank() {
            let dj = self.src.factors[j] as i64;
            for i in 0..self.dst.rank() {
                if (self.mat[i][j] as i128 * dj as i128)
                    .rem_euclid(self.dst.factors[i] as i128)
                    != 0
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity(g: &FinAb) -> Self {
        let mut mat = vec![vec![0i64; g.rank()]; g.rank()];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = 1;
        }
        FinAbHom {
            src: g.clone(),
            dst: g.clone(),
            mat,
        }
    }

    pub fn zero(src: &FinAb, dst: &FinAb) -> Self {
        FinAbHom {
            src: src.clone(),
            dst: dst.clone(),
            mat: vec![vec![0i64; src.rank()]; dst.rank()],
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dst.rank()];
        for (i, row) in self.mat.iter().enumerate() {
            let mut acc: i128 = 0;
            for (j, &m) in row.iter().enumerate() {
                acc += m as i128 * v[j] as i128;
            }
            out[i] = acc.rem_euclid(self.dst.factors[i] as i128) as i64;
        }
        out
    }

    /// self ∘ other
    pub fn compose(&self, other: &FinAbHom) -> FinAbHom {
        debug_assert_eq!(other.dst, self.src);
        let mut mat = vec![vec![0i64; other.src.rank()]; self.dst.rank()];
        for j in 0..other.src.rank() {
            let col: Vec<i64> = other.mat.iter().map(|r| r[j]).collect();
            let img = self.apply(&col);
            for (i, &x) in img.iter().enumerate() {
                mat[i][j] = x;
            }
        }
        FinAbHom {
            src: other.src.clone(),
            dst: self.dst.clone(),
            mat,
        }
    }

    pub fn add(&self, other: &FinAbHom) -> FinAbHom {
        debug_assert_eq!(self.src, other.src);
        debug_assert_eq!(self.dst, other.dst);
        let mat = self
            .mat
            .iter()
            .zip(&other.mat)
            .enumerate()
            .map(|(i, (a, b))| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| (x + y).rem_euclid(self.dst.factors[i] as i64))
                    .collect()
            })
            .collect();
        FinAbHom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            mat,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn image_order(&self) -> FactoredOrder {
        let l = working_exponent(&[self.src.exponent(), self.dst.exponent()]);
        let mut h = Howell::new(l, None);
        for j in 0..self.src.rank() {
            h.insert(scaled_column(&self.dst, &self.mat, j, l), None);
        }
        h.span_order()
    }

    pub fn kernel_order(&self) -> FactoredOrder {
        let mut ord = self.src.order_factored();
        ord.div_assign(&self.image_order());
        ord
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_order().is_one()
    }

    pub fn is_automorphism(&self) -> bool {
        self.src == self.dst && self.is_injective()
    }
}

/// Least common exponent used as the working modulus.
pub fn working_exponent(exps: &[u64]) -> i64 {
    let mut l: u64 = 1;
    for &e in exps {
        if e > 1 {
            l = num_integer::lcm(l, e);
        }
    }
    l.max(2) as i64
}

/// Column j of `mat` viewed inside (Z/l)^rows via the scaling embedding
/// x_i ↦ (l / d_i)·x_i of ⊕ Z/d_i.
fn scaled_column(dst: &FinAb, mat: &[Vec<i64>], j: usize, l: i64) -> SparseVec {
    let mut v: SparseVec = Vec::new();
    for (i, row) in mat.iter().enumerate() {
        let scale = l / dst.factors[i] as i64;
        let x = (row[j] as i128 * scale as i128).rem_euclid(l as i128) as i64;
        if x != 0 {
            v.push((i as u32, x));
        }
    }
    v
}

pub(crate) fn scaled_vec(orders: &[u64], v: &[i64], l: i64) -> SparseVec {
    let mut out: SparseVec = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        let scale = l / orders[i] as i64;
        let y = (x as i128 * scale as i128).rem_euclid(l as i128) as i64;
        if y != 0 {
            out.push((i as u32, y));
        }
    }
    out
}

/// Generators (as source vectors) of ker(h), including the trivial relations
/// d_j·e_j of the source.
pub fn kernel_generators(h: &FinAbHom) -> Vec<Vec<i64>> {
    let l = working_exponent(&[h.src.exponent(), h.dst.exponent()]);
    let r = h.src.rank();
    let mut how = Howell::new(l, Some(r));
    for j in 0..r {
        let mut track = vec![0i64; r];
        track[j] = 1;
        how.insert(scaled_column(&h.dst, &h.mat, j, l), Some(track));
    }
    let mut gens: Vec<Vec<i64>> = how.kernel().to_vec();
    for (j, &d) in h.src.factors().iter().enumerate() {
        let mut v = vec![0i64; r];
        v[j] = d as i64;
        gens.push(v);
    }
    for g in &mut gens {
        h.src.reduce(g);
    }
    gens.retain(|g| g.iter().any(|&x| x != 0));
    gens
}

/// A subgroup of an ambient FinAb presented with an explicit inclusion.
#[derive(Clone, Debug)]
pub struct SubFinAb {
    pub group: FinAb,
    /// inclusion: group -> ambient
    pub inclusion: FinAbHom,
}

/// Structure of the subgroup of `ambient` generated by the given vectors.
pub fn span_structure(ambient: &FinAb, gens: &[Vec<i64>]) -> SubFinAb {
    if gens.is_empty() {
        return SubFinAb {
            group: FinAb::trivial(),
            inclusion: FinAbHom::zero(&FinAb::trivial(), ambient),
        };
    }
    let l = working_exponent(&[ambient.exponent()]);
    let n = gens.len();
    // syzygies of the generator list
    let mut how = Howell::new(l, Some(n));
    for (j, g) in gens.iter().enumerate() {
        let mut track = vec![0i64; n];
        track[j] = 1;
        how.insert(scaled_vec(ambient.factors(), g, l), Some(track));
    }
    let syz: Vec<Vec<i64>> = how.kernel().to_vec();
    let m = modl::snf_mod_dense(&syz, n, l);
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for (idx, &f) in m.factors.iter().enumerate() {
        if f > 1 {
            factors.push(f as u64);
            kept.push(idx);
        }
    }
    let group = FinAb::from_invariant_factors(factors).expect("snf factors form a chain");
    // generator k of the canonical form pulls back through u_inv to a
    // combination of the original generators
    let mut mat = vec![vec![0i64; group.rank()]; ambient.rank()];
    for (k, &idx) in kept.iter().enumerate() {
        let mut vec_amb = vec![0i64; ambient.rank()];
        for (j, g) in gens.iter().enumerate() {
            let c = m.u_inv[j][idx];
            for (a, &x) in vec_amb.iter_mut().zip(g.iter()) {
                *a += c * x;
            }
        }
        ambient.reduce(&mut vec_amb);
        for (i, &x) in vec_amb.iter().enumerate() {
            mat[i][k] = x;
        }
    }
    let inclusion = FinAbHom::new(group.clone(), ambient.clone(), mat)
        .expect("span structure inclusion is well defined");
    SubFinAb { group, inclusion }
}

/// ker(g)/im(f) presented with witnesses, for consecutive maps f: A -> B,
/// g: B -> C with g∘f = 0.  The ambient coordinates may carry arbitrary
/// cyclic orders (bar-complex cochain groups are products in string order).
pub struct Subquotient {
    pub group: FinAb,
    /// columns: representative vectors in B for each canonical generator
    pub witnesses: Vec<Vec<i64>>,
    ambient_orders: Vec<u64>,
    kernel_gens: Vec<Vec<i64>>,
    howell: Howell,
    u: Vec<Vec<i64>>,
    kept: Vec<usize>,
    l: i64,
}

impl Subquotient {
    /// Class coordinates of a vector in B; `None` when the vector is not in
    /// ker(g) (i.e. not in the span of the kernel generators).
    pub fn class_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        let y = self
            .howell
            .solve(scaled_vec(&self.ambient_orders, v, self.l), self.l)?;
        // coords = (U y) at kept indices, reduced mod the factors
        let mut out = Vec::with_capacity(self.kept.len());
        for (k, &idx) in self.kept.iter().enumerate() {
            let mut acc: i128 = 0;
            for (j, &yy) in y.iter().enumerate() {
                acc += self.u[idx][j] as i128 * yy as i128;
            }
            out.push(acc.rem_euclid(self.group.factors()[k] as i128) as i64);
        }
        Some(out)
    }

    pub fn kernel_gens(&self) -> &[Vec<i64>] {
        &self.kernel_gens
    }
}

fn reduce_mod_orders(orders: &[u64], v: &mut [i64]) {
    for (x, &d) in v.iter_mut().zip(orders) {
        *x = x.rem_euclid(d as i64);
    }
}

/// Subquotient span(kernel_gens)/span(relations) inside a product of cyclic
/// groups with the given coordinate orders.
pub fn subquotient_raw(
    ambient_orders: &[u64],
    kernel_gens: Vec<Vec<i64>>,
    relations: &[Vec<i64>],
) -> Result<Subquotient> {
    let l = working_exponent(ambient_orders);
    let n = kernel_gens.len();
    if n == 0 {
        return Ok(Subquotient {
            group: FinAb::trivial(),
            witnesses: vec![],
            ambient_orders: ambient_orders.to_vec(),
            kernel_gens,
            howell: Howell::new(l, Some(0)),
            u: vec![],
            kept: vec![],
            l,
        });
    }
    let mut how = Howell::new(l, Some(n));
    for (j, g) in kernel_gens.iter().enumerate() {
        let mut track = vec![0i64; n];
        track[j] = 1;
        how.insert(scaled_vec(ambient_orders, g, l), Some(track));
    }
    // presentation relations: coordinates of each relation + syzygies
    let mut pres: Vec<Vec<i64>> = Vec::new();
    for r in relations {
        let y = how
            .solve(scaled_vec(ambient_orders, r, l), l)
            .ok_or_else(|| Error::domain("relation vector is not inside the kernel span (g∘f ≠ 0?)"))?;
        pres.push(y);
    }
    pres.extend(how.kernel().iter().cloned());
    let m = modl::snf_mod_dense(&pres, n, l);
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for (idx, &f) in m.factors.iter().enumerate() {
        if f > 1 {
            factors.push(f as u64);
            kept.push(idx);
        }
    }
    let group = FinAb::from_invariant_factors(factors).expect("snf factors form a chain");
    let mut witnesses = Vec::with_capacity(kept.len());
    for &idx in &kept {
        let mut w = vec![0i64; ambient_orders.len()];
        for (j, g) in kernel_gens.iter().enumerate() {
            let c = m.u_inv[j][idx];
            for (a, &x) in w.iter_mut().zip(g.iter()) {
                *a += c * x;
            }
        }
        reduce_mod_orders(ambient_orders, &mut w);
        witnesses.push(w);
    }
    Ok(Subquotient {
        group,
        witnesses,
        ambient_orders: ambient_orders.to_vec(),
        kernel_gens,
        howell: how,
        u: m.u,
        kept,
        l,
    })
}

pub fn subquotient(
    ambient: &FinAb,
    kernel_gens: Vec<Vec<i64>>,
    relations: &[Vec<i64>],
) -> Result<Subquotient> {
    subquotient_raw(ambient.factors(), kernel_gens, relations)
}

/// The spec-level operation: ker(g)/im(f) for f: A -> B, g: B -> C.
pub fn subquotient_cohomology(f: &FinAbHom, g: &FinAbHom) -> Result<Subquotient> {
    if f.dst != g.src {
        return Err(Error::domain("maps are not composable"));
    }
    if !g.compose(f).is_zero() {
        return Err(Error::NotAComplex);
    }
    let kgens = kernel_generators(g);
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for j in 0..f.src.rank() {
        let col: Vec<i64> = f.mat.iter().map(|r| r[j]).collect();
        rels.push(col);
    }
    for (j, &d) in g.src.factors().iter().enumerate() {
        let mut v = vec![0i64; g.src.rank()];
        v[j] = d as i64;
        rels.push(v);
    }
    subquotient(&g.src, kgens, &rels)
}

/// Fixed points of a set of automorphisms: the subgroup {m : σm = m for all σ}.
pub fn fixed_points(m: &FinAb, auts: &[FinAbHom]) -> Result<SubFinAb> {
    for a in auts {
        if !(a.src == *m && a.dst == *m) {
            return Err(Error::domain("fixed points need endomorphisms of M"));
        }
        if !a.is_automorphism() {
            return Err(Error::domain("action generator is not an automorphism"));
        }
    }
    if m.is_trivial() || auts.is_empty() {
        return Ok(SubFinAb {
            group: m.clone(),
            inclusion: FinAbHom::identity(m),
        });
    }
    // kernel of the stacked (σ - id) conditions; stacked coordinates keep
    // the per-row orders of M and need no canonical form
    let l = working_exponent(&[m.exponent()]);
    let r = m.rank();
    let mut how = Howell::new(l, Some(r));
    for j in 0..r {
        let mut col: SparseVec = Vec::new();
        for (k, a) in auts.iter().enumerate() {
            for i in 0..r {
                let mut x = a.mat[i][j];
                if i == j {
                    x -= 1;
                }
                let x = x.rem_euclid(m.factors()[i] as i64);
                let scale = l / m.factors()[i] as i64;
                let y = (x as i128 * scale as i128).rem_euclid(l as i128) as i64;
                if y != 0 {
                    col.push(((k * r + i) as u32, y));
                }
            }
        }
        let mut track = vec![0i64; r];
        track[j] = 1;
        how.insert(col, Some(track));
    }
    let mut gens: Vec<Vec<i64>> = how.kernel().to_vec();
    for (j, &d) in m.factors().iter().enumerate() {
        let mut v = vec![0i64; r];
        v[j] = d as i64;
        gens.push(v);
    }
    for g in &mut gens {
        m.reduce(g);
    }
    gens.retain(|g| g.iter().any(|&x| x != 0));
    Ok(span_structure(m, &gens))
}

/// Brute-force oracle for fixed points (test use; |M| small).
pub fn fixed_points_bruteforce(m: &FinAb, auts: &[FinAbHom]) -> Vec<Vec<i64>> {
    m.elements()
        .into_iter()
        .filter(|v| auts.iter().all(|a| a.apply(v) == *v))
        .collect()
}

/// Image of the norm map m ↦ Σ_g g·m for a full list of acting automorphisms
/// (one per group element, including the identity).
pub fn norm_image(m: &FinAb, action_elements: &[FinAbHom]) -> Result<SubFinAb> {
    if m.is_trivial() {
        return Ok(SubFinAb {
            group: m.clone(),
            inclusion: FinAbHom::identity(m),
        });
    }
    let mut norm = FinAbHom::zero(m, m);
    for a in action_elements {
        if !(a.src == *m && a.dst == *m) {
            return Err(Error::domain("norm needs endomorphisms of M"));
        }
        norm = norm.add(a);
    }
    let gens: Vec<Vec<i64>> = (0..m.rank())
        .map(|j| norm.mat.iter().map(|r| r[j]).collect())
        .collect();
    Ok(span_structure(m, &gens))
}

/// Conversion of an abelian permutation subgroup to canonical form, with the
/// element-to-vector isomorphism in both directions.
pub struct AbelianIso {
    pub finab: FinAb,
    to_vec: HashMap<u32, Vec<i64>>,
    pub gens: Vec<u32>,
    gen_orders: Vec<u64>,
    u_inv: IntMat,
    kept: Vec<usize>,
    sub: Subgroup,
}

impl AbelianIso {
    pub fn to_vec(&self, elem: u32) -> &Vec<i64> {
        &self.to_vec[&elem]
    }

    pub fn from_vec(&self, v: &[i64]) -> u32 {
        let g = self.sub.parent();
        // exponent vector = U^{-1} · (v padded at kept indices)
        let k = self.gens.len();
        let mut exps = vec![0i64; k];
        for (j, exp) in exps.iter_mut().enumerate() {
            let mut acc: i128 = 0;
            for (pos, &idx) in self.kept.iter().enumerate() {
                let c = self.u_inv[(j, idx)].to_i128().expect("small transform entry");
                acc += c * v[pos] as i128;
            }
            *exp = acc.rem_euclid(self.gen_orders[j] as i128) as i64;
        }
        let mut out = g.identity();
        for (j, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                out = g.mul(out, self.gens[j]);
            }
        }
        out
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }
}

/// Invariant-factor decomposition of an abelian subgroup with explicit
/// bijective maps both ways.
pub fn as_finab(a: &Subgroup) -> Result<AbelianIso> {
    if !a.is_abelian() {
        return Err(Error::domain("as_finab requires an abelian subgroup"));
    }
    let g = a.parent();
    let gens: Vec<u32> = a.gens().to_vec();
    let k = gens.len();
    if k == 0 {
        // trivial group
        let mut to_vec = HashMap::new();
        to_vec.insert(g.identity(), vec![]);
        return Ok(AbelianIso {
            finab: FinAb::trivial(),
            to_vec,
            gens,
            gen_orders: vec![],
            u_inv: IntMat::identity(0),
            kept: vec![],
            sub: a.clone(),
        });
    }
    let gen_orders: Vec<u64> = gens.iter().map(|&x| g.element_order(x)).collect();
    // BFS word vectors over the generators
    let mut word: HashMap<u32, Vec<i64>> = HashMap::new();
    word.insert(g.identity(), vec![0i64; k]);
    let mut queue = vec![g.identity()];
    while let Some(cur) = queue.pop() {
        let wcur = word[&cur].clone();
        for (j, &gen) in gens.iter().enumerate() {
            let next = g.mul(cur, gen);
            if !word.contains_key(&next) {
                let mut w = wcur.clone();
                w[j] += 1;
                word.insert(next, w);
                queue.push(next);
            }
        }
    }
    debug_assert_eq!(word.len() as u64, a.order());
    // relation lattice: Cayley-edge relations w(a) + e_j - w(a·g_j)
    let mut rel_cols: Vec<Vec<i64>> = Vec::new();
    for &x in a.elems() {
        let wx = &word[&x];
        for (j, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let wy = &word[&y];
            let mut r: Vec<i64> = wx.iter().zip(wy).map(|(&p, &q)| p - q).collect();
            r[j] += 1;
            if r.iter().any(|&v| v != 0) {
                rel_cols.push(r);
            }
        }
    }
    for (j, &o) in gen_orders.iter().enumerate() {
        let mut r = vec![0i64; k];
        r[j] = o as i64;
        rel_cols.push(r);
    }
    // SNF of the k × m relation matrix
    let m = rel_cols.len();
    let mut entries = Vec::with_capacity(k * m);
    for i in 0..k {
        for col in &rel_cols {
            entries.push(col[i]);
        }
    }
    let a_mat = IntMat::from_i64(k, m, &entries);
    let s = smith(a_mat, true);
    let u = s.u.unwrap();
    let u_inv = s.u_inv.unwrap();
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    for (idx, d) in s.diag.iter().enumerate() {
        let d = d.to_u64().expect("finite group: nonzero diagonal");
        assert!(d != 0, "abelian subgroup must present a finite group");
        if d > 1 {
            factors.push(d);
            kept.push(idx);
        }
    }
    // any index beyond the diagonal would be free rank; impossible here
    assert!(s.diag.len() == k);
    let finab = FinAb::from_invariant_factors(factors)?;
    // element -> vector: (U·word) at kept indices
    let mut to_vec = HashMap::new();
    for (&elem, w) in &word {
        let mut v = Vec::with_capacity(kept.len());
        for (pos, &idx) in kept.iter().enumerate() {
            let mut acc: i128 = 0;
            for (j, &wj) in w.iter().enumerate() {
                acc += u[(idx, j)].to_i128().expect("small transform entry") * wj as i128;
            }
            v.push(acc.rem_euclid(finab.factors()[pos] as i128) as i64);
        }
        to_vec.insert(elem, v);
    }
    Ok(AbelianIso {
        finab,
        to_vec,
        gens,
        gen_orders,
        u_inv,
        kept,
        sub: a.clone(),
    })
}

/// Matrix form of a group homomorphism between abelian subgroups, given by
/// images of source elements.
pub fn induced_hom(
    src: &AbelianIso,
    dst: &AbelianIso,
    image_of: impl Fn(u32) -> u32,
) -> Result<FinAbHom> {
    // verify homomorphism on all pairs
    let g = src.sub.parent();
    let h = dst.sub.parent();
    for &x in src.sub.elems() {
        for &y in src.sub.elems() {
            let lhs = image_of(g.mul(x, y));
            let rhs = h.mul(image_of(x), image_of(y));
            if lhs != rhs {
                return Err(Error::domain("map is not a homomorphism"));
            }
        }
    }
    let mut mat = vec![vec![0i64; src.finab.rank()]; dst.finab.rank()];
    for j in 0..src.finab.rank() {
        let mut e = src.finab.zero();
        e[j] = 1;
        let src_elem = src.from_vec(&e);
        let img = image_of(src_elem);
        let v = dst.to_vec(img);
        for (i, &x) in v.iter().enumerate() {
            mat[i][j] = x;
        }
    }
    FinAbHom::new(src.finab.clone(), dst.finab.clone(), mat)
}

/// A cochain complex of finite abelian groups with validated d∘d = 0.
pub struct IntegerComplex {
    pub groups: Vec<FinAb>,
    pub differentials: Vec<FinAbHom>,
}

impl IntegerComplex {
    pub fn new(groups: Vec<FinAb>, differentials: Vec<FinAbHom>) -> Result<Self> {
        if differentials.len() + 1 != groups.len() && !(groups.is_empty() && differentials.is_empty())
        {
            return Err(Error::domain("complex shape mismatch"));
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.src != groups[n] || d.dst != groups[n + 1] {
                return Err(Error::domain("differential endpoints mismatch"));
            }
        }
        for w in differentials.windows(2) {
            if !w[1].compose(&w[0]).is_zero() {
                return Err(Error::NotAComplex);
            }
        }
        Ok(IntegerComplex {
            groups,
            differentials,
        })
    }

    /// H^n = ker(d^n)/im(d^{n-1}), with the ends padded by zero maps.
    pub fn cohomology(&self, n: usize) -> Result<Subquotient> {
        let trivial = FinAb::trivial();
        let d_out = if n < self.differentials.len() {
            self.differentials[n].clone()
        } else {
            FinAbHom::zero(&self.groups[n], &trivial)
        };
        let d_in = if n > 0 {
            self.differentials[n - 1].clone()
        } else {
            FinAbHom::zero(&trivial, &self.groups[n])
        };
        subquotient_cohomology(&d_in, &d_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::FiniteGroup;
    use crate::perm::Perm;

    fn c_n(n: usize) -> FiniteGroup {
        corpus::cyclic(n).unwrap()
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(FinAb::from_orders(&[2, 2]).factors(), &[2, 2]);
        assert_eq!(FinAb::from_orders(&[2, 3]).factors(), &[6]);
        assert_eq!(FinAb::from_orders(&[4, 2, 3]).factors(), &[2, 12]);
        assert!(FinAb::from_orders(&[]).is_trivial());
    }

    #[test]
    fn as_finab_examples() {
        let v4 = corpus::klein_four().unwrap();
        let iso = as_finab(&v4.full_subgroup()).unwrap();
        assert_eq!(iso.finab.factors(), &[2, 2]);

        let c6 = c_n(6);
        let iso = as_finab(&c6.full_subgroup()).unwrap();
        assert_eq!(iso.finab.factors(), &[6]);

        let triv = c6.trivial_subgroup();
        let iso = as_finab(&triv).unwrap();
        assert!(iso.finab.is_trivial());
    }

    #[test]
    fn as_finab_round_trips_every_element() {
        for g in [corpus::klein_four().unwrap(), c_n(12), c_n(8)] {
            let iso = as_finab(&g.full_subgroup()).unwrap();
            for x in 0..g.order() as u32 {
                let v = iso.to_vec(x).clone();
                assert_eq!(iso.from_vec(&v), x);
            }
            // isomorphism: to_vec(xy) = to_vec(x) + to_vec(y)
            for x in 0..g.order() as u32 {
                for y in 0..g.order() as u32 {
                    let sum = iso.finab.add(iso.to_vec(x), iso.to_vec(y));
                    assert_eq!(sum, *iso.to_vec(g.mul(x, y)));
                }
            }
        }
    }

    #[test]
    fn induced_hom_examples() {
        // identity on V4
        let v4 = corpus::klein_four().unwrap();
        let iso = as_finab(&v4.full_subgroup()).unwrap();
        let id = induced_hom(&iso, &iso, |x| x).unwrap();
        assert_eq!(id, FinAbHom::identity(&iso.finab));

        // squaring on C4 is multiplication by 2
        let c4 = c_n(4);
        let iso4 = as_finab(&c4.full_subgroup()).unwrap();
        let sq = induced_hom(&iso4, &iso4, |x| c4.mul(x, x)).unwrap();
        assert_eq!(sq.mat, vec![vec![2]]);

        // inclusion C2 -> C4 sends the generator to twice a generator
        let c2_sub = c4.subgroup_from_gens(&[{
            let g = c4
                .index_of(&Perm::parse_cycles("(1 3)(2 4)", 4).unwrap())
                .unwrap();
            g
        }]);
        let iso2 = as_finab(&c2_sub).unwrap();
        let incl = induced_hom(&iso2, &iso4, |x| x).unwrap();
        assert_eq!(incl.mat, vec![vec![2]]);

        // non-homomorphism is rejected: fix the generator, crush the rest
        let gen4 = c4
            .index_of(&Perm::parse_cycles("(1 2 3 4)", 4).unwrap())
            .unwrap();
        let bad = induced_hom(&iso4, &iso4, |x| if x == gen4 { x } else { c4.identity() });
        assert!(bad.is_err());
    }

    #[test]
    fn subquotient_cohomology_examples() {
        let z2 = FinAb::from_orders(&[2]);
        let z4 = FinAb::from_orders(&[4]);

        // 0 -> Z/2 -> 0 at the middle: H = Z/2
        let f = FinAbHom::zero(&FinAb::trivial(), &z2);
        let g = FinAbHom::zero(&z2, &FinAb::trivial());
        let h = subquotient_cohomology(&f, &g).unwrap();
        assert_eq!(h.group.factors(), &[2]);

        // Z/4 --x2--> Z/4 --x2--> Z/4: middle cohomology is trivial
        let x2 = FinAbHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let h = subquotient_cohomology(&x2, &x2).unwrap();
        assert!(h.group.is_trivial());

        // zero maps through Z/2 + Z/4
        let m = FinAb::from_orders(&[2, 4]);
        let f = FinAbHom::zero(&FinAb::trivial(), &m);
        let g = FinAbHom::zero(&m, &FinAb::trivial());
        let h = subquotient_cohomology(&f, &g).unwrap();
        assert_eq!(h.group.factors(), m.factors());

        // non-complex rejected
        let id = FinAbHom::identity(&z4);
        assert!(subquotient_cohomology(&id, &id).is_err());
    }

    #[test]
    fn subquotient_witnesses_are_valid_representatives() {
        let z4 = FinAb::from_orders(&[4]);
        let x2 = FinAbHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let zero_out = FinAbHom::zero(&z4, &FinAb::trivial());
        // ker(0)/im(x2) = Z/4 / 2Z/4 = Z/2
        let h = subquotient_cohomology(&x2, &zero_out).unwrap();
        assert_eq!(h.group.factors(), &[2]);
        assert_eq!(h.witnesses.len(), 1);
        // witness must represent the nontrivial class
        let cls = h.class_of(&h.witnesses[0]).unwrap();
        assert_eq!(cls, vec![1]);
        let zero_cls = h.class_of(&[2]).unwrap();
        assert_eq!(zero_cls, vec![0]);
    }

    #[test]
    fn fixed_points_examples() {
        // trivial action: everything fixed
        let m = FinAb::from_orders(&[2, 4]);
        let fp = fixed_points(&m, &[FinAbHom::identity(&m)]).unwrap();
        assert_eq!(fp.group.factors(), m.factors());

        // order-3 action on (Z/2)^2: only 0 fixed
        let v = FinAb::from_orders(&[2, 2]);
        let sigma = FinAbHom::new(v.clone(), v.clone(), vec![vec![0, 1], vec![1, 1]]).unwrap();
        let fp = fixed_points(&v, &[sigma]).unwrap();
        assert!(fp.group.is_trivial());

        // swap on (Z/3)^2: diagonal Z/3
        let w = FinAb::from_orders(&[3, 3]);
        let swap = FinAbHom::new(w.clone(), w.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let fp = fixed_points(&w, &[swap.clone()]).unwrap();
        assert_eq!(fp.group.factors(), &[3]);
        // oracle agreement
        let brute = fixed_points_bruteforce(&w, &[swap]);
        assert_eq!(brute.len() as u64, fp.group.order());
    }

    #[test]
    fn norm_image_examples() {
        // trivial group acting: norm = identity
        let m = FinAb::from_orders(&[6]);
        let ni = norm_image(&m, &[FinAbHom::identity(&m)]).unwrap();
        assert_eq!(ni.group.factors(), &[6]);

        // swap action of C2 on (Z/2)^2: image is the diagonal
        let v = FinAb::from_orders(&[2, 2]);
        let swap = FinAbHom::new(v.clone(), v.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let ni = norm_image(&v, &[FinAbHom::identity(&v), swap.clone()]).unwrap();
        assert_eq!(ni.group.factors(), &[2]);
        // norm image is contained in fixed points
        let fp = fixed_points(&v, &[swap]).unwrap();
        let fp_set: std::collections::HashSet<Vec<i64>> = fp
            .group
            .elements()
            .into_iter()
            .map(|e| fp.inclusion.apply(&e))
            .collect();
        for e in ni.group.elements() {
            assert!(fp_set.contains(&ni.inclusion.apply(&e)));
        }

        // C2 acting trivially on Z/2: norm = multiplication by 2 = 0
        let z2 = FinAb::from_orders(&[2]);
        let ni = norm_image(&z2, &[FinAbHom::identity(&z2), FinAbHom::identity(&z2)]).unwrap();
        assert!(ni.group.is_trivial());
    }

    #[test]
    fn rank_nullity_for_random_homs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let src = FinAb::from_orders(&[2, 4, 8][..rng.random_range(1..4)].to_vec().as_slice());
            let dst = FinAb::from_orders(&[2, 2, 4][..rng.random_range(1..4)].to_vec().as_slice());
            let mut mat = vec![vec![0i64; src.rank()]; dst.rank()];
            for (i, row) in mat.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    // force well-definedness: multiples of dst_i / gcd(dst_i, src_j)
                    let need = dst.factors()[i] / num_integer::gcd(dst.factors()[i], src.factors()[j]);
                    let max = dst.factors()[i] / need;
                    *x = (need * rng.random_range(0..max)) as i64;
                }
            }
            let h = FinAbHom::new(src.clone(), dst.clone(), mat).unwrap();
            let mut prod = h.kernel_order();
            prod.mul_assign(&h.image_order());
            assert_eq!(prod, src.order_factored());
        }
    }

    #[test]
    fn integer_complex_validates() {
        let z4 = FinAb::from_orders(&[4]);
        let x2 = FinAbHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        let c = IntegerComplex::new(vec![z4.clone(), z4.clone(), z4.clone()], vec![x2.clone(), x2]).unwrap();
        assert!(c.cohomology(1).unwrap().group.is_trivial());
        let id = FinAbHom::identity(&z4);
        assert!(IntegerComplex::new(vec![z4.clone(), z4.clone(), z4], vec![id.clone(), id]).is_err());
    }
}
