//! Exact linear algebra over Z/L for complexes of finite abelian groups.
//!
//! Every cochain group occurring here has exponent dividing some L, so all
//! lattices of interest contain L·Z^n and arithmetic may be carried out with
//! entries reduced mod L.  This keeps entries bounded (no coefficient
//! explosion) while remaining exact: row scalings by units mod L and
//! gcd-combination operations are invertible mod L and do not change the
//! isomorphism type of the quotients being computed.

use std::collections::BTreeMap;

/// Orders of L-smooth groups kept in factored form so products of thousands
/// of cyclic orders never overflow.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredOrder(pub BTreeMap<u64, u64>);

impl FactoredOrder {
    pub fn one() -> Self {
        FactoredOrder(BTreeMap::new())
    }

    pub fn of(n: u64) -> Self {
        let mut m = BTreeMap::new();
        let mut n = n;
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                *m.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            *m.entry(n).or_insert(0) += 1;
        }
        FactoredOrder(m)
    }

    pub fn mul_assign(&mut self, other: &FactoredOrder) {
        for (&p, &e) in &other.0 {
            *self.0.entry(p).or_insert(0) += e;
        }
    }

    /// Exact division; panics if not divisible (callers divide orders of
    /// subgroups into orders of groups).
    pub fn div_assign(&mut self, other: &FactoredOrder) {
        for (&p, &e) in &other.0 {
            let cur = self.0.get_mut(&p).expect("division of group orders is exact");
            assert!(*cur >= e, "division of group orders is exact");
            *cur -= e;
            if *cur == 0 {
                self.0.remove(&p);
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }
}

impl std::fmt::Display for FactoredOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse vector over Z/L: sorted (row, value) pairs, values in [1, L).
pub type SparseVec = Vec<(u32, i64)>;

pub fn sparse_normalize(v: &mut SparseVec, l: i64) {
    v.retain_mut(|(_, x)| {
        *x = x.rem_euclid(l);
        *x != 0
    });
}

/// w = a + c*b (mod l), all sorted sparse.
pub fn sparse_axpy(a: &SparseVec, c: i64, b: &SparseVec, l: i64) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (row, val) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            let r = a[i];
            i += 1;
            r
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let r = (b[j].0, mulmod(c, b[j].1, l));
            j += 1;
            r
        } else {
            let r = (a[i].0, (a[i].1 + mulmod(c, b[j].1, l)).rem_euclid(l));
            i += 1;
            j += 1;
            r
        };
        if val != 0 {
            out.push((row, val));
        }
    }
    out
}

fn mulmod(a: i64, b: i64, l: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(l as i128)) as i64
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// A unit w mod l with a*w ≡ gcd(a, l) (mod l).
fn associate_unit(a: i64, l: i64) -> i64 {
    let g = gcd(a, l);
    let a1 = a / g;
    let l1 = l / g;
    // inverse of a1 mod l1, lifted to a unit mod l
    let (_, inv, _) = ext_gcd(a1.rem_euclid(l1).max(1), l1);
    let mut w = if l1 == 1 { 1 } else { inv.rem_euclid(l1) };
    while gcd(w, l) != 1 {
        w += l1;
    }
    w.rem_euclid(l).max(1)
}

struct Pivot {
    vec: SparseVec,
    track: Option<Vec<i64>>,
}

/// Incremental Howell-form echelon of a column span in (Z/L)^rows.
///
/// Inserting the columns of a matrix yields: the span order (`span_order`),
/// membership tests with coefficients (`reduce`), and — when tracking is on —
/// generators of the kernel of the column map.
pub struct Howell {
    l: i64,
    track_dim: Option<usize>,
    pivots: BTreeMap<u32, Pivot>,
    kernel: Vec<Vec<i64>>,
}

impl Howell {
    pub fn new(l: i64, track_dim: Option<usize>) -> Self {
        assert!(l >= 2);
        Howell {
            l,
            track_dim,
            pivots: BTreeMap::new(),
            kernel: Vec::new(),
        }
    }

    /// Reduce entries after the lead against existing pivots (keeps pivot
    /// vectors short; the span and the track invariant are preserved).
    fn reduce_tail(&self, v: SparseVec, t: Option<Vec<i64>>) -> (SparseVec, Option<Vec<i64>>) {
        let mut v = v;
        let mut t = t;
        let mut pos = 1;
        while pos < v.len() {
            let (row, val) = v[pos];
            match self.pivots.get(&row) {
                Some(p) if val % p.vec[0].1 == 0 => {
                    let c = (-(val / p.vec[0].1)).rem_euclid(self.l);
                    v = sparse_axpy(&v, c, &p.vec, self.l);
                    t = combine_tracks(&t, c, &p.track, self.l);
                }
                _ => pos += 1,
            }
        }
        (v, t)
    }

    pub fn insert(&mut self, mut vec: SparseVec, track: Option<Vec<i64>>) {
        sparse_normalize(&mut vec, self.l);
        let mut queue: Vec<(SparseVec, Option<Vec<i64>>)> = vec![(vec, track)];
        while let Some((mut v, mut t)) = queue.pop() {
            loop {
                if v.is_empty() {
                    if let Some(tt) = t {
                        if tt.iter().any(|&x| x != 0) {
                            self.kernel.push(tt);
                        }
                    }
                    break;
                }
                let lead_row = v[0].0;
                let lead_val = v[0].1;
                match self.pivots.get(&lead_row) {
                    None => {
                        let g = gcd(lead_val, self.l);
                        let w = associate_unit(lead_val, self.l);
                        let nv = scale(&v, w, self.l);
                        let nt = t.map(|tt| scale_dense(&tt, w, self.l));
                        debug_assert_eq!(nv[0].1, g);
                        let (nv, nt) = self.reduce_tail(nv, nt);
                        let sat = self.l / g;
                        if sat > 1 && sat < self.l {
                            let sv = scale(&nv, sat, self.l);
                            let st = nt.as_ref().map(|tt| scale_dense(tt, sat, self.l));
                            queue.push((sv, st));
                        }
                        self.pivots.insert(lead_row, Pivot { vec: nv, track: nt });
                        break;
                    }
                    Some(p) => {
                        let g_p = p.vec[0].1;
                        if lead_val % g_p == 0 {
                            let c = (-(lead_val / g_p)).rem_euclid(self.l);
                            let new_v = sparse_axpy(&v, c, &p.vec, self.l);
                            let new_t = combine_tracks(&t, c, &p.track, self.l);
                            v = new_v;
                            t = new_t;
                        } else {
                            // gcd combination: replace the pivot, keep reducing
                            let (d, s, tt_c) = ext_gcd(g_p, lead_val);
                            let d = d.rem_euclid(self.l);
                            let pv = p.vec.clone();
                            let pt = p.track.clone();
                            let comb_v = sparse_axpy(
                                &scale(&pv, s.rem_euclid(self.l), self.l),
                                tt_c.rem_euclid(self.l),
                                &v,
                                self.l,
                            );
                            let comb_t = match (&pt, &t) {
                                (Some(a), Some(b)) => Some(add_dense(
                                    &scale_dense(a, s.rem_euclid(self.l), self.l),
                                    &scale_dense(b, tt_c.rem_euclid(self.l), self.l),
                                    self.l,
                                )),
                                _ => None,
                            };
                            // residual with lead row eliminated
                            let res_v = sparse_axpy(
                                &scale(&v, (g_p / d).rem_euclid(self.l), self.l),
                                (-(lead_val / d)).rem_euclid(self.l),
                                &pv,
                                self.l,
                            );
                            let res_t = match (&t, &pt) {
                                (Some(a), Some(b)) => Some(add_dense(
                                    &scale_dense(a, (g_p / d).rem_euclid(self.l), self.l),
                                    &scale_dense(b, (-(lead_val / d)).rem_euclid(self.l), self.l),
                                    self.l,
                                )),
                                _ => None,
                            };
                            debug_assert!(!comb_v.is_empty() && comb_v[0].0 == lead_row);
                            debug_assert_eq!(comb_v[0].1, d);
                            self.pivots
                                .insert(lead_row, Pivot { vec: comb_v.clone(), track: comb_t.clone() });
                            let sat = self.l / d;
                            if sat > 1 && sat < self.l {
                                let sv = scale(&comb_v, sat, self.l);
                                let st = comb_t.as_ref().map(|x| scale_dense(x, sat, self.l));
                                queue.push((sv, st));
                            }
                            v = res_v;
                            t = res_t;
                        }
                    }
                }
            }
        }
        let _ = self.track_dim;
    }

    /// Reduce a vector against the span; returns the residue and, if it is
    /// zero, optionally the coefficients (as combination of inserted columns,
    /// negated track) are not exposed — callers needing coefficients insert
    /// with tracking and read `kernel`.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        sparse_normalize(&mut v, self.l);
        loop {
            let Some(&(lead_row, lead_val)) = v.first() else {
                return v;
            };
            let Some(p) = self.pivots.get(&lead_row) else {
                return v;
            };
            let g_p = p.vec[0].1;
            if lead_val % g_p != 0 {
                return v;
            }
            let c = (-(lead_val / g_p)).rem_euclid(self.l);
            v = sparse_axpy(&v, c, &p.vec, self.l);
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Order of the span as a subgroup of (Z/L)^rows, in factored form.
    pub fn span_order(&self) -> FactoredOrder {
        let mut ord = FactoredOrder::one();
        for p in self.pivots.values() {
            let g = p.vec[0].1;
            ord.mul_assign(&FactoredOrder::of((self.l / g) as u64));
        }
        ord
    }

    pub fn kernel(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    pub fn num_pivots(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `v` against the span while tracking coefficients; on success
    /// returns coefficients y with Σ y_j·(inserted column j) ≡ v.  Requires
    /// tracking to have been enabled for every insertion.
    pub fn solve(&self, mut v: SparseVec, l: i64) -> Option<Vec<i64>> {
        debug_assert_eq!(l, self.l);
        sparse_normalize(&mut v, self.l);
        let dim = self.track_dim?;
        let mut acc = vec![0i64; dim];
        loop {
            let Some(&(lead_row, lead_val)) = v.first() else {
                // v_final = 0: v = -Σ c_i pivot_i = Σ (-acc)_j col_j
                return Some(acc.iter().map(|&x| (-x).rem_euclid(self.l)).collect());
            };
            let p = self.pivots.get(&lead_row)?;
            let g_p = p.vec[0].1;
            if lead_val % g_p != 0 {
                return None;
            }
            let c = (-(lead_val / g_p)).rem_euclid(self.l);
            v = sparse_axpy(&v, c, &p.vec, self.l);
            let pt = p.track.as_ref()?;
            for (a, &t) in acc.iter_mut().zip(pt.iter()) {
                *a = (*a + mulmod(c, t, self.l)).rem_euclid(self.l);
            }
        }
    }
}

fn scale(v: &SparseVec, c: i64, l: i64) -> SparseVec {
    let mut out: SparseVec = v
        .iter()
        .map(|&(r, x)| (r, mulmod(c, x, l)))
        .filter(|&(_, x)| x != 0)
        .collect();
    out.sort_unstable_by_key(|&(r, _)| r);
    out
}

fn scale_dense(v: &[i64], c: i64, l: i64) -> Vec<i64> {
    v.iter().map(|&x| mulmod(c, x, l)).collect()
}

fn add_dense(a: &[i64], b: &[i64], l: i64) -> Vec<i64> {
    a.iter().zip(b.iter()).map(|(&x, &y)| (x + y).rem_euclid(l)).collect()
}

fn combine_tracks(
    t: &Option<Vec<i64>>,
    c: i64,
    pt: &Option<Vec<i64>>,
    l: i64,
) -> Option<Vec<i64>> {
    match (t, pt) {
        (Some(a), Some(b)) => Some(add_dense(a, &scale_dense(b, c, l), l)),
        _ => None,
    }
}

/// Dense Smith form over Z/L with row transforms.
///
/// Computes the invariant factors of Z^rows / (column span + L·Z^rows) and
/// unit-mod-L row transforms `u`, `u_inv` with `u · A · (col ops) ≡ diag`.
pub struct ModSnf {
    pub l: i64,
    pub factors: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub u_inv: Vec<Vec<i64>>,
}

pub fn snf_mod_dense(mat: &[Vec<i64>], rows: usize, l: i64) -> ModSnf {
    let cols = mat.len();
    // column-major working copy
    let mut a: Vec<Vec<i64>> = mat
        .iter()
        .map(|col| col.iter().map(|&x| x.rem_euclid(l)).collect())
        .collect();
    for col in &mut a {
        col.resize(rows, 0);
    }
    let mut u: Vec<Vec<i64>> = (0..rows)
        .map(|i| (0..rows).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut u_inv = u.clone();

    let row_of = |a: &Vec<Vec<i64>>, i: usize, j: usize| a[j][i];
    let mut t = 0usize;
    let mut factors = Vec::new();
    while t < rows && t < cols {
        // pivot: minimal gcd(entry, l)
        let mut best: Option<(usize, usize, i64)> = None;
        for j in t..cols {
            for i in t..rows {
                let v = row_of(&a, i, j);
                if v != 0 {
                    let g = gcd(v, l);
                    if best.is_none_or(|(_, _, bg)| g < bg) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        // swap into place
        a.swap(t, pj);
        for col in a.iter_mut() {
            col.swap(t, pi);
        }
        u.swap(t, pi);
        u_inv.iter_mut().for_each(|r| r.swap(t, pi));

        // normalize pivot to its gcd with l
        let w = associate_unit(a[t][t], l);
        for col in a.iter_mut() {
            col[t] = mulmod(col[t], w, l);
        }
        for x in u[t].iter_mut() {
            *x = mulmod(*x, w, l);
        }
        let w_inv = associate_unit(w, l); // w unit: associate to gcd(w,l)=1 gives inverse
        for r in u_inv.iter_mut() {
            r[t] = mulmod(r[t], w_inv, l);
        }

        let mut dirty = false;
        // clear column t below pivot with row operations
        for i in (t + 1)..rows {
            let v = a[t][i];
            if v == 0 {
                continue;
            }
            let g_p = a[t][t];
            if v % g_p == 0 {
                let c = (-(v / g_p)).rem_euclid(l);
                for col in a.iter_mut() {
                    col[i] = (col[i] + mulmod(c, col[t], l)).rem_euclid(l);
                }
                row_op_add(&mut u, &mut u_inv, i, t, c, l);
            } else {
                // gcd-combine rows t and i
                let (d, s, tt_c) = ext_gcd(g_p, v);
                let (s, tt_c) = (s.rem_euclid(l), tt_c.rem_euclid(l));
                let (c1, c2) = ((g_p / d).rem_euclid(l), (-(v / d)).rem_euclid(l));
                for col in a.iter_mut() {
                    let rt = col[t];
                    let ri = col[i];
                    col[t] = (mulmod(s, rt, l) + mulmod(tt_c, ri, l)).rem_euclid(l);
                    col[i] = (mulmod(c1, ri, l) + mulmod(c2, rt, l)).rem_euclid(l);
                }
                row_op_2x2(&mut u, &mut u_inv, t, i, s, tt_c, c2, c1, l);
                dirty = true;
            }
        }
        // clear row t right of pivot with column operations (no tracking)
        for j in (t + 1)..cols {
            let v = a[j][t];
            if v == 0 {
                continue;
            }
            let g_p = a[t][t];
            if v % g_p == 0 {
                let c = (-(v / g_p)).rem_euclid(l);
                for i in 0..rows {
                    a[j][i] = (a[j][i] + mulmod(c, a[t][i], l)).rem_euclid(l);
                }
            } else {
                let (d, s, tt_c) = ext_gcd(g_p, v);
                let (s, tt_c) = (s.rem_euclid(l), tt_c.rem_euclid(l));
                let (c1, c2) = ((g_p / d).rem_euclid(l), (-(v / d)).rem_euclid(l));
                for i in 0..rows {
                    let ct = a[t][i];
                    let cj = a[j][i];
                    a[t][i] = (mulmod(s, ct, l) + mulmod(tt_c, cj, l)).rem_euclid(l);
                    a[j][i] = (mulmod(c1, cj, l) + mulmod(c2, ct, l)).rem_euclid(l);
                }
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // divisibility sweep
        let g_t = gcd(a[t][t], l);
        let mut fixed = true;
        'outer: for j in (t + 1)..cols {
            for i in (t + 1)..rows {
                if gcd(a[j][i], l) % g_t != 0 {
                    // add row i to row t
                    for col in a.iter_mut() {
                        col[t] = (col[t] + col[i]).rem_euclid(l);
                    }
                    row_op_add(&mut u, &mut u_inv, t, i, 1, l);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        factors.push(gcd(a[t][t], l));
        t += 1;
    }
    // rows never pivoted have full order l in the cokernel
    for _ in t..rows {
        factors.push(l);
    }
    ModSnf { l, factors, u, u_inv }
}

fn row_op_add(u: &mut [Vec<i64>], u_inv: &mut [Vec<i64>], i: usize, t: usize, c: i64, l: i64) {
    // row_i += c * row_t on U;  col_t -= c * col_i on U^{-1}
    let ut = u[t].clone();
    for (x, y) in u[i].iter_mut().zip(ut.iter()) {
        *x = (*x + mulmod(c, *y, l)).rem_euclid(l);
    }
    let neg = (-c).rem_euclid(l);
    for r in u_inv.iter_mut() {
        r[t] = (r[t] + mulmod(neg, r[i], l)).rem_euclid(l);
    }
}

#[allow(clippy::too_many_arguments)]
fn row_op_2x2(
    u: &mut [Vec<i64>],
    u_inv: &mut [Vec<i64>],
    t: usize,
    i: usize,
    s: i64,
    tt: i64,
    c2: i64,
    c1: i64,
    l: i64,
) {
    // [row_t; row_i] <- [[s, tt], [c2, c1]] [row_t; row_i]   (det = 1 mod l)
    let rt = u[t].clone();
    let ri = u[i].clone();
    for k in 0..rt.len() {
        u[t][k] = (mulmod(s, rt[k], l) + mulmod(tt, ri[k], l)).rem_euclid(l);
        u[i][k] = (mulmod(c2, rt[k], l) + mulmod(c1, ri[k], l)).rem_euclid(l);
    }
    // inverse of [[s, tt], [c2, c1]] with det 1 is [[c1, -tt], [-c2, s]]
    for r in u_inv.iter_mut() {
        let ct = r[t];
        let ci = r[i];
        r[t] = (mulmod(c1, ct, l) + mulmod((-c2).rem_euclid(l), ci, l)).rem_euclid(l);
        r[i] = (mulmod((-tt).rem_euclid(l), ct, l) + mulmod(s, ci, l)).rem_euclid(l);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::{coker_invariants, IntMat};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn brute_span_order(cols: &[Vec<i64>], rows: usize, l: i64) -> u64 {
        // enumerate the subgroup generated inside (Z/l)^rows
        let mut seen = std::collections::HashSet::new();
        seen.insert(vec![0i64; rows]);
        let mut frontier: Vec<Vec<i64>> = vec![vec![0i64; rows]];
        while let Some(v) = frontier.pop() {
            for c in cols {
                let w: Vec<i64> = v.iter().zip(c.iter()).map(|(&a, &b)| (a + b).rem_euclid(l)).collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        seen.len() as u64
    }

    #[test]
    fn span_order_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(7);
        for &l in &[2i64, 4, 8, 3, 9, 6] {
            for _ in 0..30 {
                let rows = rng.random_range(1..5usize);
                let ncols = rng.random_range(1..5usize);
                let cols: Vec<Vec<i64>> = (0..ncols)
                    .map(|_| (0..rows).map(|_| rng.random_range(0..l)).collect())
                    .collect();
                let mut h = Howell::new(l, None);
                for c in &cols {
                    let sv: SparseVec = c
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (i as u32, x))
                        .collect();
                    h.insert(sv, None);
                }
                let expect = brute_span_order(&cols, rows, l);
                assert_eq!(
                    h.span_order().to_u64().unwrap(),
                    expect,
                    "l={l} cols={cols:?}"
                );
            }
        }
    }

    #[test]
    fn membership_is_complete() {
        let mut rng = StdRng::seed_from_u64(11);
        for &l in &[4i64, 8, 9, 6] {
            for _ in 0..20 {
                let rows = rng.random_range(1..4usize);
                let ncols = rng.random_range(1..4usize);
                let cols: Vec<Vec<i64>> = (0..ncols)
                    .map(|_| (0..rows).map(|_| rng.random_range(0..l)).collect())
                    .collect();
                let mut h = Howell::new(l, None);
                for c in &cols {
                    let sv: SparseVec = c
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (i as u32, x))
                        .collect();
                    h.insert(sv, None);
                }
                // random combinations must reduce to zero
                for _ in 0..10 {
                    let mut v = vec![0i64; rows];
                    for c in &cols {
                        let k = rng.random_range(0..l);
                        for (x, &y) in v.iter_mut().zip(c.iter()) {
                            *x = (*x + k * y).rem_euclid(l);
                        }
                    }
                    let sv: SparseVec = v
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (i as u32, x))
                        .collect();
                    assert!(h.contains(sv), "combination not in span: l={l}");
                }
            }
        }
    }

    #[test]
    fn kernel_generators_are_correct_and_complete() {
        let mut rng = StdRng::seed_from_u64(13);
        for &l in &[2i64, 4, 3, 9, 8] {
            for _ in 0..20 {
                let rows = rng.random_range(1..4usize);
                let ncols = rng.random_range(1..4usize);
                let cols: Vec<Vec<i64>> = (0..ncols)
                    .map(|_| (0..rows).map(|_| rng.random_range(0..l)).collect())
                    .collect();
                let mut h = Howell::new(l, Some(ncols));
                for (j, c) in cols.iter().enumerate() {
                    let sv: SparseVec = c
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| (i as u32, x))
                        .collect();
                    let mut track = vec![0i64; ncols];
                    track[j] = 1;
                    h.insert(sv, Some(track));
                }
                // every kernel generator must actually be in the kernel
                let apply = |y: &[i64]| -> Vec<i64> {
                    let mut out = vec![0i64; rows];
                    for (j, c) in cols.iter().enumerate() {
                        for (o, &x) in out.iter_mut().zip(c.iter()) {
                            *o = (*o + y[j] * x).rem_euclid(l);
                        }
                    }
                    out
                };
                for k in h.kernel() {
                    assert!(apply(k).iter().all(|&x| x == 0));
                }
                // brute force kernel count: compare subgroup sizes
                let mut count = 0u64;
                let mut y = vec![0i64; ncols];
                loop {
                    if apply(&y).iter().all(|&x| x == 0) {
                        count += 1;
                    }
                    // increment odometer
                    let mut i = 0;
                    while i < ncols {
                        y[i] += 1;
                        if y[i] < l {
                            break;
                        }
                        y[i] = 0;
                        i += 1;
                    }
                    if i == ncols {
                        break;
                    }
                }
                // size of subgroup generated by kernel gens + l e_j inside (Z/l)^ncols
                let mut gens: Vec<Vec<i64>> = h.kernel().to_vec();
                let _ = &mut gens;
                let size = brute_span_order(&gens, ncols, l);
                assert_eq!(size, count, "kernel incomplete: l={l} cols={cols:?}");
            }
        }
    }

    #[test]
    fn snf_mod_matches_integer_snf() {
        let mut rng = StdRng::seed_from_u64(17);
        for &l in &[2i64, 4, 8, 9, 6, 12] {
            for _ in 0..25 {
                let rows = rng.random_range(1..5usize);
                let ncols = rng.random_range(1..5usize);
                let cols: Vec<Vec<i64>> = (0..ncols)
                    .map(|_| (0..rows).map(|_| rng.random_range(0..l)).collect())
                    .collect();
                let m = snf_mod_dense(&cols, rows, l);
                // reference: integer SNF of [A | l·I]
                let mut entries = Vec::new();
                for i in 0..rows {
                    for c in cols.iter() {
                        entries.push(c[i]);
                    }
                    for k in 0..rows {
                        entries.push(if k == i { l } else { 0 });
                    }
                }
                let a = IntMat::from_i64(rows, ncols + rows, &entries);
                let (invs, free) = coker_invariants(a);
                assert_eq!(free, 0);
                let got: Vec<i64> = m.factors.iter().copied().filter(|&f| f > 1).collect();
                let want: Vec<i64> = invs.iter().map(|&x| x as i64).collect();
                assert_eq!(got, want, "l={l} cols={cols:?}");
                // u * u_inv = identity mod l
                for i in 0..rows {
                    for j in 0..rows {
                        let mut acc = 0i64;
                        for k in 0..rows {
                            acc = (acc + m.u[i][k] * m.u_inv[k][j]).rem_euclid(l);
                        }
                        assert_eq!(acc, i64::from(i == j), "u*u_inv");
                    }
                }
            }
        }
    }
}
