use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMat {
            rows,
            cols,
            data: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form U * A * V = D with U, V unimodular.
///
/// `diag` holds the nonnegative diagonal entries d_1 | d_2 | ... including
/// any zeros.  When `with_transforms` is set, `u`, `u_inv` and `v` are
/// returned (V^{-1} is not tracked; nothing here needs it).
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Option<IntMat>,
    pub u_inv: Option<IntMat>,
    pub v: Option<IntMat>,
}

pub fn smith(mut a: IntMat, with_transforms: bool) -> Snf {
    let rows = a.rows;
    let cols = a.cols;
    let mut u = with_transforms.then(|| IntMat::identity(rows));
    let mut u_inv = with_transforms.then(|| IntMat::identity(rows));
    let mut v = with_transforms.then(|| IntMat::identity(cols));

    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let (Some(u), Some(ui)) = (u.as_mut(), u_inv.as_mut()) {
            u.swap_rows(t, pi);
            ui.swap_cols(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        let mut clean = true;
        for i in (t + 1)..rows {
            if !a[(i, t)].is_zero() {
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row(i, t, &q);
                if let (Some(u), Some(ui)) = (u.as_mut(), u_inv.as_mut()) {
                    u.add_row(i, t, &q);
                    ui.add_col(t, i, &(-&q));
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..cols {
            if !a[(t, j)].is_zero() {
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col(j, t, &q);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // repeat with a smaller pivot
        }

        // divisibility: a[t][t] must divide everything below-right
        let mut fixed = true;
        'scan: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    if let (Some(u), Some(ui)) = (u.as_mut(), u_inv.as_mut()) {
                        u.add_row(t, i, &one);
                        ui.add_col(i, t, &(-&one));
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let (Some(u), Some(ui)) = (u.as_mut(), u_inv.as_mut()) {
                u.negate_row(t);
                // (E)^{-1} = E for a row negation; applied on the right of u_inv
                for i in 0..rows {
                    let neg = -ui[(i, t)].clone();
                    ui[(i, t)] = neg;
                }
            }
        }
        t += 1;
    }

    let diag: Vec<BigInt> = (0..n).map(|i| a[(i, i)].clone()).collect();
    Snf {
        diag,
        u,
        u_inv,
        v,
    }
}

/// Invariant factors > 1 of the cokernel Z^rows / column-span(A).
/// Free rank is rows minus the number of nonzero diagonal entries; callers
/// working with finite groups assert it is zero.
pub fn coker_invariants(a: IntMat) -> (Vec<u64>, usize) {
    let rows = a.rows;
    let s = smith(a, false);
    let nonzero = s.diag.iter().filter(|d| !d.is_zero()).count();
    let free_rank = rows - nonzero;
    let mut invs = Vec::new();
    for d in &s.diag {
        if !d.is_zero() && !d.is_one() {
            let (_, digits) = d.to_u64_digits();
            assert!(digits.len() <= 1, "invariant factor exceeds u64");
            invs.push(digits[0]);
        }
    }
    (invs, free_rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_u64(s: &Snf) -> Vec<u64> {
        s.diag
            .iter()
            .map(|d| {
                let (_, digits) = d.to_u64_digits();
                if digits.is_empty() {
                    0
                } else {
                    digits[0]
                }
            })
            .collect()
    }

    #[test]
    fn known_smith_form() {
        let a = IntMat::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, 4, 16]);
        let s = smith(a, false);
        assert_eq!(diag_u64(&s), vec![2, 2, 156]);
    }

    #[test]
    fn transforms_satisfy_uav_eq_d() {
        let a = IntMat::from_i64(3, 4, &[-6, 111, -36, 6, 5, -672, 210, 74, 0, -255, 81, 24]);
        let s = smith(a.clone(), true);
        let u = s.u.clone().unwrap();
        let v = s.v.clone().unwrap();
        let prod = u.mul(&a).mul(&v);
        for i in 0..3 {
            for j in 0..4 {
                if i == j {
                    assert_eq!(prod[(i, j)], s.diag[i]);
                } else {
                    assert!(prod[(i, j)].is_zero());
                }
            }
        }
        // u * u_inv = I
        let ui = s.u_inv.unwrap();
        let id = u.mul(&ui);
        assert_eq!(id, IntMat::identity(3));
    }

    #[test]
    fn idempotent_on_diagonal_input() {
        let a = IntMat::from_i64(2, 2, &[2, 0, 0, 6]);
        let s1 = smith(a, false);
        let d1 = diag_u64(&s1);
        let b = IntMat::from_i64(2, 2, &[d1[0] as i64, 0, 0, d1[1] as i64]);
        let s2 = smith(b, false);
        assert_eq!(d1, diag_u64(&s2));
    }

    #[test]
    fn coker_of_multiplication_by_2_on_z2() {
        // Z^2 / <(2,0),(0,2)> = (Z/2)^2
        let a = IntMat::from_i64(2, 2, &[2, 0, 0, 2]);
        let (invs, free) = coker_invariants(a);
        assert_eq!(invs, vec![2, 2]);
        assert_eq!(free, 0);
    }
}
