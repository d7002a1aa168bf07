use crate::error::{Error, Result};
use crate::group::{FiniteGroup, CORPUS_ORDER_BOUND, DEFAULT_ORDER_BOUND};
use crate::perm::Perm;
use std::path::Path;

/// Named corpus ids, in the order `corpus list` prints them.
pub const NAMED_IDS: &[&str] = &[
    "S3", "S4", "S5", "S6", "S7", "S8", "A4", "A5", "A6", "A7", "A8", "D8", "Q8", "SD16",
    "C2xC2", "GL(3,2)", "SL(2,3)", "GL(2,3)",
];

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::domain("symmetric group needs n >= 2"));
    }
    let mut long = String::from("(");
    for i in 1..=n {
        if i > 1 {
            long.push(' ');
        }
        long.push_str(&i.to_string());
    }
    long.push(')');
    let gens = vec![
        Perm::parse_cycles("(1 2)", n)?,
        Perm::parse_cycles(&long, n)?,
    ];
    FiniteGroup::from_generators(n, &gens, CORPUS_ORDER_BOUND)
}

pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::domain("alternating group needs n >= 3"));
    }
    let three = Perm::parse_cycles("(1 2 3)", n)?;
    let second = if n % 2 == 1 {
        // (1 2 ... n)
        let mut s = String::from("(");
        for i in 1..=n {
            if i > 1 {
                s.push(' ');
            }
            s.push_str(&i.to_string());
        }
        s.push(')');
        Perm::parse_cycles(&s, n)?
    } else {
        // (2 3 ... n)
        let mut s = String::from("(");
        for i in 2..=n {
            if i > 2 {
                s.push(' ');
            }
            s.push_str(&i.to_string());
        }
        s.push(')');
        Perm::parse_cycles(&s, n)?
    };
    FiniteGroup::from_generators(n, &[three, second], CORPUS_ORDER_BOUND)
}

pub fn dihedral_8() -> Result<FiniteGroup> {
    let gens = vec![
        Perm::parse_cycles("(1 2 3 4)", 4)?,
        Perm::parse_cycles("(1 3)", 4)?,
    ];
    FiniteGroup::from_generators(4, &gens, CORPUS_ORDER_BOUND)
}

pub fn quaternion_8() -> Result<FiniteGroup> {
    // Left regular representation on the eight unit quaternions
    // ordered 1, i, -1, -i, j, k, -j, -k.
    let gens = vec![
        Perm::parse_cycles("(1 2 3 4)(5 6 7 8)", 8)?,
        Perm::parse_cycles("(1 5 3 7)(2 8 4 6)", 8)?,
    ];
    FiniteGroup::from_generators(8, &gens, CORPUS_ORDER_BOUND)
}

pub fn semidihedral_16() -> Result<FiniteGroup> {
    // r: x -> x+1 and s: x -> 3x on Z/8, satisfying s r s^{-1} = r^3.
    let gens = vec![
        Perm::parse_cycles("(1 2 3 4 5 6 7 8)", 8)?,
        Perm::parse_cycles("(2 4)(3 7)(6 8)", 8)?,
    ];
    FiniteGroup::from_generators(8, &gens, CORPUS_ORDER_BOUND)
}

pub fn klein_four() -> Result<FiniteGroup> {
    let gens = vec![
        Perm::parse_cycles("(1 2)", 4)?,
        Perm::parse_cycles("(3 4)", 4)?,
    ];
    FiniteGroup::from_generators(4, &gens, CORPUS_ORDER_BOUND)
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    let mut s = String::from("(");
    for i in 1..=n {
        if i > 1 {
            s.push(' ');
        }
        s.push_str(&i.to_string());
    }
    s.push(')');
    FiniteGroup::from_generators(n, &[Perm::parse_cycles(&s, n)?], CORPUS_ORDER_BOUND)
}

/// A matrix subgroup of GL(n, p) realized as a permutation group on the
/// nonzero vectors of F_p^n.  Vectors are indexed in lexicographic order of
/// their coordinate tuples.  Returns the group together with, for each group
/// element, the matrix rows recovered from the permutation action (entry
/// `mats[g][i][j]` is the i-th coordinate of the image of basis vector e_j).
pub struct LinearGroup {
    pub group: FiniteGroup,
    pub n: usize,
    pub p: u64,
}

impl LinearGroup {
    /// Matrix of a group element acting on F_p^n (columns are images of the
    /// basis vectors).
    pub fn matrix_of(&self, elem: u32) -> Vec<Vec<i64>> {
        let perm = self.group.element(elem);
        let mut cols = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut e = vec![0u64; self.n];
            e[j] = 1;
            let idx = vec_index(&e, self.p, self.n);
            let img = perm.apply(idx as u8) as usize;
            cols.push(index_vec(img, self.p, self.n));
        }
        // transpose into row-major matrix
        (0..self.n)
            .map(|i| (0..self.n).map(|j| cols[j][i] as i64).collect())
            .collect()
    }
}

fn vec_index(v: &[u64], p: u64, n: usize) -> usize {
    // lexicographic index among nonzero vectors (zero vector excluded)
    let mut raw = 0usize;
    for i in 0..n {
        raw = raw * p as usize + v[i] as usize;
    }
    raw - 1
}

fn index_vec(idx: usize, p: u64, n: usize) -> Vec<u64> {
    let mut raw = idx + 1;
    let mut v = vec![0u64; n];
    for i in (0..n).rev() {
        v[i] = (raw % p as usize) as u64;
        raw /= p as usize;
    }
    v
}

/// Build the permutation action of a list of invertible matrices over F_p on
/// the nonzero vectors of F_p^n.
pub fn linear_group(n: usize, p: u64, mats: &[Vec<Vec<i64>>], bound: usize) -> Result<LinearGroup> {
    let npoints = (p as usize).pow(n as u32) - 1;
    if npoints > 250 {
        return Err(Error::domain("vector count exceeds permutation degree limit"));
    }
    let mut perms = Vec::new();
    for m in mats {
        let mut images = vec![0u8; npoints];
        for idx in 0..npoints {
            let v = index_vec(idx, p, n);
            let mut w = vec![0u64; n];
            for i in 0..n {
                let mut acc: i64 = 0;
                for j in 0..n {
                    acc += m[i][j].rem_euclid(p as i64) * v[j] as i64;
                }
                w[i] = (acc.rem_euclid(p as i64)) as u64;
            }
            if w.iter().all(|&x| x == 0) {
                return Err(Error::domain("matrix is singular"));
            }
            images[idx] = vec_index(&w, p, n) as u8;
        }
        perms.push(Perm::from_images(images)?);
    }
    let group = FiniteGroup::from_generators(npoints, &perms, bound)?;
    Ok(LinearGroup { group, n, p })
}

pub fn gl(n: usize, p: u64) -> Result<LinearGroup> {
    // Generators: a transvection and a signed basis cycle; standard pair
    // generating GL(n, p).
    let mut transvection = identity_matrix(n);
    transvection[0][if n > 1 { 1 } else { 0 }] = 1;
    let mut cycle = vec![vec![0i64; n]; n];
    for i in 1..n {
        cycle[i][i - 1] = 1;
    }
    cycle[0][n - 1] = -1;
    if n == 1 {
        cycle[0][0] = primitive_root(p) as i64;
    }
    let mut scalar = identity_matrix(n);
    scalar[0][0] = primitive_root(p) as i64;
    let lg = linear_group(n, p, &[transvection, cycle, scalar], CORPUS_ORDER_BOUND)?;
    let expected = gl_order(n, p);
    if lg.group.order() != expected {
        return Err(Error::domain(format!(
            "GL({n},{p}) generator set produced order {} != {expected}",
            lg.group.order()
        )));
    }
    Ok(lg)
}

pub fn sl(n: usize, p: u64) -> Result<LinearGroup> {
    // Elementary transvections generate SL(n, p).
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = identity_matrix(n);
                m[i][j] = 1;
                gens.push(m);
            }
        }
    }
    let lg = linear_group(n, p, &gens, CORPUS_ORDER_BOUND)?;
    let expected = gl_order(n, p) / (p - 1);
    if lg.group.order() != expected {
        return Err(Error::domain(format!(
            "SL({n},{p}) generator set produced order {} != {expected}",
            lg.group.order()
        )));
    }
    Ok(lg)
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn gl_order(n: usize, p: u64) -> u64 {
    let q = p;
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

fn primitive_root(p: u64) -> u64 {
    (2..p)
        .find(|&g| {
            let mut x = 1u64;
            let mut ord = 0;
            loop {
                x = x * g % p;
                ord += 1;
                if x == 1 {
                    break;
                }
            }
            ord == p - 1
        })
        .unwrap_or(1)
}

/// Load a named corpus group.
pub fn named(id: &str) -> Result<FiniteGroup> {
    match id {
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "S5" => symmetric(5),
        "S6" => symmetric(6),
        "S7" => symmetric(7),
        "S8" => symmetric(8),
        "A4" => alternating(4),
        "A5" => alternating(5),
        "A6" => alternating(6),
        "A7" => alternating(7),
        "A8" => alternating(8),
        "D8" => dihedral_8(),
        "Q8" => quaternion_8(),
        "SD16" => semidihedral_16(),
        "C2xC2" => klein_four(),
        "GL(3,2)" => Ok(gl(3, 2)?.group),
        "SL(2,3)" => Ok(sl(2, 3)?.group),
        "GL(2,3)" => Ok(gl(2, 3)?.group),
        _ => Err(Error::Parse(format!("unknown named group '{id}'"))),
    }
}

/// Parse the group file format: line 1 `degree N`, then one generator per
/// line in cycle notation with 1-based points.
pub fn parse_group_file(text: &str, bound: usize) -> Result<FiniteGroup> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty group file".into()))?;
    let mut parts = header.split_whitespace();
    match (parts.next(), parts.next()) {
        (Some("degree"), Some(n)) => {
            let degree: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree '{n}'")))?;
            let mut gens = Vec::new();
            for line in lines {
                gens.push(Perm::parse_cycles(line.trim(), degree)?);
            }
            FiniteGroup::from_generators(degree, &gens, bound)
        }
        _ => Err(Error::Parse("group file must start with 'degree N'".into())),
    }
}

pub fn write_group_file(g: &FiniteGroup) -> String {
    let mut out = format!("degree {}\n", g.degree());
    for &i in g.generator_ids() {
        out.push_str(&g.element(i).cycle_string());
        out.push('\n');
    }
    out
}

/// Resolve a `--group` argument: a named corpus id or a path to a group file.
pub fn load_group(spec: &str) -> Result<FiniteGroup> {
    if NAMED_IDS.contains(&spec) {
        return named(spec);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return parse_group_file(&text, DEFAULT_ORDER_BOUND);
    }
    Err(Error::Parse(format!(
        "'{spec}' is neither a named corpus id nor a readable file"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_orders() {
        let cases = [
            ("S3", 6),
            ("S4", 24),
            ("S5", 120),
            ("S6", 720),
            ("A4", 12),
            ("A5", 60),
            ("A6", 360),
            ("D8", 8),
            ("Q8", 8),
            ("SD16", 16),
            ("C2xC2", 4),
            ("GL(3,2)", 168),
            ("SL(2,3)", 24),
            ("GL(2,3)", 48),
        ];
        for (id, order) in cases {
            assert_eq!(named(id).unwrap().order(), order, "{id}");
        }
    }

    #[test]
    fn big_symmetric_orders() {
        assert_eq!(named("S7").unwrap().order(), 5040);
        assert_eq!(named("S8").unwrap().order(), 40320);
        assert_eq!(named("A7").unwrap().order(), 2520);
        assert_eq!(named("A8").unwrap().order(), 20160);
    }

    #[test]
    fn q8_has_unique_involution() {
        let q8 = named("Q8").unwrap();
        let invs = (0..8u32).filter(|&x| q8.element_order(x) == 2).count();
        assert_eq!(invs, 1);
    }

    #[test]
    fn sd16_structure() {
        let g = named("SD16").unwrap();
        assert_eq!(g.order(), 16);
        // semidihedral: one element of order 8, center of order 2
        assert!( (0..16u32).any(|x| g.element_order(x) == 8));
        assert_eq!(g.center().order(), 2);
        assert!(!g.is_abelian());
    }

    #[test]
    fn group_file_round_trip() {
        let g = named("S4").unwrap();
        let text = write_group_file(&g);
        let h = parse_group_file(&text, 100).unwrap();
        assert_eq!(g.id(), h.id());
    }

    #[test]
    fn group_file_rejects_garbage() {
        assert!(parse_group_file("degree 4\n(1 2", 100).is_err());
        assert!(parse_group_file("(1 2)", 100).is_err());
    }

    #[test]
    fn linear_group_matrix_round_trip() {
        let lg = gl(2, 3).unwrap();
        assert_eq!(lg.group.order(), 48);
        for g in 0..lg.group.order() as u32 {
            let m = lg.matrix_of(g);
            // determinant nonzero mod 3
            let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).rem_euclid(3);
            assert_ne!(det, 0);
        }
    }
}
