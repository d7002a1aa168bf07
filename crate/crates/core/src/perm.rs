use crate::error::{Error, Result};
use std::fmt;

/// A permutation of `{0, ..., degree-1}` stored as its image array.
///
/// Ordering is lexicographic on the image array, which fixes the canonical
/// element order used everywhere for determinism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u8).collect(),
        }
    }

    /// Build from an image array; must be a bijection.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n > 250 {
            return Err(Error::domain("permutation degree exceeds 250"));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::Parse("image array is not a bijection".into()));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u8) -> u8 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u8 == x)
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// Conjugate `self * x * self^{-1}`.
    pub fn conjugate(&self, x: &Perm) -> Perm {
        self.compose(x).compose(&self.inverse())
    }

    pub fn order(&self) -> u64 {
        // lcm of cycle lengths
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord: u64 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    /// Cycle type as a sorted list of cycle lengths > 1.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            if len > 1 {
                cycles.push(len);
            }
        }
        cycles.sort_unstable();
        cycles
    }

    pub fn is_even(&self) -> bool {
        self.cycle_type().iter().map(|l| l - 1).sum::<usize>() % 2 == 0
    }

    /// Parse disjoint-cycle notation like `(1 2 3)(4 5)` with 1-based points.
    /// `()` or an empty string denotes the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Perm::from_images(images);
        }
        let mut chars = s.chars().peekable();
        let mut touched = vec![false; degree];
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            if c != '(' {
                return Err(Error::Parse(format!("expected '(' in cycle notation, got '{c}'")));
            }
            chars.next();
            let mut cycle: Vec<u8> = Vec::new();
            let mut num = String::new();
            loop {
                match chars.next() {
                    Some(d) if d.is_ascii_digit() => num.push(d),
                    Some(d) if d.is_whitespace() || d == ',' => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree)?);
                            num.clear();
                        }
                    }
                    Some(')') => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree)?);
                        }
                        break;
                    }
                    Some(d) => {
                        return Err(Error::Parse(format!("unexpected '{d}' in cycle notation")))
                    }
                    None => return Err(Error::Parse("unterminated cycle".into())),
                }
            }
            for &p in &cycle {
                if touched[p as usize] {
                    return Err(Error::Parse(format!(
                        "point {} appears in two cycles",
                        p + 1
                    )));
                }
                touched[p as usize] = true;
            }
            for i in 0..cycle.len() {
                let from = cycle[i] as usize;
                let to = cycle[(i + 1) % cycle.len()];
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }

    /// Disjoint-cycle string with 1-based points; identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(p + 1).to_string());
                first = false;
                p = self.images[p] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn parse_point(s: &str, degree: usize) -> Result<u8> {
    let v: usize = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad point '{s}'")))?;
    if v == 0 || v > degree {
        return Err(Error::Parse(format!(
            "point {v} out of range 1..={degree}"
        )));
    }
    Ok((v - 1) as u8)
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let p = Perm::parse_cycles("(1 2 3)(4 5)", 6).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(2), 0);
        assert_eq!(p.apply(3), 4);
        assert_eq!(p.apply(5), 5);
        assert_eq!(p.cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(2 3)", 3).unwrap();
        // (1 2) ∘ (2 3): 2 -> 3 -> 3, so point 2 goes to 3 under b then fixed by a
        let c = a.compose(&b);
        assert_eq!(c.apply(1), 2);
        assert_eq!(c.apply(0), 1);
        assert_eq!(c.cycle_string(), "(1 2 3)");
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let s = Perm::parse_cycles("(1 2 3)", 3).unwrap();
        let x = Perm::parse_cycles("(1 2)", 3).unwrap();
        // s (1 2) s^{-1} = (s1 s2) = (2 3)
        assert_eq!(s.conjugate(&x).cycle_string(), "(2 3)");
    }

    #[test]
    fn rejects_malformed_cycles() {
        assert!(Perm::parse_cycles("(1 2", 4).is_err());
        assert!(Perm::parse_cycles("(1 9)", 4).is_err());
        assert!(Perm::parse_cycles("(1 2)(2 3)", 4).is_err());
    }
}
