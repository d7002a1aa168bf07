use crate::error::{Error, Result};
use crate::finab::{FinAb, FinAbHom};
use std::collections::HashMap;
use std::sync::Arc;

/// A finite category in skeletal form: objects are indices, morphisms are
/// tokens with source, target and a full composition table.  Category axioms
/// are validated exhaustively at build time.
pub struct FiniteCategory {
    pub n_objects: usize,
    pub src: Vec<u32>,
    pub dst: Vec<u32>,
    pub identity: Vec<u32>,
    /// diagnostic tag per morphism (witness element id where applicable)
    pub tag: Vec<u32>,
    by_pair: HashMap<(u32, u32), Vec<u32>>,
    compose: HashMap<(u32, u32), u32>,
}

impl FiniteCategory {
    /// `compose_fn(g, f)` must return g∘f for composable f: a→b, g: b→c.
    pub fn new(
        n_objects: usize,
        src: Vec<u32>,
        dst: Vec<u32>,
        identity: Vec<u32>,
        tag: Vec<u32>,
        compose_fn: impl Fn(u32, u32) -> u32,
    ) -> Result<Self> {
        let n_mor = src.len();
        let mut by_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for m in 0..n_mor as u32 {
            by_pair.entry((src[m as usize], dst[m as usize])).or_default().push(m);
        }
        let mut compose = HashMap::new();
        for f in 0..n_mor as u32 {
            for g in by_pair
                .iter()
                .filter(|((s, _), _)| *s == dst[f as usize])
                .flat_map(|(_, v)| v.iter().copied())
                .collect::<Vec<_>>()
            {
                let gf = compose_fn(g, f);
                if src[gf as usize] != src[f as usize] || dst[gf as usize] != dst[g as usize] {
                    return Err(Error::domain("composition endpoints mismatch"));
                }
                compose.insert((g, f), gf);
            }
        }
        let cat = FiniteCategory {
            n_objects,
            src,
            dst,
            identity,
            tag,
            by_pair,
            compose,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        // identity laws
        for (x, &e) in self.identity.iter().enumerate() {
            if self.src[e as usize] != x as u32 || self.dst[e as usize] != x as u32 {
                return Err(Error::domain("identity endpoints wrong"));
            }
        }
        for m in 0..self.src.len() as u32 {
            let e_src = self.identity[self.src[m as usize] as usize];
            let e_dst = self.identity[self.dst[m as usize] as usize];
            if self.compose_mor(m, e_src) != m || self.compose_mor(e_dst, m) != m {
                return Err(Error::domain("identity law fails"));
            }
        }
        // associativity on all composable triples
        let mut out_of: Vec<Vec<u32>> = vec![Vec::new(); self.n_objects];
        for m in 0..self.src.len() as u32 {
            out_of[self.src[m as usize] as usize].push(m);
        }
        for f in 0..self.src.len() as u32 {
            for &g in &out_of[self.dst[f as usize] as usize] {
                let gf = self.compose_mor(g, f);
                for &h in &out_of[self.dst[g as usize] as usize] {
                    let hg = self.compose_mor(h, g);
                    if self.compose_mor(h, gf) != self.compose_mor(hg, f) {
                        return Err(Error::domain("associativity fails"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn morphisms(&self, a: u32, b: u32) -> &[u32] {
        self.by_pair.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn compose_mor(&self, g: u32, f: u32) -> u32 {
        *self
            .compose
            .get(&(g, f))
            .expect("composition of composable morphisms is defined")
    }

    pub fn is_identity(&self, m: u32) -> bool {
        self.identity[self.src[m as usize] as usize] == m
    }

    /// Nonidentity morphisms out of each object, precomputed for the bar
    /// complex string enumeration.
    pub fn nonidentity_out(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n_objects];
        for m in 0..self.src.len() as u32 {
            if !self.is_identity(m) {
                out[self.src[m as usize] as usize].push(m);
            }
        }
        out
    }
}

/// A contravariant functor to finite abelian groups: a morphism a→b yields
/// map(b) → map(a).
pub struct AbFunctor {
    pub cat: Arc<FiniteCategory>,
    pub values: Vec<FinAb>,
    pub maps: Vec<FinAbHom>,
}

impl AbFunctor {
    pub fn new(cat: Arc<FiniteCategory>, values: Vec<FinAb>, maps: Vec<FinAbHom>) -> Result<Self> {
        if values.len() != cat.n_objects || maps.len() != cat.n_morphisms() {
            return Err(Error::domain("functor data shape mismatch"));
        }
        let f = AbFunctor { cat, values, maps };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let cat = &self.cat;
        for m in 0..cat.n_morphisms() {
            let h = &self.maps[m];
            if h.src != self.values[cat.dst[m] as usize] || h.dst != self.values[cat.src[m] as usize]
            {
                return Err(Error::domain("functor map endpoints mismatch (contravariance)"));
            }
        }
        for (x, &e) in cat.identity.iter().enumerate() {
            if self.maps[e as usize] != FinAbHom::identity(&self.values[x]) {
                return Err(Error::domain("functor does not preserve identities"));
            }
        }
        for f in 0..cat.n_morphisms() as u32 {
            for b in 0..cat.n_objects as u32 {
                if b != cat.dst[f as usize] {
                    continue;
                }
                for t in 0..cat.n_objects as u32 {
                    for &g in cat.morphisms(b, t) {
                        let gf = cat.compose_mor(g, f);
                        let lhs = &self.maps[gf as usize];
                        let rhs = self.maps[f as usize].compose(&self.maps[g as usize]);
                        if *lhs != rhs {
                            return Err(Error::domain("functoriality fails: F(g∘f) != F(f)∘F(g)"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_object_one_morphism() {
        let cat = FiniteCategory::new(1, vec![0], vec![0], vec![0], vec![0], |_, _| 0).unwrap();
        assert_eq!(cat.n_morphisms(), 1);
        let z2 = FinAb::from_orders(&[2]);
        let f = AbFunctor::new(
            Arc::new(cat),
            vec![z2.clone()],
            vec![FinAbHom::identity(&z2)],
        )
        .unwrap();
        assert_eq!(f.values[0].order(), 2);
    }

    #[test]
    fn broken_associativity_is_rejected() {
        // two objects, parallel arrows with a bad composition rule
        // 0: id_0, 1: id_1, 2,3: 0 -> 1
        let res = FiniteCategory::new(
            2,
            vec![0, 1, 0, 0],
            vec![0, 1, 1, 1],
            vec![0, 1],
            vec![0; 4],
            |g, f| {
                // wrong: id_1 ∘ arrow2 = arrow3
                if g == 1 && f == 2 {
                    3
                } else if g == 1 {
                    f
                } else if f == 0 {
                    g
                } else {
                    g
                }
            },
        );
        assert!(res.is_err());
    }

    #[test]
    fn functoriality_validation_catches_errors() {
        // one object, C2 worth of morphisms: id and t with t∘t = id
        let cat = Arc::new(
            FiniteCategory::new(
                1,
                vec![0, 0],
                vec![0, 0],
                vec![0],
                vec![0, 1],
                |g, f| if g == f { 0 } else { g.max(f) },
            )
            .unwrap(),
        );
        let z3 = FinAb::from_orders(&[3]);
        // valid: t acts by inversion
        let inv = FinAbHom::new(z3.clone(), z3.clone(), vec![vec![2]]).unwrap();
        assert!(AbFunctor::new(cat.clone(), vec![z3.clone()], vec![FinAbHom::identity(&z3), inv]).is_ok());
        // invalid: t acts by multiplication by 0 (not functorial: 0∘0 ≠ id)
        let zero = FinAbHom::new(z3.clone(), z3.clone(), vec![vec![0]]).unwrap();
        assert!(AbFunctor::new(cat, vec![z3.clone()], vec![FinAbHom::identity(&z3), zero]).is_err());
    }
}
