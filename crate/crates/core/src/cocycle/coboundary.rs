use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{exact, Exact, ExactMatrix};
use crate::groupoid::FiniteGroupoid;

use super::cocycle::{validate_cocycle, Cocycle};

/// Seed for the invertible-combination search in ranks above one.
const COMBINATION_SEED: u64 = 0x5eed_c0b0;
const COMBINATION_TRIES: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoboundarySearch {
    /// `λ` per object with `g₂(σ) = λ(t σ) g₁(σ) λ(s σ)⁻¹`.
    Found(Vec<ExactMatrix>),
    None,
    Inconclusive(String),
}

impl CoboundarySearch {
    pub fn found(&self) -> Option<&[ExactMatrix]> {
        match self {
            Self::Found(l) => Some(l),
            _ => None,
        }
    }
}

/// Anchors one object per orbit, solves the intertwiner equation over the
/// anchor's isotropy exactly, then propagates along a spanning tree and
/// verifies every arrow. Complete in rank one.
pub fn cohomologous(g: &FiniteGroupoid, g1: &Cocycle, g2: &Cocycle) -> Result<CoboundarySearch> {
    if g1.rank != g2.rank {
        return Err(Error::Shape(format!("ranks {} and {} differ", g1.rank, g2.rank)));
    }
    for c in [g1, g2] {
        let r = validate_cocycle(g, c)?;
        if !r.is_valid() {
            return Err(Error::Invalid(r.summary()));
        }
    }
    let k = g1.rank;
    let tree = g.anchor_arrows();
    let mut lambda = vec![ExactMatrix::zeros(k, k); g.object_count()];
    let mut rng = ChaCha8Rng::seed_from_u64(COMBINATION_SEED);
    for block in g.orbits() {
        let anchor = block[0];
        let loops = g.hom(anchor, anchor);
        // Unknown X (k×k, row-major); equations g₂(ℓ) X − X g₁(ℓ) = 0.
        let mut rows = Vec::new();
        for &l in loops {
            let (a, b) = (g2.value(l), g1.value(l));
            for i in 0..k {
                for j in 0..k {
                    let mut row = vec![Exact::default(); k * k];
                    for m in 0..k {
                        row[m * k + j] = row[m * k + j] + a[(i, m)];
                        row[i * k + m] = row[i * k + m] - b[(m, j)];
                    }
                    rows.push(row);
                }
            }
        }
        let basis: Vec<ExactMatrix> = if rows.is_empty() {
            (0..k * k)
                .map(|e| {
                    let mut m = ExactMatrix::zeros(k, k);
                    m[(e / k, e % k)] = exact(1);
                    m
                })
                .collect()
        } else {
            ExactMatrix::from_rows(&rows)?
                .nullspace()
                .into_iter()
                .map(|v| ExactMatrix::from_rows(&v.chunks(k).map(<[Exact]>::to_vec).collect::<Vec<_>>()).expect("square"))
                .collect()
        };
        if basis.is_empty() {
            return Ok(CoboundarySearch::None);
        }
        let mut x = basis.iter().find(|m| m.is_invertible()).cloned();
        if x.is_none() && k > 1 {
            if basis.len() == 1 {
                return Ok(CoboundarySearch::None);
            }
            for _ in 0..COMBINATION_TRIES {
                let mut m = ExactMatrix::zeros(k, k);
                for b in &basis {
                    m = &m + &b.scale(&exact(rng.random_range(-3i64..=3)));
                }
                if m.is_invertible() {
                    x = Some(m);
                    break;
                }
            }
            if x.is_none() {
                return Ok(CoboundarySearch::Inconclusive(format!(
                    "no invertible intertwiner among {COMBINATION_TRIES} combinations at {}",
                    g.object_label(anchor)
                )));
            }
        }
        let Some(x) = x else {
            return Ok(CoboundarySearch::None);
        };
        for &obj in &block {
            lambda[obj] = match tree[obj] {
                None => x.clone(),
                Some(a) => {
                    let inv = g1.value(a).inverse().expect("validated cocycle");
                    &(g2.value(a) * &x) * &inv
                }
            };
        }
    }
    let twisted = g1.twisted(g, &lambda)?;
    if twisted != *g2 {
        return Err(Error::Invalid("propagated coboundary failed verification".into()));
    }
    Ok(CoboundarySearch::Found(lambda))
}
