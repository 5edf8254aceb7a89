use crate::error::{Error, Result};

use super::bitorsor::{same_structure, Bitorsor};

/// Composite `X ↔ Z` of `h1: X ↔ Y` and `h2: Y ↔ Z`: the fibre product
/// `Q₁ ×_{α₁,ϱ₂} Q₂` modulo `(q₁, q₂) ∼ (q₁·σ, σ⁻¹·q₂)`.
pub fn compose_homs(h1: &Bitorsor, h2: &Bitorsor) -> Result<Bitorsor> {
    if !same_structure(&h1.right, &h2.left) {
        return Err(Error::GroupoidMismatch(format!(
            "{} ends at {} but {} starts at {}",
            h1.name,
            h1.right.name(),
            h2.name,
            h2.left.name()
        )));
    }
    let mid = &h1.right;
    let pairs: Vec<(usize, usize)> = (0..h1.carrier_len())
        .flat_map(|q1| {
            (0..h2.carrier_len())
                .filter(move |&q2| h1.alpha(q1) == h2.rho(q2))
                .map(move |q2| (q1, q2))
        })
        .collect();
    let index = |q1: usize, q2: usize| pairs.binary_search(&(q1, q2)).ok();

    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, &(q1, q2)) in pairs.iter().enumerate() {
        for s in 0..mid.arrow_count() {
            let (Some(a), Some(b)) = (h1.act_right(q1, s), h2.act_left(mid.inverse(s), q2)) else {
                continue;
            };
            let j = index(a, b).ok_or_else(|| Error::NotBitorsor("quotient relation leaves the fibre product".into()))?;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut reps = Vec::new();
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        if class_of[r] == usize::MAX {
            class_of[r] = reps.len();
            reps.push(i);
        }
        class_of[i] = class_of[r];
    }
    let carrier = reps
        .iter()
        .map(|&i| {
            let (q1, q2) = pairs[i];
            format!("[{},{}]", h1.carrier_label(q1), h2.carrier_label(q2))
        })
        .collect();
    let rho = reps.iter().map(|&i| h1.rho(pairs[i].0)).collect();
    let alpha = reps.iter().map(|&i| h2.alpha(pairs[i].1)).collect();
    Bitorsor::from_rules(
        format!("{}∘{}", h2.name, h1.name),
        h1.left.clone(),
        h2.right.clone(),
        carrier,
        rho,
        alpha,
        |s, c| {
            let (q1, q2) = pairs[reps[c]];
            let a = h1.act_left(s, q1).expect("anchored action");
            class_of[index(a, q2).expect("left action preserves the fibre product")]
        },
        |c, t| {
            let (q1, q2) = pairs[reps[c]];
            let b = h2.act_right(q2, t).expect("anchored action");
            class_of[index(q1, b).expect("right action preserves the fibre product")]
        },
    )
}
