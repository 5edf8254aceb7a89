use std::collections::VecDeque;

use super::bitorsor::{same_structure, Bitorsor};

pub const SEARCH_NODE_CAP: usize = 1_000_000;

/// Equivariant bijection `T: Q₁ → Q₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoMorphism {
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoMorphismSearch {
    Found(TwoMorphism),
    None,
    /// The node cap was hit before the search space was exhausted.
    Inconclusive { nodes: usize },
}

impl TwoMorphismSearch {
    pub fn found(&self) -> Option<&TwoMorphism> {
        match self {
            Self::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Orbits of the joint left/right action on the carrier.
pub fn joint_orbits(b: &Bitorsor) -> Vec<Vec<usize>> {
    let n = b.carrier_len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut block = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            let lefts = (0..b.left.arrow_count()).filter_map(|s| b.act_left(s, q));
            let rights = (0..b.right.arrow_count()).filter_map(|t| b.act_right(q, t));
            for p in lefts.chain(rights).collect::<Vec<_>>() {
                if !seen[p] {
                    seen[p] = true;
                    block.push(p);
                    queue.push_back(p);
                }
            }
        }
        out.push(block);
    }
    out
}

pub fn is_two_morphism(b1: &Bitorsor, b2: &Bitorsor, t: &TwoMorphism) -> bool {
    let n = b1.carrier_len();
    if t.map.len() != n || b2.carrier_len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &v in &t.map {
        if v >= n || hit[v] {
            return false;
        }
        hit[v] = true;
    }
    (0..n).all(|q| {
        b1.rho(q) == b2.rho(t.map[q])
            && b1.alpha(q) == b2.alpha(t.map[q])
            && (0..b1.left.arrow_count())
                .all(|s| b1.act_left(s, q).map(|p| t.map[p]) == b2.act_left(s, t.map[q]))
            && (0..b1.right.arrow_count())
                .all(|r| b1.act_right(q, r).map(|p| t.map[p]) == b2.act_right(t.map[q], r))
    })
}

/// Backtracking search seeded at one anchor per joint orbit; equivariance
/// then forces the image of the whole orbit.
pub fn find_two_morphism(b1: &Bitorsor, b2: &Bitorsor) -> TwoMorphismSearch {
    if !same_structure(&b1.left, &b2.left) || !same_structure(&b1.right, &b2.right) {
        return TwoMorphismSearch::None;
    }
    if b1.carrier_len() != b2.carrier_len() {
        return TwoMorphismSearch::None;
    }
    let o1 = joint_orbits(b1);
    let o2 = joint_orbits(b2);
    let mut s1: Vec<usize> = o1.iter().map(Vec::len).collect();
    let mut s2: Vec<usize> = o2.iter().map(Vec::len).collect();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return TwoMorphismSearch::None;
    }
    let n = b1.carrier_len();
    let mut state = Search {
        b1,
        b2,
        orbits: &o1,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
    };
    match state.solve(0) {
        Some(true) => TwoMorphismSearch::Found(TwoMorphism { map: state.map }),
        Some(false) => TwoMorphismSearch::None,
        None => TwoMorphismSearch::Inconclusive { nodes: state.nodes },
    }
}

struct Search<'a> {
    b1: &'a Bitorsor,
    b2: &'a Bitorsor,
    orbits: &'a [Vec<usize>],
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: usize,
}

impl Search<'_> {
    /// `Some(found)`, or `None` when the node cap is exceeded.
    fn solve(&mut self, orbit: usize) -> Option<bool> {
        if orbit == self.orbits.len() {
            return Some(true);
        }
        let anchor = self.orbits[orbit][0];
        for cand in 0..self.b2.carrier_len() {
            if self.used[cand]
                || self.b1.rho(anchor) != self.b2.rho(cand)
                || self.b1.alpha(anchor) != self.b2.alpha(cand)
            {
                continue;
            }
            self.nodes += 1;
            if self.nodes > SEARCH_NODE_CAP {
                return None;
            }
            let snapshot = self.map.clone();
            let used = self.used.clone();
            if self.propagate(anchor, cand) {
                match self.solve(orbit + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.map = snapshot;
            self.used = used;
        }
        Some(false)
    }

    fn assign(&mut self, q: usize, v: usize, queue: &mut VecDeque<usize>) -> bool {
        if self.map[q] != usize::MAX {
            return self.map[q] == v;
        }
        if self.used[v] || self.b1.rho(q) != self.b2.rho(v) || self.b1.alpha(q) != self.b2.alpha(v) {
            return false;
        }
        self.map[q] = v;
        self.used[v] = true;
        queue.push_back(q);
        true
    }

    fn propagate(&mut self, q0: usize, v0: usize) -> bool {
        let mut queue = VecDeque::new();
        if !self.assign(q0, v0, &mut queue) {
            return false;
        }
        while let Some(q) = queue.pop_front() {
            let v = self.map[q];
            for s in 0..self.b1.left.arrow_count() {
                match (self.b1.act_left(s, q), self.b2.act_left(s, v)) {
                    (Some(a), Some(b)) => {
                        if !self.assign(a, b, &mut queue) {
                            return false;
                        }
                    }
                    (None, None) => {}
                    _ => return false,
                }
            }
            for t in 0..self.b1.right.arrow_count() {
                match (self.b1.act_right(q, t), self.b2.act_right(v, t)) {
                    (Some(a), Some(b)) => {
                        if !self.assign(a, b, &mut queue) {
                            return false;
                        }
                    }
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}
