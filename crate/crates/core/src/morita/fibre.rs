use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::bitorsor::Bitorsor;

/// Census of one α-fibre under the isotropy `Ξ_y^y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreReport {
    pub object: usize,
    pub fibre: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub isotropy_rank: usize,
    /// Order of `Θ_x^x` at `ϱ` of each block.
    pub left_isotropy_ranks: Vec<usize>,
    pub rho_constant_on_blocks: bool,
}

impl FibreReport {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Every block has `rank(Ξ_y^y)` elements, `ϱ` is constant on blocks, and
    /// the isotropy at `ϱ(block)` has the same rank.
    pub fn holds(&self) -> bool {
        self.rho_constant_on_blocks
            && self.blocks.iter().all(|b| b.len() == self.isotropy_rank)
            && self.left_isotropy_ranks.iter().all(|&k| k == self.isotropy_rank)
    }
}

pub fn fibre_partition_report(phi: &Bitorsor, y: usize) -> Result<FibreReport> {
    if y >= phi.right.object_count() {
        return Err(Error::UnknownObject(y.to_string()));
    }
    let iso = phi.right.hom(y, y);
    let fibre = phi.alpha_fibre(y);
    let mut seen = vec![false; phi.carrier_len()];
    let mut blocks = Vec::new();
    for &q in &fibre {
        if seen[q] {
            continue;
        }
        let mut block: Vec<usize> = iso.iter().filter_map(|&t| phi.act_right(q, t)).collect();
        block.sort_unstable();
        block.dedup();
        for &p in &block {
            seen[p] = true;
        }
        blocks.push(block);
    }
    let rho_constant_on_blocks = blocks
        .iter()
        .all(|b| b.iter().all(|&p| phi.rho(p) == phi.rho(b[0])));
    let left_isotropy_ranks = blocks
        .iter()
        .map(|b| {
            let x = phi.rho(b[0]);
            phi.left.hom(x, x).len()
        })
        .collect();
    Ok(FibreReport {
        object: y,
        fibre,
        blocks,
        isotropy_rank: iso.len(),
        left_isotropy_ranks,
        rho_constant_on_blocks,
    })
}
