use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Finite group given by its multiplication table; `table[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupWire", into = "GroupWire")]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupWire {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl From<FiniteGroup> for GroupWire {
    fn from(g: FiniteGroup) -> Self {
        Self {
            labels: g.labels,
            table: g.table,
        }
    }
}

impl TryFrom<GroupWire> for FiniteGroup {
    type Error = Error;
    fn try_from(w: GroupWire) -> Result<Self> {
        FiniteGroup::from_table(w.labels, w.table)
    }
}

impl FiniteGroup {
    /// Builds a group from a table. Closure, identity and inverses are required;
    /// associativity is left to [`FiniteGroup::validate`].
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || labels.len() != n {
            return Err(Error::Shape(format!(
                "group table has {n} rows for {} labels",
                labels.len()
            )));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::Shape("group table is not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Invalid("group table has no identity".into()))?;
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::Invalid(format!("element {} has no inverse", labels[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            labels,
            table,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table((0..n).map(|a| a.to_string()).collect(), table)
            .expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// Greedy generating set: repeatedly add the first element not yet generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for a in 0..self.order() {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("group");
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.mul(self.mul(a, b), c);
                    let rhs = self.mul(a, self.mul(b, c));
                    r.check("group-associativity", lhs == rhs, || {
                        format!(
                            "({}·{})·{} != {}·({}·{})",
                            self.labels[a], self.labels[b], self.labels[c],
                            self.labels[a], self.labels[b], self.labels[c]
                        )
                    });
                }
            }
        }
        r
    }
}
