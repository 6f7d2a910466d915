//! Sequences of composable maps and exactness verification by lattice
//! arithmetic: at each node the image of the incoming map is compared with
//! the kernel of the outgoing one, with a witness element on failure.

use crate::error::{Error, Result};
use crate::gmod::{GMap, ModRef};
use crate::linalg::{col_hnf, lattice_contains, lattice_hnf, IntMat};

#[derive(Clone, Debug)]
pub struct SequenceSpec {
    maps: Vec<GMap>,
}

/// Verdict of an exactness check. `node` counts module positions in the
/// sequence `0 -> M_0 -> M_1 -> ... -> M_k -> 0` (both end nodes included:
/// injectivity at node 0, surjectivity at node k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    NotComposable {
        node: usize,
    },
    NotAComplex {
        node: usize,
        witness: Vec<i64>,
    },
    NotExact {
        node: usize,
        /// An element of the kernel at this node that is not in the image
        /// (in generator coordinates of the node's module), or for end
        /// nodes a witness of failed injectivity/surjectivity.
        witness: Vec<i64>,
    },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

impl SequenceSpec {
    pub fn new(maps: Vec<GMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::IllFormedMap("empty sequence"));
        }
        for w in maps.windows(2) {
            if w[0].target().as_ref() != w[1].source().as_ref() {
                return Err(Error::IllFormedMap("sequence maps do not compose"));
            }
        }
        Ok(SequenceSpec { maps })
    }

    pub fn maps(&self) -> &[GMap] {
        &self.maps
    }

    pub fn modules(&self) -> Vec<ModRef> {
        let mut v: Vec<ModRef> = vec![self.maps[0].source().clone()];
        v.extend(self.maps.iter().map(|m| m.target().clone()));
        v
    }

    /// Check exactness of `0 -> M_0 -> ... -> M_k -> 0`.
    pub fn check_exact(&self) -> Result<Exactness> {
        let mods = self.modules();
        let k = self.maps.len();
        for node in 0..=k {
            let m = &mods[node];
            let rel = lattice_hnf(&m.relations())?;
            // incoming image lattice (node 0: just the relations)
            let image = if node == 0 {
                rel.clone()
            } else {
                self.maps[node - 1].image_lattice()?
            };
            // outgoing kernel lattice (node k: the whole module)
            let kernel = if node == k {
                IntMat::identity(m.ngens())
            } else {
                self.maps[node].kernel_lattice()?
            };
            // complex condition: image ⊆ kernel
            let kern_hnf = col_hnf(&kernel)?;
            if !lattice_contains(&kern_hnf, &image)? {
                let witness = first_outside(&image, &kernel)?
                    .unwrap_or_else(|| vec![0; m.ngens()]);
                return Ok(Exactness::NotAComplex { node, witness });
            }
            // exactness: kernel ⊆ image
            let img_hnf = col_hnf(&image)?;
            if !lattice_contains(&img_hnf, &kernel)? {
                let witness = first_outside(&kernel, &image)?
                    .unwrap_or_else(|| vec![0; m.ngens()]);
                return Ok(Exactness::NotExact { node, witness });
            }
        }
        Ok(Exactness::Exact)
    }
}

/// First basis column of `a` not contained in the span of `b`.
fn first_outside(a: &IntMat, b: &IntMat) -> Result<Option<Vec<i64>>> {
    let hb = col_hnf(b)?;
    for c in 0..a.cols() {
        let v = a.col_vec(c);
        if !lattice_contains(&hb, &a.select_cols(&[c]))? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
