//! Tensor products and internal Hom of presented modules, with the diagonal
//! G-action, together with the coordinate bases used to move between
//! module coordinates and honest matrices/elements.

use crate::error::{Error, Result};
use crate::gmod::{normalize_hom_matrix, GMap, GModule, ModRef};
use crate::linalg::{mat_mul, IntMat};

/// `A ⊗ B` with diagonal action; generators are the pure tensors of the
/// generators whose combined order is nontrivial.
pub struct TensorModule {
    pub module: ModRef,
    pub left: ModRef,
    pub right: ModRef,
    /// Module generator -> (left generator, right generator).
    pub pairs: Vec<(usize, usize)>,
}

fn combined_order(a: i64, b: i64) -> i64 {
    match (a, b) {
        (0, 0) => 0,
        (0, m) | (m, 0) => m,
        (m, n) => num_integer::gcd(m, n),
    }
}

pub fn tensor(a: &ModRef, b: &ModRef) -> Result<TensorModule> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch);
    }
    let group = a.group().clone();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let push_pairs = |want_torsion: bool, pairs: &mut Vec<(usize, usize)>| {
        for i in 0..a.ngens() {
            for j in 0..b.ngens() {
                let d = combined_order(a.orders()[i], b.orders()[j]);
                if d == 1 {
                    continue;
                }
                if (d != 0) == want_torsion {
                    pairs.push((i, j));
                }
            }
        }
    };
    push_pairs(true, &mut pairs);
    push_pairs(false, &mut pairs);
    let orders: Vec<i64> = pairs
        .iter()
        .map(|&(i, j)| combined_order(a.orders()[i], b.orders()[j]))
        .collect();
    let dim = pairs.len();
    let index_of = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
    let action: Vec<IntMat> = (0..group.order())
        .map(|g| {
            let mut m = IntMat::zeros(dim, dim);
            for (c, &(i, j)) in pairs.iter().enumerate() {
                for k in 0..a.ngens() {
                    let ca = *a.action(g).get(k, i);
                    if ca == 0 {
                        continue;
                    }
                    for l in 0..b.ngens() {
                        let cb = *b.action(g).get(l, j);
                        if cb == 0 {
                            continue;
                        }
                        if let Some(r) = index_of(k, l) {
                            m.set(r, c, m.get(r, c) + ca * cb);
                        }
                    }
                }
            }
            m
        })
        .collect();
    let module = GModule::new_unchecked(group, orders, action)?;
    Ok(TensorModule {
        module,
        left: a.clone(),
        right: b.clone(),
        pairs,
    })
}

impl TensorModule {
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (i, j))
    }

    /// Coordinates of the pure tensor of two elements.
    pub fn pure(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; self.pairs.len()];
        for (pos, &(i, j)) in self.pairs.iter().enumerate() {
            v[pos] = x[i] * y[j];
        }
        self.module.reduce(&v)
    }

    /// `f ⊗ g` as a map between two tensor modules.
    pub fn tensor_map(src: &TensorModule, dst: &TensorModule, f: &GMap, g: &GMap) -> Result<GMap> {
        let mut m = IntMat::zeros(dst.module.ngens(), src.module.ngens());
        for (c, &(i, j)) in src.pairs.iter().enumerate() {
            let fx = f.matrix().col_vec(i);
            let gy = g.matrix().col_vec(j);
            let col = dst.pure(&fx, &gy);
            for r in 0..col.len() {
                m.set(r, c, col[r]);
            }
        }
        GMap::with_flag(
            &src.module,
            &dst.module,
            m,
            f.is_equivariant() && g.is_equivariant(),
        )
    }
}

#[derive(Clone, Copy, Debug)]
struct HomEntry {
    row: usize,
    col: usize,
    mult: i64,
    order: i64,
}

/// `Hom(A, B)` with the diagonal action `(g·f)(x) = g f(g⁻¹ x)`.
///
/// Generators are scaled elementary matrices; when `A` has torsion mapping
/// into the lattice part of `B` the corresponding positions carry no
/// generators, which makes `Hom(A, B) = Hom(A/torsion, B)` an identity of
/// presentations when `B` is a lattice.
pub struct HomModule {
    pub module: ModRef,
    pub src: ModRef,
    pub dst: ModRef,
    entries: Vec<HomEntry>,
}

pub fn hom(a: &ModRef, b: &ModRef) -> Result<HomModule> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch);
    }
    let group = a.group().clone();
    let mut entries: Vec<HomEntry> = Vec::new();
    let classify = |i: usize, j: usize| -> Option<HomEntry> {
        let o = a.orders()[j];
        let e = b.orders()[i];
        match (o, e) {
            (0, e) => Some(HomEntry {
                row: i,
                col: j,
                mult: 1,
                order: e,
            }),
            (_, 0) => None,
            (o, e) => {
                let g = num_integer::gcd(o, e);
                if g == 1 {
                    None
                } else {
                    Some(HomEntry {
                        row: i,
                        col: j,
                        mult: e / g,
                        order: g,
                    })
                }
            }
        }
    };
    for want_torsion in [true, false] {
        for i in 0..b.ngens() {
            for j in 0..a.ngens() {
                if let Some(en) = classify(i, j) {
                    if (en.order != 0) == want_torsion {
                        entries.push(en);
                    }
                }
            }
        }
    }
    let orders: Vec<i64> = entries.iter().map(|e| e.order).collect();
    let hm = HomModule {
        module: GModule::zero_module(&group), // placeholder, replaced below
        src: a.clone(),
        dst: b.clone(),
        entries,
    };
    let mut action: Vec<IntMat> = Vec::with_capacity(group.order());
    for g in group.elements() {
        let ginv = group.inv(g);
        let mut m = IntMat::zeros(hm.entries.len(), hm.entries.len());
        for (c, en) in hm.entries.iter().enumerate() {
            // matrix of g·h_en = ρ_b(g) (mult E_{row,col}) ρ_a(g⁻¹)
            let mut img = IntMat::zeros(b.ngens(), a.ngens());
            for r in 0..b.ngens() {
                let br = *b.action(g).get(r, en.row);
                if br == 0 {
                    continue;
                }
                for cc in 0..a.ngens() {
                    let ac = *a.action(ginv).get(en.col, cc);
                    if ac == 0 {
                        continue;
                    }
                    img.set(r, cc, img.get(r, cc) + en.mult * br * ac);
                }
            }
            let coords = hm.coords_of_matrix(&img)?;
            for (r, &v) in coords.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        action.push(m);
    }
    let module = GModule::new_unchecked(group, orders, action)?;
    Ok(HomModule { module, ..hm })
}

impl HomModule {
    /// Convert a raw homomorphism matrix (dst.ngens × src.ngens) into
    /// module coordinates, validating well-definedness.
    pub fn coords_of_matrix(&self, m: &IntMat) -> Result<Vec<i64>> {
        // normalization validates the forbidden positions
        let nm = normalize_hom_matrix(self.src.orders(), self.dst.orders(), m)?;
        let nm = &nm;
        let mut out = Vec::with_capacity(self.entries.len());
        for en in &self.entries {
            let v = *nm.get(en.row, en.col);
            debug_assert_eq!(v % en.mult, 0, "hom normal form divisibility");
            let c = v / en.mult;
            out.push(if en.order == 0 { c } else { c.rem_euclid(en.order) });
        }
        Ok(out)
    }

    pub fn matrix_of_coords(&self, coords: &[i64]) -> IntMat {
        assert_eq!(coords.len(), self.entries.len());
        let mut m = IntMat::zeros(self.dst.ngens(), self.src.ngens());
        for (en, &c) in self.entries.iter().zip(coords) {
            m.set(en.row, en.col, m.get(en.row, en.col) + en.mult * c);
        }
        m
    }

    pub fn coords_of_map(&self, f: &GMap) -> Result<Vec<i64>> {
        self.coords_of_matrix(f.matrix())
    }

    pub fn map_of_coords(&self, coords: &[i64]) -> Result<GMap> {
        GMap::new(&self.src, &self.dst, self.matrix_of_coords(coords))
    }

    /// Post-composition `Hom(A,B) -> Hom(A,B')` by `φ: B -> B'`.
    pub fn post_compose(src: &HomModule, dst: &HomModule, phi: &GMap) -> Result<GMap> {
        let mut m = IntMat::zeros(dst.module.ngens(), src.module.ngens());
        for (c, en) in src.entries.iter().enumerate() {
            let em = {
                let mut e = IntMat::zeros(src.dst.ngens(), src.src.ngens());
                e.set(en.row, en.col, en.mult);
                e
            };
            let img = mat_mul(phi.matrix(), &em)?;
            let coords = dst.coords_of_matrix(&img)?;
            for (r, &v) in coords.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        GMap::with_flag(&src.module, &dst.module, m, phi.is_equivariant())
    }

    /// Pre-composition `Hom(A,B) -> Hom(A',B)` by `ψ: A' -> A`.
    pub fn pre_compose(src: &HomModule, dst: &HomModule, psi: &GMap) -> Result<GMap> {
        let mut m = IntMat::zeros(dst.module.ngens(), src.module.ngens());
        for (c, en) in src.entries.iter().enumerate() {
            let em = {
                let mut e = IntMat::zeros(src.dst.ngens(), src.src.ngens());
                e.set(en.row, en.col, en.mult);
                e
            };
            let img = mat_mul(&em, psi.matrix())?;
            let coords = dst.coords_of_matrix(&img)?;
            for (r, &v) in coords.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        GMap::with_flag(&src.module, &dst.module, m, psi.is_equivariant())
    }
}

/// The dual lattice `Hom(M, Z)` with contragredient action.
pub fn dual(m: &ModRef) -> Result<ModRef> {
    Ok(hom(m, &GModule::trivial(m.group()))?.module)
}
