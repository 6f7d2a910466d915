//! Finitely generated abelian groups with G-action, given by presentations.
//!
//! A [`GModule`] stores one generator per coordinate with an order (`0` for a
//! free generator, `d ≥ 2` for a torsion generator; torsion generators come
//! first) and one integer action matrix per group element. Action matrices
//! and homomorphism matrices are kept in a normal form: entries in torsion
//! rows are reduced modulo the row order, and entries in free rows under
//! torsion columns vanish.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{min_generators, GroupRef, Subgroup};
use crate::linalg::{
    col_hnf, kernel_basis, lattice_hnf, mat_mul, mat_vec, preimage_basis, snf, solve_mod,
    IntMat,
};

#[derive(Clone, PartialEq, Eq)]
pub struct GModule {
    group: GroupRef,
    /// Per-generator order: `0` = free, `d ≥ 2` = torsion; torsion first.
    orders: Vec<i64>,
    /// One square matrix per group element, in normal form.
    action: Vec<IntMat>,
}

pub type ModRef = Arc<GModule>;

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GModule(over {}, orders {:?})",
            self.group.name(),
            self.orders
        )
    }
}

/// Reduce a matrix into normal form with respect to source/target orders;
/// errors when it is not a well-defined homomorphism of the presentations.
pub(crate) fn normalize_hom_matrix(
    src_orders: &[i64],
    dst_orders: &[i64],
    m: &IntMat,
) -> Result<IntMat> {
    assert_eq!(m.rows(), dst_orders.len());
    assert_eq!(m.cols(), src_orders.len());
    let mut out = m.clone();
    for r in 0..m.rows() {
        if dst_orders[r] != 0 {
            for c in 0..m.cols() {
                out.set(r, c, out.get(r, c).rem_euclid(dst_orders[r]));
            }
        }
    }
    for c in 0..m.cols() {
        let d = src_orders[c];
        if d == 0 {
            continue;
        }
        for r in 0..m.rows() {
            let a = *out.get(r, c);
            let e = dst_orders[r];
            if e == 0 {
                if a != 0 {
                    return Err(Error::IllFormedMap(
                        "torsion generator maps to an infinite-order element",
                    ));
                }
            } else if (d.checked_mul(a).ok_or(Error::ResultTooLarge)?).rem_euclid(e) != 0 {
                return Err(Error::IllFormedMap(
                    "matrix does not kill the source relations",
                ));
            }
        }
    }
    Ok(out)
}

impl GModule {
    pub fn new(group: GroupRef, orders: Vec<i64>, action: Vec<IntMat>) -> Result<ModRef> {
        let n = orders.len();
        if action.len() != group.order() {
            return Err(Error::IllFormedMap("one action matrix per group element"));
        }
        let mut seen_free = false;
        for &d in &orders {
            if d == 0 {
                seen_free = true;
            } else {
                if d < 2 {
                    return Err(Error::IllFormedMap("torsion orders must be at least 2"));
                }
                if seen_free {
                    return Err(Error::IllFormedMap("torsion generators must come first"));
                }
            }
        }
        let action: Vec<IntMat> = action
            .iter()
            .map(|a| {
                if a.rows() != n || a.cols() != n {
                    return Err(Error::IllFormedMap("action matrix has wrong shape"));
                }
                normalize_hom_matrix(&orders, &orders, a)
            })
            .collect::<Result<_>>()?;
        let m = GModule {
            group,
            orders,
            action,
        };
        m.validate()?;
        Ok(Arc::new(m))
    }

    /// Constructor for derived modules that are correct by construction
    /// (hom, tensor, normalized presentations); matrices are normalized but
    /// the action laws are only re-verified at small sizes in debug builds.
    pub(crate) fn new_unchecked(
        group: GroupRef,
        orders: Vec<i64>,
        action: Vec<IntMat>,
    ) -> Result<ModRef> {
        let n = orders.len();
        let action: Vec<IntMat> = action
            .iter()
            .map(|a| normalize_hom_matrix(&orders, &orders, a))
            .collect::<Result<_>>()?;
        let m = GModule {
            group,
            orders,
            action,
        };
        if cfg!(debug_assertions) && n <= 60 {
            m.validate()?;
        }
        Ok(Arc::new(m))
    }

    fn validate(&self) -> Result<()> {
        let n = self.ngens();
        let id = IntMat::identity(n);
        if self.reduce_matrix(&id)? != self.action[0] {
            return Err(Error::IllFormedMap("identity does not act trivially"));
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                let prod = self.reduce_matrix(&mat_mul(&self.action[g], &self.action[h])?)?;
                if prod != self.action[gh] {
                    return Err(Error::IllFormedMap("action is not multiplicative"));
                }
            }
        }
        Ok(())
    }

    fn reduce_matrix(&self, m: &IntMat) -> Result<IntMat> {
        normalize_hom_matrix(&self.orders, &self.orders, m)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion_count(&self) -> usize {
        self.ngens() - self.free_rank()
    }

    pub fn is_lattice(&self) -> bool {
        self.torsion_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.ngens() == 0
    }

    /// lcm of the torsion orders (1 for a lattice).
    pub fn exponent(&self) -> i64 {
        self.orders
            .iter()
            .filter(|&&d| d != 0)
            .fold(1i64, |a, &b| num_integer::lcm(a, b))
    }

    /// Canonical invariant factors of the torsion part (divisibility chain).
    pub fn invariant_factors(&self) -> Vec<i64> {
        let tors: Vec<i64> = self.orders.iter().copied().filter(|&d| d != 0).collect();
        if tors.is_empty() {
            return vec![];
        }
        let diag = IntMat::from_fn(tors.len(), tors.len(), |r, c| {
            if r == c {
                tors[r]
            } else {
                0
            }
        });
        let s = snf(&diag).expect("SNF of a small diagonal matrix");
        s.d.into_iter().filter(|&d| d > 1).collect()
    }

    /// Relation lattice: one column `d_i e_i` per torsion generator.
    pub fn relations(&self) -> IntMat {
        let tors: Vec<usize> = (0..self.ngens()).filter(|&i| self.orders[i] != 0).collect();
        IntMat::from_fn(self.ngens(), tors.len(), |r, c| {
            if r == tors[c] {
                self.orders[r]
            } else {
                0
            }
        })
    }

    pub fn action(&self, g: usize) -> &IntMat {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[i64]) -> Result<Vec<i64>> {
        Ok(self.reduce(&mat_vec(&self.action[g], v)?))
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| if d == 0 { x } else { x.rem_euclid(d) })
            .collect()
    }

    pub fn eq_elems(&self, a: &[i64], b: &[i64]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.ngens()]
    }

    /// Sum of all action matrices.
    pub fn norm_matrix(&self) -> Result<IntMat> {
        let n = self.ngens();
        let mut out = IntMat::zeros(n, n);
        for g in self.group.elements() {
            for r in 0..n {
                for c in 0..n {
                    let v = out
                        .get(r, c)
                        .checked_add(*self.action[g].get(r, c))
                        .ok_or(Error::ResultTooLarge)?;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// A small generating set of the group (the whole group when trivial).
    pub fn group_generators(&self) -> Vec<usize> {
        if self.group.is_trivial() {
            vec![]
        } else {
            min_generators(&self.group).expect("nontrivial group").1
        }
    }

    // ----- standard modules -----

    pub fn zero_module(group: &GroupRef) -> ModRef {
        let action = vec![IntMat::zeros(0, 0); group.order()];
        GModule::new(group.clone(), vec![], action).expect("zero module")
    }

    /// Z with trivial action.
    pub fn trivial(group: &GroupRef) -> ModRef {
        let action = vec![IntMat::identity(1); group.order()];
        GModule::new(group.clone(), vec![0], action).expect("trivial module")
    }

    /// Finite cyclic module of the given order with a unit action.
    pub fn cyclic(group: &GroupRef, order: i64, units: &[i64]) -> Result<ModRef> {
        if order < 2 {
            return Err(Error::IllFormedMap("cyclic module order must be >= 2"));
        }
        if units.len() != group.order() {
            return Err(Error::IllFormedMap("one unit per group element"));
        }
        for (g, &u) in units.iter().enumerate() {
            if num_integer::gcd(u.rem_euclid(order), order) != 1 {
                return Err(Error::IllFormedMap("action values must be units"));
            }
            let _ = g;
        }
        let action: Vec<IntMat> = units
            .iter()
            .map(|&u| IntMat::from_rows(vec![vec![u.rem_euclid(order)]]))
            .collect();
        GModule::new(group.clone(), vec![order], action)
    }

    /// Free module `(ZG)^k`; basis indexed by (copy, group element).
    pub fn regular(group: &GroupRef, k: usize) -> ModRef {
        let n = group.order();
        let dim = n * k;
        let action: Vec<IntMat> = group
            .elements()
            .map(|g| {
                IntMat::from_fn(dim, dim, |r, c| {
                    let (cc, cg) = (c / n, c % n);
                    let target = cc * n + group.mul(g, cg);
                    if r == target {
                        1
                    } else {
                        0
                    }
                })
            })
            .collect();
        GModule::new(group.clone(), vec![0; dim], action).expect("free module")
    }

    /// Permutation module ZS.
    pub fn permutation(gset: &crate::group::GSet) -> ModRef {
        let n = gset.size();
        let group = gset.group().clone();
        let action: Vec<IntMat> = group
            .elements()
            .map(|g| {
                IntMat::from_fn(n, n, |r, c| if r == gset.act(g, c) { 1 } else { 0 })
            })
            .collect();
        GModule::new(group, vec![0; n], action).expect("permutation module")
    }

    /// Augmentation ideal of ZG, with basis `{g - 1 : g ≠ 1}`.
    pub fn augmentation_ideal(group: &GroupRef) -> ModRef {
        let n = group.order();
        let dim = n - 1;
        let action: Vec<IntMat> = group
            .elements()
            .map(|g| {
                let mut m = IntMat::zeros(dim, dim);
                for c in 0..dim {
                    let x = c + 1;
                    // g·(x-1) = (gx - 1) - (g - 1)
                    let gx = group.mul(g, x);
                    if gx != 0 {
                        m.set(gx - 1, c, *m.get(gx - 1, c) + 1);
                    }
                    if g != 0 {
                        m.set(g - 1, c, *m.get(g - 1, c) - 1);
                    }
                }
                m
            })
            .collect();
        GModule::new(group.clone(), vec![0; dim], action).expect("augmentation ideal")
    }

    /// Kernel of the point-sum map ZS -> Z, with basis `{p - p0}` against
    /// the lowest point index as basepoint.
    pub fn augmentation_kernel(gset: &crate::group::GSet) -> ModRef {
        let n = gset.size();
        let group = gset.group().clone();
        let dim = n - 1;
        let action: Vec<IntMat> = group
            .elements()
            .map(|g| {
                let mut m = IntMat::zeros(dim, dim);
                for c in 0..dim {
                    let p = c + 1;
                    // g·(p - p0) = (gp - p0) - (g p0 - p0)
                    let gp = gset.act(g, p);
                    let gp0 = gset.act(g, 0);
                    if gp != 0 {
                        m.set(gp - 1, c, *m.get(gp - 1, c) + 1);
                    }
                    if gp0 != 0 {
                        m.set(gp0 - 1, c, *m.get(gp0 - 1, c) - 1);
                    }
                }
                m
            })
            .collect();
        GModule::new(group, vec![0; dim], action).expect("augmentation kernel")
    }
}

/// A homomorphism between presented modules; `equivariant` records whether
/// it commutes with the action (plain Z-level maps such as sections are
/// allowed where needed).
#[derive(Clone, PartialEq, Eq)]
pub struct GMap {
    source: ModRef,
    target: ModRef,
    matrix: IntMat,
    equivariant: bool,
}

impl std::fmt::Debug for GMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GMap({}x{}, equivariant={})",
            self.matrix.rows(),
            self.matrix.cols(),
            self.equivariant
        )
    }
}

impl GMap {
    /// Build a map, validating well-definedness and recording equivariance.
    pub fn new(source: &ModRef, target: &ModRef, matrix: IntMat) -> Result<GMap> {
        if source.group() != target.group() {
            return Err(Error::GroupMismatch);
        }
        let matrix = normalize_hom_matrix(source.orders(), target.orders(), &matrix)?;
        let mut map = GMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
            equivariant: false,
        };
        map.equivariant = map.check_equivariant()?.is_none();
        Ok(map)
    }

    /// Build and require equivariance.
    pub fn new_equivariant(source: &ModRef, target: &ModRef, matrix: IntMat) -> Result<GMap> {
        let m = Self::new(source, target, matrix)?;
        match m.check_equivariant()? {
            None => Ok(m),
            Some(g) => Err(Error::NotEquivariant(g)),
        }
    }

    /// Constructor for maps whose equivariance status is known from the
    /// construction; re-verified at small sizes in debug builds.
    pub(crate) fn with_flag(
        source: &ModRef,
        target: &ModRef,
        matrix: IntMat,
        equivariant: bool,
    ) -> Result<GMap> {
        if source.group() != target.group() {
            return Err(Error::GroupMismatch);
        }
        let matrix = normalize_hom_matrix(source.orders(), target.orders(), &matrix)?;
        let map = GMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
            equivariant,
        };
        if cfg!(debug_assertions)
            && source.ngens().max(target.ngens()) <= 60
            && equivariant
            && map.check_equivariant()?.is_some()
        {
            return Err(Error::Internal("equivariance flag was wrong".into()));
        }
        Ok(map)
    }

    fn check_equivariant(&self) -> Result<Option<usize>> {
        for g in self.source.group().elements() {
            let lhs = mat_mul(&self.matrix, self.source.action(g))?;
            let rhs = mat_mul(self.target.action(g), &self.matrix)?;
            let lhs = normalize_hom_matrix(self.source.orders(), self.target.orders(), &lhs)?;
            let rhs = normalize_hom_matrix(self.source.orders(), self.target.orders(), &rhs)?;
            if lhs != rhs {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    pub fn identity(m: &ModRef) -> GMap {
        GMap::new(m, m, IntMat::identity(m.ngens())).expect("identity map")
    }

    pub fn zero(source: &ModRef, target: &ModRef) -> Result<GMap> {
        GMap::new(source, target, IntMat::zeros(target.ngens(), source.ngens()))
    }

    pub fn source(&self) -> &ModRef {
        &self.source
    }

    pub fn target(&self) -> &ModRef {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariant
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        Ok(self.target.reduce(&mat_vec(&self.matrix, v)?))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GMap) -> Result<GMap> {
        if other.target.as_ref() != self.source.as_ref() {
            return Err(Error::IllFormedMap("composition mismatch"));
        }
        GMap::new(&other.source, &self.target, mat_mul(&self.matrix, &other.matrix)?)
    }

    pub fn add(&self, other: &GMap) -> Result<GMap> {
        assert_eq!(self.matrix.rows(), other.matrix.rows());
        assert_eq!(self.matrix.cols(), other.matrix.cols());
        let m = IntMat::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| {
            self.matrix.get(r, c) + other.matrix.get(r, c)
        });
        GMap::new(&self.source, &self.target, m)
    }

    pub fn sub(&self, other: &GMap) -> Result<GMap> {
        let m = IntMat::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| {
            self.matrix.get(r, c) - other.matrix.get(r, c)
        });
        GMap::new(&self.source, &self.target, m)
    }

    pub fn eq_map(&self, other: &GMap) -> bool {
        self.matrix == other.matrix
    }

    pub fn is_zero_map(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Kernel subgroup as a lattice in source coordinates (contains the
    /// source relations).
    pub fn kernel_lattice(&self) -> Result<IntMat> {
        let pre = preimage_basis(&self.matrix, &self.target.relations())?;
        lattice_hnf(&pre.hcat(&self.source.relations()))
    }

    /// Image subgroup as a lattice in target coordinates (contains the
    /// target relations).
    pub fn image_lattice(&self) -> Result<IntMat> {
        lattice_hnf(&self.matrix.hcat(&self.target.relations()))
    }

    pub fn is_injective(&self) -> Result<bool> {
        crate::linalg::lattice_eq(&self.kernel_lattice()?, &lattice_hnf(&self.source.relations())?)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image_lattice()? == IntMat::identity(self.target.ngens()))
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

/// Outcome of presenting an abstract quotient `Z^n / relations` as a
/// [`GModule`]: `lift` maps module generators into ambient coordinates and
/// `proj` maps ambient coordinates onto module coordinates.
pub struct Presented {
    pub module: ModRef,
    pub lift: IntMat,
    pub proj: IntMat,
}

/// Normalize a presentation with the given ambient action into SNF form.
pub fn normalize_presentation(
    group: &GroupRef,
    relations: &IntMat,
    ambient_action: &[IntMat],
) -> Result<Presented> {
    let n = relations.rows();
    let s = snf(relations)?;
    let mut orders = vec![0i64; n];
    for (i, &d) in s.d.iter().enumerate() {
        orders[i] = d;
    }
    // SNF sorts 1s before larger factors before 0s; keep coordinates with
    // order != 1 in (torsion, free) order.
    let mut keep: Vec<usize> = (0..n).filter(|&i| orders[i] >= 2).collect();
    keep.extend((0..n).filter(|&i| orders[i] == 0));
    let kept_orders: Vec<i64> = keep.iter().map(|&i| orders[i]).collect();
    let proj = s.u.select_rows(&keep);
    let lift = s.uinv.select_cols(&keep);
    let action: Vec<IntMat> = (0..group.order())
        .map(|g| {
            let full = mat_mul(&proj, &mat_mul(&ambient_action[g], &lift)?)?;
            normalize_hom_matrix(&kept_orders, &kept_orders, &full)
        })
        .collect::<Result<_>>()?;
    let module = GModule::new_unchecked(group.clone(), kept_orders, action)?;
    Ok(Presented { module, lift, proj })
}

/// Present a G-stable lattice `span(columns of basis) ⊇ relations(host)` as
/// a module, with its inclusion into the host.
pub fn submodule_from_lattice(host: &ModRef, basis: &IntMat) -> Result<(ModRef, GMap)> {
    let chnf = col_hnf(basis)?;
    // relations of the submodule: host relations expressed in the basis
    let host_rel = host.relations();
    let mut rel = IntMat::zeros(basis.cols(), host_rel.cols());
    for c in 0..host_rel.cols() {
        let sol = chnf
            .solve(&host_rel.col_vec(c))?
            .ok_or_else(|| Error::Internal("submodule lattice misses host relations".into()))?;
        for r in 0..basis.cols() {
            rel.set(r, c, sol[r]);
        }
    }
    // action restricted to the lattice, in basis coordinates
    let action: Vec<IntMat> = (0..host.group().order())
        .map(|g| {
            let img = mat_mul(host.action(g), basis)?;
            let mut out = IntMat::zeros(basis.cols(), basis.cols());
            for c in 0..basis.cols() {
                let sol = chnf.solve(&img.col_vec(c))?.ok_or_else(|| {
                    Error::Internal("lattice is not stable under the action".into())
                })?;
                for r in 0..basis.cols() {
                    out.set(r, c, sol[r]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let p = normalize_presentation(host.group(), &rel, &action)?;
    let incl_matrix = mat_mul(basis, &p.lift)?;
    let incl = GMap::with_flag(&p.module, host, incl_matrix, true)?;
    Ok((p.module, incl))
}

/// Kernel of an equivariant map, with its inclusion.
pub fn kernel_module(f: &GMap) -> Result<(ModRef, GMap)> {
    if !f.is_equivariant() {
        return Err(Error::NotEquivariant(0));
    }
    let k = f.kernel_lattice()?;
    submodule_from_lattice(f.source(), &k)
}

/// Image of a map as a submodule of the target, with its inclusion.
pub fn image_module(f: &GMap) -> Result<(ModRef, GMap)> {
    if !f.is_equivariant() {
        return Err(Error::NotEquivariant(0));
    }
    let lat = f.image_lattice()?;
    submodule_from_lattice(f.target(), &lat)
}

/// Quotient of the target by the image, with its projection.
pub fn cokernel_module(f: &GMap) -> Result<(ModRef, GMap)> {
    quotient_by(f.target(), f.matrix())
}

/// Quotient of a module by the subgroup generated by the given columns.
pub fn quotient_by(host: &ModRef, sub: &IntMat) -> Result<(ModRef, GMap)> {
    let rel = sub.hcat(&host.relations());
    let p = normalize_presentation(host.group(), &rel, &(0..host.group().order())
        .map(|g| host.action(g).clone())
        .collect::<Vec<_>>())?;
    let proj = GMap::with_flag(host, &p.module, p.proj, true)?;
    Ok((p.module, proj))
}

/// Given an inclusion `incl: S -> M` and `g: X -> M` with image inside `S`,
/// produce the corestriction `X -> S`.
pub fn restrict_to_submodule(incl: &GMap, g: &GMap) -> Result<GMap> {
    if incl.target().as_ref() != g.target().as_ref() {
        return Err(Error::IllFormedMap("corestriction target mismatch"));
    }
    let rel = incl.target().relations();
    let mut out = IntMat::zeros(incl.source().ngens(), g.source().ngens());
    for c in 0..g.source().ngens() {
        let sol = solve_mod(incl.matrix(), &rel, &g.matrix().col_vec(c))?
            .ok_or(Error::NoSolution)?;
        for r in 0..incl.source().ngens() {
            out.set(r, c, sol[r]);
        }
    }
    GMap::new(g.source(), incl.source(), out)
}

/// Given `f: A -> B` and `g: X -> B` with `im g ⊆ im f`, find a (plain)
/// `h: X -> A` with `f ∘ h = g`.
pub fn lift_through(f: &GMap, g: &GMap) -> Result<GMap> {
    if f.target().as_ref() != g.target().as_ref() {
        return Err(Error::IllFormedMap("lift target mismatch"));
    }
    let rel_b = f.target().relations();
    let a_orders = f.source().orders();
    let n_a = f.source().ngens();
    let mut out = IntMat::zeros(n_a, g.source().ngens());
    for c in 0..g.source().ngens() {
        let d = g.source().orders()[c];
        // constrain the solution to satisfy d·x ≡ 0 in A
        let diag: Vec<i64> = a_orders
            .iter()
            .map(|&o| {
                if d == 0 {
                    1
                } else if o == 0 {
                    0
                } else {
                    o / num_integer::gcd(o, d)
                }
            })
            .collect();
        let l = IntMat::from_fn(n_a, n_a, |r, cc| if r == cc { diag[r] } else { 0 });
        let fl = mat_mul(f.matrix(), &l)?;
        let z = solve_mod(&fl, &rel_b, &g.matrix().col_vec(c))?.ok_or(Error::NoSolution)?;
        let x = mat_vec(&l, &z)?;
        for r in 0..n_a {
            out.set(r, c, x[r]);
        }
    }
    GMap::new(g.source(), f.source(), out)
}

/// A Z-linear section of a surjection `p`, i.e. `s` with `p ∘ s = id`.
pub fn z_section(p: &GMap) -> Result<GMap> {
    lift_through(p, &GMap::identity(p.target()))
}

/// Direct sum with deterministic (torsion-first) generator layout.
pub struct SumBasis {
    /// For each summand, the ambient position of each of its generators.
    pub slots: Vec<Vec<usize>>,
}

pub fn direct_sum(group: &GroupRef, parts: &[ModRef]) -> Result<(ModRef, SumBasis)> {
    let group = group.clone();
    for m in parts {
        if m.group() != &group {
            return Err(Error::GroupMismatch);
        }
    }
    let mut layout: Vec<(usize, usize)> = Vec::new();
    for (pi, m) in parts.iter().enumerate() {
        for i in 0..m.ngens() {
            if m.orders()[i] != 0 {
                layout.push((pi, i));
            }
        }
    }
    for (pi, m) in parts.iter().enumerate() {
        for i in 0..m.ngens() {
            if m.orders()[i] == 0 {
                layout.push((pi, i));
            }
        }
    }
    let dim = layout.len();
    let orders: Vec<i64> = layout.iter().map(|&(pi, i)| parts[pi].orders()[i]).collect();
    let pos_of = |pi: usize, i: usize| layout.iter().position(|&x| x == (pi, i)).unwrap();
    let action: Vec<IntMat> = (0..group.order())
        .map(|g| {
            IntMat::from_fn(dim, dim, |r, c| {
                let (pr, ir) = layout[r];
                let (pc, ic) = layout[c];
                if pr == pc {
                    *parts[pr].action(g).get(ir, ic)
                } else {
                    0
                }
            })
        })
        .collect();
    let module = GModule::new_unchecked(group, orders, action)?;
    let mut slots = vec![vec![]; parts.len()];
    for (pi, m) in parts.iter().enumerate() {
        slots[pi] = (0..m.ngens()).map(|i| pos_of(pi, i)).collect();
    }
    Ok((module, SumBasis { slots }))
}

impl SumBasis {
    pub fn injection(&self, sum: &ModRef, parts: &[ModRef], which: usize) -> Result<GMap> {
        let m = IntMat::from_fn(sum.ngens(), parts[which].ngens(), |r, c| {
            if self.slots[which][c] == r {
                1
            } else {
                0
            }
        });
        GMap::new_equivariant(&parts[which], sum, m)
    }

    pub fn projection(&self, sum: &ModRef, parts: &[ModRef], which: usize) -> Result<GMap> {
        let m = IntMat::from_fn(parts[which].ngens(), sum.ngens(), |r, c| {
            if self.slots[which][r] == c {
                1
            } else {
                0
            }
        });
        GMap::new_equivariant(sum, &parts[which], m)
    }
}

/// `M ⊕ (ZG)^k`.
pub fn add_free(m: &ModRef, k: usize) -> Result<(ModRef, SumBasis)> {
    direct_sum(m.group(), &[m.clone(), GModule::regular(m.group(), k)])
}

/// Restriction of scalars to a subgroup (same presentation, fewer action
/// matrices), over the subgroup materialized as a group of its own.
pub fn restrict(m: &ModRef, h: &Subgroup) -> Result<ModRef> {
    let (hg, members) = h.as_group()?;
    let action: Vec<IntMat> = members.iter().map(|&g| m.action(g).clone()).collect();
    GModule::new_unchecked(hg, m.orders().to_vec(), action)
}

/// Split a module into its torsion submodule and lattice quotient.
pub struct TorsionSplit {
    pub torsion: ModRef,
    pub include: GMap,
    pub lattice: ModRef,
    pub project: GMap,
}

pub fn torsion_split(m: &ModRef) -> Result<TorsionSplit> {
    let tors: Vec<usize> = (0..m.ngens()).filter(|&i| m.orders()[i] != 0).collect();
    let free: Vec<usize> = (0..m.ngens()).filter(|&i| m.orders()[i] == 0).collect();
    let t_orders: Vec<i64> = tors.iter().map(|&i| m.orders()[i]).collect();
    let t_action: Vec<IntMat> = (0..m.group().order())
        .map(|g| m.action(g).select_rows(&tors).select_cols(&tors))
        .collect();
    let torsion = GModule::new_unchecked(m.group().clone(), t_orders, t_action)?;
    let incl = IntMat::from_fn(m.ngens(), tors.len(), |r, c| if tors[c] == r { 1 } else { 0 });
    let include = GMap::new_equivariant(&torsion, m, incl)?;
    let f_action: Vec<IntMat> = (0..m.group().order())
        .map(|g| m.action(g).select_rows(&free).select_cols(&free))
        .collect();
    let lattice = GModule::new_unchecked(m.group().clone(), vec![0; free.len()], f_action)?;
    let proj = IntMat::from_fn(free.len(), m.ngens(), |r, c| if free[r] == c { 1 } else { 0 });
    let project = GMap::new_equivariant(m, &lattice, proj)?;
    Ok(TorsionSplit {
        torsion,
        include,
        lattice,
        project,
    })
}

/// The map ZS -> Z sending every point to 1.
pub fn point_sum(gset: &crate::group::GSet) -> Result<GMap> {
    let zs = GModule::permutation(gset);
    let z = GModule::trivial(gset.group());
    GMap::new_equivariant(&zs, &z, IntMat::from_fn(1, gset.size(), |_, _| 1))
}

/// Inclusion of the augmentation kernel into ZS.
pub fn augmentation_kernel_inclusion(gset: &crate::group::GSet) -> Result<GMap> {
    let dl = GModule::augmentation_kernel(gset);
    let zs = GModule::permutation(gset);
    let m = IntMat::from_fn(gset.size(), gset.size() - 1, |r, c| {
        if r == c + 1 {
            1
        } else if r == 0 {
            -1
        } else {
            0
        }
    });
    GMap::new_equivariant(&dl, &zs, m)
}

/// Inclusion of the augmentation ideal into ZG (one copy).
pub fn augmentation_ideal_inclusion(group: &GroupRef) -> Result<GMap> {
    let dg = GModule::augmentation_ideal(group);
    let zg = GModule::regular(group, 1);
    let m = IntMat::from_fn(group.order(), group.order() - 1, |r, c| {
        if r == c + 1 {
            1
        } else if r == 0 {
            -1
        } else {
            0
        }
    });
    GMap::new_equivariant(&dg, &zg, m)
}

/// The augmentation ZG -> Z.
pub fn augmentation_map(group: &GroupRef) -> Result<GMap> {
    let zg = GModule::regular(group, 1);
    let z = GModule::trivial(group);
    GMap::new_equivariant(&zg, &z, IntMat::from_fn(1, group.order(), |_, _| 1))
}

/// Kernel basis of a plain integer matrix in module coordinates; exposed for
/// oracle-style tests.
pub fn matrix_kernel(m: &IntMat) -> Result<IntMat> {
    kernel_basis(m)
}
