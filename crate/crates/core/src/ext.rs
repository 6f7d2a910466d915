//! Z-split short exact sequences of G-modules, connecting homomorphisms,
//! the extension-class / 1-cocycle correspondence, pushouts and splicing.
//!
//! The global sign convention: the connecting map sends a degree-0 class
//! `[a]` to the 1-cocycle `g ↦ g·ã - ã`, and the extension class of
//! `0 -> X -> M -> Y -> 0` with Z-section `s` is the class of `g ↦ g·s - s`
//! read in `Hom(Y, X)`.

use crate::cohomology::{tate, CohGroup, CohMap, Cochain};
use crate::error::{Error, Result};
use crate::gmod::{direct_sum, restrict_to_submodule, z_section, GMap, GModule, ModRef};
use crate::homtensor::{hom, HomModule};
use crate::linalg::{mat_mul, solve_mod, IntMat};
use crate::sequence::{Exactness, SequenceSpec};

/// A Z-split extension `0 -> X -> M -> Y -> 0` carrying a chosen Z-level
/// section of the projection.
#[derive(Clone)]
pub struct ZSplitExt {
    pub include: GMap,
    pub project: GMap,
    pub section: GMap,
}

impl ZSplitExt {
    /// Validate exactness and the section property (a section is computed
    /// when not supplied; failure to find one means the sequence is not
    /// Z-split).
    pub fn new(include: GMap, project: GMap, section: Option<GMap>) -> Result<ZSplitExt> {
        if !include.is_equivariant() {
            return Err(Error::NotEquivariant(0));
        }
        if !project.is_equivariant() {
            return Err(Error::NotEquivariant(0));
        }
        let seq = SequenceSpec::new(vec![include.clone(), project.clone()])?;
        match seq.check_exact()? {
            Exactness::Exact => {}
            other => {
                return Err(Error::DiagramFailure(format!(
                    "extension sequence not exact: {other:?}"
                )))
            }
        }
        let section = match section {
            Some(s) => s,
            None => z_section(&project).map_err(|_| {
                Error::DiagramFailure("no Z-level section: sequence is not Z-split".into())
            })?,
        };
        let ps = project.compose(&section)?;
        if !ps.eq_map(&GMap::identity(project.target())) {
            return Err(Error::DiagramFailure("section does not split the projection".into()));
        }
        Ok(ZSplitExt {
            include,
            project,
            section,
        })
    }

    pub fn sub(&self) -> &ModRef {
        self.include.source()
    }

    pub fn total(&self) -> &ModRef {
        self.include.target()
    }

    pub fn quot(&self) -> &ModRef {
        self.project.target()
    }

    /// The 1-cocycle `g ↦ g·s - s` valued in `Hom(Y, X)`, as a cochain over
    /// the hom module.
    pub fn class_cocycle(&self, hyx: &HomModule) -> Result<Cochain> {
        let grp = self.total().group().clone();
        let s = &self.section;
        let mut values = Vec::with_capacity(grp.order());
        for g in grp.elements() {
            // g·s = ρ_M(g) S ρ_Y(g^{-1})
            let gs = mat_mul(
                self.total().action(g),
                &mat_mul(s.matrix(), self.quot().action(grp.inv(g)))?,
            )?;
            let diff = IntMat::from_fn(gs.rows(), gs.cols(), |r, c| {
                gs.get(r, c) - s.matrix().get(r, c)
            });
            let diff_map = GMap::new(self.quot(), self.total(), diff)?;
            let pulled = restrict_to_submodule(&self.include, &diff_map)?;
            values.push(hyx.coords_of_map(&pulled)?);
        }
        Ok(Cochain {
            module: hyx.module.clone(),
            degree: 1,
            values,
        })
    }
}

/// The hom-module data for reading `H^1(G, Hom(Y, X))` classes.
pub struct ExtClassGroup {
    pub hom: HomModule,
    pub coh: CohGroup,
}

impl ExtClassGroup {
    pub fn new(quot: &ModRef, sub: &ModRef) -> Result<ExtClassGroup> {
        let hom = hom(quot, sub)?;
        let coh = tate(&hom.module, 1)?;
        Ok(ExtClassGroup { hom, coh })
    }

    /// Extension class of a Z-split extension with matching end modules.
    pub fn extension_class(&self, ext: &ZSplitExt) -> Result<Vec<i64>> {
        let c = ext.class_cocycle(&self.hom)?;
        self.coh.encode(&c)
    }

    /// Build the extension `X ⊕ Y` with action twisted by the 1-cocycle:
    /// `g·(x, y) = (g x + c(g)(g y), g y)`; its extension class is the class
    /// of `c` under the pinned convention.
    pub fn module_from_cocycle(&self, c: &Cochain) -> Result<ZSplitExt> {
        let x = &self.hom.dst;
        let y = &self.hom.src;
        if c.module.as_ref() != self.hom.module.as_ref() || c.degree != 1 {
            return Err(Error::IllFormedMap("cocycle lives in the wrong module"));
        }
        if let Some((g, h)) = c.cocycle_failure()? {
            return Err(Error::NotACocycle { g, h });
        }
        let grp = x.group().clone();
        let nx = x.ngens();
        let ny = y.ngens();
        // torsion-first layout: x-torsion, y-torsion, x-free, y-free
        let mut layout: Vec<(bool, usize)> = Vec::new();
        for (is_x, m) in [(true, x), (false, y)] {
            for i in 0..m.ngens() {
                if m.orders()[i] != 0 {
                    layout.push((is_x, i));
                }
            }
        }
        for (is_x, m) in [(true, x), (false, y)] {
            for i in 0..m.ngens() {
                if m.orders()[i] == 0 {
                    layout.push((is_x, i));
                }
            }
        }
        let orders: Vec<i64> = layout
            .iter()
            .map(|&(is_x, i)| if is_x { x.orders()[i] } else { y.orders()[i] })
            .collect();
        let pos_x: Vec<usize> = (0..nx)
            .map(|i| layout.iter().position(|&p| p == (true, i)).unwrap())
            .collect();
        let pos_y: Vec<usize> = (0..ny)
            .map(|i| layout.iter().position(|&p| p == (false, i)).unwrap())
            .collect();
        let action: Vec<IntMat> = grp
            .elements()
            .map(|g| {
                let cg = self.hom.matrix_of_coords(c.value1(g));
                let twist = mat_mul(&cg, y.action(g))?;
                let mut m = IntMat::zeros(layout.len(), layout.len());
                for r in 0..nx {
                    for cc in 0..nx {
                        m.set(pos_x[r], pos_x[cc], *x.action(g).get(r, cc));
                    }
                    for cc in 0..ny {
                        m.set(pos_x[r], pos_y[cc], *twist.get(r, cc));
                    }
                }
                for r in 0..ny {
                    for cc in 0..ny {
                        m.set(pos_y[r], pos_y[cc], *y.action(g).get(r, cc));
                    }
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        let total = GModule::new(grp.clone(), orders, action)?;
        let incl = IntMat::from_fn(layout.len(), nx, |r, c| if pos_x[c] == r { 1 } else { 0 });
        let proj = IntMat::from_fn(ny, layout.len(), |r, c| if pos_y[r] == c { 1 } else { 0 });
        let sect = IntMat::from_fn(layout.len(), ny, |r, c| if pos_y[c] == r { 1 } else { 0 });
        let include = GMap::new_equivariant(x, &total, incl)?;
        let project = GMap::new_equivariant(&total, y, proj)?;
        let section = GMap::new(y, &total, sect)?;
        ZSplitExt::new(include, project, Some(section))
    }

    /// Split extension (zero cocycle).
    pub fn split_extension(&self) -> Result<ZSplitExt> {
        self.module_from_cocycle(&Cochain::zero(&self.hom.module, 1))
    }

    /// Find an explicit equivalence `M1 -> M2` restricting to the identity
    /// on X and inducing the identity on Y; exists iff the classes agree.
    pub fn equivalence(&self, e1: &ZSplitExt, e2: &ZSplitExt) -> Result<Option<GMap>> {
        let c1 = e1.class_cocycle(&self.hom)?;
        let c2 = e2.class_cocycle(&self.hom)?;
        let diff = c1.sub(&c2)?;
        let Some(u0) = self.coh.coboundary_preimage(&diff)? else {
            return Ok(None);
        };
        // u with c1 - c2 = g·u - u; phi(x, y) = (x + u(y), y) transported
        // through the two presentations via the sections/inclusions.
        let u = self.hom.matrix_of_coords(&u0.values[0]);
        // phi = i2 ∘ (pull back to X) ... assembled on generators of M1:
        // m = i1(x) + s1(y) decomposition: y = p1(m), x = i1^{-1}(m - s1(p1(m)))
        let m1 = e1.total();
        let p1m = e1.project.matrix();
        let s1m = e1.section.matrix();
        let sp = mat_mul(s1m, p1m)?;
        let resid = IntMat::from_fn(m1.ngens(), m1.ngens(), |r, c| {
            (if r == c { 1 } else { 0 }) - sp.get(r, c)
        });
        let resid_map = GMap::new(m1, m1, resid)?;
        let xpart = restrict_to_submodule(&e1.include, &resid_map)?; // M1 -> X
        // phi = i2 ∘ (x + u(y)) + s2 ∘ y
        let uy = mat_mul(&u, p1m)?;
        let x_plus_uy = IntMat::from_fn(xpart.matrix().rows(), m1.ngens(), |r, c| {
            xpart.matrix().get(r, c) + uy.get(r, c)
        });
        let lift = mat_mul(e2.include.matrix(), &x_plus_uy)?;
        let stot = mat_mul(e2.section.matrix(), p1m)?;
        let phi_m = IntMat::from_fn(lift.rows(), lift.cols(), |r, c| {
            lift.get(r, c) + stot.get(r, c)
        });
        let phi = GMap::new_equivariant(m1, e2.total(), phi_m)?;
        // sanity: the equivalence commutes with the structure maps
        if !phi.compose(&e1.include)?.eq_map(&e2.include)
            || !e2.project.compose(&phi)?.eq_map(&e1.project)
        {
            return Err(Error::Internal("equivalence does not commute".into()));
        }
        if !phi.is_isomorphism()? {
            return Err(Error::Internal("equivalence is not bijective".into()));
        }
        Ok(Some(phi))
    }
}

/// Connecting homomorphism of a short exact coefficient sequence
/// `0 -> A -> B -> C -> 0` of G-modules: `Ĥ^r(G, C) -> Ĥ^{r+1}(G, A)` by
/// the lift-differential-pullback zig-zag, under the pinned sign
/// convention.
pub struct ConnectingCoeffs {
    pub include: GMap,
    pub project: GMap,
    pub src: CohGroup,
    pub dst: CohGroup,
    pub map: CohMap,
}

pub fn connecting_coeffs(i: &GMap, p: &GMap, degree: i8) -> Result<ConnectingCoeffs> {
    if i.target().as_ref() != p.source().as_ref() {
        return Err(Error::IllFormedMap("connecting: maps do not compose"));
    }
    if !(-1..=1).contains(&degree) {
        return Err(Error::UnsupportedDegree(degree));
    }
    let seq = SequenceSpec::new(vec![i.clone(), p.clone()])?;
    match seq.check_exact()? {
        Exactness::Exact => {}
        Exactness::NotExact { node, .. } | Exactness::NotAComplex { node, .. } => {
            return Err(Error::HomNotExact(node))
        }
        Exactness::NotComposable { node } => return Err(Error::HomNotExact(node)),
    }
    let sub = i.source().clone();
    let quot = p.target().clone();
    let src = tate(&quot, degree)?;
    let dst = tate(&sub, degree + 1)?;
    let grp = sub.group().clone();
    let n = grp.order();
    let mid = i.target().clone();
    let mid_rel = mid.relations();
    let lift = |v: &[i64]| -> Result<Vec<i64>> {
        solve_mod(p.matrix(), &quot.relations(), v)?
            .ok_or_else(|| Error::Internal("lift through surjection failed".into()))
    };
    let pull = |v: &[i64]| -> Result<Vec<i64>> {
        solve_mod(i.matrix(), &mid_rel, v)?
            .map(|x| sub.reduce(&x))
            .ok_or_else(|| Error::Internal("pullback through injection failed".into()))
    };
    let mut matrix = IntMat::zeros(dst.dim(), src.dim());
    for (col, b) in src.basis()?.iter().enumerate() {
        let out = match degree {
            0 => {
                let x = lift(&b.values[0])?;
                let mut values = Vec::with_capacity(n);
                for g in 0..n {
                    let gx = mid.act(g, &x)?;
                    values.push(pull(&crate::linalg::vec_sub(&gx, &x)?)?);
                }
                Cochain {
                    module: sub.clone(),
                    degree: 1,
                    values,
                }
            }
            1 => {
                let x: Vec<Vec<i64>> = b
                    .values
                    .iter()
                    .map(|v| lift(v))
                    .collect::<Result<_>>()?;
                let mut values = Vec::with_capacity(n * n);
                for g in 0..n {
                    for h in 0..n {
                        let mut v = mid.act(g, &x[h])?;
                        v = crate::linalg::vec_sub(&v, &x[grp.mul(g, h)])?;
                        v = crate::linalg::vec_add(&v, &x[g])?;
                        values.push(pull(&v)?);
                    }
                }
                Cochain {
                    module: sub.clone(),
                    degree: 2,
                    values,
                }
            }
            -1 => {
                let x = lift(&b.values[0])?;
                let nx = crate::linalg::mat_vec(&mid.norm_matrix()?, &x)?;
                Cochain {
                    module: sub.clone(),
                    degree: 0,
                    values: vec![pull(&nx)?],
                }
            }
            _ => unreachable!(),
        };
        let coords = dst.encode(&out)?;
        for (r, &v) in coords.iter().enumerate() {
            matrix.set(r, col, v);
        }
    }
    let map = CohMap {
        src_orders: src.coord_orders(),
        dst_orders: dst.coord_orders(),
        matrix,
    };
    Ok(ConnectingCoeffs {
        include: i.clone(),
        project: p.clone(),
        src,
        dst,
        map,
    })
}

/// Connecting homomorphism of `Hom(T, -)` applied to a short exact
/// coefficient sequence `0 -> A -> B -> C -> 0`:
/// `Ĥ^r(G, Hom(T, C)) -> Ĥ^{r+1}(G, Hom(T, A))`. Fails with `HomNotExact`
/// when `Hom(T, -)` does not keep the sequence exact.
pub struct Connecting {
    pub hom_sub: HomModule,
    pub hom_mid: HomModule,
    pub hom_quot: HomModule,
    pub src: CohGroup,
    pub dst: CohGroup,
    pub map: CohMap,
}

pub fn connecting(i: &GMap, p: &GMap, t: &ModRef, degree: i8) -> Result<Connecting> {
    if i.target().as_ref() != p.source().as_ref() {
        return Err(Error::IllFormedMap("connecting: maps do not compose"));
    }
    let hom_sub = hom(t, i.source())?;
    let hom_mid = hom(t, i.target())?;
    let hom_quot = hom(t, p.target())?;
    let istar = HomModule::post_compose(&hom_sub, &hom_mid, i)?;
    let pstar = HomModule::post_compose(&hom_mid, &hom_quot, p)?;
    let inner = connecting_coeffs(&istar, &pstar, degree)?;
    Ok(Connecting {
        hom_sub,
        hom_mid,
        hom_quot,
        src: inner.src,
        dst: inner.dst,
        map: inner.map,
    })
}

/// Pushout of an extension along `f: X -> X'`.
pub struct Pushout {
    pub ext: ZSplitExt,
    /// The canonical map from the original total module into the pushout.
    pub from_total: GMap,
}

pub fn pushout(ext: &ZSplitExt, f: &GMap) -> Result<Pushout> {
    if !f.is_equivariant() {
        return Err(Error::NotEquivariant(0));
    }
    if f.source().as_ref() != ext.sub().as_ref() {
        return Err(Error::IllFormedMap("pushout map has the wrong source"));
    }
    let xp = f.target();
    let m = ext.total();
    let grp = m.group().clone();
    let (sum, sb) = direct_sum(&grp, &[xp.clone(), m.clone()])?;
    let inj_x = sb.injection(&sum, &[xp.clone(), m.clone()], 0)?;
    let inj_m = sb.injection(&sum, &[xp.clone(), m.clone()], 1)?;
    // antidiagonal image of X: (f(x), -i(x))
    let nx = ext.sub().ngens();
    let anti = IntMat::from_fn(sum.ngens(), nx, |r, c| {
        let a = mat_at(inj_x.matrix(), f.matrix(), r, c);
        let b = mat_at(inj_m.matrix(), ext.include.matrix(), r, c);
        a - b
    });
    let (p, proj, lift) = quotient_with_lift(&sum, &anti)?;
    let include = proj.compose(&inj_x)?;
    let from_total = proj.compose(&inj_m)?;
    // projection to Y factors the map (x', m) ↦ p(m)
    let q = ext.project.compose(&sb.projection(&sum, &[xp.clone(), m.clone()], 1)?)?;
    let pm = mat_mul(q.matrix(), &lift)?;
    let project = GMap::with_flag(&p, ext.quot(), pm, true)?;
    let section = from_total.compose(&ext.section)?;
    let ext_out = ZSplitExt::new(include, project, Some(section))?;
    Ok(Pushout {
        ext: ext_out,
        from_total,
    })
}

fn mat_at(outer: &IntMat, inner: &IntMat, r: usize, c: usize) -> i64 {
    // (outer ∘ inner)[r, c] for small compositions
    (0..inner.rows()).map(|k| outer.get(r, k) * inner.get(k, c)).sum()
}

/// Quotient returning the lift matrix alongside the projection.
fn quotient_with_lift(host: &ModRef, sub: &IntMat) -> Result<(ModRef, GMap, IntMat)> {
    let rel = sub.hcat(&host.relations());
    let actions: Vec<IntMat> = (0..host.group().order())
        .map(|g| host.action(g).clone())
        .collect();
    let p = crate::gmod::normalize_presentation(host.group(), &rel, &actions)?;
    let proj = GMap::with_flag(host, &p.module, p.proj, true)?;
    Ok((p.module, proj, p.lift))
}

/// Splice `0 -> A -> B -> C -> 0` and `0 -> C -> D -> E -> 0` into the
/// 4-term sequence `0 -> A -> B -> D -> E -> 0`.
pub fn splice(s1: &ZSplitExt, s2: &ZSplitExt) -> Result<SequenceSpec> {
    if s1.quot().as_ref() != s2.sub().as_ref() {
        return Err(Error::BoundaryMismatch);
    }
    let middle = s2.include.compose(&s1.project)?;
    SequenceSpec::new(vec![s1.include.clone(), middle, s2.project.clone()])
}
