//! The main construction pipeline: transport of a character of
//! `H²(G, Hom(ΔS, μ))` through the connecting isomorphisms and the trace
//! duality to a degree-0 class `[h]`, assembly of the big kernel diagram
//! with `η((x, y)) = p₁(x) + h(y)`, the two explicit 1-cocycles for the top
//! row, and the linkage character of the middle column.

use std::sync::Arc;

use crate::characters::{characters_of, trace_character, Character, TracePairing};
use crate::cohomology::{induced, is_cohomologically_trivial, tate, CohGroup, Cochain};
use crate::envelope::{build_envelope, unit_automorphism, units_mod, Envelope, EnvelopeStrategy};
use crate::error::{Error, Result};
use crate::ext::{connecting, connecting_coeffs, Connecting, ConnectingCoeffs, ZSplitExt};
use crate::gmod::{
    augmentation_ideal_inclusion, augmentation_map, direct_sum, kernel_module,
    restrict_to_submodule, GMap, GModule, ModRef,
};
use crate::group::{GroupRef, GSet};
use crate::homtensor::{hom, tensor, HomModule, TensorModule};
use crate::linalg::{mat_mul, IntMat};
use crate::sequence::SequenceSpec;

/// A full input tuple: the group, the G-set, the finite cyclic coefficient
/// module, an envelope of it, and the derived syzygy modules with their
/// standard covers.
pub struct Scenario {
    pub group: GroupRef,
    pub gset: GSet,
    pub mu: ModRef,
    pub envelope: Envelope,
    pub points: ModRef,
    pub delta_s: ModRef,
    /// `L1 = ΔG ⊗ ΔS` with its tensor basis.
    pub syz1: TensorModule,
    /// `L2 = ΔG ⊗ L1` with its tensor basis.
    pub syz2: TensorModule,
    /// `(1.1)`-shaped cover `0 -> L1 -> ZG⊗ΔS -> ΔS -> 0`.
    pub cover1: ZSplitExt,
    /// `(2.1)`-shaped cover `0 -> L2 -> ZG⊗L1 -> L1 -> 0`; its tensor basis
    /// for `ZG⊗L1` is kept for forming `1 ⊗ h`.
    pub cover2: ZSplitExt,
    pub zg_tensor_syz1: TensorModule,
}

impl Scenario {
    pub fn new(
        group: &GroupRef,
        gset: &GSet,
        mu: &ModRef,
        strategy: &EnvelopeStrategy,
    ) -> Result<Scenario> {
        if group.is_trivial() {
            return Err(Error::TrivialGroup);
        }
        if mu.group() != group || gset.group() != group {
            return Err(Error::GroupMismatch);
        }
        if !mu.is_finite() || mu.ngens() != 1 {
            return Err(Error::ValidationFailed(
                "the coefficient module must be finite cyclic".into(),
            ));
        }
        let envelope = build_envelope(mu, strategy, Some(gset))?;
        let delta_s = GModule::augmentation_kernel(gset);
        let dg = GModule::augmentation_ideal(group);
        let zg = GModule::regular(group, 1);
        let z = GModule::trivial(group);
        let incl_dg = augmentation_ideal_inclusion(group)?;
        let aug = augmentation_map(group)?;

        let syz1 = tensor(&dg, &delta_s)?;
        let l1 = syz1.module.clone();
        let cover1 = {
            let t_zg = tensor(&zg, &delta_s)?;
            let t_z = tensor(&z, &delta_s)?;
            let i = TensorModule::tensor_map(&syz1, &t_zg, &incl_dg, &GMap::identity(&delta_s))?;
            let p = TensorModule::tensor_map(&t_zg, &t_z, &aug, &GMap::identity(&delta_s))?;
            let p = retarget(&p, &delta_s)?;
            ZSplitExt::new(i, p, None)?
        };
        let syz2 = tensor(&dg, &l1)?;
        let zg_tensor_syz1 = tensor(&zg, &l1)?;
        let cover2 = {
            let t_z = tensor(&z, &l1)?;
            let i = TensorModule::tensor_map(&syz2, &zg_tensor_syz1, &incl_dg, &GMap::identity(&l1))?;
            let p = TensorModule::tensor_map(&zg_tensor_syz1, &t_z, &aug, &GMap::identity(&l1))?;
            let p = retarget(&p, &l1)?;
            ZSplitExt::new(i, p, None)?
        };
        Ok(Scenario {
            group: group.clone(),
            gset: gset.clone(),
            mu: mu.clone(),
            envelope,
            points: GModule::permutation(gset),
            delta_s,
            syz1,
            syz2,
            cover1,
            cover2,
            zg_tensor_syz1,
        })
    }

    /// `1 ⊗ -` : L1 -> ZG ⊗ L1.
    pub fn one_tensor(&self) -> Result<GMap> {
        let l1 = &self.syz1.module;
        let t = &self.zg_tensor_syz1;
        let mut m = IntMat::zeros(t.module.ngens(), l1.ngens());
        for j in 0..l1.ngens() {
            let pos = t
                .index_of(0, j)
                .ok_or_else(|| Error::Internal("missing pure tensor slot".into()))?;
            m.set(pos, j, 1);
        }
        GMap::new(l1, &t.module, m)
    }
}

/// Retarget a map onto a module with an identical presentation (used to
/// identify `Z ⊗ X` with `X`).
fn retarget(p: &GMap, target: &ModRef) -> Result<GMap> {
    let old = p.target();
    if old.orders() != target.orders() {
        return Err(Error::Internal("presentations do not match".into()));
    }
    for g in target.group().elements() {
        if old.action(g) != target.action(g) {
            return Err(Error::Internal("presentations do not match".into()));
        }
    }
    GMap::with_flag(p.source(), target, p.matrix().clone(), p.is_equivariant())
}

/// All the cohomological data the theorem pipeline needs, built once per
/// scenario.
pub struct TheoremContext {
    pub sc: Arc<Scenario>,
    /// `∂1 : H¹(G, Hom(L1, μ)) -> H²(G, Hom(ΔS, μ))`.
    pub d1: ConnectingCoeffs,
    /// `∂0' : Ĥ⁰(G, Hom(L1, ω̄)) -> H¹(G, Hom(L1, μ))`.
    pub d0p: ConnectingCoeffs,
    /// `δ0 : Ĥ⁰(G, Hom(ω, L1)) -> H¹(G, Hom(ω, L2))` via `Hom(ω, -)`.
    pub delta0: Connecting,
    /// The trace duality between `Ĥ⁰(G, Hom(ω, L1))` and
    /// `Ĥ⁰(G, Hom(L1, ω̄))`.
    pub pairing: TracePairing,
    pub hom_l1_mu: HomModule,
    pub hom_l1_bar: HomModule,
    pub hom_ds_mu: HomModule,
}

impl TheoremContext {
    pub fn new(sc: Scenario) -> Result<TheoremContext> {
        let sc = Arc::new(sc);
        let l1 = &sc.syz1.module;
        let mu = &sc.mu;
        let env = &sc.envelope;

        let hom_ds_mu = hom(&sc.delta_s, mu)?;
        let hom_mid_mu = hom(sc.cover1.total(), mu)?;
        let hom_l1_mu = hom(l1, mu)?;
        // contravariant Hom(-, μ) of the (1.1) cover
        let pre_p = HomModule::pre_compose(&hom_ds_mu, &hom_mid_mu, &sc.cover1.project)?;
        let pre_i = HomModule::pre_compose(&hom_mid_mu, &hom_l1_mu, &sc.cover1.include)?;
        let d1 = connecting_coeffs(&pre_p, &pre_i, 1)?;

        // covariant Hom(L1, -) of the envelope
        let hom_l1_omega = hom(l1, env.total())?;
        let hom_l1_bar = hom(l1, env.lattice())?;
        let hom_l1_mu2 = hom(l1, mu)?;
        let post_i = HomModule::post_compose(&hom_l1_mu2, &hom_l1_omega, &env.ext.include)?;
        let post_p = HomModule::post_compose(&hom_l1_omega, &hom_l1_bar, &env.ext.project)?;
        let d0p = connecting_coeffs(&post_i, &post_p, 0)?;

        // δ0 from the (2.1) cover under Hom(ω, -)
        let delta0 = connecting(
            &sc.cover2.include,
            &sc.cover2.project,
            env.total(),
            0,
        )?;

        // trace duality: left = Ĥ⁰(Hom(ω, L1)) (= delta0.src), right =
        // Ĥ⁰(Hom(L1, ω̄)) (= d0p.src)
        let free_cols: Vec<usize> = (0..env.total().ngens())
            .filter(|&i| env.total().orders()[i] == 0)
            .collect();
        let pairing = TracePairing::new(
            &delta0.src,
            &delta0.hom_quot,
            &d0p.src,
            &hom_l1_bar,
            &free_cols,
        )?;
        if !pairing.is_perfect()? {
            return Err(Error::NotAnIsomorphism(
                "trace duality between the degree-0 groups is not perfect",
            ));
        }
        Ok(TheoremContext {
            sc,
            d1,
            d0p,
            delta0,
            pairing,
            hom_l1_mu,
            hom_l1_bar,
            hom_ds_mu,
        })
    }

    /// The character space `H²(G, Hom(ΔS, μ))` and all of its characters.
    pub fn epsilon_space(&self) -> &CohGroup {
        &self.d1.dst
    }

    pub fn epsilon_characters(&self) -> Result<Vec<Character>> {
        characters_of(self.epsilon_space())
    }

    /// Transport a character through `(1.2)*, (1.3)*, (2.4), (2.2)`.
    pub fn transport(&self, eps: &Character) -> Result<Transport> {
        let eps1 = eps.precompose(&self.d1.map);
        let eps0 = eps1.precompose(&self.d0p.map);
        let h_class = self
            .pairing
            .invert(&eps0)
            .map_err(|_| Error::TransportFailed)?;
        let h_elem = self.delta0.src.decode(&h_class)?;
        let h_rep = self.delta0.hom_quot.map_of_coords(&h_elem.values[0])?;
        if !h_rep.is_equivariant() {
            return Err(Error::Internal("degree-0 representative is not equivariant".into()));
        }
        let delta_h = self.delta0.map.apply(&h_class)?;
        let eps_ext1 = self.delta0.dst.neg_coords(&delta_h);
        Ok(Transport {
            eps: eps.clone(),
            eps1,
            eps0,
            h_class,
            h_rep,
            eps_ext1,
        })
    }
}

/// The transported data attached to one character.
pub struct Transport {
    pub eps: Character,
    pub eps1: Character,
    pub eps0: Character,
    pub h_class: Vec<i64>,
    pub h_rep: GMap,
    /// Coordinates of `ε^(1) = -δ0([h])` in `H¹(G, Hom(ω, L2))`.
    pub eps_ext1: Vec<i64>,
}

/// The assembled big diagram around `M = ker(η)`.
pub struct BigDiagram {
    /// `C = (ZG ⊗ L1) ⊕ ω`.
    pub total: ModRef,
    pub eta: GMap,
    pub m_module: ModRef,
    pub include_m: GMap,
    /// Top row `0 -> L2 -> M -> ω -> 0` with the explicit section
    /// `s(y) = (-1 ⊗ h(y), y)`.
    pub top: ZSplitExt,
    /// Middle column `0 -> M -> C -> L1 -> 0`.
    pub column: ZSplitExt,
    /// The torsion embedding `μ -> M` through `y ↦ (0, y)`.
    pub torsion_embed: GMap,
    pub inj_cover: GMap,
    pub inj_omega: GMap,
}

pub fn build_m(ctx: &TheoremContext, t: &Transport) -> Result<BigDiagram> {
    let sc = &ctx.sc;
    let grp = &sc.group;
    let omega = ctx.sc.envelope.total().clone();
    let cover = sc.cover2.total().clone(); // ZG ⊗ L1
    let l1 = sc.syz1.module.clone();
    let (total, sb) = direct_sum(grp, &[cover.clone(), omega.clone()])?;
    let parts = [cover.clone(), omega.clone()];
    let inj_cover = sb.injection(&total, &parts, 0)?;
    let inj_omega = sb.injection(&total, &parts, 1)?;
    let proj_cover = sb.projection(&total, &parts, 0)?;
    let proj_omega = sb.projection(&total, &parts, 1)?;

    // η = p1 ∘ proj_cover + h ∘ proj_omega
    let p1_part = mat_mul(sc.cover2.project.matrix(), proj_cover.matrix())?;
    let h_part = mat_mul(t.h_rep.matrix(), proj_omega.matrix())?;
    let eta_matrix = IntMat::from_fn(l1.ngens(), total.ngens(), |r, c| {
        p1_part.get(r, c) + h_part.get(r, c)
    });
    let eta = GMap::new_equivariant(&total, &l1, eta_matrix)?;

    let (m_module, include_m) = kernel_module(&eta)?;

    // L2 -> M through L2 -> ZG⊗L1 -> C
    let l2_in_c = inj_cover.compose(&sc.cover2.include)?;
    let l2_in_m = restrict_to_submodule(&include_m, &l2_in_c)?;
    // p0 : M -> ω
    let p0 = proj_omega.compose(&include_m)?;
    // s(y) = (-1⊗h(y), y)
    let one_tensor = sc.one_tensor()?;
    let minus_th = mat_mul(
        inj_cover.matrix(),
        &mat_mul(one_tensor.matrix(), t.h_rep.matrix())?,
    )?;
    let s_in_c = IntMat::from_fn(total.ngens(), omega.ngens(), |r, c| {
        inj_omega.matrix().get(r, c) - minus_th.get(r, c)
    });
    let s_map = GMap::new(&omega, &total, s_in_c)?;
    let s_in_m = restrict_to_submodule(&include_m, &s_map)?;
    let top = ZSplitExt::new(l2_in_m.clone(), p0.clone(), Some(s_in_m))?;

    // middle row 0 -> ZG⊗L1 -> C -> ω -> 0 and middle column
    // 0 -> M -> C -> L1 -> 0
    let middle_row = SequenceSpec::new(vec![inj_cover.clone(), proj_omega.clone()])?;
    if !middle_row.check_exact()?.is_exact() {
        return Err(Error::DiagramFailure("middle row".into()));
    }
    let column = ZSplitExt::new(include_m.clone(), eta.clone(), None)?;

    // commuting squares of the diagram
    let sq1 = sc.cover2.project.compose(&proj_cover)?;
    let lhs = eta.compose(&inj_cover)?;
    let rhs = sq1.compose(&inj_cover)?;
    if !lhs.eq_map(&rhs) {
        return Err(Error::DiagramFailure("p1/η square".into()));
    }
    if !proj_omega.compose(&include_m)?.eq_map(&p0) {
        return Err(Error::DiagramFailure("p0 square".into()));
    }

    // rank and torsion bookkeeping
    let want_rank = sc.syz2.module.free_rank() + ctx.sc.envelope.lattice().free_rank();
    if m_module.free_rank() != want_rank {
        return Err(Error::DiagramFailure(format!(
            "rank of the kernel: got {}, want {}",
            m_module.free_rank(),
            want_rank
        )));
    }
    if m_module.invariant_factors() != sc.mu.invariant_factors() {
        return Err(Error::DiagramFailure("torsion of the kernel".into()));
    }

    // torsion embedding μ -> M through ω
    let mu_in_c = inj_omega.compose(&ctx.sc.envelope.ext.include)?;
    let torsion_embed = restrict_to_submodule(&include_m, &mu_in_c)?;
    if !torsion_embed.is_injective()? {
        return Err(Error::DiagramFailure("torsion embedding".into()));
    }

    Ok(BigDiagram {
        total,
        eta,
        m_module,
        include_m,
        top,
        column,
        torsion_embed,
        inj_cover,
        inj_omega,
    })
}

/// The two explicit 1-cocycles of the top row: the connecting
/// representative `g ↦ (1⊗h) - g·(1⊗h)` and the section cocycle
/// `g ↦ g·s - s`, both read in `Hom(ω, L2)`.
pub struct ExplicitCocycles {
    pub from_connecting: Cochain,
    pub from_section: Cochain,
    pub pointwise_equal: bool,
    pub same_class: bool,
}

pub fn explicit_cocycles(
    ctx: &TheoremContext,
    t: &Transport,
    diagram: &BigDiagram,
) -> Result<ExplicitCocycles> {
    let sc = &ctx.sc;
    let grp = &sc.group;
    let omega = ctx.sc.envelope.total();
    let zg_l1 = sc.cover2.total();
    let hom_omega_l2 = &ctx.delta0.hom_sub;
    let one_tensor = sc.one_tensor()?;
    let th = one_tensor.compose(&t.h_rep)?; // 1⊗h : ω -> ZG⊗L1
    let n = grp.order();
    let mut values = Vec::with_capacity(n);
    for g in grp.elements() {
        // (1⊗h) - g·(1⊗h)
        let gth = mat_mul(
            zg_l1.action(g),
            &mat_mul(th.matrix(), omega.action(grp.inv(g)))?,
        )?;
        let diff = IntMat::from_fn(gth.rows(), gth.cols(), |r, c| {
            th.matrix().get(r, c) - gth.get(r, c)
        });
        let diff_map = GMap::new(omega, zg_l1, diff)?;
        let pulled = restrict_to_submodule(&sc.cover2.include, &diff_map)?;
        values.push(hom_omega_l2.coords_of_map(&pulled)?);
    }
    let from_connecting = Cochain {
        module: hom_omega_l2.module.clone(),
        degree: 1,
        values,
    };
    // the section cocycle of the top row, transported from Hom(ω, L2-in-M)
    let from_section = top_row_cocycle(ctx, diagram)?;
    let pointwise_equal = from_connecting == from_section;
    let c1 = ctx.delta0.dst.encode(&from_connecting)?;
    let c2 = ctx.delta0.dst.encode(&from_section)?;
    let same_class = c1 == c2;
    Ok(ExplicitCocycles {
        from_connecting,
        from_section,
        pointwise_equal,
        same_class,
    })
}

/// The `g ↦ g·s - s` cocycle of the top row read in `Hom(ω, L2)`.
fn top_row_cocycle(ctx: &TheoremContext, diagram: &BigDiagram) -> Result<Cochain> {
    let grp = &ctx.sc.group;
    let omega = ctx.sc.envelope.total();
    let m = &diagram.m_module;
    let s = &diagram.top.section;
    let mut values = Vec::with_capacity(grp.order());
    for g in grp.elements() {
        let gs = mat_mul(m.action(g), &mat_mul(s.matrix(), omega.action(grp.inv(g)))?)?;
        let diff = IntMat::from_fn(gs.rows(), gs.cols(), |r, c| gs.get(r, c) - s.matrix().get(r, c));
        let diff_map = GMap::new(omega, m, diff)?;
        let pulled = restrict_to_submodule(&diagram.top.include, &diff_map)?;
        values.push(ctx.delta0.hom_sub.coords_of_map(&pulled)?);
    }
    Ok(Cochain {
        module: ctx.delta0.hom_sub.module.clone(),
        degree: 1,
        values,
    })
}

/// Extension class of the top row in `H¹(G, Hom(ω, L2))` coordinates.
pub fn top_row_class(ctx: &TheoremContext, diagram: &BigDiagram) -> Result<Vec<i64>> {
    let c = top_row_cocycle(ctx, diagram)?;
    ctx.delta0.dst.encode(&c)
}

/// Linkage data of an envelope `0 -> M -> C -> L1 -> 0` with a torsion
/// embedding `j: μ -> M`: the character `τ1 ∘ ∂_C^{-1} ∘ j_*` of
/// `H¹(G, Hom(L1, μ))` and its orbit under the units of μ.
pub struct Linkage {
    pub character: Character,
    pub orbit: Vec<Character>,
    pub middle_trivial: bool,
}

pub fn linkage(ctx: &TheoremContext, column: &ZSplitExt, j: &GMap) -> Result<Linkage> {
    let sc = &ctx.sc;
    let l1 = &sc.syz1.module;
    let triv = is_cohomologically_trivial(column.total())?;
    if !triv.trivial {
        return Err(Error::NotAnIsomorphism(
            "linkage needs a cohomologically trivial middle term",
        ));
    }
    let conn = connecting(&column.include, &column.project, l1, 0)?;
    if !conn.map.is_bijective()? {
        return Err(Error::NotAnIsomorphism("the envelope connecting map"));
    }
    let tau1 = trace_character(&conn.src, &conn.hom_quot)?;
    // j_* : H¹(G, Hom(L1, μ)) -> H¹(G, Hom(L1, M))
    let hom_l1_m = hom(l1, column.sub())?;
    let h1_mu = tate(&ctx.hom_l1_mu.module, 1)?;
    let jstar_coeff = HomModule::post_compose(&ctx.hom_l1_mu, &hom_l1_m, j)?;
    let jstar = induced(&jstar_coeff, &h1_mu, &conn.dst)?;
    let orders = h1_mu.coord_orders();
    let mut values = Vec::with_capacity(orders.len());
    for i in 0..orders.len() {
        let mut e = vec![0i64; orders.len()];
        e[i] = 1;
        let v = jstar.apply(&e)?;
        let u = conn.map.preimage(&v)?;
        values.push(tau1.eval(&u));
    }
    let character = Character::new(&orders, values)?;
    let orbit = unit_orbit(ctx, &h1_mu, &character)?;
    Ok(Linkage {
        character,
        orbit,
        middle_trivial: true,
    })
}

/// The orbit of a character of `H¹(G, Hom(L1, μ))` under precomposition
/// with the automorphisms of μ.
pub fn unit_orbit(
    ctx: &TheoremContext,
    h1_mu: &CohGroup,
    chi: &Character,
) -> Result<Vec<Character>> {
    let mu = &ctx.sc.mu;
    let mut orbit = Vec::new();
    for u in units_mod(mu.orders()[0]) {
        let a = unit_automorphism(mu, u)?;
        let astar_coeff = HomModule::post_compose(&ctx.hom_l1_mu, &ctx.hom_l1_mu, &a)?;
        let astar = induced(&astar_coeff, h1_mu, h1_mu)?;
        let member = chi.precompose(&astar);
        if !orbit.contains(&member) {
            orbit.push(member);
        }
    }
    orbit.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    Ok(orbit)
}

/// `n = (|G| - 2)(|S| - 1) + w` for a nontrivial group.
pub fn compute_n(group_order: usize, set_size: usize, w: usize) -> Result<i64> {
    if group_order <= 1 {
        return Err(Error::TrivialGroup);
    }
    Ok((group_order as i64 - 2) * (set_size as i64 - 1) + w as i64)
}

/// `n' = (d(G) - 1)(|S| - 1) + w`.
pub fn compute_n_prime(d: usize, set_size: usize, w: usize) -> i64 {
    (d as i64 - 1) * (set_size as i64 - 1) + w as i64
}

/// One theorem check for one character.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TheoremVerdict {
    pub eps_coords: Vec<i64>,
    pub class_matches: bool,
    pub cocycles_pointwise_equal: bool,
    pub cocycles_same_class: bool,
    pub rank_ok: bool,
    pub torsion_ok: bool,
    pub column_exact: bool,
    pub eps_ext1: Vec<i64>,
}

pub fn theorem_check(ctx: &TheoremContext, eps: &Character, eps_coords: &[i64]) -> Result<(Transport, BigDiagram, TheoremVerdict)> {
    let t = ctx.transport(eps)?;
    let diagram = build_m(ctx, &t)?;
    let top_class = top_row_class(ctx, &diagram)?;
    let class_matches = top_class == t.eps_ext1;
    let cocycles = explicit_cocycles(ctx, &t, &diagram)?;
    let column_exact = SequenceSpec::new(vec![
        diagram.column.include.clone(),
        diagram.column.project.clone(),
    ])?
    .check_exact()?
    .is_exact();
    let verdict = TheoremVerdict {
        eps_coords: eps_coords.to_vec(),
        class_matches,
        cocycles_pointwise_equal: cocycles.pointwise_equal,
        cocycles_same_class: cocycles.same_class,
        rank_ok: diagram.m_module.free_rank()
            == ctx.sc.syz2.module.free_rank() + ctx.sc.envelope.lattice().free_rank(),
        torsion_ok: diagram.m_module.invariant_factors() == ctx.sc.mu.invariant_factors(),
        column_exact,
        eps_ext1: t.eps_ext1.clone(),
    };
    Ok((t, diagram, verdict))
}
