//! Envelopes of a finite cyclic module: exact sequences
//! `0 -> μ -> ω -> ω̄ -> 0` with ω cohomologically trivial, ω̄ the lattice
//! quotient of ω, and rank(ω̄) a multiple of |G|.
//!
//! The construction is by exhaustive search: a catalog of candidate
//! lattices, the finite set of Z-split extension classes of each by μ, and
//! a triviality test on every candidate middle term. Failure is reported
//! with the list of tried candidates, never worked around.

use crate::cohomology::{is_cohomologically_trivial, Cochain};
use crate::error::{Error, Result};
use crate::ext::{ExtClassGroup, ZSplitExt};
use crate::gmod::{add_free, direct_sum, GMap, GModule, ModRef};
use crate::group::{GSet, GroupRef};
use crate::homtensor::{dual, tensor};
use crate::linalg::lattice_eq;

#[derive(Clone)]
pub struct Envelope {
    pub ext: ZSplitExt,
    pub w: usize,
    pub lattice_kind: String,
}

impl Envelope {
    pub fn torsion(&self) -> &ModRef {
        self.ext.sub()
    }

    pub fn total(&self) -> &ModRef {
        self.ext.total()
    }

    pub fn lattice(&self) -> &ModRef {
        self.ext.quot()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvelopeStrategy {
    /// `ω = μ ⊕ (ZG)^w`; valid exactly when |μ| is coprime to |G|.
    Coprime { w: usize },
    /// Search the named catalog lattices, each padded by `(ZG)^j` for
    /// `j ≤ pad_max`, over all extension classes.
    Search { catalog: Vec<String>, pad_max: usize },
}

pub fn default_catalog() -> Vec<String> {
    vec![
        "aug".into(),
        "aug_dual".into(),
        "trivial_plus_aug".into(),
        "aug_tensor_aug".into(),
        "aug_tensor_points".into(),
    ]
}

/// Candidate lattices by name; `aug_tensor_points` needs the scenario G-set.
pub fn catalog_lattice(name: &str, group: &GroupRef, gset: Option<&GSet>) -> Result<ModRef> {
    match name {
        "aug" => Ok(GModule::augmentation_ideal(group)),
        "aug_dual" => dual(&GModule::augmentation_ideal(group)),
        "trivial_plus_aug" => Ok(direct_sum(
            group,
            &[GModule::trivial(group), GModule::augmentation_ideal(group)],
        )?
        .0),
        "aug_tensor_aug" => {
            let dg = GModule::augmentation_ideal(group);
            Ok(tensor(&dg, &dg)?.module)
        }
        "aug_tensor_points" => {
            let s = gset.ok_or(Error::MissingGSet)?;
            let dg = GModule::augmentation_ideal(group);
            let ds = GModule::augmentation_kernel(s);
            Ok(tensor(&dg, &ds)?.module)
        }
        "regular" => Ok(GModule::regular(group, 1)),
        _ => Err(Error::ValidationFailed(format!(
            "unknown catalog lattice '{name}'"
        ))),
    }
}

/// Re-check every envelope invariant on a candidate triple.
pub fn validate_envelope(ext: &ZSplitExt) -> Result<usize> {
    let mu = ext.sub();
    let omega = ext.total();
    let bar = ext.quot();
    if !mu.is_finite() {
        return Err(Error::ValidationFailed("torsion module is not finite".into()));
    }
    if !bar.is_lattice() {
        return Err(Error::ValidationFailed("quotient is not a lattice".into()));
    }
    // the torsion of ω is exactly the image of μ
    let ts = crate::gmod::torsion_split(omega)?;
    let torsion_lattice = ts.include.image_lattice()?;
    let mu_image = ext.include.image_lattice()?;
    if !lattice_eq(&torsion_lattice, &mu_image)? {
        return Err(Error::ValidationFailed(
            "included torsion does not equal the Z-torsion of the middle".into(),
        ));
    }
    if !ext.include.is_injective()? {
        return Err(Error::ValidationFailed("torsion does not inject".into()));
    }
    let g = omega.group().order();
    let rank = bar.free_rank();
    if rank % g != 0 {
        return Err(Error::ValidationFailed(format!(
            "lattice rank {rank} is not a multiple of |G| = {g}"
        )));
    }
    let verdict = is_cohomologically_trivial(omega)?;
    if !verdict.trivial {
        return Err(Error::ValidationFailed(format!(
            "middle is not cohomologically trivial, witness {:?}",
            verdict.witness
        )));
    }
    Ok(rank / g)
}

pub fn build_envelope(
    mu: &ModRef,
    strategy: &EnvelopeStrategy,
    gset: Option<&GSet>,
) -> Result<Envelope> {
    if !mu.is_finite() || mu.ngens() != 1 {
        return Err(Error::ValidationFailed(
            "envelope construction expects a finite cyclic module".into(),
        ));
    }
    let group = mu.group().clone();
    match strategy {
        EnvelopeStrategy::Coprime { w } => {
            let order = mu.orders()[0];
            if num_integer::gcd(order, group.order() as i64) != 1 {
                return Err(Error::ValidationFailed(format!(
                    "coprime strategy needs gcd(|mu|, |G|) = 1, got |mu| = {order}, |G| = {}",
                    group.order()
                )));
            }
            let (omega, sb) = add_free(mu, *w)?;
            let zg = GModule::regular(&group, *w);
            let include = sb.injection(&omega, &[mu.clone(), zg.clone()], 0)?;
            let project = sb.projection(&omega, &[mu.clone(), zg.clone()], 1)?;
            let ext = ZSplitExt::new(include, project, None)?;
            let w_got = validate_envelope(&ext)?;
            Ok(Envelope {
                ext,
                w: w_got,
                lattice_kind: format!("regular^{w}"),
            })
        }
        EnvelopeStrategy::Search { catalog, pad_max } => {
            let mut tried: Vec<String> = Vec::new();
            for name in catalog {
                for pad in 0..=*pad_max {
                    let label = if pad == 0 {
                        name.clone()
                    } else {
                        format!("{name}+regular^{pad}")
                    };
                    let base = match catalog_lattice(name, &group, gset) {
                        Ok(l) => l,
                        Err(Error::MissingGSet) => {
                            tried.push(format!("{label} (skipped: no G-set)"));
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let lattice = if pad == 0 { base } else { add_free(&base, pad)?.0 };
                    if lattice.free_rank() % group.order() != 0 {
                        tried.push(format!("{label} (rank {} not divisible)", lattice.free_rank()));
                        continue;
                    }
                    let ecg = ExtClassGroup::new(&lattice, mu)?;
                    let classes = ecg
                        .coh
                        .enumerate_coords(4096)
                        .ok_or_else(|| Error::Internal("extension class group too large".into()))?;
                    for coords in classes {
                        let cocycle: Cochain = ecg.coh.decode(&coords)?;
                        let ext = ecg.module_from_cocycle(&cocycle)?;
                        if is_cohomologically_trivial(ext.total())?.trivial {
                            let w = validate_envelope(&ext)?;
                            return Ok(Envelope {
                                ext,
                                w,
                                lattice_kind: label,
                            });
                        }
                    }
                    tried.push(format!("{label} (no trivial extension class)"));
                }
            }
            Err(Error::NoEnvelopeFound { tried })
        }
    }
}

/// The units of Z/m in ascending order: the automorphisms of a cyclic
/// module of order m.
pub fn units_mod(m: i64) -> Vec<i64> {
    (1..m).filter(|&u| num_integer::gcd(u, m) == 1).collect()
}

/// Multiplication by a unit as an equivariant automorphism of a finite
/// cyclic module.
pub fn unit_automorphism(mu: &ModRef, u: i64) -> Result<GMap> {
    GMap::new_equivariant(
        mu,
        mu,
        crate::linalg::IntMat::from_rows(vec![vec![u]]),
    )
}
