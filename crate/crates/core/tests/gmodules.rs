//! Behavior of the module layer on the standard constructions: ranks,
//! actions, hom/tensor arithmetic, kernels and splits.

use zglat::gmod::*;
use zglat::group::{catalog_group, subgroups, GSet};
use zglat::homtensor::{dual, hom, tensor, HomModule, TensorModule};
use zglat::linalg::{lattice_eq, IntMat};
use zglat::sequence::{Exactness, SequenceSpec};

fn c2_three_points() -> (zglat::group::GroupRef, GSet) {
    let c2 = catalog_group("C2").unwrap();
    let s = GSet::from_table(&c2, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
    (c2, s)
}

#[test]
fn standard_modules_have_documented_shapes() {
    let (c2, s) = c2_three_points();
    let dg = GModule::augmentation_ideal(&c2);
    assert_eq!(dg.free_rank(), 1);
    assert_eq!(*dg.action(1).get(0, 0), -1, "the nonidentity acts by -1");
    let ds = GModule::augmentation_kernel(&s);
    assert_eq!(ds.free_rank(), 2);
    let s3 = catalog_group("S3").unwrap();
    let zg2 = GModule::regular(&s3, 2);
    assert_eq!(zg2.free_rank(), 12);
    assert!(zg2.is_lattice());
}

#[test]
fn tensor_ranks_multiply() {
    let (c2, s) = c2_three_points();
    let dg = GModule::augmentation_ideal(&c2);
    let ds = GModule::augmentation_kernel(&s);
    let l1 = tensor(&dg, &ds).unwrap();
    assert_eq!(l1.module.free_rank(), 2);
    let l2 = tensor(&dg, &l1.module).unwrap();
    assert_eq!(l2.module.free_rank(), 2);
    // sign ⊗ sign = trivial Z
    let sq = tensor(&dg, &dg).unwrap();
    assert_eq!(sq.module.free_rank(), 1);
    assert_eq!(*sq.module.action(1).get(0, 0), 1);
}

#[test]
fn hom_shapes_and_presentation_identity() {
    let (c2, s) = c2_three_points();
    let ds = GModule::augmentation_kernel(&s);
    let mu3 = GModule::cyclic(&c2, 3, &[1, 2]).unwrap();
    let h = hom(&ds, &mu3).unwrap();
    assert_eq!(h.module.invariant_factors(), vec![3, 3]);

    // Hom(mu ⊕ ZG, lattice) and Hom(ZG, lattice) have identical presentations
    let zg = GModule::regular(&c2, 1);
    let mu4 = GModule::cyclic(&c2, 4, &[1, 3]).unwrap();
    let (omega, _) = direct_sum(&c2, &[mu4.clone(), zg.clone()]).unwrap();
    let l1 = tensor(&GModule::augmentation_ideal(&c2), &ds).unwrap().module;
    let a = hom(&omega, &l1).unwrap();
    let b = hom(&zg, &l1).unwrap();
    assert_eq!(a.module.orders(), b.module.orders());
    assert_eq!(
        (0..c2.order()).map(|g| a.module.action(g).clone()).collect::<Vec<_>>(),
        (0..c2.order()).map(|g| b.module.action(g).clone()).collect::<Vec<_>>()
    );
}

#[test]
fn hom_and_tensor_are_functorial() {
    let (c2, s) = c2_three_points();
    let ds = GModule::augmentation_kernel(&s);
    let dg = GModule::augmentation_ideal(&c2);
    let zg = GModule::regular(&c2, 1);
    // f: ZG -> ZG multiplication by (1 + g), g: ΔG -> ZG inclusion
    let norm = zg.norm_matrix().unwrap();
    let f = GMap::new_equivariant(&zg, &zg, norm).unwrap();
    let incl = augmentation_ideal_inclusion(&c2).unwrap();
    let fg = f.compose(&incl).unwrap();

    // post-composition on Hom(ΔS, -): (f ∘ g)_* = f_* ∘ g_*
    let h_dg = hom(&ds, &dg).unwrap();
    let h_zg = hom(&ds, &zg).unwrap();
    let star_incl = HomModule::post_compose(&h_dg, &h_zg, &incl).unwrap();
    let star_f = HomModule::post_compose(&h_zg, &h_zg, &f).unwrap();
    let star_fg = HomModule::post_compose(&h_dg, &h_zg, &fg).unwrap();
    assert!(star_f.compose(&star_incl).unwrap().eq_map(&star_fg));

    // tensor of maps respects composition in the left slot
    let t_dg = tensor(&dg, &ds).unwrap();
    let t_zg = tensor(&zg, &ds).unwrap();
    let id_ds = GMap::identity(&ds);
    let t_incl = TensorModule::tensor_map(&t_dg, &t_zg, &incl, &id_ds).unwrap();
    let t_f = TensorModule::tensor_map(&t_zg, &t_zg, &f, &id_ds).unwrap();
    let t_fg = TensorModule::tensor_map(&t_dg, &t_zg, &fg, &id_ds).unwrap();
    assert!(t_f.compose(&t_incl).unwrap().eq_map(&t_fg));
}

#[test]
fn kernel_of_point_sum_is_the_augmentation_kernel() {
    let (_c2, s) = c2_three_points();
    let p = point_sum(&s).unwrap();
    let (ker, incl) = kernel_module(&p).unwrap();
    assert_eq!(ker.free_rank(), 2);
    let standard = augmentation_kernel_inclusion(&s).unwrap();
    assert!(lattice_eq(&incl.image_lattice().unwrap(), &standard.image_lattice().unwrap()).unwrap());
}

#[test]
fn zero_map_kernel_and_cokernel() {
    let (c2, s) = c2_three_points();
    let ds = GModule::augmentation_kernel(&s);
    let z = GModule::trivial(&c2);
    let f = GMap::zero(&ds, &z).unwrap();
    let (ker, _) = kernel_module(&f).unwrap();
    assert_eq!(ker.free_rank(), ds.free_rank());
    let (cok, _) = cokernel_module(&f).unwrap();
    assert_eq!(cok.free_rank(), 1);
}

#[test]
fn torsion_split_examples() {
    let (c2, _s) = c2_three_points();
    // lattice input: torsion trivial
    let zg = GModule::regular(&c2, 1);
    let ts = torsion_split(&zg).unwrap();
    assert!(ts.torsion.is_zero());
    // Z/3^- ⊕ ZG: torsion of order 3, lattice of rank 2; the sequence is exact
    let mu3 = GModule::cyclic(&c2, 3, &[1, 2]).unwrap();
    let (omega, _) = direct_sum(&c2, &[mu3, zg]).unwrap();
    let ts = torsion_split(&omega).unwrap();
    assert_eq!(ts.torsion.invariant_factors(), vec![3]);
    assert_eq!(ts.lattice.free_rank(), 2);
    let seq = SequenceSpec::new(vec![ts.include.clone(), ts.project.clone()]).unwrap();
    assert_eq!(seq.check_exact().unwrap(), Exactness::Exact);
}

#[test]
fn direct_sums_and_padding() {
    let c2 = catalog_group("C2").unwrap();
    let (zero, _) = direct_sum(&c2, &[]).unwrap();
    assert!(zero.is_zero());
    let dg = GModule::augmentation_ideal(&c2);
    let (padded, _) = add_free(&dg, 2).unwrap();
    assert_eq!(padded.free_rank(), 5);
}

#[test]
fn restriction_examples() {
    let (c2, s) = c2_three_points();
    let ds = GModule::augmentation_kernel(&s);
    let subs = subgroups(&c2);
    // restrict to the full group: same module data
    let full = restrict(&ds, &subs[1]).unwrap();
    assert_eq!(full.orders(), ds.orders());
    // restrict to the trivial subgroup: Z^2 with trivial action
    let triv = restrict(&ds, &subs[0]).unwrap();
    assert_eq!(triv.free_rank(), 2);
    assert_eq!(*triv.action(0).get(0, 0), 1);

    // res ZG from S3 to an order-2 subgroup: free of rank [G:H] over ZH,
    // verified by the permutation-basis regrouping oracle: the H-action
    // matrix is a permutation with no fixed basis vector outside H-orbits
    // of size |H|, i.e. orbits of the basis under H all have size |H|.
    let s3 = catalog_group("S3").unwrap();
    let zg = GModule::regular(&s3, 1);
    let h = subgroups(&s3).into_iter().find(|h| h.order() == 2).unwrap();
    let res = restrict(&zg, &h).unwrap();
    let act = res.action(1);
    let mut seen = vec![false; 6];
    let mut orbits = 0;
    for start in 0..6 {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut x = start;
        loop {
            seen[x] = true;
            let next = (0..6).find(|&r| *act.get(r, x) == 1).unwrap();
            if next == start {
                break;
            }
            x = next;
        }
    }
    assert_eq!(orbits, 3, "free ZH-module of rank [G:H] = 3");
}

#[test]
fn sections_of_z_split_surjections() {
    let (c2, s) = c2_three_points();
    let p = point_sum(&s).unwrap();
    let sec = z_section(&p).unwrap();
    assert!(p.compose(&sec).unwrap().eq_map(&GMap::identity(p.target())));

    // a section of the projection of mu ⊕ ZG onto its lattice quotient
    let mu4 = GModule::cyclic(&c2, 4, &[1, 3]).unwrap();
    let zg = GModule::regular(&c2, 1);
    let (omega, _) = direct_sum(&c2, &[mu4, zg]).unwrap();
    let ts = torsion_split(&omega).unwrap();
    let sec = z_section(&ts.project).unwrap();
    assert!(ts
        .project
        .compose(&sec)
        .unwrap()
        .eq_map(&GMap::identity(&ts.lattice)));
}

#[test]
fn ill_formed_maps_are_rejected() {
    let c2 = catalog_group("C2").unwrap();
    let mu4 = GModule::cyclic(&c2, 4, &[1, 3]).unwrap();
    let z = GModule::trivial(&c2);
    // Z/4 cannot map nontrivially to Z
    let bad = GMap::new(&mu4, &z, IntMat::from_rows(vec![vec![1]]));
    assert!(bad.is_err());
    // equivariance rejection: swap map on a module where the action is not symmetric
    let dg = GModule::augmentation_ideal(&c2);
    let not_equi = GMap::new(&dg, &z, IntMat::from_rows(vec![vec![1]])).unwrap();
    assert!(!not_equi.is_equivariant());
    assert!(GMap::new_equivariant(&dg, &z, IntMat::from_rows(vec![vec![1]])).is_err());
}
