use super::*;
use crate::constructions::{example1, example1_degenerate, example2, example3, FIBRE_SEARCH_DEPTH};

fn pre(bd: &BidoubleData, name: &str) -> Preimage {
    branch_preimage(bd.component(name).unwrap(), bd).unwrap()
}

#[test]
fn example1_l3() {
    let ex = example1();
    let l3 = ex.data.validate().unwrap();
    assert_eq!(l3, ex.cfg.lattice().class(4, &[2, 2, 2, 1, 1, 1]));
}

#[test]
fn example2_l3_and_corruption() {
    let ex = example2();
    assert_eq!(
        ex.data.validate().unwrap(),
        ex.cfg.lattice().class(4, &[2, 2, 2, 1, 1, 1, 1])
    );
    let lat = ex.cfg.lattice();
    let mut l1 = ex.data.line_bundle(1);
    l1 = &l1 + &lat.exceptional(5);
    let bad = BidoubleData::new(lat, ex.data.components().to_vec(), l1, ex.data.line_bundle(2)).unwrap();
    match bad.validate() {
        Err(CoverError::RelationFailure(r)) => {
            assert_eq!(r.len(), 1);
            assert_eq!(r[0].relation, "2L1 = D2 + D3");
            assert_eq!(r[0].residue, 2 * &lat.exceptional(5));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn invariants_of_the_examples() {
    let ex1 = bidouble_invariants(&example1().data, &example1().cfg).unwrap();
    assert_eq!((ex1.chi, ex1.k2_cover, ex1.pg), (1, -1, 0));
    let e2 = example2();
    let ex2 = bidouble_invariants(&e2.data, &e2.cfg).unwrap();
    assert_eq!((ex2.chi, ex2.k2_cover, ex2.pg), (1, -4, 0));
    assert_eq!(ex2.adjoint_h0, [0, 0, 0]);
    let e3 = example3();
    let ex3 = bidouble_invariants(&e3.data, &e3.cfg).unwrap();
    assert_eq!((ex3.chi, ex3.k2_cover, ex3.pg), (1, -2, 0));
}

#[test]
fn example3_derived_line_bundles() {
    let e3 = example3();
    assert_eq!(e3.data.source(), LineBundleSource::Derived);
    let lat = e3.cfg.lattice();
    assert_eq!(e3.data.line_bundle(1), lat.class(4, &[1, 1, 1, 2, 2, 2, 0]));
    assert_eq!(e3.data.line_bundle(2), example2().data.line_bundle(2));
}

#[test]
fn preimages() {
    let e1 = example1();
    let s1 = pre(&e1.data, "S1");
    assert_eq!(s1.branch_degree, 0);
    assert_eq!(s1.shape, PreimageShape::Split { genus: 0, square: -1 });
    assert_eq!(s1.contractions, 2);

    let e3 = example3();
    let e = pre(&e3.data, "e7");
    assert_eq!(e.branch_degree, 4);
    assert_eq!(e.shape, PreimageShape::Irreducible { genus: 1, square: -1 });
    let d2 = pre(&e3.data, "Delta2bar");
    assert_eq!(d2.branch_degree, 2);
    assert_eq!(d2.shape, PreimageShape::Irreducible { genus: 0, square: -2 });
    assert_eq!(d2.contractions, 0);

    let e2 = example2();
    assert_eq!(pre(&e2.data, "Delta2bar").contractions, 2);
}

#[test]
fn contraction_counts() {
    assert_eq!(contractions(&example1().data).unwrap().1, 8);
    assert_eq!(contractions(&example2().data).unwrap().1, 10);
    assert_eq!(contractions(&example3().data).unwrap().1, 8);
}

#[test]
fn full_reports() {
    let r1 = example1().report().unwrap();
    assert_eq!((r1.k2_minimal, r1.pg, r1.q), (7, 0, 0));
    assert_eq!(r1.double_fibres, Some(5));
    assert_eq!((r1.bicanonical_degree, r1.involution_index), (2, Some(1)));

    let r2 = example2().report().unwrap();
    assert_eq!((r2.k2_minimal, r2.chi, r2.pg), (6, 1, 0));
    assert_eq!(r2.double_fibres, Some(5));
    assert_eq!(r2.involution_index, Some(1));

    let r3 = example3().report().unwrap();
    assert_eq!((r3.k2_cover, r3.contractions, r3.k2_minimal), (-2, 8, 6));
    assert_eq!(r3.double_fibres, Some(5));
}

#[test]
fn example2_bicanonical() {
    let e2 = example2();
    let b = bicanonical_decomposition(&e2.data, &e2.cfg, 7).unwrap();
    assert_eq!((b.invariant, b.characters), (6, [1, 0, 0]));
    assert_eq!((b.degree, b.involution), (2, Some(1)));
    assert!(matches!(
        bicanonical_decomposition(&e2.data, &e2.cfg, 8),
        Err(CoverError::PluriGenusMismatch { total: 7, expected: 8 })
    ));
}

#[test]
fn degeneration_drops_k2() {
    let base = example1().report().unwrap();
    let deg = example1_degenerate(0).unwrap();
    deg.data.validate().unwrap();
    let r = deg.report().unwrap();
    assert_eq!(r.k2_minimal, base.k2_minimal - 1);
    assert_eq!((r.chi, r.pg), (base.chi, base.pg));
    assert_eq!(r.double_fibres, Some(4));
    assert_eq!(r.involution_index, Some(1));
}

#[test]
fn degenerate_fibre_through_the_point_is_simple() {
    let deg = example1_degenerate(0).unwrap();
    let count = count_double_fibres(&deg.data, &deg.pencil, &deg.cfg, FIBRE_SEARCH_DEPTH).unwrap();
    let n = deg.cfg.len();
    let through: Vec<&FibreMember> = count
        .members
        .iter()
        .filter(|m| m.components.iter().any(|c| c.name == format!("e{n}")))
        .collect();
    assert_eq!(through.len(), 1);
    assert_eq!(through[0].multiplicity, 1);
    assert!(through[0].components.iter().any(|c| c.branch == Some(3)));
}

#[test]
fn resolve_needs_three_branches() {
    let ex = example1();
    let cfg = crate::geometry::PointConfiguration::standard_quadrilateral(false, Some(0));
    assert!(matches!(
        ex.data.resolve_111(&cfg, ["f2", "f1", "f1'"]),
        Err(CoverError::NotTripleIncidence { .. })
    ));
    assert!(matches!(
        ex.data.resolve_111(&ex.cfg, ["f2", "f3", "f1"]),
        Err(CoverError::MissingGeneralPoint { .. })
    ));
    assert!(matches!(
        ex.data.resolve_111(&cfg, ["S1", "f3", "f1"]),
        Err(CoverError::RigidThroughGeneralPoint(_))
    ));
}

#[test]
fn fibre_multiplicity_rule() {
    let e1 = example1();
    let cat = e1.cfg.catalogue();
    let comp = |n: &str, m, b| FibreComponent {
        name: n.into(),
        class: cat.class(n),
        multiplicity: m,
        branch: b,
    };
    let member = [comp("S1", 1, Some(1)), comp("S4", 1, Some(3)), comp("e1", 2, None)];
    assert_eq!(fibre_multiplicity(&member, &e1.pencil).unwrap(), 2);
    let e2 = example2();
    let cat2 = e2.cfg.catalogue();
    let comp2 = |n: &str, m, b| FibreComponent {
        name: n.into(),
        class: cat2.class(n),
        multiplicity: m,
        branch: b,
    };
    let member = [
        comp2("Delta2bar", 1, Some(3)),
        comp2("Delta3bar", 1, Some(3)),
        comp2("e7", 2, None),
    ];
    assert_eq!(fibre_multiplicity(&member, &e2.pencil).unwrap(), 2);
    assert!(matches!(
        fibre_multiplicity(&member[..2], &e2.pencil),
        Err(CoverError::FibreSumMismatch { .. })
    ));
}

#[test]
fn pencil_must_have_square_zero() {
    let e1 = example1();
    let bad = e1.cfg.catalogue().class("S1");
    assert!(matches!(
        count_double_fibres(&e1.data, &bad, &e1.cfg, 4),
        Err(CoverError::NotAPencil(_))
    ));
}

#[test]
fn duplicate_and_nonreduced_components() {
    let e1 = example1();
    let lat = e1.cfg.lattice();
    let mut comps = e1.data.components().to_vec();
    comps.push(comps[2].clone());
    assert!(matches!(
        BidoubleData::with_derived_line_bundles(lat, comps),
        Err(CoverError::DuplicateComponent(_))
    ));
    let mut comps = e1.data.components().to_vec();
    let mut s = comps[2].clone();
    s.name = "S1 again".into();
    comps.push(s);
    assert!(matches!(
        BidoubleData::with_derived_line_bundles(lat, comps),
        Err(CoverError::RepeatedRigidCurve { .. })
    ));
    let mut comps = e1.data.components().to_vec();
    comps[0].multiplicity = 2;
    assert!(matches!(
        BidoubleData::with_derived_line_bundles(lat, comps),
        Err(CoverError::NonReduced { .. })
    ));
}

#[test]
fn document_round_trip() {
    let e2 = example2();
    let doc = e2.data.to_document();
    let json = serde_json::to_string(&doc).unwrap();
    let back: CoverDocument = serde_json::from_str(&json).unwrap();
    assert_eq!(back.into_data().unwrap(), e2.data);
}

#[test]
fn numeric_identities() {
    let lat = crate::lattice::BlowupLattice::new(6);
    assert_eq!(double_cover_chi(&lat.zero()), 2);
    // L = l - e1 - e2: L^2 = -1, KL = -1
    let l = lat.class(1, &[1, 1]);
    assert_eq!(l.square() + l.canonical_degree(), -2);
    assert_eq!(double_cover_chi(&l), 1);
    let ids = numeri_identities(-4);
    assert_eq!((ids.k_b0, ids.b0_square), (8, -4));
    assert_eq!(hyperplane_invariants(-4, ids), (12, 0, 7));
    assert_eq!(etale_double(1, 6), (2, 12));
    assert!(!slope_check(12, 2, 3).holds);
    let s = slope_check(24, 2, 3);
    assert!(s.holds);
    assert_eq!(s.margin, 8);
}
