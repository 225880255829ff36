// End to end through the public API, starting from the checked-in fixtures.

use std::path::PathBuf;

use bsdkit::compgroup::{tamagawa_number, SpecialFibre};
use bsdkit::fieldtower::{extend_inert, is_inert, subfield_property_check, ExtendOptions, NumberFieldNode};
use bsdkit::model::{MatrixFile, ModelFile};
use bsdkit::periods::{assemble_period, neron_basis_adjust, AdjustOptions, PrimeFactor, DEFAULT_TOLERANCE};
use bsdkit::vanishing::{multiplicity, vanishing_order, Mode};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn model(name: &str) -> ModelFile {
    ModelFile::from_json(&read(name)).unwrap()
}

fn period(model_name: &str, matrix_name: &str, opts: &AdjustOptions) -> (PrimeFactor, BigRational) {
    let m = model(model_name);
    let matrix = MatrixFile::from_json(&read(matrix_name)).unwrap();
    let adj = neron_basis_adjust(&m.charts(Mode::Modified).unwrap(), m.differentials().unwrap(), opts).unwrap();
    let factor = PrimeFactor::from(&adj);
    let result = assemble_period(&matrix.matrix().unwrap(), vec![factor.clone()], matrix.real_components, DEFAULT_TOLERANCE).unwrap();
    (factor, result.omega)
}

#[test]
fn scaled_bases_give_the_same_period() {
    let opts = AdjustOptions::default();
    let (f0, omega) = period("genus2_neron_ready_p3.json", "period_matrix.json", &opts);
    let (f1, omega1) = period("genus2_times_3_p3.json", "period_matrix_times_3.json", &opts);
    let (f2, omega2) = period("genus2_over_3_p3.json", "period_matrix_over_3.json", &opts);
    assert_eq!((f0.a, f0.b), (0, 0));
    assert_eq!((f1.a, f1.b), (0, 2));
    assert_eq!((f2.a, f2.b), (2, 0));
    assert_eq!(f1.w() * BigRational::from_integer(9.into()), f0.w());
    assert_eq!(omega, omega1);
    assert_eq!(omega, omega2);
}

#[test]
fn exhaustive_search_agrees_with_the_subspace() {
    let exhaustive = AdjustOptions { use_subspace: false, ..AdjustOptions::default() };
    for name in ["genus2_times_3_p3.json", "genus2_over_3_p3.json"] {
        let matrix = if name.contains("times") { "period_matrix_times_3.json" } else { "period_matrix_over_3.json" };
        assert_eq!(period(name, matrix, &exhaustive), period(name, matrix, &AdjustOptions::default()));
    }
}

#[test]
fn declared_multiplicity_matches_the_chain() {
    let m = model("multiplicity_two.json");
    let locus = m.locus("G").unwrap();
    assert_eq!(multiplicity(&locus, Mode::Direct).unwrap(), 2);
    assert_eq!(m.special_fibre().unwrap().components[0].multiplicity, 2);
    let f = m.parse_on_component("G", "(x + y)^2 * 2").unwrap();
    assert_eq!(vanishing_order(&f, &locus, Mode::Modified, 16).unwrap().order, 4);
}

#[test]
fn cycle_files_match_the_builder() {
    for n in 2..=5 {
        for (kind, shift) in [("identity", 0), ("rotation", 1)] {
            let from_file = model(&format!("fibres/cycle_{n}_{kind}.json")).special_fibre().unwrap();
            let built = SpecialFibre::cycle(n, shift);
            assert_eq!(tamagawa_number(&from_file).unwrap(), tamagawa_number(&built).unwrap(), "I_{n} {kind}");
            assert_eq!(tamagawa_number(&from_file).unwrap(), BigInt::from(n));
        }
    }
}

#[test]
fn quartic_tower_at_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut node = NumberFieldNode::rationals(3.into()).unwrap();
    for _ in 0..2 {
        node = extend_inert(&node, 2, &ExtendOptions::default(), &mut rng).unwrap().field;
    }
    assert_eq!(node.degree, 4);
    assert_eq!(node.subfields.keys().copied().collect::<Vec<_>>(), vec![1, 2, 4]);
    for s in node.subfields.values() {
        assert_eq!(is_inert(&s.defining_poly, &node.p), Ok(true));
    }
    assert!(subfield_property_check(&node).ok);
}
