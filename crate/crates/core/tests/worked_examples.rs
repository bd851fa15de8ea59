use apollonian::config::{validate_acc, AccMatrix};
use apollonian::error::Error;
use apollonian::limits::Limits;
use apollonian::matrix::{rat_matrix, Matrix};
use apollonian::moebius::ExactChain;
use apollonian::packing::{generate, strong_integrality_propagation, PackingKind};
use apollonian::rational::{frac, Rat};

fn sorted_rows(m: &Matrix<Rat>) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = m.rows().map(|r| r.to_vec()).collect();
    rows.sort();
    rows
}

#[test]
fn dual_with_one_sign_error() {
    let typo = rat_matrix(&[[0, 0, 0, 1], [1, 1, -1, -1], [1, 1, 1, 1], [0, 4, 0, -1]]);
    assert!(validate_acc(&typo).is_err());

    // With row 3 read as (1, 1, 1, -1) it is D·W up to row order.
    let corrected = rat_matrix(&[[0, 0, 0, 1], [1, 1, -1, -1], [1, 1, 1, -1], [0, 4, 0, -1]]);
    assert!(validate_acc(&corrected).is_ok());
    let dual = AccMatrix::unit_gasket().dual();
    assert_eq!(sorted_rows(&corrected), sorted_rows(dual.matrix()));
    assert_eq!(*dual.matrix(), rat_matrix(&[[0, 4, 0, -1], [1, 1, -1, -1], [1, 1, 1, -1], [0, 0, 0, 1]]));
}

#[test]
fn dilated_strip_is_not_integral() {
    let chain: ExactChain = "d:3/2".parse().unwrap();
    let seed = chain.apply(&AccMatrix::strip()).unwrap();
    assert_eq!(seed.curvatures()[2], frac(2, 3));
    assert!(!seed.is_strongly_integral());

    let p = generate(&seed, PackingKind::Apollonian, 2, &Limits::default()).unwrap();
    assert!(!p.spectrum().all_integral);

    assert!(matches!(
        strong_integrality_propagation(&seed, 2, &Limits::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn seed_files_match_builtins() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let strip = std::fs::read_to_string(format!("{dir}/data/strip.json")).unwrap();
    let gasket = std::fs::read_to_string(format!("{dir}/data/gasket.json")).unwrap();
    assert_eq!(AccMatrix::from_json_str(&strip).unwrap(), AccMatrix::strip());
    assert_eq!(AccMatrix::from_json_str(&gasket).unwrap(), AccMatrix::unit_gasket());
}
