//! Acceptance criteria 1-12. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use apollonian::circle::FloatRow;
use apollonian::config::{lift_ccm_to_acc, validate_acc, AccMatrix};
use apollonian::forms::{a_matrix, form_determinants, j0, Form4};
use apollonian::geometry::Interior;
use apollonian::group::{
    count_normal_forms, enumerate_normal_forms, generator_matrix, row_sum_invariants, word_to_matrix, Generator,
    GroupElement,
};
use apollonian::limits::Limits;
use apollonian::matrix::Matrix;
use apollonian::moebius::{
    apply_moebius, conjugation_matrix, dilation_matrix, inversion_matrix, lorentz_defect, moebius_to_autqw,
    random_element, total_orientation_f64, translation_matrix, validity_defect, wilker_lorentz_map,
};
use apollonian::packing::{
    calibrate, check_disjoint_interiors, check_no_crossing, coset_orbits, disjoint_interiors,
    estimate_residual_dimension, generate, infinity_in_residual, no_crossing, residual_membership,
    strong_integrality_propagation, tangency_points, Packing, PackingKind,
};
use apollonian::rational::{frac, int, Rat};
use apollonian::schottky::{parabolic_fixed_points, sample_limit_set, verify_relations};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Float identities between matrices.
const MATRIX_TOL: f64 = 1e-9;
/// Geometric overlap and crossing checks.
const GEOMETRY_TOL: f64 = 1e-9;
/// Residual-set membership.
const RESIDUAL_TOL: f64 = 1e-6;
const DIMENSION_BAND: (f64, f64) = (1.25, 1.36);
const CALIBRATION_TOL: f64 = 0.01;
const LIMIT_FRACTION: f64 = 0.99;

type Outcome = (bool, String);

fn limits() -> Limits {
    Limits::default()
}

fn packing(seed: &AccMatrix, kind: PackingKind, depth: usize) -> Packing {
    generate(seed, kind, depth, &limits()).expect("packing within caps")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn c1_forms() -> Outcome {
    let (ok, dt) = timed(|| {
        let ql = Form4::lorentz();
        let qd = Form4::descartes();
        let qw = Form4::wilker();
        let (dd, _, dw) = form_determinants();
        let qd2 = qd.matrix() * qd.matrix();
        ql.matrix().congruence(&j0()) == *qd.matrix()
            && ql.matrix().congruence(&a_matrix()) == *qw.matrix()
            && dd == int(-1)
            && dw == int(-64)
            && qd2.is_identity()
    });
    (ok, format!("exact identities hold, {dt:?}"))
}

fn c2_configs() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, w) in [("strip", AccMatrix::strip()), ("gasket", AccMatrix::unit_gasket())] {
        let class = validate_acc(w.matrix());
        let det = w.matrix().det();
        let lifted = lift_ccm_to_acc(&w.curvature_center());
        let round = lifted.as_ref().map(|l| *l == w).unwrap_or(false);
        ok &= class.is_ok() && (det == int(8) || det == int(-8)) && round;
        notes.push(format!("{name}: det {det}, lift round-trip {round}"));
    }
    (ok, notes.join("; "))
}

fn coxeter_relations_hold() -> bool {
    let id = GroupElement::identity();
    let m = |g: Generator| generator_matrix(g);
    for i in 0..4 {
        let s = m(Generator::new(i, false));
        let t = m(Generator::new(i, true));
        if &s * &s != id || &t * &t != id {
            return false;
        }
        for j in (0..4).filter(|&j| j != i) {
            let tj = m(Generator::new(j, true));
            let st = &s * &tj;
            let ts = &tj * &s;
            if &st * &st != id || &ts * &ts != id {
                return false;
            }
        }
    }
    true
}

fn c3_generators() -> Outcome {
    let (ok, dt) = timed(|| {
        let d: Matrix<Rat> = apollonian::forms::duality_operator();
        let all_automorph = Generator::ALL.iter().all(|&g| generator_matrix(g).is_descartes_automorph());
        let transposes = Generator::APOLLONIAN
            .iter()
            .all(|&g| generator_matrix(g).matrix().transpose() == *generator_matrix(g.partner()).matrix());
        let duality = Generator::APOLLONIAN.iter().all(|&g| {
            let s = generator_matrix(g).matrix().to_rational();
            let conj = &(&d.transpose() * &s) * &d;
            conj == generator_matrix(g.partner()).matrix().to_rational()
        });
        all_automorph && transposes && duality && coxeter_relations_hold()
    });
    (ok, format!("exact relations hold, {dt:?}"))
}

fn c4_normal_forms() -> Outcome {
    let expected = [8usize, 44, 224, 1124];
    let mut ok = true;
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(GroupElement::identity());
    let mut total = 1;
    let mut min_size: Option<BigInt> = None;
    for (n, &want) in (1..=4).zip(&expected) {
        let words = enumerate_normal_forms(n, &limits()).expect("within cap");
        ok &= words.len() == want && count_normal_forms(n) == BigInt::from(want);
        for w in &words {
            seen.insert(word_to_matrix(w));
            total += 1;
            match row_sum_invariants(w) {
                Ok(r) => {
                    if min_size.as_ref().is_none_or(|m| r.size < *m) {
                        min_size = Some(r.size.clone());
                    }
                }
                Err(v) => {
                    ok = false;
                    eprintln!("row-sum violation: {v}");
                }
            }
        }
    }
    let distinct = seen.len() == total;
    let min_size = min_size.unwrap_or_default();
    ok &= distinct && min_size >= BigInt::from(8);
    (ok, format!("counts {expected:?}, {total} matrices distinct: {distinct}, min f(U) {min_size}"))
}

fn c5_counts() -> Outcome {
    let want = [4usize, 8, 20, 56, 164, 488, 1460];
    let (got, dt) = timed(|| {
        (0..=6)
            .map(|m| packing(&AccMatrix::unit_gasket(), PackingKind::Apollonian, m).circle_count())
            .collect::<Vec<_>>()
    });
    (got == want, format!("{got:?} in {dt:?}"))
}

fn c6_integrality() -> Outcome {
    let strip = strong_integrality_propagation(&AccMatrix::strip(), 4, &limits());
    let gasket = strong_integrality_propagation(&AccMatrix::unit_gasket(), 4, &limits());
    let spectrum = packing(&AccMatrix::unit_gasket(), PackingKind::Apollonian, 2).spectrum();
    let want: Vec<Rat> = [-1, 2, 2, 3, 3, 6, 6, 15].iter().map(|&b| int(b)).collect();
    let ok = strip.is_ok() && gasket.is_ok() && spectrum.all_integral && spectrum.contains_multiset(&want);
    let configs = |r: &apollonian::error::Result<apollonian::packing::IntegralityReport>| {
        r.as_ref().map(|r| r.configs_checked.to_string()).unwrap_or_else(|e| e.to_string())
    };
    (
        ok,
        format!(
            "super orbits integral ({} + {} configs), depth-2 spectrum contains -1,2,2,3,3,6,6,15",
            configs(&strip),
            configs(&gasket)
        ),
    )
}

fn c7_geometry() -> Outcome {
    let mut ok = true;
    let mut pairs = 0;
    for seed in [AccMatrix::strip(), AccMatrix::unit_gasket()] {
        let r = check_disjoint_interiors(&packing(&seed, PackingKind::Apollonian, 4)).expect("apollonian");
        ok &= r.passed();
        pairs += r.pairs_checked;
        for kind in [PackingKind::DualApollonian, PackingKind::SuperApollonian] {
            let r = check_no_crossing(&packing(&seed, kind, 3)).expect("non-apollonian");
            ok &= r.passed();
            pairs += r.pairs_checked;
        }
    }
    // Negative controls: grow one circle by 1%, or move a circle off its spot.
    let p = packing(&AccMatrix::unit_gasket(), PackingKind::Apollonian, 2);
    let mut rows = p.float_rows();
    let words: Vec<String> = p.circle_records().map(|c| c.word.to_string()).collect();
    let k = rows.iter().position(|r| r.curvature > 0.0).expect("a bounded circle");
    rows[k] = rows[k].with_scaled_radius(1.01);
    let overlap_caught = !disjoint_interiors(&rows, &words, GEOMETRY_TOL).passed();

    let s = packing(&AccMatrix::unit_gasket(), PackingKind::SuperApollonian, 2);
    let mut srows = s.float_rows();
    let swords: Vec<String> = s.circle_records().map(|c| c.word.to_string()).collect();
    let k = srows
        .iter()
        .position(|r| r.curvature > 0.0 && matches!(r.interior(), Interior::Disk { .. }))
        .expect("a disk");
    let (cx, cy) = srows[k].center().expect("finite");
    srows[k] = FloatRow::from_circle(cx + 0.3 * srows[k].radius(), cy, srows[k].radius());
    let crossing_caught = !no_crossing(&srows, &swords, GEOMETRY_TOL).passed();

    ok &= overlap_caught && crossing_caught;
    (
        ok,
        format!("{pairs} pairs clean; controls caught: overlap {overlap_caught}, crossing {crossing_caught}"),
    )
}

fn c8_cosets() -> Outcome {
    let r = coset_orbits(&AccMatrix::unit_gasket(), 2, &limits()).expect("within cap");
    let ok = r.orbits == 48 && r.ordered_oriented == 48 * r.unordered && r.orbits_agree;
    (
        ok,
        format!("{} orbits, {} ordered-oriented = 48 × {}", r.orbits, r.ordered_oriented, r.unordered),
    )
}

fn c9_dimension() -> Outcome {
    let (est, dt) = timed(|| estimate_residual_dimension(&packing(&AccMatrix::unit_gasket(), PackingKind::Apollonian, 9)));
    let cal = calibrate(1.5).expect("synthetic fit");
    let cal_ok = (cal.slope - 1.5).abs() <= CALIBRATION_TOL;
    match est {
        Ok(e) => {
            let in_band = (DIMENSION_BAND.0..=DIMENSION_BAND.1).contains(&e.exponent);
            (
                in_band && cal_ok,
                format!(
                    "exponent {:.4} (band {:?}, window [{:.1}, {})), calibration {:.4}, {dt:?}",
                    e.exponent, DIMENSION_BAND, e.fit.window.0, e.fit.window.1, cal.slope
                ),
            )
        }
        Err(e) => (false, format!("estimate failed: {e}")),
    }
}

fn c10_moebius() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let d0 = AccMatrix::unit_gasket();
    let mut hom = 0.0f64;
    let mut defect = 0.0f64;
    let mut orient = true;
    let mut lorentz_ok = true;
    for _ in 0..50 {
        let g = random_element(&mut rng);
        let h = random_element(&mut rng);
        let lhs = moebius_to_autqw(&g.compose(&h)).expect("invertible");
        let rhs = &moebius_to_autqw(&g).expect("invertible") * &moebius_to_autqw(&h).expect("invertible");
        hom = hom.max(lhs.max_abs_diff(&rhs) / (1.0 + rhs.max_abs()));
        let image = apply_moebius(&g, &d0).expect("valid image");
        defect = defect.max(validity_defect(&image));
        orient &= total_orientation_f64(&image) == d0.total_orientation();
        let l = wilker_lorentz_map(&g).expect("holomorphic");
        let scale = l.max_abs();
        lorentz_ok &= lorentz_defect(&l) / (1.0 + scale * scale) < MATRIX_TOL
            && (l.det() - 1.0).abs() < 1e-6 * scale.powi(4)
            && l[(0, 0)] > 0.0;
    }
    let row = |r: [i64; 4], m: &Matrix<Rat>| (&apollonian::matrix::rat_matrix(&[r]) * m).row(0).to_vec();
    let ints = |v: [i64; 4]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
    let exact = row([1, 1, 1, 1], &translation_matrix(&int(1), &int(0))) == ints([4, 1, 2, 1])
        && row([0, 2, 0, 1], &translation_matrix(&int(0), &int(1))) == ints([4, 2, 0, 3])
        && row([1, 1, 1, 1], &dilation_matrix(&int(2), &int(1), &int(0)).unwrap())
            == vec![int(2), frac(1, 2), int(1), int(1)]
        && row([0, 2, 0, 1], &dilation_matrix(&int(1), &int(0), &int(1)).unwrap()) == ints([0, 2, -1, 0])
        && row([0, 2, 0, 1], &conjugation_matrix()) == ints([0, 2, 0, -1])
        && row([2, 0, 0, 1], &inversion_matrix()) == ints([0, 2, 0, 1]);
    let ok = hom < MATRIX_TOL && defect < MATRIX_TOL && orient && lorentz_ok && exact;
    (
        ok,
        format!(
            "homomorphism {hom:.1e}, validity {defect:.1e}, orientation kept {orient}, exact rows {exact}, Lorentz {lorentz_ok}"
        ),
    )
}

fn c11_schottky() -> Outcome {
    let rel = verify_relations().expect("exact arithmetic");
    let traces_ok = rel.traces == [int(2), int(2), int(-2)].map(|t| num_complex::Complex::new(t, int(0)));
    let sample = sample_limit_set(6, &parabolic_fixed_points().expect("parabolic"), &limits()).expect("within cap");
    let rows = packing(&AccMatrix::unit_gasket(), PackingKind::Apollonian, 8).float_rows();
    let hits = sample
        .points
        .iter()
        .filter(|(z, _)| residual_membership((z.re, z.im), &rows, RESIDUAL_TOL))
        .count();
    let frac_in = hits as f64 / sample.len() as f64;
    let ok = traces_ok && rel.passed() && frac_in >= LIMIT_FRACTION;
    (
        ok,
        format!(
            "traces 2,2,-2: {traces_ok}; relations: {} (first one as a composition of inversions); limit samples {hits}/{}",
            rel.passed(),
            sample.len()
        ),
    )
}

fn c12_dual_tangencies() -> Outcome {
    let d0 = AccMatrix::unit_gasket();
    let dual_packing = packing(&d0, PackingKind::DualApollonian, 3);
    let pts = tangency_points(&dual_packing);
    let rows = packing(&d0.dual(), PackingKind::Apollonian, 8).float_rows();
    let bad = pts
        .points
        .iter()
        .filter(|&&p| !residual_membership(p, &rows, RESIDUAL_TOL))
        .count();
    let inf_ok = !pts.includes_infinity || infinity_in_residual(&rows);
    (
        bad == 0 && inf_ok,
        format!(
            "{} tangency points ({} finite), {bad} outside, infinity ok {inf_ok}",
            pts.len(),
            pts.points.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("form identities", c1_forms),
        ("configuration validity and lift", c2_configs),
        ("generators and Coxeter relations", c3_generators),
        ("normal-form counts and row sums", c4_normal_forms),
        ("Apollonian circle counts", c5_counts),
        ("integrality", c6_integrality),
        ("packing geometry", c7_geometry),
        ("48 coset orbits", c8_cosets),
        ("dimension estimate", c9_dimension),
        ("Möbius action", c10_moebius),
        ("Schottky group", c11_schottky),
        ("dual tangencies in residual set", c12_dual_tangencies),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!("criterion {}: {} - {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
