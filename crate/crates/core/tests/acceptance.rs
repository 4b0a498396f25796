//! The acceptance gate: eleven end-to-end criteria, one test per
//! criterion, each printing a single `[acceptance] criterion N: PASS`
//! line (run with `--nocapture` to see them alongside the test names).
//! Wall-clock ceilings are asserted, not just hoped for.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use tcore::radu::{
    cusp_min_value, delta_star_check, verify_claim, CongruenceClaim, DeltaStarTuple,
    ExponentVector, Verdict,
};
use tcore::{cores, density, eta};

fn assert_within(start: Instant, limit_secs: u64, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(limit_secs),
        "{what} took {elapsed:?}, over the {limit_secs}s ceiling"
    );
}

#[test]
fn criterion_01_series_matches_brute_force_oracle() {
    let start = Instant::now();
    for t in 1u64..=8 {
        let series = cores::generating_series(t, 26, None).unwrap();
        for n in 0u32..=25 {
            let counted = cores::count_oracle(t, n).unwrap();
            assert_eq!(
                series.coeff(n as usize).unwrap(),
                BigInt::from(counted),
                "t = {t}, n = {n}"
            );
        }
    }
    assert_within(start, 60, "criterion 1");
    println!("[acceptance] criterion 1: PASS — series coefficients equal the hook-walk oracle for t ≤ 8, n ≤ 25");
}

#[test]
fn criterion_02_three_core_parity_rule() {
    let start = Instant::now();
    let series = cores::generating_series(3, 2001, Some(2)).unwrap();
    let residues = series.residues().unwrap();
    for n in 0u64..=2000 {
        let odd = cores::three_core_parity_is_odd(n);
        assert_eq!(residues[n as usize] == 1, odd, "n = {n}");
    }
    assert_within(start, 5, "criterion 2");
    println!("[acceptance] criterion 2: PASS — a_3 parity matches the quadratic-solution rule through n = 2000");
}

#[test]
fn criterion_03_classical_congruences() {
    let start = Instant::now();
    for (t, r, u) in [(5u64, 4usize, 5u64), (7, 5, 7), (11, 6, 11)] {
        let order = t as usize * 200 + r + 1;
        let series = cores::generating_series(t, order, Some(u)).unwrap();
        for n in 0..=200usize {
            let value = series.coeff(t as usize * n + r).unwrap();
            assert!(value.is_zero(), "a_{t}({t}·{n}+{r}) ≢ 0 mod {u}");
        }
    }
    assert_within(start, 10, "criterion 3");
    println!("[acceptance] criterion 3: PASS — a_5(5n+4), a_7(7n+5), a_11(11n+6) vanish mod 5, 7, 11 through n = 200");
}

#[test]
fn criterion_04_mod_three_families() {
    let start = Instant::now();
    // (p, seed, published orbit); bound column per prime below
    let table: &[(u64, u64, &[u64])] = &[
        (7, 3, &[3, 15, 18]),
        (7, 8, &[8, 11, 17]),
        (11, 3, &[3, 12, 24, 27, 30]),
        (11, 11, &[11, 20, 26, 29, 32]),
        (13, 3, &[3, 9, 15, 18, 33, 36]),
        (13, 7, &[7, 10, 16, 22, 28, 31]),
        (17, 10, &[10, 16, 19, 25, 28, 34, 46, 49]),
        (17, 14, &[14, 20, 23, 26, 35, 38, 41, 47]),
        (19, 7, &[7, 16, 19, 22, 25, 31, 37, 52, 55]),
        (19, 14, &[14, 17, 26, 35, 38, 41, 44, 50, 56]),
        (23, 3, &[3, 9, 27, 30, 33, 36, 42, 48, 51, 60, 63]),
        (23, 16, &[16, 22, 31, 34, 43, 46, 52, 58, 61, 64, 67]),
    ];
    let bound_column = |p: u64| match p {
        5 => 4,
        7 => 8,
        11 => 20,
        13 => 28,
        17 => 48,
        19 => 60,
        23 => 88,
        _ => unreachable!(),
    };
    for &(p, t, published) in table {
        let report = verify_claim(&CongruenceClaim { p, m: 3 * p, t, u: 3 }).unwrap();
        assert_eq!(report.verdict, Verdict::Proven, "({p}, {t})");
        assert_eq!(report.p_set, published, "orbit of ({p}, {t})");
        assert!(report.bound.unwrap() <= bound_column(p), "bound for ({p}, {t})");
    }
    // p = 5: the published list {6,10,12,13} is the union of the two
    // orbits of 6 and 10 (no square multiplier connects them); both
    // congruences are proven separately and the union matches.
    let mut union = BTreeSet::new();
    for t in [6u64, 10] {
        let report = verify_claim(&CongruenceClaim { p: 5, m: 15, t, u: 3 }).unwrap();
        assert_eq!(report.verdict, Verdict::Proven, "(5, {t})");
        assert!(report.bound.unwrap() <= bound_column(5));
        union.extend(report.p_set);
    }
    assert_eq!(union.into_iter().collect::<Vec<_>>(), vec![6, 10, 12, 13]);
    assert_within(start, 60, "criterion 4");
    println!("[acceptance] criterion 4: PASS — all seven mod-3 families proven; orbits match the published tables (the p = 5 list being the union of two orbits); bounds within the published column");
}

#[test]
fn criterion_05_mod_five_families() {
    let start = Instant::now();
    let claims: &[(u64, u64)] = &[(7, 4), (11, 4), (11, 7), (17, 4)];
    for &(p, t) in claims {
        let report = verify_claim(&CongruenceClaim { p, m: 5 * p, t, u: 5 }).unwrap();
        assert_eq!(report.verdict, Verdict::Proven, "({p}, {t})");
        if (p, t) == (7, 4) {
            assert_eq!(report.p_set, vec![4, 17, 22, 24, 29, 32]);
        }
    }
    assert_within(start, 60, "criterion 5");
    println!("[acceptance] criterion 5: PASS — mod-5 families for p = 7, 11, 17 proven; the p = 7 orbit matches");
}

#[test]
fn criterion_06_assorted_step_congruences() {
    let start = Instant::now();
    // (p, m, t, published bound where the table lists one)
    let rows: &[(u64, u64, u64, Option<i64>)] = &[
        (5, 8, 3, Some(2)),
        (7, 25, 3, Some(11)),
        (7, 25, 8, Some(11)),
        (11, 44, 9, Some(29)),
        (13, 12, 3, None), // see the note below
        (13, 64, 25, Some(20)),
        (19, 76, 3, Some(89)),
    ];
    for &(p, m, t, published) in rows {
        let report = verify_claim(&CongruenceClaim { p, m, t, u: 3 }).unwrap();
        assert_eq!(report.verdict, Verdict::Proven, "({p}, {m}, {t})");
        if let Some(bound) = published {
            assert_eq!(report.bound, Some(bound), "bound for ({p}, {m}, {t})");
        }
    }
    // The published table lists 5 for (13, 12), but ν = 499/6 there: a
    // cutoff of 5 would not certify anything.  The engine derives ⌊ν⌋ = 83
    // (the closed form agrees) and proves the congruence at that depth.
    let report = verify_claim(&CongruenceClaim { p: 13, m: 12, t: 3, u: 3 }).unwrap();
    assert_eq!(report.bound, Some(83));
    assert_eq!(report.closed_form_bound, Some(83));
    println!(
        "[acceptance] note: the (13, 12) bound is 83 here (exact ν = {}); the published 5 is not derivable from ν",
        report.nu.unwrap()
    );
    assert_within(start, 120, "criterion 6");
    println!("[acceptance] criterion 6: PASS — all seven assorted-step congruences proven; five of the six published bounds reproduced exactly, the sixth documented above");
}

#[test]
fn criterion_07_witness_certification() {
    let start = Instant::now();
    for (alpha, m, j) in [(0u32, 1u64, 1u32), (1, 1, 1), (1, 5, 1), (0, 7, 2)] {
        let core = 3u64.pow(alpha) * m;
        let (b, _) = eta::mod2_witness(alpha, m, j).unwrap();
        let b_report = b.certify();
        assert!(b_report.holomorphic, "mod-2 witness ({alpha},{m},{j})");
        assert_eq!(b.level(), 64 * 3u64.pow(alpha + 1) * m);
        assert_eq!(
            b_report.weight,
            BigRational::from(BigInt::from((core - 1) / 2 + (1 << (j - 1)))),
            "mod-2 weight ({alpha},{m},{j})"
        );
        let (d, _) = eta::mod3_witness(alpha, m, j).unwrap();
        let d_report = d.certify();
        assert!(d_report.holomorphic, "mod-3 witness ({alpha},{m},{j})");
        assert_eq!(d.level(), 8 * 3u64.pow(alpha + 2) * m);
        assert_eq!(
            d_report.weight,
            BigRational::from(BigInt::from((core - 1) / 2 + 3u64.pow(j))),
            "mod-3 weight ({alpha},{m},{j})"
        );
    }
    // prime-power witnesses: (t, j) with every relevant p^1 || t
    for (p, t, j) in [(5u64, 5u64, 1u32), (5, 35, 1), (7, 35, 1)] {
        let (w, _) = eta::prime_power_witness(p, 1, j, t).unwrap();
        let report = w.certify();
        assert!(report.holomorphic, "prime-power witness p={p}, t={t}");
        assert_eq!(w.level(), 64 * 9 * t);
        let expected_weight = (t + p.pow(j) * (p - 1) - 1) / 2;
        assert_eq!(
            report.weight,
            BigRational::from(BigInt::from(expected_weight)),
            "prime-power weight p={p}, t={t}"
        );
    }
    assert_within(start, 30, "criterion 7");
    println!("[acceptance] criterion 7: PASS — all witness quotients certify holomorphic with the closed-form levels and weights");
}

#[test]
fn criterion_08_witness_expansions_match_core_series() {
    let start = Instant::now();
    let order = 24 * 50 + 24 + 1;

    let (b, b_shift) = eta::mod2_witness(1, 1, 1).unwrap();
    assert_eq!(b_shift, 8);
    let b_series = b.expand(b_shift, order, Some(4)).unwrap();
    let a3 = cores::generating_series(3, 51, Some(4)).unwrap();
    for n in 0..=50usize {
        assert_eq!(
            b_series.coeff(24 * n + 8).unwrap(),
            a3.coeff(n).unwrap(),
            "mod-2 witness at n = {n}"
        );
    }

    let (d, d_shift) = eta::mod3_witness(1, 1, 1).unwrap();
    assert_eq!(d_shift, 8);
    let d_series = d.expand(d_shift, order, Some(9)).unwrap();
    let a3_mod9 = cores::generating_series(3, 51, Some(9)).unwrap();
    for n in 0..=50usize {
        assert_eq!(
            d_series.coeff(24 * n + 8).unwrap(),
            a3_mod9.coeff(n).unwrap(),
            "mod-3 witness at n = {n}"
        );
    }

    let (w, w_shift) = eta::prime_power_witness(5, 1, 1, 5).unwrap();
    assert_eq!(w_shift, 24); // t² − 1
    let w_series = w.expand(w_shift, order, Some(25)).unwrap();
    let a5 = cores::generating_series(5, 51, Some(25)).unwrap();
    for n in 0..=50usize {
        assert_eq!(
            w_series.coeff(24 * n + 24).unwrap(),
            a5.coeff(n).unwrap(),
            "prime-power witness at n = {n}"
        );
    }
    assert_within(start, 60, "criterion 8");
    println!("[acceptance] criterion 8: PASS — witness q-expansions reproduce a_3 mod 4, a_3 mod 9, a_5 mod 25 on the arithmetic progression 24n + shift for n ≤ 50");
}

#[test]
fn criterion_09_cusp_minima_nonnegative_for_random_matrices() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let pairs: &[(u64, u64)] = &[(3, 9), (5, 15), (13, 64)];
    let mut checked = 0u32;
    while checked < 200 {
        let a: i64 = rng.gen_range(-10_000..=10_000);
        let c: i64 = rng.gen_range(-10_000..=10_000);
        // (a, c) is the first column of a unimodular matrix iff coprime
        if num_integer::gcd(a.unsigned_abs(), c.unsigned_abs()) != 1 {
            continue;
        }
        for &(p, m) in pairs {
            let vector = ExponentVector::t_core(p).unwrap();
            let value = cusp_min_value(&vector, m, a, c);
            assert!(
                !value.is_negative(),
                "negative cusp minimum at column ({a}, {c}) for (p, m) = ({p}, {m})"
            );
        }
        checked += 1;
    }
    assert_within(start, 10, "criterion 9");
    println!("[acceptance] criterion 9: PASS — cusp minima non-negative for 200 random unimodular columns across three (p, m) pairs");
}

#[test]
fn criterion_10_density_trend_and_frozen_values() {
    let start = Instant::now();
    let checkpoints = [2_000usize, 10_000, 20_000];
    // exact counts at X = 10⁴, frozen from the series pass itself
    let frozen: &[(u32, u64, u32, u64)] = &[
        (3, 2, 1, 9_885),
        (3, 3, 1, 6_042),
        (5, 5, 1, 4_776),
        (7, 7, 1, 4_350),
        (5, 5, 2, 1_431),
    ];
    for &(t, p, j, hits_at_ten_thousand) in frozen {
        let table = density::measure_density(t, p, j, &checkpoints).unwrap();
        let densities = table.densities();
        assert!(
            densities[2] > densities[0],
            "({t}, {p}^{j}): density did not grow from X = 2·10³ to 2·10⁴"
        );
        assert_eq!(
            table.hits[1], hits_at_ten_thousand,
            "({t}, {p}^{j}) at X = 10⁴"
        );
    }
    assert_within(start, 120, "criterion 10");
    println!("[acceptance] criterion 10: PASS — densities rise from X = 2·10³ to 2·10⁴ and the frozen X = 10⁴ counts reproduce");
}

#[test]
fn criterion_11_delta_star_instances() {
    let start = Instant::now();
    for (m, p, level, t) in [(15u64, 5u64, 30u64, 6u64), (21, 7, 21, 3), (64, 13, 26, 25)] {
        let tuple = DeltaStarTuple {
            m,
            level,
            vector: ExponentVector::t_core(p).unwrap(),
            t,
        };
        let report = delta_star_check(&tuple);
        assert!(report.member, "({m}, {p}, {level}, {t}): {report:?}");
    }
    assert_within(start, 1, "criterion 11");
    println!("[acceptance] criterion 11: PASS — the three admissibility instances are Δ* members");
}
