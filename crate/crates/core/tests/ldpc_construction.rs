use corrmac_core::ldpc::{build_code, DegreeDistributions, LdpcCode};
use corrmac_core::rng;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn irregular3_rate_and_degree_fidelity() {
    let dd = DegreeDistributions::irregular3();
    let code = build_code(&dd, 4096, 1).unwrap();
    let rate = code.rate();
    assert!((0.497..=0.503).contains(&rate), "rate {rate}");
    assert_eq!(code.num_checks() + code.info_len(), 4096);

    // A single node of degree d moves its edge fraction by d/E, so fidelity
    // is judged against two nodes' worth of edges.
    let e = code.num_edges() as f64;
    for (requested, realized) in [
        (dd.variable(), code.variable_degrees()),
        (dd.check(), code.check_degrees()),
    ] {
        for &(d, f) in requested {
            let count = realized.iter().find(|x| x.0 == d).map_or(0, |x| x.1);
            let frac = (d * count) as f64 / e;
            assert!(
                (frac - f).abs() <= 2.0 * d as f64 / e,
                "degree {d}: {frac} vs {f}"
            );
        }
        let realized_total: usize = realized.iter().map(|&(d, c)| d * c).sum();
        assert_eq!(realized_total as f64, e);
        assert!(realized
            .iter()
            .all(|&(d, _)| requested.iter().any(|x| x.0 == d)));
    }
}

#[test]
fn regular_code_is_exact() {
    let dd = DegreeDistributions::regular(3, 6).unwrap();
    let code = build_code(&dd, 1024, 3).unwrap();
    assert_eq!(code.variable_degrees(), vec![(3, 1024)]);
    assert_eq!(code.check_degrees(), vec![(6, 512)]);
    assert_eq!(code.info_len(), 512);
}

#[test]
fn construction_is_deterministic() {
    let dd = DegreeDistributions::irregular3();
    let a = build_code(&dd, 1024, 77).unwrap();
    let b = build_code(&dd, 1024, 77).unwrap();
    assert_eq!(a.to_alist(), b.to_alist());
    let c = build_code(&dd, 1024, 78).unwrap();
    assert_ne!(a.to_alist(), c.to_alist());
}

#[test]
fn no_double_edges() {
    let code = build_code(&DegreeDistributions::irregular3(), 2048, 2).unwrap();
    for row in code.rows() {
        let mut r = row.clone();
        r.dedup();
        assert_eq!(r.len(), row.len());
    }
}

#[test]
fn alist_round_trip_of_built_code() {
    let code = build_code(&DegreeDistributions::irregular3(), 512, 6).unwrap();
    let back = LdpcCode::from_alist(&code.to_alist()).unwrap();
    assert_eq!(back, code);
}

#[test]
fn all_zero_info_encodes_to_zero() {
    let code = build_code(&DegreeDistributions::irregular3(), 1024, 0).unwrap();
    let cw = code.encode(&vec![0; code.info_len()]).unwrap();
    assert!(cw.iter().all(|&b| b == 0));
}

#[test]
fn random_info_has_zero_syndrome() {
    let code = build_code(&DegreeDistributions::irregular3(), 1024, 4).unwrap();
    let mut r = rng::seeded(0);
    for _ in 0..50 {
        let info: Vec<u8> = (0..code.info_len()).map(|_| r.gen_range(0..=1)).collect();
        let cw = code.encode(&info).unwrap();
        assert!(code.syndrome(&cw).is_empty());
        let sys: Vec<u8> = code.systematic_positions().iter().map(|&v| cw[v]).collect();
        assert_eq!(sys, info);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoder_is_linear(seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let code = build_code(&DegreeDistributions::regular(3, 6).unwrap(), 256, 12).unwrap();
        let l = code.info_len();
        let mut ra = rng::seeded(seed_a);
        let mut rb = rng::seeded(seed_b);
        let a: Vec<u8> = (0..l).map(|_| ra.gen_range(0..=1)).collect();
        let b: Vec<u8> = (0..l).map(|_| rb.gen_range(0..=1)).collect();
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = code.encode(&a).unwrap();
        let eb = code.encode(&b).unwrap();
        let eab = code.encode(&ab).unwrap();
        let sum: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(eab, sum);
    }
}
