use corrmac_core::exit::{
    bsc_flip, connection_output_density, convolve_channel, gaussian_consistent_pdf, Grid,
    NumericPdf, MIN_MC_SAMPLES,
};
use corrmac_core::jcd::ConnectionNode;
use corrmac_core::rng;
use proptest::prelude::*;
use rand::Rng;

fn cdf(p: &NumericPdf) -> Vec<f64> {
    let mut acc = 0.0;
    p.mass()
        .iter()
        .map(|m| {
            acc += m;
            acc
        })
        .collect()
}

/// Pushes a density through a monotone scalar map bin by bin.
fn push_forward(p: &NumericPdf, f: impl Fn(f64) -> f64) -> NumericPdf {
    let g = p.grid();
    let mut mass = vec![0.0; g.bins()];
    for (i, &m) in p.mass().iter().enumerate() {
        mass[g.index_of(f(g.center(i)))] += m;
    }
    let total: f64 = mass.iter().sum();
    NumericPdf::new(g, mass.iter().map(|m| m / total).collect()).unwrap()
}

#[test]
fn cascade_of_flips_is_one_flip() {
    let g = Grid::default();
    for (mu, rho) in [(1.0, 0.95), (6.0, 0.8), (30.0, 0.6)] {
        let p = gaussian_consistent_pdf(mu, g).unwrap();
        let twice = bsc_flip(&bsc_flip(&p, rho), rho);
        let once = bsc_flip(&p, rho * rho + (1.0 - rho) * (1.0 - rho));
        for (a, b) in twice.mass().iter().zip(once.mass()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}

#[test]
fn two_source_density_matches_single_flip_reduction() {
    let g = Grid::default();
    let rho = 0.95;
    let pf = rho * rho + (1.0 - rho) * (1.0 - rho);
    let node = ConnectionNode::new(2, rho).unwrap();
    let input = gaussian_consistent_pdf(3.0, g).unwrap();
    let mc = connection_output_density(std::slice::from_ref(&input), rho, 2, 200_000, 1).unwrap();
    let exact = push_forward(&bsc_flip(&input, pf), |z| {
        node.connection_llr(&[z]).unwrap()
    });
    let ks = cdf(&mc)
        .iter()
        .zip(cdf(&exact))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    // Kolmogorov-Smirnov 99.9 % band for 2·10^5 samples is about 0.0044.
    assert!(ks < 0.005, "KS distance {ks}");
}

#[test]
fn uncorrelated_connection_is_silent() {
    let g = Grid::default();
    let input = gaussian_consistent_pdf(8.0, g).unwrap();
    let out =
        connection_output_density(&[input.clone(), input], 0.5, 3, MIN_MC_SAMPLES, 3).unwrap();
    assert_eq!(out.mass()[g.zero_index()], 1.0);
}

#[test]
fn saturated_inputs_give_two_point_output() {
    let g = Grid::default();
    let rho = 0.95;
    let pf = rho * rho + (1.0 - rho) * (1.0 - rho);
    let input = NumericPdf::delta(g, 50.0);
    let out = connection_output_density(&[input], rho, 2, MIN_MC_SAMPLES, 8).unwrap();
    let positive: Vec<usize> = (g.zero_index() + 1..g.bins())
        .filter(|&i| out.mass()[i] > 0.0)
        .collect();
    assert_eq!(positive.len(), 1);
    assert!((g.center(positive[0]) - 2.2542).abs() <= g.step());
    let p_pos = out.mass()[positive[0]];
    assert!((p_pos - pf).abs() < 0.003, "{p_pos}");
    assert!((out.mass()[g.mirror(positive[0])] - (1.0 - pf)).abs() < 0.003);
}

#[test]
fn gaussian_convolution_stays_consistent() {
    let g = Grid::default();
    let a = gaussian_consistent_pdf(2.0, g).unwrap();
    let b = gaussian_consistent_pdf(5.0, g).unwrap();
    let c = convolve_channel(&a, &b).unwrap();
    assert!((c.total_mass() - 1.0).abs() < 1e-9);
    assert!((c.mean() - 7.0).abs() < g.step());
    assert!((c.variance() - 14.0).abs() < 4.0 * g.step());
}

fn random_pdf(r: &mut impl Rng, g: Grid) -> NumericPdf {
    match r.gen_range(0..3) {
        0 => gaussian_consistent_pdf(r.gen_range(0.0..120.0), g).unwrap(),
        1 => NumericPdf::delta(g, r.gen_range(-60.0..60.0)),
        _ => {
            let raw: Vec<f64> = (0..g.bins()).map(|_| r.gen::<f64>().powi(8)).collect();
            let total: f64 = raw.iter().sum();
            NumericPdf::new(g, raw.iter().map(|x| x / total).collect()).unwrap()
        }
    }
}

#[test]
fn transforms_conserve_mass() {
    let g = Grid::new(60.0, 0.5).unwrap();
    let mut r = rng::seeded(99);
    for _ in 0..1000 {
        let mut p = random_pdf(&mut r, g);
        for _ in 0..4 {
            p = if r.gen_bool(0.5) {
                bsc_flip(&p, r.gen_range(0.5..=1.0))
            } else {
                convolve_channel(&p, &random_pdf(&mut r, g)).unwrap()
            };
            assert!((p.total_mass() - 1.0).abs() < 1e-9);
            assert!(p.mass().iter().all(|&m| m >= 0.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_mean_scales(mu in 0.0f64..80.0, rho in 0.5f64..=1.0) {
        let p = gaussian_consistent_pdf(mu, Grid::default()).unwrap();
        let q = bsc_flip(&p, rho);
        prop_assert!((q.mean() - (2.0 * rho - 1.0) * p.mean()).abs() < 1e-9);
        prop_assert!((q.total_mass() - 1.0).abs() < 1e-9);
    }
}
