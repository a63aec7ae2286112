use corrmac_core::error::Error;
use corrmac_core::exit::{balanced_trajectory, find_lambda_unb, z_surface, ExitParams, ESCAPE_SNR};
use corrmac_core::jcd::CodeInstance;
use corrmac_core::ScccCode;

fn code() -> CodeInstance {
    CodeInstance::Sccc(ScccCode::reference(1024, 3).unwrap())
}

fn params() -> ExitParams {
    ExitParams {
        mc_samples: 100_000,
        seed: 5,
        ..ExitParams::default()
    }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

#[test]
fn zero_apriori_snr_is_standalone() {
    let c = code();
    let p = params();
    let a = z_surface(&c, 0.95, db(-1.0), &[0.0], &p, 17).unwrap();
    let b = z_surface(&c, 0.5, db(-1.0), &[9.0], &p, 17).unwrap();
    assert_eq!(a.snr_out, b.snr_out);
    assert_eq!(a.apriori_snr, 0.0);
}

#[test]
fn output_grows_with_apriori_snr() {
    let c = code();
    let p = params();
    let grid = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
    let mut prev = f64::NEG_INFINITY;
    for &s in &grid {
        let z = z_surface(&c, 0.95, db(-2.0), &[s], &p, 4).unwrap();
        assert!(
            z.snr_out >= prev * 0.99,
            "snr_in {s}: {} after {prev}",
            z.snr_out
        );
        prev = z.snr_out;
    }
    // Three sources: raise one input at a time.
    let base = z_surface(&c, 0.95, db(-2.5), &[1.0, 1.0], &p, 4)
        .unwrap()
        .snr_out;
    let one = z_surface(&c, 0.95, db(-2.5), &[3.0, 1.0], &p, 4)
        .unwrap()
        .snr_out;
    let both = z_surface(&c, 0.95, db(-2.5), &[3.0, 3.0], &p, 4)
        .unwrap()
        .snr_out;
    assert!(
        one >= base * 0.99 && both >= one * 0.99,
        "{base} {one} {both}"
    );
}

#[test]
fn output_grows_with_channel_snr() {
    let c = code();
    let p = params();
    let mut prev = f64::NEG_INFINITY;
    for g in [-4.0, -3.0, -2.0, -1.0] {
        let z = z_surface(&c, 0.95, db(g), &[1.5], &p, 8).unwrap();
        assert!(z.snr_out >= prev, "{g} dB");
        prev = z.snr_out;
    }
}

#[test]
fn strong_side_information_opens_the_tunnel() {
    let z = z_surface(&code(), 0.95, db(0.0), &[50.0], &params(), 2).unwrap();
    assert!(z.snr_out > ESCAPE_SNR, "{}", z.snr_out);
    assert!(z.systematic_snr > z.apriori_snr);
}

#[test]
fn balanced_map_escapes_above_threshold_only() {
    let c = code();
    let p = params();
    let mut trace = Vec::new();
    assert!(balanced_trajectory(&c, 2, 0.95, db(1.0), &p, &mut trace).unwrap());
    assert!(trace.len() <= p.budget);
    let mut trace = Vec::new();
    assert!(!balanced_trajectory(&c, 2, 0.95, db(-6.0), &p, &mut trace).unwrap());
    assert!(trace.iter().all(|t| t.snr_out < ESCAPE_SNR));
}

#[test]
fn uncorrelated_unbalanced_point_is_standalone_threshold() {
    let c = code();
    let p = params();
    let helpless = find_lambda_unb(&c, 2, 0.5, &p).unwrap();
    let silent = find_lambda_unb(
        &c,
        2,
        0.95,
        &ExitParams {
            unbalanced_snr_in: 0.0,
            ..p.clone()
        },
    )
    .unwrap();
    assert_eq!(helpless.lambda, silent.lambda);
    let helped = find_lambda_unb(&c, 2, 0.95, &p).unwrap();
    assert!(helped.lambda < helpless.lambda);
}

#[test]
fn unbalanced_point_is_insensitive_to_saturation_level() {
    let c = code();
    let p = params();
    let at50 = find_lambda_unb(&c, 2, 0.95, &p).unwrap();
    let at30 = find_lambda_unb(
        &c,
        2,
        0.95,
        &ExitParams {
            unbalanced_snr_in: 30.0,
            ..p.clone()
        },
    )
    .unwrap();
    assert!(
        (at50.lambda - at30.lambda).abs() < p.tol,
        "{} vs {}",
        at50.lambda,
        at30.lambda
    );
}

#[test]
fn bracket_failures_are_reported() {
    let c = code();
    let too_low = ExitParams {
        bracket_db: (-12.0, -9.0),
        ..params()
    };
    assert!(matches!(
        find_lambda_unb(&c, 2, 0.95, &too_low),
        Err(Error::Bracket(_))
    ));
    let too_high = ExitParams {
        bracket_db: (3.0, 6.0),
        ..params()
    };
    assert!(matches!(
        find_lambda_unb(&c, 2, 0.95, &too_high),
        Err(Error::Bracket(_))
    ));
    assert!(find_lambda_unb(&c, 1, 0.95, &params()).is_err());
}
