//! The four subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use corrmac_core::exit::{find_lambda_bal, find_lambda_unb, trace_csv, ExitParams, Grid};
use corrmac_core::jcd::{simulate_point, BerRow, CodeInstance, ConnectionNode, JcdConfig};
use corrmac_core::ldpc::{build_code, DegreeDistributions, LdpcCode};
use corrmac_core::region::{characteristic_points, joint_entropy, FeasibleRegion};
use corrmac_core::{ChannelConfig, CorrelationModel, ScccCode};

use crate::config::{
    CodeKind, CodeSpec, Ensemble, ExperimentConfig, FixedSpec, ProjectionConfig, RegionConfig,
};
use crate::output::{sig, write_file, write_manifest, CsvAppender};
use crate::CliError;

/// Mixed into the global seed when a code seed is not given, so that code
/// construction and simulation draw from unrelated streams.
const CODE_SEED_SALT: u64 = 0xC0DE_5EED;

pub struct Context {
    command: &'static str,
    config: ExperimentConfig,
    seed: u64,
    out: PathBuf,
}

impl Context {
    pub fn new(
        command: &'static str,
        config: ExperimentConfig,
        seed: Option<u64>,
        out: PathBuf,
    ) -> Result<Self, CliError> {
        let seed = seed.or(config.seed).unwrap_or(0);
        std::fs::create_dir_all(&out)?;
        Ok(Self {
            command,
            config,
            seed,
            out,
        })
    }

    fn section<'a, T>(&self, table: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        table.as_ref().ok_or_else(|| {
            CliError::Config(format!("missing [{name}] table for `{}`", self.command))
        })
    }
}

fn bad(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

fn check_rho(key: &str, rho: f64) -> Result<(), CliError> {
    CorrelationModel::new(1, rho)
        .map(|_| ())
        .map_err(|e| bad(key, e))
}

fn check_sources(key: &str, n: usize, rho: f64) -> Result<(), CliError> {
    ConnectionNode::new(n, rho)
        .map(|_| ())
        .map_err(|e| bad(key, e))
}

fn rho_label(rho: f64) -> String {
    format!("{rho}")
}

// ---------------------------------------------------------------- region

pub fn run_region(ctx: &Context) -> Result<(), CliError> {
    let cfg = ctx.section(&ctx.config.region, "region")?;
    validate_region(cfg)?;

    for &rho in &cfg.rho {
        let mut csv = String::from("n,joint_entropy,lambda_bal,lambda_unb,lambda_lim\n");
        for n in 2..=cfg.n_max {
            let h = joint_entropy(n, rho)?;
            let cp = characteristic_points(n, rho, cfg.rate)?;
            let cols = [cp.lambda_bal, cp.lambda_unb, cp.lambda_lim].map(|x| sig(x, 6));
            csv += &format!("{n},{h:.6},{}\n", cols.join(","));
        }
        write_file(&ctx.out, &format!("region_rho{}.csv", rho_label(rho)), &csv)?;
    }

    for (i, p) in cfg.projection.iter().enumerate() {
        let region = FeasibleRegion::new(p.n, p.rho, cfg.rate)?;
        let fixed = resolve_fixed(p, &region, cfg.rate, i)?;
        let mut csv = String::from("lambda1,lambda2\n");
        for (l1, l2) in region.boundary_projection(&fixed, cfg.grid_step)? {
            csv += &format!("{l1:.6},{l2:.6}\n");
        }
        write_file(&ctx.out, &format!("boundary_{}.csv", i + 1), &csv)?;
    }
    write_manifest(&ctx.out, ctx.command, ctx.seed, cfg, toml::Table::new())
}

fn validate_region(cfg: &RegionConfig) -> Result<(), CliError> {
    if cfg.n_max < 2 {
        return Err(bad("region.n_max", "must be at least 2"));
    }
    if cfg.rho.is_empty() {
        return Err(bad("region.rho", "at least one value is required"));
    }
    for &rho in &cfg.rho {
        check_rho("region.rho", rho)?;
    }
    if !(cfg.rate > 0.0 && cfg.rate <= 1.0) {
        return Err(bad(
            "region.rate",
            format!("must be in (0, 1], got {}", cfg.rate),
        ));
    }
    if !(cfg.grid_step > 0.0 && cfg.grid_step < 1.0) {
        return Err(bad(
            "region.grid_step",
            format!("must be in (0, 1), got {}", cfg.grid_step),
        ));
    }
    for (i, p) in cfg.projection.iter().enumerate() {
        let key = format!("region.projection[{i}]");
        if p.n < 2 {
            return Err(bad(&format!("{key}.n"), "must be at least 2"));
        }
        check_rho(&format!("{key}.rho"), p.rho)?;
    }
    Ok(())
}

fn resolve_fixed(
    p: &ProjectionConfig,
    region: &FeasibleRegion,
    rate: f64,
    index: usize,
) -> Result<Vec<f64>, CliError> {
    let key = format!("region.projection[{index}].fixed");
    let count = p.n - 2;
    let fixed = match &p.fixed {
        FixedSpec::Values(v) => v.clone(),
        FixedSpec::Named(name) if name == "unb" => {
            vec![region.characteristic_points().lambda_unb; count]
        }
        FixedSpec::Named(name) if name == "rate" => vec![rate; count],
        FixedSpec::Named(name) => {
            return Err(bad(
                &key,
                format!("expected a list, \"unb\" or \"rate\", got \"{name}\""),
            ))
        }
    };
    if fixed.len() != count {
        return Err(bad(
            &key,
            format!("expected {count} values, got {}", fixed.len()),
        ));
    }
    Ok(fixed)
}

// ---------------------------------------------------------------- codes

fn load_code(spec: &CodeSpec, key: &str, global_seed: u64) -> Result<CodeInstance, CliError> {
    if let Some(file) = &spec.file {
        let text = std::fs::read_to_string(file).map_err(|e| bad(&format!("{key}.file"), e))?;
        let ext = Path::new(file)
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("");
        let code = match (ext, spec.kind) {
            ("alist", CodeKind::Ldpc) => LdpcCode::from_alist(&text).map(CodeInstance::Ldpc),
            ("sccc", CodeKind::Sccc) => ScccCode::from_description(&text).map(CodeInstance::Sccc),
            _ => {
                return Err(bad(
                    &format!("{key}.file"),
                    format!(
                        "a {} code needs a .{} file",
                        spec.kind.name(),
                        code_extension(spec.kind)
                    ),
                ))
            }
        };
        return code.map_err(|e| bad(&format!("{key}.file"), e));
    }
    let seed = spec.seed.unwrap_or(global_seed ^ CODE_SEED_SALT);
    build(spec.kind, spec.length, spec.ensemble, spec.regular, seed)
        .map_err(|e| bad(&format!("{key}.length"), e))
}

fn build(
    kind: CodeKind,
    length: usize,
    ensemble: Ensemble,
    regular: [usize; 2],
    seed: u64,
) -> corrmac_core::Result<CodeInstance> {
    match kind {
        CodeKind::Sccc => ScccCode::reference_with_length(length, seed).map(CodeInstance::Sccc),
        CodeKind::Ldpc => {
            let dd = match ensemble {
                Ensemble::Irregular3 => DegreeDistributions::irregular3(),
                Ensemble::Regular => DegreeDistributions::regular(regular[0], regular[1])?,
            };
            build_code(&dd, length, seed).map(CodeInstance::Ldpc)
        }
    }
}

fn code_extension(kind: CodeKind) -> &'static str {
    match kind {
        CodeKind::Sccc => "sccc",
        CodeKind::Ldpc => "alist",
    }
}

pub fn run_build_code(ctx: &Context) -> Result<(), CliError> {
    let spec = ctx.section(&ctx.config.build_code, "build_code")?;
    if spec.file.is_some() {
        return Err(bad("build_code.file", "not used by build-code"));
    }
    let code = load_code(spec, "build_code", ctx.seed)?;
    let name = format!("code.{}", code_extension(spec.kind));
    let text = match &code {
        CodeInstance::Sccc(c) => c.describe(),
        CodeInstance::Ldpc(c) => c.to_alist(),
    };
    write_file(&ctx.out, &name, &text)?;

    let mut run = toml::Table::new();
    run.insert("file".into(), name.into());
    run.insert("code_length".into(), (code.code_len() as i64).into());
    run.insert("info_length".into(), (code.info_len() as i64).into());
    run.insert("rate".into(), code.rate().into());
    if let CodeInstance::Ldpc(c) = &code {
        let hist = |h: Vec<(usize, usize)>| {
            toml::Value::Array(
                h.into_iter()
                    .map(|(d, c)| toml::Value::Array(vec![(d as i64).into(), (c as i64).into()]))
                    .collect(),
            )
        };
        run.insert("checks".into(), (c.num_checks() as i64).into());
        run.insert("edges".into(), (c.num_edges() as i64).into());
        run.insert("variable_degrees".into(), hist(c.variable_degrees()));
        run.insert("check_degrees".into(), hist(c.check_degrees()));
    }
    write_manifest(&ctx.out, ctx.command, ctx.seed, spec, run)
}

// ---------------------------------------------------------------- ber

pub fn run_ber(ctx: &Context) -> Result<(), CliError> {
    let cfg = ctx.section(&ctx.config.ber, "ber")?;
    check_sources("ber.n", cfg.n, cfg.rho)?;
    if cfg.max_blocks < 1 {
        return Err(bad("ber.max_blocks", "must be at least 1"));
    }
    if cfg.target_errors < 1 {
        return Err(bad("ber.target_errors", "must be at least 1"));
    }
    if cfg.external_iters < 1 {
        return Err(bad("ber.external_iters", "must be at least 1"));
    }
    if cfg.internal_iters == Some(0) {
        return Err(bad("ber.internal_iters", "must be at least 1"));
    }
    let mut grid_db: Vec<Vec<f64>> = cfg.gamma_db.clone();
    for (i, g) in grid_db.iter().enumerate() {
        if g.len() != cfg.n {
            return Err(bad(
                &format!("ber.gamma_db[{i}]"),
                format!("expected {} values, got {}", cfg.n, g.len()),
            ));
        }
    }
    grid_db.extend(cfg.balanced_db.iter().map(|&g| vec![g; cfg.n]));
    if grid_db.is_empty() {
        return Err(bad(
            "ber.gamma_db",
            "no grid points (set gamma_db or balanced_db)",
        ));
    }
    let grid: Vec<Vec<f64>> = grid_db
        .iter()
        .map(|g| g.iter().map(|db| 10f64.powf(db / 10.0)).collect())
        .collect();
    if let Some(g) = grid
        .iter()
        .flatten()
        .find(|g| !(g.is_finite() && **g > 0.0))
    {
        return Err(bad("ber.gamma_db", format!("SNR {g} out of range")));
    }

    let code = load_code(&cfg.code, "ber.code", ctx.seed)?;
    let default_iters = JcdConfig::new(cfg.n, cfg.rho, 1.0, code.clone(), ctx.seed)?.internal_iters;
    let jcd = JcdConfig {
        n: cfg.n,
        rho: cfg.rho,
        channels: vec![ChannelConfig::from_gamma(1.0)?; cfg.n],
        code,
        internal_iters: cfg.internal_iters.unwrap_or(default_iters),
        external_iters: cfg.external_iters,
        early_exit: cfg.early_exit,
        max_blocks: cfg.max_blocks,
        target_errors: cfg.target_errors,
        seed: ctx.seed,
    };

    let mut run = toml::Table::new();
    run.insert("status".into(), "running".into());
    write_manifest(&ctx.out, ctx.command, ctx.seed, cfg, run.clone())?;

    let start = Instant::now();
    let mut csv = CsvAppender::create(&ctx.out.join("ber.csv"), &BerRow::csv_header(cfg.n))?;
    let mut blocks = Vec::new();
    for (p, gammas) in grid.iter().enumerate() {
        let rows = simulate_point(&jcd, p as u32, gammas)?;
        blocks.push(toml::Value::Integer(rows[0].blocks as i64));
        csv.append(&rows.iter().map(BerRow::to_csv).collect::<Vec<_>>())?;
    }
    run.insert("status".into(), "complete".into());
    run.insert("blocks_per_point".into(), toml::Value::Array(blocks));
    run.insert("info_length".into(), (jcd.code.info_len() as i64).into());
    run.insert("code_length".into(), (jcd.code.code_len() as i64).into());
    run.insert(
        "wall_clock_seconds".into(),
        start.elapsed().as_secs_f64().into(),
    );
    write_manifest(&ctx.out, ctx.command, ctx.seed, cfg, run)
}

// ---------------------------------------------------------------- exit

pub fn run_exit(ctx: &Context) -> Result<(), CliError> {
    let cfg = ctx.section(&ctx.config.exit, "exit")?;
    if cfg.codes.is_empty() {
        return Err(bad("exit.codes", "at least one code is required"));
    }
    if cfg.n.is_empty() || cfg.rho.is_empty() {
        return Err(bad("exit.n", "n and rho need at least one value each"));
    }
    for &rho in &cfg.rho {
        check_rho("exit.rho", rho)?;
        for &n in &cfg.n {
            check_sources("exit.n", n, rho)?;
        }
    }
    let params = ExitParams {
        mc_samples: cfg.mc_samples,
        output_samples: cfg.output_samples,
        internal_iters: cfg.internal_iters,
        grid: Grid::default(),
        bracket_db: (cfg.bracket_db[0], cfg.bracket_db[1]),
        tol: cfg.tol,
        seed: ctx.seed,
        ..ExitParams::default()
    };
    params.validate().map_err(|e| bad("exit", e))?;
    if cfg.mc_samples < corrmac_core::exit::MIN_MC_SAMPLES {
        return Err(bad(
            "exit.mc_samples",
            format!("must be at least {}", corrmac_core::exit::MIN_MC_SAMPLES),
        ));
    }

    let mut csv = CsvAppender::create(
        &ctx.out.join("characteristic_points.csv"),
        "code,n,rho,lambda_bal,lambda_unb,theory_lambda_bal,theory_lambda_unb,theory_lambda_lim,rate",
    )?;
    let code_seed = cfg.code_seed.unwrap_or(ctx.seed ^ CODE_SEED_SALT);
    for &kind in &cfg.codes {
        let code = build(
            kind,
            cfg.code_length,
            Ensemble::Irregular3,
            [3, 6],
            code_seed,
        )
        .map_err(|e| bad("exit.code_length", e))?;
        for &n in &cfg.n {
            for &rho in &cfg.rho {
                let unb = find_lambda_unb(&code, n, rho, &params)?;
                let bal = find_lambda_bal(&code, n, rho, &params)?;
                let theory = characteristic_points(n, rho, code.rate())?;
                csv.append(&[format!(
                    "{},{n},{rho},{},{},{},{},{},{}",
                    kind.name(),
                    sig(bal.lambda, 6),
                    sig(unb.lambda, 6),
                    sig(theory.lambda_bal, 6),
                    sig(theory.lambda_unb, 6),
                    sig(theory.lambda_lim, 6),
                    sig(code.rate(), 6),
                )])?;
                if cfg.traces {
                    for (tag, result) in [("bal", &bal), ("unb", &unb)] {
                        let name =
                            format!("trace_{}_n{n}_rho{}_{tag}.csv", kind.name(), rho_label(rho));
                        write_file(&ctx.out, &name, &trace_csv(&result.trace))?;
                    }
                }
            }
        }
    }
    write_manifest(&ctx.out, ctx.command, ctx.seed, cfg, toml::Table::new())
}
