use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use ranksign::bounds::{
    brute_force_tdecodable, count_superspaces, density_estimate, density_exponent, density_experiment,
    erasure_is_admissible, gvr, singleton, tdecodable_bounds, DensityBounds, ORACLE_LIMIT_BITS,
};
use ranksign::ranksign::SEED_BITS;
use ranksign::security::{full_report, log2_big};
use ranksign::wire::{self, Kind, PUBLIC_EXT, SECRET_EXT, SIGNATURE_EXT};
use ranksign::{CodeParams, FieldContext, LrpcCode, PublicKey, RankSign, Subspace};

use crate::output::{emit, Lines};
use crate::{Cli, Command};

pub fn run(cli: Cli) -> Result<ExitCode> {
    let mut rng = match cli.rng_seed {
        Some(seed) => ChaCha20Rng::seed_from_u64(seed),
        None => ChaCha20Rng::from_entropy(),
    };
    let machine = cli.machine;
    match cli.command {
        Command::Keygen { params, out } => keygen(params.params, &out, &mut rng, machine),
        Command::Sign { secret, message, out } => {
            let out = out.unwrap_or_else(|| with_extension(&message, SIGNATURE_EXT));
            sign(&secret, &message, &out, &mut rng, machine)
        }
        Command::Verify {
            public,
            message,
            signature,
        } => verify(&public, &message, &signature, machine),
        Command::Estimate { params } => estimate(&params.params, machine),
        Command::Bounds { params } => bounds(&params.params, &mut rng, machine),
        Command::DensityExperiment { params, trials } => density(&params.params, trials, &mut rng, machine),
        Command::Bench { params, trials } => bench(params.params, trials, &mut rng, machine),
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn field(params: &CodeParams) -> Result<FieldContext> {
    FieldContext::with_order(params.q, params.m).context("building the field")
}

/// Reads a key file of the given kind and the field it lives in.
fn load(path: &Path, kind: Kind) -> Result<(Vec<u8>, CodeParams, FieldContext)> {
    let bytes = read(path)?;
    let (found, params) = wire::peek_params(&bytes).with_context(|| format!("decoding {}", path.display()))?;
    if found != kind {
        bail!("{}: expected a {kind:?} key, found {found:?}", path.display());
    }
    let ctx = field(&params)?;
    Ok((bytes, params, ctx))
}

fn keygen(params: CodeParams, out: &Path, rng: &mut ChaCha20Rng, machine: bool) -> Result<ExitCode> {
    let rs = RankSign::new(params)?;
    let ctx = rs.field();
    let (sk, pk) = rs.keygen(rng)?;
    let pk_path = with_extension(out, PUBLIC_EXT);
    let sk_path = with_extension(out, SECRET_EXT);
    write(&pk_path, &wire::encode_public(ctx, &pk))?;
    write(&sk_path, &wire::encode_secret(ctx, &sk))?;
    Lines::default()
        .push("params", params)
        .push("public", pk_path.display())
        .push("secret", sk_path.display())
        .print(machine);
    Ok(ExitCode::SUCCESS)
}

fn sign(secret: &Path, message: &Path, out: &Path, rng: &mut ChaCha20Rng, machine: bool) -> Result<ExitCode> {
    let (bytes, params, ctx) = load(secret, Kind::Secret)?;
    let sk = wire::decode_secret(&ctx, &bytes).with_context(|| format!("decoding {}", secret.display()))?;
    let rs = RankSign::with_field(params, ctx)?;
    let pk = PublicKey::new(params, sk.public_matrix(rs.field()), SEED_BITS)?;
    let msg = read(message)?;
    let (sig, stats) = rs.sign_with_stats(&sk, &pk, &msg, rng)?;
    write(out, &wire::encode_signature(rs.field(), &sig))?;
    Lines::default()
        .push("signature", out.display())
        .push("attempts", stats.attempts)
        .print(machine);
    Ok(ExitCode::SUCCESS)
}

fn verify(public: &Path, message: &Path, signature: &Path, machine: bool) -> Result<ExitCode> {
    let (bytes, params, ctx) = load(public, Kind::Public)?;
    let pk = wire::decode_public(&ctx, &bytes).with_context(|| format!("decoding {}", public.display()))?;
    let sig_bytes = read(signature)?;
    let sig = wire::decode_signature(&ctx, &params, &sig_bytes)
        .with_context(|| format!("decoding {}", signature.display()))?;
    let msg = read(message)?;
    let rs = RankSign::with_field(params, ctx)?;
    let accepted = rs.verify(&pk, &msg, &sig)?;
    Lines::default()
        .push("result", if accepted { "accept" } else { "reject" })
        .print(machine);
    Ok(if accepted { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn estimate(params: &CodeParams, machine: bool) -> Result<ExitCode> {
    params.validate()?;
    let report = full_report(params);
    if machine {
        emit(&format!("{}\n", report.machine_lines()));
    } else {
        emit(&report.to_string());
    }
    Ok(ExitCode::SUCCESS)
}

/// Exact below 2^64, otherwise a power of two.
fn approx(x: &BigUint) -> String {
    if x.bits() <= 64 {
        x.to_string()
    } else {
        format!("2^{:.2}", log2_big(x))
    }
}

fn approx_rational(x: &BigRational) -> String {
    if x.numer().bits() <= 64 && x.denom().bits() <= 64 {
        x.to_string()
    } else {
        format!("2^{:.2}", log2_big(x.numer().magnitude()) - log2_big(x.denom().magnitude()))
    }
}

fn push_count_bounds(lines: &mut Lines, params: &CodeParams) -> Option<DensityBounds> {
    match tdecodable_bounds(params) {
        Ok(b) => {
            lines
                .push("count_lower", approx_rational(&b.lower))
                .push("count_upper", approx(&b.upper));
            Some(b)
        }
        Err(e) => {
            lines.push("count_bounds", format!("unavailable ({e})"));
            None
        }
    }
}

/// Exhaustive decodable-syndrome count for a fresh code and admissible
/// erasure, compared with the count bounds.
fn push_oracle(lines: &mut Lines, params: &CodeParams, bounds: Option<&DensityBounds>, rng: &mut ChaCha20Rng) -> Result<()> {
    if params.validate_for_scheme().is_err() {
        lines.push("oracle", "skipped (not a scheme parameter set)");
        return Ok(());
    }
    if (params.m * params.redundancy()) as f64 * params.log2_q() > f64::from(ORACLE_LIMIT_BITS) {
        lines.push("oracle", "skipped (syndrome space too large)");
        return Ok(());
    }
    let ctx = field(params)?;
    let code = LrpcCode::generate(&ctx, params, rng)?;
    let erasure = loop {
        let t = Subspace::sample(&ctx, params.erasure_dim, rng)?;
        if erasure_is_admissible(&ctx, &code, &t) {
            break t;
        }
    };
    let count = brute_force_tdecodable(&ctx, &code, &erasure)?;
    lines
        .push("oracle_count", approx(&count.count))
        .push("oracle_valid_supports", count.valid_supports)
        .push("oracle_total_supports", count.total_supports);
    if let Some(b) = bounds {
        lines.push("oracle_within_bounds", b.contains(&count.count));
    }
    Ok(())
}

fn bounds(params: &CodeParams, rng: &mut ChaCha20Rng, machine: bool) -> Result<ExitCode> {
    params.validate()?;
    let p = params;
    let (len, dim) = (p.public_len(), p.k + p.extra_cols);
    let mut lines = Lines::default();
    lines
        .push("params", p)
        .push("gvr_code", gvr(p.n, p.k, p.m, p.q))
        .push("gvr_public", gvr(len, dim, p.m, p.q))
        .push("singleton_code", singleton(p.n, p.k, p.m))
        .push("singleton_public", singleton(len, dim, p.m))
        .push("density_exp", density_exponent(p))
        .push("density_estimate", approx_rational(&density_estimate(p)));
    if p.erasure_dim + p.free_dim <= p.m {
        lines.push("supports", approx(&count_superspaces(p.m, p.q, p.erasure_dim, p.free_dim)));
    }
    let b = push_count_bounds(&mut lines, p);
    push_oracle(&mut lines, p, b.as_ref(), rng)?;
    lines.print(machine);
    Ok(ExitCode::SUCCESS)
}

fn density(params: &CodeParams, trials: usize, rng: &mut ChaCha20Rng, machine: bool) -> Result<ExitCode> {
    params.validate_for_scheme()?;
    let ctx = field(params)?;
    let code = LrpcCode::generate(&ctx, params, rng)?;
    let result = density_experiment(&ctx, &code, trials, rng);
    let mut lines = Lines::default();
    lines
        .push("params", params)
        .push("trials", result.trials)
        .push("successes", result.successes)
        .push("success_rate", format!("{:.4}", result.success_rate()))
        .push("fail_product_rank", result.product_rank)
        .push("fail_intersection", result.intersection)
        .push("fail_generation", result.generation)
        .push("failure_bound", format!("{:.4}", 2.0 / (params.q as f64 - 1.0)))
        .push("density_exp", density_exponent(params));
    let b = push_count_bounds(&mut lines, params);
    push_oracle(&mut lines, params, b.as_ref(), rng)?;
    lines.print(machine);
    Ok(ExitCode::SUCCESS)
}

fn bench(params: CodeParams, trials: usize, rng: &mut ChaCha20Rng, machine: bool) -> Result<ExitCode> {
    let trials = trials.max(1);
    let start = Instant::now();
    let rs = RankSign::new(params)?;
    let field_time = start.elapsed();

    let start = Instant::now();
    let (sk, pk) = rs.keygen(rng)?;
    let keygen_time = start.elapsed();

    let messages: Vec<Vec<u8>> = (0..trials as u64).map(|i| i.to_le_bytes().to_vec()).collect();
    let start = Instant::now();
    let mut attempts = 0;
    let mut sigs = Vec::with_capacity(trials);
    for m in &messages {
        let (sig, stats) = rs.sign_with_stats(&sk, &pk, m, rng)?;
        attempts += stats.attempts;
        sigs.push(sig);
    }
    let sign_time = start.elapsed();

    let start = Instant::now();
    for (m, sig) in messages.iter().zip(&sigs) {
        if !rs.verify(&pk, m, sig)? {
            bail!("a fresh signature failed to verify");
        }
    }
    let verify_time = start.elapsed();

    let per_sec = |d: std::time::Duration| trials as f64 / d.as_secs_f64().max(1e-9);
    Lines::default()
        .push("params", params)
        .push("trials", trials)
        .push("field_ms", format!("{:.2}", field_time.as_secs_f64() * 1e3))
        .push("keygen_ms", format!("{:.2}", keygen_time.as_secs_f64() * 1e3))
        .push("sign_per_sec", format!("{:.1}", per_sec(sign_time)))
        .push("verify_per_sec", format!("{:.1}", per_sec(verify_time)))
        .push("mean_attempts", format!("{:.4}", attempts as f64 / trials as f64))
        .print(machine);
    Ok(ExitCode::SUCCESS)
}
