mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use amdkit::attacks::{self, BitCodeAdapter, Mode, Sampling};
use amdkit::codec::{self, AmdKind, Feasibility, StrongAmdParams, WeakAmdParams};
use amdkit::entropy::{avg_min_entropy, chain_rule_check, min_entropy, JointDistribution};
use amdkit::icm::{run_icm_experiment, IcmParams, IcmStrategy};
use amdkit::oracle::{brute_force_strong_delta, exact_strong_delta, exact_weak_delta};
use amdkit::rss::{self, RampParams, Tamper};
use amdkit::{AmdError, FieldSpec, Message};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{emit, envelope, Format};

/// Leakage-resilient AMD code toolkit.
///
/// Exit codes: 0 pass, 1 fail, 2 usage or parameter error, 3 capacity.
#[derive(Parser, Debug)]
#[command(name = "amdkit", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,
    /// Output format; `frontier` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ceiling on elementary operations for exhaustive computations.
    #[arg(long, global = true, default_value_t = amdkit::util::DEFAULT_WORK_BUDGET)]
    work_budget: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact security of the strong or weak construction.
    Verify(VerifyArgs),
    /// Run an adversary against a bit code.
    Attack(AttackArgs),
    /// Tampering experiment for the ideal-cipher construction.
    Icm(IcmArgs),
    /// Robust secret sharing: deal, reconstruct or tamper.
    Rss(RssArgs),
    /// Min-entropy figures and the chain rule for a joint distribution.
    Entropy(EntropyArgs),
    /// Feasibility over a (rho, kappa) grid.
    Frontier(FrontierArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Structured,
    BruteForce,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    /// Randomness length (strong only).
    #[arg(long, default_value_t = 1)]
    sigma: usize,
    /// Also report the bound at this leakage rate.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Structured)]
    method: Method,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Strong,
    Weak,
}

impl From<KindArg> for AmdKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Strong => AmdKind::Strong,
            KindArg::Weak => AmdKind::Weak,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AttackName {
    StrongCase1,
    StrongCase2,
    WeakLine,
    WeakTrivial,
    LineFamily,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CodeArg {
    /// The strong construction over GF(2^w).
    Strong,
    /// `m || m^3` over GF(2^w).
    Cube,
    /// `m || 0^pad`, one codeword per message.
    Degenerate,
    /// `m || r`, injective, no redundancy.
    Plain,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(long, value_enum)]
    name: AttackName,
    #[arg(long, value_enum, default_value_t = CodeArg::Strong)]
    code: CodeArg,
    /// Field degree for strong, cube and line-family.
    #[arg(long, default_value_t = 3)]
    w: u32,
    /// Message symbols (strong code).
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Randomness symbols (strong code).
    #[arg(long, default_value_t = 1)]
    sigma: usize,
    #[arg(long, default_value_t = 4)]
    k_bits: u32,
    #[arg(long, default_value_t = 8)]
    pad_bits: u32,
    #[arg(long, default_value_t = 6)]
    sigma_bits: u32,
    /// Attacked message as an integer bit string.
    #[arg(long, default_value_t = 0)]
    message: u64,
    /// Leakage rate; defaults to the smallest rate admitting the leak.
    #[arg(long)]
    rho: Option<f64>,
    /// Probe count (line-family).
    #[arg(long, default_value_t = 16)]
    t: u64,
    /// Target set {0, .., size-1} (line-family).
    #[arg(long, default_value_t = 16)]
    target_size: u64,
    /// Enumerate every (A, B) instead of sampling (line-family).
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    FreshGuess,
    ReplayBestLeak,
}

#[derive(Args, Debug)]
struct IcmArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 16)]
    sigma: usize,
    /// Queries shared by the leakage function and the adversary.
    #[arg(long, default_value_t = 16)]
    query_budget: u64,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::FreshGuess)]
    strategy: StrategyArg,
    /// Queries the replay strategy makes; defaults to the budget.
    #[arg(long)]
    queries: Option<u64>,
}

#[derive(Args, Debug)]
struct RssArgs {
    #[command(subcommand)]
    action: RssAction,
    #[arg(long, global = true, default_value_t = 5)]
    q: u64,
    #[arg(long, global = true, default_value_t = 1)]
    k: usize,
    #[arg(long, global = true, default_value_t = 1)]
    sigma: usize,
    #[arg(long, global = true, default_value_t = 1)]
    t_priv: usize,
    #[arg(long, global = true, default_value_t = 3)]
    r: usize,
    #[arg(long, global = true, default_value_t = 5)]
    shares: usize,
}

#[derive(Subcommand, Debug)]
enum RssAction {
    /// Encode and share a message; prints the share file.
    Deal {
        /// Comma-separated message symbols.
        #[arg(long)]
        message: String,
    },
    /// Reconstruct and decode a share file.
    Reconstruct {
        #[arg(long)]
        shares_file: PathBuf,
    },
    /// Count detections of additive tampering.
    Tamper {
        /// `worst` uses the oracle's worst message and offset; `shift`
        /// adds `delta` to one share.
        #[arg(long, value_enum, default_value_t = TamperArg::Worst)]
        mode: TamperArg,
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        delta: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TamperArg {
    Worst,
    Shift,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    /// JSON array of {x, z, p} records.
    #[arg(long)]
    joint: PathBuf,
}

#[derive(Args, Debug)]
struct FrontierArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

struct Outcome {
    doc: Value,
    pass: bool,
    default_format: Format,
}

impl Outcome {
    fn json(command: &str, seed: Option<u64>, params: Value, pass: bool, report: impl serde::Serialize) -> Self {
        Self {
            doc: envelope(command, seed, params, pass, report),
            pass,
            default_format: Format::Json,
        }
    }
}

type CmdResult = Result<Outcome, AmdError>;

fn verify(g: &Global, a: &VerifyArgs) -> CmdResult {
    let spec = FieldSpec::from_order(a.q)?;
    let params = json!({"kind": format!("{:?}", a.kind).to_lowercase(), "q": a.q, "k": a.k, "sigma": a.sigma, "rho": a.rho});
    match a.kind {
        KindArg::Strong => {
            let p = StrongAmdParams::new(spec, a.k, a.sigma)?;
            let report = match a.method {
                Method::Structured => exact_strong_delta(&p, g.work_budget)?,
                Method::BruteForce => brute_force_strong_delta(&p, g.work_budget)?,
            };
            let extra = a.rho.map(|rho| {
                json!({
                    "delta_bound_at_rho": codec::strong_delta_bound(&p, rho),
                    "feasible": codec::feasible(AmdKind::Strong, rho, a.k as f64 / p.n() as f64).ok(),
                })
            });
            Ok(Outcome::json("verify", None, params, report.pass, json!({"security": report, "leakage": extra})))
        }
        KindArg::Weak => {
            let p = WeakAmdParams::new(spec, a.k)?;
            let report = exact_weak_delta(&p, g.work_budget)?;
            let extra = a.rho.map(|rho| json!({"delta_bound_at_rho": codec::weak_delta_bound(&p, rho)}));
            Ok(Outcome::json("verify", None, params, report.pass, json!({"security": report, "leakage": extra})))
        }
    }
}

fn build_code(a: &AttackArgs) -> Result<BitCodeAdapter, AmdError> {
    match a.code {
        CodeArg::Strong => BitCodeAdapter::from_code(StrongAmdParams::new(FieldSpec::binary(a.w)?, a.k, a.sigma)?),
        CodeArg::Cube => BitCodeAdapter::cube_weak(a.w),
        CodeArg::Degenerate => BitCodeAdapter::degenerate(a.k_bits, a.pad_bits, a.sigma_bits),
        CodeArg::Plain => BitCodeAdapter::plain_randomized(a.k_bits, a.sigma_bits),
    }
}

fn attack(g: &Global, a: &AttackArgs) -> CmdResult {
    let run = Sampling { trials: g.trials, seed: g.seed };
    let name = format!("{:?}", a.name);
    let mut params = json!({
        "name": name, "code": format!("{:?}", a.code), "w": a.w, "k": a.k, "sigma": a.sigma,
        "k_bits": a.k_bits, "pad_bits": a.pad_bits, "sigma_bits": a.sigma_bits,
        "message": a.message, "rho": a.rho, "trials": g.trials,
    });
    let report = match a.name {
        AttackName::LineFamily => {
            params = json!({"name": name, "w": a.w, "t": a.t, "target_size": a.target_size, "exhaustive": a.exhaustive, "trials": g.trials});
            let spec = FieldSpec::binary(a.w)?;
            let target: Vec<u64> = (0..a.target_size).collect();
            let mode = if a.exhaustive { Mode::Exhaustive } else { Mode::Sampled { trials: g.trials, seed: g.seed } };
            attacks::line_family_hit_rate(&spec, a.t, &target, mode)?
        }
        AttackName::StrongCase1 => attacks::strong_attack_case1(&build_code(a)?, a.message, run, a.rho)?,
        AttackName::StrongCase2 => attacks::strong_attack_case2(&build_code(a)?, a.message, run, a.rho)?,
        AttackName::WeakLine => attacks::weak_attack_line(&build_code(a)?, run, a.rho)?,
        AttackName::WeakTrivial => attacks::weak_attack_trivial(&build_code(a)?, a.rho)?,
    };
    let seed = report.seed;
    Ok(Outcome::json("attack", seed, params, report.pass, &report))
}

fn icm(g: &Global, a: &IcmArgs) -> CmdResult {
    let params = IcmParams::new(FieldSpec::from_order(a.q)?, a.k, a.sigma, a.query_budget, a.rho)?;
    let strategy = match a.strategy {
        StrategyArg::FreshGuess => IcmStrategy::FreshGuess,
        StrategyArg::ReplayBestLeak => IcmStrategy::ReplayBestLeak { queries: a.queries.unwrap_or(a.query_budget) },
    };
    let report = run_icm_experiment(&params, strategy, g.trials, g.seed)?;
    let echo = json!({"q": a.q, "k": a.k, "sigma": a.sigma, "query_budget": a.query_budget, "rho": a.rho, "strategy": strategy, "trials": g.trials});
    Ok(Outcome::json("icm", Some(g.seed), echo, report.pass, &report))
}

fn rss_cmd(g: &Global, a: &RssArgs) -> CmdResult {
    let spec = FieldSpec::from_order(a.q)?;
    let amd = StrongAmdParams::new(spec, a.k, a.sigma)?;
    let ramp = RampParams::new(spec, a.t_priv, a.r, a.shares)?;
    let echo = json!({"q": a.q, "k": a.k, "sigma": a.sigma, "t_priv": a.t_priv, "r": a.r, "shares": a.shares});
    match &a.action {
        RssAction::Deal { message } => {
            let values = message
                .split(',')
                .map(|v| spec.parse_value(v.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let m = Message::from_values(&spec, &values)?;
            let shares = rss::robust_share(&m, &amd, &ramp, g.seed)?;
            let text = rss::shares_to_json(&shares, &spec)?;
            let parsed: Value = serde_json::from_str(&text).map_err(|e| AmdError::Parse(e.to_string()))?;
            Ok(Outcome::json("rss-deal", Some(g.seed), echo, true, json!({"shares": parsed})))
        }
        RssAction::Reconstruct { shares_file } => {
            let text = std::fs::read_to_string(shares_file)
                .map_err(|e| AmdError::Usage(format!("cannot read {}: {e}", shares_file.display())))?;
            let (file_spec, shares) = rss::shares_from_json(&extract_shares(&text)?)?;
            if file_spec != spec {
                return Err(AmdError::Usage(format!("share file is over {file_spec}, expected {spec}")));
            }
            let decoded = rss::robust_reconstruct_raw(&shares, &amd, &ramp)?;
            let pass = decoded.is_some();
            let message = decoded.map(|m| m.iter().map(|&v| spec.format_value(v)).collect::<Vec<_>>().join(","));
            Ok(Outcome::json("rss-reconstruct", None, echo, pass, json!({"message": message, "tampered": !pass})))
        }
        RssAction::Tamper { mode, index, delta } => {
            let oracle = exact_strong_delta(&amd, g.work_budget)?;
            let (message, tamper) = match mode {
                TamperArg::Worst => (
                    oracle.worst_message.clone(),
                    Tamper::CodewordOffset { offset: oracle.worst_offset.clone() },
                ),
                TamperArg::Shift => (None, Tamper::ShareShift { index: *index, block: 0, delta: *delta }),
            };
            let report = rss::tamper_experiment(&amd, &ramp, oracle.delta_exact, message.as_deref(), &tamper, g.trials, g.seed)?;
            let pass = report.tamper.pass && report.honest_ok == report.honest_trials;
            Ok(Outcome::json("rss-tamper", Some(g.seed), echo, pass, &report))
        }
    }
}

/// Accepts either a bare share array or a `rss deal` report.
fn extract_shares(text: &str) -> Result<String, AmdError> {
    let v: Value = serde_json::from_str(text).map_err(|e| AmdError::Parse(e.to_string()))?;
    let shares = v.pointer("/report/shares").cloned().unwrap_or(v);
    Ok(shares.to_string())
}

fn entropy_cmd(a: &EntropyArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.joint)
        .map_err(|e| AmdError::Usage(format!("cannot read {}: {e}", a.joint.display())))?;
    let joint = JointDistribution::from_json(&text)?;
    let chain = chain_rule_check(&joint);
    let report = json!({
        "h_min_x": min_entropy(&joint.x_marginal())?,
        "h_avg_x_given_z": avg_min_entropy(&joint),
        "z_support": joint.z_support_size(),
        "chain_rule": chain,
    });
    let echo = json!({"joint": a.joint.display().to_string()});
    Ok(Outcome::json("entropy", None, echo, chain.holds, report))
}

fn frontier(a: &FrontierArgs) -> CmdResult {
    if !(a.step > 0.0 && a.step < 1.0) {
        return Err(AmdError::Usage(format!("step must lie in (0, 1), got {}", a.step)));
    }
    let steps = (1.0 / a.step).round() as u64;
    let mut rows = Vec::new();
    for i in 1..steps {
        for j in 1..steps {
            let (rho, kappa) = (i as f64 * a.step, j as f64 * a.step);
            let feasible = codec::feasible(a.kind.into(), rho, kappa)? == Feasibility::Feasible;
            rows.push(json!({"rho": round6(rho), "kappa": round6(kappa), "feasible": feasible}));
        }
    }
    let echo = json!({"kind": format!("{:?}", a.kind).to_lowercase(), "step": a.step});
    let mut doc = envelope("frontier", None, echo, true, json!({"count": rows.len()}));
    doc["rows"] = Value::Array(rows);
    Ok(Outcome { doc, pass: true, default_format: Format::Csv })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn exit_code(err: &AmdError) -> u8 {
    match err {
        AmdError::Capacity { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Verify(a) => verify(g, a),
        Command::Attack(a) => attack(g, a),
        Command::Icm(a) => icm(g, a),
        Command::Rss(a) => rss_cmd(g, a),
        Command::Entropy(a) => entropy_cmd(a),
        Command::Frontier(a) => frontier(a),
    };
    match result {
        Ok(outcome) => {
            let format = g.format.unwrap_or(outcome.default_format);
            if let Err(e) = emit(&outcome.doc, format, g.out.as_deref()) {
                eprintln!("amdkit: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("amdkit: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
