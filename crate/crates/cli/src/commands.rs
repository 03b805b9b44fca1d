use std::fmt::Write as _;
use std::path::Path;

use crnkit_core::dynamics::{EquilibriumOptions, IntegratorOptions, MassAction};
use crnkit_core::feasibility::{
    double_matrix, gibbs_differences, gordan_alternative, FeasibilityVerdict, FluxPattern,
};
use crnkit_core::injectivity::full_report;
use crnkit_core::linalg::RationalMatrix;
use crnkit_core::network::{parse_network, parse_rational, NetworkMatrices, ReactionNetwork};
use crnkit_core::signs::SignVector;
use crnkit_core::{to_f64, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command, DynamicsArgs, GlobalOpts};
use crate::error::{exit, CliError};
use crate::report::{
    AnalysisReport, DrawJson, DynamicsJson, FeasibilityJson, InjectivityJson, Input, Matrices,
    MultistartJson, NetworkSummary, OrthogonalityJson, SimulationJson, Tool, SCHEMA_ID,
};

/// What a command produced: the primary output (stdout or `--out`), notes
/// for stderr, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub primary: String,
    pub diagnostics: String,
    pub code: u8,
}

/// Rate draws for `multistart --kappa-draws` are log-uniform in this range.
pub const KAPPA_DRAW_RANGE: (f64, f64) = (0.1, 10.0);
/// Integration time used to bring a failed Newton start closer to an
/// equilibrium before retrying.
pub const MULTISTART_RELAX_TIME: f64 = 100.0;

struct Loaded {
    net: ReactionNetwork,
    input: Input,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::argument("input", format!("{} is not UTF-8: {e}", path.display())))?;
    let net = parse_network(&text).map_err(|err| CliError::Parse { path: path.into(), err })?;
    let sha256 = format!("{:x}", Sha256::digest(&bytes));
    Ok(Loaded { net, input: Input { sha256, bytes: bytes.len() } })
}

fn report(command: &'static str, loaded: &Loaded, net: &ReactionNetwork, mats: &NetworkMatrices) -> AnalysisReport {
    AnalysisReport {
        schema: SCHEMA_ID,
        tool: Tool::current(),
        input: loaded.input.clone(),
        command,
        network: NetworkSummary::new(net, mats),
        matrices: Matrices::new(mats),
        feasibility: None,
        injectivity: None,
        dynamics: None,
    }
}

fn to_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn parse_floats(what: &'static str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .or_else(|| parse_rational(t).map(|r| to_f64(&r)))
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::argument(what, format!("`{t}` is not a number")))
        })
        .collect()
}

fn parse_rationals(what: &'static str, text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| CliError::argument(what, format!("`{}` is not a number", t.trim()))))
        .collect()
}

fn expect_len(what: &'static str, expected: usize, found: usize) -> Result<(), CliError> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::argument(what, format!("expected {expected} values, found {found}")))
    }
}

fn require_positive(what: &'static str, v: &[f64]) -> Result<(), CliError> {
    match v.iter().position(|x| *x <= 0.0) {
        Some(i) => Err(CliError::argument(what, format!("entry {} is {} but must be positive", i + 1, v[i]))),
        None => Ok(()),
    }
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn fmt_matrix(name: &str, m: &RationalMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("{name} ({} x {}):\n", m.rows(), m.cols());
    for row in &cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  [ {} ]", padded.join("  "));
    }
    out
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Parse { path } => cmd_parse(g, path),
        Command::Feasibility { path, nu } => cmd_feasibility(g, path, nu),
        Command::Injectivity { path } => cmd_injectivity(g, path),
        Command::Simulate { path, dynamics, t_end, feed, rtol, atol } => {
            let opts = IntegratorOptions { rtol: *rtol, atol: *atol, ..IntegratorOptions::default() };
            cmd_simulate(g, path, dynamics, *t_end, feed.as_deref(), &opts)
        }
        Command::Multistart { path, dynamics, trials, kappa_draws } => {
            cmd_multistart(g, path, dynamics, *trials, *kappa_draws)
        }
    }
}

fn ok(primary: String) -> Output {
    Output { primary, diagnostics: String::new(), code: exit::OK }
}

pub fn cmd_parse(g: &GlobalOpts, path: &Path) -> Result<Output, CliError> {
    let loaded = load(path)?;
    let net = &loaded.net;
    let mats = net.expand_directed().build_matrices();
    if g.json {
        return Ok(ok(to_json(&report("parse", &loaded, net, &mats))));
    }
    let mut out = String::new();
    let names: Vec<&str> = net.species().iter().map(|s| s.name.as_str()).collect();
    let _ = writeln!(out, "species ({}): {}", names.len(), names.join(" "));
    let _ = writeln!(out, "complexes ({}):", net.complexes().len());
    for (i, c) in net.complexes().iter().enumerate() {
        let _ = writeln!(out, "  {i}: {}", c.label);
    }
    let _ = writeln!(
        out,
        "reactions ({}, {} directed, {} reversible):",
        net.reactions().len(),
        mats.r_directed(),
        net.reactions().iter().filter(|r| r.reversible).count()
    );
    for line in net.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "linkage classes: {}", net.linkage_classes());
    let labels: Vec<String> = net.expand_directed().reactions().iter().map(|d| d.label.clone()).collect();
    let _ = writeln!(out, "directed order: {}", labels.join(" "));
    for (name, m) in [("A", &mats.a), ("B", &mats.b), ("S", &mats.s), ("E", &mats.e)] {
        out.push_str(&fmt_matrix(name, m));
    }
    Ok(ok(out))
}

pub fn cmd_feasibility(g: &GlobalOpts, path: &Path, nu: &str) -> Result<Output, CliError> {
    let loaded = load(path)?;
    let net = &loaded.net;
    let signs: SignVector = nu.parse()?;
    expect_len("flux pattern", net.reactions().len(), signs.len())?;
    let pattern = FluxPattern::for_network(net, signs)?;
    let ahat = net.reaction_matrix();
    let verdict = gordan_alternative(&ahat, &pattern)?;
    if !verdict.verify(&double_matrix(&ahat), &pattern) {
        return Err(CliError::argument("certificate", "failed exact re-verification"));
    }
    let code = if verdict.is_feasible() { exit::OK } else { exit::LOOP };
    let delta_g = match &verdict {
        FeasibilityVerdict::Potential(p) => Some(gibbs_differences(&p.gamma, &ahat)?),
        FeasibilityVerdict::Loop(_) => None,
    };
    let primary = if g.json {
        let mats = net.expand_directed().build_matrices();
        let mut rep = report("feasibility", &loaded, net, &mats);
        rep.feasibility = Some(FeasibilityJson::new(&verdict, pattern.signs().to_string(), delta_g));
        to_json(&rep)
    } else {
        match &verdict {
            FeasibilityVerdict::Potential(p) => format!(
                "FEASIBLE\nnu = {}\ngamma = {}\ndelta_g = {}\n",
                pattern.signs(),
                fmt_vec(&p.gamma),
                fmt_vec(delta_g.as_deref().unwrap_or_default())
            ),
            FeasibilityVerdict::Loop(l) => format!(
                "LOOP\nnu = {}\nz = {}\nnet flux = {}\nstrict at reaction {}\n",
                pattern.signs(),
                fmt_vec(&l.z),
                fmt_vec(&l.net_flux()),
                net.reactions()[l.pair].label
            ),
        }
    };
    Ok(Output { primary, diagnostics: String::new(), code })
}

pub fn cmd_injectivity(g: &GlobalOpts, path: &Path) -> Result<Output, CliError> {
    let loaded = load(path)?;
    let net = &loaded.net;
    let mats = net.expand_directed().build_matrices();
    let rep = full_report(net, &mats, g.cap)?;
    let code = if rep.sig_condition.holds { exit::OK } else { exit::SIG_FAILS };
    let primary = if g.json {
        let mut r = report("injectivity", &loaded, net, &mats);
        r.injectivity = Some(InjectivityJson::from(&rep));
        to_json(&r)
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "sig condition: {}", if rep.sig_condition.holds { "holds" } else { "fails" });
        if let Some(v) = &rep.sig_condition.violation {
            let _ = writeln!(
                out,
                "  x = {} with sign {} maps to sign {} in sigma(ker A)",
                fmt_vec(&v.witness),
                v.source_sign,
                v.kernel_sign
            );
        }
        let _ = writeln!(out, "  exact probes: {}", rep.sig_condition.probes);
        let _ = writeln!(
            out,
            "phi_B injective: {}",
            if rep.phi_b_injective.holds { "yes" } else { "no" }
        );
        if let Some(s) = &rep.phi_b_injective.violation {
            let _ = writeln!(out, "  common sign with ker B: {s}");
        }
        let _ = writeln!(out, "span condition: {}", rep.span_condition);
        let _ = writeln!(out, "weakly reversible: {}", rep.weakly_reversible);
        let _ = writeln!(out, "deficiency: {}", rep.deficiency);
        let _ = writeln!(out, "dim ker A: {}", rep.kernel_dim);
        out
    };
    Ok(Output { primary, diagnostics: String::new(), code })
}

fn dynamics_inputs(
    args: &DynamicsArgs,
    net: &ReactionNetwork,
) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let x0 = parse_floats("x0", &args.x0)?;
    expect_len("x0", net.species_count(), x0.len())?;
    require_positive("x0", &x0)?;
    let directed = net.expand_directed();
    let kappa = match &args.kappa {
        Some(k) => parse_floats("kappa", k)?,
        None => directed.rates().iter().map(to_f64).collect(),
    };
    expect_len("kappa", directed.reactions().len(), kappa.len())?;
    require_positive("kappa", &kappa)?;
    Ok((x0, kappa))
}

pub fn cmd_simulate(
    g: &GlobalOpts,
    path: &Path,
    args: &DynamicsArgs,
    t_end: f64,
    feed: Option<&str>,
    opts: &IntegratorOptions,
) -> Result<Output, CliError> {
    let loaded = load(path)?;
    let (x0, kappa) = dynamics_inputs(args, &loaded.net)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::argument("t-end", "must be finite and nonnegative"));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(CliError::argument("rtol/atol", "tolerances must be positive"));
    }
    let net = match feed {
        Some(text) => {
            let c = parse_rationals("feed", text)?;
            expect_len("feed", loaded.net.species_count(), c.len())?;
            loaded.net.augment_cfstr(&c)?
        }
        None => loaded.net.clone(),
    };
    let mats = net.expand_directed().build_matrices();
    let sys = MassAction::new(&mats);
    let feed_f: Option<Vec<f64>> = sys.feed().map(<[f64]>::to_vec);
    let rhs = |x: &[f64]| match &feed_f {
        Some(c) => sys.cfstr_rhs(x, &kappa, c),
        None => sys.f_kappa(x, &kappa),
    };
    let traj = match &feed_f {
        Some(c) => sys.integrate_cfstr(&x0, &kappa, c, t_end, opts)?,
        None => sys.integrate(&x0, &kappa, t_end, opts)?,
    };
    let (t_final, x_final) = traj.last();
    let final_rhs = rhs(x_final)?;
    let residual = final_rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut diagnostics = String::new();
    let _ = writeln!(diagnostics, "steps: {}", traj.len() - 1);
    let _ = writeln!(diagnostics, "final t: {t_final}");
    let _ = writeln!(diagnostics, "final state: {}", fmt_vec(x_final));
    let _ = writeln!(diagnostics, "final |dx/dt|_inf: {residual:e}");

    let primary = if g.json {
        let orth = sys.orthogonality_check(x_final, &kappa, 1e-8)?;
        let mut r = report("simulate", &loaded, &net, &mats);
        r.dynamics = Some(DynamicsJson::Simulation(SimulationJson {
            x0: x0.clone(),
            kappa: kappa.clone(),
            feed: feed_f.clone(),
            t_end,
            steps: traj.len() - 1,
            final_state: x_final.to_vec(),
            final_residual: residual,
            orthogonality: OrthogonalityJson::from(&orth),
        }));
        to_json(&r)
    } else {
        let n = x0.len();
        let mut csv = String::from("t");
        for i in 1..=n {
            let _ = write!(csv, ",x_{i}");
        }
        for i in 1..=n {
            let _ = write!(csv, ",dx_{i}");
        }
        csv.push('\n');
        for (t, x) in traj.times.iter().zip(&traj.states) {
            let dx = rhs(x)?;
            let _ = write!(csv, "{t}");
            for v in x.iter().chain(&dx) {
                let _ = write!(csv, ",{v}");
            }
            csv.push('\n');
        }
        csv
    };
    Ok(Output { primary, diagnostics, code: exit::OK })
}

/// Log-uniform rate vectors; draw `d` uses stream `d` of a generator seeded
/// with `seed`.
pub fn kappa_draw(seed: u64, draw: usize, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw as u64);
    let (lo, hi) = (KAPPA_DRAW_RANGE.0.log10(), KAPPA_DRAW_RANGE.1.log10());
    (0..len).map(|_| 10f64.powf(rng.random_range(lo..hi))).collect()
}

pub fn cmd_multistart(
    g: &GlobalOpts,
    path: &Path,
    args: &DynamicsArgs,
    trials: usize,
    kappa_draws: Option<usize>,
) -> Result<Output, CliError> {
    if trials == 0 {
        return Err(CliError::argument("trials", "at least one trial is required"));
    }
    let loaded = load(path)?;
    let net = &loaded.net;
    let (x0, kappa) = dynamics_inputs(args, net)?;
    let mats = net.expand_directed().build_matrices();
    let sys = MassAction::new(&mats);
    let kappas: Vec<Vec<f64>> = match kappa_draws {
        None => vec![kappa],
        Some(0) => return Err(CliError::argument("kappa-draws", "at least one draw is required")),
        Some(d) => (0..d).map(|i| kappa_draw(g.seed, i, kappa.len())).collect(),
    };
    let opts = EquilibriumOptions { relax_time: MULTISTART_RELAX_TIME, ..EquilibriumOptions::default() };
    let mut draws = Vec::with_capacity(kappas.len());
    for (i, k) in kappas.into_iter().enumerate() {
        let set = sys.multistart_uniqueness(&x0, &k, trials, g.seed.wrapping_add(i as u64), &opts)?;
        draws.push(DrawJson::new(k, &set));
    }
    let max_clusters = draws.iter().map(|d| d.clusters.len()).max().unwrap_or(0);
    let primary = if g.json {
        let mut r = report("multistart", &loaded, net, &mats);
        r.dynamics = Some(DynamicsJson::Multistart(MultistartJson {
            x0,
            trials,
            seed: g.seed,
            draws,
            max_clusters,
        }));
        to_json(&r)
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "max clusters per class: {max_clusters}");
        for (i, d) in draws.iter().enumerate() {
            let _ = writeln!(
                out,
                "draw {i}: kappa = {} -> {} cluster(s), {} failed start(s)",
                fmt_vec(&d.kappa),
                d.clusters.len(),
                d.failures
            );
            for c in &d.clusters {
                let _ = writeln!(
                    out,
                    "  x* = {}  residual {:e}  basin {}",
                    fmt_vec(&c.state),
                    c.residual,
                    c.basin_count
                );
            }
        }
        out
    };
    Ok(ok(primary))
}
