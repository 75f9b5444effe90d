use std::path::Path;

use log::warn;
use varlp::instance::{Instance, InstanceError, Metadata};
use varlp::report::{format_g17, render_csv, ProbeInstance, ProbeReport};
use varlp::verify::{
    convexity_suite, homogeneity_suite, iterate_suite, iterated_crossing_search, lemma_crossing_probe, lemma_suite,
    oracle_suite, quasi_norm_boundary_scan, random_instance, strict_convexity_probe, triangle_check, triangle_suite,
    unit_ball_suite, InstanceSpec, ZETA_FLOOR,
};
use varlp::{
    component_weight, luxemburg_norm, mixed_modular, mixed_norm, mixed_norm_with_diagnostics, modular_p,
    witness_decomposition, ComponentWeights, Error, SimpleFunction, SolverConfig,
};

use crate::output::{emit, sibling};
use crate::{Cli, Command, GenArgs, ProbeArgs, ProbeKind, Suite, ValueArgs, VerifyArgs, TOLERANCE_ENV};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root_cause() {
            Error::NonConvergence { .. } | Error::Overflow { .. } => EXIT_SOLVER,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        input(format!("i/o error: {e}"))
    }
}

type Outcome2 = Result<u8, Failure>;

struct Context {
    cfg: SolverConfig,
    tolerance_source: String,
}

pub fn run(cli: Cli) -> u8 {
    let result = context(&cli).and_then(|ctx| dispatch(cli.command, &ctx));
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn context(cli: &Cli) -> Result<Context, Failure> {
    let (rel_tolerance, tolerance_source) = match (cli.rel_tol, std::env::var(TOLERANCE_ENV)) {
        (Some(t), _) => (t, "flag".to_string()),
        (None, Ok(v)) => {
            let t = v
                .trim()
                .parse::<f64>()
                .map_err(|_| input(format!("{TOLERANCE_ENV}={v:?} is not a number")))?;
            (t, format!("env:{TOLERANCE_ENV}"))
        }
        (None, Err(_)) => (SolverConfig::default().rel_tolerance, "default".to_string()),
    };
    let cfg = SolverConfig {
        rel_tolerance,
        max_bisection_iters: cli.max_iters,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    Ok(Context { cfg, tolerance_source })
}

fn dispatch(command: Command, ctx: &Context) -> Outcome2 {
    match command {
        Command::Modular(args) => value(&args, ctx, false),
        Command::Norm(args) => value(&args, ctx, true),
        Command::ComponentWeight { instance, component } => {
            let inst = load(&instance)?;
            let f = component_of(&inst, component)?;
            print_value(component_weight(f, &inst.p, &inst.q, &ctx.cfg)?);
            Ok(EXIT_OK)
        }
        Command::Verify(args) => verify(args, ctx),
        Command::Probe(args) => probe(args, ctx),
        Command::Generate { gen, description, out } => {
            let spec = instance_spec(&gen)?;
            let (f, p, q) = random_instance(&spec)?;
            let mut inst = Instance::new(f, p, q);
            inst.metadata = Metadata {
                seed: Some(spec.seed),
                description,
            };
            emit(out.as_deref(), &inst.to_json())?;
            Ok(EXIT_OK)
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let inst = Instance::load(path)?;
    if inst.is_quasi() {
        warn!("{}: exponents <= 1 present; values are quasi-norm quantities", path.display());
    }
    Ok(inst)
}

fn component_of(inst: &Instance, k: usize) -> Result<&SimpleFunction, Failure> {
    inst.f
        .components()
        .get(k)
        .ok_or_else(|| input(format!("component {k} out of range (instance has {})", inst.f.len())))
}

fn print_value(v: f64) {
    println!("{}", format_g17(v));
}

fn value(args: &ValueArgs, ctx: &Context, norm: bool) -> Outcome2 {
    let inst = load(&args.instance)?;
    let v = match (args.component, norm) {
        (Some(k), false) => modular_p(component_of(&inst, k)?, &inst.p)?,
        (Some(k), true) => luxemburg_norm(component_of(&inst, k)?, &inst.p, &ctx.cfg)?,
        (None, false) => mixed_modular(&inst.f, &inst.p, &inst.q, &ctx.cfg)?,
        (None, true) => {
            let s = mixed_norm_with_diagnostics(&inst.f, &inst.p, &inst.q, &ctx.cfg)?;
            eprintln!("outer_iterations={} rel_tolerance={}", s.outer_iterations, format_g17(ctx.cfg.rel_tolerance));
            s.value
        }
    };
    print_value(v);
    Ok(EXIT_OK)
}

fn parse_range(name: &str, s: &str) -> Result<(f64, f64), Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| input(format!("--{name} {s:?}: expected lo:hi or a single number")))
    };
    match s.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let v = num(s)?;
            Ok((v, v))
        }
    }
}

fn instance_spec(gen: &GenArgs) -> Result<InstanceSpec, Failure> {
    let spec = InstanceSpec {
        seed: gen.seed,
        dimension: gen.dimension,
        cell_count: gen.cells,
        component_count: gen.components,
        p_range: parse_range("p", &gen.p)?,
        q_range: parse_range("q", &gen.q)?,
        amplitude: gen.amplitude,
        allow_quasi: gen.allow_quasi,
    };
    spec.validate()?;
    Ok(spec)
}

fn load_pair(paths: &[std::path::PathBuf]) -> Result<ProbeInstance, Failure> {
    let a = load(&paths[0])?;
    let b = load(&paths[1])?;
    if a.p != b.p || a.q != b.q {
        return Err(input(format!(
            "{} and {} must share grid and exponents",
            paths[0].display(),
            paths[1].display()
        )));
    }
    Ok(ProbeInstance {
        f: a.f,
        g: b.f,
        p: a.p,
        q: a.q,
    })
}

fn exit_for(reports: &[ProbeReport]) -> u8 {
    if reports.iter().all(ProbeReport::passed) {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn write_report(name: &str, reports: &[ProbeReport], seed: Option<u64>, out: Option<&Path>, ctx: &Context) -> Outcome2 {
    let csv = render_csv(name, reports, ctx.cfg.rel_tolerance, &ctx.tolerance_source, seed);
    emit(out, &csv)?;
    Ok(exit_for(reports))
}

fn verify(args: VerifyArgs, ctx: &Context) -> Outcome2 {
    let cfg = &ctx.cfg;
    let name = match args.suite {
        Suite::Triangle => "triangle",
        Suite::Convexity => "convexity",
        Suite::Oracle => "oracle",
        Suite::QuasiScan => "quasi-scan",
        Suite::Homogeneity => "homogeneity",
        Suite::UnitBall => "unit-ball",
    };
    if let Some(paths) = &args.pair {
        let pair = load_pair(paths)?;
        let mut report = match args.suite {
            Suite::Triangle | Suite::QuasiScan => triangle_check(&pair.f, &pair.g, &pair.p, &pair.q, cfg)?,
            Suite::Convexity => strict_convexity_probe(&pair.f, &pair.g, &pair.p, &pair.q, cfg)?,
            _ => return Err(input(format!("--pair is not supported by {name}"))),
        };
        report.probe = name.to_string();
        return write_report(name, &[report], None, args.out.as_deref(), ctx);
    }

    let mut gen = args.gen.clone();
    if args.suite == Suite::QuasiScan {
        gen.allow_quasi = true;
    }
    let spec = instance_spec(&gen)?;
    let reports = match args.suite {
        Suite::Triangle => triangle_suite(&spec, args.trials, cfg)?,
        Suite::Convexity => convexity_suite(&spec, args.trials, args.proportional, cfg)?,
        Suite::Oracle => oracle_suite(&spec, &args.exponents, args.trials, cfg)?,
        Suite::QuasiScan => quasi_norm_boundary_scan(&spec, args.trials, cfg)?,
        Suite::Homogeneity => homogeneity_suite(&spec, args.trials, cfg)?,
        Suite::UnitBall => unit_ball_suite(&spec, args.trials, cfg)?,
    };
    if let Some(out) = &args.out {
        for r in &reports {
            if let (Some(rep), Some(trial)) = (&r.reproducer, r.trial) {
                for (tag, seq) in [("f", &rep.f), ("g", &rep.g)] {
                    let mut inst = Instance::new(seq.clone(), rep.p.clone(), rep.q.clone());
                    inst.metadata.seed = r.seed;
                    emit(Some(&sibling(out, trial, tag)), &inst.to_json())?;
                }
            }
        }
    }
    let violations = reports.iter().filter(|r| !r.passed()).count();
    if violations > 0 {
        eprintln!("{name}: {violations} of {} trials not passing", reports.len());
    }
    write_report(name, &reports, Some(spec.seed), args.out.as_deref(), ctx)
}

fn default_zeta(pair: &ProbeInstance, cfg: &SolverConfig) -> Result<ComponentWeights, Failure> {
    let nf = mixed_norm(&pair.f, &pair.p, &pair.q, cfg)?;
    let ng = mixed_norm(&pair.g, &pair.p, &pair.q, cfg)?;
    if nf == 0.0 || ng == 0.0 {
        return Err(input("default zeta needs nonzero f and g; pass --zeta"));
    }
    let mid = pair.f.combine(0.5 / nf, &pair.g, 0.5 / ng)?;
    Ok(witness_decomposition(&mid, &pair.p, &pair.q, cfg)?.with_floor(ZETA_FLOOR))
}

fn probe(args: ProbeArgs, ctx: &Context) -> Outcome2 {
    let cfg = &ctx.cfg;
    let name = match args.kind {
        ProbeKind::Lemma => "lemma",
        ProbeKind::Iterate => "iterate",
    };
    let Some(instance) = &args.instance else {
        let spec = instance_spec(&args.gen)?;
        let reports = match args.kind {
            ProbeKind::Lemma => lemma_suite(&spec, args.trials, cfg)?,
            ProbeKind::Iterate => iterate_suite(&spec, args.trials, cfg)?,
        };
        return write_report(name, &reports, Some(spec.seed), args.out.as_deref(), ctx);
    };

    let other = args.other.clone().expect("clap enforces --other");
    let pair = load_pair(&[instance.clone(), other])?;
    let nu = args.nu.expect("clap enforces --nu");
    let (mu1, mu2) = (args.mu1.expect("clap enforces --mu1"), args.mu2.expect("clap enforces --mu2"));
    let n = pair.f.len().max(pair.g.len());
    if nu < n {
        let (f, g) = (pair.f.padded(n), pair.g.padded(n));
        if !(f.components()[nu].is_nonnegative() && g.components()[nu].is_nonnegative()) {
            return Err(input(format!(
                "component {nu} has negative values; crossing probes accept only nonnegative inputs"
            )));
        }
    }
    let zeta = match &args.zeta {
        Some(z) => ComponentWeights::new(z.clone())?,
        None => default_zeta(&pair, cfg)?,
    };
    let reports = match args.kind {
        ProbeKind::Lemma => vec![lemma_crossing_probe(&pair.f, &pair.g, &zeta, nu, mu1, mu2, &pair.p, &pair.q, cfg)?],
        ProbeKind::Iterate => {
            let (summary, seq) = iterated_crossing_search(&pair.f, &pair.g, &zeta, nu, mu1, mu2, &pair.p, &pair.q, cfg)?;
            eprintln!(
                "stop={:?} stage={} stages={} terminal_modular={}",
                seq.stop,
                seq.stop_stage,
                seq.steps.len(),
                format_g17(seq.terminal_modular)
            );
            for (n, (r, sum)) in seq.steps.iter().zip(&seq.partial_sums).enumerate() {
                eprintln!("r[{}]={} sum[{}]={}", n + 1, format_g17(*r), n + 1, format_g17(*sum));
            }
            vec![summary]
        }
    };
    write_report(name, &reports, None, args.out.as_deref(), ctx)
}
