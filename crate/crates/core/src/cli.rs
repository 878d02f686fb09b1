//! Command dispatch. `run` does all the work and returns the report; the
//! binary only parses arguments and prints.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::algebra::build_twisted_group_algebra;
use crate::dual::{build_dual, orbit_decompose, DualSpace};
use crate::error::{Error, Result};
use crate::extension::TwistedExtension;
use crate::functors::{sheaf_equivalence_check, Context, RoundTrip};
use crate::gpd_extension::GroupoidExtensionSpec;
use crate::groupoid::build_convolution_algebra;
use crate::io::{parse_instance, InstanceFile, Scalar};
use crate::morita::{build_dual_algebra, groupoid_morita_check, morita_check, quotient_reduction_check, MoritaReport};
use crate::report::{ActionOut, CocycleOut, DualOut, InvariantsOut, OrbitOut, PointOut, Report, Stage, Timing};

/// Random objects per side in the functor suite, on top of the regular ones.
pub const FUNCTOR_SAMPLES: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "gerbe-dual", version, about = "Duals of twisted group and groupoid extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an instance and verify all of its defining identities.
    Validate(CommonArgs),
    /// Compute the dual: points, action, dual cocycle and orbits.
    Dual(CommonArgs),
    /// Block decompositions and centers of both algebras, orbit by orbit.
    Invariants(CommonArgs),
    /// Run the verification suites; exits nonzero if any verdict fails.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated: morita, functors or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Morita,
    Functors,
}

pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s.trim().is_empty() {
        return Err(Error::Usage("empty suite selection".into()));
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let add: &[Suite] = match part {
            "" => return Err(Error::Usage(format!("empty entry in suite list {s:?}"))),
            "morita" => &[Suite::Morita],
            "functors" => &[Suite::Functors],
            "all" => &[Suite::Morita, Suite::Functors],
            other => return Err(Error::Usage(format!("unknown suite {other:?} (expected morita, functors or all)"))),
        };
        for s in add {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    Ok(out)
}

enum Loaded {
    Group(TwistedExtension),
    Groupoid(GroupoidExtensionSpec),
}

impl Loaded {
    fn spec(&self) -> GroupoidExtensionSpec {
        match self {
            Loaded::Group(ext) => GroupoidExtensionSpec::from_group_extension(ext),
            Loaded::Groupoid(spec) => spec.clone(),
        }
    }
}

struct Run {
    report: Report,
    clock: Instant,
}

impl Run {
    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        let ms = now.duration_since(self.clock).as_secs_f64() * 1e3;
        self.report.timings.push(Timing { stage: stage.into(), ms });
        self.clock = now;
    }

    fn stage<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        self.lap(name);
        match r {
            Ok(v) => {
                self.report.stages.push(Stage { name: name.into(), ok: true, error: None });
                Some(v)
            }
            Err(e) => {
                self.report.stages.push(Stage { name: name.into(), ok: false, error: Some(e.to_string()) });
                None
            }
        }
    }
}

/// Reads and parses an instance file. Errors here are input errors, not verdicts.
fn read_instance(path: &PathBuf) -> Result<(InstanceFile, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse(format!("not UTF-8: {e}")))?;
    Ok((parse_instance(&text)?, digest))
}

fn load(doc: &InstanceFile, tol: f64) -> Result<Loaded> {
    match doc {
        InstanceFile::Group(g) => g.to_extension(tol).map(Loaded::Group),
        InstanceFile::Groupoid(g) => g.to_spec(tol).map(Loaded::Groupoid),
    }
}

pub fn run(command: &Command) -> Result<Report> {
    let (common, suites) = match command {
        Command::Validate(c) | Command::Dual(c) | Command::Invariants(c) => (c, Vec::new()),
        Command::Check(c) => (&c.common, parse_suites(&c.suite)?),
    };
    let name = match command {
        Command::Validate(_) => "validate",
        Command::Dual(_) => "dual",
        Command::Invariants(_) => "invariants",
        Command::Check(_) => "check",
    };
    let (doc, digest) = read_instance(&common.path)?;
    let (seed, tol) = (common.seed, common.tol);
    let mut run = Run {
        report: Report {
            command: name.into(),
            instance: common.path.display().to_string(),
            instance_digest: digest,
            seed,
            tol,
            stages: Vec::new(),
            verdicts: Vec::new(),
            residuals: Vec::new(),
            timings: Vec::new(),
            dual: None,
            invariants: None,
        },
        clock: Instant::now(),
    };
    let loaded = run.stage("validate", load(&doc, tol));
    match &loaded {
        Some(_) => run.report.verdict("instance-valid", true, "all defining identities hold"),
        None => {
            let msg = run.report.stages.last().and_then(|s| s.error.clone()).unwrap_or_default();
            run.report.verdict("instance-valid", false, msg);
        }
    }
    let Some(loaded) = loaded else {
        if suites.contains(&Suite::Morita) {
            unchecked_morita(&mut run, &doc);
        }
        return Ok(run.report);
    };
    if matches!(command, Command::Validate(_)) {
        return Ok(run.report);
    }

    let spec = loaded.spec();
    let dual = match &loaded {
        Loaded::Group(ext) => run.stage("dual", build_dual(ext, seed, tol).map(|d| d.space)),
        Loaded::Groupoid(spec) => run.stage("dual", crate::dual::build_dual_space(spec, seed, tol)),
    };
    let Some(dual) = dual else { return Ok(run.report) };
    dual_verdicts(&mut run, &spec, &dual, tol);

    match command {
        Command::Dual(_) => {
            if let Some(out) = run.stage("orbits", dual_out(&spec, &dual, tol)) {
                run.report.dual = Some(out);
            }
        }
        Command::Invariants(_) => {
            if let Some(inv) = run.stage("invariants", invariants(&loaded, &spec, &dual, seed, tol)) {
                let (out, reduction_ok) = inv;
                run.report.verdict("block-count", out.blocks_extension.len() == out.blocks_dual.len(), format!("{} vs {}", out.blocks_extension.len(), out.blocks_dual.len()));
                run.report.verdict("center-dim", out.center_extension == out.center_dual, format!("{} vs {}", out.center_extension, out.center_dual));
                run.report.verdict("orbit-reduction", reduction_ok, format!("per orbit {:?}", out.orbit_blocks));
                run.report.invariants = Some(out);
            }
        }
        Command::Check(_) => {
            for suite in suites {
                match suite {
                    Suite::Morita => morita_suite(&mut run, &loaded, &spec, &dual, seed, tol),
                    Suite::Functors => functor_suite(&mut run, &spec, &dual, seed, tol),
                }
            }
        }
        Command::Validate(_) => unreachable!("returned above"),
    }
    Ok(run.report)
}

fn dual_verdicts(run: &mut Run, spec: &GroupoidExtensionSpec, dual: &DualSpace, tol: f64) {
    let c = dual.certificates;
    run.report.residual("intertwining", c.intertwining_residual);
    run.report.residual("schur-deviation", c.schur_deviation);
    run.report.residual("dual-cocycle-identity", c.cocycle_residual);
    run.report.residual("dual-cocycle-modulus", c.modulus_residual);
    run.report.verdict("dual-cocycle", c.cocycle_residual < tol && c.modulus_residual < tol, format!("identity residual {:e}", c.cocycle_residual));
    run.report.verdict("schur-scalar", c.schur_deviation < tol, format!("deviation {:e}", c.schur_deviation));
    let sums: Vec<usize> = dual.fibers.iter().map(|f| f.dims().iter().map(|d| d * d).sum()).collect();
    let ok = sums.iter().all(|&s| s == spec.g.order());
    run.report.verdict("fiber-dimension-sum", ok, format!("sum of d^2 per object {sums:?}, |G| = {}", spec.g.order()));
}

fn dual_out(spec: &GroupoidExtensionSpec, dual: &DualSpace, tol: f64) -> Result<DualOut> {
    let points = (0..dual.n_points())
        .map(|p| {
            let (object, class) = dual.points[p];
            PointOut {
                index: p,
                object,
                class,
                dim: dual.dim(p),
                character: dual.fibers[object].characters[class].iter().map(|&z| Scalar::from_value(z)).collect(),
            }
        })
        .collect();
    let gpd = &dual.transformation.groupoid;
    let action = dual
        .transformation
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(point, arrow))| ActionOut { point, arrow, image: gpd.tgt(a) })
        .collect();
    let mut c = Vec::new();
    for a in 0..gpd.n_arrows() {
        for b in 0..gpd.n_arrows() {
            if gpd.compose(a, b).is_some() {
                let (point, q1) = dual.transformation.arrows[a];
                c.push(CocycleOut { point, q1, q2: dual.transformation.arrows[b].1, value: Scalar::from_value(dual.c.get(a, b)) });
            }
        }
    }
    let orbits = orbit_decompose(spec, dual, tol)?
        .into_iter()
        .map(|o| OrbitOut {
            isotropy_cocycle: (0..o.cocycle.size())
                .map(|i| (0..o.cocycle.size()).map(|j| Scalar::from_value(o.cocycle.get(i, j))).collect())
                .collect(),
            points: o.points,
            basepoint: o.basepoint,
            isotropy: o.isotropy,
        })
        .collect();
    Ok(DualOut { points, action, c, orbits })
}

fn invariants(loaded: &Loaded, spec: &GroupoidExtensionSpec, dual: &DualSpace, seed: u64, tol: f64) -> Result<(InvariantsOut, bool)> {
    let a = match loaded {
        Loaded::Group(ext) => build_twisted_group_algebra(&ext.h, &ext.t)?,
        Loaded::Groupoid(spec) => {
            let (gpd, theta) = spec.extension_groupoid()?;
            build_convolution_algebra(&gpd, &theta)?
        }
    };
    let b = build_dual_algebra(dual)?;
    let mut blocks_extension = a.wedderburn_blocks(seed)?;
    let mut blocks_dual = b.wedderburn_blocks(seed)?;
    blocks_extension.sort_unstable();
    blocks_dual.sort_unstable();
    let q = quotient_reduction_check(spec, dual, seed, tol)?;
    Ok((
        InvariantsOut {
            blocks_extension,
            blocks_dual,
            center_extension: a.center_dim()?,
            center_dual: b.center_dim()?,
            orbit_blocks: q.orbit_blocks,
        },
        q.verdict,
    ))
}

fn morita_certificate(r: &MoritaReport) -> String {
    format!(
        "blocks {:?} vs {:?}; centers {} vs {}; rank L(A) {} = dim commutant R(B) {}; rank R(B) {} = dim commutant L(A) {}; module residual {:e}",
        r.blocks_a, r.blocks_b, r.center_a, r.center_b, r.left_image_rank, r.right_commutant_dim, r.right_image_rank, r.left_commutant_dim, r.module_residual
    )
}

fn morita_suite(run: &mut Run, loaded: &Loaded, spec: &GroupoidExtensionSpec, dual: &DualSpace, seed: u64, tol: f64) {
    let report = match loaded {
        Loaded::Group(ext) => build_dual(ext, seed, tol).and_then(|d| morita_check(ext, &d, seed, tol)),
        Loaded::Groupoid(spec) => groupoid_morita_check(spec, dual, seed, tol),
    };
    run.lap("morita");
    match report {
        Ok(r) => {
            run.report.residual("bimodule", r.module_residual);
            run.report.verdict("morita", r.verdict, morita_certificate(&r));
        }
        Err(e) => run.report.verdict("morita", false, e.to_string()),
    }
    match quotient_reduction_check(spec, dual, seed, tol) {
        Ok(q) => run.report.verdict(
            "orbit-reduction",
            q.verdict,
            format!("{} blocks; per orbit (orbit algebra, isotropy algebra) {:?}", q.total_blocks, q.orbit_blocks),
        ),
        Err(e) => run.report.verdict("orbit-reduction", false, e.to_string()),
    }
    run.lap("orbit-reduction");
}

/// On an instance that failed validation, still builds the extension algebra
/// without checks so the Morita verdict can name the broken associativity.
fn unchecked_morita(run: &mut Run, doc: &InstanceFile) {
    let certificate = match doc {
        InstanceFile::Group(g) => match g.parts() {
            Ok((spec, t)) => match TwistedExtension::new_unchecked(spec, t) {
                Ok(ext) => match build_twisted_group_algebra(&ext.h, &ext.t) {
                    Ok(_) => "extension algebra is associative but the instance is invalid".to_string(),
                    Err(e) => format!("twisted group algebra: {e}"),
                },
                Err(e) => e.to_string(),
            },
            Err(e) => e.to_string(),
        },
        InstanceFile::Groupoid(_) => "not run: invalid instance".to_string(),
    };
    run.report.verdict("morita", false, certificate);
}

fn worst(v: &[RoundTrip]) -> f64 {
    v.iter()
        .map(|r| r.iso.intertwining_residual.max(r.input_residual).max(r.image_residual))
        .fold(0.0, f64::max)
}

fn functor_suite(run: &mut Run, spec: &GroupoidExtensionSpec, dual: &DualSpace, seed: u64, tol: f64) {
    let result = Context::new(spec, dual).and_then(|ctx| sheaf_equivalence_check(&ctx, FUNCTOR_SAMPLES, seed, tol));
    run.lap("functors");
    match result {
        Ok((reps, sheaves)) => {
            let (wr, ws) = (worst(&reps), worst(&sheaves));
            run.report.residual("T(S(V)) ~ V", wr);
            run.report.residual("S(T(W)) ~ W", ws);
            run.report.verdict("T-after-S", reps.iter().all(|r| r.holds(tol)), format!("{} objects, worst residual {wr:e}", reps.len()));
            run.report.verdict("S-after-T", sheaves.iter().all(|r| r.holds(tol)), format!("{} objects, worst residual {ws:e}", sheaves.len()));
        }
        Err(e) => run.report.verdict("functors", false, e.to_string()),
    }
}

/// Renders the report, returning the text and the exit status.
pub fn render(report: &Report, format: Format) -> (String, i32) {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    (text, if report.passed() { 0 } else { 1 })
}

pub fn format_of(command: &Command) -> Format {
    match command {
        Command::Validate(c) | Command::Dual(c) | Command::Invariants(c) => c.format,
        Command::Check(c) => c.common.format,
    }
}
