//! Command-line driver.
//!
//! Exit codes: 0 success (Koszul PASS), 1 Koszul FAIL, 2 bad input,
//! 3 `Γ` not interval-closed, 4 `Ψ` not on a proper face.

pub mod cache;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::characters::{irr_character, ModuleSpec};
use crate::facegeom::{
    enumerate_face_subsets, is_rigid_bruteforce, lies_on_proper_face, weight_system, PsiFace, RigidVerdict,
    WeightSystem, DEFAULT_RIGID_BOUND,
};
use crate::homdims::gldim;
use crate::koszulcheck::{full_report, witness_interval, KoszulError};
use crate::rootsystem::{CartanDatum, RootSystem, Weight};
use crate::weightposet::{downset_psi, interval_coincidence, interval_psi, GammaSet, LambdaPoint};
use cache::{default_cache_dir, CharacterCache};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CLOSED: i32 = 3;
pub const EXIT_NOT_RIGID: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "facekoszul", version, about = "Weight-polytope faces, Ext dimensions and Koszulity checks")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Character cache directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Depth of truncated downsets when no lower endpoint is given.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_depth: usize,
    /// Largest k tried by the witness search.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_k: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Positive roots, ρ and the invariant form.
    Roots(SystemArgs),
    /// Character of an irreducible module.
    Character {
        #[command(flatten)]
        system: SystemArgs,
        /// Highest weight, e.g. "1,1".
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Weights of a module with multiplicities.
    Weights(ModuleArgs),
    /// All proper faces of the weight polytope.
    Faces(ModuleArgs),
    /// Face certificate and exhaustive rigidity search for Ψ.
    Rigid {
        #[command(flatten)]
        face: FaceArgs,
        /// Total-length bound for the search.
        #[arg(long, default_value_t = DEFAULT_RIGID_BOUND)]
        bound: usize,
    },
    /// Points of a face-order interval or truncated downset.
    Interval(GammaArgs),
    /// Global dimension of a truncation.
    Gldim(GammaArgs),
    /// Top-degree witness interval.
    Witness {
        #[command(flatten)]
        face: FaceArgs,
        /// Starting dominant weight η.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
    },
    /// Full numerical Koszulity report.
    Koszul {
        #[command(flatten)]
        gamma: GammaArgs,
        /// Also construct the witness interval.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Cartan type such as "A2", "C2" or "G2".
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "cartan")]
    pub type_name: Option<String>,
    /// JSON file with {"rank","cartan"[,"symmetrizer"]} or {"type","rank"}.
    #[arg(long, value_name = "FILE")]
    pub cartan: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Irreducible summand "λ" or "λ*m"; repeat for direct sums.
    #[arg(long = "module", required = true, allow_hyphen_values = true)]
    pub module: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct FaceArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Element of Ψ; repeat for each weight.
    #[arg(long = "psi", required = true, allow_hyphen_values = true)]
    pub psi: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct GammaArgs {
    #[command(flatten)]
    pub face: FaceArgs,
    /// Lower endpoint "λ@r".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "point")]
    pub from: Option<String>,
    /// Upper endpoint "λ@r".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "point")]
    pub to: Option<String>,
    /// Explicit member of Γ; repeat for each point.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    NotClosed,
    NotRigid(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
        if self.cli.json {
            writeln!(self.out, "{}", serde_json::to_string_pretty(value)?)?;
        } else {
            writeln!(self.out, "{}", text())?;
        }
        Ok(())
    }

    fn cache(&self) -> Option<CharacterCache> {
        self.cli
            .cache_dir
            .clone()
            .or_else(default_cache_dir)
            .map(CharacterCache::new)
    }

    fn warm(&self, rs: &Arc<RootSystem>, lam: &Weight) -> Result<(), CliError> {
        rs.check_rank(lam)?;
        if let Some(cache) = self.cache() {
            cache.load(rs, lam)?;
        }
        Ok(())
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, out };
    match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::NotClosed) => {
            let _ = writeln!(err, "error: Γ is not interval-closed");
            EXIT_NOT_CLOSED
        }
        Err(CliError::NotRigid(msg)) => {
            let _ = writeln!(err, "error: Ψ does not lie on a proper face\n{msg}");
            EXIT_NOT_RIGID
        }
    }
}

pub fn parse_type(name: &str) -> Result<CartanDatum, String> {
    let name = name.trim();
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or(format!("bad type {name:?}"))?;
    let (letter, rank) = name.split_at(split);
    let rank: usize = rank.parse().map_err(|_| format!("bad type {name:?}"))?;
    CartanDatum::of_type(letter, rank).map_err(|e| e.to_string())
}

/// Read a Cartan datum from JSON text.
pub fn parse_cartan_json(text: &str) -> Result<CartanDatum, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if let Some(t) = v.get("type").and_then(Value::as_str) {
        return match v.get("rank").and_then(Value::as_u64) {
            Some(rank) => CartanDatum::of_type(t, rank as usize).map_err(|e| e.to_string()),
            None => parse_type(t),
        };
    }
    let cartan: Vec<Vec<i64>> = serde_json::from_value(v.get("cartan").cloned().ok_or("missing \"cartan\"")?)
        .map_err(|e| e.to_string())?;
    if let Some(rank) = v.get("rank").and_then(Value::as_u64) {
        if rank as usize != cartan.len() {
            return Err(format!("rank {rank} does not match a {0}x{0} matrix", cartan.len()));
        }
    }
    match v.get("symmetrizer") {
        Some(d) => {
            let d: Vec<i64> = serde_json::from_value(d.clone()).map_err(|e| e.to_string())?;
            CartanDatum::new(cartan, d).map_err(|e| e.to_string())
        }
        None => CartanDatum::from_matrix(cartan).map_err(|e| e.to_string()),
    }
}

fn root_system(args: &SystemArgs) -> Result<Arc<RootSystem>, CliError> {
    let datum = match (&args.type_name, &args.cartan) {
        (Some(t), None) => parse_type(t)?,
        (None, Some(path)) => parse_cartan_json(&std::fs::read_to_string(path)?)?,
        _ => return Err(CliError::Input("give exactly one of --type or --cartan".into())),
    };
    Ok(RootSystem::build(datum)?)
}

fn parse_weight(rs: &RootSystem, s: &str) -> Result<Weight, CliError> {
    let w = Weight::parse(s)?;
    rs.check_rank(&w)?;
    Ok(w)
}

fn module(ctx: &Ctx, args: &ModuleArgs) -> Result<Arc<WeightSystem>, CliError> {
    let rs = root_system(&args.system)?;
    let spec = ModuleSpec::parse(&args.module)?;
    for (lam, _) in &spec.summands {
        ctx.warm(&rs, lam)?;
    }
    Ok(weight_system(&rs, &spec)?)
}

fn face(ctx: &Ctx, args: &FaceArgs) -> Result<PsiFace, CliError> {
    let ws = module(ctx, &args.module)?;
    let psi = args
        .psi
        .iter()
        .map(|s| parse_weight(ws.root_system(), s))
        .collect::<Result<Vec<_>, _>>()?;
    let face = lies_on_proper_face(&ws, &psi)?;
    if !face.is_face() {
        let verdict = is_rigid_bruteforce(&ws, &psi, DEFAULT_RIGID_BOUND)?;
        return Err(CliError::NotRigid(describe_rigid(&verdict)));
    }
    Ok(face)
}

fn parse_point(rs: &RootSystem, s: &str) -> Result<LambdaPoint, CliError> {
    let p = LambdaPoint::parse(s)?;
    rs.check_rank(&p.weight)?;
    Ok(p)
}

fn gamma(ctx: &Ctx, args: &GammaArgs) -> Result<(PsiFace, GammaSet), CliError> {
    let face = face(ctx, &args.face)?;
    let rs = face.root_system().clone();
    let g = if !args.point.is_empty() {
        let points = args
            .point
            .iter()
            .map(|s| parse_point(&rs, s))
            .collect::<Result<BTreeSet<_>, _>>()?;
        GammaSet::new(&face, points)?
    } else {
        let to = parse_point(&rs, args.to.as_deref().ok_or(CliError::Input("missing --to or --point".into()))?)?;
        match &args.from {
            Some(from) => interval_psi(&face, &parse_point(&rs, from)?, &to)?,
            None => downset_psi(&face, &to, ctx.cli.max_depth)?,
        }
    };
    if g.is_empty() {
        return Err(CliError::Input("Γ is empty".into()));
    }
    if !g.is_interval_closed() {
        return Err(CliError::NotClosed);
    }
    Ok((face, g))
}

fn describe_rigid(v: &RigidVerdict) -> String {
    match v {
        RigidVerdict::NoViolation => "no counterexample within the search bound".into(),
        RigidVerdict::Violation { m, r } => format!("counterexample: Σ m·α = Σ r·β with m = {} and r = {}", multiset(m), multiset(r)),
    }
}

fn multiset(items: &[(Weight, u64)]) -> String {
    let parts: Vec<String> = items.iter().map(|(w, k)| format!("{k}×{w}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn face_json(f: &PsiFace) -> Value {
    json!({
        "psi": f.psi(),
        "certificate": f.certificate().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "lambda_psi": f.lambda_psi(),
        "n_psi": f.n_psi(),
    })
}

fn points_text(points: &BTreeSet<LambdaPoint>) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n")
}

fn dispatch(ctx: &mut Ctx) -> CliResult {
    match &ctx.cli.command {
        Command::Roots(sys) => {
            let rs = root_system(sys)?;
            let form: Vec<Vec<String>> = rs.form().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let value = json!({
                "name": rs.datum().display_name(),
                "rank": rs.rank(),
                "cartan": rs.datum().cartan,
                "symmetrizer": rs.datum().symmetrizer,
                "positive_roots": rs.positive_roots(),
                "rho": rs.rho(),
                "form": form,
            });
            ctx.emit(&value, || {
                let roots: Vec<String> = rs.positive_roots().iter().map(|r| r.to_string()).collect();
                format!(
                    "{} (rank {})\n{} positive roots: {}\nρ = {}",
                    rs.datum().display_name(),
                    rs.rank(),
                    roots.len(),
                    roots.join(" "),
                    rs.rho()
                )
            })?;
        }
        Command::Character { system, weight } => {
            let rs = root_system(system)?;
            let lam = parse_weight(&rs, weight)?;
            ctx.warm(&rs, &lam)?;
            let ch = irr_character(&rs, &lam)?;
            let value = json!({
                "highest_weight": lam,
                "dimension": ch.dimension(),
                "weights": ch.mults().iter().collect::<Vec<_>>(),
            });
            ctx.emit(&value, || {
                let lines: Vec<String> = ch.mults().iter().map(|(w, m)| format!("{w} {m}")).collect();
                format!("dim V({lam}) = {}\n{}", ch.dimension(), lines.join("\n"))
            })?;
        }
        Command::Weights(args) => {
            let ws = module(ctx, args)?;
            let value = json!({
                "dimension": ws.dimension(),
                "weights": ws.weights().iter().collect::<Vec<_>>(),
            });
            ctx.emit(&value, || {
                let lines: Vec<String> = ws.weights().iter().map(|(w, m)| format!("{w} {m}")).collect();
                format!("dim V = {}\n{}", ws.dimension(), lines.join("\n"))
            })?;
        }
        Command::Faces(args) => {
            let ws = module(ctx, args)?;
            let faces = enumerate_face_subsets(&ws)?;
            let value: Vec<Value> = faces.iter().map(face_json).collect();
            ctx.emit(&value, || {
                let lines: Vec<String> = faces
                    .iter()
                    .map(|f| {
                        let psi: Vec<String> = f.psi().iter().map(|w| w.to_string()).collect();
                        let xi: Vec<String> = f.certificate().unwrap_or(&[]).iter().map(|x| x.to_string()).collect();
                        format!("{{{}}}  ξ = ({})", psi.join(", "), xi.join(","))
                    })
                    .collect();
                format!("{} proper faces\n{}", faces.len(), lines.join("\n"))
            })?;
        }
        Command::Rigid { face: args, bound } => {
            let ws = module(ctx, &args.module)?;
            let psi = args
                .psi
                .iter()
                .map(|s| parse_weight(ws.root_system(), s))
                .collect::<Result<Vec<_>, _>>()?;
            let f = lies_on_proper_face(&ws, &psi)?;
            let verdict = is_rigid_bruteforce(&ws, &psi, *bound)?;
            let value = json!({
                "face": face_json(&f),
                "on_proper_face": f.is_face(),
                "bruteforce": verdict,
                "bound": bound,
            });
            ctx.emit(&value, || {
                format!("on proper face: {}\nbrute force (bound {bound}): {}", f.is_face(), describe_rigid(&verdict))
            })?;
            if !f.is_face() {
                return Err(CliError::NotRigid(describe_rigid(&verdict)));
            }
        }
        Command::Interval(args) => {
            let (f, g) = gamma(ctx, args)?;
            let coincide = match (&args.from, &args.to) {
                (Some(from), Some(to)) => {
                    let rs = f.root_system();
                    Some(interval_coincidence(&f, &parse_point(rs, from)?, &parse_point(rs, to)?)?)
                }
                _ => None,
            };
            let value = json!({
                "points": g.points(),
                "size": g.len(),
                "interval_closed": g.is_interval_closed(),
                "coincides_with_coarse_interval": coincide,
            });
            ctx.emit(&value, || format!("{} points\n{}", g.len(), points_text(g.points())))?;
        }
        Command::Gldim(args) => {
            let (f, g) = gamma(ctx, args)?;
            let d = gldim(&g)?;
            let value = json!({ "gldim": d, "n_psi": f.n_psi(), "size": g.len() });
            ctx.emit(&value, || format!("gldim = {d} (N_Ψ = {}, |Γ| = {})", f.n_psi(), g.len()))?;
        }
        Command::Witness { face: args, eta } => {
            let f = face(ctx, args)?;
            let rs = f.root_system().clone();
            let eta = match eta {
                Some(s) => parse_weight(&rs, s)?,
                None => Weight::zero(rs.rank()),
            };
            let (rec, _) = witness_interval(&f, &eta, ctx.cli.max_k).map_err(koszul_error)?;
            ctx.emit(&rec, || {
                format!(
                    "k = {}, μ = {}\nΓ* = [{}, {}], {} points, gldim = {} (N_Ψ = {})",
                    rec.search.k,
                    rec.search.nu,
                    rec.bottom,
                    rec.top,
                    rec.size,
                    rec.gldim,
                    f.n_psi()
                )
            })?;
        }
        Command::Koszul { gamma: args, witness } => {
            let (f, g) = gamma(ctx, args)?;
            let report = full_report(&f, &g, witness.then_some(ctx.cli.max_k)).map_err(koszul_error)?;
            let pass = report.verdict.is_pass();
            ctx.emit(&report, || {
                let mut s = format!(
                    "{}: |Γ| = {}, N_Ψ = {}, gldim = {}",
                    report.verdict.status,
                    report.index.len(),
                    report.n_psi,
                    report.gldim
                );
                if let (Some(row), Some(col)) = (&report.verdict.row, &report.verdict.col) {
                    s.push_str(&format!("\nresidual at ({row}, {col}): {:?}", report.verdict.residual));
                }
                if let Some(w) = &report.witness {
                    s.push_str(&format!("\nwitness Γ* = [{}, {}]: gldim = {}", w.bottom, w.top, w.gldim));
                }
                s
            })?;
            return Ok(if pass { EXIT_PASS } else { EXIT_FAIL });
        }
    }
    Ok(EXIT_PASS)
}

fn koszul_error(e: KoszulError) -> CliError {
    match e {
        KoszulError::NotIntervalClosed => CliError::NotClosed,
        KoszulError::NotRigid => CliError::NotRigid(String::new()),
        other => CliError::Input(other.to_string()),
    }
}
