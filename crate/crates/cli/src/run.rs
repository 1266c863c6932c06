//! Command-line parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use mfsing_core::koszul::{identity_cone_with_contraction, rhom_trivial_dims, u_cone_check};
use mfsing_core::mf::{box_product, hom_cohomology_dims, is_null_homotopic, HomComplex};
use mfsing_core::orlov::{
    contraction_witness, fold, fold_monoidality_check, reduce_mf, reduce_presentation, search_equivalence, stable_dims_match,
    stabilize, EquivalenceSearch,
};
use mfsing_core::poly::parse_poly;
use mfsing_core::sing::{
    is_perfect, mf_perfectness, milnor_number, point_case_report, thom_sebastiani_check, u_torsion_order_point,
};
use mfsing_core::{Error, Field, KoszulModule, LGPair, Limits, MatrixFactorization, Poly, RingCtx};
use serde_json::json;

use crate::problem::{parse_field, parse_order, LoadError, Object, Problem, ProblemFile};
use crate::report::{degree_dims_value, dim_value, stable_dims_value, FactorizationReport, Report, Status};

const DEFAULT_WINDOW: i64 = 5;
const DEFAULT_MODULUS: u32 = 101;

#[derive(Debug, Parser)]
#[command(name = "mfsing", version, about = "Exact matrix factorization and singularity-category computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Coefficient field: Q or a prime (F_p, GF(p) or p).
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, global = true, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Monomial order: degrevlex (default), deglex or lex.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Half-width N of the reporting window [-2N, 2N] in the point case.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Bound on resolution steps for stabilize.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Seed for randomized subroutines; the commands are deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Prime used for closed-inverse searches.
    #[arg(long, global = true)]
    pub modulus: Option<u32>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Pair {
    pub file: PathBuf,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Single {
    pub file: PathBuf,
    #[arg(long)]
    pub object: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build every object in a problem file and check its identities.
    Validate { file: PathBuf },
    /// Cohomology of the Hom complex between two factorizations.
    Hom(Pair),
    /// Stable Hom dimensions between factorizations or Koszul modules.
    StableHom(Pair),
    /// Search for a null-homotopy of a closed morphism.
    NullHomotopy(Single),
    /// Box product of two factorizations over disjoint variables.
    Box(Pair),
    /// Fold a Koszul module into a factorization.
    Fold(Single),
    /// Compare the fold of a convolution with the box product of folds.
    Monoidality(Pair),
    /// Contracting homotopy of a fold from a contraction of the module.
    Contraction(Single),
    /// Stabilize the free resolution of a module over B/(f).
    Stabilize(Pair),
    /// Decide whether a module vanishes in the singularity category.
    Perfect(Single),
    /// Least power of u acting null-homotopically, over the point.
    UTorsion(Single),
    /// Cohomology dimensions of RHom from the trivial module, over the point.
    RhomPoint(Single),
    /// Compare the cone of u with the pull-push construction.
    UCone(Single),
    /// Milnor number of a potential.
    Milnor {
        #[arg(long = "f")]
        f: String,
    },
    /// Multiplicativity of Milnor numbers under the sum of potentials.
    TsCheck {
        /// Optional problem file with `mf` objects for f and g.
        file: Option<PathBuf>,
        #[arg(long = "f")]
        f: Option<String>,
        #[arg(long = "g")]
        g: Option<String>,
        /// Variables of g.
        #[arg(long, value_delimiter = ',')]
        g_vars: Option<Vec<String>>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Stable End, perfectness and u-torsion of the trivial module over the point.
    PointReport,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Hom(_) => "hom",
            Command::StableHom(_) => "stable-hom",
            Command::NullHomotopy(_) => "null-homotopy",
            Command::Box(_) => "box",
            Command::Fold(_) => "fold",
            Command::Monoidality(_) => "monoidality",
            Command::Contraction(_) => "contraction",
            Command::Stabilize(_) => "stabilize",
            Command::Perfect(_) => "perfect",
            Command::UTorsion(_) => "u-torsion",
            Command::RhomPoint(_) => "rhom-point",
            Command::UCone(_) => "u-cone",
            Command::Milnor { .. } => "milnor",
            Command::TsCheck { .. } => "ts-check",
            Command::PointReport => "point-report",
        }
    }
}

/// A command failure, turned into the report's status and location.
enum Failure {
    Load(LoadError),
    Math(Option<String>, Error),
    Status(Status, String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Load(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(None, e)
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Runs one invocation and returns the exit code with the report text.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let report = Report::new("").fail(Status::ParseError, None, e.to_string().trim_end().to_string());
            return (2, report.to_json());
        }
    };
    let name = cli.command.name();
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure::Load(e)) => Report::new(name).from_load_error(&e),
        Err(Failure::Math(loc, e)) => Report::new(name).from_error(loc, &e),
        Err(Failure::Status(s, msg)) => Report::new(name).fail(s, None, msg),
    };
    (report.status.exit_code(), report.to_json())
}

fn load(cli: &Cli, path: &PathBuf) -> std::result::Result<Problem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Status(Status::ParseError, format!("cannot read {}: {e}", path.display())))?;
    let mut file = ProblemFile::parse(&text)?;
    if let Some(f) = &cli.field {
        file.ring.field = f.clone();
    }
    if let Some(v) = &cli.vars {
        file.ring.vars = v.clone();
    }
    if let Some(o) = &cli.order {
        file.ring.order = Some(o.clone());
    }
    Ok(Problem::load(&file)?)
}

fn pick(flag: &Option<String>, param: &Option<String>, what: &str) -> std::result::Result<String, Failure> {
    flag.clone()
        .or_else(|| param.clone())
        .ok_or_else(|| Failure::Status(Status::ParseError, format!("no {what} given; pass --{what} or set params.{what}")))
}

fn as_mf<'a>(p: &'a Problem, name: &str) -> std::result::Result<MatrixFactorization, Failure> {
    match p.get(name)? {
        Object::Mf(e) => Ok(e.clone()),
        Object::Koszul(m) => Ok(fold(m).map_err(|e| Failure::Math(Some(format!("object `{name}`")), e))?),
        other => Err(wrong_kind(name, other, "mf or koszul")),
    }
}

fn as_koszul<'a>(p: &'a Problem, name: &str) -> std::result::Result<&'a KoszulModule, Failure> {
    match p.get(name)? {
        Object::Koszul(m) => Ok(m),
        other => Err(wrong_kind(name, other, "koszul")),
    }
}

fn wrong_kind(name: &str, obj: &Object, want: &str) -> Failure {
    Failure::Status(Status::ParseError, format!("object `{name}` is {}, expected {want}", obj.kind()))
}

fn limits() -> Limits {
    Limits::default()
}

fn window(cli: &Cli, p: Option<&Problem>) -> i64 {
    cli.window.or_else(|| p.and_then(|p| p.params.window)).unwrap_or(DEFAULT_WINDOW)
}

fn inline_ring(cli: &Cli, vars: &[String]) -> std::result::Result<std::sync::Arc<RingCtx>, Failure> {
    let field = parse_field(cli.field.as_deref().unwrap_or("Q"))?;
    Ok(RingCtx::new(field, vars, parse_order(cli.order.as_deref())?)?)
}

fn dispatch(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let mut r = Report::new(name);
    if let Some(seed) = cli.seed {
        r.note(format!("seed {seed} (no randomized steps)"));
    }
    match &cli.command {
        Command::Validate { file } => {
            let p = load(cli, file)?;
            for (n, obj) in &p.objects {
                let check = match obj {
                    Object::Mf(e) => e.validate(),
                    Object::Koszul(m) => m.validate(),
                    _ => Ok(()),
                };
                check.map_err(|e| Failure::Math(Some(format!("object `{n}`")), e))?;
                r.note(format!("{n}: {} ok", obj.kind()));
            }
        }
        Command::Hom(pair) => {
            let p = load(cli, &pair.file)?;
            let (s, t) = (pick(&pair.source, &p.params.source, "source")?, pick(&pair.target, &p.params.target, "target")?);
            let (e, f) = (mf_only(&p, &s)?, mf_only(&p, &t)?);
            let hc = HomComplex::new(&e, &f)?;
            r.note(format!("Hom complex ranks: even {}, odd {}", hc.d_even.cols(), hc.d_odd.cols()));
            r.dims = Some(stable_dims_value(&hom_cohomology_dims(&e, &f, &limits())?));
        }
        Command::StableHom(pair) => {
            let p = load(cli, &pair.file)?;
            let (s, t) = (pick(&pair.source, &p.params.source, "source")?, pick(&pair.target, &p.params.target, "target")?);
            let (e, f) = (as_mf(&p, &s)?, as_mf(&p, &t)?);
            r.dims = Some(stable_dims_value(&hom_cohomology_dims(&e, &f, &limits())?));
        }
        Command::NullHomotopy(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let Object::Hom(t) = p.get(&n)? else { return Err(wrong_kind(&n, p.get(&n)?, "hom")) };
            let w = is_null_homotopic(t, &limits())?;
            r.witness_present = Some(w.is_some());
            if let Some(s) = w {
                r.note(format!("s0 = {:?}, s1 = {:?}", s.m0().to_strings(), s.m1().to_strings()));
            } else {
                r.note("not a boundary in the Hom complex");
            }
        }
        Command::Box(pair) => {
            let p = load(cli, &pair.file)?;
            let (s, t) = (pick(&pair.source, &p.params.source, "source")?, pick(&pair.target, &p.params.target, "target")?);
            let e = box_product(&mf_only(&p, &s)?, &mf_only(&p, &t)?)?;
            r.factorization = Some(FactorizationReport::from(&e));
        }
        Command::Fold(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            r.factorization = Some(FactorizationReport::from(&fold(as_koszul(&p, &n)?)?));
        }
        Command::Monoidality(pair) => {
            let p = load(cli, &pair.file)?;
            let (s, t) = (pick(&pair.source, &p.params.source, "source")?, pick(&pair.target, &p.params.target, "target")?);
            if fold_monoidality_check(as_koszul(&p, &s)?, as_koszul(&p, &t)?)? {
                r.note("fold of the convolution equals the box product of folds");
            } else {
                return Err(Failure::Status(Status::Violation, "fold of the convolution differs from the box product".into()));
            }
        }
        Command::Contraction(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let (module, k) = match p.get(&n)? {
                Object::Contraction { module, k } => (module.clone(), k.clone()),
                Object::Koszul(m) => {
                    r.note(format!("using the cone of the identity of `{n}`"));
                    identity_cone_with_contraction(m)?
                }
                other => return Err(wrong_kind(&n, other, "contraction or koszul")),
            };
            let cert = contraction_witness(&module, &k)?;
            r.witness_present = Some(true);
            r.order = Some(json!(cert.nilpotence));
            r.note(format!("(hk + kh)^{} = 0", cert.nilpotence));
        }
        Command::Stabilize(pair) => stabilize_cmd(cli, pair, &mut r)?,
        Command::Perfect(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let verdict = match p.get(&n)? {
                Object::Koszul(m) => is_perfect(m, &limits())?,
                Object::Mf(e) => mf_perfectness(e, &limits())?,
                other => return Err(wrong_kind(&n, other, "mf or koszul")),
            };
            r.perfect = Some(verdict.is_perfect());
            r.witness_present = Some(verdict.is_perfect());
            if !verdict.is_perfect() {
                r.note("identity has a nonzero normal form modulo boundaries");
            }
        }
        Command::UTorsion(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let m = as_koszul(&p, &n)?;
            let w = window(cli, Some(&p));
            let order = u_torsion_order_point(m, w)?;
            let perfect = is_perfect(m, &limits())?.is_perfect();
            r.perfect = Some(perfect);
            let sufficient = (m.width() as i64) <= w;
            match order {
                Some(k) => r.order = Some(json!(k)),
                None => {
                    r.order = Some(json!("INDETERMINATE"));
                    r.status = Status::Indeterminate;
                    r.note(format!("no power u^n with n <= {w} is null-homotopic"));
                }
            }
            if sufficient && order.is_some() != perfect {
                return Err(Failure::Status(
                    Status::Violation,
                    format!("u-torsion order {order:?} disagrees with perfectness {perfect}"),
                ));
            }
            if !sufficient {
                r.note(format!("window {w} is narrower than the module width {}", m.width()));
            }
        }
        Command::RhomPoint(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let dims = rhom_trivial_dims(as_koszul(&p, &n)?, window(cli, Some(&p)))?;
            r.dims = Some(degree_dims_value(&dims));
        }
        Command::UCone(one) => {
            let p = load(cli, &one.file)?;
            let n = pick(&one.object, &p.params.object, "object")?;
            let rep = u_cone_check(as_koszul(&p, &n)?, window(cli, Some(&p)))?;
            r.dims = Some(json!({ "cone": degree_dims_value(&rep.cone), "pull_push": degree_dims_value(&rep.pull_push) }));
            if !rep.agrees() {
                return Err(Failure::Status(Status::Violation, "cone of u and pull-push cohomology differ".into()));
            }
        }
        Command::Milnor { f } => {
            let vars = cli.vars.clone().unwrap_or_default();
            let ctx = inline_ring(cli, &vars)?;
            let p = parse_poly(f, &ctx).map_err(|e| Failure::Math(Some("--f".into()), e))?;
            r.milnor = Some(dim_value(milnor_number(&p, &limits())?));
        }
        Command::TsCheck { file, f, g, g_vars, source, target } => ts_check(cli, file, f, g, g_vars, source, target, &mut r)?,
        Command::PointReport => {
            let field = parse_field(cli.field.as_deref().unwrap_or("Q"))?;
            let w = window(cli, None);
            let rep = point_case_report(field, w, &limits())?;
            r.dims = Some(stable_dims_value(&rep.stable_dims));
            r.perfect = Some(rep.perfectness.is_perfect());
            r.witness_present = Some(rep.perfectness.is_perfect());
            r.order = Some(rep.u_torsion.map_or(json!("INDETERMINATE"), |k| json!(k)));
            r.notes.extend(rep.notes.iter().cloned());
            if let Some(d) = &rep.rhom_dims {
                r.note(format!(
                    "RHom(k, k) dims on [-{}, {}]: {:?}",
                    2 * w,
                    2 * w,
                    d.values().collect::<Vec<_>>()
                ));
            }
            if !rep.is_consistent() {
                return Err(Failure::Status(Status::Violation, "report is internally inconsistent".into()));
            }
        }
    }
    Ok(r)
}

fn mf_only(p: &Problem, name: &str) -> std::result::Result<MatrixFactorization, Failure> {
    match p.get(name)? {
        Object::Mf(e) => Ok(e.clone()),
        other => Err(wrong_kind(name, other, "mf")),
    }
}

fn stabilize_cmd(cli: &Cli, pair: &crate::run::Pair, r: &mut Report) -> std::result::Result<(), Failure> {
    let p = load(cli, &pair.file)?;
    let n = pick(&pair.source, &p.params.object.clone().or(p.params.source.clone()), "source")?;
    let Object::Module { lg, presentation } = p.get(&n)? else { return Err(wrong_kind(&n, p.get(&n)?, "module")) };
    let cap = cli.cap.or(p.params.cap);
    let s = stabilize(lg, presentation, cap, &limits())?;
    r.factorization = Some(FactorizationReport::from(&s.mf));
    r.order = Some(json!(s.step));
    r.note(format!("resolution differential {} closes up", s.step));
    let Some(t) = pair.target.clone().or(p.params.target.clone()) else { return Ok(()) };
    let target = mf_only(&p, &t)?;
    if !stable_dims_match(&s.mf, &target, &limits())? {
        return Err(Failure::Status(Status::Violation, format!("stable dimensions differ from `{t}`")));
    }
    r.dims = Some(stable_dims_value(&hom_cohomology_dims(&s.mf, &target, &limits())?));
    let modulus = cli.modulus.or(p.params.modulus).unwrap_or(DEFAULT_MODULUS);
    let field = Field::prime(modulus)?;
    let reduced_target = reduce_mf(&target, field)?;
    let lg_p = reduced_target.lg().clone();
    let pres_p = reduce_presentation(presentation, lg_p.ctx())?;
    let sp = stabilize(&lg_p, &pres_p, cap, &limits())?;
    match search_equivalence(&sp.mf, &reduced_target, &limits())? {
        EquivalenceSearch::Found { .. } => {
            r.witness_present = Some(true);
            r.note(format!("mutually inverse closed maps found over F_{modulus}"));
            Ok(())
        }
        EquivalenceSearch::Exhausted => {
            Err(Failure::Status(Status::Violation, format!("no mutually inverse closed maps over F_{modulus}")))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn ts_check(
    cli: &Cli,
    file: &Option<PathBuf>,
    f: &Option<String>,
    g: &Option<String>,
    g_vars: &Option<Vec<String>>,
    source: &Option<String>,
    target: &Option<String>,
    r: &mut Report,
) -> std::result::Result<(), Failure> {
    let (fp, gp, mfs) = match file {
        Some(path) => {
            let p = load(cli, path)?;
            let (s, t) = (pick(source, &p.params.source, "source")?, pick(target, &p.params.target, "target")?);
            let (e, h) = (mf_only(&p, &s)?, mf_only(&p, &t)?);
            (e.potential().clone(), h.potential().clone(), Some((e, h)))
        }
        None => {
            let (Some(f), Some(g)) = (f, g) else {
                return Err(Failure::Status(Status::ParseError, "ts-check needs --f and --g, or a problem file".into()));
            };
            let fctx = inline_ring(cli, &cli.vars.clone().unwrap_or_default())?;
            let gctx = inline_ring(cli, &g_vars.clone().unwrap_or_default())?;
            let fp: Poly = parse_poly(f, &fctx).map_err(|e| Failure::Math(Some("--f".into()), e))?;
            let gp: Poly = parse_poly(g, &gctx).map_err(|e| Failure::Math(Some("--g".into()), e))?;
            (fp, gp, None)
        }
    };
    let ts = thom_sebastiani_check(&fp, &gp, mfs.as_ref().map(|(e, h)| (e, h)), &limits())?;
    r.milnor = Some(json!({ "f": ts.mu_f, "g": ts.mu_g, "sum": dim_value(ts.mu_sum) }));
    if let Some(k) = &ts.kunneth {
        r.dims = Some(json!({ "expected": stable_dims_value(&k.expected), "direct": stable_dims_value(&k.direct) }));
    }
    let sum = LGPair::new(fp).boxplus(&LGPair::new(gp))?;
    r.note(format!("f ⊞ g = {}", sum.potential()));
    if !ts.passes() {
        return Err(Failure::Status(Status::Violation, "Thom–Sebastiani check failed".into()));
    }
    Ok(())
}
