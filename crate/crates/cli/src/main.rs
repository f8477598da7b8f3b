mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use weilmc::exterior;
use weilmc::gds::Gds;
use weilmc::hodge::{mixed_invariants, HodgePackage};
use weilmc::identities;
use weilmc::mc::{self, diagonal_phi, solve_mc, solve_relative_mc, McSolution};
use weilmc::models::{cartan, chevalley, duality, halperin, homotopy, product, transgress, Certificate, Report};
use weilmc::rational::parse_q;
use weilmc::serial;
use weilmc::{Error, LieAlgebra, Mat, MixedElt, Side};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "weilmc", version, about = "Exact Maurer-Cartan elements, Weil algebras and Cartan models")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Symmetric-degree cutoff D for truncated spaces.
    #[arg(long, global = true, env = "WEILMC_CUTOFF", default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..))]
    cutoff: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Lie algebra axioms, and optionally a g-differential space.
    Validate {
        #[arg(long)]
        lie: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Invariant dimensions, primitives and their dual basis.
    Invariants {
        #[arg(long)]
        lie: String,
    },
    /// Solve the Maurer-Cartan equation.
    Solve {
        #[arg(long)]
        lie: String,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the Neumann series for exp(f) with the direct exponential.
    Exp {
        #[arg(long)]
        lie: String,
    },
    /// Transgression cochains and the injection of K(P) into the Weil algebra.
    Transgress {
        #[arg(long)]
        lie: String,
    },
    /// Relative solution along a homomorphism phi: g -> h.
    Relative {
        #[arg(long)]
        lie_g: String,
        #[arg(long)]
        lie_h: String,
        /// JSON n_h x n_g matrix of rationals.
        #[arg(long)]
        phi: PathBuf,
    },
    /// Cohomology of the Cartan models of a module.
    Cohomology {
        #[arg(long)]
        lie: String,
        #[arg(long, default_value = "wedge-dual")]
        module: String,
        #[arg(long, value_enum, default_value = "both")]
        model: Model,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Certify one of the model comparison theorems.
    Check {
        #[arg(long)]
        lie: String,
        #[arg(long, value_enum)]
        what: What,
        /// Module M; defaults to wedge-dual, or weil:4 for chevalley.
        #[arg(long)]
        module: Option<String>,
        /// Weil-module N for halperin.
        #[arg(long, default_value = "weil:4")]
        weil_module: String,
        #[arg(long)]
        lie_h: Option<String>,
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Random identity suites with a fixed seed.
    Selftest {
        #[arg(long)]
        lie: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Small,
    Big,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    Twist,
    Chevalley,
    Halperin,
    Duality,
    Product,
    Fun1,
    Homotopy,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

/// A command's document, its certificate reports and a one-line summary.
struct Outcome {
    doc: Map<String, Value>,
    reports: Vec<Report>,
    summary: String,
}

impl Outcome {
    fn new(summary: String) -> Self {
        Outcome { doc: Map::new(), reports: Vec::new(), summary }
    }

    fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }
}

fn setup(lie: &str) -> Result<(LieAlgebra, HodgePackage, McSolution)> {
    let g = LieAlgebra::resolve(lie)?;
    let pkg = HodgePackage::build(&g)?;
    let mc = solve_mc(&pkg)?;
    Ok((g, pkg, mc))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn read_matrix(path: &Path, rows: usize, cols: usize) -> Result<Mat> {
    let v = read_json(path)?;
    let loc = path.display().to_string();
    let schema = |msg: String| Error::Schema { path: loc.clone(), msg };
    let rs = v.as_array().ok_or_else(|| schema("expected an array of rows".into()))?;
    if rs.len() != rows {
        return Err(schema(format!("expected {rows} rows, found {}", rs.len())).into());
    }
    let mut data = Vec::with_capacity(rows);
    for (i, r) in rs.iter().enumerate() {
        let r = r.as_array().filter(|r| r.len() == cols).ok_or_else(|| schema(format!("row {i}: expected {cols} entries")))?;
        let mut row = Vec::with_capacity(cols);
        for (j, x) in r.iter().enumerate() {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() => n.to_string(),
                _ => return Err(schema(format!("[{i}][{j}]: expected an integer or a rational string")).into()),
            };
            row.push(parse_q(&s).map_err(|e| schema(format!("[{i}][{j}]: {e}")))?);
        }
        data.push(row);
    }
    Ok(Mat::from_dense(rows, cols, &data))
}

fn validate(lie: &str, module: Option<&str>, cutoff: usize) -> Result<Outcome> {
    let g = LieAlgebra::resolve(lie)?;
    let v = g.validate();
    let mut r = Report::new("validate", g.name());
    r.certificates.extend(v.checks.iter().map(Certificate::from_check));
    let mut out = Outcome::new(format!("{}: dim {}", g.name(), g.dim()));
    if let Some(spec) = module {
        let m = Gds::resolve(&g, spec, cutoff)?;
        let mut rm = Report::new("validate-module", g.name());
        rm.certificates.extend(m.validate().iter().map(Certificate::from_check));
        rm.data = json!({ "module": m.name });
        out.reports.push(r);
        out.reports.push(rm);
    } else {
        out.reports.push(r);
    }
    out.doc.insert("dim".into(), json!(g.dim()));
    Ok(out)
}

fn invariants(lie: &str) -> Result<Outcome> {
    let g = LieAlgebra::resolve(lie)?;
    let pkg = HodgePackage::build(&g)?;
    let dims = pkg.invariant_dims();
    let prims: Vec<Value> = pkg
        .primitives()
        .iter()
        .map(|p| json!({ "degree": p.degree, "c": output::ext(&p.c), "dual": output::ext(&p.dual) }))
        .collect();
    let bases: Vec<Value> = (0..=g.dim()).map(|k| json!(pkg.invariant_basis(k).iter().map(output::ext).collect::<Vec<_>>())).collect();
    let degrees: Vec<usize> = pkg.primitives().iter().map(|p| p.degree).collect();
    let mut out = Outcome::new(format!("{}: invariant dims {dims:?}, primitive degrees {degrees:?}", g.name()));
    out.doc.insert("algebra".into(), json!(g.name()));
    out.doc.insert("invariant_dims".into(), json!(dims));
    out.doc.insert("primitives".into(), json!(prims));
    out.doc.insert("invariant_bases".into(), json!(bases));
    Ok(out)
}

fn solution_doc(g: &LieAlgebra, pkg: &HodgePackage, mc: &McSolution) -> Result<Map<String, Value>> {
    let n = g.dim();
    let mut doc = Map::new();
    doc.insert("algebra".into(), json!(g.name()));
    doc.insert("f".into(), output::mixed(&mc.f));
    let comps: Vec<Value> = mc.components.iter().map(|(k, c)| json!({ "order": k, "component": output::mixed(c) })).collect();
    doc.insert("components".into(), json!(comps));
    doc.insert("z".into(), output::mixed(&mc.z));
    doc.insert("boundary_f".into(), output::mixed(&exterior::boundary(g, &mc.f)?));
    doc.insert("p".into(), json!(mc.p.iter().map(|p| output::poly(p, n)).collect::<Vec<_>>()));
    let prims: Vec<Value> = pkg.primitives().iter().map(|p| json!({ "degree": p.degree, "c": output::ext(&p.c) })).collect();
    doc.insert("primitives".into(), json!(prims));
    doc.insert("casimir_trace".into(), json!(weilmc::rational::fmt_q(&pkg.casimir_trace())));
    doc.insert("iterations".into(), json!(mc.iterations));
    Ok(doc)
}

fn solve(lie: &str, verify: bool, out_path: Option<&Path>) -> Result<Outcome> {
    let (g, pkg, mc) = setup(lie)?;
    let degrees = mc.generator_degrees();
    let mut out = Outcome::new(format!("{}: {} components, generator S-degrees {degrees:?}", g.name(), mc.components.len()));
    out.doc = solution_doc(&g, &pkg, &mc)?;
    if verify {
        let mut r = Report::new("solve", g.name());
        r.certificates.extend(mc.verify(&pkg).iter().map(Certificate::from_check));
        out.reports.push(r);
    }
    if let Some(p) = out_path {
        let text = serde_json::to_string_pretty(&serial::mixed_to_json(&mc.f)).map_err(Error::from)?;
        std::fs::write(p, text + "\n").map_err(Error::from)?;
    }
    Ok(out)
}

fn exp(lie: &str) -> Result<Outcome> {
    let (g, pkg, mc) = setup(lie)?;
    let neumann = mc::exp_f_neumann(&pkg);
    let direct = mc.f.exp_nilpotent()?;
    let mut r = Report::new("exp", g.name());
    r.push(if neumann == direct {
        Certificate::pass("Neumann series equals exp(f)", None)
    } else {
        Certificate::fail("Neumann series equals exp(f)", None, format!("differ in {} blades", neumann.sub(&direct).len()))
    });
    let mut out = Outcome::new(format!("{}: exp(f) has {} terms", g.name(), direct.len()));
    out.doc.insert("algebra".into(), json!(g.name()));
    out.doc.insert("exp_f".into(), output::mixed(&direct));
    out.reports.push(r);
    Ok(out)
}

fn transgress(lie: &str, cutoff: usize) -> Result<Outcome> {
    let (g, pkg, mc) = setup(lie)?;
    let t = transgress::transgress(&mc, &pkg, cutoff)?;
    let mut out = Outcome::new(format!("{}: {} transgression cochains", g.name(), t.cochains.len()));
    out.doc.insert("algebra".into(), json!(g.name()));
    out.doc.insert("cochains".into(), json!(t.cochains.iter().map(output::mixed).collect::<Vec<_>>()));
    let mut report = t.report;
    report.data = Value::Null;
    out.reports.push(report);
    Ok(out)
}

fn relative_outcome(g: &LieAlgebra, h: &LieAlgebra, phi: &Mat) -> Result<Outcome> {
    let pkg_g = HodgePackage::build(g)?;
    let pkg_h = HodgePackage::build(h)?;
    let rel = solve_relative_mc(g, h, phi, &pkg_g, &pkg_h)?;
    let uu = exterior::schouten(h, &rel.u, &rel.u)?;
    let mut r = Report::new("relative", h.name());
    r.certificates.extend(product::diagonal_equation(&rel, &pkg_g)?);
    let mut out = Outcome::new(format!("{} -> {}: u has {} terms, [u,u] = {}", g.name(), h.name(), rel.u.len(), if uu.is_zero() { "0" } else { "nonzero" }));
    out.doc.insert("u".into(), output::mixed(&rel.u));
    out.doc.insert("x".into(), output::mixed(&rel.x));
    out.doc.insert("u_bracket_u".into(), output::mixed(&uu));
    out.reports.push(r);
    Ok(out)
}

fn relative(lie_g: &str, lie_h: &str, phi: &Path) -> Result<Outcome> {
    let g = LieAlgebra::resolve(lie_g)?;
    let h = LieAlgebra::resolve(lie_h)?;
    let phi = read_matrix(phi, h.dim(), g.dim())?;
    relative_outcome(&g, &h, &phi)
}

fn truncate_list(v: &mut Value, len: usize) {
    if let Some(xs) = v.as_array_mut() {
        xs.truncate(len);
    }
}

fn cohomology(lie: &str, module: &str, model: Model, max_degree: Option<usize>, cutoff: usize) -> Result<Outcome> {
    let (g, pkg, mc) = setup(lie)?;
    let m = Gds::resolve(&g, module, cutoff)?;
    let (small, big) = match model {
        Model::Small => (true, false),
        Model::Big => (false, true),
        Model::Both => (true, true),
    };
    let mut r = cartan::cohomology_report(&m, &mc, &pkg, cutoff, small, big)?;
    if let Some(k) = max_degree {
        for key in ["small", "big"] {
            if let Some(x) = r.data.get_mut(key) {
                truncate_list(&mut x["dims"], k + 1);
                truncate_list(&mut x["cohomology"], k + 1);
            }
        }
    }
    let mut out = Outcome::new(format!("{} on {}: cohomology computed", g.name(), m.name));
    out.doc.insert("cohomology".into(), std::mem::take(&mut r.data));
    out.reports.push(r);
    Ok(out)
}

/// s1 = Σ of the invariants in S^{1,2}g*⊗∧^3 g, an admissible gauge direction.
fn default_s1(g: &LieAlgebra) -> Result<MixedElt> {
    let mut s = MixedElt::zero(Side::G, g.dim());
    for deg in 1..=2 {
        for x in mixed_invariants(g, Side::G, deg, 3) {
            s = s.add(&x);
        }
    }
    if s.is_zero() {
        return Err(CliError::Usage(format!("{} has no invariant in S g* (x) wedge^3 g to deform along", g.name())));
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn check(lie: &str, what: What, module: Option<&str>, weil_module: &str, lie_h: Option<&str>, phi: Option<&Path>, cutoff: usize) -> Result<Outcome> {
    let (g, pkg, mc) = setup(lie)?;
    let module_or = |default: &str| module.unwrap_or(default).to_string();
    let mut out = Outcome::new(String::new());
    match what {
        What::Twist => {
            let m = Gds::resolve(&g, &module_or("wedge-dual"), cutoff)?;
            out.reports.push(cartan::twist_map(&m, &mc, &pkg, cutoff)?.report);
            out.reports.push(cartan::homotopy_inverse(&m, &mc, cutoff)?.report);
        }
        What::Chevalley => {
            let n = Gds::resolve(&g, &module_or("weil:4"), cutoff)?;
            out.reports.push(chevalley::chevalley_koszul(&n, &mc, &pkg)?.report);
        }
        What::Halperin => {
            let n = Gds::resolve(&g, weil_module, cutoff)?;
            let m = Gds::resolve(&g, &module_or("wedge-dual"), cutoff)?;
            out.reports.push(halperin::halperin_check(&n, &m, &mc, &pkg)?.report);
        }
        What::Duality => out.reports.push(duality::koszul_duality(&pkg, &mc, cutoff)?),
        What::Product => {
            let h = LieAlgebra::direct_sum(&g, &g)?;
            let pkg_h = HodgePackage::build(&h)?;
            let rel = solve_relative_mc(&g, &h, &diagonal_phi(g.dim()), &pkg, &pkg_h)?;
            let m = Gds::resolve(&g, &module_or("wedge-dual"), cutoff)?;
            out.reports.push(product::product_twist(&m, &rel, &pkg, cutoff)?);
        }
        What::Fun1 => {
            let (Some(lie_h), Some(phi)) = (lie_h, phi) else {
                return Err(CliError::Usage("--what fun1 needs --lie-h and --phi".into()));
            };
            let h = LieAlgebra::resolve(lie_h)?;
            let phi = read_matrix(phi, h.dim(), g.dim())?;
            let m = Gds::resolve(&h, &module_or("wedge-dual"), cutoff)?;
            out.reports.push(product::fun1_check(&g, &h, &phi, &m, cutoff)?);
        }
        What::Homotopy => {
            let s1 = default_s1(&g)?;
            let m = Gds::resolve(&g, &module_or("wedge-dual"), cutoff)?;
            out.reports.push(homotopy::homotopy_family_check(&m, &mc, &pkg, &s1, cutoff)?);
        }
    }
    let n: usize = out.reports.iter().map(|r| r.certificates.len()).sum();
    let failed = out.reports.iter().flat_map(|r| &r.certificates).filter(|c| !c.passed()).count();
    out.summary = format!("{}: {}: {} of {n} certificates pass", g.name(), format!("{what:?}").to_lowercase(), n - failed);
    Ok(out)
}

fn selftest(lie: &str, seed: u64, trials: usize) -> Result<Outcome> {
    let g = LieAlgebra::resolve(lie)?;
    g.ensure_valid()?;
    let mut r = Report::new("selftest", g.name());
    for (name, id) in identities::SUITES {
        r.push(match identities::run(&g, *id, seed, trials) {
            Ok(()) => Certificate::pass(name, None),
            Err(e) => Certificate::fail(name, None, e),
        });
    }
    r.data = json!({ "seed": seed, "trials": trials });
    let mut out = Outcome::new(format!("{}: {} suites x {trials} trials, seed {seed}", g.name(), identities::SUITES.len()));
    out.reports.push(r);
    Ok(out)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cutoff = cli.cutoff as usize;
    match &cli.command {
        Command::Validate { lie, module } => validate(lie, module.as_deref(), cutoff),
        Command::Invariants { lie } => invariants(lie),
        Command::Solve { lie, verify, out } => solve(lie, *verify, out.as_deref()),
        Command::Exp { lie } => exp(lie),
        Command::Transgress { lie } => transgress(lie, cutoff),
        Command::Relative { lie_g, lie_h, phi } => relative(lie_g, lie_h, phi),
        Command::Cohomology { lie, module, model, max_degree } => cohomology(lie, module, *model, *max_degree, cutoff),
        Command::Check { lie, what, module, weil_module, lie_h, phi } => {
            check(lie, *what, module.as_deref(), weil_module, lie_h.as_deref(), phi.as_deref(), cutoff)
        }
        Command::Selftest { lie, seed, trials } => selftest(lie, *seed, *trials),
    }
}

fn emit(out: &Outcome, format: Format) {
    match format {
        Format::Json => {
            let mut doc = out.doc.clone();
            if !out.reports.is_empty() {
                doc.insert("reports".into(), output::reports_value(&out.reports));
            }
            doc.insert("status".into(), json!(if out.passed() { "pass" } else { "fail" }));
            println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"));
        }
        Format::Text => {
            let mut text = String::new();
            output::value_text(&Value::Object(out.doc.clone()), 0, &mut text);
            for r in &out.reports {
                text.push_str(&output::report_text(r));
            }
            print!("{text}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out, cli.format);
            let failed: Vec<&Certificate> = out.reports.iter().filter_map(Report::first_failure).collect();
            if failed.is_empty() {
                eprintln!("{}; all checks pass", out.summary);
                ExitCode::SUCCESS
            } else {
                eprintln!("{}; FAILED: {}", out.summary, failed.iter().map(|c| c.check.as_str()).collect::<Vec<_>>().join(", "));
                ExitCode::from(1)
            }
        }
        Err(CliError::Core(e)) if e.is_certificate() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
