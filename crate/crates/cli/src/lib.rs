//! Argument parsing and command dispatch for the `stacky` binary.
//!
//! [`parse_inputs`] turns an argument vector into a [`Command`];
//! [`run`] executes it and returns the text destined for stdout and stderr
//! together with the exit code (0 success, 2 invalid input, 3 domain error).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use stacky_core::io::{
    bounds_to_value, curve_from_json, curve_to_value, hn_type_to_value, int_value,
    invariant_from_value, invariant_to_value, line_sum_from_value, line_sum_to_value,
    line_to_value, parse_json, point_sum_from_value, point_sum_to_value, rational_value,
    segment_walls_to_value, stack_dims_to_value, wall_report_to_value,
};
use stacky_core::{
    canonical_class, codim_bound, detline_correction, effective_bounds, euler_pair, hn_type,
    hom_vanishing_bound, is_on_wall, orthogonalize, render_rational, serre_dual, slope,
    slope_compare, stack_dims, stacky_genus, walls_on_segment, Error, FormalPointSum,
    LineBundleClass, LineSum, NumericalInvariant, StackyCurve, SubinvariantFilter, WallLocus,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegRange {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl FromStr for DegRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
        let parse =
            |x: &str| BigInt::from_str(x.trim()).map_err(|_| format!("'{x}' is not an integer"));
        Ok(Self {
            lo: parse(lo)?,
            hi: parse(hi)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct Common {
    /// Curve document: {"genus": g, "points": [{"label": .., "order": ..}]}
    #[arg(long, value_name = "FILE")]
    pub curve: PathBuf,
    /// Emit a single JSON object instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "stacky",
    version,
    about = "Numerical K-theory of stacky curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Stacky genus and canonical class
    Genus {
        #[command(flatten)]
        common: Common,
    },
    /// Euler pairing <alpha, beta>
    Pair {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
    },
    /// Slope of gamma with respect to alpha, compared with beta if given
    Slope {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        gamma: PathBuf,
        #[arg(long, value_name = "FILE")]
        beta: Option<PathBuf>,
    },
    /// Harder-Narasimhan type of a direct sum of line bundles
    Hn {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        lines: PathBuf,
    },
    /// Replace alpha by an equivalent parameter orthogonal to beta
    Orthogonalize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
    },
    /// Walls through alpha, or along the segment from alpha to --alpha-end
    Walls {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        alpha_end: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
        deg_range: DegRange,
    },
    /// Effective bounds for the determinantal line bundle
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
    },
    /// Hom-vanishing bound, and the codimension estimate for --gamma at --m
    Homvanish {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: PathBuf,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
        /// Defaults to the zero class
        #[arg(long, value_name = "FILE")]
        eta: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        ell: u64,
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
        deg_range: Option<DegRange>,
        #[arg(long, value_name = "FILE", requires = "m")]
        gamma: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, requires = "gamma")]
        m: Option<BigInt>,
    },
    /// Dimensions of Bun_beta, Bun_gamma and the stack of extensions
    Dims {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        beta: PathBuf,
        /// Second class; defaults to beta
        #[arg(long, value_name = "FILE")]
        gamma: Option<PathBuf>,
    },
    /// Serre dual of an invariant and/or of a line sum
    #[command(group = clap::ArgGroup::new("input").required(true).multiple(true).args(["alpha", "lines"]))]
    Sd {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        alpha: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        lines: Option<PathBuf>,
    },
    /// Divisor D - D' relating two determinantal line bundles
    Detline {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        d: PathBuf,
        #[arg(long, value_name = "FILE")]
        d_prime: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Genus { .. } => "genus",
            Command::Pair { .. } => "pair",
            Command::Slope { .. } => "slope",
            Command::Hn { .. } => "hn",
            Command::Orthogonalize { .. } => "orthogonalize",
            Command::Walls { .. } => "walls",
            Command::Bounds { .. } => "bounds",
            Command::Homvanish { .. } => "homvanish",
            Command::Dims { .. } => "dims",
            Command::Sd { .. } => "sd",
            Command::Detline { .. } => "detline",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Genus { common }
            | Command::Pair { common, .. }
            | Command::Slope { common, .. }
            | Command::Hn { common, .. }
            | Command::Orthogonalize { common, .. }
            | Command::Walls { common, .. }
            | Command::Bounds { common, .. }
            | Command::Homvanish { common, .. }
            | Command::Dims { common, .. }
            | Command::Sd { common, .. }
            | Command::Detline { common, .. } => common,
        }
    }
}

/// Parses a full argument vector (including the program name).
pub fn parse_inputs<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv).map(|c| c.command)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = Result<T, Failure>;

/// A report in both renderings.
struct Report {
    text: String,
    json: Value,
}

struct Context {
    curve: Arc<StackyCurve>,
    digest: String,
}

impl Context {
    fn load(path: &Path) -> Res<Self> {
        let curve = curve_from_json(&read(path)?)?;
        let canonical = serde_json::to_string(&curve_to_value(&curve)).expect("curve serializes");
        let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(Self { curve, digest })
    }

    fn invariant(&self, path: &Path) -> Res<NumericalInvariant> {
        Ok(invariant_from_value(&self.curve, &document(path)?)?)
    }

    fn line_sum(&self, path: &Path) -> Res<LineSum> {
        Ok(line_sum_from_value(&self.curve, &document(path)?)?)
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn document(path: &Path) -> Res<Value> {
    Ok(parse_json(&read(path)?)?)
}

fn point_sum(path: &Path) -> Res<FormalPointSum> {
    Ok(point_sum_from_value(&document(path)?)?)
}

/// `rank=2 degree=0 p=[1,1] q=[1,1,0]`
pub fn format_invariant(inv: &NumericalInvariant) -> String {
    let mut s = format!("rank={} degree={}", inv.rank(), inv.coarse_degree());
    for (p, m) in inv.curve().points().iter().zip(inv.multiplicities()) {
        let entries: Vec<String> = m.iter().map(ToString::to_string).collect();
        write!(s, " {}=[{}]", p.label(), entries.join(",")).unwrap();
    }
    s
}

/// `L(1; p=1, q=2)`, or `L(1)` without twists.
pub fn format_line(line: &LineBundleClass) -> String {
    let twists: Vec<String> = line
        .curve()
        .points()
        .iter()
        .zip(line.twists())
        .filter(|(_, &a)| a != 0)
        .map(|(p, a)| format!("{}={a}", p.label()))
        .collect();
    if twists.is_empty() {
        format!("L({})", line.coarse_degree())
    } else {
        format!("L({}; {})", line.coarse_degree(), twists.join(", "))
    }
}

fn format_lines(lines: &[LineBundleClass]) -> String {
    lines
        .iter()
        .map(format_line)
        .collect::<Vec<_>>()
        .join(" + ")
}

fn format_point_sum(sum: &FormalPointSum) -> String {
    let mut s = String::new();
    for (k, v) in sum.coefficients() {
        let sign = if v.sign() == num_bigint::Sign::Minus {
            "-"
        } else {
            "+"
        };
        if s.is_empty() {
            write!(s, "{v}*{k}").unwrap();
        } else {
            write!(s, " {sign} {}*{k}", v.magnitude()).unwrap();
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn ordering_name(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "greater",
    }
}

fn line(s: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(s, "{key} = {value}").unwrap();
}

fn execute(cmd: &Command, ctx: &Context) -> Res<Report> {
    let curve = &ctx.curve;
    let mut text = String::new();
    let json = match cmd {
        Command::Genus { .. } => {
            let g = stacky_genus(curve);
            let omega = canonical_class(curve);
            line(&mut text, "coarse_genus", curve.coarse_genus());
            line(&mut text, "stacky_points", curve.points().len());
            line(&mut text, "stacky_genus", render_rational(&g));
            line(&mut text, "canonical_class", format_line(&omega));
            json!({
                "coarse_genus": int_value(curve.coarse_genus()),
                "stacky_points": curve.points().len(),
                "stacky_genus": rational_value(&g),
                "canonical_class": line_to_value(&omega),
            })
        }
        Command::Pair { alpha, beta, .. } => {
            let (a, b) = (ctx.invariant(alpha)?, ctx.invariant(beta)?);
            let v = euler_pair(&a, &b)?;
            line(&mut text, "pairing", &v);
            json!({ "pairing": int_value(&v) })
        }
        Command::Slope {
            alpha, gamma, beta, ..
        } => {
            let (a, g) = (ctx.invariant(alpha)?, ctx.invariant(gamma)?);
            let mu = slope(&a, &g)?;
            line(&mut text, "slope", render_rational(&mu));
            let mut out = json!({ "slope": rational_value(&mu) });
            if let Some(beta) = beta {
                let b = ctx.invariant(beta)?;
                let mu_b = slope(&a, &b)?;
                let cmp = ordering_name(slope_compare(&a, &b, &g)?);
                line(&mut text, "reference_slope", render_rational(&mu_b));
                line(&mut text, "comparison", cmp);
                out["reference_slope"] = rational_value(&mu_b);
                out["comparison"] = json!(cmp);
            }
            out
        }
        Command::Hn { alpha, lines, .. } => {
            let a = ctx.invariant(alpha)?;
            let sum = ctx.line_sum(lines)?;
            let hn = hn_type(&a, &sum)?;
            line(&mut text, "semistable", hn.is_semistable());
            line(&mut text, "blocks", hn.blocks().len());
            for (i, b) in hn.blocks().iter().enumerate() {
                writeln!(
                    text,
                    "block {i}: slope = {}; summands = {}; invariant = {}",
                    render_rational(&b.slope),
                    format_lines(&b.summands),
                    format_invariant(&b.invariant)
                )
                .unwrap();
            }
            hn_type_to_value(&hn)
        }
        Command::Orthogonalize { alpha, beta, .. } => {
            let (a, b) = (ctx.invariant(alpha)?, ctx.invariant(beta)?);
            let a2 = orthogonalize(&a, &b)?;
            line(&mut text, "alpha", format_invariant(&a2));
            line(&mut text, "pairing", euler_pair(&a2, &b)?);
            json!({ "alpha": invariant_to_value(&a2) })
        }
        Command::Walls {
            alpha,
            alpha_end,
            beta,
            deg_range,
            ..
        } => {
            let (a, b) = (ctx.invariant(alpha)?, ctx.invariant(beta)?);
            match alpha_end {
                Some(end) => {
                    let a1 = ctx.invariant(end)?;
                    let walls = walls_on_segment(&a, &a1, &b, (&deg_range.lo, &deg_range.hi))?;
                    line(&mut text, "walls", walls.len());
                    for w in &walls {
                        let t = match &w.locus {
                            WallLocus::EntireSegment => "segment".to_string(),
                            WallLocus::At(t) => render_rational(t),
                        };
                        writeln!(text, "wall t = {t}").unwrap();
                        for g in w.report.witnesses() {
                            writeln!(text, "  witness {}", format_invariant(g)).unwrap();
                        }
                    }
                    segment_walls_to_value(&walls)
                }
                None => {
                    if deg_range.lo > deg_range.hi {
                        return Err(Error::InvalidWindow(format!(
                            "degree range {}:{} is empty",
                            deg_range.lo, deg_range.hi
                        ))
                        .into());
                    }
                    let report = is_on_wall(&a, &b)?;
                    let witnesses: Vec<_> = report
                        .witnesses()
                        .iter()
                        .filter(|g| {
                            g.coarse_degree() >= &deg_range.lo && g.coarse_degree() <= &deg_range.hi
                        })
                        .collect();
                    line(&mut text, "on_wall", !witnesses.is_empty());
                    for g in &witnesses {
                        writeln!(text, "witness {}", format_invariant(g)).unwrap();
                    }
                    let mut v = wall_report_to_value(&report);
                    v["on_wall"] = json!(!witnesses.is_empty());
                    v["witnesses"] = witnesses.iter().map(|g| invariant_to_value(g)).collect();
                    v
                }
            }
        }
        Command::Bounds { beta, .. } => {
            let b = ctx.invariant(beta)?;
            let r = effective_bounds(curve, &b)?;
            line(
                &mut text,
                "stacky_genus",
                render_rational(&stacky_genus(curve)),
            );
            line(&mut text, "kappa", render_rational(&r.kappa));
            line(&mut text, "kappa_plus", render_rational(&r.kappa_plus));
            line(&mut text, "basepoint_free_min_m", &r.basepoint_free_min_m);
            line(&mut text, "finite_map_min_m", &r.finite_map_min_m);
            line(&mut text, "stack_dim", &r.stack_dim);
            bounds_to_value(&r)
        }
        Command::Homvanish {
            alpha,
            beta,
            eta,
            ell,
            deg_range,
            gamma,
            m,
            ..
        } => {
            let (a, b) = (ctx.invariant(alpha)?, ctx.invariant(beta)?);
            let eta = match eta {
                Some(p) => ctx.invariant(p)?,
                None => NumericalInvariant::zero(curve),
            };
            let filter = match deg_range {
                Some(r) => SubinvariantFilter::new(*ell, Some(r.lo.clone()), Some(r.hi.clone()))?,
                None => SubinvariantFilter::with_ell(*ell)?,
            };
            let bound = hom_vanishing_bound(&a, &b, &eta, &filter)?;
            line(&mut text, "hom_vanishing_min_m", &bound);
            let mut out = json!({ "hom_vanishing_min_m": int_value(&bound) });
            if let (Some(gamma), Some(m)) = (gamma, m) {
                let g = ctx.invariant(gamma)?;
                let c = codim_bound(&a, &eta, &g, m)?;
                line(&mut text, "codim_bound", &c);
                out["codim_bound"] = int_value(&c);
            }
            out
        }
        Command::Dims { beta, gamma, .. } => {
            let b1 = ctx.invariant(beta)?;
            let b2 = match gamma {
                Some(p) => ctx.invariant(p)?,
                None => b1.clone(),
            };
            let d = stack_dims(&b1, &b2)?;
            line(&mut text, "bun_dim_1", &d.bun_dim_1);
            line(&mut text, "bun_dim_2", &d.bun_dim_2);
            line(&mut text, "ext_stack_dim", &d.ext_stack_dim);
            stack_dims_to_value(&d)
        }
        Command::Sd { alpha, lines, .. } => {
            let mut out = json!({});
            if let Some(p) = alpha {
                let sd = serre_dual(&ctx.invariant(p)?);
                line(&mut text, "serre_dual", format_invariant(&sd));
                out["serre_dual"] = invariant_to_value(&sd);
            }
            if let Some(p) = lines {
                let sd = ctx.line_sum(p)?.serre_dual();
                line(&mut text, "serre_dual_lines", format_lines(sd.summands()));
                out["serre_dual_lines"] = line_sum_to_value(&sd);
            }
            out
        }
        Command::Detline { d, d_prime, .. } => {
            let diff = detline_correction(&point_sum(d)?, &point_sum(d_prime)?);
            line(&mut text, "correction", format_point_sum(&diff));
            json!({ "correction": point_sum_to_value(&diff) })
        }
    };
    Ok(Report { text, json })
}

fn failure_message(f: &Failure) -> (String, i32) {
    match f {
        Failure::Input(msg) => (format!("error: {msg}\n"), 2),
        Failure::Core(Error::InvalidCurve(vs)) => {
            let mut s = String::from("error: invalid curve\n");
            for v in vs {
                writeln!(s, "{v}").unwrap();
            }
            (s, 2)
        }
        Failure::Core(e) => (
            format!("error: {e}\n"),
            if e.is_validation() { 2 } else { 3 },
        ),
    }
}

pub fn run(cmd: &Command) -> Outcome {
    let result = Context::load(&cmd.common().curve).and_then(|ctx| {
        let report = execute(cmd, &ctx)?;
        Ok((ctx.digest, report))
    });
    match result {
        Ok((digest, report)) => {
            let stdout = if cmd.common().json {
                let doc = json!({
                    "command": cmd.name(),
                    "result": report.json,
                    "curve_digest": digest,
                });
                serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
            } else {
                report.text
            };
            Outcome {
                stdout,
                stderr: String::new(),
                code: 0,
            }
        }
        Err(f) => {
            let (stderr, code) = failure_message(&f);
            Outcome {
                stdout: String::new(),
                stderr,
                code,
            }
        }
    }
}

/// Parses and runs; usage errors become exit code 2 (help and version
/// requests exit 0).
pub fn main_with_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_inputs(argv) {
        Ok(cmd) => run(&cmd),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
    }
}
