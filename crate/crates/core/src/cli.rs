//! The `hschubert` command line.
//!
//! Exit codes: 0 success, 1 an identity or orthogonality check failed,
//! 2 invalid usage, 3 a computational anomaly (non-polynomial result,
//! non-converging extrapolation, unavoidable pole).

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::elliptic::{
    at_generic_point, elliptic_class_tuple, fay_terms, gkm_limit_values, neighbor_residuals, removable_limit,
    richardson_even, theta_prime_1, EllipticContext, LimitPath, C64,
};
use crate::error::Error;
use crate::flags::{enumerate_tuples, partition_to_subset, FlagShape, IndexTuple, Partition, Permutation};
use crate::pairing::{elliptic_orthogonality_check, orthogonality_check};
use crate::structure::{
    elliptic_lr_coefficient, elliptic_pn_closed_form, expand_product, lr_coefficient, pn_shape, pn_tuple,
    render_table, specialize_nonequivariant, Coefficient, EllipticMeta, Format, LrTable, Specialization,
};
use crate::weights::{class_tuple, gkm_check, Theory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ANOMALY: i32 = 3;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "HSCHUBERT_THREADS";

/// How many fresh generic points to try before giving up on a near pole.
const RETRIES: u64 = 8;

#[derive(Parser, Debug)]
#[command(name = "hschubert", version, about = "Structure constants of ħ-deformed Schubert classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure constants: a full expansion, or one coefficient with --k.
    Lr(LrArgs),
    /// Gram matrix of a basis against its dual basis.
    Ortho(OrthoArgs),
    /// Numeric and exact identity checks.
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// The trisecant identity at random points.
    Fay(FayArgs),
    /// The GKM condition for every class of a flag variety.
    Gkm(GkmArgs),
    /// The removable limit in non-equivariant elliptic cohomology of T*P^1.
    Limit83(LimitArgs),
    /// ϑ'(1) against a numerical derivative.
    ThetaDeriv(ThetaDerivArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Dimension vector, e.g. `3,3`.
    #[arg(long, value_name = "LAMBDA", conflicts_with_all = ["grassmann", "pn"])]
    pub lambda: Option<FlagShape>,
    /// Grassmannian `m,n` of m-planes in n-space.
    #[arg(long, value_name = "M,N", conflicts_with = "pn")]
    pub grassmann: Option<String>,
    /// Projective space of lines in n-space; tuples are given as indices.
    #[arg(long, value_name = "N")]
    pub pn: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct EllArgs {
    /// Real part of the nome.
    #[arg(long, default_value_t = crate::elliptic::DEFAULT_Q, allow_hyphen_values = true)]
    pub q: f64,
    /// Imaginary part of the nome.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q_im: f64,
    /// Number of q-product factors kept.
    #[arg(long, default_value_t = crate::elliptic::DEFAULT_TRUNC)]
    pub trunc: usize,
    #[arg(long, default_value_t = crate::elliptic::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed of the random evaluation points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EllArgs {
    pub fn context(&self) -> Result<EllipticContext, Error> {
        EllipticContext::new(C64::new(self.q, self.q_im), self.trunc, self.tol, self.seed)
    }
}

#[derive(Args, Debug)]
pub struct LrArgs {
    #[arg(long, default_value = "h")]
    pub theory: Theory,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// First factor: a tuple `{..}|{..}`, a partition `(2,1)` on a
    /// Grassmannian, or an index with --pn.
    #[arg(long)]
    pub i: Option<String>,
    /// Second factor; `same` repeats --i.
    #[arg(long)]
    pub j: Option<String>,
    /// Output basis element; `same` repeats --i. Omit for the full expansion.
    #[arg(long)]
    pub k: Option<String>,
    /// With --pn: first index (alias of --i).
    #[arg(long)]
    pub l: Option<usize>,
    /// With --pn: output index.
    #[arg(long)]
    pub m: Option<usize>,
    /// `none`, `z0` or `z1`.
    #[arg(long, default_value = "none")]
    pub specialize: Specialization,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[arg(long, env = THREADS_ENV, default_value_t = 1)]
    pub threads: usize,
    #[command(flatten)]
    pub ell: EllArgs,
}

#[derive(Args, Debug)]
pub struct OrthoArgs {
    #[arg(long, default_value = "h")]
    pub theory: Theory,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub ell: EllArgs,
}

#[derive(Args, Debug)]
pub struct FayArgs {
    /// Number of random points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub ell: EllArgs,
}

#[derive(Args, Debug)]
pub struct GkmArgs {
    #[arg(long, default_value = "h")]
    pub theory: Theory,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub ell: EllArgs,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub ell: EllArgs,
}

#[derive(Args, Debug)]
pub struct ThetaDerivArgs {
    #[arg(long, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub ell: EllArgs,
}

/// A finished command: exit code plus the document for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn new(code: i32, output: String) -> Self {
        Outcome { code, output }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Invalid(_) | Error::Unsupported(_) => EXIT_USAGE,
        Error::Pole(_) | Error::NearPole { .. } | Error::NonConvergence { .. } | Error::NonPolynomial { .. } => EXIT_ANOMALY,
    }
}

/// Parses `args` (including the program name), runs the command, writes its
/// output, and returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.output.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Lr(a) => cmd_lr(a),
        Command::Ortho(a) => cmd_ortho(a),
        Command::Check { which } => match which {
            CheckCommand::Fay(a) => cmd_check_fay(a),
            CheckCommand::Gkm(a) => cmd_check_gkm(a),
            CheckCommand::Limit83(a) => cmd_check_limit(a),
            CheckCommand::ThetaDeriv(a) => cmd_check_theta_deriv(a),
        },
    }
}

fn resolve_shape(s: &ShapeArgs) -> Result<FlagShape, Error> {
    match (&s.lambda, &s.grassmann, s.pn) {
        (Some(l), None, None) => Ok(l.clone()),
        (None, Some(g), None) => {
            let nums: Vec<usize> = g
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Invalid(format!("--grassmann expects `m,n`, got `{g}`")))?;
            match nums[..] {
                [m, n] => FlagShape::grassmannian(m, n),
                _ => Err(Error::Invalid(format!("--grassmann expects `m,n`, got `{g}`"))),
            }
        }
        (None, None, Some(n)) => pn_shape(n),
        (None, None, None) => Err(Error::Invalid("one of --lambda, --grassmann, --pn is required".into())),
        _ => Err(Error::Invalid("--lambda, --grassmann and --pn are mutually exclusive".into())),
    }
}

/// A tuple given as `{..}|{..}` or, on a Grassmannian, as a partition.
fn resolve_tuple(shape: &FlagShape, text: &str) -> Result<IndexTuple, Error> {
    let t = text.trim();
    if t.contains('{') || t.contains('|') {
        let tuple: IndexTuple = t.parse()?;
        if tuple.shape() != *shape {
            return Err(Error::Invalid(format!("tuple {tuple} does not have shape ({shape})")));
        }
        return Ok(tuple);
    }
    if !shape.is_grassmannian() {
        return Err(Error::Invalid(format!("partition `{t}` needs a Grassmannian, not ({shape})")));
    }
    let p: Partition = t.parse()?;
    let subset = partition_to_subset(&p, shape.part(1), shape.n())?;
    IndexTuple::from_subset(&subset, shape.n())
}

fn pn_index(text: Option<&str>, alt: Option<usize>, name: &str) -> Result<usize, Error> {
    match (text, alt) {
        (Some(t), _) => t
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("with --pn, --{name} must be an index, got `{t}`"))),
        (None, Some(v)) => Ok(v),
        (None, None) => Err(Error::Invalid(format!("--pn needs --{name}"))),
    }
}

fn c64_json(v: C64) -> Value {
    json!([v.re, v.im])
}

fn c64_text(v: C64) -> String {
    format!("({:.12e}, {:.12e})", v.re, v.im)
}

fn emit(format: Format, doc: Value, text: String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("json value serializes");
            s.push('\n');
            s
        }
        Format::Text => text,
    }
}

fn meta_json(ctx: &EllipticContext) -> Value {
    serde_json::to_value(EllipticMeta::of(ctx)).expect("meta serializes")
}

pub fn cmd_lr(a: &LrArgs) -> Result<Outcome, Error> {
    let shape = resolve_shape(&a.shape)?;
    if let Some(n) = a.shape.pn {
        return cmd_lr_pn(a, n, &shape);
    }
    let i_text = a.i.as_deref().ok_or_else(|| Error::Invalid("--i is required".into()))?;
    let i = resolve_tuple(&shape, i_text)?;
    let same = |s: &Option<String>| -> Result<Option<IndexTuple>, Error> {
        match s.as_deref() {
            None => Ok(None),
            Some("same") => Ok(Some(i.clone())),
            Some(t) => resolve_tuple(&shape, t).map(Some),
        }
    };
    let j = same(&a.j)?.ok_or_else(|| Error::Invalid("--j is required".into()))?;
    let k = same(&a.k)?;
    if a.theory == Theory::E && a.specialize != Specialization::Equivariant {
        return Err(Error::Unsupported("elliptic tables are not specialized".into()));
    }
    let ctx = if a.theory == Theory::E { Some(a.ell.context()?) } else { None };
    let table = match (a.theory, k) {
        (Theory::E, Some(k)) => {
            let base = ctx.as_ref().expect("elliptic context");
            let (v, point) = at_generic_point(base, shape.n(), shape.len(), RETRIES, |c| {
                elliptic_lr_coefficient(&shape, &i, &j, &k, c).map(|v| (v, c.clone()))
            })?;
            single_entry(a.theory, &shape, &i, &j, k, Coefficient::Numeric(v), Some(&point))
        }
        (Theory::E, None) => {
            let base = ctx.as_ref().expect("elliptic context");
            at_generic_point(base, shape.n(), shape.len(), RETRIES, |c| {
                expand_product(a.theory, &shape, &i, &j, Some(c), a.threads)
            })?
        }
        (theory, Some(k)) => {
            let v = lr_coefficient(theory, &shape, &i, &j, &k)?;
            single_entry(theory, &shape, &i, &j, k, Coefficient::Exact(v), None)
        }
        (theory, None) => expand_product(theory, &shape, &i, &j, None, a.threads)?,
    };
    let table = specialize_nonequivariant(&table, a.specialize).or_else(|e| match a.theory {
        Theory::E => Ok(table.clone()),
        _ => Err(e),
    })?;
    Ok(Outcome::new(EXIT_OK, render_table(&table, a.format)))
}

fn single_entry(
    theory: Theory,
    shape: &FlagShape,
    i: &IndexTuple,
    j: &IndexTuple,
    k: IndexTuple,
    c: Coefficient,
    ctx: Option<&EllipticContext>,
) -> LrTable {
    let mut entries = std::collections::BTreeMap::new();
    let zero = match &c {
        Coefficient::Exact(p) => p.is_zero(),
        Coefficient::Numeric(v) => *v == C64::new(0.0, 0.0),
    };
    if !zero {
        entries.insert(k, c);
    }
    LrTable {
        theory,
        shape: shape.clone(),
        i: i.clone(),
        j: j.clone(),
        entries,
        specialization: Specialization::Equivariant,
        elliptic: ctx.map(EllipticMeta::of),
    }
}

fn cmd_lr_pn(a: &LrArgs, n: usize, shape: &FlagShape) -> Result<Outcome, Error> {
    if a.theory != Theory::E {
        return Err(Error::Invalid("--pn is only used with --theory ell".into()));
    }
    let k = pn_index(a.k.as_deref(), None, "k")?;
    let l = pn_index(a.i.as_deref().filter(|_| a.l.is_none()), a.l, "l")?;
    let m = pn_index(None, a.m, "m")?;
    let (lo, hi) = if k <= l { (k, l) } else { (l, k) };
    let base = a.ell.context()?;
    let (value, closed, point) = at_generic_point(&base, n, 2, RETRIES, |c| {
        let v = elliptic_lr_coefficient(shape, &pn_tuple(n, lo)?, &pn_tuple(n, hi)?, &pn_tuple(n, m)?, c)?;
        let closed = match elliptic_pn_closed_form(n, lo, hi, m, c) {
            Ok(x) => Some(x),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok((v, closed, c.clone()))
    })?;
    let diff = closed.map(|c| (c - value).norm());
    let doc = json!({
        "theory": Theory::E,
        "pn": n,
        "k": lo,
        "l": hi,
        "m": m,
        "value": c64_json(value),
        "closed_form": closed.map(c64_json),
        "difference": diff,
        "meta": meta_json(&point),
    });
    let mut text = format!("LR_{{{lo},{hi}}}^{m} = {}\n", c64_text(value));
    match (closed, diff) {
        (Some(c), Some(d)) => text.push_str(&format!("closed form = {}\n|difference| = {d:.3e}\n", c64_text(c))),
        _ => text.push_str("closed form: not available for m < k\n"),
    }
    let code = match diff {
        Some(d) if d > point.tol() * (1.0 + value.norm()) => EXIT_VIOLATION,
        _ => EXIT_OK,
    };
    Ok(Outcome::new(code, emit(a.format, doc, text)))
}

pub fn cmd_ortho(a: &OrthoArgs) -> Result<Outcome, Error> {
    let shape = resolve_shape(&a.shape)?;
    let tuples = enumerate_tuples(&shape);
    let mut offending = Vec::new();
    let (max_dev, meta) = if a.theory == Theory::E {
        let base = a.ell.context()?;
        let (gram, point) = at_generic_point(&base, shape.n(), shape.len(), RETRIES, |c| {
            elliptic_orthogonality_check(&shape, c).map(|g| (g, c.clone()))
        })?;
        let mut worst: f64 = 0.0;
        for (r, row) in gram.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                worst = worst.max(v.norm());
                if v.norm() >= point.tol() {
                    offending.push((tuples[r].to_string(), tuples[c].to_string(), format!("{:.3e}", v.norm())));
                }
            }
        }
        (Some(worst), Some(meta_json(&point)))
    } else {
        let gram = orthogonality_check(a.theory, &shape)?;
        for (r, row) in gram.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    offending.push((tuples[r].to_string(), tuples[c].to_string(), v.to_string()));
                }
            }
        }
        (None, None)
    };
    let pass = offending.is_empty();
    let doc = json!({
        "theory": a.theory,
        "lambda": shape.lambda(),
        "size": tuples.len(),
        "identity": pass,
        "max_deviation": max_dev,
        "violations": offending.iter().map(|(i, j, v)| json!({"i": i, "j": j, "deviation": v})).collect::<Vec<_>>(),
        "meta": meta,
    });
    let mut text = format!("{} Gram matrix on ({shape}), {}×{}: ", a.theory, tuples.len(), tuples.len());
    text.push_str(if pass { "identity" } else { "NOT identity" });
    if let Some(d) = max_dev {
        text.push_str(&format!(" (max deviation {d:.3e})"));
    }
    text.push('\n');
    for (i, j, v) in &offending {
        text.push_str(&format!("  <{i}, {j}> - delta = {v}\n"));
    }
    Ok(Outcome::new(if pass { EXIT_OK } else { EXIT_VIOLATION }, emit(a.format, doc, text)))
}

pub fn cmd_check_fay(a: &FayArgs) -> Result<Outcome, Error> {
    let base = a.ell.context()?;
    let mut worst: f64 = 0.0;
    for p in 0..a.points as u64 {
        worst = worst.max(fay_point_residual(&base, p)?);
    }
    let pass = worst < base.tol();
    let doc = json!({
        "check": "fay",
        "points": a.points,
        "max_residual": worst,
        "pass": pass,
        "meta": meta_json(&base),
    });
    let text = format!(
        "trisecant identity at {} points: max |residual| = {worst:.3e} ({})\n",
        a.points,
        if pass { "pass" } else { "FAIL" }
    );
    Ok(Outcome::new(if pass { EXIT_OK } else { EXIT_VIOLATION }, emit(a.format, doc, text)))
}

/// `|fay_residual|` at the `point`-th seeded random point, redrawn on a near
/// pole. Logs have real part in `[−½, ½]` and imaginary part in `[−3, 3]`.
pub fn fay_point_residual(ctx: &EllipticContext, point: u64) -> Result<f64, Error> {
    use rand::{Rng, SeedableRng};
    let mut last = None;
    for attempt in 0..=RETRIES {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.seed());
        rng.set_stream(((point + 1) << 8) + attempt);
        let mut draw = || C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-3.0..3.0));
        match fay_terms(draw(), draw(), draw(), draw(), ctx) {
            Ok(t) => return Ok(t.iter().sum::<C64>().norm()),
            Err(e @ Error::NearPole { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

pub fn cmd_check_gkm(a: &GkmArgs) -> Result<Outcome, Error> {
    let shape = resolve_shape(&a.shape)?;
    let n = shape.n();
    let id = Permutation::identity(n);
    let mut failures = Vec::new();
    let mut worst: Option<f64> = None;
    let mut meta = None;
    if a.theory == Theory::E {
        let base = a.ell.context()?;
        let point = at_generic_point(&base, n, shape.len(), RETRIES, |c| {
            let mut w: f64 = 0.0;
            let mut bad = Vec::new();
            for i in enumerate_tuples(&shape) {
                for x in 1..=n {
                    for y in x + 1..=n {
                        let vals = gkm_limit_values(&shape, c, (x, y), &|cc| Ok(elliptic_class_tuple(&shape, &i, &id, cc)?.values))?;
                        for (l, r, res) in neighbor_residuals(&shape, (x, y), &vals) {
                            w = w.max(res);
                            if res >= c.tol() {
                                bad.push(format!("W_{i}: ({x},{y})-neighbors {l} and {r} differ by {res:.3e}"));
                            }
                        }
                    }
                }
            }
            Ok((w, bad, c.clone()))
        })?;
        worst = Some(point.0);
        failures = point.1;
        meta = Some(meta_json(&point.2));
    } else {
        for i in enumerate_tuples(&shape) {
            if let Err(v) = gkm_check(&class_tuple(a.theory, &shape, &i, &id)?) {
                failures.extend(v.iter().map(|x| format!("W_{i}: {x}")));
            }
        }
    }
    let pass = failures.is_empty();
    let doc = json!({
        "check": "gkm",
        "theory": a.theory,
        "lambda": shape.lambda(),
        "pass": pass,
        "max_residual": worst,
        "violations": failures,
        "meta": meta,
    });
    let mut text = format!(
        "GKM condition for all {} classes on ({shape}): {}",
        a.theory,
        if pass { "pass" } else { "FAIL" }
    );
    if let Some(w) = worst {
        text.push_str(&format!(" (max residual {w:.3e})"));
    }
    text.push('\n');
    for f in &failures {
        text.push_str(&format!("  {f}\n"));
    }
    Ok(Outcome::new(if pass { EXIT_OK } else { EXIT_VIOLATION }, emit(a.format, doc, text)))
}

pub fn cmd_check_limit(a: &LimitArgs) -> Result<Outcome, Error> {
    let base = a.ell.context()?;
    let (lim, point) = at_generic_point(&base, 2, 2, RETRIES, |c| {
        removable_limit(c, &LimitPath::default()).map(|v| (v, c.clone()))
    })?;
    let doc = json!({
        "check": "limit83",
        "value": c64_json(lim.value),
        "spread": lim.spread,
        "meta": meta_json(&point),
    });
    let text = format!(
        "removable limit = {} (last extrapolation correction {:.3e})\n",
        c64_text(lim.value),
        lim.spread
    );
    Ok(Outcome::new(EXIT_OK, emit(a.format, doc, text)))
}

/// `ϑ'(1)` and the extrapolated central difference `(ϑ(e^u) − ϑ(e^{−u}))/2u`.
pub fn theta_deriv_pair(ctx: &EllipticContext) -> Result<(C64, C64, f64), Error> {
    let (d, spread) = richardson_even(
        |u| Ok(vec![(ctx.theta_log(u) - ctx.theta_log(-u)) / (u * 2.0)]),
        C64::new(0.1, 0.0),
        8,
    )?;
    Ok((theta_prime_1(ctx), d[0], spread))
}

pub fn cmd_check_theta_deriv(a: &ThetaDerivArgs) -> Result<Outcome, Error> {
    let ctx = a.ell.context()?;
    let (exact, fd, _) = theta_deriv_pair(&ctx)?;
    let diff = (exact - fd).norm();
    let pass = diff < ctx.tol();
    let doc = json!({
        "check": "theta-deriv",
        "product": c64_json(exact),
        "finite_difference": c64_json(fd),
        "difference": diff,
        "pass": pass,
        "meta": meta_json(&ctx),
    });
    let text = format!(
        "theta'(1): product {} vs difference quotient {}: |difference| = {diff:.3e} ({})\n",
        c64_text(exact),
        c64_text(fd),
        if pass { "pass" } else { "FAIL" }
    );
    Ok(Outcome::new(if pass { EXIT_OK } else { EXIT_VIOLATION }, emit(a.format, doc, text)))
}
