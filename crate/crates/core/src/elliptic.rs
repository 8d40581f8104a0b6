//! Numeric theta functions and elliptic weight functions.
//!
//! Every generator (`z_i`, `ħ`, `μ_j`) is assigned a complex logarithm, and a
//! theta argument is a monomial in the generators with half-integer
//! exponents. Square roots are taken as `exp(½·log)` of the assigned logs, so
//! all identities are branch-consistent.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::flags::{act, enumerate_tuples, j_invariant, p_invariant, transpose, FlagShape, IndexTuple, Permutation};
use crate::scalars::VariableId;
use crate::weights::{block_orderings, GkmTuple, Theory};

pub type C64 = Complex64;

pub const DEFAULT_Q: f64 = 0.1;
pub const DEFAULT_TRUNC: usize = 40;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Numeric evaluation environment.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticContext {
    q: C64,
    trunc: usize,
    tol: f64,
    seed: u64,
    logs: BTreeMap<VariableId, C64>,
    qpow: Vec<C64>,
}

impl Default for EllipticContext {
    fn default() -> Self {
        EllipticContext::new(C64::new(DEFAULT_Q, 0.0), DEFAULT_TRUNC, DEFAULT_TOL, 0)
            .expect("default parameters are valid")
    }
}

impl EllipticContext {
    /// Rejects `|q| ≥ 1`, `trunc = 0`, and truncations whose tail `|q|^trunc`
    /// is not below `tol/100`.
    pub fn new(q: C64, trunc: usize, tol: f64, seed: u64) -> Result<Self, Error> {
        if q.norm() >= 1.0 {
            return Err(Error::Invalid(format!("|q| = {} is not below 1", q.norm())));
        }
        if trunc == 0 {
            return Err(Error::Invalid("truncation order must be positive".into()));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Invalid(format!("tolerance {tol} must be positive")));
        }
        let tail = q.norm().powi(trunc as i32);
        if tail >= tol / 100.0 {
            return Err(Error::Invalid(format!(
                "|q|^{trunc} = {tail:e} is not below tol/100 = {:e}; raise the truncation",
                tol / 100.0
            )));
        }
        let mut qpow = Vec::with_capacity(trunc);
        let mut acc = C64::new(1.0, 0.0);
        for _ in 0..trunc {
            acc *= q;
            qpow.push(acc);
        }
        Ok(EllipticContext {
            q,
            trunc,
            tol,
            seed,
            logs: BTreeMap::new(),
            qpow,
        })
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn logs(&self) -> &BTreeMap<VariableId, C64> {
        &self.logs
    }

    /// Same point and parameters with a different truncation order.
    pub fn with_trunc(&self, trunc: usize) -> Result<Self, Error> {
        let mut out = EllipticContext::new(self.q, trunc, self.tol, self.seed)?;
        out.logs = self.logs.clone();
        Ok(out)
    }

    pub fn with_log(mut self, v: VariableId, log: C64) -> Self {
        self.set_log(v, log);
        self
    }

    pub fn set_log(&mut self, v: VariableId, log: C64) {
        assert!(!matches!(v, VariableId::T(..)), "t-variables are never assigned values");
        self.logs.insert(v, log);
    }

    pub fn log(&self, v: VariableId) -> Result<C64, Error> {
        self.logs
            .get(&v)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("no value assigned to {v}")))
    }

    /// A seeded random point for `z_1..z_n`, `ħ`, `μ_1..μ_parts`.
    ///
    /// Logs have real part in `[−½, ½]` and imaginary part in `[−3, 3]`, so
    /// each value lies on the annulus `e^{−½} ≤ |x| ≤ e^{½}`. `attempt`
    /// selects an independent stream for resampling.
    pub fn sample_point(&self, n: usize, parts: usize, attempt: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(attempt);
        let mut draw = || C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-3.0..3.0));
        let mut out = self.clone();
        out.logs.clear();
        for i in 1..=n {
            out.logs.insert(VariableId::z(i), draw());
        }
        out.logs.insert(VariableId::Hbar, draw());
        for j in 1..=parts {
            out.logs.insert(VariableId::mu(j), draw());
        }
        out
    }

    /// `τ`: `log μ_i ↦ λ_i·log ħ − log μ_i`.
    pub fn tau(&self, shape: &FlagShape) -> Result<Self, Error> {
        let lh = self.log(VariableId::Hbar)?;
        let mut out = self.clone();
        for j in 1..=shape.len() {
            let lm = self.log(VariableId::mu(j))?;
            out.logs.insert(VariableId::mu(j), lh * shape.part(j) as f64 - lm);
        }
        Ok(out)
    }

    /// `ϑ(e^L)`.
    pub fn theta_log(&self, l: C64) -> C64 {
        let half = (l * 0.5).exp();
        let x = half * half;
        let xi = x.inv();
        let mut v = half - half.inv();
        for qs in &self.qpow {
            v *= (C64::new(1.0, 0.0) - qs * x) * (C64::new(1.0, 0.0) - qs * xi);
        }
        v
    }

    /// `ϑ(e^L)` as a denominator: `NearPole` below tolerance.
    pub fn theta_den(&self, l: C64, what: impl FnOnce() -> String) -> Result<C64, Error> {
        let v = self.theta_log(l);
        if v.norm() < self.tol {
            return Err(Error::NearPole {
                what: what(),
                magnitude: v.norm(),
            });
        }
        Ok(v)
    }
}

/// A monomial in the generators with half-integer exponents.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MonomialArg {
    twice: BTreeMap<VariableId, i32>,
}

impl MonomialArg {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VariableId) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: VariableId, e: i32) -> Self {
        let mut out = Self::default();
        out.add(v, 2 * e);
        out
    }

    /// `v^{1/2}`.
    pub fn sqrt_var(v: VariableId) -> Self {
        let mut out = Self::default();
        out.add(v, 1);
        out
    }

    /// `a / b`.
    pub fn ratio(a: VariableId, b: VariableId) -> Self {
        Self::var(a).div(&Self::var(b))
    }

    fn add(&mut self, v: VariableId, twice: i32) {
        let e = self.twice.entry(v).or_insert(0);
        *e += twice;
        if *e == 0 {
            self.twice.remove(&v);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&v, &e) in &other.twice {
            out.add(v, e);
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Self {
        MonomialArg {
            twice: self.twice.iter().map(|(&v, &e)| (v, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Self {
        MonomialArg {
            twice: self
                .twice
                .iter()
                .filter(|_| k != 0)
                .map(|(&v, &e)| (v, e * k))
                .collect(),
        }
    }

    /// Exponent of `v`, as a float (halves allowed).
    pub fn exponent(&self, v: VariableId) -> f64 {
        self.twice.get(&v).map_or(0.0, |&e| e as f64 / 2.0)
    }

    pub fn is_one(&self) -> bool {
        self.twice.is_empty()
    }

    /// `Σ exponent·log` over the generators.
    pub fn log(&self, ctx: &EllipticContext) -> Result<C64, Error> {
        let mut acc = C64::new(0.0, 0.0);
        for (&v, &e) in &self.twice {
            acc += ctx.log(v)? * (e as f64 / 2.0);
        }
        Ok(acc)
    }
}

impl fmt::Display for MonomialArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.twice.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match (e % 2 == 0, e / 2) {
                (true, 1) => write!(f, "{v}")?,
                (true, k) => write!(f, "{v}^{k}")?,
                (false, _) => write!(f, "{v}^({e}/2)")?,
            }
        }
        Ok(())
    }
}

/// `ϑ(x) = (x^{1/2} − x^{−1/2}) ∏_{s=1}^{trunc} (1 − q^s x)(1 − q^s/x)`.
pub fn theta(x: &MonomialArg, ctx: &EllipticContext) -> Result<C64, Error> {
    Ok(ctx.theta_log(x.log(ctx)?))
}

/// `ϑ'(1) = ∏_{s=1}^{trunc} (1 − q^s)²`.
pub fn theta_prime_1(ctx: &EllipticContext) -> C64 {
    ctx.qpow
        .iter()
        .map(|qs| (C64::new(1.0, 0.0) - qs).powi(2))
        .product()
}

/// `δ(x, y) = ϑ(xy)ϑ'(1) / (ϑ(x)ϑ(y))`.
pub fn delta(x: &MonomialArg, y: &MonomialArg, ctx: &EllipticContext) -> Result<C64, Error> {
    delta_log(x.log(ctx)?, y.log(ctx)?, ctx)
}

fn delta_log(x: C64, y: C64, ctx: &EllipticContext) -> Result<C64, Error> {
    let tx = ctx.theta_den(x, || format!("theta(exp({x}))"))?;
    let ty = ctx.theta_den(y, || format!("theta(exp({y}))"))?;
    Ok(ctx.theta_log(x + y) * theta_prime_1(ctx) / (tx * ty))
}

/// Left-hand side of the trisecant identity with `x3 = 1/(x1 x2)`,
/// `y3 = 1/(y1 y2)`:
/// `δ(x1,y2)δ(x2,1/y1) + δ(x2,y3)δ(x3,1/y2) + δ(x3,y1)δ(x1,1/y3)`.
pub fn fay_residual(
    x1: &MonomialArg,
    x2: &MonomialArg,
    y1: &MonomialArg,
    y2: &MonomialArg,
    ctx: &EllipticContext,
) -> Result<C64, Error> {
    let terms = fay_terms(x1.log(ctx)?, x2.log(ctx)?, y1.log(ctx)?, y2.log(ctx)?, ctx)?;
    Ok(terms.iter().sum())
}

/// The three summands of the trisecant identity, in log coordinates.
pub fn fay_terms(x1: C64, x2: C64, y1: C64, y2: C64, ctx: &EllipticContext) -> Result<[C64; 3], Error> {
    let x3 = -x1 - x2;
    let y3 = -y1 - y2;
    Ok([
        delta_log(x1, y2, ctx)? * delta_log(x2, -y1, ctx)?,
        delta_log(x2, y3, ctx)? * delta_log(x3, -y2, ctx)?,
        delta_log(x3, y1, ctx)? * delta_log(x1, -y3, ctx)?,
    ])
}

/// `U^E` of `tuple` with `t(k, a)` giving `log t^{(k)}_a` (`k = N` gives the
/// relabeled `log z_a`).
fn u_elliptic(tuple: &IndexTuple, t: &dyn Fn(usize, usize) -> C64, ctx: &EllipticContext) -> Result<C64, Error> {
    let shape = tuple.shape();
    let big_n = shape.len();
    let lh = ctx.log(VariableId::Hbar)?;
    let th_h = ctx.theta_den(lh, || "theta(h)".into())?;
    let mut val = theta_prime_1(ctx).powu(tuple.dim() as u32);
    for k in 1..big_n {
        for a in 1..=shape.prefix(k) {
            let ia = tuple.element(k, a);
            let ta = t(k, a);
            for b in 1..=shape.prefix(k + 1) {
                let ib = tuple.element(k + 1, b);
                let x = t(k + 1, b) - ta;
                val *= match ib.cmp(&ia) {
                    std::cmp::Ordering::Less => ctx.theta_log(x + lh) / th_h,
                    std::cmp::Ordering::Equal => {
                        let j = j_invariant(tuple, k, a);
                        let e = 1 + p_invariant(tuple, j, ia) as i64 - p_invariant(tuple, k + 1, ia) as i64;
                        let c = ctx.log(VariableId::mu(k + 1))? - ctx.log(VariableId::mu(j))? + lh * e as f64;
                        ctx.theta_log(x + c) / ctx.theta_den(c, || format!("dynamical shift {c}"))?
                    }
                    std::cmp::Ordering::Greater => ctx.theta_log(x),
                };
            }
            for b in 1..=shape.prefix(k) {
                let d = t(k, b) - ta;
                if a < b {
                    val /= ctx.theta_den(d, || format!("theta(t{k}_{b}/t{k}_{a})"))?;
                } else if b < a {
                    val *= th_h / ctx.theta_den(d + lh, || format!("theta(h*t{k}_{b}/t{k}_{a})"))?;
                }
            }
        }
    }
    Ok(val)
}

/// `W^E_{σ,I}(z_L)`.
pub fn elliptic_weight_restriction(
    shape: &FlagShape,
    tuple: &IndexTuple,
    at: &IndexTuple,
    sigma: &Permutation,
    ctx: &EllipticContext,
) -> Result<C64, Error> {
    if tuple.shape() != *shape || at.shape() != *shape || sigma.n() != shape.n() {
        return Err(Error::Invalid(format!(
            "tuples {tuple}, {at} and a permutation of {} letters do not match shape ({shape})",
            sigma.n()
        )));
    }
    let big_n = shape.len();
    let source = act(sigma, tuple);
    let zlog = |i: usize| ctx.log(VariableId::z(i));
    let relabeled = (1..=shape.n())
        .map(|a| zlog(sigma.apply(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let zs = (1..=shape.n()).map(zlog).collect::<Result<Vec<_>, _>>()?;
    let mut total = C64::new(0.0, 0.0);
    for choice in block_orderings(shape, &|k| at.cumulative(k).to_vec()) {
        let t = |k: usize, a: usize| {
            if k == big_n {
                relabeled[a - 1]
            } else {
                zs[choice[k - 1][a - 1] - 1]
            }
        };
        total += u_elliptic(&source, &t, ctx)?;
    }
    Ok(total)
}

/// All restrictions of `W^E_{σ,I}` at the point of `ctx`.
pub fn elliptic_class_tuple(
    shape: &FlagShape,
    tuple: &IndexTuple,
    sigma: &Permutation,
    ctx: &EllipticContext,
) -> Result<GkmTuple<C64>, Error> {
    let values = enumerate_tuples(shape)
        .iter()
        .map(|at| elliptic_weight_restriction(shape, tuple, at, sigma, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GkmTuple {
        theory: Theory::E,
        shape: shape.clone(),
        values,
    })
}

/// Richardson extrapolation to `u → 0` of `f(u)` sampled at
/// `u = h, h/2, h/4, …` (`levels` samples). Returns the extrapolated values
/// and the size of the last correction.
pub fn richardson<F>(f: F, h: C64, levels: usize) -> Result<(Vec<C64>, f64), Error>
where
    F: Fn(C64) -> Result<Vec<C64>, Error>,
{
    extrapolate(f, h, levels, 1)
}

/// Like [`richardson`], for `f` analytic at 0: samples the even part
/// `(f(u) + f(−u))/2` and eliminates powers of `u²`.
pub fn richardson_even<F>(f: F, h: C64, levels: usize) -> Result<(Vec<C64>, f64), Error>
where
    F: Fn(C64) -> Result<Vec<C64>, Error>,
{
    let even = |u: C64| -> Result<Vec<C64>, Error> {
        let a = f(u)?;
        let b = f(-u)?;
        Ok(a.iter().zip(&b).map(|(x, y)| (x + y) * 0.5).collect())
    };
    extrapolate(even, h, levels, 2)
}

fn extrapolate<F>(f: F, h: C64, levels: usize, power: i32) -> Result<(Vec<C64>, f64), Error>
where
    F: Fn(C64) -> Result<Vec<C64>, Error>,
{
    assert!(levels >= 2, "extrapolation needs at least two samples");
    let mut table: Vec<Vec<Vec<C64>>> = Vec::with_capacity(levels);
    let mut step = h;
    for k in 0..levels {
        let mut row = vec![f(step)?];
        for m in 1..=k {
            let scale = 2f64.powi(power * m as i32);
            let prev = &table[k - 1][m - 1];
            let cur = &row[m - 1];
            let next: Vec<C64> = cur
                .iter()
                .zip(prev)
                .map(|(c, p)| (c * scale - p) / (scale - 1.0))
                .collect();
            row.push(next);
        }
        table.push(row);
        step /= 2.0;
    }
    let last = &table[levels - 1][levels - 1];
    let before = &table[levels - 2][levels - 2];
    let spread = last
        .iter()
        .zip(before)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok((last.clone(), spread))
}

/// Residual of the GKM condition for the `(i, j)`-neighboring pairs of the
/// class `W^E_{σ,I}`.
///
/// The classes are evaluated at `z_j = z_i`. Individual symmetrization terms
/// may have a pole there even though their sum does not; in that case the
/// value is the Richardson limit along `log z_j = log z_i + u`.
pub fn gkm_check_numeric(
    shape: &FlagShape,
    tuple: &IndexTuple,
    sigma: &Permutation,
    ctx: &EllipticContext,
    pair: (usize, usize),
) -> Result<Vec<(IndexTuple, IndexTuple, f64)>, Error> {
    let (i, j) = pair;
    if i == j || i == 0 || j == 0 || i > shape.n() || j > shape.n() {
        return Err(Error::Invalid(format!("({i},{j}) is not a pair of distinct indices of 1..={}", shape.n())));
    }
    let values = gkm_limit_values(shape, ctx, (i, j), &|c| Ok(elliptic_class_tuple(shape, tuple, sigma, c)?.values))?;
    Ok(neighbor_residuals(shape, (i, j), &values))
}

/// Evaluates `eval` at `z_j = z_i`, falling back to a Richardson limit when
/// a term is singular there.
pub fn gkm_limit_values(
    shape: &FlagShape,
    ctx: &EllipticContext,
    (i, j): (usize, usize),
    eval: &dyn Fn(&EllipticContext) -> Result<Vec<C64>, Error>,
) -> Result<Vec<C64>, Error> {
    let _ = shape;
    let li = ctx.log(VariableId::z(i))?;
    let at = |u: C64| ctx.clone().with_log(VariableId::z(j), li + u);
    match eval(&at(C64::new(0.0, 0.0))) {
        Err(Error::NearPole { .. }) => {
            let (v, spread) = richardson_even(|u| eval(&at(u)), C64::new(0.05, 0.02), 6)?;
            if spread > ctx.tol() {
                return Err(Error::NonConvergence {
                    spread,
                    tol: ctx.tol(),
                });
            }
            Ok(v)
        }
        other => other,
    }
}

/// `|f_I − f_J|` for every `(i,j)`-neighboring pair `I, J`.
pub fn neighbor_residuals(shape: &FlagShape, (i, j): (usize, usize), values: &[C64]) -> Vec<(IndexTuple, IndexTuple, f64)> {
    let tuples = enumerate_tuples(shape);
    let mut out = Vec::new();
    for (ix, a) in tuples.iter().enumerate() {
        if a.part_of(i) == a.part_of(j) {
            continue;
        }
        let b = transpose(a, i, j);
        let jx = tuples.binary_search(&b).expect("same shape");
        if jx > ix {
            out.push((a.clone(), b, (values[ix] - values[jx]).norm()));
        }
    }
    out
}

/// The non-equivariant limit
/// `ϑ'(1)² · lim_{r→1} (ϑ(r μ_2/μ_1)/ϑ(μ_2/μ_1) − ϑ(r ħ)/ϑ(ħ)) / ϑ(r)`,
/// with `r = e^{±u}` sampled at `u = h, h/2, …`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitPath {
    pub h: C64,
    pub levels: usize,
}

impl Default for LimitPath {
    fn default() -> Self {
        LimitPath {
            h: C64::new(0.1, 0.04),
            levels: 6,
        }
    }
}

/// Value of the limit together with the size of the last Richardson correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitValue {
    pub value: C64,
    pub spread: f64,
}

pub fn removable_limit(ctx: &EllipticContext, path: &LimitPath) -> Result<LimitValue, Error> {
    let lm = ctx.log(VariableId::mu(2))? - ctx.log(VariableId::mu(1))?;
    let lh = ctx.log(VariableId::Hbar)?;
    let tm = ctx.theta_den(lm, || "theta(mu2/mu1)".into())?;
    let th = ctx.theta_den(lh, || "theta(h)".into())?;
    let pref = theta_prime_1(ctx).powi(2);
    let f = |u: C64| -> Result<Vec<C64>, Error> {
        let den = ctx.theta_den(u, || format!("theta(exp({u}))"))?;
        Ok(vec![pref * (ctx.theta_log(u + lm) / tm - ctx.theta_log(u + lh) / th) / den])
    };
    let (v, spread) = richardson_even(f, path.h, path.levels)?;
    if spread > ctx.tol() {
        return Err(Error::NonConvergence {
            spread,
            tol: ctx.tol(),
        });
    }
    Ok(LimitValue { value: v[0], spread })
}

/// Runs `f` at seeded generic points, resampling on `NearPole` up to
/// `retries` times.
pub fn at_generic_point<T>(
    base: &EllipticContext,
    n: usize,
    parts: usize,
    retries: u64,
    mut f: impl FnMut(&EllipticContext) -> Result<T, Error>,
) -> Result<T, Error> {
    let mut last = None;
    for attempt in 0..=retries {
        let ctx = base.sample_point(n, parts, attempt);
        match f(&ctx) {
            Err(e @ Error::NearPole { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> EllipticContext {
        EllipticContext::default().sample_point(3, 2, 0)
    }

    #[test]
    fn theta_vanishes_at_one_and_is_odd() {
        let c = ctx();
        assert_eq!(theta(&MonomialArg::one(), &c).unwrap(), C64::new(0.0, 0.0));
        let x = MonomialArg::ratio(VariableId::z(2), VariableId::z(1));
        let a = theta(&x, &c).unwrap();
        let b = theta(&x.inv(), &c).unwrap();
        assert!((a + b).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EllipticContext::new(C64::new(1.0, 0.0), 40, 1e-9, 0).is_err());
        assert!(EllipticContext::new(C64::new(0.5, 0.0), 10, 1e-9, 0).is_err());
        assert!(EllipticContext::new(C64::new(0.1, 0.0), 0, 1e-9, 0).is_err());
    }

    #[test]
    fn half_exponents_follow_the_logs() {
        let c = ctx();
        let h = MonomialArg::sqrt_var(VariableId::Hbar);
        let lh = c.log(VariableId::Hbar).unwrap();
        assert!((h.log(&c).unwrap() - lh * 0.5).norm() < 1e-15);
        assert_eq!(h.pow(2), MonomialArg::var(VariableId::Hbar));
        assert_eq!(h.to_string(), "h^(1/2)");
    }

    #[test]
    fn delta_pole_is_reported() {
        let c = ctx();
        let y = MonomialArg::var(VariableId::Hbar);
        assert!(matches!(delta(&MonomialArg::one(), &y, &c), Err(Error::NearPole { .. })));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = EllipticContext::default().sample_point(4, 2, 3);
        let b = EllipticContext::default().sample_point(4, 2, 3);
        assert_eq!(a, b);
        assert_ne!(a, EllipticContext::default().sample_point(4, 2, 4));
    }

    #[test]
    fn richardson_recovers_polynomial_limit() {
        let (v, spread) = richardson(|u| Ok(vec![C64::new(3.0, 0.0) + u * 2.0 + u * u]), C64::new(0.1, 0.0), 4).unwrap();
        assert!((v[0] - C64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(spread < 1e-12);
    }
}
