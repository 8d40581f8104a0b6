//! Structure constants `LR_{I,J}^K` and basis expansions of products.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::elliptic::{elliptic_class_tuple, theta_prime_1, EllipticContext, C64};
use crate::error::{Error, ParseError};
use crate::flags::{enumerate_tuples, subset_to_partition, FlagShape, IndexTuple, Partition, Permutation};
use crate::pairing::{dual_class, elliptic_dual_class, elliptic_localized_sum, localized_sum};
use crate::scalars::{FactoredRational, MultiPoly, VariableId};
use crate::weights::{class_tuple, GkmTuple, Theory};

/// A structure constant: exact for FUND/H/K, numeric for E.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(MultiPoly),
    Numeric(C64),
}

impl Coefficient {
    pub fn as_exact(&self) -> Option<&MultiPoly> {
        match self {
            Coefficient::Exact(p) => Some(p),
            Coefficient::Numeric(_) => None,
        }
    }

    pub fn as_numeric(&self) -> Option<C64> {
        match self {
            Coefficient::Numeric(v) => Some(*v),
            Coefficient::Exact(_) => None,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(p) => p.is_zero(),
            Coefficient::Numeric(v) => *v == C64::new(0.0, 0.0),
        }
    }
}

/// How the equivariant variables are specialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Specialization {
    /// Keep all `z_i`.
    Equivariant,
    /// `z_i = 0`.
    Z0,
    /// `z_i = 1`.
    Z1,
}

impl Specialization {
    /// The non-equivariant convention of a theory: `z = 1` for K, `z = 0`
    /// otherwise.
    pub fn non_equivariant(theory: Theory) -> Self {
        if theory == Theory::K {
            Specialization::Z1
        } else {
            Specialization::Z0
        }
    }
}

impl FromStr for Specialization {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "equivariant" => Ok(Specialization::Equivariant),
            "z0" | "0" => Ok(Specialization::Z0),
            "z1" | "1" => Ok(Specialization::Z1),
            other => Err(ParseError::new(format!("unknown specialization `{other}` (expected none, z0 or z1)"))),
        }
    }
}

/// The expansion of `W_I · W_J` in the basis `W_K`. Zero entries are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct LrTable {
    pub theory: Theory,
    pub shape: FlagShape,
    pub i: IndexTuple,
    pub j: IndexTuple,
    pub entries: BTreeMap<IndexTuple, Coefficient>,
    pub specialization: Specialization,
    pub elliptic: Option<EllipticMeta>,
}

/// Evaluation parameters recorded alongside numeric tables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipticMeta {
    pub q: [f64; 2],
    pub trunc: usize,
    pub tol: f64,
    pub seed: u64,
}

impl EllipticMeta {
    pub fn of(ctx: &EllipticContext) -> Self {
        EllipticMeta {
            q: [ctx.q().re, ctx.q().im],
            trunc: ctx.trunc(),
            tol: ctx.tol(),
            seed: ctx.seed(),
        }
    }
}

impl LrTable {
    pub fn get(&self, k: &IndexTuple) -> Option<&Coefficient> {
        self.entries.get(k)
    }

    /// The entry labeled by a partition (Grassmannians only).
    pub fn get_partition(&self, p: &Partition) -> Option<&Coefficient> {
        self.entries
            .iter()
            .find(|(k, _)| partition_label(&self.shape, k).as_ref() == Some(p))
            .map(|(_, c)| c)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

fn check_inputs(shape: &FlagShape, tuples: &[&IndexTuple]) -> Result<(), Error> {
    for t in tuples {
        if t.shape() != *shape {
            return Err(Error::Invalid(format!("tuple {t} does not have shape ({shape})")));
        }
    }
    Ok(())
}

fn require_polynomial(v: FactoredRational) -> Result<MultiPoly, Error> {
    v.into_poly().map_err(|r| Error::NonPolynomial {
        denominator: r.denominator_poly().to_string(),
    })
}

type ExactTuple = Arc<GkmTuple<FactoredRational>>;

/// Entries kept before the memo is flushed.
type MemoTable = FxHashMap<(Theory, IndexTuple, bool), ExactTuple>;
const MEMO_LIMIT: usize = 4096;

/// Exact class tuples depend only on the theory and the tuple, and every
/// structure constant needs one dual class per output `K`, so they are
/// shared between calls.
fn memo_class(theory: Theory, shape: &FlagShape, tuple: &IndexTuple, dual: bool) -> Result<ExactTuple, Error> {
    static MEMO: OnceLock<Mutex<MemoTable>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = (theory, tuple.clone(), dual);
    if let Some(t) = memo.lock().expect("memo lock").get(&key) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(if dual {
        dual_class(theory, shape, tuple)?
    } else {
        class_tuple(theory, shape, tuple, &Permutation::identity(shape.n()))?
    });
    let mut map = memo.lock().expect("memo lock");
    if map.len() >= MEMO_LIMIT {
        map.clear();
    }
    map.insert(key, Arc::clone(&t));
    Ok(t)
}

fn product_tuple(theory: Theory, shape: &FlagShape, i: &IndexTuple, j: &IndexTuple) -> Result<GkmTuple<FactoredRational>, Error> {
    let a = memo_class(theory, shape, i, false)?;
    if i == j {
        return Ok(a.map(|v| v.mul(v)));
    }
    let b = memo_class(theory, shape, j, false)?;
    Ok(GkmTuple {
        theory,
        shape: shape.clone(),
        values: a.values.iter().zip(&b.values).map(|(x, y)| x.mul(y)).collect(),
    })
}

/// `LR_{I,J}^K = ⟨W_{id,I} W_{id,J}, dual(K)⟩` in an exact theory.
pub fn lr_coefficient(theory: Theory, shape: &FlagShape, i: &IndexTuple, j: &IndexTuple, k: &IndexTuple) -> Result<MultiPoly, Error> {
    if !theory.is_exact() {
        return Err(Error::Unsupported("use elliptic_lr_coefficient for numeric structure constants".into()));
    }
    check_inputs(shape, &[i, j, k])?;
    let prod = product_tuple(theory, shape, i, j)?;
    let dual = memo_class(theory, shape, k, true)?;
    require_polynomial(localized_sum(theory, shape, &[&prod, &dual]))
}

/// `LR^K_{I,J}` in elliptic cohomology at the point of `ctx`.
pub fn elliptic_lr_coefficient(
    shape: &FlagShape,
    i: &IndexTuple,
    j: &IndexTuple,
    k: &IndexTuple,
    ctx: &EllipticContext,
) -> Result<C64, Error> {
    check_inputs(shape, &[i, j, k])?;
    let id = Permutation::identity(shape.n());
    let a = elliptic_class_tuple(shape, i, &id, ctx)?;
    let b = elliptic_class_tuple(shape, j, &id, ctx)?;
    let d = elliptic_dual_class(shape, k, ctx)?;
    elliptic_localized_sum(shape, &[&a, &b, &d], ctx)
}

/// `W_I · W_J = Σ_K LR_{I,J}^K W_K`, one structure constant per `K`.
///
/// `ctx` is required for the elliptic theory and ignored otherwise.
/// Up to `threads` worker threads share the `K`s; the result does not depend
/// on the thread count.
pub fn expand_product(
    theory: Theory,
    shape: &FlagShape,
    i: &IndexTuple,
    j: &IndexTuple,
    ctx: Option<&EllipticContext>,
    threads: usize,
) -> Result<LrTable, Error> {
    check_inputs(shape, &[i, j])?;
    let ks = enumerate_tuples(shape);
    let values: Vec<Coefficient> = if theory == Theory::E {
        let ctx = ctx.ok_or_else(|| Error::Invalid("the elliptic theory needs an evaluation point".into()))?;
        let id = Permutation::identity(shape.n());
        let a = elliptic_class_tuple(shape, i, &id, ctx)?;
        let b = elliptic_class_tuple(shape, j, &id, ctx)?;
        par_map(&ks, threads, |k| {
            let d = elliptic_dual_class(shape, k, ctx)?;
            Ok(Coefficient::Numeric(elliptic_localized_sum(shape, &[&a, &b, &d], ctx)?))
        })?
    } else {
        let prod = product_tuple(theory, shape, i, j)?;
        par_map(&ks, threads, |k| {
            let d = memo_class(theory, shape, k, true)?;
            Ok(Coefficient::Exact(require_polynomial(localized_sum(theory, shape, &[&prod, &d]))?))
        })?
    };
    let entries = ks
        .into_iter()
        .zip(values)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(LrTable {
        theory,
        shape: shape.clone(),
        i: i.clone(),
        j: j.clone(),
        entries,
        specialization: Specialization::Equivariant,
        elliptic: ctx.filter(|_| theory == Theory::E).map(EllipticMeta::of),
    })
}

/// Maps `f` over `items` on up to `threads` scoped threads, keeping order.
fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> Result<R, Error> + Sync) -> Result<Vec<R>, Error> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<R, Error>>> = (0..items.len()).map(|_| None).collect();
    let done = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let ix = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if ix >= items.len() {
                    break;
                }
                let r = f(&items[ix]);
                done.lock().expect("worker panicked").push((ix, r));
            });
        }
    });
    for (ix, r) in done.into_inner().expect("worker panicked") {
        slots[ix] = Some(r);
    }
    slots.into_iter().map(|r| r.expect("every index computed")).collect()
}

/// Sets every `z_i` to 0 or 1 and drops entries that vanish.
pub fn specialize_nonequivariant(table: &LrTable, convention: Specialization) -> Result<LrTable, Error> {
    if table.theory == Theory::E {
        return Err(Error::Unsupported("elliptic tables are not specialized".into()));
    }
    let value = match convention {
        Specialization::Equivariant => return Ok(table.clone()),
        Specialization::Z0 => MultiPoly::zero(),
        Specialization::Z1 => MultiPoly::one(),
    };
    let assign = |v: VariableId| matches!(v, VariableId::Z(_)).then(|| value.clone());
    let mut entries = BTreeMap::new();
    for (k, c) in &table.entries {
        let p = c.as_exact().expect("exact theory");
        let s = p.substitute(&assign).ok_or_else(|| {
            Error::Invalid(format!("entry at {k} has negative powers of z and cannot be set to 0"))
        })?;
        if !s.is_zero() {
            entries.insert(k.clone(), Coefficient::Exact(s));
        }
    }
    Ok(LrTable {
        entries,
        specialization: convention,
        ..table.clone()
    })
}

/// `λ = (1, n−1)`: projective space of lines in `ℂ^n`.
pub fn pn_shape(n: usize) -> Result<FlagShape, Error> {
    if n < 2 {
        return Err(Error::Invalid(format!("projective space needs n ≥ 2 coordinates, got {n}")));
    }
    FlagShape::new(vec![1, n - 1])
}

/// `I_k = ({k}, [n] − {k})`.
pub fn pn_tuple(n: usize, k: usize) -> Result<IndexTuple, Error> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("k = {k} is outside 1..={n}")));
    }
    IndexTuple::new(vec![vec![k], (1..=n).filter(|&i| i != k).collect()])
}

/// `LR_{k,l}^m` for the fixed points `I_k` of projective space, in closed
/// form (`n` coordinates, `k ≤ l`).
///
/// The value is known for `m ≥ k`: zero for `m > k` and a theta product for
/// `m = k`. For `m < k` an `Unsupported` error is returned; use
/// [`elliptic_lr_coefficient`] there.
pub fn elliptic_pn_closed_form(n: usize, k: usize, l: usize, m: usize, ctx: &EllipticContext) -> Result<C64, Error> {
    if !(1 <= k && k <= l && l <= n && 1 <= m && m <= n) {
        return Err(Error::Invalid(format!("need 1 ≤ k ≤ l ≤ n and 1 ≤ m ≤ n, got n={n}, k={k}, l={l}, m={m}")));
    }
    if m > k {
        return Ok(C64::new(0.0, 0.0));
    }
    if m < k {
        return Err(Error::Unsupported(format!("no closed form for m = {m} < k = {k}")));
    }
    let z = |i: usize| ctx.log(VariableId::z(i));
    let lh = ctx.log(VariableId::Hbar)?;
    let shift = ctx.log(VariableId::mu(2))? - ctx.log(VariableId::mu(1))? + lh * (2.0 - l as f64);
    let zk = z(k)?;
    let th_h = ctx.theta_den(lh, || "theta(h)".into())?;
    let mut v = theta_prime_1(ctx).powu(l as u32 - 1) * ctx.theta_log(z(l)? - zk + shift)
        / ctx.theta_den(shift, || "theta(mu2/mu1*h^(2-l))".into())?;
    for i in 1..l {
        v *= ctx.theta_log(z(i)? + lh - zk) / th_h;
    }
    for i in l + 1..=n {
        v *= ctx.theta_log(z(i)? - zk);
    }
    Ok(v)
}

/// The partition of a Grassmannian fixed point, from its first part.
pub fn partition_label(shape: &FlagShape, k: &IndexTuple) -> Option<Partition> {
    if !shape.is_grassmannian() {
        return None;
    }
    subset_to_partition(k.part(1), shape.part(1), shape.n()).ok()
}

/// Output formats of [`render_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(ParseError::new(format!("unknown format `{other}` (expected text or json)"))),
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct JsonTable<'a> {
    schema: u32,
    theory: Theory,
    lambda: &'a [usize],
    i: String,
    j: String,
    entries: Vec<JsonEntry>,
    meta: JsonMeta,
}

#[derive(Serialize)]
struct JsonEntry {
    k: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct JsonMeta {
    convention: Specialization,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    elliptic: Option<EllipticMeta>,
}

fn key_text(shape: &FlagShape, k: &IndexTuple) -> String {
    match partition_label(shape, k) {
        Some(p) => format!("[{}]", p.parts().iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
        None => k.to_string(),
    }
}

fn value_text(c: &Coefficient) -> String {
    match c {
        Coefficient::Exact(p) => p.to_string(),
        Coefficient::Numeric(v) => format!("({:.12e}, {:.12e})", v.re, v.im),
    }
}

/// Renders a table. Text output has one `key value` line per entry (`{}` for
/// an empty table); partitions label the entries of Grassmannian tables.
pub fn render_table(t: &LrTable, format: Format) -> String {
    match format {
        Format::Text => {
            if t.entries.is_empty() {
                return "{}\n".into();
            }
            let mut out = String::new();
            for (k, c) in &t.entries {
                writeln!(out, "{} {}", key_text(&t.shape, k), value_text(c)).expect("writing to a string");
            }
            out
        }
        Format::Json => {
            let doc = JsonTable {
                schema: SCHEMA_VERSION,
                theory: t.theory,
                lambda: t.shape.lambda(),
                i: t.i.to_string(),
                j: t.j.to_string(),
                entries: t
                    .entries
                    .iter()
                    .map(|(k, c)| JsonEntry {
                        k: k.to_string(),
                        partition: partition_label(&t.shape, k).map(|p| p.parts().to_vec()),
                        coefficient: c.as_exact().map(MultiPoly::to_string),
                        value: c.as_numeric().map(|v| [v.re, v.im]),
                    })
                    .collect(),
                meta: JsonMeta {
                    convention: t.specialization,
                    elliptic: t.elliptic,
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(s: &str) -> IndexTuple {
        s.parse().unwrap()
    }

    #[test]
    fn p1_products() {
        let shape = FlagShape::new(vec![1, 1]).unwrap();
        let a = tup("{1}|{2}");
        let t = expand_product(Theory::H, &shape, &a, &a, None, 1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&a).unwrap().as_exact().unwrap().to_string(), "-z1 + z2");
        let b = tup("{2}|{1}");
        let gr = FlagShape::grassmannian(1, 2).unwrap();
        let unit = expand_product(Theory::Fund, &gr, &b, &b, None, 1).unwrap();
        assert!(unit.get(&b).unwrap().as_exact().unwrap().is_one());
        let t = expand_product(Theory::Fund, &gr, &a, &a, None, 1).unwrap();
        assert_eq!(t.len(), 1);
        let t = specialize_nonequivariant(&t, Specialization::Z0).unwrap();
        assert!(t.is_empty());
        assert_eq!(render_table(&t, Format::Text), "{}\n");
    }

    #[test]
    fn thread_count_does_not_change_the_table() {
        let shape = FlagShape::new(vec![1, 2]).unwrap();
        let a = tup("{2}|{1,3}");
        let one = expand_product(Theory::K, &shape, &a, &a, None, 1).unwrap();
        let three = expand_product(Theory::K, &shape, &a, &a, None, 3).unwrap();
        assert_eq!(render_table(&one, Format::Json), render_table(&three, Format::Json));
    }

    #[test]
    fn pn_tuples() {
        assert_eq!(pn_tuple(3, 2).unwrap(), tup("{2}|{1,3}"));
        assert_eq!(pn_shape(3).unwrap().lambda(), &[1, 2]);
        assert!(pn_tuple(3, 4).is_err());
    }

    #[test]
    fn closed_form_rejects_m_below_k() {
        let ctx = EllipticContext::default().sample_point(3, 2, 0);
        assert!(matches!(elliptic_pn_closed_form(3, 2, 2, 1, &ctx), Err(Error::Unsupported(_))));
        assert_eq!(elliptic_pn_closed_form(3, 1, 2, 3, &ctx).unwrap(), C64::new(0.0, 0.0));
    }
}
