use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::var::VariableId;

/// A Laurent monomial: sorted `(variable, exponent)` pairs, zero exponents omitted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(VariableId, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: VariableId, e: i32) -> Self {
        let mut m = SmallVec::new();
        if e != 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VariableId, i32)>) -> Self {
        let mut acc: BTreeMap<VariableId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VariableId, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: VariableId) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&(_, e)| e > 0)
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, sign * b[j].1));
                j += 1;
            } else {
                let e = a[i].1 + sign * b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    /// Laurent quotient; always defined.
    pub fn div(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    pub fn inverse(&self) -> Self {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// True when `other / self` has only non-negative exponents.
    pub fn divides(&self, other: &Self) -> bool {
        let q = other.div(self);
        q.0.iter().all(|&(_, e)| e >= 0)
    }

    /// Exponent-wise minimum, with absent variables counted as exponent zero.
    pub fn min(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<VariableId, (i32, i32)> = BTreeMap::new();
        for &(v, e) in &self.0 {
            acc.entry(v).or_default().0 = e;
        }
        for &(v, e) in &other.0 {
            acc.entry(v).or_default().1 = e;
        }
        Monomial(
            acc.into_iter()
                .map(|(v, (a, b))| (v, a.min(b)))
                .filter(|&(_, e)| e != 0)
                .collect(),
        )
    }

    /// Removes `v` from the monomial, returning its former exponent.
    pub fn without(&self, v: VariableId) -> (Self, i32) {
        let e = self.exponent(v);
        (
            Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()),
            e,
        )
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return ea.cmp(&0);
                    } else if vb < va {
                        return 0.cmp(&eb);
                    } else if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

/// Graded lexicographic order; earlier variables in [`VariableId`] order weigh more.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact multivariate Laurent polynomial with arbitrary-precision integer
/// coefficients.
///
/// Terms are kept in descending graded-lex order with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: VariableId) -> Self {
        Self::monomial(Monomial::var(v), 1)
    }

    pub fn z(i: usize) -> Self {
        Self::var(VariableId::z(i))
    }

    pub fn t(k: usize, a: usize) -> Self {
        Self::var(VariableId::t(k, a))
    }

    pub fn hbar() -> Self {
        Self::var(VariableId::Hbar)
    }

    pub fn mu(i: usize) -> Self {
        Self::var(VariableId::mu(i))
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<(Monomial, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { terms }
    }

    fn from_sorted_desc(terms: Vec<(Monomial, BigInt)>) -> Self {
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Returns the coefficient when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Returns `(monomial, coefficient)` when the polynomial has one term.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| m.pairs().iter().all(|&(_, e)| e >= 0))
    }

    pub fn variables(&self) -> Vec<VariableId> {
        let mut vs: Vec<VariableId> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Highest exponent of `v` among the terms.
    pub fn degree_in(&self, v: VariableId) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max()
    }

    /// The coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: VariableId, e: i32) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (rest, ev) = m.without(v);
            (ev == e).then(|| (rest, c.clone()))
        }))
    }

    /// gcd of the coefficients, sign taken from the leading coefficient.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -g,
            _ => g,
        }
    }

    /// The largest monomial dividing every term (exponent-wise minimum).
    pub fn monomial_content(&self) -> Monomial {
        if self.is_zero() {
            return Monomial::one();
        }
        Monomial::from_pairs(self.variables().into_iter().map(|v| {
            let e = self.terms.iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
            (v, e)
        }))
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly::from_sorted_desc(
            self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        )
    }

    /// Divides every coefficient by `c`; `None` unless all are divisible.
    pub fn div_scalar(&self, c: &BigInt) -> Option<MultiPoly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, d) in &self.terms {
            let (q, r) = d.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push((m.clone(), q));
        }
        Some(MultiPoly::from_sorted_desc(out))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        // multiplying by a monomial preserves the term order
        MultiPoly::from_sorted_desc(
            self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn merge(&self, other: &Self, negate: bool) -> MultiPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly::from_sorted_desc(out)
    }

    fn product(&self, other: &Self) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_monomial(m).scale(c);
        }
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        acc.reserve(self.len() * other.len() / 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    /// Exact division. `None` when `divisor` does not divide `self` in the
    /// Laurent polynomial ring.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = divisor.as_monomial() {
            return self.div_scalar(c).map(|p| p.mul_monomial(&m.inverse()));
        }
        // strip monomial content so both sides are honest polynomials with no
        // variable dividing them; then ordinary division decides divisibility
        let dm = divisor.monomial_content();
        let nm = self.monomial_content();
        let d0 = divisor.mul_monomial(&dm.inverse());
        let n0 = self.mul_monomial(&nm.inverse());
        let shift = nm.div(&dm);
        poly_divide(&n0, &d0).map(|q| q.mul_monomial(&shift))
    }

    /// Replaces variables by polynomials. Variables with negative exponents
    /// may only be replaced by single-term polynomials with unit coefficient;
    /// `None` is returned otherwise.
    pub fn substitute(&self, assignment: &dyn Fn(VariableId) -> Option<MultiPoly>) -> Option<MultiPoly> {
        let mut cache: FxHashMap<(VariableId, i32), MultiPoly> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            let mut kept: SmallVec<[(VariableId, i32); 6]> = SmallVec::new();
            for &(v, e) in m.pairs() {
                let key = (v, e);
                if let Some(p) = cache.get(&key) {
                    term = &term * p;
                    continue;
                }
                match assignment(v) {
                    None => kept.push((v, e)),
                    Some(p) => {
                        let pe = if e >= 0 {
                            p.pow(e as u32)
                        } else {
                            let (mono, coeff) = p.as_monomial()?;
                            if !coeff.is_one() && *coeff != BigInt::from(-1) {
                                return None;
                            }
                            let inv = MultiPoly::monomial(mono.inverse(), coeff.clone());
                            inv.pow((-e) as u32)
                        };
                        term = &term * &pe;
                        cache.insert(key, pe);
                    }
                }
            }
            let rest = Monomial(kept);
            for (tm, tc) in term.terms {
                *acc.entry(tm.mul(&rest)).or_default() += tc;
            }
        }
        Some(Self::from_map(acc))
    }

    /// Evaluates with `value` supplying each variable and `inv` its inverse.
    pub fn eval_with<T>(&self, value: &dyn Fn(VariableId) -> T, inv: &dyn Fn(VariableId) -> T) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T> + From<BigInt> + Zero + One,
    {
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from(c.clone());
            for &(v, e) in m.pairs() {
                let base = if e > 0 { value(v) } else { inv(v) };
                for _ in 0..e.unsigned_abs() {
                    t = t * base.clone();
                }
            }
            total = total + t;
        }
        total
    }
}

fn poly_divide(num: &MultiPoly, den: &MultiPoly) -> Option<MultiPoly> {
    let (lead_m, lead_c) = den.leading().expect("nonzero divisor");
    if num.total_degree()? < lead_m.degree() {
        return None;
    }
    let mut rem: BTreeMap<Monomial, BigInt> = num.terms.iter().cloned().collect();
    let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some((rm, rc)) = rem.pop_last() {
        if !lead_m.divides(&rm) {
            return None;
        }
        let (qc, r) = rc.div_rem(lead_c);
        if !r.is_zero() {
            return None;
        }
        let qm = rm.div(lead_m);
        for (dm, dc) in den.terms.iter().skip(1) {
            let m = dm.mul(&qm);
            let delta = &qc * dc;
            match rem.get_mut(&m) {
                Some(slot) => {
                    *slot -= delta;
                    if slot.is_zero() {
                        rem.remove(&m);
                    }
                }
                None => {
                    rem.insert(m, -delta);
                }
            }
        }
        quot.push((qm, qc));
    }
    // quotient terms were produced in descending order
    Some(MultiPoly::from_sorted_desc(quot))
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::from_sorted_desc(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<VariableId> for MultiPoly {
    fn from(v: VariableId) -> Self {
        MultiPoly::var(v)
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for MultiPoly {
    fn product<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::one(), |a, b| a * b)
    }
}
