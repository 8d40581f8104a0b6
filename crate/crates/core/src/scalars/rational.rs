use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use super::var::VariableId;
use crate::error::PoleError;

/// Shape class of a stored denominator factor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FactorShape {
    /// Affine-linear form such as `z2 - z1 + h`.
    Linear,
    /// Two terms, e.g. `z1*h + z2` or `h + 1`.
    Binomial,
    /// Anything else; still handled by exact division, never produced by the
    /// weight-function builders.
    Other,
}

/// A normalized denominator factor: no monomial content, coprime integer
/// coefficients, positive leading coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DenomFactor {
    poly: MultiPoly,
    shape: FactorShape,
}

/// `p = coeff * monomial * factor`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub coeff: BigInt,
    pub monomial: Monomial,
    pub factor: Option<DenomFactor>,
}

impl DenomFactor {
    /// Splits a nonzero polynomial into its unit part and a normalized factor.
    pub fn normalize(p: &MultiPoly) -> Normalized {
        assert!(!p.is_zero(), "cannot normalize the zero polynomial");
        let monomial = p.monomial_content();
        let stripped = p.mul_monomial(&monomial.inverse());
        let coeff = stripped.content();
        let poly = stripped.div_scalar(&coeff).expect("content divides");
        if poly.is_one() {
            return Normalized {
                coeff,
                monomial,
                factor: None,
            };
        }
        let shape = classify(&poly);
        Normalized {
            coeff,
            monomial,
            factor: Some(DenomFactor { poly, shape }),
        }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn shape(&self) -> FactorShape {
        self.shape
    }

    /// Sufficient test for irreducibility: some variable occurs to the first
    /// power only, with a constant coefficient. Content has been removed, so
    /// such a polynomial has no nontrivial factorization.
    pub fn is_prime(&self) -> bool {
        self.poly.variables().into_iter().any(|v| {
            self.poly.degree_in(v) == Some(1)
                && self.poly.terms().iter().all(|(m, _)| m.exponent(v) >= 0)
                && self.poly.coefficient_of(v, 1).as_constant().is_some()
        })
    }
}

fn classify(p: &MultiPoly) -> FactorShape {
    if p.terms().iter().all(|(m, _)| m.degree() <= 1 && m.pairs().len() <= 1) {
        FactorShape::Linear
    } else if p.len() == 2 {
        FactorShape::Binomial
    } else {
        FactorShape::Other
    }
}

impl fmt::Display for DenomFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.poly)
    }
}

/// A Laurent polynomial over a multiset of factored denominators.
///
/// Reduced after every operation: no stored factor divides the numerator and
/// the integer denominator is coprime to the numerator's content.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredRational {
    num: MultiPoly,
    den_const: BigInt,
    den: BTreeMap<DenomFactor, u32>,
}

impl Default for FactoredRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<MultiPoly> for FactoredRational {
    fn from(num: MultiPoly) -> Self {
        FactoredRational {
            num,
            den_const: BigInt::one(),
            den: BTreeMap::new(),
        }
    }
}

impl FactoredRational {
    pub fn zero() -> Self {
        MultiPoly::zero().into()
    }

    pub fn one() -> Self {
        MultiPoly::one().into()
    }

    /// `num / ∏ dens`, reduced.
    pub fn new(num: MultiPoly, dens: impl IntoIterator<Item = MultiPoly>) -> Result<Self, PoleError> {
        let mut out = FactoredRational::from(num);
        for d in dens {
            if d.is_zero() {
                return Err(PoleError {
                    factor: d.to_string(),
                });
            }
            out.absorb_denominator(&d, 1);
        }
        out.reduce();
        Ok(out)
    }

    fn absorb_denominator(&mut self, d: &MultiPoly, mult: u32) {
        let n = DenomFactor::normalize(d);
        for _ in 0..mult {
            self.num = self.num.mul_monomial(&n.monomial.inverse());
            if n.coeff.is_negative() {
                self.num = -&self.num;
            }
            self.den_const *= n.coeff.abs();
        }
        if let Some(f) = n.factor {
            *self.den.entry(f).or_insert(0) += mult;
        }
    }

    /// Cancels every stored factor that divides the numerator exactly.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            self.den_const = BigInt::one();
            return;
        }
        let den = std::mem::take(&mut self.den);
        for (f, mut mult) in den {
            while mult > 0 {
                match self.num.divide_exact(&f.poly) {
                    Some(q) => {
                        self.num = q;
                        mult -= 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                self.den.insert(f, mult);
            }
        }
        self.reduce_constant();
    }

    fn reduce_constant(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            self.den_const = BigInt::one();
            return;
        }
        if !self.den_const.is_one() {
            let g = self.num.content().abs().gcd(&self.den_const);
            if !g.is_one() {
                self.num = self.num.div_scalar(&g).expect("gcd divides content");
                self.den_const /= &g;
            }
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_constant(&self) -> &BigInt {
        &self.den_const
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&DenomFactor, u32)> {
        self.den.iter().map(|(f, &m)| (f, m))
    }

    /// The expanded denominator polynomial (constant included).
    pub fn denominator_poly(&self) -> MultiPoly {
        let mut d = MultiPoly::constant(self.den_const.clone());
        for (f, m) in &self.den {
            d = d * f.poly.pow(*m);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator multiset is empty and the constant is one.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty() && self.den_const.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<MultiPoly, Self> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    pub fn neg(&self) -> Self {
        FactoredRational {
            num: -&self.num,
            den_const: self.den_const.clone(),
            den: self.den.clone(),
        }
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> Self {
        self.mul(&FactoredRational::from(p.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut lcm: BTreeMap<DenomFactor, u32> = self.den.clone();
        for (f, &m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lcm_const = self.den_const.lcm(&other.den_const);
        let lift = |x: &Self| -> MultiPoly {
            let mut n = x.num.scale(&(&lcm_const / &x.den_const));
            for (f, &m) in &lcm {
                let have = x.den.get(f).copied().unwrap_or(0);
                for _ in have..m {
                    n = &n * &f.poly;
                }
            }
            n
        };
        let mut out = FactoredRational {
            num: &lift(self) + &lift(other),
            den_const: lcm_const,
            den: lcm,
        };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // cross-cancel before multiplying so divisions act on smaller operands
        let mut a = FactoredRational {
            num: self.num.clone(),
            den_const: other.den_const.clone(),
            den: other.den.clone(),
        };
        a.reduce();
        let mut b = FactoredRational {
            num: other.num.clone(),
            den_const: self.den_const.clone(),
            den: self.den.clone(),
        };
        b.reduce();
        let mut den = a.den;
        for (f, m) in b.den {
            *den.entry(f).or_insert(0) += m;
        }
        FactoredRational {
            num: &a.num * &b.num,
            den_const: a.den_const * b.den_const,
            den,
        }
    }

    /// Substitutes variables; `Err` iff some denominator factor becomes zero.
    pub fn substitute(&self, assignment: &dyn Fn(VariableId) -> Option<MultiPoly>) -> Result<Self, PoleError> {
        // clear negative powers of variables whose replacement is not a unit monomial
        let mut num = self.num.clone();
        let mut extra: Vec<MultiPoly> = Vec::new();
        for v in num.variables() {
            let Some(p) = assignment(v) else { continue };
            let unit_monomial = p
                .as_monomial()
                .is_some_and(|(_, c)| c.abs().is_one());
            let low = num.terms().iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
            if low < 0 && !unit_monomial {
                num = num.mul_monomial(&Monomial::power(v, -low));
                extra.push(p.pow((-low) as u32));
            }
        }
        let num = num
            .substitute(assignment)
            .expect("negative powers were cleared");
        let mut dens = extra;
        for (f, &m) in &self.den {
            let p = f
                .poly
                .substitute(assignment)
                .expect("stored factors have no negative powers");
            if p.is_zero() {
                return Err(PoleError {
                    factor: f.poly.to_string(),
                });
            }
            for _ in 0..m {
                dens.push(p.clone());
            }
        }
        if !self.den_const.is_one() {
            dens.push(MultiPoly::constant(self.den_const.clone()));
        }
        FactoredRational::new(num, dens)
    }

    /// Evaluates with a caller-supplied field, given values and inverses of variables.
    pub fn eval_with<T>(
        &self,
        value: &dyn Fn(VariableId) -> T,
        inv: &dyn Fn(VariableId) -> T,
    ) -> (T, T)
    where
        T: Clone
            + std::ops::Add<Output = T>
            + std::ops::Mul<Output = T>
            + From<BigInt>
            + Zero
            + One,
    {
        let n = self.num.eval_with(value, inv);
        let d = self.denominator_poly().eval_with(value, inv);
        (n, d)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let mut items: Vec<String> = Vec::new();
        if !self.den_const.is_one() {
            items.push(self.den_const.to_string());
        }
        for (fac, m) in &self.den {
            items.push(if *m == 1 { fac.to_string() } else { format!("{fac}^{m}") });
        }
        if items.len() == 1 {
            write!(f, "({})/{}", self.num, items[0])
        } else {
            write!(f, "({})/({})", self.num, items.join("*"))
        }
    }
}

/// A product of unexpanded polynomial factors over unexpanded denominators.
///
/// Weight functions are built in this form so that substitution and
/// cancellation happen factor by factor before anything is expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductForm {
    coeff: BigInt,
    unit: Monomial,
    num: Vec<MultiPoly>,
    den: Vec<MultiPoly>,
}

impl Default for ProductForm {
    fn default() -> Self {
        Self::one()
    }
}

impl ProductForm {
    pub fn one() -> Self {
        ProductForm {
            coeff: BigInt::one(),
            unit: Monomial::one(),
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn times(mut self, p: MultiPoly) -> Self {
        self.num.push(p);
        self
    }

    pub fn over(mut self, p: MultiPoly) -> Self {
        self.den.push(p);
        self
    }

    pub fn numerator_factors(&self) -> &[MultiPoly] {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[MultiPoly] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.num.iter().any(MultiPoly::is_zero)
    }

    pub fn substitute(&self, assignment: &dyn Fn(VariableId) -> Option<MultiPoly>) -> Result<Self, PoleError> {
        let sub = |p: &MultiPoly| {
            p.substitute(assignment)
                .expect("product-form factors are substituted by monomials or have no negative powers")
        };
        let den: Vec<MultiPoly> = self.den.iter().map(sub).collect();
        if let Some(p) = self.den.iter().zip(&den).find(|(_, d)| d.is_zero()) {
            return Err(PoleError {
                factor: p.0.to_string(),
            });
        }
        let unit = MultiPoly::monomial(self.unit.clone(), self.coeff.clone());
        let unit = sub(&unit);
        let mut num: Vec<MultiPoly> = self.num.iter().map(sub).collect();
        num.push(unit);
        Ok(ProductForm {
            coeff: BigInt::one(),
            unit: Monomial::one(),
            num,
            den,
        })
    }

    /// Cancels matching normalized factors, then divides leftover
    /// denominator factors into individual numerator factors before
    /// expanding anything.
    pub fn to_rational(&self) -> FactoredRational {
        if self.is_zero() {
            return FactoredRational::zero();
        }
        let mut coeff_num = self.coeff.clone();
        let mut coeff_den = BigInt::one();
        let mut unit = self.unit.clone();
        let mut balance: BTreeMap<DenomFactor, i64> = BTreeMap::new();
        for p in &self.num {
            let n = DenomFactor::normalize(p);
            coeff_num *= n.coeff;
            unit = unit.mul(&n.monomial);
            if let Some(f) = n.factor {
                *balance.entry(f).or_insert(0) += 1;
            }
        }
        for p in &self.den {
            let n = DenomFactor::normalize(p);
            coeff_den *= n.coeff;
            unit = unit.div(&n.monomial);
            if let Some(f) = n.factor {
                *balance.entry(f).or_insert(0) -= 1;
            }
        }
        let mut tops: Vec<MultiPoly> = Vec::new();
        let mut bottoms: Vec<DenomFactor> = Vec::new();
        for (f, m) in balance {
            if m > 0 {
                tops.extend(std::iter::repeat_n(f.poly, m as usize));
            } else {
                bottoms.extend(std::iter::repeat_n(f, (-m) as usize));
            }
        }
        let mut den: BTreeMap<DenomFactor, u32> = BTreeMap::new();
        'outer: for f in bottoms {
            for t in tops.iter_mut() {
                if let Some(q) = t.divide_exact(&f.poly) {
                    *t = q;
                    continue 'outer;
                }
            }
            *den.entry(f).or_insert(0) += 1;
        }
        let mut num = MultiPoly::monomial(unit, coeff_num);
        for t in &tops {
            num = &num * t;
        }
        let mut out = FactoredRational {
            num,
            den_const: BigInt::one(),
            den,
        };
        if coeff_den.is_negative() {
            out.num = -&out.num;
        }
        out.den_const = coeff_den.abs();
        if out.den.keys().all(DenomFactor::is_prime) {
            // a prime that divides no factor cannot divide the product
            out.reduce_constant();
        } else {
            out.reduce();
        }
        out
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> MultiPoly {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    }
}

/// Operation selector for [`rational_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalOp {
    Add,
    Mul,
}

pub fn rational_arith(a: &FactoredRational, b: &FactoredRational, op: RationalOp) -> FactoredRational {
    match op {
        RationalOp::Add => a.add(b),
        RationalOp::Mul => a.mul(b),
    }
}

/// Result of [`divide_exact`]: the quotient, or the expected non-divisible outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Division {
    Quotient(MultiPoly),
    NotDivisible,
}

pub fn divide_exact(num: &MultiPoly, factor: &DenomFactor) -> Division {
    match num.divide_exact(factor.poly()) {
        Some(q) => Division::Quotient(q),
        None => Division::NotDivisible,
    }
}
