//! Localization inner products, the `ι` and `τ` twists, and orthogonality.

use num_bigint::BigInt;

use crate::elliptic::{elliptic_class_tuple, theta_prime_1, EllipticContext, C64};
use crate::error::Error;
use crate::flags::{enumerate_tuples, FlagShape, IndexTuple, Permutation};
use crate::scalars::{FactoredRational, Monomial, MultiPoly, ProductForm, VariableId};
use crate::weights::{class_tuple_with, Generators, GkmTuple, Theory};

/// `R_I` and (except for fundamental classes) `Q_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenomPair<V> {
    pub r: V,
    pub q: Option<V>,
}

/// The factors of `R_I` and `Q_I` as unexpanded products.
pub(crate) fn denom_forms(theory: Theory, tuple: &IndexTuple) -> (ProductForm, Option<ProductForm>) {
    let mut r = ProductForm::one();
    let mut q = ProductForm::one();
    let h = MultiPoly::hbar();
    let parts = tuple.parts();
    for k in 0..parts.len() {
        for l in k + 1..parts.len() {
            for &a in &parts[k] {
                for &b in &parts[l] {
                    let (za, zb) = (MultiPoly::z(a), MultiPoly::z(b));
                    match theory {
                        Theory::Fund | Theory::H => {
                            let d = &zb - &za;
                            q = q.times(&d + &h);
                            r = r.times(d);
                        }
                        Theory::K => {
                            // 1 - z_a/z_b and 1 + z_b/(z_a ħ)
                            r = r.times(&zb - &za).over(zb.clone());
                            q = q.times(&(&za * &h) + &zb).over(&za * &h);
                        }
                        Theory::E => panic!("elliptic denominators are numeric"),
                    }
                }
            }
        }
    }
    let q = (theory != Theory::Fund).then_some(q);
    (r, q)
}

pub fn denoms(theory: Theory, shape: &FlagShape, tuple: &IndexTuple) -> Result<DenomPair<FactoredRational>, Error> {
    if !theory.is_exact() {
        return Err(Error::Unsupported(
            "use elliptic_denoms for numeric denominators".into(),
        ));
    }
    if tuple.shape() != *shape {
        return Err(Error::Invalid(format!("tuple {tuple} does not have shape ({shape})")));
    }
    let (r, q) = denom_forms(theory, tuple);
    Ok(DenomPair {
        r: r.to_rational(),
        q: q.map(|q| q.to_rational()),
    })
}

fn push_rational(mut pf: ProductForm, f: &FactoredRational) -> ProductForm {
    pf = pf.times(f.numerator().clone());
    if !num_traits::One::is_one(f.denominator_constant()) {
        pf = pf.over(MultiPoly::constant(f.denominator_constant().clone()));
    }
    for (d, m) in f.denominator() {
        for _ in 0..m {
            pf = pf.over(d.poly().clone());
        }
    }
    pf
}

/// `Σ_L ∏ factors(L) / (R_L Q_L)`, each summand reduced before it is added.
pub(crate) fn localized_sum(theory: Theory, shape: &FlagShape, factors: &[&GkmTuple<FactoredRational>]) -> FactoredRational {
    let mut total = FactoredRational::zero();
    for (ix, at) in enumerate_tuples(shape).iter().enumerate() {
        if factors.iter().any(|f| f.values[ix].is_zero()) {
            continue;
        }
        let mut pf = ProductForm::one();
        for f in factors {
            pf = push_rational(pf, &f.values[ix]);
        }
        let (r, q) = denom_forms(theory, at);
        for d in r.numerator_factors().iter().chain(q.iter().flat_map(|q| q.numerator_factors())) {
            pf = pf.over(d.clone());
        }
        for d in r.denominator_factors().iter().chain(q.iter().flat_map(|q| q.denominator_factors())) {
            pf = pf.times(d.clone());
        }
        total = total.add(&pf.to_rational());
    }
    total
}

fn check_pair<V, W>(f: &GkmTuple<V>, g: &GkmTuple<W>) -> Result<(), Error> {
    if f.theory != g.theory || f.shape != g.shape {
        return Err(Error::Invalid(format!(
            "cannot pair a {} tuple on ({}) with a {} tuple on ({})",
            f.theory, f.shape, g.theory, g.shape
        )));
    }
    Ok(())
}

/// `⟨f, g⟩ = Σ_L f(z_L) g(z_L) / (R_L Q_L)`, fully reduced.
pub fn inner(f: &GkmTuple<FactoredRational>, g: &GkmTuple<FactoredRational>) -> Result<FactoredRational, Error> {
    check_pair(f, g)?;
    if !f.theory.is_exact() {
        return Err(Error::Unsupported("use elliptic_inner for numeric tuples".into()));
    }
    Ok(localized_sum(f.theory, &f.shape, &[f, g]))
}

/// The dual class `W_{s_0,J}` with the twist required by orthogonality:
/// nothing for fundamental classes and `H`; `(−ħ)^{−dim_J}·ι` for `K`.
pub fn dual_class(theory: Theory, shape: &FlagShape, tuple: &IndexTuple) -> Result<GkmTuple<FactoredRational>, Error> {
    let n = shape.n();
    let s0 = Permutation::longest(n);
    match theory {
        Theory::Fund | Theory::H => class_tuple_with(theory, shape, tuple, &s0, &Generators::symbolic(n)),
        Theory::K => {
            let raw = class_tuple_with(theory, shape, tuple, &s0, &Generators::inverted(n))?;
            let unit = minus_hbar_power(-(tuple.dim() as i32));
            Ok(raw.map(|v| v.scale_poly(&unit)))
        }
        Theory::E => Err(Error::Unsupported("elliptic dual classes are numeric".into())),
    }
}

/// `(−ħ)^e`.
pub fn minus_hbar_power(e: i32) -> MultiPoly {
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    MultiPoly::monomial(Monomial::power(VariableId::Hbar, e), BigInt::from(sign))
}

/// `ι` on restriction tuples: inverts every `z_i` and `ħ` in each value.
pub fn iota(t: &GkmTuple<FactoredRational>) -> Result<GkmTuple<FactoredRational>, Error> {
    if t.theory != Theory::K {
        return Err(Error::Invalid("ι is defined on K-theory tuples".into()));
    }
    let inv = |v: VariableId| match v {
        VariableId::Z(_) | VariableId::Hbar => Some(MultiPoly::monomial(Monomial::power(v, -1), 1)),
        _ => None,
    };
    let values = t
        .values
        .iter()
        .map(|v| v.substitute(&inv))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GkmTuple {
        theory: t.theory,
        shape: t.shape.clone(),
        values,
    })
}

/// Gram matrix `⟨W_{id,I}, dual(J)⟩ − δ_{I,J}` for an exact theory.
pub fn orthogonality_check(theory: Theory, shape: &FlagShape) -> Result<Vec<Vec<FactoredRational>>, Error> {
    if !theory.is_exact() {
        return Err(Error::Unsupported("use elliptic_orthogonality_check".into()));
    }
    let tuples = enumerate_tuples(shape);
    let id = Permutation::identity(shape.n());
    let rows = tuples
        .iter()
        .map(|i| class_tuple_with(theory, shape, i, &id, &Generators::symbolic(shape.n())))
        .collect::<Result<Vec<_>, _>>()?;
    let cols = tuples
        .iter()
        .map(|j| dual_class(theory, shape, j))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gram = Vec::with_capacity(rows.len());
    for (a, row) in rows.iter().enumerate() {
        let mut line = Vec::with_capacity(cols.len());
        for (b, col) in cols.iter().enumerate() {
            let mut v = localized_sum(theory, shape, &[row, col]);
            if a == b {
                v = v.sub(&FactoredRational::one());
            }
            line.push(v);
        }
        gram.push(line);
    }
    Ok(gram)
}

/// `R^E_I` and `Q^E_I` at the point of `ctx`.
pub fn elliptic_denoms(shape: &FlagShape, tuple: &IndexTuple, ctx: &EllipticContext) -> Result<DenomPair<C64>, Error> {
    if tuple.shape() != *shape {
        return Err(Error::Invalid(format!("tuple {tuple} does not have shape ({shape})")));
    }
    let lh = ctx.log(VariableId::Hbar)?;
    let mut r = C64::new(1.0, 0.0);
    let mut q = C64::new(1.0, 0.0);
    let parts = tuple.parts();
    for k in 0..parts.len() {
        for l in k + 1..parts.len() {
            for &a in &parts[k] {
                for &b in &parts[l] {
                    let d = ctx.log(VariableId::z(b))? - ctx.log(VariableId::z(a))?;
                    r *= ctx.theta_log(d);
                    q *= ctx.theta_log(d + lh);
                }
            }
        }
    }
    Ok(DenomPair { r, q: Some(q) })
}

/// `Σ_L ∏ factors(L) / (R^E_L Q^E_L)`.
pub(crate) fn elliptic_localized_sum(shape: &FlagShape, factors: &[&GkmTuple<C64>], ctx: &EllipticContext) -> Result<C64, Error> {
    let mut total = C64::new(0.0, 0.0);
    for (ix, at) in enumerate_tuples(shape).iter().enumerate() {
        let d = elliptic_denoms(shape, at, ctx)?;
        let den = d.r * d.q.expect("elliptic tuples carry Q");
        if den.norm() < ctx.tol() {
            return Err(Error::NearPole {
                what: format!("R*Q at {at}"),
                magnitude: den.norm(),
            });
        }
        total += factors.iter().map(|f| f.values[ix]).product::<C64>() / den;
    }
    Ok(total)
}

/// `⟨f, g⟩` for numeric elliptic tuples.
pub fn elliptic_inner(f: &GkmTuple<C64>, g: &GkmTuple<C64>, ctx: &EllipticContext) -> Result<C64, Error> {
    check_pair(f, g)?;
    if f.theory != Theory::E {
        return Err(Error::Invalid("elliptic_inner pairs elliptic tuples".into()));
    }
    elliptic_localized_sum(&f.shape, &[f, g], ctx)
}

/// `W^E_{s_0,J}` evaluated after `τ`.
pub fn tau(shape: &FlagShape, tuple: &IndexTuple, sigma: &Permutation, ctx: &EllipticContext) -> Result<GkmTuple<C64>, Error> {
    elliptic_class_tuple(shape, tuple, sigma, &ctx.tau(shape)?)
}

/// The elliptic dual class `(ϑ(ħ)/ϑ'(1))^{dim} · τ(W^E_{s_0,J})`.
pub fn elliptic_dual_class(shape: &FlagShape, tuple: &IndexTuple, ctx: &EllipticContext) -> Result<GkmTuple<C64>, Error> {
    let raw = tau(shape, tuple, &Permutation::longest(shape.n()), ctx)?;
    let lh = ctx.log(VariableId::Hbar)?;
    let unit = (ctx.theta_log(lh) / theta_prime_1(ctx)).powu(shape.dim() as u32);
    Ok(raw.map(|v| v * unit))
}

/// Gram matrix `⟨W^E_{id,I}, dual(J)⟩ − δ_{I,J}` at the point of `ctx`.
pub fn elliptic_orthogonality_check(shape: &FlagShape, ctx: &EllipticContext) -> Result<Vec<Vec<C64>>, Error> {
    let tuples = enumerate_tuples(shape);
    let id = Permutation::identity(shape.n());
    let rows = tuples
        .iter()
        .map(|i| elliptic_class_tuple(shape, i, &id, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let cols = tuples
        .iter()
        .map(|j| elliptic_dual_class(shape, j, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gram = Vec::with_capacity(rows.len());
    for (a, row) in rows.iter().enumerate() {
        let mut line = Vec::with_capacity(cols.len());
        for (b, col) in cols.iter().enumerate() {
            let v = elliptic_localized_sum(shape, &[row, col], ctx)?;
            line.push(if a == b { v - 1.0 } else { v });
        }
        gram.push(line);
    }
    Ok(gram)
}
