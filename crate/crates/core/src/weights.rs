//! Weight functions and their fixed-point restrictions.
//!
//! `W` is never expanded in free `t`-variables. A restriction `W_{σ,I}(z_L)`
//! is the sum, over all orderings of each block `L^{(k)}`, of `U_{σ^{-1}(I)}`
//! with `t^{(k)}_a` replaced by the chosen `z`-value and `z_i` relabeled to
//! `z_{σ(i)}`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, PoleError};
use crate::flags::{act, enumerate_tuples, transpose, FlagShape, IndexTuple, Permutation};
use crate::scalars::{FactoredRational, MultiPoly, ProductForm, VariableId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    /// Fundamental classes of Schubert varieties in Grassmannians.
    Fund,
    /// CSM classes (rational weight functions).
    H,
    /// Motivic Chern classes (trigonometric weight functions).
    K,
    /// Elliptic classes, evaluated numerically.
    #[serde(rename = "ell")]
    E,
}

impl Theory {
    pub fn is_exact(self) -> bool {
        !matches!(self, Theory::E)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Fund => "fund",
            Theory::H => "h",
            Theory::K => "k",
            Theory::E => "ell",
        })
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "fund" | "fundamental" => Ok(Theory::Fund),
            "h" | "csm" | "coh" => Ok(Theory::H),
            "k" | "mc" => Ok(Theory::K),
            "e" | "ell" | "elliptic" => Ok(Theory::E),
            _ => Err(Error::Invalid(format!("unknown theory `{s}`"))),
        }
    }
}

/// The values fed in for `z_1, …, z_n` and `ħ` when restricting.
///
/// Symbolic restrictions use the generators themselves; `ι` uses their
/// inverses; fast specializations may plug in integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    z: Vec<MultiPoly>,
    hbar: MultiPoly,
}

impl Generators {
    pub fn new(z: Vec<MultiPoly>, hbar: MultiPoly) -> Self {
        Generators { z, hbar }
    }

    pub fn symbolic(n: usize) -> Self {
        Generators {
            z: (1..=n).map(MultiPoly::z).collect(),
            hbar: MultiPoly::hbar(),
        }
    }

    /// `z_i ↦ 1/z_i`, `ħ ↦ 1/ħ`.
    pub fn inverted(n: usize) -> Self {
        let inv = |v| MultiPoly::monomial(crate::scalars::Monomial::power(v, -1), 1);
        Generators {
            z: (1..=n).map(|i| inv(VariableId::z(i))).collect(),
            hbar: inv(VariableId::Hbar),
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self, i: usize) -> &MultiPoly {
        &self.z[i - 1]
    }

    pub fn hbar(&self) -> &MultiPoly {
        &self.hbar
    }
}

/// A class recorded by its restrictions to the fixed points, in
/// [`enumerate_tuples`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct GkmTuple<V> {
    pub theory: Theory,
    pub shape: FlagShape,
    pub values: Vec<V>,
}

impl<V> GkmTuple<V> {
    pub fn tuples(&self) -> Vec<IndexTuple> {
        enumerate_tuples(&self.shape)
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> GkmTuple<W> {
        GkmTuple {
            theory: self.theory,
            shape: self.shape.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// `U_I` as an unexpanded product, with `t(k, a)` supplying `t^{(k)}_a`
/// (`k = N` gives the relabeled `z_a`).
pub fn u_product(
    theory: Theory,
    tuple: &IndexTuple,
    t: &dyn Fn(usize, usize) -> MultiPoly,
    hbar: &MultiPoly,
) -> ProductForm {
    let shape = tuple.shape();
    let big_n = shape.len();
    let mut pf = ProductForm::one();
    match theory {
        Theory::Fund => {
            let n = shape.n();
            let m = shape.part(1);
            for a in 1..=m {
                for b in tuple.element(1, a) + 1..=n {
                    pf = pf.times(&t(2, b) - &t(1, a));
                }
                for b in a + 1..=m {
                    pf = pf.over(&t(1, b) - &t(1, a));
                }
            }
        }
        Theory::H => {
            for k in 1..big_n {
                for a in 1..=shape.prefix(k) {
                    let ia = tuple.element(k, a);
                    let ta = t(k, a);
                    for b in 1..=shape.prefix(k + 1) {
                        let ib = tuple.element(k + 1, b);
                        let x = &t(k + 1, b) - &ta;
                        pf = pf.times(match ib.cmp(&ia) {
                            std::cmp::Ordering::Less => &x + hbar,
                            std::cmp::Ordering::Equal => hbar.clone(),
                            std::cmp::Ordering::Greater => x,
                        });
                    }
                    for b in 1..=shape.prefix(k) {
                        let d = &t(k, b) - &ta;
                        pf = pf.over(if a < b { d } else { &d + hbar });
                    }
                }
            }
        }
        Theory::K => {
            for k in 1..big_n {
                for a in 1..=shape.prefix(k) {
                    let ia = tuple.element(k, a);
                    let ta = t(k, a);
                    for b in 1..=shape.prefix(k + 1) {
                        let ib = tuple.element(k + 1, b);
                        let tb = t(k + 1, b);
                        // every ψ case carries 1/t^{(k+1)}_b
                        pf = match ib.cmp(&ia) {
                            std::cmp::Ordering::Less => pf.times(&tb + &(hbar * &ta)),
                            std::cmp::Ordering::Equal => {
                                pf.times(hbar + &MultiPoly::one()).times(ta.clone())
                            }
                            std::cmp::Ordering::Greater => pf.times(&tb - &ta),
                        }
                        .over(tb);
                    }
                    for b in 1..=shape.prefix(k) {
                        let tb = t(k, b);
                        let d = if a < b { &tb - &ta } else { &tb + &(hbar * &ta) };
                        pf = pf.times(tb).over(d);
                    }
                }
            }
        }
        Theory::E => panic!("elliptic weight functions are numeric; see the elliptic module"),
    }
    pf
}

fn check_theory(theory: Theory, shape: &FlagShape) -> Result<(), Error> {
    match theory {
        Theory::E => Err(Error::Unsupported(
            "elliptic weight functions are evaluated numerically by the elliptic module".into(),
        )),
        Theory::Fund if !shape.is_grassmannian() => Err(Error::Invalid(format!(
            "fundamental-class formulas need a Grassmannian shape, got ({shape})"
        ))),
        _ => Ok(()),
    }
}

fn check_tuple(shape: &FlagShape, tuple: &IndexTuple) -> Result<(), Error> {
    if tuple.shape() != *shape {
        return Err(Error::Invalid(format!("tuple {tuple} does not have shape ({shape})")));
    }
    Ok(())
}

/// `U_I` in the free variables `t^{(k)}_a`, `z`, `ħ`.
pub fn weight_u(theory: Theory, shape: &FlagShape, tuple: &IndexTuple) -> Result<FactoredRational, Error> {
    check_theory(theory, shape)?;
    check_tuple(shape, tuple)?;
    let big_n = shape.len();
    let t = |k: usize, a: usize| {
        if k == big_n {
            MultiPoly::z(a)
        } else {
            MultiPoly::t(k, a)
        }
    };
    Ok(u_product(theory, tuple, &t, &MultiPoly::hbar()).to_rational())
}

/// `W_I` in the free variables as a list of the symmetrization summands
/// (each a permuted copy of `U_I`).
pub fn weight_w_terms(theory: Theory, shape: &FlagShape, tuple: &IndexTuple) -> Result<Vec<FactoredRational>, Error> {
    check_theory(theory, shape)?;
    check_tuple(shape, tuple)?;
    let big_n = shape.len();
    let mut out = Vec::new();
    for choice in block_orderings(shape, &|k| (1..=shape.prefix(k)).collect()) {
        let t = |k: usize, a: usize| {
            if k == big_n {
                MultiPoly::z(a)
            } else {
                MultiPoly::t(k, choice[k - 1][a - 1])
            }
        };
        out.push(u_product(theory, tuple, &t, &MultiPoly::hbar()).to_rational());
    }
    Ok(out)
}

/// Every way of ordering each block `items(k)`, `k = 1..N-1`.
pub(crate) fn block_orderings(
    shape: &FlagShape,
    items: &dyn Fn(usize) -> Vec<usize>,
) -> Vec<Vec<Vec<usize>>> {
    let blocks: Vec<Vec<Vec<usize>>> = (1..shape.len())
        .map(|k| {
            let it = items(k);
            let len = it.len();
            it.into_iter().permutations(len).collect()
        })
        .collect();
    if blocks.is_empty() {
        return vec![Vec::new()];
    }
    blocks.into_iter().multi_cartesian_product().collect()
}

/// `W_{σ,I}(z_L)` evaluated with the given generator values.
pub fn restriction_with(
    theory: Theory,
    tuple: &IndexTuple,
    at: &IndexTuple,
    sigma: &Permutation,
    gens: &Generators,
) -> Result<FactoredRational, PoleError> {
    let shape = tuple.shape();
    let big_n = shape.len();
    let source = act(sigma, tuple);
    let mut total = FactoredRational::zero();
    for choice in block_orderings(&shape, &|k| at.cumulative(k).to_vec()) {
        let t = |k: usize, a: usize| {
            if k == big_n {
                gens.z(sigma.apply(a)).clone()
            } else {
                gens.z(choice[k - 1][a - 1]).clone()
            }
        };
        let pf = u_product(theory, &source, &t, gens.hbar());
        if let Some(d) = pf.denominator_factors().iter().find(|d| d.is_zero()) {
            return Err(PoleError {
                factor: d.to_string(),
            });
        }
        if pf.is_zero() {
            continue;
        }
        total = total.add(&pf.to_rational());
    }
    Ok(total)
}

/// `W_{σ,I}` restricted to the fixed point `at`, symbolically.
pub fn weight_w_restriction(
    theory: Theory,
    shape: &FlagShape,
    tuple: &IndexTuple,
    at: &IndexTuple,
    sigma: &Permutation,
) -> Result<FactoredRational, Error> {
    check_theory(theory, shape)?;
    check_tuple(shape, tuple)?;
    check_tuple(shape, at)?;
    check_perm(shape, sigma)?;
    Ok(restriction_with(theory, tuple, at, sigma, &Generators::symbolic(shape.n()))?)
}

fn check_perm(shape: &FlagShape, sigma: &Permutation) -> Result<(), Error> {
    if sigma.n() != shape.n() {
        return Err(Error::Invalid(format!(
            "permutation of {} letters used with n = {}",
            sigma.n(),
            shape.n()
        )));
    }
    Ok(())
}

/// All restrictions of `W_{σ,I}`, with the given generator values.
pub fn class_tuple_with(
    theory: Theory,
    shape: &FlagShape,
    tuple: &IndexTuple,
    sigma: &Permutation,
    gens: &Generators,
) -> Result<GkmTuple<FactoredRational>, Error> {
    check_theory(theory, shape)?;
    check_tuple(shape, tuple)?;
    check_perm(shape, sigma)?;
    let values = enumerate_tuples(shape)
        .iter()
        .map(|at| restriction_with(theory, tuple, at, sigma, gens))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GkmTuple {
        theory,
        shape: shape.clone(),
        values,
    })
}

pub fn class_tuple(
    theory: Theory,
    shape: &FlagShape,
    tuple: &IndexTuple,
    sigma: &Permutation,
) -> Result<GkmTuple<FactoredRational>, Error> {
    class_tuple_with(theory, shape, tuple, sigma, &Generators::symbolic(shape.n()))
}

/// A failure of `f_I|_{z_i = z_j} = f_J|_{z_i = z_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmViolation {
    pub i: usize,
    pub j: usize,
    pub left: IndexTuple,
    pub right: IndexTuple,
    pub residual: String,
}

impl fmt::Display for GkmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})-neighbors {} and {}: difference at z{}=z{} is {}",
            self.i, self.j, self.left, self.right, self.j, self.i, self.residual
        )
    }
}

/// Checks the GKM condition for every neighboring pair of fixed points.
pub fn gkm_check(t: &GkmTuple<FactoredRational>) -> Result<(), Vec<GkmViolation>> {
    let tuples = t.tuples();
    let n = t.shape.n();
    let mut violations = Vec::new();
    for (ix, a) in tuples.iter().enumerate() {
        for i in 1..=n {
            for j in i + 1..=n {
                if a.part_of(i) == a.part_of(j) {
                    continue;
                }
                let b = transpose(a, i, j);
                let jx = tuples.binary_search(&b).expect("transposed tuple has the same shape");
                if jx < ix {
                    continue;
                }
                let diff = t.values[ix].sub(&t.values[jx]);
                let zi = MultiPoly::z(i);
                let vj = VariableId::z(j);
                let residual = match diff.substitute(&|v| (v == vj).then(|| zi.clone())) {
                    Ok(r) if r.is_zero() => continue,
                    Ok(r) => r.to_string(),
                    Err(e) => e.to_string(),
                };
                violations.push(GkmViolation {
                    i,
                    j,
                    left: a.clone(),
                    right: b,
                    residual,
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
