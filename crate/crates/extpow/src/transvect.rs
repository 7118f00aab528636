//! Symbolic calculus of elementary transvections t_{I,J}(ξ) in the big
//! linear group: products and their realizations, the three-type commutator
//! classification against wedge transvections, Vaserstein-Suslin generators,
//! and the [ab,cd] decomposition used in the relative-group arguments.
//!
//! Signs in commutator results are never asserted from a table; every
//! evaluation realizes both sides as exact matrices and reads the arguments
//! off the computed commutator.

use crate::index::{WeightIndex, WeightPair};
use crate::matrix::{group_commutator_with_inv, ExactMatrix};
use crate::ring::{Ring, RingElement};
use crate::wedge::{wedge_transvection, WedgeSpec};
use crate::Error;

/// A single elementary transvection t_{I,J}(arg) with I != J, realized as
/// e + arg * e_{I,J} at the lexicographic ranks of I and J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransvectionTerm {
    pub pair: WeightPair,
    pub arg: RingElement,
}

impl TransvectionTerm {
    pub fn new(pair: WeightPair, arg: RingElement) -> Result<TransvectionTerm, Error> {
        if pair.is_diagonal() {
            return Err(Error::DiagonalPair);
        }
        Ok(TransvectionTerm { pair, arg })
    }

    pub fn from_elems(
        n: u32,
        row: &[u32],
        col: &[u32],
        arg: &RingElement,
    ) -> Result<TransvectionTerm, Error> {
        let pair = WeightPair::new(WeightIndex::new(n, row)?, WeightIndex::new(n, col)?)?;
        TransvectionTerm::new(pair, arg.clone())
    }

    pub fn inverse(&self) -> TransvectionTerm {
        TransvectionTerm { pair: self.pair.clone(), arg: self.arg.neg() }
    }

    pub fn realize(&self, spec: &WedgeSpec, ring: &Ring) -> ExactMatrix {
        ExactMatrix::transvection(
            ring,
            spec.big_dim(),
            self.pair.row.lex_rank() as u32 + 1,
            self.pair.col.lex_rank() as u32 + 1,
            &self.arg,
        )
    }
}

/// One factor of a symbolic product in the big group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// An elementary transvection t_{I,J}(arg).
    Term(TransvectionTerm),
    /// A wedge transvection, the image of t_{i,j}(arg) under the exterior power.
    Wedge { i: u32, j: u32, arg: RingElement },
    /// conjugator * inner * conjugator^{-1}.
    Conjugated { conjugator: Box<TransvectionProduct>, inner: Box<TransvectionProduct> },
}

impl Factor {
    fn realize(&self, spec: &WedgeSpec, ring: &Ring) -> ExactMatrix {
        match self {
            Factor::Term(t) => t.realize(spec, ring),
            Factor::Wedge { i, j, arg } => {
                wedge_transvection(spec, ring, *i, *j, arg).expect("valid wedge factor")
            }
            Factor::Conjugated { conjugator, inner } => {
                let c = conjugator.realize(spec, ring);
                let cinv = conjugator.inverse().realize(spec, ring);
                c.mul(&inner.realize(spec, ring)).mul(&cinv)
            }
        }
    }

    fn inverse(&self) -> Factor {
        match self {
            Factor::Term(t) => Factor::Term(t.inverse()),
            Factor::Wedge { i, j, arg } => Factor::Wedge { i: *i, j: *j, arg: arg.neg() },
            Factor::Conjugated { conjugator, inner } => Factor::Conjugated {
                conjugator: conjugator.clone(),
                inner: Box::new(inner.inverse()),
            },
        }
    }
}

/// An ordered product of factors; the empty product is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransvectionProduct {
    pub factors: Vec<Factor>,
}

impl TransvectionProduct {
    pub fn empty() -> TransvectionProduct {
        TransvectionProduct { factors: vec![] }
    }

    pub fn of_terms(terms: Vec<TransvectionTerm>) -> TransvectionProduct {
        TransvectionProduct { factors: terms.into_iter().map(Factor::Term).collect() }
    }

    pub fn single(term: TransvectionTerm) -> TransvectionProduct {
        TransvectionProduct { factors: vec![Factor::Term(term)] }
    }

    pub fn wedge(i: u32, j: u32, arg: RingElement) -> TransvectionProduct {
        TransvectionProduct { factors: vec![Factor::Wedge { i, j, arg }] }
    }

    pub fn then(mut self, other: TransvectionProduct) -> TransvectionProduct {
        self.factors.extend(other.factors);
        self
    }

    pub fn conjugated_by(self, conjugator: TransvectionProduct) -> TransvectionProduct {
        TransvectionProduct {
            factors: vec![Factor::Conjugated {
                conjugator: Box::new(conjugator),
                inner: Box::new(self),
            }],
        }
    }

    /// Formal inverse: reversed factor list with each factor inverted.
    pub fn inverse(&self) -> TransvectionProduct {
        TransvectionProduct { factors: self.factors.iter().rev().map(Factor::inverse).collect() }
    }

    pub fn realize(&self, spec: &WedgeSpec, ring: &Ring) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(ring, spec.big_dim());
        for f in &self.factors {
            acc = acc.mul(&f.realize(spec, ring));
        }
        acc
    }

    /// [self, other] realized with formal inverses.
    pub fn commutator_with(
        &self,
        other: &TransvectionProduct,
        spec: &WedgeSpec,
        ring: &Ring,
    ) -> ExactMatrix {
        group_commutator_with_inv(
            &self.realize(spec, ring),
            &self.inverse().realize(spec, ring),
            &other.realize(spec, ring),
            &other.inverse().realize(spec, ring),
        )
    }
}

/// Outcome of classifying `[t_{I,J}(ξ), wedge t_{j,i}(ζ)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommutatorClass {
    /// The commutator is the identity.
    Vanishes,
    /// A single transvection at the shifted pair.
    SingleShift { target: WeightPair },
    /// Three commuting transvections: row shift, column shift, double shift.
    TripleProduct { row_shift: WeightPair, col_shift: WeightPair, diag_shift: WeightPair },
    /// I\i = J\j: the commutator is `[t_{I,J}(ξ), t_{J,I}(±ζ)]`, which has no
    /// simpler closed form.
    Degenerate,
}

/// Classify `[t_{I,J}(ξ), wedge t_{j,i}(ζ)]` by the membership pattern of the
/// root (i, j) in the pair (I, J).
///
/// A row interaction needs i ∈ I and j ∉ I (so that I\i∪j is a valid index);
/// a column interaction needs j ∈ J and i ∉ J. Neither: the commutator
/// vanishes. Exactly one: a single shifted transvection. Both: the triple
/// product, unless I\i = J\j, which is the degenerate pattern.
pub fn classify_commutator(pair: &WeightPair, j: u32, i: u32) -> Result<CommutatorClass, Error> {
    if pair.is_diagonal() {
        return Err(Error::DiagonalPair);
    }
    if i == j {
        return Err(Error::InvalidIndex("root requires i != j".into()));
    }
    let (iw, jw) = (&pair.row, &pair.col);
    let row_target = if iw.contains(i) { iw.replace(i, j) } else { None };
    let col_target = if jw.contains(j) { jw.replace(j, i) } else { None };
    match (row_target, col_target) {
        (None, None) => Ok(CommutatorClass::Vanishes),
        (Some(it), None) => Ok(CommutatorClass::SingleShift {
            target: WeightPair::new(it, jw.clone())?,
        }),
        (None, Some(jt)) => Ok(CommutatorClass::SingleShift {
            target: WeightPair::new(iw.clone(), jt)?,
        }),
        (Some(it), Some(jt)) => {
            if it == *jw {
                // Equivalent to I\i = J\j.
                Ok(CommutatorClass::Degenerate)
            } else {
                Ok(CommutatorClass::TripleProduct {
                    row_shift: WeightPair::new(it.clone(), jw.clone())?,
                    col_shift: WeightPair::new(iw.clone(), jt.clone())?,
                    diag_shift: WeightPair::new(it, jt)?,
                })
            }
        }
    }
}

/// Evaluate `[t, wedge t_{j,i}(ζ)]` as an explicit transvection product.
///
/// The class template fixes the factor positions; the arguments are read off
/// the exactly computed commutator matrix, and the decomposition is verified
/// against that matrix before returning.
pub fn commutator_eval(
    t: &TransvectionTerm,
    j: u32,
    i: u32,
    zeta: &RingElement,
    spec: &WedgeSpec,
) -> Result<TransvectionProduct, Error> {
    let class = classify_commutator(&t.pair, j, i)?;
    let ring = t.arg.ring().clone();
    let m = commutator_matrix(t, j, i, zeta, spec)?;
    let read = |p: &WeightPair| -> RingElement {
        m.entry(p.row.lex_rank(), p.col.lex_rank()).clone()
    };
    let product = match &class {
        CommutatorClass::Vanishes => TransvectionProduct::empty(),
        CommutatorClass::SingleShift { target } => TransvectionProduct::of_terms(vec![
            TransvectionTerm { pair: target.clone(), arg: read(target) },
        ]),
        CommutatorClass::TripleProduct { row_shift, col_shift, diag_shift } => {
            TransvectionProduct::of_terms(vec![
                TransvectionTerm { pair: row_shift.clone(), arg: read(row_shift) },
                TransvectionTerm { pair: col_shift.clone(), arg: read(col_shift) },
                TransvectionTerm { pair: diag_shift.clone(), arg: read(diag_shift) },
            ])
        }
        CommutatorClass::Degenerate => return Err(Error::DegenerateCommutator),
    };
    // Checked mode: the template must reproduce the exact commutator.
    let realized = product.realize(spec, &ring);
    if realized != m {
        return Err(Error::Unsupported(format!(
            "commutator template mismatch at pair {:?}, root ({j},{i})",
            t.pair
        )));
    }
    Ok(product)
}

/// The raw matrix `[t, wedge t_{j,i}(ζ)]`, valid in every class.
pub fn commutator_matrix(
    t: &TransvectionTerm,
    j: u32,
    i: u32,
    zeta: &RingElement,
    spec: &WedgeSpec,
) -> Result<ExactMatrix, Error> {
    let ring = t.arg.ring().clone();
    let x = t.realize(spec, &ring);
    let x_inv = t.inverse().realize(spec, &ring);
    let w = wedge_transvection(spec, &ring, j, i, zeta)?;
    let w_inv = wedge_transvection(spec, &ring, j, i, &zeta.neg())?;
    Ok(group_commutator_with_inv(&x, &x_inv, &w, &w_inv))
}

/// Vaserstein-Suslin generator z_{I,J}(ξ,ζ) = t_{J,I}(ζ) t_{I,J}(ξ) t_{J,I}(-ζ).
pub fn z_generator(
    pair: &WeightPair,
    xi: &RingElement,
    zeta: &RingElement,
) -> Result<TransvectionProduct, Error> {
    if pair.is_diagonal() {
        return Err(Error::DiagonalPair);
    }
    let flipped = WeightPair::new(pair.col.clone(), pair.row.clone())?;
    Ok(TransvectionProduct::of_terms(vec![
        TransvectionTerm { pair: flipped.clone(), arg: zeta.clone() },
        TransvectionTerm { pair: pair.clone(), arg: xi.clone() },
        TransvectionTerm { pair: flipped, arg: zeta.neg() },
    ]))
}

/// Decompose [ab, cd] into the four bracket factors
/// `^a[b,c] * ^{ac}[b,d] * [a,c] * ^c[a,d]`,
/// verifying that their product equals [ab, cd] exactly.
///
/// Inverses must be supplied (they are free for transvection products).
pub fn abcd_decompose(
    a: (&ExactMatrix, &ExactMatrix),
    b: (&ExactMatrix, &ExactMatrix),
    c: (&ExactMatrix, &ExactMatrix),
    d: (&ExactMatrix, &ExactMatrix),
) -> Result<[ExactMatrix; 4], Error> {
    let comm = |x: (&ExactMatrix, &ExactMatrix), y: (&ExactMatrix, &ExactMatrix)| {
        group_commutator_with_inv(x.0, x.1, y.0, y.1)
    };
    let conj = |g: (&ExactMatrix, &ExactMatrix), x: &ExactMatrix| g.0.mul(x).mul(g.1);

    let bc = comm(b, c);
    let f1 = conj(a, &bc);
    let bd = comm(b, d);
    let ac_el = a.0.mul(c.0);
    let ac_inv = c.1.mul(a.1);
    let f2 = ac_el.mul(&bd).mul(&ac_inv);
    let f3 = comm(a, c);
    let ad = comm(a, d);
    let f4 = conj(c, &ad);

    let ab = a.0.mul(b.0);
    let ab_inv = b.1.mul(a.1);
    let cd = c.0.mul(d.0);
    let cd_inv = d.1.mul(c.1);
    let lhs = group_commutator_with_inv(&ab, &ab_inv, &cd, &cd_inv);
    let rhs = f1.mul(&f2).mul(&f3).mul(&f4);
    if lhs != rhs {
        return Err(Error::Unsupported("[ab,cd] decomposition mismatch".into()));
    }
    Ok([f1, f2, f3, f4])
}
