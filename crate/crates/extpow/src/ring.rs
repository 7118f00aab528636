//! Exact commutative-ring arithmetic: integers, residue rings `Z/q`, and
//! multivariate polynomial rings over the integers.
//!
//! Every value is kept in a unique canonical form, so equality of payloads is
//! equality in the ring. All arithmetic is exact; polynomial coefficients are
//! arbitrary-precision integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// The kind of ground ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// The ring of integers Z.
    Integers,
    /// The residue ring Z/q, q >= 2. Residues are stored in `[0, q)`.
    Modular(u64),
    /// Multivariate polynomials over Z in the named variables.
    Poly(Vec<String>),
}

/// A commutative ring with 1. Cheap to clone and share.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<RingKind>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Modular(q) => write!(f, "Z/{}", q),
            RingKind::Poly(vars) => write!(f, "Z[{}]", vars.join(",")),
        }
    }
}

impl Ring {
    pub fn integers() -> Ring {
        Ring(Arc::new(RingKind::Integers))
    }

    pub fn modular(q: u64) -> Result<Ring, Error> {
        if q < 2 {
            return Err(Error::InvalidRing(format!("modulus must be >= 2, got {q}")));
        }
        Ok(Ring(Arc::new(RingKind::Modular(q))))
    }

    pub fn poly(vars: &[&str]) -> Result<Ring, Error> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::InvalidRing("polynomial variables must be distinct".into()));
        }
        Ok(Ring(Arc::new(RingKind::Poly(names))))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.kind() {
            RingKind::Modular(q) => Some(*q),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match self.kind() {
            RingKind::Poly(vars) => vars.len(),
            _ => 0,
        }
    }

    /// Whether 2 is invertible in this ring. True exactly for Z/q with odd q.
    pub fn two_invertible(&self) -> bool {
        match self.kind() {
            RingKind::Modular(q) => q % 2 == 1,
            _ => false,
        }
    }

    pub fn is_modular(&self) -> bool {
        matches!(self.kind(), RingKind::Modular(_))
    }

    /// Z/p for prime p is a field; used by the congruence machinery.
    pub fn is_prime_field(&self) -> bool {
        match self.kind() {
            RingKind::Modular(q) => is_prime(*q),
            _ => false,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement::from_i64(self, 0)
    }

    pub fn one(&self) -> RingElement {
        RingElement::from_i64(self, 1)
    }

    /// The i-th polynomial variable as a ring element.
    pub fn var(&self, i: usize) -> RingElement {
        match self.kind() {
            RingKind::Poly(vars) => {
                assert!(i < vars.len(), "variable index out of range");
                let mut exps = vec![0u32; vars.len()];
                exps[i] = 1;
                let mut terms = BTreeMap::new();
                terms.insert(Monomial(exps), BigInt::one());
                RingElement { ring: self.clone(), payload: Payload::Poly(terms) }
            }
            _ => panic!("var() requires a polynomial ring"),
        }
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent vector of a monomial. Ordered by total degree, then
/// lexicographically on the declared variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Int(BigInt),
    /// Residue in `[0, q)`.
    Res(u64),
    /// Sorted map from exponent vectors to nonzero coefficients.
    Poly(BTreeMap<Monomial, BigInt>),
}

/// An exact element of a [`Ring`], always in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    payload: Payload,
}

impl RingElement {
    pub fn from_i64(ring: &Ring, v: i64) -> RingElement {
        Self::from_bigint(ring, BigInt::from(v))
    }

    pub fn from_bigint(ring: &Ring, v: BigInt) -> RingElement {
        let payload = match ring.kind() {
            RingKind::Integers => Payload::Int(v),
            RingKind::Modular(q) => Payload::Res(reduce_mod(&v, *q)),
            RingKind::Poly(vars) => {
                let mut terms = BTreeMap::new();
                if !v.is_zero() {
                    terms.insert(Monomial(vec![0; vars.len()]), v);
                }
                Payload::Poly(terms)
            }
        };
        RingElement { ring: ring.clone(), payload }
    }

    /// Build a polynomial from explicit (exponent vector, coefficient) terms.
    pub fn poly_from_terms(ring: &Ring, terms: &[(Vec<u32>, i64)]) -> Result<RingElement, Error> {
        let arity = match ring.kind() {
            RingKind::Poly(vars) => vars.len(),
            _ => return Err(Error::InvalidRing("poly_from_terms requires a polynomial ring".into())),
        };
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (exps, coef) in terms {
            if exps.len() != arity {
                return Err(Error::InvalidRing(format!(
                    "exponent vector has length {}, ring arity is {}",
                    exps.len(),
                    arity
                )));
            }
            let entry = map.entry(Monomial(exps.clone())).or_insert_with(BigInt::zero);
            *entry += BigInt::from(*coef);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(RingElement { ring: ring.clone(), payload: Payload::Poly(map) })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Int(v) => v.is_zero(),
            Payload::Res(r) => *r == 0,
            Payload::Poly(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Residue value for modular elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.payload {
            Payload::Res(r) => Some(*r),
            _ => None,
        }
    }

    fn assert_same_ring(&self, other: &RingElement) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let payload = match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a + b),
            (Payload::Res(a), Payload::Res(b)) => {
                let q = self.ring.modulus().unwrap();
                Payload::Res(((*a as u128 + *b as u128) % q as u128) as u64)
            }
            (Payload::Poly(a), Payload::Poly(b)) => {
                let mut out = a.clone();
                for (m, c) in b {
                    let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
                    *entry += c;
                    if entry.is_zero() {
                        out.remove(m);
                    }
                }
                Payload::Poly(out)
            }
            _ => unreachable!("payload kind follows ring kind"),
        };
        RingElement { ring: self.ring.clone(), payload }
    }

    pub fn neg(&self) -> RingElement {
        let payload = match &self.payload {
            Payload::Int(a) => Payload::Int(-a),
            Payload::Res(a) => {
                let q = self.ring.modulus().unwrap();
                Payload::Res(if *a == 0 { 0 } else { q - a })
            }
            Payload::Poly(a) => Payload::Poly(a.iter().map(|(m, c)| (m.clone(), -c)).collect()),
        };
        RingElement { ring: self.ring.clone(), payload }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let payload = match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => Payload::Int(a * b),
            (Payload::Res(a), Payload::Res(b)) => {
                let q = self.ring.modulus().unwrap();
                Payload::Res(((*a as u128 * *b as u128) % q as u128) as u64)
            }
            (Payload::Poly(a), Payload::Poly(b)) => {
                let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        let m = ma.mul(mb);
                        let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
                        *entry += ca * cb;
                        if entry.is_zero() {
                            out.remove(&m);
                        }
                    }
                }
                Payload::Poly(out)
            }
            _ => unreachable!("payload kind follows ring kind"),
        };
        RingElement { ring: self.ring.clone(), payload }
    }

    pub fn scale(&self, k: i64) -> RingElement {
        self.mul(&RingElement::from_i64(&self.ring, k))
    }

    pub fn pow(&self, mut e: u32) -> RingElement {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Invertibility with inverse witness.
    pub fn inverse(&self) -> Option<RingElement> {
        match &self.payload {
            Payload::Int(v) => {
                if v.abs().is_one() {
                    Some(self.clone())
                } else {
                    None
                }
            }
            Payload::Res(r) => {
                let q = self.ring.modulus().unwrap();
                mod_inverse(*r, q).map(|inv| RingElement { ring: self.ring.clone(), payload: Payload::Res(inv) })
            }
            Payload::Poly(t) => {
                // Units of Z[x..] are the constants +-1.
                if t.len() == 1 {
                    let (m, c) = t.iter().next().unwrap();
                    if m.degree() == 0 && c.abs().is_one() {
                        return Some(self.clone());
                    }
                }
                None
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Int(v) => write!(f, "{}", v),
            Payload::Res(r) => write!(f, "{}", r),
            Payload::Poly(terms) => {
                if terms.is_empty() {
                    return write!(f, "0");
                }
                let vars = match self.ring.kind() {
                    RingKind::Poly(v) => v,
                    _ => unreachable!(),
                };
                let mut first = true;
                // Highest-order terms first.
                for (m, c) in terms.iter().rev() {
                    let mut body = String::new();
                    for (i, e) in m.0.iter().enumerate() {
                        if *e == 1 {
                            body.push_str(&vars[i]);
                        } else if *e > 1 {
                            body.push_str(&format!("{}^{}", vars[i], e));
                        }
                    }
                    let coef = if body.is_empty() {
                        format!("{}", c.abs())
                    } else if c.abs().is_one() {
                        body
                    } else {
                        format!("{}*{}", c.abs(), body)
                    };
                    if first {
                        if c.is_negative() {
                            write!(f, "-{}", coef)?;
                        } else {
                            write!(f, "{}", coef)?;
                        }
                        first = false;
                    } else if c.is_negative() {
                        write!(f, " - {}", coef)?;
                    } else {
                        write!(f, " + {}", coef)?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn reduce_mod(v: &BigInt, q: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(q));
    let (_, digits) = m.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("residue fits in u64"),
    }
}

fn mod_inverse(a: u64, q: u64) -> Option<u64> {
    // Extended Euclid on (a, q).
    let (mut r0, mut r1) = (a as i128, q as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let d = r0 / r1;
        (r0, r1) = (r1, r0 - d * r1);
        (s0, s1) = (s1, s0 - d * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(q as i128) as u64)
}

/// Checked arithmetic entry point: errors on ring mismatch instead of panicking.
pub fn elem_arith(op: ArithOp, a: &RingElement, b: &RingElement) -> Result<RingElement, Error> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Neg => a.neg(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// A finitely generated ideal of a finite residue ring Z/q.
///
/// Every ideal of Z/q is principal, so the canonical form is the divisor
/// `d | q` with `d = gcd(gens, q)`; the element set is `{0, d, 2d, ...}`.
/// The original generator witnesses are retained for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteIdeal {
    ring: Ring,
    /// Canonical principal generator, a divisor of q in `[1, q]`. `d == q`
    /// encodes the zero ideal.
    gen: u64,
    witnesses: Vec<u64>,
}

impl FiniteIdeal {
    pub fn closure(ring: &Ring, gens: &[RingElement]) -> Result<FiniteIdeal, Error> {
        let q = ring.modulus().ok_or(Error::NotModular)?;
        let mut witnesses = Vec::new();
        let mut d = q;
        for g in gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            let r = g.residue().unwrap();
            witnesses.push(r);
            d = d.gcd(&r);
        }
        if d == 0 {
            d = q;
        }
        Ok(FiniteIdeal { ring: ring.clone(), gen: d, witnesses })
    }

    pub fn zero(ring: &Ring) -> FiniteIdeal {
        FiniteIdeal::closure(ring, &[]).expect("modular ring")
    }

    pub fn whole(ring: &Ring) -> FiniteIdeal {
        let one = ring.one();
        FiniteIdeal::closure(ring, &[one]).expect("modular ring")
    }

    pub fn principal(ring: &Ring, g: i64) -> Result<FiniteIdeal, Error> {
        FiniteIdeal::closure(ring, &[RingElement::from_i64(ring, g)])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Canonical principal generator (a divisor of q; q itself for the zero ideal).
    pub fn generator(&self) -> u64 {
        self.gen
    }

    pub fn witnesses(&self) -> &[u64] {
        &self.witnesses
    }

    pub fn is_zero(&self) -> bool {
        self.gen == self.ring.modulus().unwrap()
    }

    pub fn is_whole(&self) -> bool {
        self.gen == 1
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        match x.residue() {
            Some(r) => r % self.gen == 0,
            None => false,
        }
    }

    pub fn contains_res(&self, r: u64) -> bool {
        r % self.gen == 0
    }

    pub fn is_subset(&self, other: &FiniteIdeal) -> bool {
        self.gen % other.gen == 0
    }

    /// Smallest ideal containing both (ideal sum).
    pub fn join(&self, other: &FiniteIdeal) -> FiniteIdeal {
        FiniteIdeal {
            ring: self.ring.clone(),
            gen: self.gen.gcd(&other.gen),
            witnesses: self.witnesses.iter().chain(&other.witnesses).copied().collect(),
        }
    }

    /// Join with a single additional residue.
    pub fn join_res(&self, r: u64) -> FiniteIdeal {
        let q = self.ring.modulus().unwrap();
        let mut d = self.gen.gcd(&(r % q));
        if d == 0 {
            d = q;
        }
        let mut w = self.witnesses.clone();
        w.push(r % q);
        FiniteIdeal { ring: self.ring.clone(), gen: d, witnesses: w }
    }

    /// Ideal product A*B (generated by pairwise products).
    pub fn product(&self, other: &FiniteIdeal) -> FiniteIdeal {
        let q = self.ring.modulus().unwrap();
        let mut d = ((self.gen as u128 * other.gen as u128) % q as u128) as u64;
        d = d.gcd(&q);
        if d == 0 {
            d = q;
        }
        FiniteIdeal { ring: self.ring.clone(), gen: d, witnesses: vec![] }
    }

    /// All residues in the ideal, sorted.
    pub fn elements(&self) -> Vec<u64> {
        let q = self.ring.modulus().unwrap();
        (0..q / self.gen).map(|k| k * self.gen).collect()
    }
}

/// Smallest ideal of a finite modular ring containing the generators.
pub fn ideal_closure(ring: &Ring, gens: &[RingElement]) -> Result<FiniteIdeal, Error> {
    FiniteIdeal::closure(ring, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_add() {
        let r = Ring::modular(9).unwrap();
        let a = RingElement::from_i64(&r, 4);
        let b = RingElement::from_i64(&r, 7);
        assert_eq!(a.add(&b), RingElement::from_i64(&r, 2));
    }

    #[test]
    fn poly_mul_monomials() {
        let r = Ring::poly(&["xi", "zeta"]).unwrap();
        let xi = r.var(0);
        let zeta = r.var(1);
        let prod = xi.mul(&zeta);
        let expected = RingElement::poly_from_terms(&r, &[(vec![1, 1], 1)]).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn integer_mul() {
        let r = Ring::integers();
        let a = RingElement::from_i64(&r, -3);
        let b = RingElement::from_i64(&r, 2);
        assert_eq!(a.mul(&b), RingElement::from_i64(&r, -6));
    }

    #[test]
    fn units_mod_9() {
        let r = Ring::modular(9).unwrap();
        let two = RingElement::from_i64(&r, 2);
        assert_eq!(two.inverse(), Some(RingElement::from_i64(&r, 5)));
        let three = RingElement::from_i64(&r, 3);
        assert_eq!(three.inverse(), None);
        let z = Ring::integers();
        let m1 = RingElement::from_i64(&z, -1);
        assert_eq!(m1.inverse(), Some(m1.clone()));
    }

    #[test]
    fn two_invertible_flags() {
        assert!(Ring::modular(9).unwrap().two_invertible());
        assert!(!Ring::modular(8).unwrap().two_invertible());
        assert!(!Ring::integers().two_invertible());
        assert!(!Ring::poly(&["x"]).unwrap().two_invertible());
    }

    #[test]
    fn ideal_closure_principal() {
        let r = Ring::modular(9).unwrap();
        let i3 = ideal_closure(&r, &[RingElement::from_i64(&r, 3)]).unwrap();
        assert_eq!(i3.elements(), vec![0, 3, 6]);
        let i2 = ideal_closure(&r, &[RingElement::from_i64(&r, 2)]).unwrap();
        assert!(i2.is_whole());
    }

    /// Independent oracle: brute-force closure under addition, negation, and
    /// multiplication by every residue.
    fn brute_force_closure(q: u64, gens: &[u64]) -> Vec<u64> {
        let mut set: BTreeSet<u64> = gens.iter().map(|g| g % q).collect();
        set.insert(0);
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.insert((a + b) % q);
                }
                next.insert((q - a) % q);
                for r in 0..q {
                    next.insert((a * r) % q);
                }
            }
            if next == set {
                return set.into_iter().collect();
            }
            set = next;
        }
    }

    #[test]
    fn ideal_closure_matches_brute_force() {
        let r = Ring::modular(25).unwrap();
        let gens = [RingElement::from_i64(&r, 10), RingElement::from_i64(&r, 15)];
        let ideal = ideal_closure(&r, &gens).unwrap();
        assert_eq!(ideal.elements(), vec![0, 5, 10, 15, 20]);
        assert_eq!(ideal.elements(), brute_force_closure(25, &[10, 15]));
        // A few more moduli and generator sets against the oracle.
        for (q, gens) in [(9u64, vec![3u64, 6]), (9, vec![2]), (15, vec![6, 10]), (27, vec![12])] {
            let ring = Ring::modular(q).unwrap();
            let gelems: Vec<RingElement> =
                gens.iter().map(|&g| RingElement::from_i64(&ring, g as i64)).collect();
            let ideal = ideal_closure(&ring, &gelems).unwrap();
            assert_eq!(ideal.elements(), brute_force_closure(q, &gens), "q={q}");
        }
    }

    #[test]
    fn closure_is_fixpoint() {
        let r = Ring::modular(25).unwrap();
        let ideal = ideal_closure(&r, &[RingElement::from_i64(&r, 10)]).unwrap();
        let again = ideal_closure(
            &r,
            &ideal.elements().iter().map(|&e| RingElement::from_i64(&r, e as i64)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(ideal.elements(), again.elements());
    }

    #[test]
    fn elem_arith_rejects_ring_mismatch() {
        let a = RingElement::from_i64(&Ring::modular(9).unwrap(), 1);
        let b = RingElement::from_i64(&Ring::modular(25).unwrap(), 1);
        assert!(matches!(elem_arith(ArithOp::Add, &a, &b), Err(Error::RingMismatch)));
    }
}
