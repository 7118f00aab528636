//! Reduction homomorphisms Z/q -> Z/d, congruence subgroup predicates,
//! factorization of decomposable coordinate vectors over prime fields, and a
//! recognizer for membership in the set image of the exterior-power map.

use crate::index::WeightIndex;
use crate::matrix::ExactMatrix;
use crate::ring::{FiniteIdeal, Ring, RingElement, RingKind};
use crate::wedge::{wedge_matrix, WedgeSpec};
use crate::Error;

/// Entry-wise projection Z/q -> Z/d for a principal ideal (d), d | q.
#[derive(Debug, Clone)]
pub struct ReductionMap {
    source: Ring,
    target: Ring,
    modulus: u64,
}

impl ReductionMap {
    pub fn new(source: &Ring, ideal: &FiniteIdeal) -> Result<ReductionMap, Error> {
        if !source.is_modular() {
            return Err(Error::NotModular);
        }
        if ideal.ring() != source {
            return Err(Error::RingMismatch);
        }
        let d = ideal.generator();
        if d == 1 {
            return Err(Error::Unsupported("whole-ring ideal gives a trivial quotient".into()));
        }
        Ok(ReductionMap { source: source.clone(), target: Ring::modular(d)?, modulus: d })
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement, Error> {
        if x.ring() != &self.source {
            return Err(Error::RingMismatch);
        }
        Ok(RingElement::from_i64(&self.target, (x.residue().unwrap() % self.modulus) as i64))
    }

    pub fn matrix(&self, g: &ExactMatrix) -> Result<ExactMatrix, Error> {
        let n = g.dim();
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut row = Vec::with_capacity(n);
            for c in 0..n {
                row.push(self.apply(g.entry(r, c))?);
            }
            rows.push(row);
        }
        ExactMatrix::from_rows(&self.target, &rows)
    }
}

/// Entry-wise reduction of a matrix over Z/q modulo the ideal.
pub fn reduce_matrix(g: &ExactMatrix, ideal: &FiniteIdeal) -> Result<ExactMatrix, Error> {
    ReductionMap::new(g.ring(), ideal)?.matrix(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceFlags {
    /// The reduction is the identity matrix.
    pub principal: bool,
    /// The reduction is a scalar matrix.
    pub full: bool,
}

/// Congruence subgroup predicates at level `ideal`.
pub fn congruence_predicates(
    g: &ExactMatrix,
    ideal: &FiniteIdeal,
) -> Result<CongruenceFlags, Error> {
    let red = reduce_matrix(g, ideal)?;
    let principal = red.is_identity();
    let scalar = {
        let d = red.entry(0, 0).clone();
        let mut ok = true;
        for r in 0..red.dim() {
            for c in 0..red.dim() {
                let e = red.entry(r, c);
                ok &= if r == c { *e == d } else { e.is_zero() };
            }
        }
        ok
    };
    Ok(CongruenceFlags { principal, full: scalar })
}

/// Outcome of factoring a coordinate vector into a wedge of m vectors.
#[derive(Debug, Clone)]
pub enum FactorOutcome {
    /// m vectors whose wedge equals the input (verified by minors).
    Factors(Vec<Vec<RingElement>>),
    /// A quadratic relation among the coordinates fails; the witness names
    /// the offending coordinate.
    NotDecomposable { witness: String },
}

fn field_checks(ring: &Ring) -> Result<u64, Error> {
    match ring.kind() {
        RingKind::Modular(q) if ring.is_prime_field() && q % 2 == 1 => Ok(*q),
        RingKind::Modular(q) => Err(Error::InvalidRing(format!(
            "need a prime field of odd characteristic, got Z/{q}"
        ))),
        _ => Err(Error::NotModular),
    }
}

/// Determinant of a small square matrix given as rows (cofactor expansion).
fn det_small(rows: &[Vec<RingElement>], ring: &Ring) -> RingElement {
    let k = rows.len();
    if k == 0 {
        return ring.one();
    }
    if k == 1 {
        return rows[0][0].clone();
    }
    let mut acc = ring.zero();
    for (c, top) in rows[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let sub: Vec<Vec<RingElement>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, e)| e.clone()).collect()
            })
            .collect();
        let cof = top.mul(&det_small(&sub, ring));
        acc = if c % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
    }
    acc
}

/// Wedge coordinates of m row vectors: the J-th coordinate is the minor over
/// columns J.
fn wedge_of_rows(rows: &[Vec<RingElement>], spec: &WedgeSpec, ring: &Ring) -> Vec<RingElement> {
    spec.indices()
        .iter()
        .map(|jw| {
            let sub: Vec<Vec<RingElement>> = rows
                .iter()
                .map(|r| jw.elems().iter().map(|&j| r[j as usize - 1].clone()).collect())
                .collect();
            det_small(&sub, ring)
        })
        .collect()
}

/// Factor a length-C(n,m) coordinate vector as a wedge of m vectors over a
/// prime field of odd characteristic.
///
/// Contraction construction: with I0 the lex-least index carrying a nonzero
/// coordinate and L_k = I0 minus its k-th element, the candidate vectors are
/// v_k[j] = sign(L_k, j) * w_{L_k + j}; their wedge equals w_{I0}^{m-1} * w
/// exactly when w is decomposable, so one vector is rescaled and the result
/// verified coordinate by coordinate.
pub fn factor_decomposable(
    w: &[RingElement],
    spec: &WedgeSpec,
) -> Result<FactorOutcome, Error> {
    if w.is_empty() {
        return Err(Error::ShapeMismatch);
    }
    let ring = w[0].ring().clone();
    field_checks(&ring)?;
    let indices = spec.indices();
    if w.len() != indices.len() {
        return Err(Error::ShapeMismatch);
    }
    let n = spec.n() as usize;
    let m = spec.m() as usize;
    let lead = match w.iter().position(|x| !x.is_zero()) {
        Some(p) => p,
        None => return Err(Error::InvalidIndex("zero vector".into())),
    };
    let i0 = &indices[lead];
    let coord = |elems: &[u32]| -> Option<&RingElement> {
        WeightIndex::new(spec.n(), elems).ok().map(|wi| &w[wi.lex_rank()])
    };

    let mut rows: Vec<Vec<RingElement>> = Vec::with_capacity(m);
    for k in 0..m {
        let l: Vec<u32> = i0
            .elems()
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != k)
            .map(|(_, &e)| e)
            .collect();
        let mut v = vec![ring.zero(); n];
        for j in 1..=n as u32 {
            if l.contains(&j) {
                continue;
            }
            let mut merged = l.clone();
            merged.push(j);
            merged.sort_unstable();
            let sign_neg = l.iter().filter(|&&e| e > j).count() % 2 == 1;
            let c = coord(&merged).expect("valid merged index");
            v[j as usize - 1] = if sign_neg { c.neg() } else { c.clone() };
        }
        rows.push(v);
    }
    // For decomposable w the wedge of the contraction vectors is a nonzero
    // scalar multiple of w; read the scalar off the leading coordinate and
    // verify every other coordinate against it.
    let got = wedge_of_rows(&rows, spec, &ring);
    if got[lead].is_zero() {
        return Ok(FactorOutcome::NotDecomposable {
            witness: format!(
                "coordinate {}: contraction against itself vanishes",
                i0.label()
            ),
        });
    }
    let scale = got[lead].mul(&w[lead].inverse().expect("nonzero lead"));
    for (k, (a, b)) in got.iter().zip(w.iter()).enumerate() {
        if *a != b.mul(&scale) {
            return Ok(FactorOutcome::NotDecomposable {
                witness: format!(
                    "coordinate {}: contraction against {} predicts {a}, vector has {b}",
                    indices[k].label(),
                    i0.label()
                ),
            });
        }
    }
    let unscale = scale.inverse().expect("nonzero scalar");
    for e in rows[0].iter_mut() {
        *e = e.mul(&unscale);
    }
    Ok(FactorOutcome::Factors(rows))
}

// ---- prime-field linear algebra on plain vectors ----

/// Reduced row echelon form in place; returns the rank.
fn rref(rows: &mut Vec<Vec<RingElement>>) -> usize {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inverse().expect("field pivot");
        for e in rows[rank].iter_mut() {
            *e = e.mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    let s = rows[rank][c].mul(&f);
                    rows[r][c] = rows[r][c].sub(&s);
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    rank
}

/// Basis of the right nullspace of the given rows.
fn nullspace(rows: &[Vec<RingElement>], ncols: usize, ring: &Ring) -> Vec<Vec<RingElement>> {
    let mut m: Vec<Vec<RingElement>> = rows.to_vec();
    rref(&mut m);
    let mut pivot_col = vec![None; m.len()];
    let mut is_pivot = vec![false; ncols];
    for (r, row) in m.iter().enumerate() {
        if let Some(c) = row.iter().position(|e| !e.is_zero()) {
            pivot_col[r] = Some(c);
            is_pivot[c] = true;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![ring.zero(); ncols];
        v[free] = ring.one();
        for (r, pc) in pivot_col.iter().enumerate() {
            if let Some(pc) = pc {
                v[*pc] = m[r][free].neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// Intersection of the spans of two vector families; returns a basis.
fn span_intersection(
    u: &[Vec<RingElement>],
    v: &[Vec<RingElement>],
    ring: &Ring,
) -> Vec<Vec<RingElement>> {
    let n = u[0].len();
    let unknowns = u.len() + v.len();
    let mut eqs = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(unknowns);
        for uu in u {
            row.push(uu[r].clone());
        }
        for vv in v {
            row.push(vv[r].neg());
        }
        eqs.push(row);
    }
    let mut out = Vec::new();
    for sol in nullspace(&eqs, unknowns, ring) {
        let mut vec = vec![ring.zero(); n];
        for (i, uu) in u.iter().enumerate() {
            for r in 0..n {
                let s = uu[r].mul(&sol[i]);
                vec[r] = vec[r].add(&s);
            }
        }
        if vec.iter().any(|e| !e.is_zero()) {
            out.push(vec);
        }
    }
    rref(&mut out);
    out
}

/// Result of testing an N x N matrix for membership in the set image of the
/// exterior power.
#[derive(Debug, Clone)]
pub enum MembershipVerdict {
    /// wedge_matrix(witness) equals the input exactly.
    InSetImage { witness: ExactMatrix },
    /// wedge_matrix(witness) equals lambda * input for the reported unit.
    ScalarTwist { lambda: RingElement, witness: ExactMatrix },
    NotFound { notes: String },
}

fn column(h: &ExactMatrix, c: usize) -> Vec<RingElement> {
    (0..h.dim()).map(|r| h.entry(r, c).clone()).collect()
}

fn scale_matrix(h: &ExactMatrix, lambda: &RingElement) -> ExactMatrix {
    let n = h.dim();
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        rows.push((0..n).map(|c| h.entry(r, c).mul(lambda)).collect::<Vec<_>>());
    }
    ExactMatrix::from_rows(h.ring(), &rows).expect("same shape")
}

/// Exact reconstruction: find g with wedge_matrix(g) = h, or report why not.
fn recognize_exact(h: &ExactMatrix, spec: &WedgeSpec) -> Result<ExactMatrix, String> {
    let ring = h.ring().clone();
    let n = spec.n() as usize;
    let m = spec.m() as usize;
    if n < 2 * m - 1 {
        return Err(format!("column separation needs n >= 2m-1, got n={n}, m={m}"));
    }
    let indices = spec.indices();
    let rank_of = |elems: &[u32]| -> usize {
        WeightIndex::new(spec.n(), elems).expect("valid index").lex_rank()
    };

    // Direction of each candidate column j: the span of h's column at any
    // index containing j is the span of the corresponding g-columns, and two
    // such spans meeting only at j intersect in the line through g_j.
    let mut dirs: Vec<Vec<RingElement>> = Vec::with_capacity(n);
    for j in 1..=n as u32 {
        let others: Vec<u32> = (1..=n as u32).filter(|&x| x != j).collect();
        let mut a: Vec<u32> = others[..m - 1].to_vec();
        let mut b: Vec<u32> = others[m - 1..2 * (m - 1)].to_vec();
        a.push(j);
        b.push(j);
        a.sort_unstable();
        b.sort_unstable();
        let factor = |elems: &[u32]| -> Result<Vec<Vec<RingElement>>, String> {
            let col = column(h, rank_of(elems));
            match factor_decomposable(&col, spec).map_err(|e| e.to_string())? {
                FactorOutcome::Factors(f) => Ok(f),
                FactorOutcome::NotDecomposable { witness } => {
                    Err(format!("column {:?} not decomposable: {witness}", elems))
                }
            }
        };
        let (fa, fb) = (factor(&a)?, factor(&b)?);
        let meet = if m == 1 {
            let mut me = fa;
            rref(&mut me);
            me
        } else {
            span_intersection(&fa, &fb, &ring)
        };
        if meet.len() != 1 {
            return Err(format!(
                "column {j}: span intersection has dimension {}, expected a line",
                meet.len()
            ));
        }
        // Deterministic witness: leading coefficient 1 (rref already does it).
        dirs.push(meet.into_iter().next().unwrap());
    }

    // g = D * diag(c); wedge minors give products of the unknown scalars.
    let d_mat = ExactMatrix::from_rows(
        &ring,
        &(0..n).map(|r| (0..n).map(|c| dirs[c][r].clone()).collect()).collect::<Vec<_>>(),
    )
    .expect("square");
    let minor_of = |iw: &WeightIndex, jw: &WeightIndex| d_mat.minor(iw, jw).expect("same size");
    let prod_over = |jw: &WeightIndex| -> Result<RingElement, String> {
        for iw in &indices {
            let mv = minor_of(iw, jw);
            if let Some(inv) = mv.inverse() {
                return Ok(h.entry(iw.lex_rank(), jw.lex_rank()).mul(&inv));
            }
        }
        Err(format!("all minors vanish at columns {}", jw.label()))
    };

    // c_j / c_1 from index sets differing only in 1 <-> j.
    let mut ratio = vec![ring.one(); n + 1];
    for j in 2..=n as u32 {
        let k: Vec<u32> = (1..=n as u32).filter(|&x| x != 1 && x != j).take(m - 1).collect();
        let mut kj = k.clone();
        kj.push(j);
        kj.sort_unstable();
        let mut k1 = k;
        k1.push(1);
        k1.sort_unstable();
        let p1 = prod_over(&WeightIndex::new(spec.n(), &k1).expect("valid"))?;
        let pj = prod_over(&WeightIndex::new(spec.n(), &kj).expect("valid"))?;
        let inv = p1.inverse().ok_or_else(|| "degenerate scalar ratio".to_string())?;
        ratio[j as usize] = pj.mul(&inv);
    }

    // Remaining global scalar t: t^m is pinned by the first column block.
    let j0 = WeightIndex::new(spec.n(), &(1..=m as u32).collect::<Vec<_>>()).expect("valid");
    let p0 = prod_over(&j0)?;
    let mut rprod = ring.one();
    for j in 1..=m as u32 {
        rprod = rprod.mul(&ratio[j as usize]);
    }
    let target = p0.mul(&rprod.inverse().ok_or_else(|| "degenerate ratio product".to_string())?);
    let q = ring.modulus().unwrap();
    for t in 1..q {
        let tel = RingElement::from_i64(&ring, t as i64);
        if tel.pow(m as u32) != target {
            continue;
        }
        let g = ExactMatrix::from_rows(
            &ring,
            &(0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| dirs[c][r].mul(&tel).mul(&ratio[c + 1]))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        )
        .expect("square");
        if wedge_matrix(spec, &g).expect("shape") == *h {
            return Ok(g);
        }
    }
    Err("no consistent column scaling".into())
}

/// Test membership of h in the set image of the exterior power over a prime
/// field, allowing a scalar twist.
pub fn in_wedge_image(h: &ExactMatrix, spec: &WedgeSpec) -> Result<MembershipVerdict, Error> {
    let ring = h.ring().clone();
    let q = field_checks(&ring)?;
    if h.dim() != spec.big_dim() {
        return Err(Error::ShapeMismatch);
    }
    match recognize_exact(h, spec) {
        Ok(witness) => return Ok(MembershipVerdict::InSetImage { witness }),
        Err(first) => {
            for l in 2..q {
                let lambda = RingElement::from_i64(&ring, l as i64);
                if let Ok(witness) = recognize_exact(&scale_matrix(h, &lambda), spec) {
                    return Ok(MembershipVerdict::ScalarTwist { lambda, witness });
                }
            }
            Ok(MembershipVerdict::NotFound { notes: first })
        }
    }
}

/// Decide h ∈ (reduction preimage of the recognized wedge image) at level
/// `ideal`; the quotient must be a prime field.
pub fn congruence_wedge_membership(
    h: &ExactMatrix,
    ideal: &FiniteIdeal,
    spec: &WedgeSpec,
) -> Result<bool, Error> {
    let red = reduce_matrix(h, ideal)?;
    field_checks(red.ring())?;
    Ok(matches!(
        in_wedge_image(&red, spec)?,
        MembershipVerdict::InSetImage { .. } | MembershipVerdict::ScalarTwist { .. }
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(r: &Ring, v: i64) -> RingElement {
        RingElement::from_i64(r, v)
    }

    #[test]
    fn reduce_examples() {
        let r9 = Ring::modular(9).unwrap();
        let a3 = FiniteIdeal::principal(&r9, 3).unwrap();
        let t = ExactMatrix::transvection(&r9, 3, 1, 2, &e(&r9, 3));
        assert!(reduce_matrix(&t, &a3).unwrap().is_identity());
        assert!(reduce_matrix(&ExactMatrix::identity(&r9, 3), &a3).unwrap().is_identity());
        let d = ExactMatrix::torus(&r9, 3, 1, &e(&r9, 4));
        assert!(reduce_matrix(&d, &a3).unwrap().is_identity());

        // Homomorphism on random invertible pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let rand_g = |rng: &mut ChaCha8Rng| {
                let mut g = ExactMatrix::identity(&r9, 3);
                for _ in 0..4 {
                    let i = rng.gen_range(1..=3u32);
                    let j = if i == 3 { 1 } else { i + 1 };
                    g = g.mul(&ExactMatrix::transvection(&r9, 3, i, j, &e(&r9, rng.gen_range(0..9))));
                }
                g
            };
            let (g, k) = (rand_g(&mut rng), rand_g(&mut rng));
            let lhs = reduce_matrix(&g.mul(&k), &a3).unwrap();
            let rhs = reduce_matrix(&g, &a3).unwrap().mul(&reduce_matrix(&k, &a3).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn predicate_examples() {
        let r9 = Ring::modular(9).unwrap();
        let a3 = FiniteIdeal::principal(&r9, 3).unwrap();
        let g = ExactMatrix::transvection(&r9, 3, 1, 2, &e(&r9, 3));
        let f = congruence_predicates(&g, &a3).unwrap();
        assert!(f.principal && f.full);

        let scalar2 = ExactMatrix::from_fn(&r9, 3, |r, c| {
            if r == c {
                e(&r9, 2)
            } else {
                r9.zero()
            }
        });
        let f = congruence_predicates(&scalar2, &a3).unwrap();
        assert!(!f.principal && f.full);

        let t1 = ExactMatrix::transvection(&r9, 3, 1, 2, &e(&r9, 1));
        let f = congruence_predicates(&t1, &a3).unwrap();
        assert!(!f.principal && !f.full);
    }

    fn basis_vec(spec: &WedgeSpec, ring: &Ring, elems: &[u32]) -> Vec<RingElement> {
        let mut w = vec![ring.zero(); spec.big_dim()];
        w[WeightIndex::new(spec.n(), elems).unwrap().lex_rank()] = ring.one();
        w
    }

    #[test]
    fn factor_examples() {
        let f3 = Ring::modular(3).unwrap();
        let spec = WedgeSpec::new(4, 2).unwrap();

        let w = basis_vec(&spec, &f3, &[1, 2]);
        match factor_decomposable(&w, &spec).unwrap() {
            FactorOutcome::Factors(fs) => {
                assert_eq!(wedge_of_rows(&fs, &spec, &f3), w);
            }
            other => panic!("expected factors, got {other:?}"),
        }

        // e12 + e34 is the classic non-decomposable vector.
        let mut w = basis_vec(&spec, &f3, &[1, 2]);
        let r34 = WeightIndex::new(4, &[3, 4]).unwrap().lex_rank();
        w[r34] = f3.one();
        match factor_decomposable(&w, &spec).unwrap() {
            FactorOutcome::NotDecomposable { .. } => {}
            other => panic!("expected non-decomposable, got {other:?}"),
        }
        // Oracle: no pair of vectors in F3^4 wedges to it.
        let all: Vec<Vec<RingElement>> = (0..81u32)
            .map(|k| (0..4).map(|p| e(&f3, ((k / 3u32.pow(p)) % 3) as i64)).collect())
            .collect();
        for v1 in &all {
            for v2 in &all {
                assert_ne!(wedge_of_rows(&[v1.clone(), v2.clone()], &spec, &f3), w);
            }
        }

        // e12 + e13 = e1 ^ (e2 + e3).
        let mut w = basis_vec(&spec, &f3, &[1, 2]);
        let r13 = WeightIndex::new(4, &[1, 3]).unwrap().lex_rank();
        w[r13] = f3.one();
        match factor_decomposable(&w, &spec).unwrap() {
            FactorOutcome::Factors(fs) => assert_eq!(wedge_of_rows(&fs, &spec, &f3), w),
            other => panic!("expected factors, got {other:?}"),
        }

        // Zero vector is rejected.
        let z = vec![f3.zero(); spec.big_dim()];
        assert!(factor_decomposable(&z, &spec).is_err());
    }

    #[test]
    fn factor_round_trip_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [3u64, 5] {
            let f = Ring::modular(q).unwrap();
            for (n, m) in [(4u32, 2u32), (5, 2), (6, 3), (5, 3)] {
                let spec = WedgeSpec::new(n, m).unwrap();
                for _ in 0..10 {
                    let rows: Vec<Vec<RingElement>> = (0..m)
                        .map(|_| {
                            (0..n).map(|_| e(&f, rng.gen_range(0..q) as i64)).collect()
                        })
                        .collect();
                    let w = wedge_of_rows(&rows, &spec, &f);
                    if w.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    match factor_decomposable(&w, &spec).unwrap() {
                        FactorOutcome::Factors(fs) => {
                            assert_eq!(wedge_of_rows(&fs, &spec, &f), w);
                        }
                        other => panic!("decomposable vector rejected: {other:?}"),
                    }
                }
            }
        }
    }

    fn random_gl4(rng: &mut ChaCha8Rng, f: &Ring) -> ExactMatrix {
        let q = f.modulus().unwrap();
        let mut g = ExactMatrix::identity(f, 4);
        for _ in 0..6 {
            let i = rng.gen_range(1..=4u32);
            let mut j = rng.gen_range(1..=4u32);
            if i == j {
                j = if j == 4 { 1 } else { j + 1 };
            }
            g = g.mul(&ExactMatrix::transvection(f, 4, i, j, &e(f, rng.gen_range(0..q) as i64)));
        }
        let u = e(f, rng.gen_range(1..q) as i64);
        g.mul(&ExactMatrix::torus(f, 4, rng.gen_range(1..=4u32), &u))
    }

    #[test]
    fn recognizer_round_trip_and_rejection() {
        let f3 = Ring::modular(3).unwrap();
        let spec = WedgeSpec::new(4, 2).unwrap();

        match in_wedge_image(&ExactMatrix::identity(&f3, 6), &spec).unwrap() {
            MembershipVerdict::InSetImage { witness } => {
                assert!(wedge_matrix(&spec, &witness).unwrap().is_identity());
            }
            other => panic!("identity must be recognized, got {other:?}"),
        }

        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..30 {
            let g = random_gl4(&mut rng, &f3);
            let h = wedge_matrix(&spec, &g).unwrap();
            match in_wedge_image(&h, &spec).unwrap() {
                MembershipVerdict::InSetImage { witness } => {
                    assert_eq!(wedge_matrix(&spec, &witness).unwrap(), h);
                }
                other => panic!("round trip failed: {other:?}"),
            }
        }

        // A big elementary transvection with unit argument is not recognized.
        let t = ExactMatrix::transvection(&f3, 6, 1, 6, &f3.one());
        assert!(matches!(
            in_wedge_image(&t, &spec).unwrap(),
            MembershipVerdict::NotFound { .. }
        ));
    }

    #[test]
    fn recognizer_scalar_twist() {
        let f3 = Ring::modular(3).unwrap();
        let spec = WedgeSpec::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g = random_gl4(&mut rng, &f3);
        let h = wedge_matrix(&spec, &g).unwrap();
        let two = e(&f3, 2);
        let twisted = scale_matrix(&h, &two);
        match in_wedge_image(&twisted, &spec).unwrap() {
            MembershipVerdict::InSetImage { witness } => {
                assert_eq!(wedge_matrix(&spec, &witness).unwrap(), twisted);
            }
            MembershipVerdict::ScalarTwist { lambda, witness } => {
                assert_eq!(
                    wedge_matrix(&spec, &witness).unwrap(),
                    scale_matrix(&twisted, &lambda)
                );
            }
            MembershipVerdict::NotFound { notes } => panic!("twist not recognized: {notes}"),
        }
    }

    #[test]
    fn membership_after_reduction() {
        let r9 = Ring::modular(9).unwrap();
        let a3 = FiniteIdeal::principal(&r9, 3).unwrap();
        let spec = WedgeSpec::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let g = random_gl4(&mut rng, &r9);
        let h = wedge_matrix(&spec, &g).unwrap();
        let noise = ExactMatrix::transvection(&r9, 6, 2, 5, &e(&r9, 3));
        assert!(congruence_wedge_membership(&h.mul(&noise), &a3, &spec).unwrap());

        let bad = ExactMatrix::transvection(&r9, 6, 1, 6, &r9.one());
        assert!(!congruence_wedge_membership(&bad, &a3, &spec).unwrap());

        assert!(congruence_wedge_membership(&ExactMatrix::identity(&r9, 6), &a3, &spec).unwrap());

        // Quotient must be a field.
        let r27 = Ring::modular(27).unwrap();
        let a9 = FiniteIdeal::principal(&r27, 9).unwrap();
        let id = ExactMatrix::identity(&r27, 6);
        assert!(congruence_wedge_membership(&id, &a9, &spec).is_err());
    }
}
