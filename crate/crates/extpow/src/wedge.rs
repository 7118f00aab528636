//! The exterior-power homomorphism from the n-dimensional linear group into
//! dimension N = C(n,m), computed entrywise via minors, together with the
//! closed-form images of elementary transvections and torus generators.

use crate::index::{binomial, insert_sign, WeightIndex};
use crate::matrix::ExactMatrix;
use crate::ring::RingElement;
use crate::Error;

/// Shape of one exterior power: source dimension n, power m, target N = C(n,m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WedgeSpec {
    n: u32,
    m: u32,
    big_dim: u64,
}

impl WedgeSpec {
    pub fn new(n: u32, m: u32) -> Result<WedgeSpec, Error> {
        if n < 3 || m < 1 || m > n - 1 {
            return Err(Error::InvalidIndex(format!(
                "wedge spec requires n >= 3 and 1 <= m <= n-1, got n={n}, m={m}"
            )));
        }
        Ok(WedgeSpec { n, m, big_dim: binomial(n, m) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// N = C(n, m).
    pub fn big_dim(&self) -> usize {
        self.big_dim as usize
    }

    /// The single-ideal level theory needs n >= 3m.
    pub fn level_constraint_ok(&self) -> bool {
        self.n >= 3 * self.m
    }

    /// The equal-height arguments need n >= 2m.
    pub fn module_constraint_ok(&self) -> bool {
        self.n >= 2 * self.m
    }

    /// Number of factors in the closed form of a wedge transvection,
    /// equivalently the residue (rank of g - e): C(n-2, m-1).
    pub fn residue(&self) -> u64 {
        binomial(self.n - 2, self.m - 1)
    }

    /// Exponent in det(wedge g) = det(g)^C(n-1, m-1).
    pub fn det_exponent(&self) -> u64 {
        binomial(self.n - 1, self.m - 1)
    }

    pub fn indices(&self) -> Vec<WeightIndex> {
        WeightIndex::enumerate(self.n, self.m)
    }
}

/// Image of an n x n matrix under the m-th exterior power: the N x N matrix
/// whose (I, J) entry is the I-rows-by-J-columns minor, rows and columns in
/// lexicographic order.
pub fn wedge_matrix(spec: &WedgeSpec, g: &ExactMatrix) -> Result<ExactMatrix, Error> {
    if g.dim() != spec.n as usize {
        return Err(Error::ShapeMismatch);
    }
    let indices = spec.indices();
    let nn = indices.len();
    let mut rows: Vec<Vec<RingElement>> = Vec::with_capacity(nn);
    for i in &indices {
        let mut row = Vec::with_capacity(nn);
        for j in &indices {
            row.push(g.minor(i, j)?);
        }
        rows.push(row);
    }
    ExactMatrix::from_rows(g.ring(), &rows)
}

/// One factor `t_{L∪i, L∪j}(sign(L,i) sign(L,j) ξ)` of a wedge transvection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeFactor {
    pub row: WeightIndex,
    pub col: WeightIndex,
    pub arg: RingElement,
}

/// Closed form of the wedge image of a transvection t_{i,j}(xi): the product
/// over (m-1)-subsets L of [n] \ {i,j} of `t_{L∪i,L∪j}(sign(L,i)sign(L,j)ξ)`,
/// factors in ascending lex order of L. The factors commute pairwise.
pub fn wedge_transvection_formula(
    spec: &WedgeSpec,
    i: u32,
    j: u32,
    xi: &RingElement,
) -> Result<Vec<WedgeFactor>, Error> {
    if i == j {
        return Err(Error::InvalidIndex("transvection requires i != j".into()));
    }
    if i < 1 || i > spec.n || j < 1 || j > spec.n {
        return Err(Error::InvalidIndex(format!("i={i}, j={j} out of range 1..={}", spec.n)));
    }
    let mut factors = Vec::new();
    for l in WeightIndex::enumerate(spec.n, spec.m - 1) {
        if l.contains(i) || l.contains(j) {
            continue;
        }
        let s = insert_sign(&l, i)? * insert_sign(&l, j)?;
        let arg = if s > 0 { xi.clone() } else { xi.neg() };
        factors.push(WedgeFactor { row: l.insert(i)?, col: l.insert(j)?, arg });
    }
    Ok(factors)
}

/// Realize the factor list as an N x N matrix.
pub fn realize_factors(spec: &WedgeSpec, ring: &crate::ring::Ring, factors: &[WedgeFactor]) -> ExactMatrix {
    let nn = spec.big_dim();
    let mut acc = ExactMatrix::identity(ring, nn);
    for f in factors {
        let t = ExactMatrix::transvection(
            ring,
            nn,
            f.row.lex_rank() as u32 + 1,
            f.col.lex_rank() as u32 + 1,
            &f.arg,
        );
        acc = acc.mul(&t);
    }
    acc
}

/// Wedge image of a transvection, via the closed formula.
///
/// The factors commute and no row set of one factor equals a column set of
/// another, so the product collapses to `e + Σ_L ±ξ e_{L∪i,L∪j}` with no
/// cross terms; the matrix is assembled directly. `realize_factors` computes
/// the same product the long way (asserted equal in tests).
pub fn wedge_transvection(
    spec: &WedgeSpec,
    ring: &crate::ring::Ring,
    i: u32,
    j: u32,
    xi: &RingElement,
) -> Result<ExactMatrix, Error> {
    let factors = wedge_transvection_formula(spec, i, j, xi)?;
    let nn = spec.big_dim();
    let mut rows: Vec<Vec<RingElement>> = (0..nn)
        .map(|r| (0..nn).map(|c| if r == c { ring.one() } else { ring.zero() }).collect())
        .collect();
    for f in &factors {
        rows[f.row.lex_rank()][f.col.lex_rank()] = f.arg.clone();
    }
    ExactMatrix::from_rows(ring, &rows)
}

/// Wedge image of the torus generator d_i(xi): diagonal with xi at every
/// index I containing i and 1 elsewhere.
pub fn wedge_diag(spec: &WedgeSpec, i: u32, xi: &RingElement) -> Result<ExactMatrix, Error> {
    if i < 1 || i > spec.n {
        return Err(Error::InvalidIndex(format!("i={i} out of range 1..={}", spec.n)));
    }
    let ring = xi.ring().clone();
    let indices = spec.indices();
    Ok(ExactMatrix::from_fn(&ring, spec.big_dim(), |r, c| {
        if r != c {
            ring.zero()
        } else if indices[r].contains(i) {
            xi.clone()
        } else {
            ring.one()
        }
    }))
}

/// Verify det(wedge g) = det(g)^C(n-1,m-1) exactly.
pub fn det_check(spec: &WedgeSpec, g: &ExactMatrix) -> Result<bool, Error> {
    let big = wedge_matrix(spec, g)?;
    let lhs = big.det();
    let rhs = g.det().pow(spec.det_exponent() as u32);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wedge_of_identity() {
        let r = Ring::modular(9).unwrap();
        let spec = WedgeSpec::new(5, 2).unwrap();
        let e = ExactMatrix::identity(&r, 5);
        assert!(wedge_matrix(&spec, &e).unwrap().is_identity());
    }

    #[test]
    fn wedge_square_of_t13_over_n5() {
        // wedge^2 t_{1,3}(xi) = t_{12,23}(-xi) t_{14,34}(xi) t_{15,35}(xi),
        // the columns being L∪{3}; confirmed against the minor oracle below.
        let r = Ring::poly(&["xi"]).unwrap();
        let xi = r.var(0);
        let spec = WedgeSpec::new(5, 2).unwrap();
        let factors = wedge_transvection_formula(&spec, 1, 3, &xi).unwrap();
        let expect = vec![
            (vec![1u32, 2], vec![2u32, 3], xi.neg()),
            (vec![1, 4], vec![3, 4], xi.clone()),
            (vec![1, 5], vec![3, 5], xi.clone()),
        ];
        assert_eq!(factors.len(), expect.len());
        for (f, (row, col, arg)) in factors.iter().zip(&expect) {
            assert_eq!(f.row.elems(), &row[..]);
            assert_eq!(f.col.elems(), &col[..]);
            assert_eq!(&f.arg, arg);
        }
        // And the product equals the minor-built image.
        let t = ExactMatrix::transvection(&r, 5, 1, 3, &xi);
        assert_eq!(realize_factors(&spec, &r, &factors), wedge_matrix(&spec, &t).unwrap());
    }

    #[test]
    fn wedge_cube_of_t13_over_n5() {
        // wedge^3 t_{1,3}(xi) = t_{124,234}(-xi) t_{125,235}(-xi) t_{145,345}(xi)
        let r = Ring::poly(&["xi"]).unwrap();
        let xi = r.var(0);
        let spec = WedgeSpec::new(5, 3).unwrap();
        let factors = wedge_transvection_formula(&spec, 1, 3, &xi).unwrap();
        let expect = vec![
            (vec![1u32, 2, 4], vec![2u32, 3, 4], xi.neg()),
            (vec![1, 2, 5], vec![2, 3, 5], xi.neg()),
            (vec![1, 4, 5], vec![3, 4, 5], xi.clone()),
        ];
        assert_eq!(factors.len(), expect.len());
        for (f, (row, col, arg)) in factors.iter().zip(&expect) {
            assert_eq!(f.row.elems(), &row[..]);
            assert_eq!(f.col.elems(), &col[..]);
            assert_eq!(&f.arg, arg);
        }
        let t = ExactMatrix::transvection(&r, 5, 1, 3, &xi);
        assert_eq!(realize_factors(&spec, &r, &factors), wedge_matrix(&spec, &t).unwrap());
    }

    #[test]
    fn formula_matches_minors_for_reversed_indices() {
        // The i > j variant of the closed form, against the minor oracle.
        let r = Ring::poly(&["xi"]).unwrap();
        let xi = r.var(0);
        let spec = WedgeSpec::new(5, 2).unwrap();
        let t = ExactMatrix::transvection(&r, 5, 2, 1, &xi);
        let factors = wedge_transvection_formula(&spec, 2, 1, &xi).unwrap();
        assert_eq!(realize_factors(&spec, &r, &factors), wedge_matrix(&spec, &t).unwrap());
    }

    #[test]
    fn wedge_diag_examples() {
        let r = Ring::poly(&["xi"]).unwrap();
        let xi = r.var(0);
        // wedge^4 d_2(xi) over n=5 is diag(xi, xi, xi, 1, xi).
        let spec = WedgeSpec::new(5, 4).unwrap();
        let d = wedge_diag(&spec, 2, &xi).unwrap();
        let want = [true, true, true, false, true];
        for (k, &is_xi) in want.iter().enumerate() {
            let e = d.entry(k, k);
            if is_xi {
                assert_eq!(e, &xi);
            } else {
                assert!(e.is_one());
            }
        }
        // Oracle: minors of the torus matrix itself.
        let d2 = ExactMatrix::torus(&r, 5, 2, &xi);
        assert_eq!(d, wedge_matrix(&spec, &d2).unwrap());

        // wedge^2 d_1(xi) over n=4 is diag(xi,xi,xi,1,1,1), again vs minors.
        let spec = WedgeSpec::new(4, 2).unwrap();
        let d = wedge_diag(&spec, 1, &xi).unwrap();
        let d1 = ExactMatrix::torus(&r, 4, 1, &xi);
        assert_eq!(d, wedge_matrix(&spec, &d1).unwrap());

        // xi = 1 gives the identity.
        let one = r.one();
        assert!(wedge_diag(&spec, 1, &one).unwrap().is_identity());
    }

    #[test]
    fn residue_counts() {
        assert_eq!(WedgeSpec::new(12, 4).unwrap().residue(), 120);
        assert_eq!(WedgeSpec::new(5, 2).unwrap().residue(), 3);
        let r = Ring::poly(&["xi"]).unwrap();
        let xi = r.var(0);
        for (n, m) in [(5u32, 2u32), (6, 2), (6, 3), (7, 3)] {
            let spec = WedgeSpec::new(n, m).unwrap();
            let factors = wedge_transvection_formula(&spec, 1, 2, &xi).unwrap();
            assert_eq!(factors.len() as u64, spec.residue());
        }
    }

    #[test]
    fn det_exponents() {
        assert_eq!(WedgeSpec::new(5, 2).unwrap().det_exponent(), 4);
        assert_eq!(WedgeSpec::new(6, 3).unwrap().det_exponent(), 10);
    }

    #[test]
    fn homomorphism_and_det_random_spot() {
        let r = Ring::modular(9).unwrap();
        let spec = WedgeSpec::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let rand_g = |rng: &mut ChaCha8Rng| {
                let mut g = ExactMatrix::identity(&r, 5);
                for _ in 0..5 {
                    let i = rng.gen_range(1..=5u32);
                    let mut j = rng.gen_range(1..=5u32);
                    if i == j {
                        j = if j == 5 { 1 } else { j + 1 };
                    }
                    let arg = RingElement::from_i64(&r, rng.gen_range(0..9));
                    g = g.mul(&ExactMatrix::transvection(&r, 5, i, j, &arg));
                }
                let units = [1i64, 2, 4, 5, 7, 8];
                let u = RingElement::from_i64(&r, units[rng.gen_range(0..6)]);
                g.mul(&ExactMatrix::torus(&r, 5, rng.gen_range(1..=5u32), &u))
            };
            let g = rand_g(&mut rng);
            let h = rand_g(&mut rng);
            let lhs = wedge_matrix(&spec, &g.mul(&h)).unwrap();
            let rhs = wedge_matrix(&spec, &g).unwrap().mul(&wedge_matrix(&spec, &h).unwrap());
            assert_eq!(lhs, rhs);
            assert!(det_check(&spec, &g).unwrap());
        }
    }
}
