//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Intermediate
//! entries of Hermite and Smith reductions grow quickly, so no machine-word
//! shortcuts are taken.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rows converted to `i64`, or `None` if an entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.data[src * self.cols + c].clone();
            self.data[dst * self.cols + c] += q * v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.data[r * self.cols + src].clone();
            self.data[r * self.cols + dst] += q * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    fn truncate_rows(&mut self, rows: usize) {
        self.data.truncate(rows * self.cols);
        self.rows = rows;
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{}) [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form over the rationals. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(m: &IntMatrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..m.cols() {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    rref(m).1.len()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Integer basis of the rational kernel `{x : m x = 0}`, one primitive row
/// per free column of the echelon form.
pub fn rational_kernel(m: &IntMatrix) -> IntMatrix {
    let (rows, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            x[p] = -row[f].clone();
        }
        let denom = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = x.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
        out.push(primitive(ints));
    }
    IntMatrix::from_rows(cols, out)
}

/// Row-style Hermite normal form: positive pivots with strictly increasing
/// columns, entries above each pivot reduced into `[0, pivot)`, zero rows
/// dropped. Canonical for the row lattice.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        loop {
            let pivot = (r..a.rows())
                .filter(|&i| !a.get(i, c).is_zero())
                .min_by(|&i, &j| a.get(i, c).abs().cmp(&a.get(j, c).abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..a.rows() {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = a.get(i, c).div_floor(a.get(r, c));
                a.add_row_multiple(i, r, &-q);
                if !a.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, c).div_floor(a.get(r, c));
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    a.truncate_rows(r);
    a
}

/// Elementary divisors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub elementary_divisors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithDecomposition {
    /// True when every elementary divisor is 1.
    pub fn is_unimodular_part(&self) -> bool {
        self.elementary_divisors.iter().all(|d| d.is_one())
    }
}

/// Diagonalizes `m` with unimodular row and column operations, returning
/// the diagonal and the inverse of the accumulated column transform.
fn smith_with_column_inverse(m: &IntMatrix) -> (Vec<BigInt>, IntMatrix) {
    let mut a = m.clone();
    let mut vinv = IntMatrix::identity(a.cols());
    let (k, n) = (a.rows(), a.cols());
    let mut diag = Vec::new();
    for t in 0..k.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, (t..k).flat_map(|i| (t..n).map(move |j| (i, j))))
        else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        vinv.swap_rows(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..k {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t) / a.get(t, t);
                a.add_row_multiple(i, t, &-q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / a.get(t, t);
                a.add_col_multiple(j, t, &-&q);
                vinv.add_row_multiple(t, j, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                let line = (t + 1..k).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                let (pi, pj) = min_abs_entry(&a, line).expect("nonzero entry remains");
                if a.get(pi, pj).abs() < a.get(t, t).abs() {
                    a.swap_rows(t, pi);
                    a.swap_cols(t, pj);
                    vinv.swap_rows(t, pj);
                }
                continue;
            }
            // Divisibility: pull any offending row into the pivot row.
            let offending = (t + 1..k).find(|&i| (t + 1..n).any(|j| !(a.get(i, j) % a.get(t, t)).is_zero()));
            match offending {
                Some(i) => a.add_row_multiple(t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
        }
        diag.push(a.get(t, t).clone());
    }
    (diag, vinv)
}

fn min_abs_entry(
    a: &IntMatrix,
    positions: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    positions
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by(|&(i, j), &(p, q)| a.get(i, j).abs().cmp(&a.get(p, q).abs()))
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (diag, _) = smith_with_column_inverse(m);
    SmithDecomposition { rank: diag.len(), elementary_divisors: diag }
}

/// A sublattice of `Z^n` stored by its Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        Lattice { ambient_dim: generators.cols(), basis: hermite_normal_form(generators) }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: IntMatrix::zeros(0, ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Hermite basis rows.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut v = v.to_vec();
        for r in 0..self.basis.rows() {
            let row = self.basis.row(r);
            let p = row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero");
            let (q, rem) = v[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return false;
            }
            for (x, b) in v.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|r| self.contains(other.basis.row(r)))
    }
}

/// `{z in Z^n : k z in L for some k >= 1}`, computed from the column
/// transform of a Smith reduction.
pub fn saturate(l: &Lattice) -> Lattice {
    if l.rank() == 0 {
        return l.clone();
    }
    let (diag, vinv) = smith_with_column_inverse(&l.basis);
    let rows: Vec<Vec<BigInt>> = (0..diag.len()).map(|r| vinv.row(r).to_vec()).collect();
    Lattice::from_generators(&IntMatrix::from_rows(l.ambient_dim, rows))
}

/// True iff `Z^n / L` has no torsion.
pub fn is_torsion_free_quotient(l: &Lattice) -> bool {
    smith_normal_form(&l.basis).is_unimodular_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(rational_kernel(&m(2, &[&[1, -1]])), m(2, &[&[1, 1]]));
        assert_eq!(rational_kernel(&m(3, &[&[1, -2, 1]])), m(3, &[&[2, 1, 0], &[-1, 0, 1]]));
        assert_eq!(rational_kernel(&IntMatrix::zeros(0, 3)), IntMatrix::identity(3));
    }

    #[test]
    fn kernel_clears_denominators() {
        // 2x0 - 3x1 = 0 gives x0 = 3/2 x1
        let k = rational_kernel(&m(2, &[&[2, -3]]));
        assert_eq!(k, m(2, &[&[3, 2]]));
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hermite_normal_form(&m(2, &[&[2, 0], &[0, 2]])), m(2, &[&[2, 0], &[0, 2]]));
        assert_eq!(hermite_normal_form(&m(2, &[&[1, 2], &[3, 4]])), m(2, &[&[1, 0], &[0, 2]]));
        assert_eq!(hermite_normal_form(&m(2, &[&[2, -2]])), m(2, &[&[2, -2]]));
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let h = hermite_normal_form(&m(3, &[&[1, -1, 0], &[2, -2, 0], &[0, 0, 0]]));
        assert_eq!(h, m(3, &[&[1, -1, 0]]));
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&m(2, &[&[2, -2]]));
        assert_eq!(s.elementary_divisors, big(&[2]));
        assert_eq!(s.rank, 1);
        let s = smith_normal_form(&m(3, &[&[1, -2, 1]]));
        assert_eq!(s.elementary_divisors, big(&[1]));
        let s = smith_normal_form(&IntMatrix::zeros(0, 0));
        assert!(s.elementary_divisors.is_empty());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_divisibility_chain_is_enforced() {
        // diag(2, 3) has SNF diag(1, 6)
        let s = smith_normal_form(&m(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.elementary_divisors, big(&[1, 6]));
        let s = smith_normal_form(&m(3, &[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.elementary_divisors, big(&[2, 6, 12]));
    }

    #[test]
    fn saturate_examples() {
        let l = Lattice::from_generators(&m(2, &[&[2, -2]]));
        assert_eq!(saturate(&l), Lattice::from_generators(&m(2, &[&[1, -1]])));
        let l = Lattice::from_generators(&m(3, &[&[1, -2, 1]]));
        assert_eq!(saturate(&l), l);
        let l = Lattice::empty(3);
        assert_eq!(saturate(&l), l);
    }

    #[test]
    fn torsion_examples() {
        assert!(!is_torsion_free_quotient(&Lattice::from_generators(&m(2, &[&[2, -2]]))));
        assert!(is_torsion_free_quotient(&Lattice::from_generators(&m(3, &[&[1, -2, 1]]))));
        assert!(is_torsion_free_quotient(&Lattice::empty(3)));
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_generators(&m(3, &[&[2, -2, 0], &[0, 1, -1]]));
        assert!(l.contains(&big(&[2, 0, -2])));
        assert!(!l.contains(&big(&[1, -1, 0])));
        assert!(l.contains(&big(&[0, 0, 0])));
    }
}
