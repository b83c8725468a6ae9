//! Dense linear algebra over Q: echelon forms, ranks, null spaces, subspace
//! intersection and incremental span membership.

use num_traits::{One, Zero};

use crate::exactnum::Rational;

pub type Vector = Vec<Rational>;

/// Row-reduced echelon form in place; returns the pivot column of each
/// nonzero row. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                axpy(row, &f, &pivot_row, c);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// `row -= f · other`, touching columns from `from` on.
fn axpy(row: &mut [Rational], f: &Rational, other: &[Rational], from: usize) {
    for (x, y) in row.iter_mut().zip(other).skip(from) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Basis of `span(u) ∩ span(v)` for vectors of length `dim`.
pub fn intersection(u: &[Vector], v: &[Vector], dim: usize) -> Vec<Vector> {
    let u = basis_of(u);
    let v = basis_of(v);
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    // Solve Σ α_i u_i − Σ β_j v_j = 0; columns are the u_i and −v_j.
    let k = u.len() + v.len();
    let rows: Vec<Vector> = (0..dim)
        .map(|r| {
            u.iter()
                .map(|x| x[r].clone())
                .chain(v.iter().map(|x| -x[r].clone()))
                .collect()
        })
        .collect();
    let sols = nullspace(&rows, k);
    let out: Vec<Vector> = sols
        .iter()
        .map(|sol| {
            let mut w = vec![Rational::zero(); dim];
            for (a, ui) in sol.iter().zip(&u) {
                if !a.is_zero() {
                    for (wc, uc) in w.iter_mut().zip(ui) {
                        *wc += a * uc;
                    }
                }
            }
            w
        })
        .collect();
    basis_of(&out)
}

/// An independent subset spanning the same space (first-come order kept).
pub fn basis_of(vs: &[Vector]) -> Vec<Vector> {
    let mut span = Span::new(vs.first().map_or(0, Vec::len));
    vs.iter().filter(|v| span.insert(v)).cloned().collect()
}

/// Incrementally built subspace supporting membership queries.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    // echelon rows, each normalized to 1 at its pivot
    rows: Vec<(usize, Vector)>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn from_vectors(dim: usize, vs: &[Vector]) -> Self {
        let mut s = Self::new(dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &[Rational]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                axpy(&mut v, &f, row, 0);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                axpy(row, &f, &r, 0);
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])];
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn intersect_planes() {
        // xy-plane ∩ yz-plane = y-axis
        let u = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
        let w = vec![v(&[0, 1, 0]), v(&[0, 0, 1])];
        let i = intersection(&u, &w, 3);
        assert_eq!(i.len(), 1);
        assert!(Span::from_vectors(3, &i).contains(&v(&[0, 5, 0])));
        assert!(intersection(&u, &[], 3).is_empty());
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new(3);
        assert!(s.insert(&v(&[1, 1, 0])));
        assert!(s.insert(&v(&[0, 1, 1])));
        assert!(!s.insert(&v(&[1, 2, 1])));
        assert!(s.contains(&v(&[2, 3, 1])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        assert_eq!(s.dim(), 2);
    }
}
