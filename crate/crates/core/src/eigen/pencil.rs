use nalgebra::{DMatrix, SymmetricEigen};

use crate::interval::round::{add_up, mul_up, sqrt_up};
use crate::interval::{Interval, IntervalMatrix};

use super::EigenError;

/// Enclosures of all eigenvalues of `A x = θ B x`, ascending, for every
/// symmetric `A`, `B` inside the interval matrices (B positive definite).
///
/// Float generalized eigenvectors `X` give `Y = XᵀAX` and `G = XᵀBX ≈ I`.
/// An interval Cholesky factor `R` of `G` proves `G`, hence `B` (X is then
/// nonsingular), positive definite, and `Z = R⁻¹ Y R⁻ᵀ` has the eigenvalues of
/// the pencil. Weyl's inequality around the diagonal of `Z` bounds them.
pub fn enclose_pencil(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<Vec<Interval>, EigenError> {
    let n = a.rows();
    assert_eq!((n, n), (a.cols(), b.rows()));
    if !a.is_finite() || !b.is_finite() {
        return Err(EigenError::NonFinite("pencil matrices".into()));
    }
    let x = approximate_eigenvectors(&a.mid(), &b.mid())?;
    let y = a.congruence(&x);
    let g = b.congruence(&x);
    let r = g
        .cholesky()
        .ok_or_else(|| EigenError::NotPositiveDefinite("pencil right-hand matrix".into()))?;
    let p = r.forward_solve(&y)?;
    let mut z = r.forward_solve(&p.transpose())?.transpose();
    z.symmetrize()?;
    Ok(weyl_enclosure(&z))
}

fn approximate_eigenvectors(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>, EigenError> {
    let n = a.nrows();
    let bs = (b + b.transpose()) * 0.5;
    let chol = bs
        .cholesky()
        .ok_or_else(|| EigenError::NotPositiveDefinite("float pencil right-hand matrix".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| EigenError::NotPositiveDefinite("float Cholesky factor".into()))?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let q = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(linv.transpose() * q)
}

/// Eigenvalue enclosures of every symmetric matrix in `z`, ascending.
fn weyl_enclosure(z: &IntervalMatrix) -> Vec<Interval> {
    let n = z.rows();
    let mut d: Vec<f64> = (0..n).map(|i| z[(i, i)].mid()).collect();
    let mut frob_sq = 0.0_f64;
    let mut max_row = 0.0_f64;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let e = if i == j {
                (z[(i, i)] - d[i]).mag()
            } else {
                z[(i, j)].mag()
            };
            row = add_up(row, e);
            frob_sq = add_up(frob_sq, mul_up(e, e));
        }
        max_row = max_row.max(row);
    }
    let radius = sqrt_up(frob_sq).min(max_row);
    d.sort_by(f64::total_cmp);
    d.into_iter()
        .map(|c| Interval::span(c, c) + Interval::span(-radius, radius))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil_is_exact_enough() {
        let a = IntervalMatrix::from_points(&DMatrix::from_diagonal(&nalgebra::dvector![3.0, 1.0, 2.0]));
        let b = IntervalMatrix::from_points(&DMatrix::from_diagonal(&nalgebra::dvector![1.0, 1.0, 4.0]));
        let ev = enclose_pencil(&a, &b).unwrap();
        for (e, want) in ev.iter().zip([0.5, 1.0, 3.0]) {
            assert!(e.contains(want), "{e:?}");
            assert!(e.width() < 1e-13);
        }
    }

    #[test]
    fn dense_pencil_matches_float_solver() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.1, 0.5, 3.0, 0.2, 0.1, 0.2, 5.0]);
        let b = DMatrix::from_row_slice(3, 3, &[1.0, 0.1, 0.0, 0.1, 2.0, 0.3, 0.0, 0.3, 1.5]);
        let ev = enclose_pencil(&IntervalMatrix::from_points(&a), &IntervalMatrix::from_points(&b)).unwrap();
        let l = b.clone().cholesky().unwrap().l();
        let li = l.try_inverse().unwrap();
        let mut want: Vec<f64> = SymmetricEigen::new(&li * &a * li.transpose())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        want.sort_by(f64::total_cmp);
        for (e, w) in ev.iter().zip(want) {
            assert!((e.mid() - w).abs() < 1e-12 && e.width() < 1e-12, "{e:?} vs {w}");
        }
    }

    #[test]
    fn indefinite_right_side_is_rejected() {
        let a = IntervalMatrix::identity(2);
        let b = IntervalMatrix::from_points(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]));
        assert!(enclose_pencil(&a, &b).is_err());
    }
}
