use crate::scalar::Real;

/// Solves `A x = b` for a dense row-major `n x n` matrix by Gaussian
/// elimination with partial pivoting. `b` is overwritten with `x`.
/// Returns `None` when a pivot vanishes.
pub(crate) fn solve_dense<T: Real>(a: &mut [T], b: &mut [T], n: usize) -> Option<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[x * n + col].abs().partial_cmp(&a[y * n + col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        let p = a[pivot * n + col];
        if !(p.abs() > T::min_positive_value()) {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                a[row * n + k] = a[row * n + k] - factor * a[col * n + k];
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s = s - a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Some(())
}
