//! Determinants: the tridiagonal recurrence, fraction-free elimination and
//! plain cofactor expansion.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::ring::{ExactDiv, Ring};
use crate::error::{arg_err, Result};

/// Determinant of the tridiagonal matrix with polynomial diagonal `diag`,
/// constant superdiagonal `super_c` and subdiagonal entries `sub_scale[k]·λ`.
///
/// Uses `D_k = diag_k·D_{k-1} − super_c·sub_scale_{k-1}·λ·D_{k-2}` with
/// `D_0 = 1`, `D_{-1} = 0`. For `λY − X` pass `diag_k = λ − a_k`,
/// `super_c = −1`, `sub_scale = −b`.
pub fn tridiag_det<C: Ring>(diag: &[Poly<C>], super_c: &C, sub_scale: &[C]) -> Result<Poly<C>> {
    if diag.len() != sub_scale.len() + 1 && !(diag.is_empty() && sub_scale.is_empty()) {
        return arg_err(format!(
            "tridiagonal shape mismatch: {} diagonal vs {} subdiagonal entries",
            diag.len(),
            sub_scale.len()
        ));
    }
    let mut prev = Poly::<C>::zero();
    let mut cur = Poly::<C>::one();
    for (k, d) in diag.iter().enumerate() {
        let next = if k == 0 {
            d * &cur
        } else {
            let coupling = Poly::monomial(super_c.clone() * sub_scale[k - 1].clone(), 1);
            &(d * &cur) - &(&coupling * &prev)
        };
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn check_square<C>(m: &[Vec<C>]) -> Result<usize> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return arg_err(format!("matrix is not square: {} rows, a row of length {}", n, row.len()));
    }
    Ok(n)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn exact_det<C: ExactDiv>(m: &[Vec<C>]) -> Result<C> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(C::one());
    }
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev_pivot = C::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(C::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v.exact_div(&prev_pivot);
            }
            a[i][k] = C::zero();
        }
        prev_pivot = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Determinant by Laplace expansion along the first row, skipping zero entries.
/// Exponential cost; intended for small matrices over rings without division.
pub fn cofactor_det<C: Ring>(m: &[Vec<C>]) -> Result<C> {
    let n = check_square(m)?;
    let cols: Vec<usize> = (0..n).collect();
    Ok(cofactor_rec(m, 0, &cols))
}

fn cofactor_rec<C: Ring>(m: &[Vec<C>], row: usize, cols: &[usize]) -> C {
    if cols.is_empty() {
        return C::one();
    }
    let mut acc = C::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.clone() * cofactor_rec(m, row + 1, &rest);
        acc = if pos % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat, Rational};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| int((i == j) as i64)).collect()).collect();
        assert_eq!(exact_det(&id).unwrap(), int(1));
        assert_eq!(exact_det(&m(&[&[1, 2], &[3, 4]])).unwrap(), int(-2));
        assert_eq!(exact_det(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(exact_det(&m(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        assert_eq!(exact_det::<Rational>(&[]).unwrap(), int(1));
    }

    #[test]
    fn rejects_non_square() {
        let bad = vec![vec![int(1), int(2)]];
        assert!(exact_det(&bad).is_err());
        assert!(cofactor_det(&bad).is_err());
    }

    #[test]
    fn rational_entries_agree_with_cofactors() {
        let a = vec![
            vec![rat(1, 2), rat(-3, 4), int(2), int(0), rat(5, 7)],
            vec![int(1), int(0), rat(2, 3), int(-1), int(4)],
            vec![rat(-2, 5), int(3), int(1), rat(1, 9), int(0)],
            vec![int(0), int(0), rat(7, 2), int(1), int(-2)],
            vec![int(3), rat(1, 3), int(0), int(2), rat(-1, 2)],
        ];
        assert_eq!(exact_det(&a).unwrap(), cofactor_det(&a).unwrap());
    }

    #[test]
    fn tridiagonal_two_by_two() {
        // a = (1, 2), b = (1): det(λY − X) = λ² − 4λ + 2
        let lam = Poly::<Rational>::x();
        let diag = vec![&lam - &Poly::constant(int(1)), &lam - &Poly::constant(int(2))];
        let d = tridiag_det(&diag, &int(-1), &[int(-1)]).unwrap();
        assert_eq!(d, Poly::new(vec![int(2), int(-4), int(1)]));
    }

    #[test]
    fn tridiagonal_without_coupling_factors() {
        let lam = Poly::<Rational>::x();
        let a = [int(3), int(-1), rat(1, 2)];
        let diag: Vec<_> = a.iter().map(|v| &lam - &Poly::constant(v.clone())).collect();
        let d = tridiag_det(&diag, &int(-1), &[int(0), int(0)]).unwrap();
        let prod = diag.iter().fold(Poly::one(), |acc, p| &acc * p);
        assert_eq!(d, prod);
        assert!(tridiag_det(&diag, &int(-1), &[int(0)]).is_err());
    }
}
