use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ScalingError;
use crate::expr::{Poly, RatFunc};

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

fn nullspace(mut m: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    let pivots = rref(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

fn univariate(var: &str, coeffs: &[BigRational]) -> Poly {
    let x = Poly::var(var);
    coeffs.iter().enumerate().fold(Poly::zero(), |acc, (k, c)| acc.add(&x.pow(k as u32).scale(c)))
}

/// The unique rational function `P/Q` in `var` with `deg P ≤ num_deg`,
/// `deg Q ≤ den_deg` through every sample.
pub fn reconstruct_rational(
    samples: &[(BigRational, BigRational)],
    num_deg: usize,
    den_deg: usize,
    var: &str,
) -> Result<RatFunc, ScalingError> {
    let cols = num_deg + den_deg + 2;
    let rows: Vec<Vec<BigRational>> = samples
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(cols);
            let mut xp = BigRational::one();
            for _ in 0..=num_deg {
                row.push(xp.clone());
                xp = &xp * x;
            }
            let mut xp = BigRational::one();
            for _ in 0..=den_deg {
                row.push(-(y * &xp));
                xp = &xp * x;
            }
            row
        })
        .collect();
    let mut found: Option<RatFunc> = None;
    for v in nullspace(rows, cols) {
        let q = univariate(var, &v[num_deg + 1..]);
        if q.is_zero() {
            continue;
        }
        let p = univariate(var, &v[..=num_deg]);
        let r = RatFunc::new(p, q).ok_or(ScalingError::NoFit)?;
        match &found {
            Some(f) if *f != r => return Err(ScalingError::NoFit),
            _ => found = Some(r),
        }
    }
    let r = found.ok_or(ScalingError::NoFit)?;
    for (x, y) in samples {
        let at = [(var.to_string(), x.clone())].into();
        if r.eval(&at).as_ref() != Some(y) {
            return Err(ScalingError::NoFit);
        }
    }
    Ok(r)
}
