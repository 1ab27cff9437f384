//! Sylvester resultants via fraction-free (Bareiss) elimination.

use super::{AlgError, MPoly};

/// Sylvester matrix of `f` and `g` in `var`: `deg g` shifted rows of `f`
/// coefficients followed by `deg f` shifted rows of `g` coefficients, leading
/// coefficient first.
pub fn sylvester_matrix(f: &MPoly, g: &MPoly, var: &str) -> Vec<Vec<MPoly>> {
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let (df, dg) = (fc.len() - 1, gc.len() - 1);
    let n = df + dg;
    let mut rows = Vec::with_capacity(n);
    for i in 0..dg {
        let mut row = vec![MPoly::zero(); n];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = vec![MPoly::zero(); n];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant of a square matrix of polynomials by Bareiss elimination;
/// every division is exact.
pub fn determinant(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            m[i][k] = MPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `res_var(f, g)`: the Sylvester determinant with the `f` rows first.
/// With this orientation `res(z - a, z - b) = a - b`.
///
/// The coefficients may involve other variables. Fails with
/// `NotUnivariateInVar` when neither input involves `var`, since the
/// Sylvester matrix is then empty and the call is almost certainly a
/// variable-name mistake.
pub fn resultant(f: &MPoly, g: &MPoly, var: &str) -> Result<MPoly, AlgError> {
    let (df, dg) = (f.degree_in(var), g.degree_in(var));
    if df == 0 && dg == 0 {
        return Err(AlgError::NotUnivariateInVar(var.to_string()));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MPoly::zero());
    }
    if df == 0 {
        return Ok(f.pow(dg));
    }
    if dg == 0 {
        return Ok(g.pow(df));
    }
    Ok(determinant(sylvester_matrix(f, g, var)).trim())
}

/// Like [`resultant`], but additionally requires both inputs to involve no
/// variable other than `var`.
pub fn resultant_univariate(f: &MPoly, g: &MPoly, var: &str) -> Result<MPoly, AlgError> {
    if !f.is_univariate_in(var) || !g.is_univariate_in(var) {
        return Err(AlgError::NotUnivariateInVar(var.to_string()));
    }
    resultant(f, g, var)
}
