//! Dense matrix helpers shared by the certificate, system and MPC modules.
//!
//! The matrix exponential uses scaling and squaring with a degree-13 Padé
//! approximant. Eigenvalues of 2×2 matrices come from the characteristic
//! quadratic; larger matrices are balanced and handed to a real Schur
//! decomposition.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance used when checking symmetry of weight matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

pub(crate) fn ensure_square(m: &DMatrix<f64>, context: &'static str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::dims(
            context,
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_finite(m: &DMatrix<f64>, context: &'static str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

fn norm_1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential `e^M` by scaling and squaring with a [13/13] Padé
/// approximant.
pub fn expm(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = ensure_square(m, "expm")?;
    ensure_finite(m, "expm")?;
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }

    let nrm = norm_1(m);
    let squarings = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = m / 2f64.powi(squarings);
    let ident = DMatrix::<f64>::identity(n, n);
    let b = &PADE13;

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = &a * (u_inner + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1]);
    let v_inner = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = v_inner + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or(Error::Singular("Padé denominator in expm"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    ensure_finite(&r, "expm result")?;
    Ok(r)
}

/// Returns `(e^{A·dt}, (∫₀^dt e^{A(dt−s)} ds)·B)` from one exponential of the
/// augmented matrix `[[A, B], [0, 0]]·dt`.
pub fn expm_with_input_integral(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    dt: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let nx = ensure_square(a, "augmented exponential (A)")?;
    if b.nrows() != nx {
        return Err(Error::dims(
            "augmented exponential (B rows)",
            nx,
            b.nrows(),
        ));
    }
    let nu = b.ncols();
    let mut aug = DMatrix::<f64>::zeros(nx + nu, nx + nu);
    aug.view_mut((0, 0), (nx, nx)).copy_from(&(a * dt));
    aug.view_mut((0, nx), (nx, nu)).copy_from(&(b * dt));
    let e = expm(&aug)?;
    let phi = e.view((0, 0), (nx, nx)).into_owned();
    let gamma = e.view((0, nx), (nx, nu)).into_owned();
    Ok((phi, gamma))
}

/// Eigenvalues of a square real matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = ensure_square(m, "eigenvalues")?;
    ensure_finite(m, "eigenvalues")?;
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Complex::new(m[(0, 0)], 0.0)]),
        2 => {
            let (l1, l2) = eigenvalues_2x2(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            Ok(vec![l1, l2])
        }
        _ => {
            let balanced = balance(m);
            let ev = balanced
                .try_schur(f64::EPSILON, 10_000)
                .ok_or(Error::NoConvergence {
                    what: "real Schur decomposition",
                    iterations: 10_000,
                    residual: f64::NAN,
                })?
                .complex_eigenvalues();
            let out: Vec<_> = ev.iter().copied().collect();
            if out.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
                return Err(Error::NonFinite("eigenvalues"));
            }
            Ok(out)
        }
    }
}

/// Closed-form eigenvalues of `[[a, b], [c, d]]`.
pub fn eigenvalues_2x2(a: f64, b: f64, c: f64, d: f64) -> (Complex<f64>, Complex<f64>) {
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // Avoid cancellation in the smaller root.
        let big = if half_tr >= 0.0 { half_tr + s } else { half_tr - s };
        let det = a * d - b * c;
        let small = if big != 0.0 { det / big } else { half_tr - s.copysign(half_tr) };
        let (hi, lo) = if big >= small { (big, small) } else { (small, big) };
        (Complex::new(hi, 0.0), Complex::new(lo, 0.0))
    } else {
        let s = (-disc).sqrt();
        (Complex::new(half_tr, s), Complex::new(half_tr, -s))
    }
}

/// Parlett–Reinsch diagonal balancing with powers of two; returns `D⁻¹MD`.
fn balance(m: &DMatrix<f64>) -> DMatrix<f64> {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut a = m.clone();
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let g = r / RADIX;
            while cc < g {
                f *= RADIX;
                cc *= RADIX * RADIX;
            }
            let g = r * RADIX;
            while cc > g {
                f /= RADIX;
                cc /= RADIX * RADIX;
            }
            if (cc + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

/// Largest eigenvalue of a symmetric matrix.
pub fn symmetric_max_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    ensure_square(m, "symmetric eigenvalue")?;
    ensure_finite(m, "symmetric eigenvalue")?;
    let sym = (m + m.transpose()) * 0.5;
    Ok(sym.symmetric_eigenvalues().max())
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn symmetric_eigen_range(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    ensure_square(m, "symmetric eigenvalue")?;
    ensure_finite(m, "symmetric eigenvalue")?;
    let sym = (m + m.transpose()) * 0.5;
    let ev = sym.symmetric_eigenvalues();
    Ok((ev.min(), ev.max()))
}

/// Checks symmetry (within [`SYMMETRY_TOL`]) and positive definiteness, and
/// returns the lower Cholesky factor `L` with `P = L Lᵀ`.
pub fn spd_factor(p: &DMatrix<f64>, context: &'static str) -> Result<DMatrix<f64>> {
    ensure_square(p, context)?;
    ensure_finite(p, context)?;
    let scale = p.amax().max(1.0);
    if (p - p.transpose()).amax() > SYMMETRY_TOL * scale {
        return Err(Error::NotPositiveDefinite(context));
    }
    let sym = (p + p.transpose()) * 0.5;
    let (lo, _) = symmetric_eigen_range(&sym)?;
    if !(lo > 0.0) {
        return Err(Error::NotPositiveDefinite(context));
    }
    sym.cholesky()
        .map(|c| c.l())
        .ok_or(Error::NotPositiveDefinite(context))
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn inverse(m: &DMatrix<f64>, context: &'static str) -> Result<DMatrix<f64>> {
    ensure_square(m, context)?;
    let inv = m.clone().try_inverse().ok_or(Error::Singular(context))?;
    ensure_finite(&inv, context)?;
    Ok(inv)
}

/// Euclidean norm of the stacked vector `[x; z]`.
pub fn stacked_norm(x: &DVector<f64>, z: &DVector<f64>) -> f64 {
    (x.norm_squared() + z.norm_squared()).sqrt()
}

/// `M^k` by repeated squaring.
pub fn matrix_power(m: &DMatrix<f64>, k: u32) -> DMatrix<f64> {
    let n = m.nrows();
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn expm_of_zero_is_identity() {
        let e = expm(&DMatrix::zeros(3, 3)).unwrap();
        assert_relative_eq!(e, DMatrix::identity(3, 3), epsilon = 1e-15);
    }

    #[test]
    fn expm_diagonal_and_nilpotent() {
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let e = expm(&d).unwrap();
        assert_relative_eq!(e[(0, 0)], 1f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(e[(1, 1)], (-2f64).exp(), max_relative = 1e-14);

        let n = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        let e = expm(&n).unwrap();
        assert_relative_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]), epsilon = 1e-14);
    }

    #[test]
    fn expm_large_norm_rotation() {
        // e^{[[0, w], [-w, 0]]} is a rotation by w radians.
        let w = 40.0;
        let m = DMatrix::from_row_slice(2, 2, &[0.0, w, -w, 0.0]);
        let e = expm(&m).unwrap();
        assert_relative_eq!(e[(0, 0)], w.cos(), epsilon = 1e-11);
        assert_relative_eq!(e[(0, 1)], w.sin(), epsilon = 1e-11);
    }

    #[test]
    fn expm_agrees_with_taylor_series_on_random_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[0.3, -0.2, 0.1, 0.5, -0.4, 0.2, -0.1, 0.7, 0.05]);
        let mut term = DMatrix::<f64>::identity(3, 3);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &m / k as f64;
            sum += &term;
        }
        assert_relative_eq!(expm(&m).unwrap(), sum, epsilon = 1e-13);
    }

    #[test]
    fn augmented_exponential_scalar() {
        let a = DMatrix::from_element(1, 1, 1.0);
        let b = DMatrix::from_element(1, 1, 1.0);
        let (phi, gamma) = expm_with_input_integral(&a, &b, 1.0).unwrap();
        assert_relative_eq!(phi[(0, 0)], std::f64::consts::E, max_relative = 1e-14);
        assert_relative_eq!(gamma[(0, 0)], std::f64::consts::E - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn eigenvalues_closed_form_and_general_agree() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, -1.0, 0.5, 0.3, 0.0, 0.2, -1.0]);
        let ev = eigenvalues(&m).unwrap();
        let tr: f64 = ev.iter().map(|l| l.re).sum();
        assert_relative_eq!(tr, 1.5, epsilon = 1e-12);
        let det: Complex<f64> = ev.iter().product();
        assert_relative_eq!(det.re, m.determinant(), epsilon = 1e-12);

        let (l1, l2) = eigenvalues_2x2(0.0, 1.0, -2.0, -3.0);
        assert_relative_eq!(l1.re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(l2.re, -2.0, epsilon = 1e-15);
    }

    #[test]
    fn balancing_preserves_spectrum_of_badly_scaled_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 1e6, 0.0, 1e-6, 2.0, 1e4, 0.0, 1e-4, 3.0]);
        let ev = eigenvalues(&m).unwrap();
        let tr: f64 = ev.iter().map(|l| l.re).sum();
        assert_relative_eq!(tr, 6.0, epsilon = 1e-9);
    }

    #[test]
    fn spd_factor_rejects_indefinite_and_asymmetric() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(spd_factor(&bad, "test").is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(spd_factor(&asym, "test").is_err());
        let ok = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let l = spd_factor(&ok, "test").unwrap();
        assert_relative_eq!(&l * l.transpose(), ok, epsilon = 1e-14);
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.2, -0.1, 0.9]);
        let p5 = &m * &m * &m * &m * &m;
        assert_relative_eq!(matrix_power(&m, 5), p5, epsilon = 1e-15);
        assert_relative_eq!(matrix_power(&m, 0), DMatrix::identity(2, 2));
    }
}
