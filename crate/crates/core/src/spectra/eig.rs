//! Dense nonsymmetric eigensolver: balance, Householder reduction to upper
//! Hessenberg form, then implicit double-shift (Francis) QR iteration.
//!
//! `eigenvalues_raw` runs the pipeline on one matrix. The public entry
//! point in the parent module first splits the matrix into its strongly
//! connected blocks, which keeps structurally-forced zero eigenvalues
//! exact instead of smearing them across defective Jordan chains.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EigenError {
    #[error("QR iteration exceeded its budget on a {dim} x {dim} matrix")]
    NoConvergence { dim: usize },
    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

/// Eigenvalues of a general real matrix, with algebraic multiplicity.
/// The input is consumed as scratch space by the caller-side copy.
pub fn eigenvalues_raw(mut h: DMatrix<f64>) -> Result<Vec<Complex64>, EigenError> {
    let n = h.nrows();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(h[(0, 0)], 0.0)]),
        2 => {
            let (a, b, c, d) = (h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
            return Ok(two_by_two(a, b, c, d).to_vec());
        }
        _ => {}
    }
    balance(&mut h);
    hessenberg(&mut h);
    francis_qr(&mut h)
}

/// Roots of the characteristic polynomial of [[a, b], [c, d]], computed
/// with the stable half-trace form.
fn two_by_two(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 2] {
    let p = 0.5 * (a - d);
    let q = p * p + b * c;
    if q >= 0.0 {
        let zr = q.sqrt();
        let z = p + zr.copysign(if p == 0.0 { 1.0 } else { p });
        let r1 = d + z;
        let r2 = if z != 0.0 { d - b * c / z } else { d + z };
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let mid = d + p; // = (a + d) / 2
        let im = (-q).sqrt();
        [Complex64::new(mid, im), Complex64::new(mid, -im)]
    }
}

/// Parlett-Reinsch balancing: diagonal similarity by powers of two, so the
/// transform is exact in floating point.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut c_scaled = c;
                while c_scaled < g {
                    f *= RADIX;
                    c_scaled *= sqrdx;
                }
                g = r * RADIX;
                while c_scaled > g {
                    f /= RADIX;
                    c_scaled /= sqrdx;
                }
                if (c_scaled + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (similarity, vectors not
/// accumulated).
fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let mut ort = vec![0.0f64; n];
    for m in 1..n.saturating_sub(1) {
        let mut scale = 0.0;
        for i in m..n {
            scale += a[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..n).rev() {
            ort[i] = a[(i, m - 1)] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;
        // apply the reflector from both sides
        for j in m..n {
            let mut f = 0.0;
            for i in (m..n).rev() {
                f += ort[i] * a[(i, j)];
            }
            f /= h;
            for i in m..n {
                a[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..n {
            let mut f = 0.0;
            for j in (m..n).rev() {
                f += ort[j] * a[(i, j)];
            }
            f /= h;
            for j in m..n {
                a[(i, j)] -= f * ort[j];
            }
        }
        a[(m, m - 1)] = scale * g;
        for i in m + 1..n {
            a[(i, m - 1)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
/// Budget: 30 iterations per eigenvalue pair and 40 * n in total.
fn francis_qr(a: &mut DMatrix<f64>) -> Result<Vec<Complex64>, EigenError> {
    let n = a.nrows();
    let eps = f64::EPSILON;
    let budget = 40 * n;
    let mut spent = 0usize;
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut nn = n - 1;
    let mut t = 0.0f64;
    'outer: loop {
        let mut its = 0;
        loop {
            // look for a single negligible subdiagonal element
            let mut l = nn;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                // one real root found
                eigs[nn] = Complex64::new(x + t, 0.0);
                if nn == 0 {
                    break 'outer;
                }
                nn -= 1;
                break;
            }
            let mut y = a[(nn - 1, nn - 1)];
            let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
            if l == nn - 1 {
                // a 2 x 2 block splits off
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let zroot = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + zroot.copysign(if p == 0.0 { 1.0 } else { p });
                    eigs[nn - 1] = Complex64::new(x + z, 0.0);
                    eigs[nn] = if z != 0.0 {
                        Complex64::new(x - w / z, 0.0)
                    } else {
                        Complex64::new(x + z, 0.0)
                    };
                } else {
                    eigs[nn - 1] = Complex64::new(x + p, zroot);
                    eigs[nn] = Complex64::new(x + p, -zroot);
                }
                if nn <= 1 {
                    break 'outer;
                }
                nn -= 2;
                break;
            }
            // no root yet: one double-shift sweep
            if its == 100 || spent >= budget {
                return Err(EigenError::NoConvergence { dim: n });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift; clusters of coincident eigenvalues
                // (the +-1 groups of dense NB matrices) can stall the
                // Francis shift well past the first two kicks
                t += x;
                for i in 0..=nn {
                    a[(i, i)] -= x;
                }
                let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            spent += 1;
            // find two consecutive small subdiagonals
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - rr - ss;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nn - 1 {
                a[(i + 2, i)] = 0.0;
                if i != m {
                    a[(i + 2, i - 1)] = 0.0;
                }
            }
            for k in m..nn {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k + 1 != nn { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(if p == 0.0 { 1.0 } else { p });
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..n {
                    let mut pj = a[(k, j)] + q * a[(k + 1, j)];
                    if k + 1 != nn {
                        pj += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pj * z;
                    }
                    a[(k + 1, j)] -= pj * y;
                    a[(k, j)] -= pj * x;
                }
                let mmin = if nn < k + 3 { nn } else { k + 3 };
                for i in l..=mmin {
                    let mut pi = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k + 1 != nn {
                        pi += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pi * r;
                    }
                    a[(i, k + 1)] -= pi * q;
                    a[(i, k)] -= pi;
                }
            }
        }
    }
    Ok(eigs)
}
