//! Test-only reference quadrature.

use num_complex::Complex64;

/// Adaptive 7/15-point Gauss–Kronrod on a real interval for complex integrands.
pub fn gauss_kronrod<F: Fn(f64) -> Complex64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    const XK: [f64; 8] = [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ];
    const WK: [f64; 8] = [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ];
    const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = f(c) * WK[7];
    let mut gauss = f(c) * WG[3];
    for j in 0..7 {
        let pair = f(c - h * XK[j]) + f(c + h * XK[j]);
        kron += pair * WK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let (kron, gauss) = (kron * h, gauss * h);
    if (kron - gauss).norm() <= tol || depth == 0 {
        return kron;
    }
    gauss_kronrod(f, a, c, tol / 2.0, depth - 1) + gauss_kronrod(f, c, b, tol / 2.0, depth - 1)
}

