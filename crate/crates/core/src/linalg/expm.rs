//! Matrix exponential by scaling and squaring with a degree-13 Padé core
//! (Higham 2005).

use num_complex::Complex64 as C64;

use super::ComplexMatrix;

const B13: [f64; 14] = [
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

const THETA_13: f64 = 5.371920351148152;

pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.rows();
    let norm = a.norm_one();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }
    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as u32 } else { 0 };
    let a = a.scale_real(0.5f64.powi(squarings as i32));

    let ident = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::new(B13[k], 0.0);
    let lin = |terms: &[(&ComplexMatrix, usize)]| {
        let mut acc = ComplexMatrix::zeros(n, n);
        for (m, k) in terms {
            acc += &m.scale(b(*k));
        }
        acc
    };

    let u_inner = &a6 * &lin(&[(&a6, 13), (&a4, 11), (&a2, 9)]);
    let u_inner = &u_inner + &lin(&[(&a6, 7), (&a4, 5), (&a2, 3), (&ident, 1)]);
    let u = &a * &u_inner;
    let v = &a6 * &lin(&[(&a6, 12), (&a4, 10), (&a2, 8)]);
    let v = &v + &lin(&[(&a6, 6), (&a4, 4), (&a2, 2), (&ident, 0)]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.solve(&p).expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}
