//! Exponential integral on the right half plane and the sinc kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this modulus the power series is used, above it the continued fraction.
pub const SERIES_RADIUS: f64 = 4.0;

const MAX_TERMS: usize = 20_000;

/// Upper incomplete gamma function `Gamma(0, z) = E1(z)` on the principal branch.
///
/// Defined for `z != 0` with `Re z >= 0`.
pub fn gamma0(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("Gamma(0, z) needs finite z, got {z}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "Gamma(0, z) has a logarithmic singularity at z = 0".into(),
        ));
    }
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "Gamma(0, z) is only provided for Re z >= 0, got {z}"
        )));
    }
    if z.norm() <= SERIES_RADIUS {
        Ok(gamma0_series(z))
    } else {
        Ok(gamma0_continued_fraction(z))
    }
}

/// `-gamma_E - ln z - sum_{n>=1} (-z)^n / (n n!)`.
pub fn gamma0_series(z: ComplexValue) -> ComplexValue {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..MAX_TERMS {
        let nf = n as f64;
        term *= -z / nf;
        let contrib = term / nf;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Even continued fraction
/// `E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))`, modified Lentz.
pub fn gamma0_continued_fraction(z: ComplexValue) -> ComplexValue {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = one / d;
        let del = c * d;
        h *= del;
        if (del - one).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// `sin(x) / x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values computed with 30-digit arithmetic.
    type Pair = (f64, f64);
    const REFERENCE: &[(Pair, Pair)] = &[
        ((1.0, 0.0), (0.219_383_934_395_520_27, 0.0)),
        ((0.0, 1.0), (-0.337_403_922_900_968_13, -0.624_713_256_427_713_6)),
        ((0.5, 0.0), (0.559_773_594_776_160_8, 0.0)),
        ((0.0, 10.0), (0.045_456_433_004_455_37, 0.087_551_267_423_977_43)),
        ((3.0, 4.0), (0.000_863_953_958_979_585_1, 0.008_786_208_377_197_442)),
        ((0.0, 1e-3), (6.330_539_864_080_593_8, -1.569_796_326_850_452_2)),
        ((0.0, 1e-6), (13.238_294_893_062_991, -1.570_795_326_794_896_6)),
        ((0.0, 1e4), (3.055_191_672_448_521_3e-5, 9.521_859_106_529_649e-5)),
        ((0.0, 25.0), (0.006_848_597_179_702_591, -0.039_313_775_794_935_3)),
        ((0.0, 50.0), (0.005_628_386_324_116_305, -0.019_179_254_308_960_725)),
    ];

    #[test]
    fn matches_reference_values() {
        for &((zr, zi), (wr, wi)) in REFERENCE {
            let got = gamma0(c(zr, zi)).unwrap();
            let e = rel(got, c(wr, wi));
            assert!(e < 1e-12, "z = ({zr}, {zi}): got {got}, rel err {e:e}");
        }
    }

    #[test]
    fn rejects_origin_and_left_half_plane() {
        assert!(gamma0(c(0.0, 0.0)).is_err());
        assert!(gamma0(c(-1.0, 0.5)).is_err());
        assert!(gamma0(c(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn leading_asymptotic_term() {
        let z = 100.0;
        let got = gamma0(c(z, 0.0)).unwrap().re;
        let lead = (-z).exp() / z;
        assert!(((got - lead) / got).abs() < 0.02);
        assert!((got / 3.683_597_761_682_032e-46 - 1.0).abs() < 1e-12);
    }

    // Ci and Si by their power series, an oracle for Gamma(0, ix). The
    // alternating series loses about eight digits by x = 20.
    fn ci_si(x: f64) -> (f64, f64) {
        let (mut ci, mut si) = (EULER_GAMMA + x.ln(), 0.0);
        let mut term = 1.0; // x^n / n!
        for n in 1..400 {
            term *= x / n as f64;
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if n % 2 == 1 {
                si += sign * term / n as f64;
            } else {
                ci += sign * term / n as f64;
            }
        }
        (ci, si)
    }

    #[test]
    fn imaginary_axis_against_ci_si() {
        for &x in &[0.5, 1.0, 5.0, 20.0] {
            let (ci, si) = ci_si(x);
            let oracle = c(-ci, si - PI / 2.0);
            let plus = gamma0(c(0.0, x)).unwrap();
            let tol = if x > 10.0 { 1e-6 } else { 1e-11 };
            assert!(rel(plus, oracle) < tol, "x = {x}: {plus} vs {oracle}");
            // conjugate symmetry: Re even, Im odd in x
            let minus = if x <= SERIES_RADIUS {
                gamma0_series(c(0.0, -x))
            } else {
                gamma0_continued_fraction(c(0.0, -x))
            };
            assert!(rel(minus, plus.conj()) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn branches_agree_across_switch_radius() {
        for i in 0..=20 {
            let r = 3.5 * (4.5f64 / 3.5).powf(i as f64 / 20.0);
            for &theta in &[0.0, 0.4, 0.8, 1.2, PI / 2.0] {
                let z = Complex64::from_polar(r, theta);
                let s = gamma0_series(z);
                let f = gamma0_continued_fraction(z);
                assert!(rel(s, f) < 1e-10, "|z| = {r}, arg = {theta}: {s} vs {f}");
            }
        }
    }

    #[test]
    fn recurrence_with_e2() {
        // E2(x) = int_1^inf e^{-x t} / t^2 dt, by substitution t = 1/u:
        // E2(x) = int_0^1 e^{-x/u} du, midpoint rule on a fine grid.
        for &x in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let n = 200_000;
            let h = 1.0 / n as f64;
            let e2: f64 = (0..n)
                .map(|i| {
                    let u = (i as f64 + 0.5) * h;
                    (-x / u).exp()
                })
                .sum::<f64>()
                * h;
            let e1 = gamma0(c(x, 0.0)).unwrap().re;
            let via = (-x).exp() - x * e1;
            assert!((via - e2).abs() < 1e-10, "x = {x}: {via} vs {e2}");
        }
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(PI).abs() < 1e-15);
        assert!((sinc(PI / 2.0) - 2.0 / PI).abs() < 1e-15);
        // Taylor branch is continuous with the direct branch
        assert!((sinc(0.999_9e-4) - sinc(1.000_1e-4)).abs() < 1e-12);
        assert_eq!(sinc(-2.0), sinc(2.0));
    }
}
