//! Bessel function J₁, needed for the closed-form spectrum of a disc.
//!
//! Port of the FDLIBM e_j1.c routine (via Go's math.J1): rational
//! minimax approximation on [0, 2], asymptotic form with 4-interval
//! rational tables for pone/qone beyond. Absolute accuracy ~1 ulp.
//
// The original C code came from FreeBSD's /usr/src/lib/msun/src/e_j1.c:
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

const SQRT_PI: f64 = 1.77245385090551602729816748334114518;
const TWO_M27: f64 = 7.450580596923828125e-09; // 2**-27
const TWO_129: f64 = 6.80564733841876926e+38; // 2**129

// R0/S0 on [0, 2]
const R00: f64 = -6.25000000000000000000e-02;
const R01: f64 = 1.40705666955189706048e-03;
const R02: f64 = -1.59955631084035597520e-05;
const R03: f64 = 4.96727999609584448412e-08;
const S01: f64 = 1.91537599538363460805e-02;
const S02: f64 = 1.85946785588630915560e-04;
const S03: f64 = 1.17718464042623683263e-06;
const S04: f64 = 5.04636257076217042715e-09;
const S05: f64 = 1.23542274426137913908e-11;

/// J₁(x) for any real x. J₁(NaN) = NaN, J₁(±∞) = 0, J₁(0) = 0.
pub fn bessel_j1(x: f64) -> f64 {
    // For |x| < 2: j1(x) = x/2 + x·z·R0/S0, z = x², |err| < 2^-61.51.
    // For |x| ≥ 2: j1(x) = sqrt(2/(πx))·(p1(x)cos(x1) − q1(x)sin(x1)),
    // x1 = x − 3π/4, with sin(x1), cos(x1) computed from sin x, cos x and
    // the cancellation-avoiding identity s ± c = −cos 2x/(s ∓ c).
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() || x == 0.0 {
        return 0.0;
    }

    let (xx, negative) = if x < 0.0 { (-x, true) } else { (x, false) };

    if xx >= 2.0 {
        let (s, c) = f64::sin_cos(xx);
        let mut ss = -s - c;
        let mut cc = s - c;

        // make sure x+x does not overflow
        if xx < f64::MAX / 2.0 {
            let z = f64::cos(xx + xx);
            if s * c > 0.0 {
                cc = z / ss;
            } else {
                ss = z / cc;
            }
        }

        let z = if xx > TWO_129 {
            (1.0 / SQRT_PI) * cc / xx.sqrt()
        } else {
            let u = pone(xx);
            let v = qone(xx);
            (1.0 / SQRT_PI) * (u * cc - v * ss) / xx.sqrt()
        };
        return if negative { -z } else { z };
    }

    if xx < TWO_M27 {
        return 0.5 * xx;
    }

    let mut z = xx * xx;
    let mut r = z * (R00 + z * (R01 + z * (R02 + z * R03)));
    let s = 1.0 + z * (S01 + z * (S02 + z * (S03 + z * (S04 + z * S05))));
    r *= xx;
    z = 0.5 * xx + r / s;
    if negative {
        -z
    } else {
        z
    }
}

// pone(x) ≈ 1 + 15/128 x^-2 − 4725/2^15 x^-4 − ... as rational R/S in x^-2,
// split over four intervals of 1/x.

// for x in [8, inf]
const P1R8: [f64; 6] = [
    0.00000000000000000000e+00,
    1.17187499999988647970e-01,
    1.32394806593073575129e+01,
    4.12051854307378562225e+02,
    3.87474538913960532227e+03,
    7.91447954031891731574e+03,
];
const P1S8: [f64; 5] = [
    1.14207370375678408436e+02,
    3.65093083420853463394e+03,
    3.69562060269033463555e+04,
    9.76027935934950801311e+04,
    3.08042720627888811578e+04,
];

// for x in [4.5454, 8]
const P1R5: [f64; 6] = [
    1.31990519556243522749e-11,
    1.17187493190614097638e-01,
    6.80275127868432871736e+00,
    1.08308182990189109773e+02,
    5.17636139533199752805e+02,
    5.28715201363337541807e+02,
];
const P1S5: [f64; 5] = [
    5.92805987221131331921e+01,
    9.91401418733614377743e+02,
    5.35326695291487976647e+03,
    7.84469031749551231769e+03,
    1.50404688810361062679e+03,
];

// for x in [2.8571, 4.5454]
const P1R3: [f64; 6] = [
    3.02503916137373618024e-09,
    1.17186865567253592491e-01,
    3.93297750033315640650e+00,
    3.51194035591636932736e+01,
    9.10550110750781271918e+01,
    4.85590685197364919645e+01,
];
const P1S3: [f64; 5] = [
    3.47913095001251519989e+01,
    3.36762458747825746741e+02,
    1.04687139975775130551e+03,
    8.90811346398256432622e+02,
    1.03787932439639277504e+02,
];

// for x in [2, 2.8571]
const P1R2: [f64; 6] = [
    1.07710830106873743082e-07,
    1.17176219462683348094e-01,
    2.36851496667608785174e+00,
    1.22426109148261232917e+01,
    1.76939711271687727390e+01,
    5.07352312588818499250e+00,
];
const P1S2: [f64; 5] = [
    2.14364859363821409488e+01,
    1.25290227168402751090e+02,
    2.32276469057162813669e+02,
    1.17679373287147100768e+02,
    8.36463893371618283368e+00,
];

fn pone(x: f64) -> f64 {
    debug_assert!(x >= 2.0);
    let (p, q) = if x >= 8.0 {
        (&P1R8, &P1S8)
    } else if x >= 4.5454 {
        (&P1R5, &P1S5)
    } else if x >= 2.8571 {
        (&P1R3, &P1S3)
    } else {
        (&P1R2, &P1S2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * q[4]))));
    1.0 + r / s
}

// qone(x) ≈ x^-1·(0.375 + R/S) with R/S rational in x^-2, same intervals.

// for x in [8, inf]
const Q1R8: [f64; 6] = [
    0.00000000000000000000e+00,
    -1.02539062499992714161e-01,
    -1.62717534544589987888e+01,
    -7.59601722513950107896e+02,
    -1.18498066702429587167e+04,
    -4.84385124285750353010e+04,
];
const Q1S8: [f64; 6] = [
    1.61395369700722909556e+02,
    7.82538599923348465381e+03,
    1.33875336287249578163e+05,
    7.19657723683240939863e+05,
    6.66601232617776375264e+05,
    -2.94490264303834643215e+05,
];

// for x in [4.5454, 8]
const Q1R5: [f64; 6] = [
    -2.08979931141764104297e-11,
    -1.02539050241375426231e-01,
    -8.05644828123936029840e+00,
    -1.83669607474888380239e+02,
    -1.37319376065508163265e+03,
    -2.61244440453215656817e+03,
];
const Q1S5: [f64; 6] = [
    8.12765501384335777857e+01,
    1.99179873460485964642e+03,
    1.74684851924908907677e+04,
    4.98514270910352279316e+04,
    2.79480751638918118260e+04,
    -4.71918354795128470869e+03,
];

// for x in [2.8571, 4.5454]
const Q1R3: [f64; 6] = [
    -5.07831226461766561369e-09,
    -1.02537829820837089745e-01,
    -4.61011581139473403113e+00,
    -5.78472216562783643212e+01,
    -2.28244540737631695038e+02,
    -2.19210128478909325622e+02,
];
const Q1S3: [f64; 6] = [
    4.76651550323729509273e+01,
    6.73865112676699709482e+02,
    3.38015286679526343505e+03,
    5.54772909720722782367e+03,
    1.90311919338810798763e+03,
    -1.35201191444307340817e+02,
];

// for x in [2, 2.8571]
const Q1R2: [f64; 6] = [
    -1.78381727510958865572e-07,
    -1.02517042607985553460e-01,
    -2.75220568278187460720e+00,
    -1.96636162643703720221e+01,
    -4.23253133372830490089e+01,
    -2.13719211703704061733e+01,
];
const Q1S2: [f64; 6] = [
    2.95333629060523854548e+01,
    2.52981549982190529136e+02,
    7.57502834868645436472e+02,
    7.39393205320467245656e+02,
    1.55949003336666123687e+02,
    -4.95949898822628210127e+00,
];

fn qone(x: f64) -> f64 {
    debug_assert!(x >= 2.0);
    let (p, q) = if x >= 8.0 {
        (&Q1R8, &Q1S8)
    } else if x >= 4.5454 {
        (&Q1R5, &Q1S5)
    } else if x >= 2.8571 {
        (&Q1R3, &Q1S3)
    } else {
        (&Q1R2, &Q1S2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * (q[4] + z * q[5])))));
    (0.375 + r / s) / x
}

#[cfg(test)]
mod tests {
    use super::bessel_j1;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn special_cases() {
        assert!(bessel_j1(f64::NAN).is_nan());
        assert_eq!(bessel_j1(f64::NEG_INFINITY), 0.0);
        assert_eq!(bessel_j1(f64::INFINITY), 0.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn reference_values() {
        // mpmath, 25 significant digits: besselj(1, x)
        close(bessel_j1(1.0), 0.4400505857449335159596822, 1e-16);
        close(bessel_j1(2.0), 0.5767248077568733872024482, 1e-15);
        close(bessel_j1(5.0), -0.3275791375914652220377343, 1e-16);
        close(bessel_j1(123.0), 0.02156735149890660940086328, 1e-17);
        close(bessel_j1(1e-9), 5.000000000000000310782957e-10, 1e-25);
        close(bessel_j1(3.5), 0.1373775273623271857161319, 2e-16);
        close(bessel_j1(7.0), -0.004682823482345832699113806, 2e-16);
    }

    #[test]
    fn odd_symmetry() {
        for x in [0.3, 1.7, 2.4, 6.9, 42.0] {
            assert_eq!(bessel_j1(-x), -bessel_j1(x));
        }
    }

    #[test]
    fn first_zero() {
        // first positive zero of J1 (Mathematica: BesselJZero[1, 1])
        let z = 3.8317059702075123156144358863082;
        close(bessel_j1(z), 0.0, 1e-15);
    }
}
