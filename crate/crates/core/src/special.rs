//! Special functions backing the significance tests: log-gamma, the
//! regularized incomplete beta function, and the F-distribution survival
//! function built on it.
//!
//! The incomplete beta uses the classic continued-fraction evaluation
//! (modified Lentz) with the symmetry switch at `x = (a+1)/(a+b+2)`, which
//! keeps the fraction in its fast-converging region; accuracy is driven to
//! ~1e-14 termination so results hold well inside 1e-10 for the degrees of
//! freedom that article-scale corpora produce.

/// Natural log of the gamma function for `x > 0` (Lanczos approximation,
/// |error| < 2e-10 relative).
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma domain is x > 0");
    const COF: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * libm::log(tmp);
    let mut y = x;
    let mut ser = 1.000_000_000_190_015;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    -tmp + libm::log(2.506_628_274_631_000_5 * ser / x)
}

/// Continued fraction for the incomplete beta (modified Lentz iteration).
/// Valid in the region `x < (a+1)/(a+b+2)` where it converges rapidly.
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAXIT: usize = 300;
    const EPS: f64 = 1.0e-15;
    const FPMIN: f64 = 1.0e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAXIT {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        // even step
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        // odd step
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`.
/// Arguments outside `[0, 1]` clamp to the saturation values 0 and 1.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0, "reg_inc_beta needs positive shape parameters");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
        + a * libm::log(x)
        + b * libm::log(1.0 - x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Survival function of the F distribution: `P(F_{d1,d2} > f)`, computed as
/// `I_{d2/(d2 + d1·f)}(d2/2, d1/2)`. `f = 0` gives 1; `f = +∞` gives 0.
pub fn f_survival(f: f64, d1: f64, d2: f64) -> f64 {
    debug_assert!(d1 > 0.0 && d2 > 0.0, "degrees of freedom must be positive");
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        // Γ(1) = Γ(2) = 1, Γ(5) = 24, Γ(1/2) = √π
        assert!(ln_gamma(1.0).abs() < 1e-12);
        assert!(ln_gamma(2.0).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 3.178_053_830_347_945_8).abs() < 1e-12);
        assert!((ln_gamma(0.5) - 0.572_364_942_924_700_1).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_reference_values() {
        // Values frozen from a high-precision computation.
        let cases = [
            (2.0, 0.5, 0.4, 0.070_483_996_910_22),
            (0.5, 0.5, 0.5, 0.5),
            (2.0, 3.0, 0.25, 0.261_718_75),
            (2.0, 3.0, 0.75, 0.949_218_75),
            (5.0, 5.0, 0.1, 0.000_890_92),
            (5.0, 5.0, 0.9, 0.999_109_08),
            (30.0, 20.0, 0.5, 0.076_203_885_980_739),
            (0.5, 8.0, 0.01, 0.307_007_850_294_19),
            (8.0, 0.5, 0.99, 0.692_992_149_705_81),
        ];
        for (a, b, x, expect) in cases {
            let got = reg_inc_beta(a, b, x);
            assert!(
                (got - expect).abs() < 1e-8,
                "I_{x}({a},{b}) = {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn incomplete_beta_saturates_and_is_monotone() {
        assert_eq!(reg_inc_beta(2.0, 3.0, 0.0), 0.0);
        assert_eq!(reg_inc_beta(2.0, 3.0, 1.0), 1.0);
        let mut prev = 0.0;
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let v = reg_inc_beta(3.5, 1.25, x);
            assert!(v >= prev, "I_x must be nondecreasing in x");
            prev = v;
        }
    }

    #[test]
    fn incomplete_beta_symmetry() {
        for (a, b) in [(0.5, 0.5), (1.0, 4.0), (2.0, 0.5), (10.0, 10.0), (30.0, 2.5)] {
            for i in 1..50 {
                let x = i as f64 / 50.0;
                let s = reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1.0 - x);
                assert!((s - 1.0).abs() < 1e-10, "symmetry failed at a={a} b={b} x={x}: {s}");
            }
        }
    }

    #[test]
    fn f_survival_reference() {
        // Survivor of F(2, 27) at 3.5, frozen from a high-precision oracle.
        assert!((f_survival(3.5, 2.0, 27.0) - 0.044_508_753_946_4).abs() < 1e-8);
        assert_eq!(f_survival(0.0, 3.0, 10.0), 1.0);
        assert_eq!(f_survival(f64::INFINITY, 3.0, 10.0), 0.0);
    }
}
