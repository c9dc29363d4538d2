use crate::error::{Error, Result};

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Principal branch of the Lambert W function, `w e^w = z`.
pub fn lambert_w(z: f64) -> Result<f64> {
    if z.is_nan() || z < -INV_E - 1e-15 {
        return Err(Error::Domain(format!("lambert_w({z}) below -1/e")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z <= -INV_E {
        return Ok(-1.0);
    }
    let mut w = if z < -0.25 {
        // series around the branch point
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if z < 3.0 {
        (1.0 + z).ln() * 0.75
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(z: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < z {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn known_values() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
        let omega = lambert_w(1.0).unwrap();
        assert!((omega - 0.567_143_290_409_783_8).abs() < 1e-14);
        assert!((omega - bisect(1.0)).abs() < 1e-12);
    }

    #[test]
    fn inverse_relation_across_range() {
        for &z in &[-0.36, -0.3, -0.1, 1e-6, 0.5, 2.0, 10.0, 1e3, 1e8] {
            let w = lambert_w(z).unwrap();
            let rel = (w * w.exp() - z).abs() / z.abs();
            assert!(rel < 1e-13, "z={z} rel={rel}");
        }
        assert!(lambert_w(-1.0).is_err());
    }
}
