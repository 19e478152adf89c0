use crate::syntax::{COEFFS, MAX_LEVEL};

use super::CodecError;

pub const MAX_QP: u8 = 51;

/// Quantizer with step `2^((qp - 4) / 6)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantParams {
    qp: u8,
    qstep: f64,
}

impl QuantParams {
    pub fn new(qp: u8) -> Result<Self, CodecError> {
        if qp > MAX_QP {
            return Err(CodecError::Qp(qp));
        }
        Ok(QuantParams { qp, qstep: 2f64.powf((qp as f64 - 4.0) / 6.0) })
    }

    pub fn qp(&self) -> u8 {
        self.qp
    }

    pub fn qstep(&self) -> f64 {
        self.qstep
    }
}

/// Half-away-from-zero rounding of `coeff / qstep`.
pub fn quantize(coeffs: &[f64; COEFFS], q: &QuantParams) -> Result<[i32; COEFFS], CodecError> {
    let mut out = [0; COEFFS];
    for (o, &c) in out.iter_mut().zip(coeffs) {
        let level = (c / q.qstep).round();
        if level.abs() > MAX_LEVEL as f64 {
            return Err(CodecError::LevelRange(level));
        }
        *o = level as i32;
    }
    Ok(out)
}

pub fn dequantize(levels: &[i32; COEFFS], q: &QuantParams) -> [f64; COEFFS] {
    let mut out = [0.0; COEFFS];
    for (o, &l) in out.iter_mut().zip(levels) {
        *o = l as f64 * q.qstep;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn step_table() {
        assert_eq!(QuantParams::new(4).unwrap().qstep(), 1.0);
        assert!((QuantParams::new(10).unwrap().qstep() - 2.0).abs() < 1e-12);
        assert!(QuantParams::new(52).is_err());
        let steps: Vec<f64> = (0..=51).map(|qp| QuantParams::new(qp).unwrap().qstep()).collect();
        assert!(steps.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rounding() {
        let q = QuantParams::new(4).unwrap();
        let mut c = [0.0; COEFFS];
        c[0] = 7.4;
        c[1] = 2.5;
        c[2] = -2.5;
        c[3] = -0.49;
        let l = quantize(&c, &q).unwrap();
        assert_eq!(&l[..5], &[7, 3, -3, 0, 0]);
        for qp in [0, 25, 51] {
            assert_eq!(quantize(&[0.0; COEFFS], &QuantParams::new(qp).unwrap()).unwrap(), [0; COEFFS]);
        }
    }

    #[test]
    fn pathological_level_rejected() {
        let mut c = [0.0; COEFFS];
        c[0] = 1e9;
        assert!(matches!(quantize(&c, &QuantParams::new(4).unwrap()), Err(CodecError::LevelRange(_))));
    }

    proptest! {
        #[test]
        fn error_bounded_by_half_step(xs in proptest::collection::vec(-2040.0f64..2040.0, COEFFS)) {
            let q = QuantParams::new(25).unwrap();
            let mut c = [0.0; COEFFS];
            c.copy_from_slice(&xs);
            let back = dequantize(&quantize(&c, &q).unwrap(), &q);
            for (a, b) in c.iter().zip(back.iter()) {
                prop_assert!((a - b).abs() <= q.qstep() / 2.0 + 1e-9);
            }
        }

        #[test]
        fn sign_symmetric(x in -2040.0f64..2040.0) {
            let q = QuantParams::new(25).unwrap();
            let mut a = [0.0; COEFFS];
            a[0] = x;
            let mut b = [0.0; COEFFS];
            b[0] = -x;
            prop_assert_eq!(quantize(&a, &q).unwrap()[0], -quantize(&b, &q).unwrap()[0]);
        }
    }
}
