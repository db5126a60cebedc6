/// Unevaluated sum `hi + lo` (double-double), used where cancellation in
/// long sums of large terms would otherwise lose most digits.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd { hi: x, lo: 0.0 })
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        Dd::two_sum(p, e + self.lo * x)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul_f64(q1).neg());
        let q2 = r.hi / o.hi;
        let r2 = r.add(o.mul_f64(q2).neg());
        let q3 = r2.hi / o.hi;
        Dd::two_sum(q1, q2).add_f64(q3)
    }

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        let big = Dd::ZERO.add_f64(1e16).add_f64(1.0).add_f64(-1e16);
        assert_eq!(big.to_f64(), 1.0);
        let p = Dd::ZERO.add_f64(1.0 + 2f64.powi(-30)).mul_f64(1.0 - 2f64.powi(-30));
        assert_eq!(p.hi, 1.0);
        assert_eq!(p.lo, -(2f64.powi(-60)));
        let third = Dd::from(1.0).div(Dd::from(3.0));
        assert!((third.mul_f64(3.0).add_f64(-1.0)).to_f64().abs() < 1e-31);
    }
}
