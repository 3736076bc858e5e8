//! Compensated and double-double accumulation helpers.
//!
//! Expectation values of the discretized Hamiltonian involve the stencil
//! cancellation `(-a + 16b - 30c + 16d - e) / 12h^2`, which amplifies plain
//! f64 rounding by roughly `1/h^2`. Evaluating the Rayleigh quotient with
//! error-free transformations keeps the energy reproducible to ~1e-15 even
//! on N = 20001 grids, where naive summation drifts near 1e-9.

/// Unevaluated double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let lo = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        let lo = e + self.lo;
        let (hi, lo) = two_sum(s, lo);
        Dd { hi, lo }
    }

    /// Accumulate the exact product `a * b`.
    #[inline]
    pub fn add_prod(self, a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        self.add(Dd { hi: p, lo: e })
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        Dd {
            hi: p,
            lo: e + self.lo * x,
        }
    }

    #[inline]
    pub fn div(self, other: Dd) -> f64 {
        // one Newton correction on the f64 quotient; ample for a final readout
        let q = self.hi / other.hi;
        let r = self.add(other.mul_f64(-q));
        q + r.value() / other.hi
    }
}

/// Neumaier (improved Kahan) compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
