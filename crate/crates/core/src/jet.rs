// Truncated Taylor expansions in two variables, used to get exact first,
// second and third derivatives of the built-in norms from one formula.

use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

/// Arithmetic needed by the norm formulas.
pub(crate) trait Field:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    /// `self^p` for a real exponent; `self` must be positive.
    fn powf(self, p: f64) -> Self;
    fn scale(self, s: f64) -> Self;

    fn sqrt(self) -> Self {
        self.powf(0.5)
    }
}

impl Field for f64 {
    #[inline]
    fn constant(c: f64) -> Self {
        c
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        math::pow(self, p)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn sqrt(self) -> Self {
        math::sqrt(self)
    }
}

/// Value and gradient.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet1 {
    pub v: f64,
    pub d: [f64; 2],
}

impl Jet1 {
    pub fn var(x: f64, i: usize) -> Self {
        let mut d = [0.0; 2];
        d[i] = 1.0;
        Jet1 { v: x, d }
    }
}

impl Add for Jet1 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Jet1 {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
        }
    }
}

impl Sub for Jet1 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Jet1 {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1]],
        }
    }
}

impl Neg for Jet1 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet1 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Jet1 {
            v: self.v * o.v,
            d: [
                self.d[0] * o.v + self.v * o.d[0],
                self.d[1] * o.v + self.v * o.d[1],
            ],
        }
    }
}

impl Field for Jet1 {
    fn constant(c: f64) -> Self {
        Jet1 { v: c, d: [0.0; 2] }
    }
    fn powf(self, p: f64) -> Self {
        let f0 = math::pow(self.v, p);
        let f1 = p * f0 / self.v;
        Jet1 {
            v: f0,
            d: [f1 * self.d[0], f1 * self.d[1]],
        }
    }
    fn scale(self, s: f64) -> Self {
        Jet1 {
            v: self.v * s,
            d: [self.d[0] * s, self.d[1] * s],
        }
    }
}

/// Value, gradient and Hessian.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet2 {
    pub v: f64,
    pub d1: [f64; 2],
    pub d2: [[f64; 2]; 2],
}

impl Jet2 {
    pub fn var(x: f64, i: usize) -> Self {
        let mut d1 = [0.0; 2];
        d1[i] = 1.0;
        Jet2 {
            v: x,
            d1,
            d2: [[0.0; 2]; 2],
        }
    }

    fn compose(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut r = Jet2::constant(f0);
        for i in 0..2 {
            r.d1[i] = f1 * self.d1[i];
            for j in 0..2 {
                r.d2[i][j] = f2 * self.d1[i] * self.d1[j] + f1 * self.d2[i][j];
            }
        }
        r
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        r.v += o.v;
        for i in 0..2 {
            r.d1[i] += o.d1[i];
            for j in 0..2 {
                r.d2[i][j] += o.d2[i][j];
            }
        }
        r
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = Jet2::constant(self.v * o.v);
        for i in 0..2 {
            r.d1[i] = self.d1[i] * o.v + self.v * o.d1[i];
            for j in 0..2 {
                r.d2[i][j] = self.d2[i][j] * o.v
                    + self.d1[i] * o.d1[j]
                    + self.d1[j] * o.d1[i]
                    + self.v * o.d2[i][j];
            }
        }
        r
    }
}

impl Field for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2 {
            v: c,
            d1: [0.0; 2],
            d2: [[0.0; 2]; 2],
        }
    }
    fn powf(self, p: f64) -> Self {
        let f0 = math::pow(self.v, p);
        let f1 = p * f0 / self.v;
        let f2 = (p - 1.0) * f1 / self.v;
        self.compose(f0, f1, f2)
    }
    fn scale(self, s: f64) -> Self {
        let mut r = self;
        r.v *= s;
        for i in 0..2 {
            r.d1[i] *= s;
            for j in 0..2 {
                r.d2[i][j] *= s;
            }
        }
        r
    }
}

/// Value and derivatives up to third order.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet3 {
    pub v: f64,
    pub d1: [f64; 2],
    pub d2: [[f64; 2]; 2],
    pub d3: [[[f64; 2]; 2]; 2],
}

impl Jet3 {
    pub fn var(x: f64, i: usize) -> Self {
        let mut r = Jet3::constant(x);
        r.d1[i] = 1.0;
        r
    }

    fn compose(self, f0: f64, f1: f64, f2: f64, f3: f64) -> Self {
        let g = &self;
        let mut r = Jet3::constant(f0);
        for i in 0..2 {
            r.d1[i] = f1 * g.d1[i];
            for j in 0..2 {
                r.d2[i][j] = f2 * g.d1[i] * g.d1[j] + f1 * g.d2[i][j];
                for k in 0..2 {
                    r.d3[i][j][k] = f3 * g.d1[i] * g.d1[j] * g.d1[k]
                        + f2 * (g.d2[i][j] * g.d1[k] + g.d2[i][k] * g.d1[j] + g.d2[j][k] * g.d1[i])
                        + f1 * g.d3[i][j][k];
                }
            }
        }
        r
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        r.v += o.v;
        for i in 0..2 {
            r.d1[i] += o.d1[i];
            for j in 0..2 {
                r.d2[i][j] += o.d2[i][j];
                for k in 0..2 {
                    r.d3[i][j][k] += o.d3[i][j][k];
                }
            }
        }
        r
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (f, g) = (&self, &o);
        let mut r = Jet3::constant(f.v * g.v);
        for i in 0..2 {
            r.d1[i] = f.d1[i] * g.v + f.v * g.d1[i];
            for j in 0..2 {
                r.d2[i][j] =
                    f.d2[i][j] * g.v + f.d1[i] * g.d1[j] + f.d1[j] * g.d1[i] + f.v * g.d2[i][j];
                for k in 0..2 {
                    r.d3[i][j][k] = f.d3[i][j][k] * g.v
                        + f.d2[i][j] * g.d1[k]
                        + f.d2[i][k] * g.d1[j]
                        + f.d2[j][k] * g.d1[i]
                        + f.d1[i] * g.d2[j][k]
                        + f.d1[j] * g.d2[i][k]
                        + f.d1[k] * g.d2[i][j]
                        + f.v * g.d3[i][j][k];
                }
            }
        }
        r
    }
}

impl Field for Jet3 {
    fn constant(c: f64) -> Self {
        Jet3 {
            v: c,
            d1: [0.0; 2],
            d2: [[0.0; 2]; 2],
            d3: [[[0.0; 2]; 2]; 2],
        }
    }
    fn powf(self, p: f64) -> Self {
        let f0 = math::pow(self.v, p);
        let f1 = p * f0 / self.v;
        let f2 = (p - 1.0) * f1 / self.v;
        let f3 = (p - 2.0) * f2 / self.v;
        self.compose(f0, f1, f2, f3)
    }
    fn scale(self, s: f64) -> Self {
        let mut r = self;
        r.v *= s;
        for i in 0..2 {
            r.d1[i] *= s;
            for j in 0..2 {
                r.d2[i][j] *= s;
                for k in 0..2 {
                    r.d3[i][j][k] *= s;
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // f(x, y) = (x^2 + 3xy)^(3/2), derivatives checked against hand expansion
    fn f<T: Field>(x: T, y: T) -> T {
        (x * x + x * y.scale(3.0)).powf(1.5)
    }

    #[test]
    fn jets_agree_with_each_other_and_differences() {
        let (x, y) = (1.3, 0.4);
        let j3 = f(Jet3::var(x, 0), Jet3::var(y, 1));
        let j2 = f(Jet2::var(x, 0), Jet2::var(y, 1));
        let j1 = f(Jet1::var(x, 0), Jet1::var(y, 1));
        assert!((j3.v - f(x, y)).abs() < 1e-14);
        for i in 0..2 {
            assert!((j3.d1[i] - j1.d[i]).abs() < 1e-13);
            for j in 0..2 {
                assert!((j3.d2[i][j] - j2.d2[i][j]).abs() < 1e-13);
            }
        }
        // third derivative d^3/dx^3 by differencing the exact second derivative
        let h = 1e-5;
        let p = f(Jet2::var(x + h, 0), Jet2::var(y, 1)).d2[0][0];
        let m = f(Jet2::var(x - h, 0), Jet2::var(y, 1)).d2[0][0];
        assert!(((p - m) / (2.0 * h) - j3.d3[0][0][0]).abs() < 1e-6);
        let p = f(Jet2::var(x, 0), Jet2::var(y + h, 1)).d2[0][0];
        let m = f(Jet2::var(x, 0), Jet2::var(y - h, 1)).d2[0][0];
        assert!(((p - m) / (2.0 * h) - j3.d3[0][0][1]).abs() < 1e-6);
        assert!((j3.d3[0][0][1] - j3.d3[1][0][0]).abs() < 1e-12);
    }
}
