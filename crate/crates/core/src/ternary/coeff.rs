use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::GaussianRational;

/// Exact coefficient arithmetic for the window engine. Operations return
/// `None` when the representation cannot hold the result; the caller then
/// redoes the work with [`GaussianRational`].
pub(crate) trait Coeff: Clone {
    fn from_exact(g: &GaussianRational) -> Option<Self>;
    fn to_exact(&self) -> GaussianRational;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl Coeff for GaussianRational {
    fn from_exact(g: &GaussianRational) -> Option<Self> {
        Some(g.clone())
    }

    fn to_exact(&self) -> GaussianRational {
        self.clone()
    }

    fn one() -> Self {
        GaussianRational::from_integer(1)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// `(re + im·i) / den` with `den > 0`, all in `i128`. Common factors are
/// only cancelled once a component grows past `REDUCE_ABOVE`, so the
/// representation is not canonical.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SmallGaussian {
    re: i128,
    im: i128,
    den: i128,
}

const REDUCE_ABOVE: i128 = 1 << 48;

impl SmallGaussian {
    fn reduced(re: i128, im: i128, den: i128) -> Option<Self> {
        // keeps every later `abs` and negation in range
        if [re, im, den].contains(&i128::MIN) || den == 0 {
            return None;
        }
        let sign = den.signum();
        if [re, im, den].iter().all(|x| x.abs() <= REDUCE_ABOVE) {
            return Some(SmallGaussian {
                re: sign * re,
                im: sign * im,
                den: sign * den,
            });
        }
        let g = re.gcd(&im).gcd(&den);
        Some(SmallGaussian {
            re: sign * re / g,
            im: sign * im / g,
            den: sign * den / g,
        })
    }
}

fn to_i128(x: &BigInt) -> Option<i128> {
    x.to_i128()
}

impl Coeff for SmallGaussian {
    fn from_exact(g: &GaussianRational) -> Option<Self> {
        let (re, im) = (g.re(), g.im());
        let den = re.denom().lcm(im.denom());
        let scale = |r: &BigRational| r.numer() * (&den / r.denom());
        SmallGaussian::reduced(to_i128(&scale(re))?, to_i128(&scale(im))?, to_i128(&den)?)
    }

    fn to_exact(&self) -> GaussianRational {
        let part = |n: i128| BigRational::new(BigInt::from(n), BigInt::from(self.den));
        GaussianRational::new(part(self.re), part(self.im))
    }

    fn one() -> Self {
        SmallGaussian {
            re: 1,
            im: 0,
            den: 1,
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn add(&self, o: &Self) -> Option<Self> {
        let (a, b) = if self.den == o.den {
            (1, 1)
        } else {
            (o.den, self.den)
        };
        let re = self.re.checked_mul(a)?.checked_add(o.re.checked_mul(b)?)?;
        let im = self.im.checked_mul(a)?.checked_add(o.im.checked_mul(b)?)?;
        SmallGaussian::reduced(re, im, self.den.checked_mul(a)?)
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        let re = self
            .re
            .checked_mul(o.re)?
            .checked_sub(self.im.checked_mul(o.im)?)?;
        let im = self
            .re
            .checked_mul(o.im)?
            .checked_add(self.im.checked_mul(o.re)?)?;
        SmallGaussian::reduced(re, im, self.den.checked_mul(o.den)?)
    }

    fn neg(&self) -> Option<Self> {
        Some(SmallGaussian {
            re: -self.re,
            im: -self.im,
            den: self.den,
        })
    }
}
