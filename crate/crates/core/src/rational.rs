use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Q {
    qf(1, 2)
}

/// Parses `"p"` or `"p/q"` with decimal integers.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn sign(neg: bool) -> Q {
    if neg {
        -Q::one()
    } else {
        Q::one()
    }
}

pub fn factorial(k: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

/// Multiplier that turns `xs` into coprime integers with positive first entry.
pub fn primitive_scale<'a>(xs: impl Iterator<Item = &'a Q>) -> Q {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    let mut first: Option<bool> = None;
    let vals: Vec<&Q> = xs.collect();
    for x in &vals {
        if x.is_zero() {
            continue;
        }
        if first.is_none() {
            first = Some(x.is_negative());
        }
        lcm = lcm.lcm(x.denom());
    }
    for x in &vals {
        if x.is_zero() {
            continue;
        }
        let n = x.numer() * (&lcm / x.denom());
        gcd = gcd.gcd(&n);
    }
    if gcd.is_zero() {
        return Q::one();
    }
    let s = Q::new(lcm, gcd);
    if first == Some(true) {
        -s
    } else {
        s
    }
}
