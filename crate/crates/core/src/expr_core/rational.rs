use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number; always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` with an optional sign. Decimal points and exponents are rejected.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let parse_int = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse::<BigInt>().ok()
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return None;
            }
            d
        }
        None => BigInt::one(),
    };
    Some(Rational::new(n, d))
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| {
        num_integer::Integer::lcm(&acc, r.denom())
    })
}
