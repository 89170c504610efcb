//! Exact rational numbers and their text renderings.

use num_traits::{ToPrimitive, Zero};

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::Ratio<i128>;

pub fn int(v: impl Into<i128>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn frac(numer: impl Into<i128>, denom: impl Into<i128>) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Converts a count to a rational. Panics only for counts beyond `i128`.
pub fn from_count(v: u64) -> Rational {
    Rational::from_integer(i128::from(v))
}

/// Renders as `p/q`, or just `p` for integers.
pub fn exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal with 15 significant digits, trailing zeros trimmed.
pub fn decimal(x: &Rational) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let v = x.to_f64().unwrap_or(f64::NAN);
    let magnitude = v.abs().log10().floor() as i32;
    let places = (14 - magnitude).max(0) as usize;
    let s = format!("{v:.places$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `40000.5`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: i128 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().ok()? };
        let scale = 10i128.checked_pow(fraction.len() as u32)?;
        let tail: i128 = fraction.parse().ok()?;
        let magnitude = Rational::new(whole.abs() * scale + tail, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    text.parse::<i128>().ok().map(Rational::from_integer)
}
