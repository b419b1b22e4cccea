//! Locale-independent number formatting shared by the CSV writers.

/// `x` with 17 significant digits and trailing zeros removed: `0.5`, `1`,
/// `0.10000000000000001`, `1.2345678901234567e-7`.
pub fn number(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exponent) {
        let point = exponent + 1;
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
        } else {
            format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exponent}")
        } else {
            format!("{sign}{head}.{tail}e{exponent}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::number;

    #[test]
    fn examples() {
        assert_eq!(number(1.0), "1");
        assert_eq!(number(0.5), "0.5");
        assert_eq!(number(-2.25), "-2.25");
        assert_eq!(number(0.1), "0.10000000000000001");
        assert_eq!(number(1234.0), "1234");
        assert_eq!(number(1e20), "1e20");
        assert_eq!(number(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(number(0.000_25), "0.00025000000000000001");
        assert_eq!(number(0.0), "0");
    }

    #[test]
    fn round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -1e-300, 123_456.789] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
    }
}
