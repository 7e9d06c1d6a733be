/// Renders a number with at most six significant digits, switching to
/// scientific notation outside `[1e-4, 1e6)` in magnitude. Infinities
/// print as `Inf` / `-Inf`; NaN prints as an empty string.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_range() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(5.33), "5.33");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(16001.0), "16001");
        assert_eq!(format_number(123456.7), "123457");
        assert_eq!(format_number(1.0 / 3.0), "0.333333");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(0.000123456789), "0.000123457");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(format_number(1.5e6), "1.5e+06");
        assert_eq!(format_number(999999.7), "1e+06");
        assert_eq!(format_number(1e-5), "1e-05");
        assert_eq!(format_number(-2.345678e-7), "-2.34568e-07");
        assert_eq!(format_number(1e300), "1e+300");
    }

    #[test]
    fn special_values() {
        assert_eq!(format_number(f64::INFINITY), "Inf");
        assert_eq!(format_number(f64::NEG_INFINITY), "-Inf");
        assert_eq!(format_number(f64::NAN), "");
        assert_eq!(format_number(-0.0), "0");
    }
}
