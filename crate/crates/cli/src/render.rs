//! Human-readable rendering.

use num_complex::Complex64;

use groupring::CMatrix;

const DIGITS: usize = 12;

/// Snaps parts below this (relative to 1) to zero in pretty output.
const SNAP: f64 = 1e-12;

/// A real number with 12 significant digits, trailing zeros trimmed.
pub fn real(x: f64) -> String {
    if x.abs() < SNAP {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (DIGITS as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn complex(z: Complex64) -> String {
    let re_zero = z.re.abs() < SNAP;
    let im_zero = z.im.abs() < SNAP;
    match (re_zero, im_zero) {
        (_, true) => real(z.re),
        (true, false) => format!("{}i", imag_coeff(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", real(z.re), sign, imag_coeff(z.im.abs()))
        }
    }
}

fn imag_coeff(y: f64) -> String {
    match real(y).as_str() {
        "1" => String::new(),
        "-1" => "-".into(),
        s => s.to_string(),
    }
}

/// Column-aligned table with optional row and column headers.
pub fn grid(col_headers: Option<&[String]>, rows: &[(String, Vec<String>)]) -> String {
    let ncols = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let head_w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let mut widths = vec![0; ncols];
    if let Some(h) = col_headers {
        for (w, s) in widths.iter_mut().zip(h) {
            *w = (*w).max(s.chars().count());
        }
    }
    for (_, cells) in rows {
        for (w, s) in widths.iter_mut().zip(cells) {
            *w = (*w).max(s.chars().count());
        }
    }
    let pad = |s: &str, w: usize| format!("{}{}", " ".repeat(w - s.chars().count()), s);
    let mut out = String::new();
    let line = |label: &str, cells: &[String]| {
        let mut l = String::new();
        if head_w > 0 {
            l.push_str(&pad(label, head_w));
            l.push_str(" |");
        }
        for (c, w) in cells.iter().zip(&widths) {
            l.push(' ');
            l.push_str(&pad(c, *w));
        }
        l.push('\n');
        l
    };
    if let Some(h) = col_headers {
        out.push_str(&line("", h));
    }
    for (label, cells) in rows {
        out.push_str(&line(label, cells));
    }
    out
}

pub fn matrix(m: &CMatrix) -> String {
    let rows: Vec<(String, Vec<String>)> = m
        .row_iter()
        .map(|r| (String::new(), r.iter().map(|&z| complex(z)).collect()))
        .collect();
    grid(None, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real(1.0), "1");
        assert_eq!(real(-0.5), "-0.5");
        assert_eq!(real(1e-17), "0");
        assert_eq!(real(-1e-15), "0");
        assert_eq!(real(3f64.sqrt() / 2.0), "0.866025403784");
        assert_eq!(real(0.6180339887498949), "0.61803398875");
        assert_eq!(real(123456.789), "123456.789");
    }

    #[test]
    fn complexes() {
        assert_eq!(complex(Complex64::new(-0.5, 3f64.sqrt() / 2.0)), "-0.5+0.866025403784i");
        assert_eq!(complex(Complex64::new(0.0, -1.0)), "-i");
        assert_eq!(complex(Complex64::new(0.0, 1.0)), "i");
        assert_eq!(complex(Complex64::new(2.0, 1e-16)), "2");
        assert_eq!(complex(Complex64::new(1.0, -2.0)), "1-2i");
    }

    #[test]
    fn grid_alignment() {
        let rows = vec![("x".to_string(), vec!["1".to_string(), "-10".to_string()])];
        let h = vec!["a".to_string(), "b".to_string()];
        assert_eq!(grid(Some(&h), &rows), "  | a   b\nx | 1 -10\n");
    }
}
