use std::io::IsTerminal;

use crate::UsageError;

/// Relative guard below which a point counts as the excluded endpoint.
const GUARD: f64 = 1e-12;

/// Parses `start:stop:step` (stop excluded) or a single number.
pub fn parse_range(name: &str, spec: &str) -> Result<Vec<f64>, UsageError> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| UsageError(format!("--{name}: '{s}' is not a finite number")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, s] => {
            let (start, stop, step) = (num(a)?, num(b)?, num(s)?);
            if step == 0.0 || (stop - start) / step <= 0.0 {
                return Err(UsageError(format!(
                    "--{name}: step {step} does not move from {start} towards {stop}"
                )));
            }
            let span = (stop - start) / step;
            if span > 1e7 {
                return Err(UsageError(format!("--{name}: more than 1e7 points")));
            }
            let n = (span - GUARD * span.max(1.0)).ceil().max(1.0) as usize;
            Ok((0..n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(UsageError(format!(
            "--{name}: expected start:stop:step or a number, got '{spec}'"
        ))),
    }
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn color_enabled() -> bool {
    std::env::var_os("BOUSQ_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

pub fn status_label(status: &str, color: bool) -> String {
    if !color {
        return status.to_string();
    }
    let code = match status {
        "PASS" | "COMPLETED" => "32",
        "FAIL" | "BLOWUP" => "31",
        _ => "33",
    };
    format!("\x1b[{code}m{status}\x1b[0m")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_excludes_stop() {
        let r = parse_range("x", "-10:10:0.1").unwrap();
        assert_eq!(r.len(), 200);
        assert_eq!(r[100], 0.0);
        assert_eq!(
            parse_range("x", "0:1:0.25").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75]
        );
        assert_eq!(parse_range("x", "0:0.3:0.1").unwrap().len(), 3);
        assert_eq!(parse_range("t", "2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_range("x", "1:0:-0.5").unwrap(), vec![1.0, 0.5]);
    }

    #[test]
    fn range_errors() {
        for bad in ["0:1:0", "0:1:-1", "a", "0:1", "0:1:nan", "0:1e9:1e-2"] {
            assert!(parse_range("x", bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(0.0), "0.0000000000000000e0");
    }
}
