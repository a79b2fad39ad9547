//! `lo:hi:step` grids and comma lists.

/// Upper bound on the number of points a single range may expand to.
pub const MAX_POINTS: usize = 10_000_000;

/// Parses `lo:hi:step` or a single value.
///
/// The grid is `lo + k*step` for `k = 0, 1, ...` while the point does not pass
/// `hi` by more than half a step, so `hi` is included whenever it lies on the
/// grid up to rounding. `lo > hi` gives an empty grid.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| -> Result<f64, String> {
        let v: f64 = p
            .trim()
            .parse()
            .map_err(|_| format!("'{p}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{p}' is not finite"))
        }
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if step <= 0.0 {
                return Err(format!("step {step} must be positive"));
            }
            if lo > hi {
                return Ok(Vec::new());
            }
            let n = ((hi - lo) / step + 0.5).floor();
            if n >= MAX_POINTS as f64 {
                return Err(format!("range '{s}' has too many points"));
            }
            Ok((0..=n as usize).map(|k| lo + k as f64 * step).collect())
        }
        _ => Err(format!("range '{s}' must be lo:hi:step or a single value")),
    }
}

/// Parses `1,2,3`.
pub fn parse_m_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|p| {
            let m: u32 = p
                .trim()
                .parse()
                .map_err(|_| format!("'{p}' is not a positive integer"))?;
            if m == 0 {
                Err("M must be at least 1".to_string())
            } else {
                Ok(m)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        assert_eq!(parse_range("-0.5:0.5:0.5").unwrap(), vec![-0.5, 0.0, 0.5]);
        assert_eq!(parse_range("0:1:0.25").unwrap().len(), 5);
        assert_eq!(parse_range("0:1:0.3").unwrap().len(), 4);
        // 0.9 + 0.3 lies within half a step of 1.1
        assert_eq!(parse_range("0:1.1:0.3").unwrap().len(), 5);
        assert_eq!(parse_range("1.0").unwrap(), vec![1.0]);
        assert_eq!(parse_range("2:2:0.1").unwrap(), vec![2.0]);
    }

    #[test]
    fn bad_ranges() {
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1:-1").is_err());
        assert!(parse_range("a:1:0.1").is_err());
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1e300:1e-300").is_err());
        assert!(parse_range("1:0:0.1").unwrap().is_empty());
    }

    #[test]
    fn m_lists() {
        assert_eq!(parse_m_list("1,2, 3").unwrap(), vec![1, 2, 3]);
        assert!(parse_m_list("1,0").is_err());
        assert!(parse_m_list("x").is_err());
    }
}
