//! Grid specifications accepted on the command line.
//!
//! * `v`            a single value
//! * `a:b:n`        n evenly spaced values from a to b
//! * `a:b:geomR`    a, aR, aR², ... up to b
//! * `2^a:2^b`      powers of two with integer exponents a..=b

const GEOMETRIC_SLACK: f64 = 1e-9;
const MAX_POINTS: usize = 100_000;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let grid = match parts.as_slice() {
        [v] => vec![parse_value(v)?],
        [a, b] => {
            let (ea, eb) = (power_of_two(a)?, power_of_two(b)?);
            if ea > eb {
                return Err(format!("empty power-of-two grid '{spec}'"));
            }
            (ea..=eb).map(|k| 2f64.powi(k)).collect()
        }
        [a, b, step] => {
            let (a, b) = (parse_value(a)?, parse_value(b)?);
            if let Some(ratio) = step.strip_prefix("geom") {
                geometric(a, b, parse_value(ratio)?)?
            } else {
                let n: usize = step
                    .parse()
                    .map_err(|_| format!("grid count '{step}' is not a positive integer"))?;
                linear(a, b, n)?
            }
        }
        _ => return Err(format!("cannot parse grid '{spec}'")),
    };
    if grid.len() > MAX_POINTS {
        return Err(format!("grid '{spec}' has more than {MAX_POINTS} points"));
    }
    Ok(grid)
}

/// Integer range `N1:N2:step` (or a single `N`).
pub fn parse_int_range(spec: &str) -> Result<Vec<u64>, String> {
    let parse = |s: &str| -> Result<u64, String> {
        let v = parse_value(s)?;
        if v < 1.0 || v.fract() != 0.0 || v > 1e15 {
            return Err(format!("'{s}' is not a positive integer"));
        }
        Ok(v as u64)
    };
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let (first, last, step) = match parts.as_slice() {
        [n] => {
            let n = parse(n)?;
            (n, n, 1)
        }
        [a, b] => (parse(a)?, parse(b)?, 1),
        [a, b, s] => (parse(a)?, parse(b)?, parse(s)?),
        _ => return Err(format!("cannot parse range '{spec}'")),
    };
    if first > last {
        return Err(format!("empty range '{spec}'"));
    }
    if (last - first) / step >= MAX_POINTS as u64 {
        return Err(format!("range '{spec}' has more than {MAX_POINTS} points"));
    }
    Ok((first..=last).step_by(step as usize).collect())
}

/// A number, also accepting `2^k`.
pub fn parse_value(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = if s.contains('^') {
        2f64.powi(power_of_two(s)?)
    } else {
        s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))?
    };
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

fn power_of_two(s: &str) -> Result<i32, String> {
    let exp = s
        .strip_prefix("2^")
        .ok_or_else(|| format!("'{s}' is not of the form 2^k"))?;
    let k: i32 = exp.parse().map_err(|_| format!("exponent in '{s}' is not an integer"))?;
    if !(-1000..=1000).contains(&k) {
        return Err(format!("exponent in '{s}' is out of range"));
    }
    Ok(k)
}

fn linear(a: f64, b: f64, n: usize) -> Result<Vec<f64>, String> {
    match n {
        0 => Err("grid count must be at least 1".into()),
        1 => Ok(vec![a]),
        _ => {
            let step = (b - a) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect())
        }
    }
}

fn geometric(a: f64, b: f64, ratio: f64) -> Result<Vec<f64>, String> {
    if !(a > 0.0 && ratio > 1.0) {
        return Err("geometric grid needs a > 0 and ratio > 1".into());
    }
    if b < a {
        return Err("geometric grid needs b >= a".into());
    }
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let v = a * ratio.powi(k);
        if v > b * (1.0 + GEOMETRIC_SLACK) || out.len() > MAX_POINTS {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("7.5").unwrap(), vec![7.5]);
        assert_eq!(parse_grid("10:50:5").unwrap(), vec![10.0, 20.0, 30.0, 40.0, 50.0]);
        assert_eq!(parse_grid("50:200:geom2").unwrap(), vec![50.0, 100.0, 200.0]);
        assert_eq!(parse_grid("2^3:2^5").unwrap(), vec![8.0, 16.0, 32.0]);
        assert_eq!(parse_grid("2^10").unwrap(), vec![1024.0]);
    }

    #[test]
    fn geometric_endpoint_survives_rounding() {
        let g = parse_grid("0.1:0.8:geom2").unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn malformed() {
        for bad in ["", "a", "1:2:3:4", "2^5:2^3", "1:2:0", "0:5:geom2", "3:1:geom2", "1:2:geom1", "2^x:2^3"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_int_range("10:20:5").unwrap(), vec![10, 15, 20]);
        assert_eq!(parse_int_range("3").unwrap(), vec![3]);
        assert!(parse_int_range("0:3:1").is_err());
        assert!(parse_int_range("5:3:1").is_err());
        assert!(parse_int_range("1.5:3:1").is_err());
    }
}
