use std::str::FromStr;

use clap::ValueEnum;

use crate::CliError;

/// How grid points are distributed between the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
    /// Uniform in 1/α; allows an infinite upper end.
    Inverse,
}

/// An α grid: either `min:max:count` or an explicit comma list.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Range { min: f64, max: f64, count: usize },
    List(Vec<f64>),
}

fn parse_alpha_value(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("invalid alpha '{s}'")).and_then(|v| {
            if v.is_nan() {
                Err("alpha cannot be NaN".into())
            } else {
                Ok(v)
            }
        }),
    }
}

impl FromStr for AlphaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.len() {
            1 => s.split(',').map(parse_alpha_value).collect::<Result<Vec<_>, _>>().map(AlphaSpec::List),
            3 => {
                let min = parse_alpha_value(parts[0])?;
                let max = parse_alpha_value(parts[1])?;
                let count: usize = parts[2].trim().parse().map_err(|_| format!("invalid count '{}'", parts[2]))?;
                if count == 0 {
                    return Err("grid count must be at least 1".into());
                }
                if min > max {
                    return Err(format!("grid minimum {min} exceeds maximum {max}"));
                }
                if count == 1 && min != max {
                    return Err("a single-point grid needs min == max".into());
                }
                if count > 1 && min == max {
                    return Err("a multi-point grid needs min < max".into());
                }
                if min.is_infinite() {
                    return Err("grid minimum must be finite".into());
                }
                Ok(AlphaSpec::Range { min, max, count })
            }
            _ => Err(format!("expected min:max:count or a comma list, got '{s}'")),
        }
    }
}

/// A grid point; `endpoint` marks the first and last points of a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub alpha: f64,
    pub endpoint: bool,
}

impl AlphaSpec {
    pub fn points(&self, spacing: Spacing) -> Result<Vec<GridPoint>, CliError> {
        let (min, max, count) = match *self {
            AlphaSpec::List(ref v) => return Ok(v.iter().map(|&alpha| GridPoint { alpha, endpoint: false }).collect()),
            AlphaSpec::Range { min, max, count } => (min, max, count),
        };
        if count == 1 {
            return Ok(vec![GridPoint { alpha: min, endpoint: true }]);
        }
        if max.is_infinite() && spacing != Spacing::Inverse {
            return Err(CliError::Usage("an infinite grid end needs --spacing inverse".into()));
        }
        if spacing != Spacing::Linear && min <= 0.0 {
            return Err(CliError::Usage(format!("{spacing:?} spacing needs a positive minimum")));
        }
        let last = (count - 1) as f64;
        let at = |i: usize| -> f64 {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => min * (max / min).powf(t),
                Spacing::Inverse => 1.0 / (1.0 / min + (1.0 / max - 1.0 / min) * t),
            }
        };
        Ok((0..count)
            .map(|i| {
                // Pin the ends so they match the flags exactly.
                let alpha = match i {
                    0 => min,
                    i if i == count - 1 => max,
                    i => at(i),
                };
                GridPoint { alpha, endpoint: i == 0 || i == count - 1 }
            })
            .collect())
    }
}

/// Quantum numbers: `3`, `0..3` (inclusive) or `1,2,4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumNumbers(pub Vec<u32>);

impl FromStr for QuantumNumbers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid quantum number '{t}'"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            return Ok(QuantumNumbers((a..=b).collect()));
        }
        s.split(',').map(num).collect::<Result<Vec<_>, _>>().map(QuantumNumbers)
    }
}

/// Comma-separated floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Floats(pub Vec<f64>);

impl FromStr for Floats {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number '{t}'")))
            .collect::<Result<Vec<_>, _>>()
            .map(Floats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphas(s: &str, spacing: Spacing) -> Vec<f64> {
        s.parse::<AlphaSpec>().unwrap().points(spacing).unwrap().iter().map(|p| p.alpha).collect()
    }

    #[test]
    fn ranges_and_lists() {
        assert_eq!(alphas("2:2:1", Spacing::Linear), vec![2.0]);
        assert_eq!(alphas("1:3:3", Spacing::Linear), vec![1.0, 2.0, 3.0]);
        let l = alphas("0.1:10:3", Spacing::Log);
        assert!((l[1] - 1.0).abs() < 1e-15);
        assert_eq!(alphas("0.5,inf", Spacing::Linear), vec![0.5, f64::INFINITY]);
        let inv = alphas("1:inf:3", Spacing::Inverse);
        assert_eq!(inv, vec![1.0, 2.0, f64::INFINITY]);
    }

    #[test]
    fn malformed_grids() {
        for bad in ["1:2", "2:1:5", "1:2:1", "1:1:3", "a:2:3", "1:2:0", "inf:inf:1", "x"] {
            assert!(bad.parse::<AlphaSpec>().is_err(), "{bad}");
        }
        assert!("1:inf:3".parse::<AlphaSpec>().unwrap().points(Spacing::Linear).is_err());
        assert!("0:1:3".parse::<AlphaSpec>().unwrap().points(Spacing::Log).is_err());
    }

    #[test]
    fn quantum_numbers() {
        assert_eq!("0..3".parse::<QuantumNumbers>().unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!("1..=2".parse::<QuantumNumbers>().unwrap().0, vec![1, 2]);
        assert_eq!("1,4".parse::<QuantumNumbers>().unwrap().0, vec![1, 4]);
        assert!("3..1".parse::<QuantumNumbers>().is_err());
        assert!("-1".parse::<QuantumNumbers>().is_err());
    }
}
