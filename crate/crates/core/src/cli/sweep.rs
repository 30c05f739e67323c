//! `--sweep name=start:stop:count` parameter grids.

use std::str::FromStr;

use crate::rates::RateParams;

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Sweep {
    pub param: String,
    start: f64,
    stop: f64,
    count: usize,
    log: bool,
}

const REAL: &[&str] = &["p", "a", "z", "q", "r", "nu", "t", "d", "b", "g"];
const INTEGER: &[&str] = &["n", "m", "v"];

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("malformed sweep {s:?}; expected name=start:stop:count or name=logstart:stop:count");
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let name = name.trim();
        if !REAL.contains(&name) && !INTEGER.contains(&name) {
            return Err(format!("unknown sweep parameter {name:?}"));
        }
        let (range, log) = match range.strip_prefix("log") {
            Some(r) => (r, true),
            None => (range, false),
        };
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts[..] else { return Err(bad()) };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        if count == 0 {
            return Err("sweep count must be at least 1".into());
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("sweep bounds must be finite".into());
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err("log sweeps need positive bounds".into());
        }
        let param = if name == "q" { "z".to_string() } else { name.to_string() };
        Ok(Self { param, start, stop, count, log })
    }
}

impl Sweep {
    pub(super) fn values(&self) -> Vec<f64> {
        let (a, b) = if self.log { (self.start.ln(), self.stop.ln()) } else { (self.start, self.stop) };
        (0..self.count)
            .map(|i| {
                let v = if self.count == 1 {
                    a
                } else if i + 1 == self.count {
                    b
                } else {
                    a + (b - a) * i as f64 / (self.count - 1) as f64
                };
                if self.log {
                    // keep the endpoints exact
                    if i == 0 {
                        self.start
                    } else if i + 1 == self.count {
                        self.stop
                    } else {
                        v.exp()
                    }
                } else {
                    v
                }
            })
            .collect()
    }

    /// One parameter set per grid value. `collision` sweeps ν as r = −ν.
    pub(super) fn apply(&self, base: &RateParams, collision: bool) -> Result<Vec<RateParams>, String> {
        if self.param == "nu" && !collision {
            return Err("nu can only be swept for --kind collision".into());
        }
        if self.param == "r" && collision {
            return Err("sweep nu, not r, for --kind collision".into());
        }
        self.values()
            .into_iter()
            .map(|x| {
                let mut p = *base;
                let int = || -> Result<u32, String> {
                    if x != x.round() || x < 0.0 || x > u32::MAX as f64 {
                        Err(format!("{} takes non-negative integers, sweep produced {x}", self.param))
                    } else {
                        Ok(x as u32)
                    }
                };
                match self.param.as_str() {
                    "p" => p.p = x,
                    "a" => p.a = x,
                    "z" => p.z = x,
                    "r" => p.r = x,
                    "nu" => p.r = -x,
                    "t" => p.t = x,
                    "d" => p.d = x,
                    "b" => p.b = x,
                    "g" => p.g = x,
                    "n" => p.n = int()?,
                    "m" => p.m = int()?,
                    "v" => p.v = int()?,
                    other => unreachable!("sweep parameter {other} passed parsing"),
                }
                Ok(p)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear_and_log() {
        let s: Sweep = "z=0:1:5".parse().unwrap();
        assert_eq!(s.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let s: Sweep = "a=log1e-2:1e2:5".parse().unwrap();
        let v = s.values();
        assert_eq!(v[0], 1e-2);
        assert_eq!(v[4], 1e2);
        assert!((v[2] - 1.0).abs() < 1e-15);
        let q: Sweep = "q=1:2:2".parse().unwrap();
        assert_eq!(q.param, "z");
    }

    #[test]
    fn rejects_bad_input() {
        for s in ["z", "zz=0:1:3", "z=0:1", "z=0:1:0", "z=log0:1:3", "z=a:b:c"] {
            assert!(s.parse::<Sweep>().is_err(), "{s}");
        }
        let s: Sweep = "v=0:1:3".parse().unwrap();
        assert!(s.apply(&RateParams::default(), false).is_err());
    }
}
