use std::fmt;
use std::str::FromStr;

/// A swept axis written `start:stop:count[:log|:lin]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
            log: false,
        }
    }

    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            log: false,
        }
    }

    pub fn logarithmic(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            log: true,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                // pin the endpoints so they print exactly as given
                if i == self.count - 1 {
                    return self.stop;
                }
                let s = i as f64 / last;
                if self.log {
                    self.start * (self.stop / self.start).powf(s)
                } else {
                    self.start + (self.stop - self.start) * s
                }
            })
            .collect()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("range `{s}` must look like start:stop:count[:log]"));
        }
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| format!("`{x}` in range `{s}` is not a number"))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("count `{}` in range `{s}` is not a positive integer", parts[2]))?;
        let log = match parts.get(3) {
            None | Some(&"lin") => false,
            Some(&"log") => true,
            Some(other) => return Err(format!("unknown spacing `{other}` in range `{s}` (use lin or log)")),
        };
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("range `{s}` has non-finite bounds"));
        }
        if count == 0 {
            return Err(format!("range `{s}` has no points"));
        }
        if count == 1 && start != stop {
            return Err(format!("range `{s}` needs at least 2 points to span distinct bounds"));
        }
        if count >= 2 && start == stop {
            return Err(format!(
                "range `{s}` has equal bounds; use a count of 1 for a single point"
            ));
        }
        if log && (start <= 0.0 || stop <= 0.0) {
            return Err(format!("log range `{s}` needs positive bounds"));
        }
        Ok(Self {
            start,
            stop,
            count,
            log,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_linear_and_log() {
        let a: Axis = "0:10:5".parse().unwrap();
        assert_eq!(a.values(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let b: Axis = "1:100:3:log".parse().unwrap();
        let v = b.values();
        assert!((v[1] - 10.0).abs() < 1e-12 && v[2] == 100.0);
        assert_eq!("2:2:1".parse::<Axis>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "1:2",
            "1:2:0",
            "1:2:1",
            "a:2:3",
            "0:1:3:log",
            "1:2:3:cubic",
            "1:1:4",
            "1:2:3:log:x",
        ] {
            assert!(s.parse::<Axis>().is_err(), "{s}");
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(start in 0.01f64..10.0, span in 0.01f64..10.0, count in 2usize..50, log: bool) {
            let a = Axis { start, stop: start + span, count, log };
            let b: Axis = a.to_string().parse().unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn values_are_monotone_and_end_exact(start in 0.01f64..10.0, span in 0.01f64..10.0, count in 2usize..50, log: bool) {
            let a = Axis { start, stop: start + span, count, log };
            let v = a.values();
            prop_assert_eq!(v.len(), count);
            prop_assert_eq!(v[0], start);
            prop_assert_eq!(v[count - 1], start + span);
            prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
