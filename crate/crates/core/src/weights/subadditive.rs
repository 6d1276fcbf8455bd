use crate::error::{Error, Result};

/// Default tabulation limit for [`IntegerSubadditive`].
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 20;

/// Number of 1-bits of `m`; the least number of powers of two summing to `m`.
pub fn popcount_v(m: u64) -> u32 {
    m.count_ones()
}

#[derive(Debug, Clone, PartialEq)]
enum Rule {
    Popcount,
    Table(Vec<f64>),
}

/// A real function on `{0, 1, ..., limit}` with `v(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerSubadditive {
    rule: Rule,
    limit: u64,
}

impl IntegerSubadditive {
    /// Binary digit count tabulated on `0..=limit`.
    pub fn popcount(limit: u64) -> Self {
        Self {
            rule: Rule::Popcount,
            limit,
        }
    }

    /// Explicit values `v(0), v(1), ...`. Only `v(0) = 0` and finiteness are
    /// enforced here; subadditivity is checked by [`Self::first_violation`].
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            None => return Err(Error::Domain("empty table".into())),
            Some(v0) if *v0 != 0.0 => {
                return Err(Error::Domain(format!("v(0) must be 0, got {v0}")))
            }
            _ => {}
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite table value {bad}")));
        }
        let limit = values.len() as u64 - 1;
        Ok(Self {
            rule: Rule::Table(values),
            limit,
        })
    }

    pub fn zero(limit: u64) -> Self {
        Self {
            rule: Rule::Table(vec![0.0; limit as usize + 1]),
            limit,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn value(&self, m: u64) -> Result<f64> {
        if m > self.limit {
            return Err(Error::Range(format!(
                "v({m}) requested beyond tabulated limit {}",
                self.limit
            )));
        }
        Ok(match &self.rule {
            Rule::Popcount => popcount_v(m) as f64,
            Rule::Table(vals) => vals[m as usize],
        })
    }

    /// Exhaustive check of `v(m+n) ≤ v(m) + v(n)` for `m + n ≤ limit`.
    /// Returns the first violating pair, if any.
    pub fn first_violation(&self) -> Option<(u64, u64)> {
        for m in 0..=self.limit {
            for n in m..=self.limit - m {
                let (a, b, c) = (
                    self.value(m + n).ok()?,
                    self.value(m).ok()?,
                    self.value(n).ok()?,
                );
                if a > b + c {
                    return Some((m, n));
                }
            }
        }
        None
    }
}

/// The continuous extension of `v` that is linear on each `[m, m+1]`:
/// `v(m + r) = (1 - r) v(m) + r v(m + 1)`.
pub fn extend_piecewise_linear(v: &IntegerSubadditive, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("extension is defined on x ≥ 0, got {x}")));
    }
    let m_f = x.floor();
    if m_f > v.limit() as f64 {
        return Err(Error::Range(format!("x = {x} beyond tabulated limit {}", v.limit())));
    }
    let m = m_f as u64;
    let r = x - m_f;
    if r == 0.0 {
        return v.value(m);
    }
    Ok((1.0 - r) * v.value(m)? + r * v.value(m + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn popcount_examples() {
        assert_eq!(popcount_v(0), 0);
        assert_eq!(popcount_v(13), 3);
        for k in 0..64 {
            assert_eq!(popcount_v(1u64 << k), 1);
        }
    }

    #[test]
    fn popcount_is_minimal_power_of_two_decomposition() {
        // greedy-free oracle: fewest powers of two summing to m, by DP
        let n = 512usize;
        let mut best = vec![u32::MAX; n + 1];
        best[0] = 0;
        for m in 1..=n {
            let mut p = 1;
            while p <= m {
                best[m] = best[m].min(best[m - p] + 1);
                p <<= 1;
            }
        }
        for (m, b) in best.iter().enumerate() {
            assert_eq!(popcount_v(m as u64), *b, "m = {m}");
        }
    }

    #[test]
    fn extension_examples() {
        let v = IntegerSubadditive::popcount(DEFAULT_TABLE_LIMIT);
        assert_eq!(extend_piecewise_linear(&v, 5.0).unwrap(), 2.0);
        assert_eq!(extend_piecewise_linear(&v, 1.5).unwrap(), 1.0);
        assert_eq!(extend_piecewise_linear(&v, 2.25).unwrap(), 1.25);
    }

    #[test]
    fn extension_range_and_domain_errors() {
        let v = IntegerSubadditive::popcount(16);
        assert_eq!(extend_piecewise_linear(&v, 16.0).unwrap(), 1.0);
        assert!(matches!(extend_piecewise_linear(&v, 16.5), Err(Error::Range(_))));
        assert!(matches!(extend_piecewise_linear(&v, 17.0), Err(Error::Range(_))));
        assert!(matches!(extend_piecewise_linear(&v, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn table_validation() {
        assert!(IntegerSubadditive::from_values(vec![1.0, 2.0]).is_err());
        assert!(IntegerSubadditive::from_values(vec![]).is_err());
        let t = IntegerSubadditive::from_values(vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(t.first_violation(), Some((1, 1)));
        assert_eq!(IntegerSubadditive::popcount(256).first_violation(), None);
    }
}
