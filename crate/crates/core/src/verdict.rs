use std::fmt;

use serde::{Deserialize, Serialize};

/// A single named value inside a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Datum {
    Element(Vec<u32>),
    Degree(String),
    Index(usize),
    Elements(Vec<Vec<u32>>),
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Element(t) => write_tuple(f, t),
            Datum::Degree(s) => f.write_str(s),
            Datum::Index(i) => write!(f, "{i}"),
            Datum::Elements(ts) => {
                f.write_str("{")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write_tuple(f, t)?;
                }
                f.write_str("}")
            }
        }
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, t: &[u32]) -> fmt::Result {
    f.write_str("(")?;
    for (i, v) in t.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    if t.len() == 1 {
        f.write_str(",")?;
    }
    f.write_str(")")
}

/// The violated law together with the lexicographically first instance that breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub law: String,
    pub values: Vec<(String, Datum)>,
}

impl Witness {
    pub fn new(law: impl Into<String>) -> Self {
        Witness { law: law.into(), values: Vec::new() }
    }

    pub fn with(mut self, name: impl Into<String>, value: Datum) -> Self {
        self.values.push((name.into(), value));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Datum> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        if !self.values.is_empty() {
            f.write_str(" at ")?;
            for (i, (name, value)) in self.values.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{name}={value}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    /// Sequences two checks: the first failure wins.
    pub fn and_then(self, next: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => next(),
            fail => fail,
        }
    }
}

impl From<Option<Witness>> for Verdict {
    fn from(w: Option<Witness>) -> Self {
        match w {
            None => Verdict::Pass,
            Some(w) => Verdict::Fail(w),
        }
    }
}

/// Cap on the number of primitive checks an exhaustive scan may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_enum: u64,
}

impl Budget {
    pub const DEFAULT_MAX_ENUM: u64 = 1_000_000;

    pub fn new(max_enum: u64) -> Self {
        Budget { max_enum }
    }

    pub fn unlimited() -> Self {
        Budget { max_enum: u64::MAX }
    }

    pub fn charge(&self, needed: u128) -> crate::Result<()> {
        if needed > self.max_enum as u128 {
            Err(crate::Error::Budget { needed, limit: self.max_enum })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_MAX_ENUM)
    }
}
