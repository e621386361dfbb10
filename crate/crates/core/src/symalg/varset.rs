use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered, duplicate-free list of real variable names shared by every
/// expression built over one chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) || n == "i" || n == "exp" {
                return Err(Error::Usage(format!("invalid variable name `{n}`")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::DuplicateVariable(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Self(out.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Same layout with one variable renamed (used for Fourier duals).
    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let idx = self.index(from)?;
        let mut names: Vec<String> = self.0.to_vec();
        names[idx] = to.to_string();
        Self::new(&names)
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VarSetMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_reserved() {
        assert!(matches!(VarSet::new(&["p", "p"]), Err(Error::DuplicateVariable(_))));
        assert!(VarSet::new(&["i"]).is_err());
        assert!(VarSet::new(&["exp"]).is_err());
        assert!(VarSet::new(&["2x"]).is_err());
    }

    #[test]
    fn rename_keeps_positions() {
        let v = VarSet::new(&["p", "q"]).unwrap();
        let w = v.rename("p", "eta").unwrap();
        assert_eq!(w.names(), &["eta".to_string(), "q".to_string()]);
        assert!(v.rename("x", "y").is_err());
    }
}
