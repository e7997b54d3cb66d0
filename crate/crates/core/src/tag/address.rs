use std::fmt;
use std::str::FromStr;

use super::error::TagError;

/// A Gorn address: the path of 1-based child indices leading from the root
/// to a node. The empty path is the root itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GornAddress(Vec<u32>);

impl GornAddress {
    pub const fn root() -> Self {
        GornAddress(Vec::new())
    }

    /// Builds an address from child indices; every index must be at least 1.
    pub fn new(path: impl Into<Vec<u32>>) -> Result<Self, TagError> {
        let path = path.into();
        if path.contains(&0) {
            return Err(TagError::InvalidAddress(format!(
                "child index 0 in {:?} (indices are 1-based)",
                path
            )));
        }
        Ok(GornAddress(path))
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The address of the `index`-th child (1-based) of this node.
    pub fn child(&self, index: u32) -> Self {
        assert!(index >= 1, "Gorn child indices are 1-based");
        let mut path = self.0.clone();
        path.push(index);
        GornAddress(path)
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.0.split_last()?;
        Some(GornAddress(init.to_vec()))
    }
}

impl fmt::Display for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", idx)?;
        }
        Ok(())
    }
}

impl FromStr for GornAddress {
    type Err = TagError;

    /// Accepts `ε` (or `0`) for the root and dotted 1-based paths like `1.3.2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "ε" || s == "0" {
            return Ok(GornAddress::root());
        }
        let path = s
            .split('.')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| TagError::InvalidAddress(format!("malformed address `{}`", s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GornAddress::new(path)
    }
}
