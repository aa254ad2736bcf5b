use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Address of a node in the tableau.
///
/// The root is the empty path; `p.child(i)` is the `i`th branch below `p`
/// (1-based). Positions double as the namespace for clause variables, so they
/// stay stable across backtracking.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Arc<[u32]>);

impl Position {
    pub fn root() -> Self {
        Position(Arc::from(Vec::new()))
    }

    pub fn from_path(path: &[u32]) -> Self {
        assert!(path.iter().all(|&i| i > 0), "position indices are 1-based");
        Position(Arc::from(path))
    }

    pub fn child(&self, index: u32) -> Self {
        debug_assert!(index > 0);
        let mut path = Vec::with_capacity(self.0.len() + 1);
        path.extend_from_slice(&self.0);
        path.push(index);
        Position(Arc::from(path))
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parent(&self) -> Option<Position> {
        self.0
            .split_last()
            .map(|(_, init)| Position(Arc::from(init)))
    }

    /// True when `self` is a proper prefix of `other`.
    pub fn is_strict_ancestor_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid position `{0}`")]
pub struct InvalidPosition(pub String);

impl FromStr for Position {
    type Err = InvalidPosition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "0" {
            return Ok(Position::root());
        }
        let path = s
            .split('.')
            .map(|part| match part.parse::<u32>() {
                Ok(i) if i > 0 && !part.starts_with('+') => Ok(i),
                _ => Err(InvalidPosition(s.to_owned())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Position(Arc::from(path)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn child_and_parent() {
        let p = Position::root().child(1).child(2);
        assert_eq!(p.to_string(), "1.2");
        assert_eq!(p.depth(), 2);
        assert_eq!(p.parent().unwrap(), Position::root().child(1));
        assert_eq!(Position::root().parent(), None);
    }

    #[test]
    fn ancestry_is_prefix() {
        let a: Position = "1.2".parse().unwrap();
        let b: Position = "1.2.2".parse().unwrap();
        let c: Position = "1.3".parse().unwrap();
        assert!(a.is_strict_ancestor_of(&b));
        assert!(!b.is_strict_ancestor_of(&a));
        assert!(!a.is_strict_ancestor_of(&a));
        assert!(!a.is_strict_ancestor_of(&c));
        assert!(Position::root().is_strict_ancestor_of(&a));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "1", "3.1.4", "12.7"] {
            assert_eq!(s.parse::<Position>().unwrap().to_string(), s);
        }
        for bad in ["", "1..2", "0.1", "a", "1.-2", "+1"] {
            assert!(bad.parse::<Position>().is_err(), "{bad}");
        }
    }

    #[test]
    fn order_is_left_to_right_depth_first() {
        let mut ps: Vec<Position> = ["2", "1.2.2", "1", "1.10", "1.2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        ps.sort();
        let shown: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["1", "1.2", "1.2.2", "1.10", "2"]);
    }
}
