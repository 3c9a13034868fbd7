//! Arm colors and color sequences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::lattice::Lattice;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    /// Open primal.
    O,
    /// Closed primal.
    C,
    /// Open dual.
    OStar,
    /// Closed dual.
    CStar,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::O, Color::C, Color::OStar, Color::CStar];

    /// Swap lattices, keep the status.
    #[inline]
    pub fn star(self) -> Color {
        match self {
            Color::O => Color::OStar,
            Color::C => Color::CStar,
            Color::OStar => Color::O,
            Color::CStar => Color::C,
        }
    }

    /// Swap open and closed, keep the lattice.
    #[inline]
    pub fn bar(self) -> Color {
        match self {
            Color::O => Color::C,
            Color::C => Color::O,
            Color::OStar => Color::CStar,
            Color::CStar => Color::OStar,
        }
    }

    #[inline]
    pub fn lattice(self) -> Lattice {
        match self {
            Color::O | Color::C => Lattice::Primal,
            Color::OStar | Color::CStar => Lattice::Dual,
        }
    }

    /// Whether the arm needs open edges (`O`, `O*`).
    #[inline]
    pub fn is_open(self) -> bool {
        matches!(self, Color::O | Color::OStar)
    }

    pub fn token(self) -> &'static str {
        match self {
            Color::O => "O",
            Color::C => "C",
            Color::OStar => "O*",
            Color::CStar => "C*",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A cyclic word over `{O, C, O*, C*}` prescribing arm colors
/// counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSequence(Vec<Color>);

impl ColorSequence {
    pub fn new(colors: Vec<Color>) -> Result<Self, Error> {
        if colors.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(ColorSequence(colors))
    }

    pub fn from_slice(colors: &[Color]) -> Result<Self, Error> {
        ColorSequence::new(colors.to_vec())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Color {
        self.0[i % self.0.len()]
    }

    pub fn star(&self) -> ColorSequence {
        ColorSequence(self.0.iter().map(|c| c.star()).collect())
    }

    pub fn bar(&self) -> ColorSequence {
        ColorSequence(self.0.iter().map(|c| c.bar()).collect())
    }

    pub fn rotate(&self, by: usize) -> ColorSequence {
        let mut v = self.0.clone();
        let k = v.len();
        v.rotate_left(by % k);
        ColorSequence(v)
    }

    /// Both an open-type (`O`, `O*`) and a closed-type (`C`, `C*`) entry occur.
    pub fn is_polychromatic(&self) -> bool {
        self.0.iter().any(|c| c.is_open()) && self.0.iter().any(|c| !c.is_open())
    }

    /// Lexicographically smallest rotation; identifies the cyclic class.
    pub fn canonical_rotation(&self) -> ColorSequence {
        (0..self.len()).map(|r| self.rotate(r)).min().expect("non-empty")
    }

    pub fn cyclically_equal(&self, other: &ColorSequence) -> bool {
        self.len() == other.len() && self.canonical_rotation() == other.canonical_rotation()
    }

    /// Rotation offsets producing pairwise distinct linear words.
    pub(crate) fn distinct_rotations(&self) -> Vec<usize> {
        let mut seen: Vec<ColorSequence> = Vec::new();
        let mut out = Vec::new();
        for r in 0..self.len() {
            let w = self.rotate(r);
            if !seen.contains(&w) {
                seen.push(w);
                out.push(r);
            }
        }
        out
    }

    /// The same sequence with its last entry replaced by `star(bar(last))`.
    pub fn switch_last(&self) -> ColorSequence {
        let mut v = self.0.clone();
        let last = v.len() - 1;
        v[last] = v[last].bar().star();
        ColorSequence(v)
    }

    pub fn with_entry(&self, i: usize, c: Color) -> ColorSequence {
        let mut v = self.0.clone();
        v[i] = c;
        ColorSequence(v)
    }

    /// All sequences of length `k`, one representative per rotation class.
    pub fn all_cyclic_classes(k: usize) -> Vec<ColorSequence> {
        let mut out: Vec<ColorSequence> = Vec::new();
        let total = 4usize.pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::with_capacity(k);
            for _ in 0..k {
                v.push(Color::ALL[c % 4]);
                c /= 4;
            }
            let s = ColorSequence(v);
            if s.canonical_rotation() == s {
                out.push(s);
            }
        }
        out
    }
}

impl fmt::Display for ColorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(c.token())?;
        }
        Ok(())
    }
}

impl FromStr for ColorSequence {
    type Err = Error;

    /// Parses the compact form `OC*C*`: each letter `O` or `C`, optionally
    /// followed by `*`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut out = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(ch) = chars.next() {
            let starred = chars.peek() == Some(&'*');
            if starred {
                chars.next();
            }
            let c = match (ch, starred) {
                ('O', false) => Color::O,
                ('C', false) => Color::C,
                ('O', true) => Color::OStar,
                ('C', true) => Color::CStar,
                _ => return Err(Error::BadColorToken(String::from(s))),
            };
            out.push(c);
        }
        ColorSequence::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use Color::*;

    fn seq(s: &str) -> ColorSequence {
        s.parse().unwrap()
    }

    #[test]
    fn star_and_bar_examples() {
        assert_eq!(seq("OC*").star(), seq("O*C"));
        assert_eq!(seq("OC*").bar(), seq("CO*"));
        for c in Color::ALL {
            assert_eq!(c.star().star(), c);
            assert_eq!(c.bar().bar(), c);
            assert_eq!(c.bar().star(), c.star().bar());
        }
    }

    #[test]
    fn parse_and_print() {
        let s = seq("OC*C*");
        assert_eq!(s.colors(), &[O, CStar, CStar]);
        assert_eq!(s.to_string(), "OC*C*");
        assert!("OX".parse::<ColorSequence>().is_err());
        assert!("*O".parse::<ColorSequence>().is_err());
        assert!("".parse::<ColorSequence>().is_err());
    }

    #[test]
    fn polychromatic() {
        assert!(seq("OC*").is_polychromatic());
        assert!(seq("OC").is_polychromatic());
        assert!(!seq("OO*").is_polychromatic());
        assert!(!seq("CC*C").is_polychromatic());
    }

    #[test]
    fn cyclic_classes() {
        assert!(seq("OC*C*").cyclically_equal(&seq("C*OC*")));
        assert!(!seq("OOC*C*").cyclically_equal(&seq("OC*OC*")));
        assert_eq!(ColorSequence::all_cyclic_classes(2).len(), 10);
        assert_eq!(seq("OC*OC*").distinct_rotations(), alloc::vec![0, 1]);
    }

    #[test]
    fn switch_last_uses_bar_then_star() {
        assert_eq!(seq("OC*C*").switch_last(), seq("OC*O"));
        for c in Color::ALL {
            let s = ColorSequence::new(alloc::vec![O, c]).unwrap();
            assert_eq!(s.switch_last().get(1), c.bar().star());
        }
    }
}
