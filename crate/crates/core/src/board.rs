//! Race-game boards: squares `0..=size`, snakes and ladders as redirects,
//! and the overshoot rule applied when a roll passes the finish.
//!
//! Two document formats are understood. The canonical one is TOML:
//!
//! ```toml
//! name = "mini10"
//! size = 10
//! overshoot = "reflect"
//! redirects = [[3, 7], [8, 2]]
//! ```
//!
//! The flat-track format is a whitespace-separated list of integers where
//! position `p` (counting from 1) holds the square a player finally rests on
//! after landing on `p`. It has either `size` entries, or `size + 5` entries
//! where the trailing five describe overshoot landings and are checked
//! against the reflection rule. Lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Faces on the board die. Rolls are uniform over `1..=DIE_FACES`.
pub const DIE_FACES: usize = 6;

/// A square index in `0..=size`. 0 is the start, `size` the finish.
pub type Square = usize;

const PAPER_FIGURE2: &str = include_str!("../boards/paper-figure2.txt");
const MINI10: &str = include_str!("../boards/mini10.toml");

/// Names accepted by [`Board::bundled`].
pub const BUNDLED_BOARDS: &[&str] = &["paper-figure2", "mini10"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overshoot {
    /// Bounce back off the finish by the excess: `raw -> 2*size - raw`.
    #[default]
    Reflect,
    /// Stay on the current square.
    Stay,
    /// Any overshoot counts as finishing.
    Finish,
}

impl Overshoot {
    pub fn as_str(self) -> &'static str {
        match self {
            Overshoot::Reflect => "reflect",
            Overshoot::Stay => "stay",
            Overshoot::Finish => "finish",
        }
    }
}

impl fmt::Display for Overshoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoardDocument {
    #[serde(default)]
    name: String,
    size: usize,
    #[serde(default)]
    overshoot: Overshoot,
    #[serde(default)]
    redirects: Vec<(usize, usize)>,
}

/// A validated, immutable board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    name: String,
    size: usize,
    overshoot: Overshoot,
    redirects: BTreeMap<Square, Square>,
    /// `resting[x]` is the fixpoint of following redirects from `x`.
    resting: Vec<Square>,
}

impl Board {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        redirects: impl IntoIterator<Item = (Square, Square)>,
        overshoot: Overshoot,
    ) -> Result<Self> {
        let min = match overshoot {
            // The largest reflected landing is (size - 1) + 6 -> size - 5.
            Overshoot::Reflect => DIE_FACES - 1,
            Overshoot::Stay | Overshoot::Finish => 1,
        };
        if size < min {
            return Err(Error::BoardTooSmall {
                size,
                min,
                policy: overshoot.as_str(),
            });
        }

        let mut map = BTreeMap::new();
        for (from, to) in redirects {
            if from == 0 || from >= size || to == 0 || to > size {
                return Err(Error::RedirectOutOfRange { from, to, size });
            }
            if from == to {
                return Err(Error::SelfRedirect(from));
            }
            if map.insert(from, to).is_some() {
                return Err(Error::DuplicateRedirect(from));
            }
        }

        let mut resting = Vec::with_capacity(size + 1);
        for start in 0..=size {
            let mut at = start;
            let mut hops = 0;
            while let Some(&next) = map.get(&at) {
                hops += 1;
                if hops > map.len() {
                    return Err(Error::RedirectCycle(start));
                }
                at = next;
            }
            resting.push(at);
        }

        Ok(Board {
            name: name.into(),
            size,
            overshoot,
            redirects: map,
            resting,
        })
    }

    /// One of the boards shipped with the crate, see [`BUNDLED_BOARDS`].
    pub fn bundled(name: &str) -> Result<Self> {
        match name {
            "paper-figure2" => Board::from_flat_str(name, PAPER_FIGURE2),
            "mini10" => Board::from_canonical_str(MINI10),
            other => Err(Error::UnknownBundledBoard(other.to_string())),
        }
    }

    /// Load a board from a file, picking the format from its content.
    /// The board name defaults to the file stem.
    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Board::load_str(&stem, &text)
    }

    /// Detects the format: documents whose first meaningful token is an
    /// integer are flat tracks, anything else is parsed as canonical TOML.
    pub fn load_str(default_name: &str, text: &str) -> Result<Self> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        let is_flat = first
            .and_then(|l| l.split_whitespace().next())
            .is_some_and(|tok| tok.parse::<i64>().is_ok());
        if is_flat {
            Board::from_flat_str(default_name, text)
        } else {
            let mut board = Board::from_canonical_str(text)?;
            if board.name.is_empty() {
                board.name = default_name.to_string();
            }
            Ok(board)
        }
    }

    pub fn from_canonical_str(text: &str) -> Result<Self> {
        let doc: BoardDocument =
            toml::from_str(text).map_err(|e| Error::MalformedBoard(e.to_string()))?;
        Board::new(doc.name, doc.size, doc.redirects, doc.overshoot)
    }

    pub fn from_flat_str(name: &str, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::MalformedBoard(format!("not a square number: {tok:?}")))?;
                entries.push(v);
            }
        }
        let n = entries.len();
        if n == 0 {
            return Err(Error::MalformedBoard("empty flat track".into()));
        }
        // The finish square never redirects, so a track whose last entry is
        // its own position has no overshoot tail.
        let size = if entries[n - 1] == n {
            n
        } else if n > DIE_FACES - 1 && entries[n - DIE_FACES] == n - (DIE_FACES - 1) {
            n - (DIE_FACES - 1)
        } else {
            return Err(Error::MalformedBoard(format!(
                "{n} entries: expected the finish square last, or followed by {} overshoot entries",
                DIE_FACES - 1
            )));
        };

        let redirects = entries[..size]
            .iter()
            .enumerate()
            .map(|(i, &dest)| (i + 1, dest))
            .filter(|&(pos, dest)| pos != dest);
        let board = Board::new(name, size, redirects, Overshoot::Reflect)?;

        for (offset, &found) in entries[size..].iter().enumerate() {
            let position = size + offset + 1;
            let expected = board.resting[2 * size - position];
            if found != expected {
                return Err(Error::OvershootMismatch {
                    position,
                    found,
                    expected,
                });
            }
        }
        Ok(board)
    }

    /// Canonical TOML rendering, redirects ordered by source square.
    pub fn to_canonical_string(&self) -> String {
        let doc = BoardDocument {
            name: self.name.clone(),
            size: self.size,
            overshoot: self.overshoot,
            redirects: self.redirects.iter().map(|(&a, &b)| (a, b)).collect(),
        };
        toml::to_string(&doc).expect("board document always serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn finish(&self) -> Square {
        self.size
    }

    pub fn overshoot(&self) -> Overshoot {
        self.overshoot
    }

    pub fn redirects(&self) -> &BTreeMap<Square, Square> {
        &self.redirects
    }

    pub fn is_redirect_source(&self, square: Square) -> bool {
        self.redirects.contains_key(&square)
    }

    /// Squares a player can occupy between moves, ascending.
    pub fn resting_squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..=self.size).filter(|s| !self.redirects.contains_key(s))
    }

    /// Follows redirects from `square` to the square the player stays on.
    pub fn resting_square(&self, square: Square) -> Result<Square> {
        self.resting
            .get(square)
            .copied()
            .ok_or(Error::SquareOutOfRange {
                square,
                size: self.size,
            })
    }

    /// Where a player on `state` ends up after rolling `roll`. Overshoot is
    /// applied to the raw landing before redirects are followed.
    pub fn resolve_move(&self, state: Square, roll: usize) -> Result<Square> {
        if state > self.size {
            return Err(Error::SquareOutOfRange {
                square: state,
                size: self.size,
            });
        }
        if state == self.size {
            return Err(Error::FinishState(state));
        }
        if self.is_redirect_source(state) {
            return Err(Error::NotResting(state));
        }
        if !(1..=DIE_FACES).contains(&roll) {
            return Err(Error::InvalidArgument(format!(
                "roll {roll} outside 1..={DIE_FACES}"
            )));
        }
        Ok(self.landing(state, roll))
    }

    /// Unchecked move used by the chain builder and the simulators.
    pub(crate) fn landing(&self, state: Square, roll: usize) -> Square {
        let mut raw = state + roll;
        if raw > self.size {
            raw = match self.overshoot {
                Overshoot::Reflect => 2 * self.size - raw,
                Overshoot::Stay => state,
                Overshoot::Finish => self.size,
            };
        }
        self.resting[raw]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_board() -> Board {
        Board::bundled("paper-figure2").unwrap()
    }

    #[test]
    fn flat_track_first_entry_is_a_ladder() {
        let b = full_board();
        assert_eq!(b.redirects().get(&1), Some(&38));
        assert_eq!(b.size(), 100);
    }

    #[test]
    fn identity_track_has_no_redirects() {
        let text = (1..=20).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        let b = Board::from_flat_str("id", &text).unwrap();
        assert!(b.redirects().is_empty());
        assert_eq!(b.size(), 20);
    }

    #[test]
    fn overshoot_tail_is_cross_checked() {
        let good = PAPER_FIGURE2;
        assert!(Board::from_flat_str("p", good).is_ok());
        let bad = good.replace("99 78 97 96 75", "99 78 97 96 95");
        match Board::from_flat_str("p", &bad) {
            Err(Error::OvershootMismatch {
                position,
                found,
                expected,
            }) => {
                assert_eq!((position, found, expected), (105, 95, 75));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn resting_square_examples() {
        let b = full_board();
        assert_eq!(b.resting_square(4).unwrap(), 14);
        assert_eq!(b.resting_square(2).unwrap(), 2);
        assert_eq!(b.resting_square(95).unwrap(), 75);
        assert!(b.resting_square(101).is_err());
    }

    #[test]
    fn resolve_move_examples() {
        let b = full_board();
        assert_eq!(b.resolve_move(0, 1).unwrap(), 38);
        assert_eq!(b.resolve_move(99, 3).unwrap(), 78);
        assert_eq!(b.resolve_move(10, 6).unwrap(), 6);
        assert_eq!(b.resolve_move(17, 2).unwrap(), 19);
    }

    #[test]
    fn resolve_move_contract_violations() {
        let b = full_board();
        assert!(matches!(b.resolve_move(100, 1), Err(Error::FinishState(100))));
        assert!(matches!(b.resolve_move(4, 1), Err(Error::NotResting(4))));
        assert!(b.resolve_move(3, 0).is_err());
        assert!(b.resolve_move(3, 7).is_err());
    }

    #[test]
    fn other_overshoot_policies() {
        let stay = Board::new("s", 10, [], Overshoot::Stay).unwrap();
        assert_eq!(stay.resolve_move(8, 3).unwrap(), 8);
        assert_eq!(stay.resolve_move(8, 2).unwrap(), 10);
        let fin = Board::new("f", 10, [], Overshoot::Finish).unwrap();
        assert_eq!(fin.resolve_move(8, 5).unwrap(), 10);
    }

    #[test]
    fn redirect_chains_are_followed() {
        let b = Board::new("chain", 20, [(3, 9), (9, 5), (5, 12)], Overshoot::Reflect).unwrap();
        assert_eq!(b.resting_square(3).unwrap(), 12);
        assert_eq!(b.resolve_move(0, 3).unwrap(), 12);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Board::new("c", 20, [(3, 9), (9, 3)], Overshoot::Reflect),
            Err(Error::RedirectCycle(_))
        ));
        assert!(matches!(
            Board::new("x", 20, [(3, 3)], Overshoot::Reflect),
            Err(Error::SelfRedirect(3))
        ));
        assert!(matches!(
            Board::new("x", 20, [(20, 3)], Overshoot::Reflect),
            Err(Error::RedirectOutOfRange { .. })
        ));
        assert!(matches!(
            Board::new("x", 20, [(0, 3)], Overshoot::Reflect),
            Err(Error::RedirectOutOfRange { .. })
        ));
        assert!(matches!(
            Board::new("x", 20, [(5, 21)], Overshoot::Reflect),
            Err(Error::RedirectOutOfRange { .. })
        ));
        assert!(matches!(
            Board::new("x", 3, [], Overshoot::Reflect),
            Err(Error::BoardTooSmall { .. })
        ));
        assert!(Board::new("x", 3, [], Overshoot::Stay).is_ok());
        assert!(matches!(
            Board::from_canonical_str("size = 10\nredirects = [[3, 7], [3, 8]]"),
            Err(Error::DuplicateRedirect(3))
        ));
        assert!(matches!(
            Board::from_canonical_str("size = 10\nbogus = 1"),
            Err(Error::MalformedBoard(_))
        ));
        assert!(matches!(
            Board::from_flat_str("x", "1 2 x"),
            Err(Error::MalformedBoard(_))
        ));
        assert!(Board::from_flat_str("x", "1 2 3 4 5 6 7 8 9 10 1").is_err());
    }

    #[test]
    fn canonical_format_is_stable() {
        let text = full_board().to_canonical_string();
        let again = Board::from_canonical_str(&text).unwrap();
        assert_eq!(again, full_board());
        assert_eq!(again.to_canonical_string(), text);
    }

    #[test]
    fn load_str_detects_format() {
        let b = Board::load_str("fallback", MINI10).unwrap();
        assert_eq!(b.name(), "mini10");
        let unnamed = Board::load_str("fallback", "size = 12").unwrap();
        assert_eq!(unnamed.name(), "fallback");
        let flat = Board::load_str("flat", PAPER_FIGURE2).unwrap();
        assert_eq!(flat.name(), "flat");
        assert_eq!(flat.redirects(), full_board().redirects());
    }

    #[test]
    fn exhaustive_reflect_then_redirect() {
        let b = full_board();
        let size = b.size();
        for s in b.resting_squares().filter(|&s| s != size) {
            for r in 1..=DIE_FACES {
                let raw = (s + r).min(2 * size - (s + r));
                let got = b.resolve_move(s, r).unwrap();
                assert_eq!(got, b.resting_square(raw).unwrap());
                assert!(!b.is_redirect_source(got));
            }
        }
    }

    #[test]
    fn unknown_bundled_board() {
        assert!(matches!(
            Board::bundled("nope"),
            Err(Error::UnknownBundledBoard(_))
        ));
    }
}
