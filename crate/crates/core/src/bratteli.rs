//! Bratteli diagrams with an eventually repeating level structure.
//!
//! A diagram is presented by a finite list of prefix matrices followed by one
//! repeat matrix. Levels are numbered from 1. Matrix `M_n` describes the
//! edges between level n and level n+1: `M_n[i][j]` is the number of edges
//! whose range is the i-th vertex of level n and whose source is the j-th
//! vertex of level n+1. The prefix supplies `M_1 .. M_p`; every later level
//! uses the repeat matrix, which must be square and match the last prefix
//! level size.
//!
//! Every row of every matrix must have a positive entry, so each vertex
//! receives at least one edge and infinite paths extend past every level.

pub type Matrix = Vec<Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliPresentation {
    pub prefix: Vec<Matrix>,
    pub repeat: Matrix,
}

impl BratteliPresentation {
    pub fn validate(&self) -> Result<(), String> {
        let t = self.repeat.len();
        if t == 0 {
            return Err("repeat matrix must be nonempty".into());
        }
        for row in &self.repeat {
            if row.len() != t {
                return Err("repeat matrix must be square".into());
            }
        }
        let mut cols_prev: Option<usize> = None;
        for (i, m) in self.prefix.iter().enumerate() {
            if m.is_empty() {
                return Err(format!("prefix matrix {} is empty", i + 1));
            }
            let cols = m[0].len();
            if cols == 0 || m.iter().any(|r| r.len() != cols) {
                return Err(format!("prefix matrix {} is ragged", i + 1));
            }
            if let Some(c) = cols_prev {
                if m.len() != c {
                    return Err(format!(
                        "prefix matrix {} has {} rows but the previous level has {} vertices",
                        i + 1,
                        m.len(),
                        c
                    ));
                }
            }
            cols_prev = Some(cols);
        }
        if let Some(c) = cols_prev {
            if c != t {
                return Err(format!(
                    "repeat matrix is {t}x{t} but the last prefix level has {c} vertices"
                ));
            }
        }
        for (label, m) in self
            .prefix
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("prefix matrix {}", i + 1), m))
            .chain(std::iter::once(("repeat matrix".to_string(), &self.repeat)))
        {
            for (i, row) in m.iter().enumerate() {
                if row.iter().all(|&x| x == 0) {
                    return Err(format!(
                        "{label} row {} is zero, so a vertex would receive no edges",
                        i + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of prefix matrices.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// First level from which the transition matrix is always the repeat
    /// matrix and all levels have the repeat size.
    pub fn template_start(&self) -> usize {
        self.prefix.len() + 1
    }

    /// Number of vertices at a 1-based level.
    pub fn level_size(&self, level: usize) -> usize {
        debug_assert!(level >= 1);
        if level == 1 {
            if let Some(m) = self.prefix.first() {
                return m.len();
            }
            return self.repeat.len();
        }
        if level <= self.prefix.len() + 1 {
            if let Some(m) = self.prefix.get(level - 2) {
                return m[0].len();
            }
        }
        self.repeat.len()
    }

    /// Matrix describing the edges between `level` and `level + 1`.
    pub fn matrix_for_level(&self, level: usize) -> &Matrix {
        debug_assert!(level >= 1);
        self.prefix.get(level - 1).unwrap_or(&self.repeat)
    }

    /// Display name for vertex `idx` (0-based) at a 1-based level.
    pub fn vertex_name(&self, level: usize, idx: usize) -> String {
        if self.level_size(level) == 1 {
            format!("v{level}")
        } else {
            format!("v{level}_{}", idx + 1)
        }
    }

    /// Inverse of `vertex_name`.
    pub fn vertex_lookup(&self, name: &str) -> Option<(usize, usize)> {
        let rest = name.strip_prefix('v')?;
        let (level, idx) = match rest.split_once('_') {
            Some((l, i)) => (l.parse::<usize>().ok()?, i.parse::<usize>().ok()?.checked_sub(1)?),
            None => (rest.parse::<usize>().ok()?, 0),
        };
        if level == 0 {
            return None;
        }
        let size = self.level_size(level);
        let multi = rest.contains('_');
        if (size == 1) == multi {
            return None;
        }
        if idx >= size {
            return None;
        }
        Some((level, idx))
    }

    /// Letter naming the c-th parallel copy of an edge: e, f, g, ...
    pub fn copy_letter(c: u64) -> String {
        if c < 22 {
            ((b'e' + c as u8) as char).to_string()
        } else {
            format!("e{c}x")
        }
    }

    /// Display name for the c-th edge from vertex `j` of level `level + 1`
    /// to vertex `i` of level `level`.
    pub fn edge_name(&self, level: usize, i: usize, j: usize, c: u64) -> String {
        let multi = self.level_size(level) > 1 || self.level_size(level + 1) > 1;
        if multi {
            format!("{}{}_{}_{}", Self::copy_letter(c), level, i + 1, j + 1)
        } else {
            format!("{}{}", Self::copy_letter(c), level)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uhf2() -> BratteliPresentation {
        BratteliPresentation { prefix: vec![], repeat: vec![vec![2]] }
    }

    #[test]
    fn uhf2_levels_and_names() {
        let b = uhf2();
        b.validate().unwrap();
        assert_eq!(b.level_size(1), 1);
        assert_eq!(b.level_size(7), 1);
        assert_eq!(b.vertex_name(1, 0), "v1");
        assert_eq!(b.vertex_lookup("v3"), Some((3, 0)));
        assert_eq!(b.edge_name(1, 0, 0, 0), "e1");
        assert_eq!(b.edge_name(1, 0, 0, 1), "f1");
        assert_eq!(b.edge_name(2, 0, 0, 1), "f2");
    }

    #[test]
    fn prefix_chain_dimensions_are_checked() {
        let b = BratteliPresentation {
            prefix: vec![vec![vec![1, 1]]],
            repeat: vec![vec![1, 0], vec![1, 1]],
        };
        b.validate().unwrap();
        assert_eq!(b.level_size(1), 1);
        assert_eq!(b.level_size(2), 2);
        assert_eq!(b.vertex_name(2, 1), "v2_2");
        assert_eq!(b.vertex_lookup("v2_2"), Some((2, 1)));
        assert_eq!(b.vertex_lookup("v2"), None);

        let bad = BratteliPresentation { prefix: vec![vec![vec![1, 1]]], repeat: vec![vec![1]] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_rows_are_rejected() {
        let bad = BratteliPresentation { prefix: vec![], repeat: vec![vec![0, 1], vec![0, 0]] };
        assert!(bad.validate().is_err());
    }
}
