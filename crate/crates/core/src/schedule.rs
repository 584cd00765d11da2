//! Transmission schedules and their text serialization.
//!
//! ```text
//! slots=3 n=4
//! 1 2 3 4
//! 2 4
//!
//! ```
//! The header is followed by one line per slot listing the 1-based indices of
//! the transmitters active in that slot, ascending and space-separated. An
//! empty line is a silent slot.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Ordered family of transmitter subsets, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    n: usize,
    slots: Vec<Vec<usize>>,
}

impl Schedule {
    /// Builds a schedule over transmitters `0..n`. Slots are sorted and deduplicated.
    pub fn new(n: usize, slots: Vec<Vec<usize>>) -> Result<Self> {
        let mut schedule = Self { n, slots: Vec::with_capacity(slots.len()) };
        for slot in slots {
            schedule.push(slot)?;
        }
        Ok(schedule)
    }

    pub(crate) fn empty(n: usize) -> Self {
        Self { n, slots: Vec::new() }
    }

    pub fn push(&mut self, mut slot: Vec<usize>) -> Result<()> {
        if let Some(&bad) = slot.iter().find(|&&u| u >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, n: self.n });
        }
        slot.sort_unstable();
        slot.dedup();
        self.slots.push(slot);
        Ok(())
    }

    pub(crate) fn push_mask(&mut self, mask: &[bool]) {
        self.slots
            .push(mask.iter().enumerate().filter(|(_, &on)| on).map(|(u, _)| u).collect());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("slots={} n={}\n", self.slots.len(), self.n);
        for slot in &self.slots {
            for (k, u) in slot.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", u + 1);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty schedule".into()))?;
        let (slots, n) = parse_header(header)?;
        let mut schedule = Self { n, slots: Vec::with_capacity(slots) };
        for (k, line) in lines.enumerate() {
            if schedule.slots.len() == slots {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse(format!("line {}: more than {slots} slots", k + 2)));
            }
            let slot = line
                .split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(Error::Parse(format!(
                        "line {}: bad transmitter index {tok:?}",
                        k + 2
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            schedule.push(slot)?;
        }
        // trailing silent slots may have lost their empty lines
        while schedule.slots.len() < slots {
            schedule.slots.push(Vec::new());
        }
        Ok(schedule)
    }
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut slots = None;
    let mut n = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("slots", v)) => slots = v.parse().ok(),
            Some(("n", v)) => n = v.parse().ok(),
            _ => {}
        }
    }
    match (slots, n) {
        (Some(s), Some(n)) => Ok((s, n)),
        _ => Err(Error::Parse(format!("line 1: bad header {header:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_format() {
        let s = Schedule::new(4, vec![vec![3, 0, 1, 2], vec![], vec![1, 3]]).unwrap();
        assert_eq!(s.to_text(), "slots=3 n=4\n1 2 3 4\n\n2 4\n");
        assert_eq!(Schedule::from_text(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Schedule::new(2, vec![vec![2]]).is_err());
        assert!(Schedule::from_text("slots=1\n1\n").is_err());
        assert!(Schedule::from_text("slots=1 n=2\n3\n").is_err());
        assert!(Schedule::from_text("slots=1 n=2\n1\n2\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..20, raw in prop::collection::vec(prop::collection::vec(0usize..20, 0..8), 0..10)) {
            let slots = raw.into_iter().map(|s| s.into_iter().filter(|&u| u < n).collect()).collect();
            let s = Schedule::new(n, slots).unwrap();
            prop_assert_eq!(Schedule::from_text(&s.to_text()).unwrap(), s);
        }
    }
}
