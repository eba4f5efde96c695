//! Eventually periodic selector streams `prefix · period^ω`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// An infinite sequence of child selectors that repeats `period` forever
/// after a finite `prefix`. Always stored in reduced form (shortest period,
/// shortest prefix) so that structural equality is stream equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stream {
    prefix: Vec<u64>,
    period: Vec<u64>,
}

impl Stream {
    /// Returns `None` when `period` is empty.
    pub fn new(prefix: Vec<u64>, period: Vec<u64>) -> Option<Stream> {
        if period.is_empty() {
            return None;
        }
        let mut s = Stream { prefix, period };
        s.reduce();
        Some(s)
    }

    pub fn constant(x: u64) -> Stream {
        Stream { prefix: Vec::new(), period: vec![x] }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    fn reduce(&mut self) {
        let p = self.period.len();
        for d in 1..=p {
            if p.is_multiple_of(d) && (0..p).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // absorb trailing prefix symbols into a rotated period
        while let Some(&last) = self.prefix.last() {
            if last == *self.period.last().unwrap() {
                self.prefix.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn at(&self, i: usize) -> u64 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Positions after which the stream is fully determined by agreement:
    /// two streams agreeing on their first `horizon(other)` symbols are equal.
    fn horizon(&self, other: &Stream) -> usize {
        let l = lcm(self.period.len(), other.period.len());
        self.prefix.len().max(other.prefix.len()) + l
    }

    /// Length of the longest common prefix, `None` if the streams are equal.
    pub fn common_prefix(&self, other: &Stream) -> Option<usize> {
        (0..self.horizon(other)).find(|&i| self.at(i) != other.at(i))
    }

    /// Length of the longest common prefix with a finite word (capped at its length).
    pub fn common_prefix_with(&self, word: &[u64]) -> usize {
        word.iter().enumerate().take_while(|(i, x)| self.at(*i) == **x).count()
    }

    /// The stream obtained by dropping the first `n` symbols.
    pub fn skip(&self, n: usize) -> Stream {
        if n <= self.prefix.len() {
            Stream::new(self.prefix[n..].to_vec(), self.period.clone()).unwrap()
        } else {
            let k = (n - self.prefix.len()) % self.period.len();
            let mut per = self.period.clone();
            per.rotate_left(k);
            Stream::new(Vec::new(), per).unwrap()
        }
    }

    /// The stream `word · self`.
    pub fn prepend(&self, word: &[u64]) -> Stream {
        let mut prefix = word.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Stream::new(prefix, self.period.clone()).unwrap()
    }

    pub fn max_symbol(&self) -> u64 {
        self.prefix.iter().chain(self.period.iter()).copied().max().unwrap_or(0)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

fn list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "period(")?;
            list(f, &self.period)?;
            write!(f, ")")
        } else {
            write!(f, "prefix(")?;
            list(f, &self.prefix)?;
            write!(f, ";period(")?;
            list(f, &self.period)?;
            write!(f, "))")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduced_form_is_canonical() {
        let a = Stream::new(vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        let b = Stream::new(vec![], vec![0, 1]).unwrap();
        assert_eq!(a, b);
        let c = Stream::new(vec![1, 1, 1], vec![1]).unwrap();
        assert_eq!(c, Stream::constant(1));
        assert!(Stream::new(vec![1], vec![]).is_none());
    }

    #[test]
    fn common_prefix_examples() {
        let zeros = Stream::constant(0);
        let s = Stream::new(vec![0], vec![1]).unwrap();
        assert_eq!(zeros.common_prefix(&s), Some(1));
        assert_eq!(zeros.common_prefix(&zeros), None);
        assert_eq!(zeros.common_prefix_with(&[0, 0, 1]), 2);
    }

    fn arb_stream() -> impl Strategy<Value = Stream> {
        (proptest::collection::vec(0u64..3, 0..4), proptest::collection::vec(0u64..3, 1..4))
            .prop_map(|(p, q)| Stream::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn equality_matches_long_comparison(a in arb_stream(), b in arb_stream()) {
            let same = a.take(64) == b.take(64);
            prop_assert_eq!(same, a == b);
            match a.common_prefix(&b) {
                None => prop_assert!(same),
                Some(i) => {
                    prop_assert_eq!(a.take(i), b.take(i));
                    prop_assert_ne!(a.at(i), b.at(i));
                }
            }
        }

        #[test]
        fn skip_prepend_inverse(a in arb_stream(), n in 0usize..8) {
            let w = a.take(n);
            prop_assert_eq!(a.skip(n).prepend(&w), a);
        }
    }
}
