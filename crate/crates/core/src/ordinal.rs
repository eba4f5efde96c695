//! Ordinals below ω^ω in Cantor normal form.
//!
//! An ordinal is stored as a list of `(exponent, coefficient)` terms with
//! strictly decreasing exponents and positive coefficients, so the derived
//! lexicographic ordering on the term list coincides with the ordinal order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ordinal arithmetic overflowed the supported range")]
    OverflowBeyondSupportedHeight,
    #[error("ordinal index does not fit in 128 bits")]
    IndexOverflow,
    #[error("cannot parse ordinal `{0}`")]
    Parse(String),
    #[error("left subtraction undefined: {0} is larger than {1}")]
    NotBelow(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// `ω^e · 1`.
    pub fn omega_pow(e: u32) -> Self {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds an ordinal from terms, normalizing order and merging equal exponents.
    /// Terms given out of order are combined by ordinal addition from left to right.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Result<Self, OrdinalError> {
        let mut acc = Ordinal::zero();
        for (e, c) in terms {
            if c == 0 {
                continue;
            }
            acc = acc.add(&Ordinal { terms: vec![(e, c)] })?;
        }
        Ok(acc)
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), OrdinalKind::Limit)
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    /// Largest coefficient appearing in the normal form (0 for the zero ordinal).
    pub fn max_coefficient(&self) -> u64 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(&(lead, lead_c)) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(u32, u64)> =
            self.terms.iter().copied().take_while(|&(e, _)| e >= lead).collect();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                last.1 = last
                    .1
                    .checked_add(lead_c)
                    .ok_or(OrdinalError::OverflowBeyondSupportedHeight)?;
            }
            _ => terms.push((lead, lead_c)),
        }
        terms.extend(other.terms.iter().skip(1).copied());
        Ok(Ordinal { terms })
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1)).expect("successor overflow")
    }

    /// The unique `c` with `self + c == other`, for `self <= other`.
    pub fn sub_left(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > other {
            return Err(OrdinalError::NotBelow(self.to_string(), other.to_string()));
        }
        let common = self
            .terms
            .iter()
            .zip(other.terms.iter())
            .take_while(|(a, b)| a == b)
            .count();
        if common == self.terms.len() {
            return Ok(Ordinal { terms: other.terms[common..].to_vec() });
        }
        let (ae, ac) = self.terms[common];
        let (be, bc) = other.terms[common];
        // self < other, so they first differ with other's term larger.
        let mut terms = Vec::new();
        if ae == be {
            terms.push((be, bc - ac));
        } else {
            terms.push((be, bc));
        }
        terms.extend_from_slice(&other.terms[common + 1..]);
        Ok(Ordinal { terms })
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some(&(0, c)) => {
                let mut terms = self.terms.clone();
                if c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().unwrap().1 = c - 1;
                }
                OrdinalKind::Successor(Ordinal { terms })
            }
            Some(_) => OrdinalKind::Limit,
        }
    }

    /// For a limit `λ = γ + ω^e` (e ≥ 1) returns the fundamental sequence
    /// element `γ + ω^(e-1) · (k + 1)`.
    pub fn fundamental(&self, k: u64) -> Option<Ordinal> {
        let &(e, _) = self.terms.last()?;
        if e == 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        let base = Ordinal { terms };
        base.add(&Ordinal { terms: vec![(e - 1, k + 1)] }).ok()
    }
}

impl From<Ordinal> for String {
    fn from(o: Ordinal) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for Ordinal {
    type Error = OrdinalError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Accepts sums of `c`, `w`, `w*c`, `w^e`, `w^e*c` (spaces ignored).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OrdinalError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        for part in compact.split('+') {
            if part.is_empty() {
                return Err(err());
            }
            if let Some(rest) = part.strip_prefix('w') {
                let (exp, coef) = match rest.split_once('*') {
                    Some((e, c)) => (e, Some(c)),
                    None => (rest, None),
                };
                let e: u32 = match exp.strip_prefix('^') {
                    Some(x) => x.parse().map_err(|_| err())?,
                    None if exp.is_empty() => 1,
                    None => return Err(err()),
                };
                let c: u64 = match coef {
                    Some(c) => c.parse().map_err(|_| err())?,
                    None => 1,
                };
                terms.push((e, c));
            } else {
                terms.push((0, part.parse().map_err(|_| err())?));
            }
        }
        Ordinal::from_terms(terms)
    }
}

/// Canonical enumeration of ordinals below ω^ω: by total weight, then by
/// ordinal order. The weight of a term `ω^e·c` is `1 + exp_weight·e + c`.
///
/// `exp_weight = 1` without swapping is the canonical enumeration. Other
/// settings give alternative (equally deterministic) antichain indexings;
/// `swap_finite_pairs` additionally exchanges the positions of `2k` and
/// `2k+1`, which changes which finite heights a limit of height ω picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Enumeration {
    pub exp_weight: u64,
    pub swap_finite_pairs: bool,
}

impl Default for Enumeration {
    fn default() -> Self {
        Enumeration::CANONICAL
    }
}

/// Sort key realizing an enumeration order: `(weight, ordinal)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnumKey {
    pub weight: u64,
    pub ordinal: Ordinal,
}

impl Enumeration {
    pub const CANONICAL: Enumeration = Enumeration { exp_weight: 1, swap_finite_pairs: false };
    pub const ALTERNATE: Enumeration = Enumeration { exp_weight: 2, swap_finite_pairs: true };

    /// The involution applied before weighing.
    fn permute(&self, a: &Ordinal) -> Ordinal {
        match a.as_finite() {
            Some(n) if self.swap_finite_pairs => Ordinal::nat(n ^ 1),
            _ => a.clone(),
        }
    }

    fn term_weight(&self, e: u32, c: u64) -> u64 {
        1 + self.exp_weight * e as u64 + c
    }

    fn base_weight(&self, a: &Ordinal) -> u64 {
        a.terms.iter().map(|&(e, c)| self.term_weight(e, c)).sum()
    }

    pub fn weight(&self, a: &Ordinal) -> u64 {
        self.base_weight(&self.permute(a))
    }

    pub fn key(&self, a: &Ordinal) -> EnumKey {
        let p = self.permute(a);
        EnumKey { weight: self.base_weight(&p), ordinal: p }
    }

    fn base_key(&self, a: &Ordinal) -> EnumKey {
        EnumKey { weight: self.base_weight(a), ordinal: a.clone() }
    }

    pub fn cmp(&self, a: &Ordinal, b: &Ordinal) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Element of `[lo, hi)` with the least key, if the interval is non-empty.
    pub fn argmin_in(&self, lo: &Ordinal, hi: &Ordinal) -> Option<Ordinal> {
        if lo >= hi {
            return None;
        }
        if !self.swap_finite_pairs {
            return self.argmin_base(lo, hi);
        }
        // Minimize the base key over the permuted interval. The involution only
        // moves the endpoints of the finite part: an odd finite `lo` trades
        // itself for `lo - 1`, an odd finite `hi` trades `hi - 1` for `hi`.
        let mut lo2 = lo.clone();
        let mut hi2 = hi.clone();
        let mut extra = Vec::new();
        if let Some(a) = lo.as_finite() {
            if a % 2 == 1 {
                lo2 = Ordinal::nat(a + 1);
                extra.push(Ordinal::nat(a - 1));
            }
        }
        if let Some(b) = hi.as_finite() {
            if b % 2 == 1 {
                hi2 = Ordinal::nat(b - 1);
                extra.push(Ordinal::nat(b));
            }
        }
        let best = self
            .argmin_base(&lo2, &hi2)
            .into_iter()
            .chain(extra)
            .min_by_key(|x| self.base_key(x))?;
        Some(self.permute(&best))
    }

    /// Least base key in `[lo, hi)`, ignoring the finite-pair swap.
    ///
    /// Any element diverging from `lo` at term `i` can be truncated right after
    /// its first larger term without raising its weight or leaving the interval,
    /// so the minimum lies among `lo` and those single-term bumps.
    fn argmin_base(&self, lo: &Ordinal, hi: &Ordinal) -> Option<Ordinal> {
        if lo >= hi {
            return None;
        }
        let mut best = lo.clone();
        let mut best_key = self.base_key(lo);
        let mut consider = |cand: Ordinal| {
            if &cand >= lo && &cand < hi {
                let k = self.base_key(&cand);
                if k < best_key {
                    best_key = k;
                    best = cand;
                }
            }
        };
        let hi_lead = hi.leading_exponent().unwrap_or(0);
        for i in 0..lo.terms.len() {
            let prefix = &lo.terms[..i];
            let (ei, ci) = lo.terms[i];
            let mut t = prefix.to_vec();
            t.push((ei, ci + 1));
            consider(Ordinal { terms: t });
            let cap = match prefix.last() {
                Some(&(pe, _)) => pe.saturating_sub(1),
                None => hi_lead.max(ei + 1),
            };
            let mut e = ei + 1;
            while e <= cap {
                let mut t = prefix.to_vec();
                t.push((e, 1));
                consider(Ordinal { terms: t });
                e += 1;
            }
        }
        Some(best)
    }

    /// Number of ordinals whose term exponents are all `< emax` and whose weight is exactly `w`.
    fn count(&self, w: u64, emax: u32, memo: &mut HashMap<(u64, u32), Option<u128>>) -> Option<u128> {
        if w == 0 {
            return Some(1);
        }
        if let Some(v) = memo.get(&(w, emax)) {
            return *v;
        }
        let mut total: u128 = 0;
        let mut ok = true;
        'outer: for e in 0..emax {
            let base = self.term_weight(e, 1);
            if base > w {
                break;
            }
            for c in 1..=(w - base + 1) {
                let tw = self.term_weight(e, c);
                if tw > w {
                    break;
                }
                match self.count(w - tw, e, memo).and_then(|x| total.checked_add(x)) {
                    Some(t) => total = t,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        let res = ok.then_some(total);
        memo.insert((w, emax), res);
        res
    }

    fn max_exponent_for(&self, w: u64) -> u32 {
        // a single term ω^e·1 has weight 2 + exp_weight·e
        (w.saturating_sub(2) / self.exp_weight) as u32 + 1
    }

    /// Position of `a` in the enumeration.
    pub fn index(&self, a: &Ordinal) -> Result<u128, OrdinalError> {
        let a = &self.permute(a);
        let w = self.base_weight(a);
        let mut memo = HashMap::new();
        let mut idx: u128 = 0;
        for v in 0..w {
            let c = self.count(v, self.max_exponent_for(v), &mut memo).ok_or(OrdinalError::IndexOverflow)?;
            idx = idx.checked_add(c).ok_or(OrdinalError::IndexOverflow)?;
        }
        // rank within the weight class, ascending ordinal order
        let mut remaining = w;
        let mut emax = self.max_exponent_for(w);
        for &(e, c) in &a.terms {
            // lists at this position that are smaller: (e', c') < (e, c) lexicographically
            for e2 in 0..=e.min(emax.saturating_sub(1)) {
                let cmax = if e2 == e { c - 1 } else { u64::MAX };
                let mut c2 = 1;
                while c2 <= cmax {
                    let tw = self.term_weight(e2, c2);
                    if tw > remaining {
                        break;
                    }
                    let n = self.count(remaining - tw, e2, &mut memo).ok_or(OrdinalError::IndexOverflow)?;
                    idx = idx.checked_add(n).ok_or(OrdinalError::IndexOverflow)?;
                    c2 += 1;
                }
            }
            remaining -= self.term_weight(e, c);
            emax = e;
        }
        Ok(idx)
    }

    /// Inverse of [`Enumeration::index`].
    pub fn ordinal(&self, n: u128) -> Ordinal {
        let mut memo = HashMap::new();
        let mut rest = n;
        let mut w = 0u64;
        loop {
            let c = self
                .count(w, self.max_exponent_for(w), &mut memo)
                .expect("enumeration index too large");
            if rest < c {
                break;
            }
            rest -= c;
            w += 1;
        }
        let mut terms = Vec::new();
        let mut remaining = w;
        let mut emax = self.max_exponent_for(w);
        while remaining > 0 {
            let mut chosen = None;
            'search: for e in 0..emax {
                let mut c = 1;
                loop {
                    let tw = self.term_weight(e, c);
                    if tw > remaining {
                        break;
                    }
                    let n = self.count(remaining - tw, e, &mut memo).expect("count overflow");
                    if rest < n {
                        chosen = Some((e, c));
                        break 'search;
                    }
                    rest -= n;
                    c += 1;
                }
            }
            let (e, c) = chosen.expect("unranking out of range");
            terms.push((e, c));
            remaining -= self.term_weight(e, c);
            emax = e;
        }
        self.permute(&Ordinal { terms })
    }

    /// All ordinals below `bound` that precede it in the enumeration,
    /// ascending.
    pub fn preceding_below(&self, bound: &Ordinal) -> Vec<Ordinal> {
        // permuting finite ordinals moves their weight by at most one
        let cap = self.weight(bound) + 1;
        fn go(en: &Enumeration, rem: u64, emax: u32, bound: &Ordinal, cur: &mut Vec<(u32, u64)>, out: &mut Vec<Ordinal>) {
            out.push(Ordinal { terms: cur.clone() });
            for e in 0..emax {
                let mut c = 1;
                while en.term_weight(e, c) <= rem {
                    cur.push((e, c));
                    if (Ordinal { terms: cur.clone() }) >= *bound {
                        cur.pop();
                        break;
                    }
                    go(en, rem - en.term_weight(e, c), e, bound, cur, out);
                    cur.pop();
                    c += 1;
                }
            }
        }
        let mut raw = Vec::new();
        let emax = bound.leading_exponent().map_or(1, |e| e + 1);
        go(self, cap, emax, bound, &mut Vec::new(), &mut raw);
        let key = self.key(bound);
        let mut out: Vec<Ordinal> =
            raw.iter().map(|a| self.permute(a)).filter(|g| g < bound && self.key(g) < key).collect();
        out.sort();
        out.dedup();
        out
    }

    /// All ordinals of weight exactly `w`, in enumeration order.
    pub fn weight_class(&self, w: u64) -> Vec<Ordinal> {
        fn go(en: &Enumeration, rem: u64, emax: u32, cur: &mut Vec<(u32, u64)>, out: &mut Vec<Ordinal>) {
            if rem == 0 {
                out.push(Ordinal { terms: cur.clone() });
                return;
            }
            for e in 0..emax {
                let mut c = 1;
                while en.term_weight(e, c) <= rem {
                    cur.push((e, c));
                    go(en, rem - en.term_weight(e, c), e, cur, out);
                    cur.pop();
                    c += 1;
                }
            }
        }
        let mut out = Vec::new();
        go(self, w, self.max_exponent_for(w), &mut Vec::new(), &mut out);
        let mut out: Vec<Ordinal> = out.iter().map(|a| self.permute(a)).collect();
        out.sort_by_key(|a| self.key(a));
        out
    }
}

/// Position of `a` in the canonical enumeration.
pub fn enum_index(a: &Ordinal) -> Result<u128, OrdinalError> {
    Enumeration::CANONICAL.index(a)
}

pub fn enum_ordinal(n: u128) -> Ordinal {
    Enumeration::CANONICAL.ordinal(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(o("3").cmp(&o("w")), Ordering::Less);
        assert_eq!(o("w*2+1").cmp(&o("w*2+1")), Ordering::Equal);
        assert_eq!(o("w^2").cmp(&o("w*5+7")), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("1").add(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w").add(&o("1")).unwrap(), o("w+1"));
        assert_eq!(o("w+3").add(&o("w^2")).unwrap(), o("w^2"));
        assert_eq!(o("w*2+5").add(&o("w*3+1")).unwrap(), o("w*5+1"));
        assert_eq!(
            Ordinal::nat(u64::MAX).add(&Ordinal::nat(1)),
            Err(OrdinalError::OverflowBeyondSupportedHeight)
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(o("0").classify(), OrdinalKind::Zero);
        assert_eq!(o("w+4").classify(), OrdinalKind::Successor(o("w+3")));
        assert_eq!(o("w^2+w").classify(), OrdinalKind::Limit);
    }

    #[test]
    fn display_round_trip() {
        let a = o("w^2*3 + w*1 + 4");
        assert_eq!(a.to_string(), "w^2*3 + w*1 + 4");
        assert_eq!(o(&a.to_string()), a);
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("".parse::<Ordinal>().is_err());
    }

    #[test]
    fn sub_left_inverts_add() {
        assert_eq!(o("1").sub_left(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w+2").sub_left(&o("w+5")).unwrap(), o("3"));
        assert_eq!(o("w+2").sub_left(&o("w*2")).unwrap(), o("w"));
        assert!(o("w").sub_left(&o("3")).is_err());
    }

    #[test]
    fn enumeration_starts_at_zero() {
        assert_eq!(enum_ordinal(0), Ordinal::zero());
        assert_eq!(enum_ordinal(1), o("1"));
        assert_eq!(enum_ordinal(2), o("2"));
        assert_eq!(enum_ordinal(3), o("w"));
        assert_eq!(enum_index(&enum_ordinal(17)).unwrap(), 17);
    }

    /// Brute force: list every ordinal of weight ≤ 6 by generating all term
    /// lists with small entries, sort by (weight, ordinal), and compare.
    #[test]
    fn index_agrees_with_brute_force_up_to_weight_6() {
        let en = Enumeration::CANONICAL;
        let mut all = Vec::new();
        let atoms: Vec<(u32, u64)> =
            (0..6u32).flat_map(|e| (1..7u64).map(move |c| (e, c))).collect();
        fn rec(atoms: &[(u32, u64)], cur: &mut Vec<(u32, u64)>, out: &mut Vec<Ordinal>) {
            out.push(Ordinal { terms: cur.clone() });
            if cur.len() >= 3 {
                return;
            }
            for &(e, c) in atoms {
                if cur.last().is_none_or(|l| l.0 > e) {
                    cur.push((e, c));
                    rec(atoms, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&atoms, &mut Vec::new(), &mut all);
        all.retain(|a| en.weight(a) <= 6);
        all.sort_by(|a, b| en.cmp(a, b));
        for (i, a) in all.iter().enumerate() {
            assert_eq!(en.index(a).unwrap(), i as u128, "{a}");
            assert_eq!(en.ordinal(i as u128), *a);
        }
        for a in &all {
            for b in &all {
                if en.weight(a) < en.weight(b) {
                    assert!(en.index(a).unwrap() < en.index(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn enum_round_trip_first_10000() {
        for en in [Enumeration::CANONICAL, Enumeration::ALTERNATE] {
            let mut prev: Option<Ordinal> = None;
            for n in 0..10_000u128 {
                let a = en.ordinal(n);
                assert_eq!(en.index(&a).unwrap(), n);
                if let Some(p) = prev {
                    assert_eq!(en.cmp(&p, &a), Ordering::Less);
                }
                prev = Some(a);
            }
        }
    }

    #[test]
    fn argmin_matches_scan() {
        for en in [Enumeration::CANONICAL, Enumeration::ALTERNATE] {
            argmin_scan(en);
        }
    }

    fn argmin_scan(en: Enumeration) {
        let pool: Vec<Ordinal> = (0..400u128).map(|n| en.ordinal(n)).collect();
        let bounds = ["0", "1", "2", "5", "6", "w", "w+3", "w*2", "w*3+1", "w^2", "w^2+w*2", "w^3"];
        for lo in bounds.iter().map(|s| o(s)) {
            for hi in bounds.iter().map(|s| o(s)) {
                let got = en.argmin_in(&lo, &hi);
                // the first ordinal of the enumeration inside [lo, hi)
                let scan = pool.iter().find(|x| **x >= lo && **x < hi).cloned();
                if lo >= hi {
                    assert_eq!(got, None);
                } else if let Some(s) = scan {
                    assert_eq!(got, Some(s), "[{lo}, {hi})");
                }
            }
        }
    }

    fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        proptest::collection::vec((0u32..4, 1u64..6), 0..4)
            .prop_map(|ts| Ordinal::from_terms(ts).unwrap())
    }

    proptest! {
        #[test]
        fn preceding_below_matches_scan(a in arb_ordinal(), alt in any::<bool>()) {
            let en = if alt { Enumeration::ALTERNATE } else { Enumeration::CANONICAL };
            let key = en.key(&a);
            let mut want: Vec<Ordinal> = (0..=key.weight + 1)
                .flat_map(|w| en.weight_class(w))
                .filter(|g| *g < a && en.key(g) < key)
                .collect();
            want.sort();
            prop_assert_eq!(en.preceding_below(&a), want);
        }

        #[test]
        fn trichotomy(a in arb_ordinal(), b in arb_ordinal()) {
            let n = [a < b, a == b, a > b].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
        }

        #[test]
        fn add_associative_with_identity(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            let l = a.add(&b).unwrap().add(&c).unwrap();
            let r = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(a.add(&Ordinal::zero()).unwrap(), a.clone());
            prop_assert_eq!(Ordinal::zero().add(&a).unwrap(), a);
        }

        #[test]
        fn classify_successor(a in arb_ordinal()) {
            prop_assert_eq!(a.succ().classify(), OrdinalKind::Successor(a));
        }

        #[test]
        fn sub_left_round_trip(a in arb_ordinal(), b in arb_ordinal()) {
            let s = a.add(&b).unwrap();
            let d = a.sub_left(&s).unwrap();
            prop_assert_eq!(a.add(&d).unwrap(), s);
        }
    }
}
