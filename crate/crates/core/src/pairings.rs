//! Pairings (perfect matchings) of `{1, ..., 2k}` and the combinatorics the
//! Weingarten formula needs: join block counts, coset types and the
//! "index fits pairing" predicate.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::matrix::ExponentMatrix;

/// Largest `k` that [`enumerate_pairings`] accepts without an explicit limit.
pub const DEFAULT_PAIRING_LIMIT: usize = 8;

const UNSET: u8 = u8::MAX;

/// A perfect matching of `{1, ..., 2k}`.
///
/// Stored 0-based in canonical form: `l < r` inside each pair and pairs
/// sorted by `l`. Two pairings are equal iff their canonical forms are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    pairs: Vec<(u8, u8)>,
    partner: Vec<u8>,
}

impl Pairing {
    /// Builds a pairing from 1-based pairs in any order.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let m = 2 * pairs.len();
        if m > usize::from(UNSET) {
            return Err(Error::contract(format!("pairing of {m} points is too large")));
        }
        let mut partner = vec![UNSET; m];
        for &(x, y) in pairs {
            if x == y || x == 0 || y == 0 || x > m || y > m {
                return Err(Error::contract(format!(
                    "({x} {y}) is not a pair of distinct points in 1..={m}"
                )));
            }
            let (x, y) = (x - 1, y - 1);
            if partner[x] != UNSET || partner[y] != UNSET {
                return Err(Error::contract(format!(
                    "point repeated in pair ({} {})",
                    x + 1,
                    y + 1
                )));
            }
            partner[x] = y as u8;
            partner[y] = x as u8;
        }
        Ok(Self::from_partner(partner))
    }

    fn from_partner(partner: Vec<u8>) -> Self {
        let pairs = partner
            .iter()
            .enumerate()
            .filter(|&(l, &r)| l < usize::from(r))
            .map(|(l, &r)| (l as u8, r))
            .collect();
        Pairing { pairs, partner }
    }

    /// The pairing `(1 2)(3 4)...(2k-1 2k)`.
    pub fn identity(k: usize) -> Self {
        let partner = (0..2 * k).map(|x| (x ^ 1) as u8).collect();
        Self::from_partner(partner)
    }

    /// Number of pairs `k`.
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Canonical 1-based pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .map(|&(l, r)| (usize::from(l) + 1, usize::from(r) + 1))
            .collect()
    }

    /// 0-based partner of 0-based point `x`.
    #[inline]
    pub(crate) fn partner(&self, x: usize) -> usize {
        usize::from(self.partner[x])
    }

    /// 0-based index of the pair (string) containing 0-based point `x`,
    /// pairs numbered in canonical order.
    fn string_labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.partner.len()];
        for (idx, &(l, r)) in self.pairs.iter().enumerate() {
            lab[usize::from(l)] = idx;
            lab[usize::from(r)] = idx;
        }
        lab
    }
}

impl Ord for Pairing {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pairs.cmp(&other.pairs)
    }
}

impl PartialOrd for Pairing {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "()");
        }
        for &(l, r) in &self.pairs {
            write!(f, "({} {})", l + 1, r + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Pairing {
    type Err = Error;

    /// Parses the block syntax `"(1 2)(3 4)"`; `"()"` is the empty pairing.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut rest = s.trim_start();
        let base = s.len();
        while !rest.is_empty() {
            let pos = base - rest.len();
            let body = rest.strip_prefix('(').ok_or_else(|| Error::Parse {
                pos,
                msg: "expected '('".into(),
            })?;
            let close = body.find(')').ok_or_else(|| Error::Parse {
                pos,
                msg: "unclosed block".into(),
            })?;
            let nums: Vec<&str> = body[..close].split_whitespace().collect();
            match nums.as_slice() {
                [] => {}
                [x, y] => {
                    let parse = |t: &str| {
                        t.parse::<usize>().map_err(|_| Error::Parse {
                            pos: pos + 1,
                            msg: format!("bad point {t:?}"),
                        })
                    };
                    pairs.push((parse(x)?, parse(y)?));
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "a block must hold exactly two points".into(),
                    })
                }
            }
            rest = body[close + 1..].trim_start();
        }
        Pairing::from_pairs(&pairs)
    }
}

/// A multi-index `(i_1, ..., i_{2k})` of positive labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.len() % 2 != 0 {
            return Err(Error::contract("multi-index must have even length"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Number of pairings of `2k` points, `(2k-1)!!`.
pub fn pairing_count(k: usize) -> usize {
    (1..=k).map(|i| 2 * i - 1).product()
}

/// All pairings of `{1, ..., 2k}` in lexicographic order of canonical form.
pub fn enumerate_pairings(k: usize) -> Result<Vec<Pairing>> {
    enumerate_pairings_with_limit(k, DEFAULT_PAIRING_LIMIT)
}

pub fn enumerate_pairings_with_limit(k: usize, limit: usize) -> Result<Vec<Pairing>> {
    if k > limit {
        return Err(Error::Resource {
            what: format!("pairing enumeration at k={k}"),
            limit,
        });
    }
    if 2 * k > usize::from(UNSET) {
        return Err(Error::Resource {
            what: format!("pairing enumeration at k={k}"),
            limit: usize::from(UNSET) / 2,
        });
    }
    if k == 0 {
        return Ok(vec![Pairing::from_partner(Vec::new())]);
    }
    let m = 2 * k;
    let mut out = Vec::with_capacity(pairing_count(k));
    let mut partner = vec![UNSET; m];
    // chosen (l, r) per level; the smallest free point is always paired next
    let mut stack: Vec<(usize, usize)> = Vec::with_capacity(k);
    let mut l = 0;
    let mut start = 1;
    loop {
        match (start..m).find(|&r| partner[r] == UNSET) {
            Some(r) => {
                partner[l] = r as u8;
                partner[r] = l as u8;
                stack.push((l, r));
                if stack.len() == k {
                    out.push(Pairing::from_partner(partner.clone()));
                    let (pl, pr) = stack.pop().expect("nonempty");
                    partner[pl] = UNSET;
                    partner[pr] = UNSET;
                    l = pl;
                    start = pr + 1;
                } else {
                    l = partner.iter().position(|&p| p == UNSET).expect("free point");
                    start = l + 1;
                }
            }
            None => match stack.pop() {
                None => break,
                Some((pl, pr)) => {
                    partner[pl] = UNSET;
                    partner[pr] = UNSET;
                    l = pl;
                    start = pr + 1;
                }
            },
        }
    }
    Ok(out)
}

/// Shared, memoized enumeration used by the oracle.
pub(crate) fn cached_pairings(k: usize) -> Result<Arc<Vec<Pairing>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Pairing>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache poisoned").get(&k) {
        return Ok(Arc::clone(v));
    }
    let v = Arc::new(enumerate_pairings_with_limit(k, usize::MAX)?);
    cache
        .lock()
        .expect("cache poisoned")
        .entry(k)
        .or_insert_with(|| Arc::clone(&v));
    Ok(v)
}

fn check_same_k(p: &Pairing, s: &Pairing) -> Result<()> {
    if p.k() != s.k() {
        return Err(Error::contract(format!(
            "pairings of different sizes (k={} vs k={})",
            p.k(),
            s.k()
        )));
    }
    Ok(())
}

/// `|p v s|`: connected components of the graph whose edges are the pairs
/// of `p` and of `s`.
pub fn join_block_count(p: &Pairing, s: &Pairing) -> Result<usize> {
    check_same_k(p, s)?;
    Ok(join_blocks_unchecked(p, s))
}

#[inline]
fn find(parent: &mut [u8], mut x: usize) -> usize {
    while usize::from(parent[x]) != x {
        let gp = parent[usize::from(parent[x])];
        parent[x] = gp;
        x = usize::from(gp);
    }
    x
}

pub(crate) fn join_blocks_unchecked(p: &Pairing, s: &Pairing) -> usize {
    let m = p.partner.len();
    let mut parent = [0u8; 256];
    for (i, slot) in parent.iter_mut().enumerate().take(m) {
        *slot = i as u8;
    }
    let mut blocks = m;
    for pairing in [p, s] {
        for &(l, r) in &pairing.pairs {
            let a = find(&mut parent, usize::from(l));
            let b = find(&mut parent, usize::from(r));
            if a != b {
                parent[a] = b as u8;
                blocks -= 1;
            }
        }
    }
    blocks
}

/// Coset type of `(p, s)`: half-sizes of the blocks of `p v s`, sorted
/// descending. It is a partition of `k` and a complete invariant of the
/// pair under simultaneous relabelling.
pub fn coset_type(p: &Pairing, s: &Pairing) -> Result<Vec<usize>> {
    check_same_k(p, s)?;
    Ok(coset_type_unchecked(p, s))
}

pub(crate) fn coset_type_unchecked(p: &Pairing, s: &Pairing) -> Vec<usize> {
    // each block of the join is an alternating cycle
    let m = p.partner.len();
    let mut seen = vec![false; m];
    let mut parts = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        loop {
            let y = p.partner(x);
            seen[x] = true;
            seen[y] = true;
            len += 1;
            x = s.partner(y);
            if x == start {
                break;
            }
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// The delta symbol: does every pair of `p` join equal entries of `i`?
pub fn fits(p: &Pairing, i: &MultiIndex) -> Result<bool> {
    if i.len() != 2 * p.k() {
        return Err(Error::contract(format!(
            "multi-index of length {} against a pairing of {} points",
            i.len(),
            2 * p.k()
        )));
    }
    Ok(fits_labels(p, i.entries()))
}

#[inline]
pub(crate) fn fits_labels(p: &Pairing, labels: &[u32]) -> bool {
    p.pairs
        .iter()
        .all(|&(l, r)| labels[usize::from(l)] == labels[usize::from(r)])
}

/// Row-major flattening of `prod u_ij^{a_ij}` into row and column
/// multi-indices (labels are 1-based).
pub fn multi_indices_of(a: &ExponentMatrix) -> Result<(MultiIndex, MultiIndex)> {
    let total = a.total_degree();
    if total % 2 != 0 {
        return Err(Error::parity(format!(
            "total degree {total} is odd; the integral vanishes"
        )));
    }
    let mut rows = Vec::with_capacity(total as usize);
    let mut cols = Vec::with_capacity(total as usize);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for _ in 0..a.get(i, j) {
                rows.push(i as u32 + 1);
                cols.push(j as u32 + 1);
            }
        }
    }
    Ok((MultiIndex(rows), MultiIndex(cols)))
}

/// Pairings fitting `labels`, built directly as products of pairings of
/// each equality class (never by filtering the whole of `D_k`).
pub fn fitting_pairings(labels: &MultiIndex) -> Result<Vec<Pairing>> {
    let labels = labels.entries();
    let mut classes: Vec<(u32, Vec<usize>)> = Vec::new();
    for (pos, &lab) in labels.iter().enumerate() {
        match classes.iter_mut().find(|(l, _)| *l == lab) {
            Some((_, members)) => members.push(pos),
            None => classes.push((lab, vec![pos])),
        }
    }
    if classes.iter().any(|(_, m)| m.len() % 2 != 0) {
        return Ok(Vec::new());
    }
    let mut partial: Vec<Vec<u8>> = vec![vec![UNSET; labels.len()]];
    for (_, members) in &classes {
        let local = cached_pairings(members.len() / 2)?;
        let mut next = Vec::with_capacity(partial.len() * local.len());
        for base in &partial {
            for lp in local.iter() {
                let mut partner = base.clone();
                for &(l, r) in &lp.pairs {
                    let (x, y) = (members[usize::from(l)], members[usize::from(r)]);
                    partner[x] = y as u8;
                    partner[y] = x as u8;
                }
                next.push(partner);
            }
        }
        partial = next;
    }
    let mut out: Vec<Pairing> = partial.into_iter().map(Pairing::from_partner).collect();
    out.sort();
    Ok(out)
}

/// String-incidence matrix of two pairings: `a_ij = #{x : x in p_i, x in s_j}`
/// with strings numbered in canonical order.
pub(crate) fn incidence(p: &Pairing, s: &Pairing) -> Result<Vec<Vec<u32>>> {
    check_same_k(p, s)?;
    let k = p.k();
    let (lp, ls) = (p.string_labels(), s.string_labels());
    let mut a = vec![vec![0u32; k]; k];
    for x in 0..2 * k {
        a[lp[x]][ls[x]] += 1;
    }
    Ok(a)
}
