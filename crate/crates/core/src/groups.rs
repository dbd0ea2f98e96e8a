//! Word metrics in Baumslag–Solitar groups `BS(q, p) = <a, b | a^q = b a^p b^-1>`.
//!
//! Equality is decided by pinch reduction: `b a^{pk} b^-1 -> a^{qk}` and
//! `b^-1 a^{qk} b -> a^{pk}` plus free cancellation. Ball searches hash a
//! canonical normal form `a^{r_1} b^{e_1} ... a^{r_k} b^{e_k} a^{t}` with
//! `0 <= r_i < |q|` before `b` and `0 <= r_i < |p|` before `b^-1`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::exec::Exec;

/// Report tags for checks built on this module.
pub const TAGS: &[&str] = &["groups.log-distortion"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub q: i64,
    pub p: i64,
}

impl Presentation {
    pub fn new(q: i64, p: i64) -> Result<Self> {
        if q == 0 || p == 0 {
            return precondition("BS(q, p) needs q and p nonzero");
        }
        Ok(Presentation { q, p })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BS({}, {})", self.q, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    A,
    B,
}

/// Run-length encoded word; exponents nonzero, neighbouring generators differ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    blocks: Vec<(Generator, BigInt)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn from_blocks<I: IntoIterator<Item = (Generator, BigInt)>>(blocks: I) -> Self {
        let mut w = GroupWord::identity();
        for (g, e) in blocks {
            w.push(g, e);
        }
        w
    }

    pub fn a_power(n: impl Into<BigInt>) -> Self {
        Self::from_blocks([(Generator::A, n.into())])
    }

    /// Appends `g^e`, merging with the last block.
    pub fn push(&mut self, g: Generator, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some((last, exp)) = self.blocks.last_mut() {
            if *last == g {
                *exp += e;
                if exp.is_zero() {
                    self.blocks.pop();
                }
                return;
            }
        }
        self.blocks.push((g, e));
    }

    pub fn blocks(&self) -> &[(Generator, BigInt)] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of letters.
    pub fn length(&self) -> BigInt {
        self.blocks.iter().map(|(_, e)| e.abs()).sum()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for (g, e) in &other.blocks {
            w.push(*g, e.clone());
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_blocks(self.blocks.iter().rev().map(|(g, e)| (*g, -e)))
    }

    /// Letters `(generator, +1 | -1)`, with `a` blocks kept whole.
    fn letters(&self) -> impl Iterator<Item = (Generator, BigInt)> + '_ {
        self.blocks.iter().flat_map(|(g, e)| {
            let (count, step) = match g {
                Generator::A => (1usize, e.clone()),
                Generator::B => (e.abs().to_usize().expect("b exponent fits in memory"), e.signum()),
            };
            std::iter::repeat_n((*g, step), count)
        })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(g, e)| {
                let name = match g {
                    Generator::A => "a",
                    Generator::B => "b",
                };
                if e.is_one() {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses whitespace-separated `a`, `b`, `a^k`, `b^-k` tokens; `1` is the
    /// identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = GroupWord::identity();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => (n, e.parse::<BigInt>().map_err(|_| Error::Config(format!("bad exponent in {token:?}")))?),
                None => (token, BigInt::one()),
            };
            let g = match name {
                "a" => Generator::A,
                "b" => Generator::B,
                "A" => {
                    w.push(Generator::A, -exp);
                    continue;
                }
                "B" => {
                    w.push(Generator::B, -exp);
                    continue;
                }
                _ => return Err(Error::Config(format!("unknown generator in {token:?}"))),
            };
            w.push(g, exp);
        }
        Ok(w)
    }
}

/// Pinch reduction to a fixpoint with a single left-to-right stack pass.
/// The result is empty exactly when `w` is trivial in the group.
pub fn britton_reduce(w: &GroupWord, pres: Presentation) -> GroupWord {
    let (q, p) = (BigInt::from(pres.q), BigInt::from(pres.p));
    let mut stack = GroupWord::identity();
    for (g, e) in w.letters() {
        if g == Generator::A {
            stack.push(g, e);
            continue;
        }
        // Pattern on the stack: b^{-e} a^m, with m = 0 when the a block is absent.
        let blocks = &stack.blocks;
        let (m, before) = match blocks.last() {
            Some((Generator::A, m)) => (m.clone(), blocks.len().checked_sub(2).map(|i| &blocks[i])),
            _ => (BigInt::zero(), blocks.last()),
        };
        let pinch = match before {
            Some((Generator::B, f)) if f.signum() == -&e => {
                // b a^m b^-1 with p | m, or b^-1 a^m b with q | m.
                let (div, mul) = if e.is_negative() { (&p, &q) } else { (&q, &p) };
                m.is_multiple_of(div).then(|| &m / div * mul)
            }
            _ => None,
        };
        match pinch {
            Some(replacement) => {
                if !m.is_zero() {
                    stack.blocks.pop();
                }
                // Remove one b letter from the block below.
                stack.push(Generator::B, e.clone());
                stack.push(Generator::A, replacement);
            }
            None => stack.push(g, e),
        }
    }
    stack
}

/// Integer type for normal-form exponents.
pub trait Exponent: Clone + Eq + Hash + Integer + Signed + fmt::Debug + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Exponent for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exponent for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Canonical form `a^{r_1} b^{e_1} ... a^{r_k} b^{e_k} a^{tail}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm<T: Exponent = BigInt> {
    pub prefix: Vec<(T, i8)>,
    pub tail: T,
}

impl<T: Exponent> NormalForm<T> {
    pub fn identity() -> Self {
        NormalForm { prefix: Vec::new(), tail: T::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.prefix.is_empty() && self.tail.is_zero()
    }

    /// Right multiplication by `a^m`.
    pub fn mul_a(&mut self, m: &T) {
        self.tail = self.tail.clone() + m.clone();
    }

    /// Right multiplication by `b^e`, `e = +-1`.
    pub fn mul_b(&mut self, e: i8, pres: Presentation) {
        let (q, p) = (T::from_i64(pres.q), T::from_i64(pres.p));
        if let Some((r, last)) = self.prefix.last() {
            if *last == -e {
                // b a^m b^-1 = a^{qm/p} when p | m; b^-1 a^m b = a^{pm/q} when q | m.
                let (div, mul) = if *last > 0 { (&p, &q) } else { (&q, &p) };
                if self.tail.is_multiple_of(div) {
                    let r = r.clone();
                    self.tail = r + self.tail.clone() / div.clone() * mul.clone();
                    self.prefix.pop();
                    return;
                }
            }
        }
        // a^{qj} b = b a^{pj} and a^{pj} b^-1 = b^-1 a^{qj}.
        let (div, mul) = if e > 0 { (&q, &p) } else { (&p, &q) };
        let r = self.tail.mod_floor(&div.abs());
        let j = (self.tail.clone() - r.clone()) / div.clone();
        self.prefix.push((r, e));
        self.tail = j * mul.clone();
    }

    pub fn mul_word(&mut self, w: &GroupWord, pres: Presentation, convert: impl Fn(&BigInt) -> T) {
        for (g, e) in w.letters() {
            match g {
                Generator::A => self.mul_a(&convert(&e)),
                Generator::B => self.mul_b(if e.is_positive() { 1 } else { -1 }, pres),
            }
        }
    }

    pub fn to_word(&self) -> GroupWord {
        let mut w = GroupWord::identity();
        for (r, e) in &self.prefix {
            w.push(Generator::A, r.to_big());
            w.push(Generator::B, BigInt::from(*e));
        }
        w.push(Generator::A, self.tail.to_big());
        w
    }
}

pub fn normal_form(w: &GroupWord, pres: Presentation) -> NormalForm {
    let mut nf = NormalForm::identity();
    nf.mul_word(w, pres, |e| e.clone());
    nf
}

pub fn equal_in_group(u: &GroupWord, v: &GroupWord, pres: Presentation) -> bool {
    britton_reduce(&u.concat(&v.inverse()), pres).is_empty()
}

const STEPS: [(Generator, i8); 4] = [(Generator::A, 1), (Generator::A, -1), (Generator::B, 1), (Generator::B, -1)];

/// Ball of the Cayley graph, one node per group element, in order of
/// discovery so that lengths and witnesses are deterministic.
#[derive(Debug)]
pub struct CayleyBall {
    pub presentation: Presentation,
    pub radius: usize,
    /// `false` when the node cap stopped the search early; lengths found are
    /// still exact.
    pub complete: bool,
    nodes: Vec<NormalForm<i64>>,
    parent: Vec<(u32, u8)>,
    depth: Vec<u8>,
    index: HashMap<NormalForm<i64>, u32>,
}

impl CayleyBall {
    /// Breadth-first search to `radius` or until `max_nodes` elements are
    /// stored. Frontier expansion runs through `exec`; insertion is
    /// sequential in frontier order.
    pub fn explore(pres: Presentation, radius: usize, max_nodes: usize, exec: Exec) -> Result<Self> {
        let growth = (pres.q.unsigned_abs().max(pres.p.unsigned_abs()) as f64).log2();
        if radius > 255 || growth * radius as f64 > 60.0 {
            return precondition("radius too large for 64-bit exponents");
        }
        let mut ball = CayleyBall {
            presentation: pres,
            radius,
            complete: true,
            nodes: vec![NormalForm::identity()],
            parent: vec![(u32::MAX, 0)],
            depth: vec![0],
            index: HashMap::new(),
        };
        ball.index.insert(NormalForm::identity(), 0);
        let mut frontier = 0..1usize;
        for level in 1..=radius {
            let nodes = &ball.nodes;
            let expanded = exec.map(frontier.len(), |k| {
                let i = frontier.start + k;
                STEPS.map(|(g, e)| {
                    let mut nf = nodes[i].clone();
                    match g {
                        Generator::A => nf.mul_a(&(e as i64)),
                        Generator::B => nf.mul_b(e, pres),
                    }
                    nf
                })
            });
            let start = ball.nodes.len();
            for (k, next) in expanded.into_iter().enumerate() {
                for (s, nf) in next.into_iter().enumerate() {
                    if ball.index.contains_key(&nf) {
                        continue;
                    }
                    if ball.nodes.len() >= max_nodes {
                        ball.complete = false;
                        ball.radius = level - 1;
                        return Ok(ball);
                    }
                    ball.index.insert(nf.clone(), ball.nodes.len() as u32);
                    ball.nodes.push(nf);
                    ball.parent.push(((frontier.start + k) as u32, s as u8));
                    ball.depth.push(level as u8);
                }
            }
            frontier = start..ball.nodes.len();
        }
        Ok(ball)
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    fn lookup(&self, w: &GroupWord) -> Option<usize> {
        let mut nf = NormalForm::<i64>::identity();
        for (g, e) in w.letters() {
            match g {
                Generator::A => nf.mul_a(&e.to_i64()?),
                Generator::B => nf.mul_b(if e.is_positive() { 1 } else { -1 }, self.presentation),
            }
            // Exponents past the ball's reach cannot be inside it.
            if nf.tail.unsigned_abs() > 1 << 61 {
                return None;
            }
        }
        self.index.get(&nf).map(|&i| i as usize)
    }

    /// Exact word length of `w` if it lies in the ball.
    pub fn length(&self, w: &GroupWord) -> Option<usize> {
        self.lookup(w).map(|i| self.depth[i] as usize)
    }

    /// A shortest word for `w`, if it lies in the ball.
    pub fn witness(&self, w: &GroupWord) -> Option<GroupWord> {
        let mut i = self.lookup(w)?;
        let mut letters = Vec::new();
        while i != 0 {
            let (up, s) = self.parent[i];
            letters.push(STEPS[s as usize]);
            i = up as usize;
        }
        Some(GroupWord::from_blocks(letters.into_iter().rev().map(|(g, e)| (g, BigInt::from(e)))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LengthResult {
    Exact { length: usize, witness: String },
    ExceedsRadius { radius: usize, ball_size: usize },
}

/// Word length of a target by breadth-first search.
pub fn word_length_bfs(pres: Presentation, target: &GroupWord, radius: usize, max_nodes: usize, exec: Exec) -> Result<LengthResult> {
    let ball = CayleyBall::explore(pres, radius, max_nodes, exec)?;
    Ok(match ball.witness(target) {
        Some(w) => LengthResult::Exact { length: ball.length(target).unwrap(), witness: w.to_string() },
        None => LengthResult::ExceedsRadius { radius: ball.radius, ball_size: ball.size() },
    })
}

/// Maps `BS(q, p)` to an isomorphic presentation with `q > p > 0`, returning
/// whether `b` must be inverted. Mixed signs are rejected.
fn positive_form(pres: Presentation) -> Result<(i64, i64, bool)> {
    let (mut q, mut p) = (pres.q, pres.p);
    if q < 0 && p < 0 {
        (q, p) = (-q, -p);
    }
    if q <= 0 || p <= 0 {
        return precondition(format!("{pres}: the construction needs q and p of the same sign"));
    }
    if q == p {
        return precondition(format!("{pres}: a is undistorted when |q| = |p|"));
    }
    Ok(if q > p { (q, p, false) } else { (p, q, true) })
}

/// The integer in `(p k / q - 1, p k / q]`.
pub fn phi(q: i64, p: i64, k: &BigInt) -> BigInt {
    (k * p).div_floor(&BigInt::from(q))
}

/// Word for `a^{pk}`: `b W(phi(k)) b^-1 a^r` with `pk = q phi(k) + r`.
fn scaled_power_word(q: i64, p: i64, k: &BigInt, out: &mut GroupWord) {
    let f = phi(q, p, k);
    let r = k * p - &f * q;
    if f.is_zero() {
        out.push(Generator::A, r);
        return;
    }
    out.push(Generator::B, BigInt::one());
    scaled_power_word(q, p, &f, out);
    out.push(Generator::B, -BigInt::one());
    out.push(Generator::A, r);
}

/// A word for `a^n` of length `O(log n)`: `n = q k + j`, `a^n = b W(k) b^-1 a^j`.
pub fn log_word_construct(pres: Presentation, n: &BigInt) -> Result<GroupWord> {
    let (q, p, flip) = positive_form(pres)?;
    if !n.is_positive() {
        return precondition("construction needs n >= 1");
    }
    let (k, j) = n.div_mod_floor(&BigInt::from(q));
    let mut w = GroupWord::identity();
    if !k.is_zero() {
        w.push(Generator::B, BigInt::one());
        scaled_power_word(q, p, &k, &mut w);
        w.push(Generator::B, -BigInt::one());
    }
    w.push(Generator::A, j);
    if flip {
        w = GroupWord::from_blocks(w.blocks.into_iter().map(|(g, e)| if g == Generator::B { (g, -e) } else { (g, e) }));
    }
    Ok(w)
}

/// Length bound for [`log_word_construct`]: each recursion level costs at
/// most `q + 1` letters and divides `k` by at least `q / p`.
pub fn construction_bound(pres: Presentation, n: f64) -> Result<f64> {
    let (q, p, _) = positive_form(pres)?;
    let (q, p) = (q as f64, p as f64);
    Ok(2.0 * q + (q + 1.0) * ((n + 1.0).ln() / (q / p).ln() + 1.0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthKind {
    Exact,
    Bound,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    #[serde(serialize_with = "as_decimal")]
    pub n: BigInt,
    pub length: usize,
    pub kind: LengthKind,
    pub witness: String,
    /// Length of the constructed word, where the construction applies.
    pub constructed: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistortionProfile {
    pub presentation: Presentation,
    pub radius: usize,
    pub ball_size: usize,
    pub entries: Vec<ProfileEntry>,
    /// `min log(length) / log n` over the entries with `n >= 16`; an
    /// estimate of the liminf, not a limit.
    pub liminf_estimate: Option<f64>,
}

/// `|a^n|` for `n = 1..=n_max` and for the extra sample exponents: exact
/// from the ball when reached, else the constructed word length.
pub fn distortion_profile(
    pres: Presentation,
    n_max: u64,
    extra: &[BigInt],
    radius: usize,
    max_nodes: usize,
    exec: Exec,
) -> Result<DistortionProfile> {
    let ball = CayleyBall::explore(pres, radius, max_nodes, exec)?;
    let mut ns: Vec<BigInt> = (1..=n_max).map(BigInt::from).collect();
    ns.extend(extra.iter().filter(|n| **n > BigInt::from(n_max)).cloned());
    let entries = exec.map_slice(&ns, |n| {
        let target = GroupWord::a_power(n.clone());
        let constructed = log_word_construct(pres, n).ok();
        let c_len = constructed.as_ref().map(|w| w.length().to_usize().unwrap());
        match ball.witness(&target) {
            Some(w) => ProfileEntry {
                n: n.clone(),
                length: ball.length(&target).unwrap(),
                kind: LengthKind::Exact,
                witness: w.to_string(),
                constructed: c_len,
            },
            None => match constructed {
                Some(w) => ProfileEntry {
                    n: n.clone(),
                    length: c_len.unwrap(),
                    kind: LengthKind::Bound,
                    witness: w.to_string(),
                    constructed: c_len,
                },
                None => {
                    let len = n.to_usize().unwrap_or(usize::MAX);
                    ProfileEntry { n: n.clone(), length: len, kind: LengthKind::Bound, witness: format!("a^{n}"), constructed: None }
                }
            },
        }
    });
    let liminf_estimate = entries
        .iter()
        .filter(|e| e.n >= BigInt::from(16))
        .map(|e| (e.length as f64).ln() / log_big(&e.n))
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
    Ok(DistortionProfile { presentation: pres, radius: ball.radius, ball_size: ball.size(), entries, liminf_estimate })
}

fn as_decimal<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn log_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 60;
        (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// A random word with `letters` single-letter steps.
pub fn random_word(letters: usize, rng: &mut impl Rng) -> GroupWord {
    GroupWord::from_blocks((0..letters).map(|_| {
        let (g, e) = STEPS[rng.gen_range(0..4)];
        (g, BigInt::from(e))
    }))
}

/// Seeded random words for soundness checks.
pub fn random_words(count: usize, max_letters: usize, seed: u64) -> Vec<GroupWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_letters);
            random_word(n, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(q: i64, p: i64) -> Presentation {
        Presentation::new(q, p).unwrap()
    }

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn relation_instances() {
        assert!(britton_reduce(&w("b a^2 b^-1 a^-4"), bs(4, 2)).is_empty());
        assert!(britton_reduce(&w("a^3 a^-3"), bs(4, 2)).is_empty());
        let r = britton_reduce(&w("b a b^-1"), bs(3, 2));
        assert_eq!(r, w("b a b^-1"));
        assert!(Presentation::new(0, 1).is_err());
    }

    #[test]
    fn normal_form_matches_reduction() {
        let pres = bs(2, 1);
        for word in random_words(300, 30, 11) {
            let trivial = britton_reduce(&word, pres).is_empty();
            assert_eq!(trivial, normal_form(&word, pres).is_identity(), "{word}");
        }
        let nf = normal_form(&w("b a^4 b^-1"), pres);
        assert_eq!(nf.to_word(), w("a^8"));
    }

    #[test]
    fn ball_lengths() {
        let pres = bs(2, 1);
        let r = word_length_bfs(pres, &w("a^8"), 8, 1 << 22, Exec::Sequential).unwrap();
        match r {
            LengthResult::Exact { length, witness } => {
                assert_eq!(length, 6);
                assert!(equal_in_group(&w(&witness), &w("a^8"), pres));
            }
            other => panic!("{other:?}"),
        }
        let id = word_length_bfs(pres, &GroupWord::identity(), 3, 1000, Exec::Sequential).unwrap();
        assert!(matches!(id, LengthResult::Exact { length: 0, .. }));
        let a = word_length_bfs(pres, &w("a"), 1, 1000, Exec::Sequential).unwrap();
        assert!(matches!(a, LengthResult::Exact { length: 1, .. }));
        let far = word_length_bfs(pres, &w("a^1000"), 3, 1000, Exec::Sequential).unwrap();
        assert!(matches!(far, LengthResult::ExceedsRadius { radius: 3, .. }));
    }

    #[test]
    fn construction() {
        assert_eq!(phi(3, 2, &BigInt::from(5)), BigInt::from(3));
        let pres = bs(2, 1);
        let one = log_word_construct(pres, &BigInt::one()).unwrap();
        assert_eq!(one.to_string(), "a");
        let n = BigInt::from(1024);
        let word = log_word_construct(pres, &n).unwrap();
        assert!(word.length() <= BigInt::from(35));
        assert!(equal_in_group(&word, &GroupWord::a_power(n), pres));
        assert!(log_word_construct(bs(2, -1), &BigInt::one()).is_err());
        assert!(log_word_construct(bs(2, 2), &BigInt::one()).is_err());
        // BS(1, 2) is BS(2, 1) with b inverted.
        let flipped = log_word_construct(bs(1, 2), &BigInt::from(77)).unwrap();
        assert!(equal_in_group(&flipped, &GroupWord::a_power(77), bs(1, 2)));
    }

    #[test]
    fn construction_within_bound() {
        for (q, p) in [(2, 1), (3, 2), (5, 2), (-3, -1)] {
            let pres = bs(q, p);
            for n in (1..3000).step_by(37) {
                let word = log_word_construct(pres, &BigInt::from(n)).unwrap();
                let len = word.length().to_f64().unwrap();
                assert!(len <= construction_bound(pres, n as f64).unwrap(), "{pres} {n}");
                assert!(equal_in_group(&word, &GroupWord::a_power(n), pres));
            }
        }
    }

    #[test]
    fn small_profile() {
        let p = distortion_profile(bs(2, 1), 20, &[BigInt::from(1u64 << 30)], 7, 1 << 20, Exec::Parallel).unwrap();
        assert_eq!(p.entries.len(), 21);
        for e in &p.entries {
            if let Some(c) = e.constructed {
                assert!(e.length <= c);
            }
        }
        assert_eq!(p.entries.last().unwrap().kind, LengthKind::Bound);
        assert!(p.liminf_estimate.unwrap() > 0.0);
    }

    #[test]
    fn ball_size_matches_brute_force() {
        // Enumerate every word of length <= 5 and deduplicate with the
        // reduction oracle alone.
        let pres = bs(2, 1);
        let mut words = vec![GroupWord::identity()];
        let mut level = words.clone();
        for _ in 0..5 {
            level = level
                .iter()
                .flat_map(|w| STEPS.iter().map(move |(g, e)| w.concat(&GroupWord::from_blocks([(*g, BigInt::from(*e))]))))
                .collect();
            words.extend(level.iter().cloned());
        }
        let mut distinct: Vec<GroupWord> = Vec::new();
        for w in words {
            if !distinct.iter().any(|d| equal_in_group(d, &w, pres)) {
                distinct.push(w);
            }
        }
        let ball = CayleyBall::explore(pres, 5, 1 << 20, Exec::Sequential).unwrap();
        assert_eq!(ball.size(), distinct.len());
    }
}
