//! The Apollonian group `A = ⟨S₁..S₄⟩`, its dual `A⊥ = ⟨S₁ᵀ..S₄ᵀ⟩` and the
//! super-Apollonian group generated by all eight.
//!
//! Words are stored in product order: `"12'3"` is `S₁·S₂ᵀ·S₃`, so `S₃` acts
//! first on a configuration `W ↦ U·W`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::duality_operator;
use crate::limits::Limits;
use crate::matrix::{Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S1,
    S2,
    S3,
    S4,
    S1p,
    S2p,
    S3p,
    S4p,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::S1,
        Generator::S2,
        Generator::S3,
        Generator::S4,
        Generator::S1p,
        Generator::S2p,
        Generator::S3p,
        Generator::S4p,
    ];
    pub const APOLLONIAN: [Generator; 4] =
        [Generator::S1, Generator::S2, Generator::S3, Generator::S4];
    pub const DUAL: [Generator; 4] = [
        Generator::S1p,
        Generator::S2p,
        Generator::S3p,
        Generator::S4p,
    ];

    /// `index` is 0-based.
    pub fn new(index: usize, dual: bool) -> Self {
        assert!(index < 4, "generator index out of range");
        Generator::ALL[index + if dual { 4 } else { 0 }]
    }

    /// 0-based circle index the generator acts on.
    pub fn index(self) -> usize {
        (self as usize) % 4
    }

    pub fn is_dual(self) -> bool {
        (self as usize) >= 4
    }

    /// The `⊥` partner.
    pub fn partner(self) -> Self {
        Generator::new(self.index(), !self.is_dual())
    }

    pub fn matrix(self) -> GroupElement {
        GroupElement(self.apply_left(&Matrix::identity(4)))
    }

    /// `G·X` without a full matrix product.
    ///
    /// `S_i` replaces row `i` by `-rᵢ + 2Σ_{j≠i} r_j`; `S_iᵀ` negates row `i`
    /// and adds `2rᵢ` to every other row.
    pub fn apply_left<T: Scalar>(self, x: &Matrix<T>) -> Matrix<T> {
        assert_eq!(x.nrows(), 4, "generators act on 4-row matrices");
        let i = self.index();
        let two = T::one() + T::one();
        let cols = x.ncols();
        if self.is_dual() {
            Matrix::from_fn(4, cols, |r, c| {
                if r == i {
                    -x[(i, c)].clone()
                } else {
                    x[(r, c)].clone() + two.clone() * x[(i, c)].clone()
                }
            })
        } else {
            Matrix::from_fn(4, cols, |r, c| {
                if r == i {
                    let others = (0..4)
                        .filter(|&k| k != i)
                        .fold(T::zero(), |acc, k| acc + x[(k, c)].clone());
                    two.clone() * others - x[(i, c)].clone()
                } else {
                    x[(r, c)].clone()
                }
            })
        }
    }

    pub fn tag(self) -> &'static str {
        ["S1", "S2", "S3", "S4", "S1p", "S2p", "S3p", "S4p"][self as usize]
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)?;
        if self.is_dual() {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// May `left` stand immediately left of `right` in a normal-form word?
///
/// Forbidden: equal letters, and `S_jᵀ` directly left of `S_i` with `i ≠ j`.
pub fn adjacent_allowed(left: Generator, right: Generator) -> bool {
    if left == right {
        return false;
    }
    !(left.is_dual() && !right.is_dual() && left.index() != right.index())
}

/// A finite word; `letters[0]` is the leftmost (last applied) factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(pub Vec<Generator>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Last applied letter.
    pub fn first(&self) -> Option<Generator> {
        self.0.first().copied()
    }

    /// `g·self`.
    pub fn prepend(&self, g: Generator) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(g);
        v.extend_from_slice(&self.0);
        GroupWord(v)
    }

    pub fn matrix(&self) -> GroupElement {
        word_to_matrix(self)
    }

    pub fn is_normal_form(&self) -> bool {
        self.0.windows(2).all(|w| adjacent_allowed(w[0], w[1]))
    }

    /// Cancels equal neighbours and moves `S_jᵀ` rightward past `S_i`
    /// (`i ≠ j`, the two commute) until nothing changes.
    pub fn normal_form(&self) -> Self {
        let mut w = self.0.clone();
        loop {
            let mut changed = false;
            let mut k = w.len();
            while k >= 2 {
                let (l, r) = (w[k - 2], w[k - 1]);
                if l == r {
                    w.drain(k - 2..k);
                    changed = true;
                    k = (k - 1).min(w.len());
                    continue;
                }
                if l.is_dual() && !r.is_dual() && l.index() != r.index() {
                    w.swap(k - 2, k - 1);
                    changed = true;
                    k = (k + 1).min(w.len());
                    continue;
                }
                k -= 1;
            }
            if !changed {
                return GroupWord(w);
            }
        }
    }

    /// Suffixes `U_k···U_1` for `k = 1..n`.
    pub fn suffixes(&self) -> impl Iterator<Item = GroupWord> + '_ {
        (0..self.0.len())
            .rev()
            .map(move |start| GroupWord(self.0[start..].to_vec()))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Digits 1-4, each optionally followed by `'` for the dual generator.
    /// Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let index = match c {
                '1'..='4' => (c as usize) - ('1' as usize),
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            };
            let dual = chars.peek() == Some(&'\'');
            if dual {
                chars.next();
            }
            out.push(Generator::new(index, dual));
        }
        Ok(GroupWord(out))
    }
}

/// An integer matrix in `Aut(Q_D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement(pub Matrix<BigInt>);

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement(Matrix::identity(4))
    }

    pub fn matrix(&self) -> &Matrix<BigInt> {
        &self.0
    }

    pub fn row_sums(&self) -> [BigInt; 4] {
        let s = self.0.row_sums();
        [s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone()]
    }

    /// `f(U) = 𝟙ᵀ U 𝟙`.
    pub fn size(&self) -> BigInt {
        self.0.entry_sum()
    }

    pub fn is_descartes_automorph(&self) -> bool {
        crate::forms::is_automorph_int(&self.0, &crate::forms::Form4::descartes())
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement(&self.0 * &rhs.0)
    }
}

pub fn generator_matrix(g: Generator) -> GroupElement {
    g.matrix()
}

/// `U_n···U_1`, built by applying letters right to left.
pub fn word_to_matrix(w: &GroupWord) -> GroupElement {
    let mut m = Matrix::identity(4);
    for g in w.0.iter().rev() {
        m = g.apply_left(&m);
    }
    GroupElement(m)
}

/// `Dᵀ·g·D` with `D = -Q_D` (symmetric, so `Dᵀ = D`).
pub fn conjugate_by_duality(g: &GroupElement) -> GroupElement {
    let d = duality_operator();
    let m = &(&d * &g.0.to_rational()) * &d;
    GroupElement(
        m.to_integer()
            .expect("conjugating an integer automorph by D stays integral"),
    )
}

/// Number of normal-form words of length `n` (`9·5^{n-1} - 1` for `n ≥ 1`),
/// counted by transfer matrix without listing them.
pub fn count_normal_forms(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut counts = vec![BigInt::one(); 8];
    for _ in 1..n {
        counts = Generator::ALL
            .iter()
            .map(|&left| {
                Generator::ALL
                    .iter()
                    .zip(&counts)
                    .filter(|(&right, _)| adjacent_allowed(left, right))
                    .map(|(_, c)| c.clone())
                    .sum()
            })
            .collect();
    }
    counts.into_iter().sum()
}

/// All normal-form words of length exactly `n`, sorted by generator tag.
pub fn enumerate_normal_forms(n: usize, limits: &Limits) -> Result<Vec<GroupWord>> {
    if n == 0 {
        return Err(Error::Precondition("word length must be at least 1".into()));
    }
    limits.check_word_length(n)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<Generator>, out: &mut Vec<GroupWord>) {
        if cur.len() == n {
            out.push(GroupWord(cur.clone()));
            return;
        }
        for g in Generator::ALL {
            if cur.last().is_some_and(|&l| !adjacent_allowed(l, g)) {
                continue;
            }
            cur.push(g);
            rec(n, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    Ok(out)
}

/// Apollonian words (no adjacent repeats) of length exactly `n`.
pub fn enumerate_apollonian_words(n: usize) -> Vec<GroupWord> {
    let mut words = vec![GroupWord::empty()];
    for _ in 0..n {
        words = words
            .iter()
            .flat_map(|w| {
                Generator::APOLLONIAN
                    .iter()
                    .filter(move |&&g| w.first() != Some(g))
                    .map(move |&g| w.prepend(g))
            })
            .collect();
    }
    words.sort();
    words
}

/// Row-sum data of a normal-form word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSumReport {
    pub row_sums: [BigInt; 4],
    pub size: BigInt,
    /// `f` of each suffix, shortest first.
    pub size_chain: Vec<BigInt>,
}

/// A failed row-sum check, with the offending suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSumViolation {
    pub word: GroupWord,
    pub suffix: GroupWord,
    pub reason: String,
}

impl fmt::Display for RowSumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "word {} (suffix {}): {}",
            self.word, self.suffix, self.reason
        )
    }
}

/// Checks the three row-sum assertions and the growth of `f` on every suffix.
///
/// With `r = U𝟙` and `U_n` the last applied letter acting on index `h`:
/// (i) `rᵢ + rⱼ > 0` for `i ≠ j`;
/// (ii) for `U_n = S_h`: `r_h > 0` and each `rᵢ` is less than the sum of the
/// other three;
/// (iii) for `U_n = S_hᵀ`: `r_h < 0` and the same inequalities.
pub fn row_sum_invariants(w: &GroupWord) -> std::result::Result<RowSumReport, RowSumViolation> {
    let fail = |suffix: &GroupWord, reason: String| RowSumViolation {
        word: w.clone(),
        suffix: suffix.clone(),
        reason,
    };
    if w.is_empty() {
        return Err(fail(w, "empty word".into()));
    }
    if !w.is_normal_form() {
        return Err(fail(w, "word is not in normal form".into()));
    }
    let mut chain = Vec::new();
    let mut last = None;
    for suffix in w.suffixes() {
        let u = word_to_matrix(&suffix);
        let r = u.row_sums();
        let f = u.size();
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (&r[i] + &r[j]) <= BigInt::zero() {
                    return Err(fail(&suffix, format!("r{} + r{} <= 0", i + 1, j + 1)));
                }
            }
        }
        let g = suffix.first().expect("suffixes are nonempty");
        let h = g.index();
        let rh_ok = if g.is_dual() {
            r[h] < BigInt::zero()
        } else {
            r[h] > BigInt::zero()
        };
        if !rh_ok {
            return Err(fail(&suffix, format!("r{} has the wrong sign", h + 1)));
        }
        let total: BigInt = r.iter().sum();
        for (i, ri) in r.iter().enumerate() {
            if i == h {
                continue;
            }
            if ri.clone() * 2 >= total {
                return Err(fail(
                    &suffix,
                    format!("r{} is not below the sum of the others", i + 1),
                ));
            }
        }
        if f < BigInt::from(8) {
            return Err(fail(&suffix, format!("f = {f} < 8")));
        }
        if let Some(prev) = &last {
            if f <= *prev {
                return Err(fail(&suffix, format!("f = {f} does not exceed {prev}")));
            }
        }
        last = Some(f.clone());
        chain.push(f);
    }
    let u = word_to_matrix(w);
    Ok(RowSumReport {
        row_sums: u.row_sums(),
        size: u.size(),
        size_chain: chain,
    })
}
