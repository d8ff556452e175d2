//! Joint distributions of several (possibly star-marked) variables: mixed
//! moments, mixed cumulants, freeness verification, and the cumulant-pattern
//! classifiers (semicircular, even, R-diagonal, free divisibility).
//!
//! A joint table is dense: it holds a moment for every word up to its order,
//! so memory grows like `(n_vars * 2)^order` for a starred alphabet. The
//! intended scales are small (two variables, order <= 6; products push the
//! word length to twice the order).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dalg::{DalgError, DiagonalScalar};
use crate::ncpart::{self, NcError};
use crate::transforms::{
    cumulants_to_moments, moments_to_cumulants, CumulantSequence, Distribution, TransformError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StarError {
    #[error(transparent)]
    Scalar(#[from] DalgError),
    #[error(transparent)]
    Lattice(#[from] NcError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("star word must be nonempty")]
    EmptyWord,
    #[error("word {word:?} has length {len}, beyond the table order {order}")]
    WordTooLong {
        word: String,
        len: usize,
        order: usize,
    },
    #[error("joint table incomplete: missing word {word:?}")]
    MissingWord { word: String },
    #[error("joint table holds {got} words, expected {expected}")]
    WrongTableSize { expected: usize, got: usize },
    #[error("variable {var} out of range: table has {n_vars} variables")]
    VarOutOfRange { var: usize, n_vars: usize },
    #[error("freeness check needs two distinct variables")]
    SameVariable,
    #[error("expected a table over {expected} variable(s), got {got}")]
    WrongVariableCount { expected: usize, got: usize },
    #[error("operation needs a star-marked table")]
    NotStarred,
    #[error("starred letters appear in an unstarred table")]
    UnexpectedStar,
    #[error("order {order} too small: at least {needed} required")]
    OrderTooSmall { order: usize, needed: usize },
    #[error("cannot parse star word {text:?}: {reason}")]
    BadWord { text: String, reason: String },
}

/// One letter of a word: a variable index plus an optional star mark.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StarLetter {
    pub var: usize,
    pub star: bool,
}

/// A nonempty word over the (possibly starred) variable alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarWord(Vec<StarLetter>);

const DEFAULT_VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn default_name(var: usize) -> String {
    DEFAULT_VAR_NAMES
        .get(var)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("v{}", var))
}

impl StarWord {
    pub fn new(letters: Vec<StarLetter>) -> Result<Self, StarError> {
        if letters.is_empty() {
            return Err(StarError::EmptyWord);
        }
        Ok(StarWord(letters))
    }

    /// An unstarred word from variable indices.
    pub fn plain(vars: &[usize]) -> Result<Self, StarError> {
        Self::new(vars.iter().map(|&var| StarLetter { var, star: false }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[StarLetter] {
        &self.0
    }

    /// Subword picked out by 1-based positions, kept in order.
    pub fn restrict(&self, positions: &[usize]) -> StarWord {
        StarWord(positions.iter().map(|&p| self.0[p - 1]).collect())
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.0.iter().any(|l| l.var == var)
    }

    /// The variable index when every letter shares one, else `None`.
    pub fn single_var(&self) -> Option<usize> {
        let var = self.0[0].var;
        self.0.iter().all(|l| l.var == var).then_some(var)
    }

    /// Formal adjoint of the word: reversed order, stars flipped.
    pub fn reverse_starred(&self) -> StarWord {
        StarWord(
            self.0
                .iter()
                .rev()
                .map(|l| StarLetter {
                    var: l.var,
                    star: !l.star,
                })
                .collect(),
        )
    }

    /// True for even-length words that strictly alternate between a letter
    /// and its star, e.g. `x x* x x*` or `x* x`.
    pub fn is_star_alternating(&self) -> bool {
        self.len().is_multiple_of(2)
            && self.single_var().is_some()
            && self.0.windows(2).all(|w| w[0].star != w[1].star)
    }

    pub fn render(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|l| {
                let base = names
                    .get(l.var)
                    .cloned()
                    .unwrap_or_else(|| default_name(l.var));
                if l.star {
                    format!("{}*", base)
                } else {
                    base
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the space-separated text form, e.g. `x x* y`.
    pub fn parse(text: &str, names: &[String]) -> Result<Self, StarError> {
        let bad = |reason: String| StarError::BadWord {
            text: text.to_string(),
            reason,
        };
        let mut letters = Vec::new();
        for token in text.split(' ') {
            if token.is_empty() {
                return Err(bad("empty letter".to_string()));
            }
            let (base, star) = match token.strip_suffix('*') {
                Some(base) => (base, true),
                None => (token, false),
            };
            let var = names
                .iter()
                .position(|n| n == base)
                .ok_or_else(|| bad(format!("unknown variable {:?}", base)))?;
            letters.push(StarLetter { var, star });
        }
        if letters.is_empty() {
            return Err(StarError::EmptyWord);
        }
        Ok(StarWord(letters))
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl fmt::Debug for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Every word of the given length over `n_vars` variables (doubled by star
/// marks when `star` is set), in lexicographic order.
pub fn all_words(n_vars: usize, star: bool, len: usize) -> Vec<StarWord> {
    let mut alphabet = Vec::new();
    for var in 0..n_vars {
        alphabet.push(StarLetter { var, star: false });
        if star {
            alphabet.push(StarLetter { var, star: true });
        }
    }
    alphabet.sort();
    let mut words: Vec<Vec<StarLetter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * alphabet.len());
        for word in &words {
            for &letter in &alphabet {
                let mut extended = word.clone();
                extended.push(letter);
                next.push(extended);
            }
        }
        words = next;
    }
    words.sort();
    words.into_iter().map(StarWord).collect()
}

/// A complete table of mixed moments for all words up to a fixed order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointDistribution {
    n_components: usize,
    order: usize,
    n_vars: usize,
    star: bool,
    moments: BTreeMap<StarWord, DiagonalScalar>,
}

impl JointDistribution {
    /// Validates completeness (exactly the words of length `1..=order`),
    /// component dimensions, and letter ranges.
    pub fn new(
        n_components: usize,
        order: usize,
        n_vars: usize,
        star: bool,
        moments: BTreeMap<StarWord, DiagonalScalar>,
    ) -> Result<Self, StarError> {
        if n_components == 0 {
            return Err(StarError::Scalar(DalgError::Empty));
        }
        if order == 0 {
            return Err(StarError::OrderTooSmall {
                order: 0,
                needed: 1,
            });
        }
        if n_vars == 0 {
            return Err(StarError::WrongVariableCount {
                expected: 1,
                got: 0,
            });
        }
        let mut expected = 0usize;
        for len in 1..=order {
            for word in all_words(n_vars, star, len) {
                expected += 1;
                match moments.get(&word) {
                    None => {
                        return Err(StarError::MissingWord {
                            word: word.to_string(),
                        })
                    }
                    Some(value) => {
                        if value.n_components() != n_components {
                            return Err(StarError::Scalar(DalgError::DimensionMismatch {
                                left: n_components,
                                right: value.n_components(),
                            }));
                        }
                    }
                }
            }
        }
        if moments.len() != expected {
            // extra keys: either out-of-range variables, stray stars, or
            // words longer than the order
            for word in moments.keys() {
                if word.len() > order {
                    return Err(StarError::WordTooLong {
                        word: word.to_string(),
                        len: word.len(),
                        order,
                    });
                }
                for letter in word.letters() {
                    if letter.var >= n_vars {
                        return Err(StarError::VarOutOfRange {
                            var: letter.var,
                            n_vars,
                        });
                    }
                    if letter.star && !star {
                        return Err(StarError::UnexpectedStar);
                    }
                }
            }
            return Err(StarError::WrongTableSize {
                expected,
                got: moments.len(),
            });
        }
        Ok(JointDistribution {
            n_components,
            order,
            n_vars,
            star,
            moments,
        })
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_starred(&self) -> bool {
        self.star
    }

    pub fn moment(&self, word: &StarWord) -> Result<&DiagonalScalar, StarError> {
        if word.len() > self.order {
            return Err(StarError::WordTooLong {
                word: word.to_string(),
                len: word.len(),
                order: self.order,
            });
        }
        self.moments.get(word).ok_or_else(|| StarError::MissingWord {
            word: word.to_string(),
        })
    }

    pub fn words(&self) -> impl Iterator<Item = (&StarWord, &DiagonalScalar)> {
        self.moments.iter()
    }

    /// The marginal of one variable: moments of the unstarred power words.
    pub fn marginal(&self, var: usize) -> Result<Distribution, StarError> {
        if var >= self.n_vars {
            return Err(StarError::VarOutOfRange {
                var,
                n_vars: self.n_vars,
            });
        }
        let mut moments = Vec::with_capacity(self.order);
        for len in 1..=self.order {
            let word = StarWord::plain(&vec![var; len])?;
            moments.push(self.moment(&word)?.clone());
        }
        Ok(Distribution::new(self.n_components, self.order, moments)?)
    }

    /// Checks `m(w) = m(reverse-starred w)` across the table, the adjoint
    /// symmetry a self-adjoint variable satisfies.
    pub fn is_star_symmetric(&self) -> bool {
        self.moments
            .iter()
            .all(|(word, value)| self.moments.get(&word.reverse_starred()) == Some(value))
    }

    /// True when every moment vanishes in the given component.
    pub fn component_is_zero(&self, component: usize) -> bool {
        self.moments
            .values()
            .all(|value| value.entry(component).is_zero())
    }

    pub fn split(&self) -> Vec<JointDistribution> {
        (0..self.n_components)
            .map(|i| JointDistribution {
                n_components: 1,
                order: self.order,
                n_vars: self.n_vars,
                star: self.star,
                moments: self
                    .moments
                    .iter()
                    .map(|(w, v)| (w.clone(), v.component(i)))
                    .collect(),
            })
            .collect()
    }

    pub fn zip(parts: &[JointDistribution]) -> Result<JointDistribution, StarError> {
        if parts.is_empty() {
            return Err(StarError::Scalar(DalgError::Empty));
        }
        let order = parts[0].order;
        let n_vars = parts[0].n_vars;
        let star = parts[0].star;
        for part in parts {
            if part.n_components != 1 {
                return Err(StarError::Scalar(DalgError::DimensionMismatch {
                    left: 1,
                    right: part.n_components,
                }));
            }
            if part.order != order || part.n_vars != n_vars || part.star != star {
                return Err(StarError::WrongVariableCount {
                    expected: n_vars,
                    got: part.n_vars,
                });
            }
        }
        let mut moments = BTreeMap::new();
        for word in parts[0].moments.keys() {
            let slices: Vec<DiagonalScalar> = parts
                .iter()
                .map(|p| p.moments[word].clone())
                .collect();
            moments.insert(word.clone(), DiagonalScalar::zip(&slices)?);
        }
        JointDistribution::new(parts.len(), order, n_vars, star, moments)
    }
}

/// Mixed cumulant of a word: Möbius inversion of the block-restricted
/// moments over the noncrossing lattice.
pub fn mixed_cumulant(
    joint: &JointDistribution,
    word: &StarWord,
) -> Result<DiagonalScalar, StarError> {
    if word.len() > joint.order() {
        return Err(StarError::WordTooLong {
            word: word.to_string(),
            len: word.len(),
            order: joint.order(),
        });
    }
    let n = joint.n_components();
    let partitions = ncpart::noncrossing_partitions(word.len())?;
    let mut sum = DiagonalScalar::zero(n);
    for pi in partitions.iter() {
        let mut product = DiagonalScalar::one(n);
        for block in pi.blocks() {
            product = product.mul(joint.moment(&word.restrict(block))?)?;
        }
        let mu = ncpart::mobius_full(pi).into_rat();
        sum = sum.add(&product.scale(&mu))?;
    }
    Ok(sum)
}

/// Builds the unique joint table whose mixed cumulants are the given
/// function, via the moment-cumulant formula
/// `m(w) = sum over NC(|w|) of product over blocks of k(w restricted)`.
pub fn joint_from_cumulant_fn<F>(
    n_components: usize,
    order: usize,
    n_vars: usize,
    star: bool,
    cumulant: F,
) -> Result<JointDistribution, StarError>
where
    F: Fn(&StarWord) -> Result<DiagonalScalar, StarError>,
{
    let mut moments = BTreeMap::new();
    for len in 1..=order {
        let partitions = ncpart::noncrossing_partitions(len)?;
        for word in all_words(n_vars, star, len) {
            let mut sum = DiagonalScalar::zero(n_components);
            for pi in partitions.iter() {
                let mut product = DiagonalScalar::one(n_components);
                for block in pi.blocks() {
                    product = product.mul(&cumulant(&word.restrict(block))?)?;
                }
                sum = sum.add(&product)?;
            }
            moments.insert(word, sum);
        }
    }
    JointDistribution::new(n_components, order, n_vars, star, moments)
}

/// The joint distribution of a free pair: pure cumulants come from the
/// marginals, every mixed cumulant vanishes. Variable 0 is `x`, variable 1
/// is `y`.
pub fn joint_from_free_pair(
    x: &Distribution,
    y: &Distribution,
    order: usize,
) -> Result<JointDistribution, StarError> {
    if x.n_components() != y.n_components() {
        return Err(StarError::Scalar(DalgError::DimensionMismatch {
            left: x.n_components(),
            right: y.n_components(),
        }));
    }
    if order == 0 {
        return Err(StarError::OrderTooSmall {
            order: 0,
            needed: 1,
        });
    }
    if x.order() < order || y.order() < order {
        return Err(StarError::OrderTooSmall {
            order: x.order().min(y.order()),
            needed: order,
        });
    }
    let n = x.n_components();
    let kx = moments_to_cumulants(&x.truncate(order)?)?;
    let ky = moments_to_cumulants(&y.truncate(order)?)?;
    joint_from_cumulant_fn(n, order, 2, false, |word| {
        match word.single_var() {
            Some(0) => Ok(kx.cumulant(word.len()).clone()),
            Some(1) => Ok(ky.cumulant(word.len()).clone()),
            _ => Ok(DiagonalScalar::zero(n)),
        }
    })
}

/// Result of a freeness check: either free, or the shortest offending word
/// with its nonzero mixed cumulant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreenessReport {
    pub free: bool,
    pub witness: Option<(StarWord, DiagonalScalar)>,
}

/// Decides freeness of two variables of a joint table by scanning every
/// mixed word up to the order, shortest first.
pub fn check_freeness(
    joint: &JointDistribution,
    vars: (usize, usize),
    order: usize,
) -> Result<FreenessReport, StarError> {
    let (a, b) = vars;
    for var in [a, b] {
        if var >= joint.n_vars() {
            return Err(StarError::VarOutOfRange {
                var,
                n_vars: joint.n_vars(),
            });
        }
    }
    if a == b {
        return Err(StarError::SameVariable);
    }
    if order > joint.order() {
        return Err(StarError::OrderTooSmall {
            order: joint.order(),
            needed: order,
        });
    }
    for len in 2..=order {
        for word in all_words(joint.n_vars(), joint.is_starred(), len) {
            if !(word.uses_var(a) && word.uses_var(b)) {
                continue;
            }
            if word.letters().iter().any(|l| l.var != a && l.var != b) {
                continue;
            }
            let value = mixed_cumulant(joint, &word)?;
            if !value.is_zero() {
                return Ok(FreenessReport {
                    free: false,
                    witness: Some((word, value)),
                });
            }
        }
    }
    Ok(FreenessReport {
        free: true,
        witness: None,
    })
}

/// Moments of `x + y` computed by expanding `(x+y)^n` over all words of the
/// joint table. Independent of the cumulant-additivity route.
pub fn sum_moments_through_joint(
    joint: &JointDistribution,
    vars: (usize, usize),
    order: usize,
) -> Result<Distribution, StarError> {
    if order > joint.order() {
        return Err(StarError::OrderTooSmall {
            order: joint.order(),
            needed: order,
        });
    }
    let n = joint.n_components();
    let mut moments = Vec::with_capacity(order);
    for len in 1..=order {
        let mut sum = DiagonalScalar::zero(n);
        for picks in 0u64..(1u64 << len) {
            let letters: Vec<usize> = (0..len)
                .map(|i| if picks & (1 << i) != 0 { vars.1 } else { vars.0 })
                .collect();
            let word = StarWord::plain(&letters)?;
            sum = sum.add(joint.moment(&word)?)?;
        }
        moments.push(sum);
    }
    Ok(Distribution::new(n, order, moments)?)
}

/// Moments of `x y` read off the joint table: the n-th moment is the moment
/// of the alternating word `(x y)^n` of length `2n`. Needs a table of twice
/// the requested order.
pub fn product_moments_through_joint(
    joint: &JointDistribution,
    vars: (usize, usize),
    order: usize,
) -> Result<Distribution, StarError> {
    if 2 * order > joint.order() {
        return Err(StarError::OrderTooSmall {
            order: joint.order(),
            needed: 2 * order,
        });
    }
    let n = joint.n_components();
    let mut moments = Vec::with_capacity(order);
    for len in 1..=order {
        let mut letters = Vec::with_capacity(2 * len);
        for _ in 0..len {
            letters.push(vars.0);
            letters.push(vars.1);
        }
        let word = StarWord::plain(&letters)?;
        moments.push(joint.moment(&word)?.clone());
    }
    Ok(Distribution::new(n, order, moments)?)
}

/// Three-valued classifier verdict. A variable whose entire moment table
/// vanishes is reported as degenerate rather than silently true or false.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Classification {
    Holds,
    Fails,
    Degenerate,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Holds => "holds",
            Classification::Fails => "fails",
            Classification::Degenerate => "degenerate",
        }
    }
}

/// Classifier verdict plus the reason and any skipped-check notices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassifyOutcome {
    pub classification: Classification,
    pub detail: String,
    pub notices: Vec<String>,
}

impl ClassifyOutcome {
    fn new(classification: Classification, detail: impl Into<String>) -> Self {
        ClassifyOutcome {
            classification,
            detail: detail.into(),
            notices: Vec::new(),
        }
    }

    fn with_notice(mut self, notice: impl Into<String>) -> Self {
        self.notices.push(notice.into());
        self
    }
}

const SELF_ADJOINT_NOTICE: &str =
    "self-adjointness is not checkable from plain moments; supply a star table to verify it";

/// Semicircular test on plain moments: every nonzero component must have a
/// vanishing cumulant at each degree other than two and a nonvanishing
/// second cumulant. Zero components are exempt; an all-zero variable is
/// degenerate.
pub fn classify_semicircular(
    d: &Distribution,
    order: usize,
) -> Result<ClassifyOutcome, StarError> {
    if order < 3 {
        return Err(StarError::OrderTooSmall { order, needed: 3 });
    }
    if d.order() < order {
        return Err(StarError::OrderTooSmall {
            order: d.order(),
            needed: order,
        });
    }
    let d = d.truncate(order)?;
    Ok(classify_semicircular_inner(&d)?.with_notice(SELF_ADJOINT_NOTICE))
}

fn classify_semicircular_inner(d: &Distribution) -> Result<ClassifyOutcome, StarError> {
    if d.is_zero() {
        return Ok(ClassifyOutcome::new(
            Classification::Degenerate,
            "the variable is zero: every moment vanishes",
        ));
    }
    let cumulants = moments_to_cumulants(d)?;
    for component in 0..d.n_components() {
        let zero_component = d
            .moments()
            .iter()
            .all(|m| m.entry(component).is_zero());
        if zero_component {
            continue;
        }
        for degree in 1..=d.order() {
            let value = cumulants.cumulant(degree).entry(component);
            if degree == 2 {
                if value.is_zero() {
                    return Ok(ClassifyOutcome::new(
                        Classification::Fails,
                        format!("component {}: second cumulant vanishes", component + 1),
                    ));
                }
            } else if !value.is_zero() {
                return Ok(ClassifyOutcome::new(
                    Classification::Fails,
                    format!(
                        "component {}: cumulant at degree {} is {}",
                        component + 1,
                        degree,
                        value
                    ),
                ));
            }
        }
    }
    Ok(ClassifyOutcome::new(
        Classification::Holds,
        "only the second cumulant survives on every nonzero component",
    ))
}

/// Semicircular test on a one-variable star table: checks the adjoint
/// symmetry of the table first, then the cumulant pattern of the plain
/// marginal.
pub fn classify_semicircular_star(
    joint: &JointDistribution,
    order: usize,
) -> Result<ClassifyOutcome, StarError> {
    if joint.n_vars() != 1 {
        return Err(StarError::WrongVariableCount {
            expected: 1,
            got: joint.n_vars(),
        });
    }
    if order < 3 {
        return Err(StarError::OrderTooSmall { order, needed: 3 });
    }
    if joint.order() < order {
        return Err(StarError::OrderTooSmall {
            order: joint.order(),
            needed: order,
        });
    }
    if !joint.is_star_symmetric() {
        return Ok(ClassifyOutcome::new(
            Classification::Fails,
            "table is not star-symmetric: the variable is not self-adjoint",
        ));
    }
    let marginal = joint.marginal(0)?.truncate(order)?;
    classify_semicircular_inner(&marginal)
}

/// Evenness: every odd moment up to the order vanishes. An all-zero
/// variable is degenerate.
pub fn classify_even(d: &Distribution, order: usize) -> Result<ClassifyOutcome, StarError> {
    if order < 2 {
        return Err(StarError::OrderTooSmall { order, needed: 2 });
    }
    if d.order() < order {
        return Err(StarError::OrderTooSmall {
            order: d.order(),
            needed: order,
        });
    }
    let d = d.truncate(order)?;
    if d.is_zero() {
        return Ok(ClassifyOutcome::new(
            Classification::Degenerate,
            "the variable is zero: every moment vanishes",
        ));
    }
    let mut degree = 1;
    while degree <= d.order() {
        let value = d.moment(degree);
        if !value.is_zero() {
            return Ok(ClassifyOutcome::new(
                Classification::Fails,
                format!("odd moment at degree {} is {}", degree, value),
            ));
        }
        degree += 2;
    }
    Ok(ClassifyOutcome::new(
        Classification::Holds,
        "all odd moments vanish",
    ))
}

/// R-diagonality on a one-variable star table: every word that is not an
/// even-length strict alternation of the variable and its star must have a
/// vanishing cumulant, and each nonzero component must show some
/// nonvanishing alternating cumulant.
pub fn classify_r_diagonal(
    joint: &JointDistribution,
    order: usize,
) -> Result<ClassifyOutcome, StarError> {
    if joint.n_vars() != 1 {
        return Err(StarError::WrongVariableCount {
            expected: 1,
            got: joint.n_vars(),
        });
    }
    if !joint.is_starred() {
        return Err(StarError::NotStarred);
    }
    if order == 0 {
        return Err(StarError::OrderTooSmall { order, needed: 1 });
    }
    if joint.order() < order {
        return Err(StarError::OrderTooSmall {
            order: joint.order(),
            needed: order,
        });
    }
    let n = joint.n_components();
    let zero_component: Vec<bool> = (0..n).map(|i| joint.component_is_zero(i)).collect();
    if zero_component.iter().all(|&z| z) {
        return Ok(ClassifyOutcome::new(
            Classification::Degenerate,
            "the variable is zero: every moment vanishes",
        ));
    }
    let mut saw_alternating = vec![false; n];
    for len in 1..=order {
        for word in all_words(1, true, len) {
            let value = mixed_cumulant(joint, &word)?;
            if word.is_star_alternating() {
                for (component, saw) in saw_alternating.iter_mut().enumerate() {
                    if !value.entry(component).is_zero() {
                        *saw = true;
                    }
                }
            } else if !value.is_zero() {
                return Ok(ClassifyOutcome::new(
                    Classification::Fails,
                    format!(
                        "non-alternating word {:?} has cumulant {}",
                        word.to_string(),
                        value
                    ),
                ));
            }
        }
    }
    for component in 0..n {
        if !zero_component[component] && !saw_alternating[component] {
            return Ok(ClassifyOutcome::new(
                Classification::Fails,
                format!(
                    "component {}: no nonvanishing alternating cumulant up to order {}",
                    component + 1,
                    order
                ),
            ));
        }
    }
    Ok(ClassifyOutcome::new(
        Classification::Holds,
        "only alternating star words carry nonvanishing cumulants",
    ))
}

/// The free n-th root in the additive sense: cumulants divide by the number
/// of parts, so an n-fold free sum of the result recovers the input exactly.
pub fn divide_free(d: &Distribution, parts: usize) -> Result<Distribution, TransformError> {
    if parts == 0 {
        return Err(TransformError::ZeroParts);
    }
    let cumulants = moments_to_cumulants(d)?;
    let factor = crate::rational::Rat::from_int(parts as i64)
        .invert()
        .expect("parts is nonzero");
    let scaled: Vec<DiagonalScalar> = cumulants
        .cumulants()
        .iter()
        .map(|k| k.scale(&factor))
        .collect();
    cumulants_to_moments(&CumulantSequence::new(d.n_components(), d.order(), scaled)?)
}
