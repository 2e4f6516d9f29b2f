//! Exact arithmetic for the three group families: finite groups given by a
//! Cayley table, free abelian groups `Z^k`, and free groups `F_k`.
//!
//! Finite elements are indices into the table with index 0 the identity.
//! `Z^k` coordinates are arbitrary-precision integers. Free elements are kept
//! freely reduced at all times, so equality is structural and the identity
//! test is an emptiness check.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Diagnostic, Error, Result};

/// A generator name with a sign, written `a` or `a^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    name: String,
    exponent: i8,
}

impl GeneratorSymbol {
    pub fn new(name: impl Into<String>, exponent: i8) -> Result<Self> {
        let name = name.into();
        if !valid_name(&name) || (exponent != 1 && exponent != -1) {
            return Err(Error::InvalidToken(format!("{name} (exponent {exponent})")));
        }
        Ok(GeneratorSymbol { name, exponent })
    }

    pub fn positive(name: impl Into<String>) -> Result<Self> {
        Self::new(name, 1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn exponent(&self) -> i8 {
        self.exponent
    }

    pub fn inverse(&self) -> Self {
        GeneratorSymbol {
            name: self.name.clone(),
            exponent: -self.exponent,
        }
    }

    pub fn is_inverse_of(&self, other: &Self) -> bool {
        self.name == other.name && self.exponent == -other.exponent
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '^')
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent < 0 {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_suffix("^-1") {
            Some(name) => GeneratorSymbol::new(name, -1),
            None => GeneratorSymbol::new(s, 1),
        }
        .map_err(|_| Error::InvalidToken(s.to_string()))
    }
}

impl Serialize for GeneratorSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a space-separated token string such as `"a b a^-1"`.
pub fn parse_symbols(word: &str) -> Result<Vec<GeneratorSymbol>> {
    word.split_whitespace().map(str::parse).collect()
}

/// A group element; the payload depends on the family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Finite(usize),
    Abelian(Vec<BigInt>),
    /// A freely reduced word over the formal letters.
    Free(Vec<GeneratorSymbol>),
}

impl GroupElement {
    pub fn abelian<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        GroupElement::Abelian(coords.into_iter().map(BigInt::from).collect())
    }

    /// Builds a free element, reducing the given word.
    pub fn free<I: IntoIterator<Item = GeneratorSymbol>>(word: I) -> Self {
        let mut out = Vec::new();
        for s in word {
            push_reduced(&mut out, s);
        }
        GroupElement::Free(out)
    }

    fn family_name(&self) -> &'static str {
        match self {
            GroupElement::Finite(_) => "finite",
            GroupElement::Abelian(_) => "free-abelian",
            GroupElement::Free(_) => "free",
        }
    }
}

fn push_reduced(word: &mut Vec<GeneratorSymbol>, s: GeneratorSymbol) {
    if word.last().is_some_and(|last| last.is_inverse_of(&s)) {
        word.pop();
    } else {
        word.push(s);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Finite(i) => write!(f, "#{i}"),
            GroupElement::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Free(w) if w.is_empty() => f.write_str("1"),
            GroupElement::Free(w) => {
                let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" "))
            }
        }
    }
}

// Documents carry elements untyped: a number is a finite index, an array of
// integers a Z^k vector, an array of tokens a reduced free word.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Finite(i) => serializer.serialize_u64(*i as u64),
            GroupElement::Abelian(v) => {
                let coords = v
                    .iter()
                    .map(|c| {
                        c.to_i64().ok_or_else(|| {
                            serde::ser::Error::custom(format!("coordinate {c} exceeds the document range"))
                        })
                    })
                    .collect::<std::result::Result<Vec<i64>, S::Error>>()?;
                coords.serialize(serializer)
            }
            GroupElement::Free(w) => w.serialize(serializer),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawElement {
    Index(usize),
    Tokens(Vec<GeneratorSymbol>),
    Ints(Vec<i64>),
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match RawElement::deserialize(deserializer)? {
            RawElement::Index(i) => GroupElement::Finite(i),
            RawElement::Tokens(w) => GroupElement::Free(w),
            RawElement::Ints(v) => GroupElement::abelian(v),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Finite {
        order: usize,
        /// Row-major: `cayley[i][j]` is the index of `i·j`.
        cayley: Vec<Vec<usize>>,
    },
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
        /// The formal letters free words are spelled in.
        letters: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub symbol: GeneratorSymbol,
    pub image: GroupElement,
}

/// A concrete group together with an ordered generating set closed under
/// formal inversion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    family: Family,
    generators: Vec<Generator>,
}

/// Default letter names: `a`, `b`, ... for small ranks, `x1`, `x2`, ... otherwise.
pub fn standard_letters(k: usize) -> Vec<String> {
    if k <= 26 {
        (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

impl GroupSpec {
    /// Builds and validates a spec.
    pub fn new(family: Family, generators: Vec<Generator>) -> Result<Self> {
        let spec = GroupSpec { family, generators };
        let diags = spec.validate();
        if diags.is_empty() {
            Ok(spec)
        } else {
            Err(Error::Invalid(diags))
        }
    }

    /// `Z^k` with standard generators `e_i` and their inverses, in the order
    /// `a, a^-1, b, b^-1, ...`.
    pub fn free_abelian(k: usize) -> Result<Self> {
        let generators = standard_letters(k)
            .into_iter()
            .enumerate()
            .flat_map(|(i, name)| {
                [1i64, -1].map(|sign| {
                    let mut v = vec![0i64; k];
                    v[i] = sign;
                    Generator {
                        symbol: GeneratorSymbol {
                            name: name.clone(),
                            exponent: sign as i8,
                        },
                        image: GroupElement::abelian(v),
                    }
                })
            })
            .collect();
        GroupSpec::new(Family::FreeAbelian { rank: k }, generators)
    }

    /// `F_k` with each letter and its inverse as generators.
    pub fn free(k: usize) -> Result<Self> {
        let letters = standard_letters(k);
        let generators = letters
            .iter()
            .flat_map(|name| {
                [1i8, -1].map(|e| {
                    let symbol = GeneratorSymbol {
                        name: name.clone(),
                        exponent: e,
                    };
                    Generator {
                        image: GroupElement::Free(vec![symbol.clone()]),
                        symbol,
                    }
                })
            })
            .collect();
        GroupSpec::new(Family::Free { rank: k, letters }, generators)
    }

    /// A finite group from its Cayley table and named generator images.
    /// Formal inverses are added for any generator whose inverse is missing.
    pub fn finite(cayley: Vec<Vec<usize>>, generators: &[(&str, usize)]) -> Result<Self> {
        let order = cayley.len();
        let family = Family::Finite { order, cayley };
        let diags = check_cayley(&family);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        let probe = GroupSpec {
            family,
            generators: Vec::new(),
        };
        let mut gens = Vec::new();
        for &(name, index) in generators {
            if index >= order {
                return Err(Error::Invalid(vec![Diagnostic::new(
                    format!("generator {name}"),
                    format!("image {index} outside [0, {order})"),
                )]));
            }
            let symbol = GeneratorSymbol::positive(name)?;
            gens.push(Generator {
                symbol: symbol.clone(),
                image: GroupElement::Finite(index),
            });
        }
        let mut with_inverses = Vec::new();
        for g in &gens {
            with_inverses.push(g.clone());
            let inv = g.symbol.inverse();
            if !gens.iter().any(|h| h.symbol == inv) {
                with_inverses.push(Generator {
                    symbol: inv,
                    image: probe.invert(&g.image)?,
                });
            }
        }
        GroupSpec::new(probe.family, with_inverses)
    }

    /// The cyclic group `Z/n` generated by `t`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GroupSpec::finite(table, &[("t", 1 % n.max(1))])
    }

    /// The symmetric group on three points, generated by the transposition
    /// `s = (0 1)` and the 3-cycle `r = (0 1 2)`.
    pub fn symmetric3() -> Result<Self> {
        // Element i is the i-th permutation in this list; index 0 is the identity.
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let index_of = |p: [usize; 3]| PERMS.iter().position(|q| *q == p).unwrap();
        // (x·y)(i) = y(x(i)): apply x first.
        let table = PERMS
            .iter()
            .map(|x| {
                PERMS
                    .iter()
                    .map(|y| index_of([y[x[0]], y[x[1]], y[x[2]]]))
                    .collect()
            })
            .collect();
        GroupSpec::finite(table, &[("s", 1), ("r", 2)])
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generator tokens in declaration order.
    pub fn generator_tokens(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.symbol.to_string()).collect()
    }

    pub fn family_label(&self) -> String {
        match &self.family {
            Family::Finite { order, .. } => format!("finite (order {order})"),
            Family::FreeAbelian { rank } => format!("Z^{rank}"),
            Family::Free { rank, .. } => format!("F_{rank}"),
        }
    }

    pub fn image(&self, symbol: &GeneratorSymbol) -> Result<&GroupElement> {
        self.generators
            .iter()
            .find(|g| &g.symbol == symbol)
            .map(|g| &g.image)
            .ok_or_else(|| Error::UnknownGenerator(symbol.to_string()))
    }

    /// The image of a token string, e.g. `"a^-1"`.
    pub fn token_image(&self, token: &str) -> Result<&GroupElement> {
        let symbol: GeneratorSymbol = token.parse()?;
        self.image(&symbol)
    }

    /// The first declared generator whose image is `element`.
    pub fn token_for(&self, element: &GroupElement) -> Option<&GeneratorSymbol> {
        self.generators
            .iter()
            .find(|g| &g.image == element)
            .map(|g| &g.symbol)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = check_cayley(&self.family);
        if let Family::Free { rank, letters } = &self.family {
            if *rank == 0 {
                diags.push(Diagnostic::new("group", "free rank must be positive"));
            }
            if letters.len() != *rank {
                diags.push(Diagnostic::new(
                    "group",
                    format!("{} letters declared for rank {rank}", letters.len()),
                ));
            }
            let distinct: HashSet<&String> = letters.iter().collect();
            if distinct.len() != letters.len() {
                diags.push(Diagnostic::new("group", "duplicate free letters"));
            }
            for l in letters {
                if !valid_name(l) {
                    diags.push(Diagnostic::new("group", format!("invalid letter name {l:?}")));
                }
            }
        }
        if let Family::FreeAbelian { rank: 0 } = self.family {
            diags.push(Diagnostic::new("group", "free-abelian rank must be positive"));
        }
        if !diags.is_empty() {
            return diags;
        }
        let mut seen = HashSet::new();
        for g in &self.generators {
            let loc = format!("generator {}", g.symbol);
            if !seen.insert(&g.symbol) {
                diags.push(Diagnostic::new(&loc, "declared twice"));
            }
            if let Err(e) = self.check_element(&g.image) {
                diags.push(Diagnostic::new(&loc, e.to_string()));
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        for g in &self.generators {
            let inv = g.symbol.inverse();
            match self.generators.iter().find(|h| h.symbol == inv) {
                None => diags.push(Diagnostic::new(
                    format!("generator {}", g.symbol),
                    format!("formal inverse {inv} missing"),
                )),
                Some(h) => {
                    let product = self.multiply(&g.image, &h.image);
                    if !matches!(product, Ok(ref p) if self.is_identity(p)) {
                        diags.push(Diagnostic::new(
                            format!("generator {}", g.symbol),
                            format!("image of {inv} is not its inverse"),
                        ));
                    }
                }
            }
        }
        diags
    }

    /// Checks that `a` belongs to this group: right family, rank, range, reduced.
    pub fn check_element(&self, a: &GroupElement) -> Result<()> {
        let mismatch = || {
            Error::FamilyMismatch(format!(
                "{} element {a} in {} group",
                a.family_name(),
                self.family_label()
            ))
        };
        match (&self.family, a) {
            (Family::Finite { order, .. }, GroupElement::Finite(i)) => {
                if i < order {
                    Ok(())
                } else {
                    Err(Error::FamilyMismatch(format!("index {i} outside [0, {order})")))
                }
            }
            (Family::FreeAbelian { rank }, GroupElement::Abelian(v)) => {
                if v.len() == *rank {
                    Ok(())
                } else {
                    Err(Error::FamilyMismatch(format!(
                        "vector of length {} in Z^{rank}",
                        v.len()
                    )))
                }
            }
            (Family::Free { letters, .. }, GroupElement::Free(w)) => {
                if let Some(s) = w.iter().find(|s| !letters.iter().any(|l| l == s.name())) {
                    return Err(Error::FamilyMismatch(format!("unknown letter {s}")));
                }
                if w.windows(2).any(|p| p[0].is_inverse_of(&p[1])) {
                    return Err(Error::FamilyMismatch(format!("word {a} is not reduced")));
                }
                Ok(())
            }
            _ => Err(mismatch()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.family {
            Family::Finite { .. } => GroupElement::Finite(0),
            Family::FreeAbelian { rank } => GroupElement::Abelian(vec![BigInt::zero(); *rank]),
            Family::Free { .. } => GroupElement::Free(Vec::new()),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        match (&self.family, a, b) {
            (Family::Finite { order, cayley }, GroupElement::Finite(x), GroupElement::Finite(y))
                if x < order && y < order =>
            {
                Ok(GroupElement::Finite(cayley[*x][*y]))
            }
            (Family::FreeAbelian { rank }, GroupElement::Abelian(x), GroupElement::Abelian(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                Ok(GroupElement::Abelian(
                    x.iter().zip(y).map(|(p, q)| p + q).collect(),
                ))
            }
            (Family::Free { .. }, GroupElement::Free(x), GroupElement::Free(y)) => {
                let mut out = x.clone();
                for s in y {
                    push_reduced(&mut out, s.clone());
                }
                Ok(GroupElement::Free(out))
            }
            _ => Err(Error::FamilyMismatch(format!(
                "cannot multiply {a} by {b} in {}",
                self.family_label()
            ))),
        }
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        Ok(match (&self.family, a) {
            (Family::Finite { cayley, .. }, GroupElement::Finite(i)) => {
                // Latin square: exactly one j with cayley[i][j] = 0.
                let j = cayley[*i].iter().position(|&k| k == 0).unwrap_or(0);
                GroupElement::Finite(j)
            }
            (_, GroupElement::Abelian(v)) => GroupElement::Abelian(v.iter().map(|c| -c).collect()),
            (_, GroupElement::Free(w)) => {
                GroupElement::Free(w.iter().rev().map(GeneratorSymbol::inverse).collect())
            }
            _ => unreachable!("checked above"),
        })
    }

    /// The word-problem oracle.
    pub fn is_identity(&self, a: &GroupElement) -> bool {
        match a {
            GroupElement::Finite(i) => *i == 0,
            GroupElement::Abelian(v) => v.iter().all(Zero::is_zero),
            GroupElement::Free(w) => w.is_empty(),
        }
    }

    /// Left-to-right product of generator images.
    pub fn evaluate_word(&self, word: &[GeneratorSymbol]) -> Result<GroupElement> {
        word.iter().try_fold(self.identity(), |acc, s| {
            self.multiply(&acc, self.image(s)?)
        })
    }

    /// Same as [`GroupSpec::evaluate_word`] over token strings.
    pub fn evaluate_tokens<S: AsRef<str>>(&self, word: &[S]) -> Result<GroupElement> {
        word.iter().try_fold(self.identity(), |acc, t| {
            self.multiply(&acc, self.token_image(t.as_ref())?)
        })
    }

    /// Size metric used for search budgets: 0/1 for finite groups, the max
    /// absolute coordinate in `Z^k`, reduced length in `F_k`. Saturates at
    /// `u64::MAX`.
    pub fn element_norm(&self, a: &GroupElement) -> u64 {
        match a {
            GroupElement::Finite(i) => u64::from(*i != 0),
            GroupElement::Abelian(v) => v
                .iter()
                .map(|c| c.abs().to_u64().unwrap_or(u64::MAX))
                .max()
                .unwrap_or(0),
            GroupElement::Free(w) => w.len() as u64,
        }
    }

    /// Largest norm of any generator image.
    pub fn max_generator_norm(&self) -> u64 {
        self.generators
            .iter()
            .map(|g| self.element_norm(&g.image))
            .max()
            .unwrap_or(0)
    }

    /// Writes `a` as a product of generator images, or `None` when the
    /// declared generators cannot express it. The identity factors as the
    /// empty product; a generator image factors as itself.
    pub fn factor(&self, a: &GroupElement) -> Option<Vec<GeneratorSymbol>> {
        if self.is_identity(a) {
            return Some(Vec::new());
        }
        if let Some(s) = self.token_for(a) {
            return Some(vec![s.clone()]);
        }
        match (&self.family, a) {
            (Family::Finite { order, cayley }, GroupElement::Finite(target)) => {
                // Shortest word by breadth-first search over the Cayley graph.
                let mut prev: HashMap<usize, (usize, &GeneratorSymbol)> = HashMap::new();
                let mut queue = VecDeque::from([0usize]);
                let mut seen = vec![false; *order];
                seen[0] = true;
                while let Some(x) = queue.pop_front() {
                    for g in &self.generators {
                        let GroupElement::Finite(gi) = g.image else { continue };
                        let y = cayley[x][gi];
                        if !seen[y] {
                            seen[y] = true;
                            prev.insert(y, (x, &g.symbol));
                            queue.push_back(y);
                        }
                    }
                }
                if !seen[*target] {
                    return None;
                }
                let mut word = Vec::new();
                let mut cur = *target;
                while cur != 0 {
                    let (p, s) = prev[&cur];
                    word.push(s.clone());
                    cur = p;
                }
                word.reverse();
                Some(word)
            }
            (Family::FreeAbelian { rank }, GroupElement::Abelian(v)) => {
                let mut word = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut unit = vec![0i64; *rank];
                    unit[i] = if c.is_positive() { 1 } else { -1 };
                    let s = self.token_for(&GroupElement::abelian(unit))?;
                    let times = c.abs().to_usize()?;
                    word.extend(std::iter::repeat_n(s.clone(), times));
                }
                Some(word)
            }
            (Family::Free { .. }, GroupElement::Free(w)) => w
                .iter()
                .map(|s| self.token_for(&GroupElement::Free(vec![s.clone()])).cloned())
                .collect(),
            _ => None,
        }
    }
}

fn check_cayley(family: &Family) -> Vec<Diagnostic> {
    let Family::Finite { order, cayley } = family else {
        return Vec::new();
    };
    let mut diags = Vec::new();
    let n = *order;
    if n == 0 {
        diags.push(Diagnostic::new("group", "finite order must be positive"));
        return diags;
    }
    if cayley.len() != n || cayley.iter().any(|row| row.len() != n) {
        diags.push(Diagnostic::new("cayley", format!("table is not {n}x{n}")));
        return diags;
    }
    for (i, row) in cayley.iter().enumerate() {
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            diags.push(Diagnostic::new(format!("cayley row {i}"), format!("entry {bad} out of range")));
        }
    }
    if !diags.is_empty() {
        return diags;
    }
    for i in 0..n {
        if cayley[0][i] != i || cayley[i][0] != i {
            diags.push(Diagnostic::new(
                format!("cayley row/column {i}"),
                "index 0 must be the identity",
            ));
        }
        let row: HashSet<usize> = cayley[i].iter().copied().collect();
        let col: HashSet<usize> = cayley.iter().map(|r| r[i]).collect();
        if row.len() != n {
            diags.push(Diagnostic::new(format!("cayley row {i}"), "repeated entry (not a Latin square)"));
        }
        if col.len() != n {
            diags.push(Diagnostic::new(format!("cayley column {i}"), "repeated entry (not a Latin square)"));
        }
    }
    if diags.is_empty() {
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        diags.push(Diagnostic::new(
                            "cayley",
                            format!("not associative at ({a},{b},{c})"),
                        ));
                        break 'assoc;
                    }
                }
            }
        }
    }
    diags
}
