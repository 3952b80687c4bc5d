use std::fmt;

use log::warn;

use crate::error::{Error, Result};
use crate::group::lattice::Lattice;

/// A letter of a free group word: `+i` is the `i`-th basis generator
/// (1-based), `-i` its inverse.
pub type Letter = i32;

/// Group element in canonical normal form.
///
/// The derived `Ord` is the canonical key order used everywhere points are
/// sorted (after word length).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Integer vector in ℤⁿ.
    Vector(Vec<i64>),
    /// Freely reduced word in a free group.
    Word(Vec<Letter>),
    /// One component per factor of a direct product.
    Tuple(Vec<Element>),
    /// Alternating sequence of non-identity syllables `(factor, element)` in a
    /// free product.
    Syllables(Vec<(usize, Element)>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    DirectProduct(Vec<Group>),
    FreeProduct(Vec<Group>),
}

/// A finitely generated group with a fixed symmetric generating set.
#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    kind: GroupKind,
    generators: Vec<Element>,
    /// True when word length has a closed form (standard generators, or a
    /// product of such groups).
    standard: bool,
}

impl Group {
    pub fn free_abelian(rank: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            for sign in [1, -1] {
                let mut v = vec![0; rank];
                v[i] = sign;
                generators.push(Element::Vector(v));
            }
        }
        Group {
            kind: GroupKind::FreeAbelian { rank },
            generators,
            standard: true,
        }
    }

    /// ℤⁿ with an arbitrary finite generating set of integer vectors. The set
    /// is symmetrized; a warning is logged when it was not symmetric.
    pub fn free_abelian_with_generators(rank: usize, gens: &[Vec<i64>]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::config("generating set is empty"));
        }
        let mut set: Vec<Vec<i64>> = Vec::new();
        for g in gens {
            if g.len() != rank {
                return Err(Error::config(format!(
                    "generator {g:?} does not have {rank} coordinates"
                )));
            }
            if g.iter().all(|&x| x == 0) {
                continue;
            }
            if !set.contains(g) {
                set.push(g.clone());
            }
        }
        let missing: Vec<Vec<i64>> = set
            .iter()
            .map(|g| g.iter().map(|x| -x).collect::<Vec<_>>())
            .filter(|inv| !set.contains(inv))
            .collect();
        if !missing.is_empty() {
            warn!("generating set is not symmetric; adding {} inverses", missing.len());
            for inv in missing {
                if !set.contains(&inv) {
                    set.push(inv);
                }
            }
        }
        let lattice = Lattice::new(rank, &set);
        if !lattice.is_full() {
            return Err(Error::config(format!(
                "vectors {set:?} do not generate Z^{rank}"
            )));
        }
        set.sort();
        let standard = {
            let mut std_set: Vec<Vec<i64>> = Group::free_abelian(rank)
                .generators
                .into_iter()
                .map(|e| match e {
                    Element::Vector(v) => v,
                    _ => unreachable!(),
                })
                .collect();
            std_set.sort();
            std_set == set
        };
        Ok(Group {
            kind: GroupKind::FreeAbelian { rank },
            generators: set.into_iter().map(Element::Vector).collect(),
            standard,
        })
    }

    pub fn free(rank: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * rank);
        for i in 1..=rank as Letter {
            generators.push(Element::Word(vec![i]));
            generators.push(Element::Word(vec![-i]));
        }
        Group {
            kind: GroupKind::Free { rank },
            generators,
            standard: true,
        }
    }

    pub fn direct_product(factors: Vec<Group>) -> Self {
        let identities: Vec<Element> = factors.iter().map(Group::identity).collect();
        let mut generators = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for s in &f.generators {
                let mut t = identities.clone();
                t[i] = s.clone();
                generators.push(Element::Tuple(t));
            }
        }
        let standard = factors.iter().all(|f| f.standard);
        Group {
            kind: GroupKind::DirectProduct(factors),
            generators,
            standard,
        }
    }

    pub fn free_product(factors: Vec<Group>) -> Self {
        let mut generators = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for s in &f.generators {
                generators.push(Element::Syllables(vec![(i, s.clone())]));
            }
        }
        let standard = factors.iter().all(|f| f.standard);
        Group {
            kind: GroupKind::FreeProduct(factors),
            generators,
            standard,
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Whether word lengths are available in closed form.
    pub fn has_closed_form_length(&self) -> bool {
        self.standard
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => Element::Vector(vec![0; *rank]),
            GroupKind::Free { .. } => Element::Word(Vec::new()),
            GroupKind::DirectProduct(fs) => Element::Tuple(fs.iter().map(Group::identity).collect()),
            GroupKind::FreeProduct(_) => Element::Syllables(Vec::new()),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        match g {
            Element::Vector(v) => v.iter().all(|&x| x == 0),
            Element::Word(w) => w.is_empty(),
            Element::Tuple(cs) => match &self.kind {
                GroupKind::DirectProduct(fs) => fs.iter().zip(cs).all(|(f, c)| f.is_identity(c)),
                _ => false,
            },
            Element::Syllables(s) => s.is_empty(),
        }
    }

    /// Checks that `g` is a well-formed normal form for this group.
    pub fn validate(&self, g: &Element) -> Result<()> {
        let ok = match (&self.kind, g) {
            (GroupKind::FreeAbelian { rank }, Element::Vector(v)) => v.len() == *rank,
            (GroupKind::Free { rank }, Element::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::DirectProduct(fs), Element::Tuple(cs)) => {
                fs.len() == cs.len() && fs.iter().zip(cs).all(|(f, c)| f.validate(c).is_ok())
            }
            (GroupKind::FreeProduct(fs), Element::Syllables(ss)) => {
                ss.iter().all(|(i, e)| {
                    *i < fs.len() && fs[*i].validate(e).is_ok() && !fs[*i].is_identity(e)
                }) && ss.windows(2).all(|p| p[0].0 != p[1].0)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("{g:?} is not a normal form of this group")))
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        match (&self.kind, a, b) {
            (_, Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (_, Element::Word(x), Element::Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Element::Word(out)
            }
            (GroupKind::DirectProduct(fs), Element::Tuple(x), Element::Tuple(y)) => Element::Tuple(
                fs.iter()
                    .zip(x.iter().zip(y))
                    .map(|(f, (p, q))| f.multiply(p, q))
                    .collect(),
            ),
            (GroupKind::FreeProduct(fs), Element::Syllables(x), Element::Syllables(y)) => {
                let mut out = x.clone();
                let mut rest = y.iter();
                let mut pending = rest.next().cloned();
                while let Some((fi, e)) = pending.take() {
                    match out.last() {
                        Some((lf, le)) if *lf == fi => {
                            let merged = fs[fi].multiply(le, &e);
                            out.pop();
                            if !fs[fi].is_identity(&merged) {
                                out.push((fi, merged));
                                break;
                            }
                            pending = rest.next().cloned();
                        }
                        _ => {
                            out.push((fi, e));
                            break;
                        }
                    }
                }
                out.extend(rest.cloned());
                Element::Syllables(out)
            }
            _ => panic!("multiply: mismatched element kinds {a:?} and {b:?}"),
        }
    }

    pub fn invert(&self, a: &Element) -> Element {
        match (&self.kind, a) {
            (_, Element::Vector(x)) => Element::Vector(x.iter().map(|v| -v).collect()),
            (_, Element::Word(w)) => Element::Word(w.iter().rev().map(|l| -l).collect()),
            (GroupKind::DirectProduct(fs), Element::Tuple(cs)) => {
                Element::Tuple(fs.iter().zip(cs).map(|(f, c)| f.invert(c)).collect())
            }
            (GroupKind::FreeProduct(fs), Element::Syllables(ss)) => Element::Syllables(
                ss.iter().rev().map(|(i, e)| (*i, fs[*i].invert(e))).collect(),
            ),
            _ => panic!("invert: element {a:?} does not belong to this group"),
        }
    }

    /// `a⁻¹·b`.
    pub fn left_quotient(&self, a: &Element, b: &Element) -> Element {
        self.multiply(&self.invert(a), b)
    }

    /// Closed-form word length for standard generating sets.
    pub fn closed_form_length(&self, g: &Element) -> Option<u64> {
        if !self.standard {
            return None;
        }
        Some(self.standard_length(g))
    }

    fn standard_length(&self, g: &Element) -> u64 {
        match (&self.kind, g) {
            (_, Element::Vector(v)) => v.iter().map(|x| x.unsigned_abs()).sum(),
            (_, Element::Word(w)) => w.len() as u64,
            (GroupKind::DirectProduct(fs), Element::Tuple(cs)) => {
                fs.iter().zip(cs).map(|(f, c)| f.standard_length(c)).sum()
            }
            (GroupKind::FreeProduct(fs), Element::Syllables(ss)) => {
                ss.iter().map(|(i, e)| fs[*i].standard_length(e)).sum()
            }
            _ => panic!("length: element {g:?} does not belong to this group"),
        }
    }

    /// Closed-form word distance `|a⁻¹b|`, computed without forming `a⁻¹b`
    /// where the normal form allows it.
    pub fn closed_form_distance(&self, a: &Element, b: &Element) -> Option<u64> {
        if !self.standard {
            return None;
        }
        Some(self.standard_distance(a, b))
    }

    fn standard_distance(&self, a: &Element, b: &Element) -> u64 {
        match (&self.kind, a, b) {
            (_, Element::Vector(x), Element::Vector(y)) => {
                x.iter().zip(y).map(|(p, q)| (p - q).unsigned_abs()).sum()
            }
            (_, Element::Word(x), Element::Word(y)) => {
                let lcp = x.iter().zip(y).take_while(|(p, q)| p == q).count();
                (x.len() + y.len() - 2 * lcp) as u64
            }
            (GroupKind::DirectProduct(fs), Element::Tuple(x), Element::Tuple(y)) => fs
                .iter()
                .zip(x.iter().zip(y))
                .map(|(f, (p, q))| f.standard_distance(p, q))
                .sum(),
            (GroupKind::FreeProduct(fs), Element::Syllables(x), Element::Syllables(y)) => {
                let lcp = x.iter().zip(y).take_while(|(p, q)| p == q).count();
                let len = |s: &[(usize, Element)]| -> u64 {
                    s.iter().map(|(i, e)| fs[*i].standard_length(e)).sum()
                };
                match (x.get(lcp), y.get(lcp)) {
                    (Some((fa, ea)), Some((fb, eb))) if fa == fb => {
                        fs[*fa].standard_distance(ea, eb) + len(&x[lcp + 1..]) + len(&y[lcp + 1..])
                    }
                    _ => len(&x[lcp..]) + len(&y[lcp..]),
                }
            }
            _ => panic!("distance: mismatched element kinds {a:?} and {b:?}"),
        }
    }

    /// Number of basis generators seen by [`Group::abelianization`].
    pub fn basic_rank(&self) -> usize {
        match &self.kind {
            GroupKind::FreeAbelian { rank } | GroupKind::Free { rank } => *rank,
            GroupKind::DirectProduct(fs) | GroupKind::FreeProduct(fs) => {
                fs.iter().map(Group::basic_rank).sum()
            }
        }
    }

    /// Exponent sums over the basis generators (factors concatenated).
    pub fn abelianization(&self, g: &Element) -> Vec<i64> {
        let mut out = vec![0; self.basic_rank()];
        self.accumulate_abelianization(g, &mut out, 0);
        out
    }

    fn accumulate_abelianization(&self, g: &Element, out: &mut [i64], offset: usize) {
        match (&self.kind, g) {
            (_, Element::Vector(v)) => {
                for (i, x) in v.iter().enumerate() {
                    out[offset + i] += x;
                }
            }
            (_, Element::Word(w)) => {
                for &l in w {
                    out[offset + l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
            }
            (GroupKind::DirectProduct(fs), Element::Tuple(cs)) => {
                let mut off = offset;
                for (f, c) in fs.iter().zip(cs) {
                    f.accumulate_abelianization(c, out, off);
                    off += f.basic_rank();
                }
            }
            (GroupKind::FreeProduct(fs), Element::Syllables(ss)) => {
                let offsets: Vec<usize> = fs
                    .iter()
                    .scan(offset, |acc, f| {
                        let o = *acc;
                        *acc += f.basic_rank();
                        Some(o)
                    })
                    .collect();
                for (i, e) in ss {
                    fs[*i].accumulate_abelianization(e, out, offsets[*i]);
                }
            }
            _ => panic!("abelianization: element {g:?} does not belong to this group"),
        }
    }

    /// Human-readable rendering of an element.
    pub fn format(&self, g: &Element) -> String {
        ElementDisplay(g).to_string()
    }
}

struct ElementDisplay<'a>(&'a Element);

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Word(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
            Element::Tuple(cs) => {
                write!(f, "<")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}", ElementDisplay(c))?;
                }
                write!(f, ">")
            }
            Element::Syllables(ss) => {
                if ss.is_empty() {
                    return write!(f, "e");
                }
                for (i, e) in ss {
                    write!(f, "[{i}:{}]", ElementDisplay(e))?;
                }
                Ok(())
            }
        }
    }
}

/// `a`, `b`, ... for generators; upper case for inverses.
pub fn letter_char(l: Letter) -> char {
    let base = (b'a' + (l.unsigned_abs() as u8 - 1)) as char;
    if l > 0 {
        base
    } else {
        base.to_ascii_uppercase()
    }
}

/// Parses a word like `"aBa"` (upper case = inverse; `""` or `"e"` = identity)
/// and freely reduces it.
pub fn parse_word(s: &str, rank: usize) -> Result<Element> {
    let mut out: Vec<Letter> = Vec::new();
    if s == "e" {
        return Ok(Element::Word(out));
    }
    for ch in s.chars() {
        if !ch.is_ascii_alphabetic() {
            return Err(Error::domain(format!("invalid letter {ch:?} in word {s:?}")));
        }
        let idx = (ch.to_ascii_lowercase() as u8 - b'a') as usize + 1;
        if idx > rank {
            return Err(Error::domain(format!(
                "letter {ch:?} exceeds free group rank {rank}"
            )));
        }
        let l = if ch.is_ascii_lowercase() { idx as Letter } else { -(idx as Letter) };
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(Element::Word(out))
}
