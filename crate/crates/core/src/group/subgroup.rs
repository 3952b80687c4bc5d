use log::debug;

use crate::error::{Error, Result};
use crate::group::ball::Ball;
use crate::group::element::{Element, Group, GroupKind};
use crate::group::folded::FoldedGraph;
use crate::group::lattice::Lattice;

/// Homomorphism to a finite abelian group `⊕ ℤ/moduli[c]`, given by the
/// images of the basis generators (see [`Group::abelianization`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub moduli: Vec<i64>,
    /// `images[j][c]`: component `c` of the image of basis generator `j`.
    pub images: Vec<Vec<i64>>,
}

impl Character {
    pub fn eval(&self, group: &Group, g: &Element) -> Vec<i64> {
        let ab = group.abelianization(g);
        self.moduli
            .iter()
            .enumerate()
            .map(|(c, &m)| {
                ab.iter()
                    .zip(&self.images)
                    .map(|(x, img)| x * img[c])
                    .sum::<i64>()
                    .rem_euclid(m)
            })
            .collect()
    }

    fn check(&self, group: &Group) -> Result<()> {
        if self.moduli.iter().any(|&m| m < 1) {
            return Err(Error::config("character moduli must be positive"));
        }
        if self.images.len() != group.basic_rank()
            || self.images.iter().any(|img| img.len() != self.moduli.len())
        {
            return Err(Error::config(format!(
                "character needs {} images with {} components each",
                group.basic_rank(),
                self.moduli.len()
            )));
        }
        Ok(())
    }
}

/// Description of a subgroup by normal-form data.
#[derive(Clone, Debug, PartialEq)]
pub enum SubgroupSpec {
    Trivial,
    Whole,
    /// Subgroup generated by the given elements (ℤⁿ and free groups).
    Generated(Vec<Element>),
    /// Direct product of one subgroup per factor.
    Product(Vec<SubgroupSpec>),
    /// A subgroup of one free factor, seen inside the free product.
    Factor { factor: usize, inner: Box<SubgroupSpec> },
    /// `g P g⁻¹`.
    Conjugate { by: Element, inner: Box<SubgroupSpec> },
    Intersection(Vec<SubgroupSpec>),
    /// Kernel of a character; finite index, with the character as coset table.
    Kernel(Character),
}

/// Canonical label of a left coset `gP`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetKey {
    Element(Element),
    Residue(Vec<i64>),
    Schreier(usize, Vec<i32>),
    Tuple(Vec<CosetKey>),
    Syllable(Element, Box<CosetKey>),
}

#[derive(Clone, Debug)]
enum Repr {
    Trivial,
    Whole,
    Lattice(Lattice),
    Folded(FoldedGraph),
    Product(Vec<Subgroup>),
    Factor { factor: usize, inner: Box<Subgroup> },
    Conjugate { by: Element, by_inv: Element, inner: Box<Subgroup> },
    Intersection(Vec<Subgroup>),
    Kernel(Character),
}

/// A subgroup resolved against a concrete group, with a membership test.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: Group,
    repr: Repr,
}

impl Subgroup {
    pub fn resolve(group: &Group, spec: &SubgroupSpec) -> Result<Self> {
        let repr = match spec {
            SubgroupSpec::Trivial => Repr::Trivial,
            SubgroupSpec::Whole => Repr::Whole,
            SubgroupSpec::Generated(gens) => {
                for g in gens {
                    group.validate(g)?;
                }
                match group.kind() {
                    GroupKind::FreeAbelian { rank } => {
                        let vs: Vec<Vec<i64>> = gens
                            .iter()
                            .map(|g| match g {
                                Element::Vector(v) => v.clone(),
                                _ => unreachable!(),
                            })
                            .collect();
                        Repr::Lattice(Lattice::new(*rank, &vs))
                    }
                    GroupKind::Free { .. } => {
                        let ws: Vec<Vec<i32>> = gens
                            .iter()
                            .map(|g| match g {
                                Element::Word(w) => w.clone(),
                                _ => unreachable!(),
                            })
                            .collect();
                        Repr::Folded(FoldedGraph::new(&ws))
                    }
                    _ => {
                        return Err(Error::config(
                            "generated subgroups of products must be given per factor",
                        ))
                    }
                }
            }
            SubgroupSpec::Product(parts) => match group.kind() {
                GroupKind::DirectProduct(fs) if fs.len() == parts.len() => Repr::Product(
                    fs.iter()
                        .zip(parts)
                        .map(|(f, p)| Subgroup::resolve(f, p))
                        .collect::<Result<_>>()?,
                ),
                _ => return Err(Error::config("product subgroup needs a direct product of matching arity")),
            },
            SubgroupSpec::Factor { factor, inner } => match group.kind() {
                GroupKind::FreeProduct(fs) if *factor < fs.len() => Repr::Factor {
                    factor: *factor,
                    inner: Box::new(Subgroup::resolve(&fs[*factor], inner)?),
                },
                _ => return Err(Error::config("factor subgroup needs a free product with that factor")),
            },
            SubgroupSpec::Conjugate { by, inner } => {
                group.validate(by)?;
                Repr::Conjugate {
                    by: by.clone(),
                    by_inv: group.invert(by),
                    inner: Box::new(Subgroup::resolve(group, inner)?),
                }
            }
            SubgroupSpec::Intersection(parts) => {
                if parts.is_empty() {
                    return Err(Error::config("empty intersection"));
                }
                Repr::Intersection(
                    parts
                        .iter()
                        .map(|p| Subgroup::resolve(group, p))
                        .collect::<Result<_>>()?,
                )
            }
            SubgroupSpec::Kernel(ch) => {
                ch.check(group)?;
                Repr::Kernel(ch.clone())
            }
        };
        Ok(Subgroup {
            group: group.clone(),
            repr,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn contains(&self, g: &Element) -> bool {
        match (&self.repr, g) {
            (Repr::Trivial, _) => self.group.is_identity(g),
            (Repr::Whole, _) => true,
            (Repr::Lattice(l), Element::Vector(v)) => l.contains(v),
            (Repr::Folded(f), Element::Word(w)) => f.contains(w),
            (Repr::Product(parts), Element::Tuple(cs)) => {
                parts.iter().zip(cs).all(|(p, c)| p.contains(c))
            }
            (Repr::Factor { factor, inner }, Element::Syllables(ss)) => match ss.as_slice() {
                [] => true,
                [(f, e)] => f == factor && inner.contains(e),
                _ => false,
            },
            (Repr::Conjugate { by, by_inv, inner }, _) => {
                let x = self.group.multiply(&self.group.multiply(by_inv, g), by);
                inner.contains(&x)
            }
            (Repr::Intersection(parts), _) => parts.iter().all(|p| p.contains(g)),
            (Repr::Kernel(ch), _) => ch.eval(&self.group, g).iter().all(|&x| x == 0),
            _ => false,
        }
    }

    /// Whether `g P = h P`.
    pub fn same_coset(&self, g: &Element, h: &Element) -> bool {
        self.contains(&self.group.left_quotient(g, h))
    }

    /// Canonical label for the left coset `gP`, when the representation
    /// admits one. Equal keys iff equal cosets.
    pub fn coset_key(&self, g: &Element) -> Option<CosetKey> {
        match (&self.repr, g) {
            (Repr::Trivial, _) => Some(CosetKey::Element(g.clone())),
            (Repr::Whole, _) => Some(CosetKey::Residue(Vec::new())),
            (Repr::Lattice(l), Element::Vector(v)) => Some(CosetKey::Residue(l.reduce(v))),
            (Repr::Folded(f), Element::Word(_)) => {
                let Element::Word(inv) = self.group.invert(g) else { unreachable!() };
                let (v, used) = f.read(&inv);
                Some(CosetKey::Schreier(v, inv[used..].to_vec()))
            }
            (Repr::Product(parts), Element::Tuple(cs)) => parts
                .iter()
                .zip(cs)
                .map(|(p, c)| p.coset_key(c))
                .collect::<Option<Vec<_>>>()
                .map(CosetKey::Tuple),
            (Repr::Factor { factor, inner }, Element::Syllables(ss)) => {
                let GroupKind::FreeProduct(fs) = self.group.kind() else { return None };
                match ss.last() {
                    Some((f, e)) if f == factor => {
                        let prefix = Element::Syllables(ss[..ss.len() - 1].to_vec());
                        Some(CosetKey::Syllable(prefix, Box::new(inner.coset_key(e)?)))
                    }
                    _ => Some(CosetKey::Syllable(
                        g.clone(),
                        Box::new(inner.coset_key(&fs[*factor].identity())?),
                    )),
                }
            }
            (Repr::Kernel(ch), _) => Some(CosetKey::Residue(ch.eval(&self.group, g))),
            _ => None,
        }
    }

    /// Index in the ambient group when it is known to be finite.
    pub fn finite_index(&self) -> Option<u64> {
        match &self.repr {
            Repr::Whole => Some(1),
            Repr::Lattice(l) => l.index(),
            Repr::Kernel(ch) => {
                // Size of the image subgroup in ⊕ ℤ/m.
                let mut image = std::collections::BTreeSet::new();
                image.insert(vec![0; ch.moduli.len()]);
                loop {
                    let mut grew = false;
                    let current: Vec<Vec<i64>> = image.iter().cloned().collect();
                    for x in &current {
                        for img in &ch.images {
                            let y: Vec<i64> = x
                                .iter()
                                .zip(img)
                                .zip(&ch.moduli)
                                .map(|((a, b), m)| (a + b).rem_euclid(*m))
                                .collect();
                            grew |= image.insert(y);
                        }
                    }
                    if !grew {
                        break;
                    }
                }
                Some(image.len() as u64)
            }
            _ => None,
        }
    }

    /// Image in the finite abelian quotient `G/H` for normal subgroups with a
    /// coset table (full-rank lattices in ℤⁿ and character kernels).
    pub fn quotient(&self, g: &Element) -> Option<Vec<i64>> {
        match (&self.repr, g) {
            (Repr::Whole, _) => Some(Vec::new()),
            (Repr::Lattice(l), Element::Vector(v)) if l.index().is_some() => Some(l.reduce(v)),
            (Repr::Kernel(ch), _) => Some(ch.eval(&self.group, g)),
            _ => None,
        }
    }

    /// Sum of two quotient images.
    pub fn quotient_add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        match &self.repr {
            Repr::Lattice(l) => l.reduce(&sum),
            Repr::Kernel(ch) => sum.iter().zip(&ch.moduli).map(|(x, m)| x.rem_euclid(*m)).collect(),
            _ => sum,
        }
    }

    /// Whether this subgroup carries an explicit finite coset table.
    pub fn has_coset_table(&self) -> bool {
        matches!(self.repr, Repr::Whole | Repr::Kernel(_))
            || matches!(&self.repr, Repr::Lattice(l) if l.index().is_some())
    }
}

/// Subset of a group, resolved against a ball by [`trace_subset`].
#[derive(Clone, Debug, PartialEq)]
pub enum SubsetSpec {
    Subgroup(SubgroupSpec),
    Coset { element: Element, subgroup: SubgroupSpec },
    Basepoint,
    Explicit(Vec<Element>),
    /// Named predicate: `identity`, `x-axis`, `y-axis`, `diagonal`.
    Predicate(String),
}

/// The ball points belonging to `spec`, as sorted indices.
pub fn trace_subset(ball: &Ball, spec: &SubsetSpec) -> Result<Vec<usize>> {
    let group = ball.group();
    let out: Vec<usize> = match spec {
        SubsetSpec::Subgroup(s) => {
            let sub = Subgroup::resolve(group, s)?;
            (0..ball.len()).filter(|&i| sub.contains(ball.point(i))).collect()
        }
        SubsetSpec::Coset { element, subgroup } => {
            group.validate(element)?;
            let sub = Subgroup::resolve(group, subgroup)?;
            let inv = group.invert(element);
            (0..ball.len())
                .filter(|&i| sub.contains(&group.multiply(&inv, ball.point(i))))
                .collect()
        }
        SubsetSpec::Basepoint => vec![0],
        SubsetSpec::Explicit(points) => {
            let mut idx = Vec::with_capacity(points.len());
            for p in points {
                group.validate(p)?;
                idx.push(ball.index_of(p).ok_or_else(|| {
                    Error::domain(format!("{} is outside the ball", group.format(p)))
                })?);
            }
            idx.sort_unstable();
            idx.dedup();
            idx
        }
        SubsetSpec::Predicate(name) => {
            let sub = Subgroup::resolve(group, &predicate_subgroup(group, name)?)?;
            (0..ball.len()).filter(|&i| sub.contains(ball.point(i))).collect()
        }
    };
    debug!("trace of {spec:?}: {} points", out.len());
    Ok(out)
}

fn predicate_subgroup(group: &Group, name: &str) -> Result<SubgroupSpec> {
    let rank = match group.kind() {
        GroupKind::FreeAbelian { rank } => Some(*rank),
        _ => None,
    };
    let axis = |k: usize| -> Result<SubgroupSpec> {
        match rank {
            Some(n) if k < n => {
                let mut v = vec![0; n];
                v[k] = 1;
                Ok(SubgroupSpec::Generated(vec![Element::Vector(v)]))
            }
            _ => Err(Error::config(format!("predicate {name:?} needs Z^n with n > {k}"))),
        }
    };
    match name {
        "identity" => Ok(SubgroupSpec::Trivial),
        "x-axis" => axis(0),
        "y-axis" => axis(1),
        "diagonal" => match rank {
            Some(n) if n >= 2 => Ok(SubgroupSpec::Generated(vec![Element::Vector(vec![1; n])])),
            _ => Err(Error::config("predicate \"diagonal\" needs Z^n with n >= 2")),
        },
        _ => Err(Error::config(format!("unknown predicate {name:?}"))),
    }
}
