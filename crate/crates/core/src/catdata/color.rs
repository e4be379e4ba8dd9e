use std::fmt;

use crate::gcore::{Element, Scalar};

use super::{CatError, CategoryBackend};

/// A scalar-weighted sum of simple objects of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalColor {
    pub degree: Element,
    terms: Vec<(usize, Scalar)>,
}

impl FormalColor {
    /// Zero weights are dropped; every index must have degree `degree`.
    pub fn new(backend: &CategoryBackend, degree: Element, terms: Vec<(usize, Scalar)>) -> FormalColor {
        let mut terms: Vec<(usize, Scalar)> = terms.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        assert!(terms.iter().all(|(i, _)| backend.degree(*i) == degree), "inhomogeneous color");
        terms.sort_by_key(|t| t.0);
        FormalColor { degree, terms }
    }

    pub fn terms(&self) -> &[(usize, Scalar)] {
        &self.terms
    }

    pub fn weight(&self, i: usize) -> Option<&Scalar> {
        self.terms.iter().find(|t| t.0 == i).map(|t| &t.1)
    }

    pub fn scale(&self, s: &Scalar) -> FormalColor {
        FormalColor {
            degree: self.degree,
            terms: self.terms.iter().map(|(i, w)| (*i, w * s)).filter(|(_, w)| !w.is_zero()).collect(),
        }
    }

    pub fn display<'a>(&'a self, backend: &'a CategoryBackend) -> impl fmt::Display + 'a {
        struct D<'a>(&'a FormalColor, &'a CategoryBackend);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.terms.is_empty() {
                    return write!(f, "0");
                }
                for (k, (i, w)) in self.0.terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({w})·{}", self.1.simple(*i).name)?;
                }
                Ok(())
            }
        }
        D(self, backend)
    }
}

fn generic(backend: &CategoryBackend, g: Element) -> Result<(), CatError> {
    if backend.in_badset(g) {
        return Err(CatError::DegreeInBadSet(backend.group().name(g).to_string()));
    }
    Ok(())
}

/// `b_g = Σ_{i ∈ I_g} b(i)·i`.
pub fn b_color(backend: &CategoryBackend, g: Element) -> Result<FormalColor, CatError> {
    generic(backend, g)?;
    let terms = backend.simples_of_degree(g).iter().map(|&i| (i, backend.b(i).clone())).collect();
    Ok(FormalColor::new(backend, g, terms))
}

/// `Σ_{i ∈ I_g} d(i)·i`.
pub fn kirby_color(backend: &CategoryBackend, g: Element) -> Result<FormalColor, CatError> {
    generic(backend, g)?;
    let terms = backend.simples_of_degree(g).iter().map(|&i| (i, backend.d(i).clone())).collect();
    Ok(FormalColor::new(backend, g, terms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedColor {
    Single(FormalColor),
    /// Two parallel strands `b_h ⊗ b_{h⁻¹g}`.
    Pair(FormalColor, FormalColor),
}

/// `b_g` for generic `g`; for `g` in the bad set, the pair `(b_h, b_{h⁻¹g})` for the
/// first `h` among `candidates` (all of `G` when `None`) with `h, h⁻¹g` generic.
pub fn extend_b_color(
    backend: &CategoryBackend,
    g: Element,
    candidates: Option<&[Element]>,
) -> Result<ExtendedColor, CatError> {
    if !backend.in_badset(g) {
        return Ok(ExtendedColor::Single(b_color(backend, g)?));
    }
    let grp = backend.group();
    let all: Vec<Element> = grp.elements().collect();
    let hs = candidates.unwrap_or(&all);
    for &h in hs {
        let rest = grp.mul(grp.inv(h), g);
        if !backend.in_badset(h) && !backend.in_badset(rest) {
            return Ok(ExtendedColor::Pair(b_color(backend, h)?, b_color(backend, rest)?));
        }
    }
    Err(CatError::NoValidH(grp.name(g).to_string()))
}
