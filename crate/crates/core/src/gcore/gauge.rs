use std::collections::BTreeMap;

use thiserror::Error;

use super::group::{Element, FiniteGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaugeError {
    #[error("gauge domains differ")]
    DomainMismatch,
}

/// A function from a finite set of base points (vertex indices) to the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeFunction {
    values: BTreeMap<usize, Element>,
}

impl GaugeFunction {
    pub fn new(values: BTreeMap<usize, Element>) -> Self {
        GaugeFunction { values }
    }

    pub fn constant<I: IntoIterator<Item = usize>>(domain: I, g: Element) -> Self {
        GaugeFunction { values: domain.into_iter().map(|y| (y, g)).collect() }
    }

    pub fn identity<I: IntoIterator<Item = usize>>(group: &FiniteGroup, domain: I) -> Self {
        Self::constant(domain, group.id())
    }

    pub fn get(&self, y: usize) -> Option<Element> {
        self.values.get(&y).copied()
    }

    /// Value at `y`, or `fallback` off the domain.
    pub fn get_or(&self, y: usize, fallback: Element) -> Element {
        self.get(y).unwrap_or(fallback)
    }

    pub fn set(&mut self, y: usize, g: Element) {
        self.values.insert(y, g);
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Element)> + '_ {
        self.values.iter().map(|(&y, &g)| (y, g))
    }

    pub fn same_domain(&self, other: &GaugeFunction) -> bool {
        self.values.len() == other.values.len() && self.values.keys().eq(other.values.keys())
    }

    pub fn support(&self, group: &FiniteGroup) -> Vec<usize> {
        self.iter().filter(|&(_, g)| g != group.id()).map(|(y, _)| y).collect()
    }

    pub fn is_identity(&self, group: &FiniteGroup) -> bool {
        self.values.values().all(|&g| g == group.id())
    }

    pub fn inverse(&self, group: &FiniteGroup) -> GaugeFunction {
        GaugeFunction { values: self.iter().map(|(y, g)| (y, group.inv(g))).collect() }
    }

    /// Restriction to the points of `domain` (missing points are skipped).
    pub fn restrict<I: IntoIterator<Item = usize>>(&self, domain: I) -> GaugeFunction {
        GaugeFunction {
            values: domain.into_iter().filter_map(|y| self.get(y).map(|g| (y, g))).collect(),
        }
    }

    /// Extension to `domain`, filling new points with the identity.
    pub fn extend<I: IntoIterator<Item = usize>>(&self, group: &FiniteGroup, domain: I) -> GaugeFunction {
        GaugeFunction {
            values: domain.into_iter().map(|y| (y, self.get_or(y, group.id()))).collect(),
        }
    }
}

/// Pointwise product `(f g)(y) = f(y) g(y)`.
pub fn gauge_compose(
    group: &FiniteGroup,
    f: &GaugeFunction,
    g: &GaugeFunction,
) -> Result<GaugeFunction, GaugeError> {
    if !f.same_domain(g) {
        return Err(GaugeError::DomainMismatch);
    }
    Ok(GaugeFunction {
        values: f.iter().zip(g.iter()).map(|((y, a), (_, b))| (y, group.mul(a, b))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unit() {
        let g = FiniteGroup::symmetric(3);
        let f = GaugeFunction::identity(&g, [0, 1]);
        let h = GaugeFunction::new([(0, Element(3)), (1, Element(5))].into());
        assert_eq!(gauge_compose(&g, &f, &h).unwrap(), h);
        assert_eq!(gauge_compose(&g, &h, &f).unwrap(), h);
    }

    #[test]
    fn z2_componentwise() {
        let g = FiniteGroup::cyclic(2);
        let s = Element(1);
        let f = GaugeFunction::new([(0, s), (1, g.id())].into());
        let h = GaugeFunction::new([(0, s), (1, s)].into());
        let want = GaugeFunction::new([(0, g.id()), (1, s)].into());
        assert_eq!(gauge_compose(&g, &f, &h).unwrap(), want);
    }

    #[test]
    fn s3_pointwise_product() {
        let g = FiniteGroup::symmetric(3);
        let a = g.element_by_name("(12)").unwrap();
        let b = g.element_by_name("(123)").unwrap();
        let f = GaugeFunction::new([(0, a)].into());
        let h = GaugeFunction::new([(0, b)].into());
        let fh = gauge_compose(&g, &f, &h).unwrap();
        assert_eq!(fh.get(0), Some(g.mul(a, b)));
        assert_eq!(g.name(g.mul(a, b)), "(23)");
    }

    #[test]
    fn domain_mismatch() {
        let g = FiniteGroup::cyclic(2);
        let f = GaugeFunction::identity(&g, [0]);
        let h = GaugeFunction::identity(&g, [1]);
        assert_eq!(gauge_compose(&g, &f, &h), Err(GaugeError::DomainMismatch));
    }
}
