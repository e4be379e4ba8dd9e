use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Index of an element inside a [`FiniteGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(pub u32);

impl Element {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    id: u32,
    names: Vec<String>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> Element {
        Element(self.id)
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.index() * self.order + b.index()])
    }

    pub fn inv(&self, a: Element) -> Element {
        Element(self.inv[a.index()])
    }

    /// `a * b * c`
    pub fn mul3(&self, a: Element, b: Element, c: Element) -> Element {
        self.mul(self.mul(a, b), c)
    }

    /// `g a g^-1`
    pub fn conj(&self, g: Element, a: Element) -> Element {
        self.mul3(g, a, self.inv(g))
    }

    pub fn product<I: IntoIterator<Item = Element>>(&self, it: I) -> Element {
        it.into_iter().fold(self.id(), |acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, a: Element, k: i64) -> Element {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut out = self.id();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order as u32).map(Element)
    }

    pub fn name(&self, a: Element) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name).map(|i| Element(i as u32))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.table[i * self.order + j] as usize).collect())
            .collect()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, GroupError> {
        if names.len() != self.order {
            return Err(GroupError::NotAGroup(format!(
                "{} names for a group of order {}",
                names.len(),
                self.order
            )));
        }
        self.names = names;
        Ok(self)
    }

    /// Cyclic group `Z/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        group_from_table(&rows).expect("cyclic table")
    }

    /// Symmetric group on `k` points. Products compose right to left: `(s t)(x) = s(t(x))`.
    pub fn symmetric(k: usize) -> FiniteGroup {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_elements(&perms, |s, t| t.iter().map(|&x| s[x]).collect(), names)
    }

    /// Affine maps `x -> a x + b` of `Z/p` with `a` a unit; order `p(p-1)`.
    pub fn affine(p: usize) -> FiniteGroup {
        let mut elems = Vec::new();
        for a in 1..p {
            for b in 0..p {
                elems.push((a, b));
            }
        }
        let names = elems.iter().map(|(a, b)| format!("x->{a}x+{b}")).collect();
        FiniteGroup::from_elements(
            &elems,
            |&(a1, b1), &(a2, b2)| ((a1 * a2) % p, (a1 * b2 + b1) % p),
            names,
        )
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let elems: Vec<(Element, Element)> = g
            .elements()
            .flat_map(|a| h.elements().map(move |b| (a, b)))
            .collect();
        let names = elems
            .iter()
            .map(|&(a, b)| format!("({},{})", g.name(a), h.name(b)))
            .collect();
        FiniteGroup::from_elements(&elems, |&(a1, b1), &(a2, b2)| (g.mul(a1, a2), h.mul(b1, b2)), names)
    }

    fn from_elements<T: Clone + Eq + Hash, F: Fn(&T, &T) -> T>(
        elems: &[T],
        mul: F,
        names: Vec<String>,
    ) -> FiniteGroup {
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let rows: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        group_from_table(&rows)
            .and_then(|g| g.with_names(names))
            .expect("closed set of elements")
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// Cycle notation with 1-based points, e.g. `(12)`, `(123)`, `()` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Validate a square multiplication table and build the group.
pub fn group_from_table(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::NotAGroup("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NotAGroup(format!("row {i} has length {} (expected {n})", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(GroupError::NotAGroup(format!("entry {x} in row {i} out of range")));
        }
    }
    let m = |a: usize, b: usize| table[a][b];
    let id = (0..n)
        .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
        .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;
    let mut inv = vec![0u32; n];
    for x in 0..n {
        let y = (0..n)
            .find(|&y| m(x, y) == id && m(y, x) == id)
            .ok_or_else(|| GroupError::NotAGroup(format!("element {x} has no inverse")))?;
        inv[x] = y as u32;
    }
    for a in 0..n {
        for b in 0..n {
            let ab = m(a, b);
            for c in 0..n {
                if m(ab, c) != m(a, m(b, c)) {
                    return Err(GroupError::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
                }
            }
        }
    }
    Ok(FiniteGroup {
        order: n,
        table: table.iter().flatten().map(|&x| x as u32).collect(),
        inv,
        id: id as u32,
        names: (0..n).map(|i| i.to_string()).collect(),
    })
}
