use serde::Serialize;

use crate::catdata::{check_chromatic, degree_pairs, validate_b, CategoryBackend};

use super::{check_cancellation_12, check_cancellation_23, scan_even_permutation, GraphError};

/// Outcome of one algebraic identity over every degree it applies to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// first failing instance
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs the b-identity, the chromatic identity, the even-permutation symmetry and
/// both handle cancellations on `backend`.
pub fn identity_suite(backend: &CategoryBackend) -> Result<Vec<IdentityCheck>, GraphError> {
    let grp = backend.group();
    let good: Vec<_> = grp.elements().filter(|&g| !backend.in_badset(g)).collect();
    let name = |i: usize| backend.simple(i).name.clone();
    let mut out = Vec::new();

    let b = validate_b(backend, &degree_pairs(backend))?;
    out.push(IdentityCheck {
        name: "validate_b",
        checked: b.checked,
        failures: b.failures.len(),
        witness: b.failures.first().map(|x| {
            format!("g1={}, g2={}, V={}: b(V)={} but sum={}", grp.name(x.g1), grp.name(x.g2), name(x.simple), x.lhs, x.rhs)
        }),
    });

    let (mut checked, mut failures, mut witness) = (0, 0, None);
    for &g in &good {
        let r = check_chromatic(backend, g)?;
        checked += r.checked;
        failures += r.failures.len();
        if witness.is_none() {
            witness = r
                .failures
                .first()
                .map(|x| format!("g={}, V={}, m={}: {} != {}", grp.name(g), name(x.v), name(x.m), x.lhs, x.rhs));
        }
    }
    out.push(IdentityCheck { name: "check_chromatic", checked, failures, witness });

    let (checked, fails) = scan_even_permutation(backend)?;
    out.push(IdentityCheck {
        name: "check_even_permutation",
        checked,
        failures: fails.len(),
        witness: fails.first().map(|x| {
            format!(
                "{} ({:?}) under {:?}: {} != {}",
                backend.labels_name(&x.label.labels),
                x.label.sign,
                x.perm,
                x.value,
                x.permuted_value
            )
        }),
    });

    let (mut checked, mut failures, mut witness) = (0, 0, None);
    for &g in &good {
        let r = check_cancellation_12(backend, g)?;
        checked += r.checked;
        failures += r.failures.len();
        if witness.is_none() {
            witness = r.failures.first().map(|x| format!("g={}, {}: {} != {}", grp.name(g), x.witness, x.lhs, x.rhs));
        }
    }
    out.push(IdentityCheck { name: "check_cancellation_12", checked, failures, witness });

    let r = check_cancellation_23(backend, &backend.admissible_triples());
    out.push(IdentityCheck {
        name: "check_cancellation_23",
        checked: r.checked,
        failures: r.failures.len(),
        witness: r.failures.first().map(|x| format!("{}: trace {} != {}", x.witness, x.lhs, x.rhs)),
    });
    Ok(out)
}
