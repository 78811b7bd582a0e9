//! Verifier for the derivation chain that takes a joint table to the CHSH
//! bound: seven labeled quantities linked by equalities and inequalities,
//! each checked as an exact sample average over the table.
//!
//! Dichotomy is not required: the chain needs only |values| <= 1, which the
//! outcome type guarantees by construction.

use crate::correlation::compensated_mean;
use crate::reorder::JointTable;
use serde::{Deserialize, Serialize};

/// Tolerance for equality links and slack for inequality links.
pub const CHAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainQuantity {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkKind {
    Equality,
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub relation: String,
    pub kind: LinkKind,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub quantities: Vec<ChainQuantity>,
    pub links: Vec<ChainLink>,
    pub pass: bool,
}

/// Compute the chain over a joint table and check every link.
///
/// L1 = |⟨AB'⟩ + ⟨B'A'⟩ + ⟨A'B⟩ − ⟨BA⟩|            (the CHSH statistic)
/// L2 = |⟨AB' + B'A' + A'B − BA⟩|
/// L3 = ⟨|AB' + B'A' + A'B − BA|⟩
/// L4 = ⟨|A(B'−B) + A'(B'+B)|⟩
/// L5 = ⟨|A||B'−B| + |A'||B'+B|⟩
/// L6 = ⟨max(|A|,|A'|)(|B'−B| + |B'+B|)⟩
/// L7 = 2⟨max(|A|,|A'|)·max(|B|,|B'|)⟩
///
/// Links: L1 = L2, L2 ≤ L3, L3 = L4, L4 ≤ L5, L5 ≤ L6, L6 = L7, L7 ≤ 2.
/// The sixth relation is an inequality in the derivation, but for real
/// values |B'−B| + |B'+B| = 2·max(|B|,|B'|) pointwise, so it is checked as
/// the stronger equality. An empty table verifies trivially (all averages
/// zero).
pub fn verify_chain(joint: &JointTable) -> ChainReport {
    let mean = |f: &dyn Fn(f64, f64, f64, f64) -> f64| {
        compensated_mean(
            joint
                .rows()
                .iter()
                .map(|r| f(r.a.get(), r.ap.get(), r.b.get(), r.bp.get())),
        )
        .unwrap_or(0.0)
    };

    let c = joint.correlations();
    let l1 = (c.c_abp + c.c_apbp + c.c_apb - c.c_ab).abs();
    let l2 = mean(&|a, ap, b, bp| a * bp + bp * ap + ap * b - b * a).abs();
    let l3 = mean(&|a, ap, b, bp| (a * bp + bp * ap + ap * b - b * a).abs());
    let l4 = mean(&|a, ap, b, bp| (a * (bp - b) + ap * (bp + b)).abs());
    let l5 = mean(&|a, ap, b, bp| a.abs() * (bp - b).abs() + ap.abs() * (bp + b).abs());
    let l6 = mean(&|a, ap, b, bp| a.abs().max(ap.abs()) * ((bp - b).abs() + (bp + b).abs()));
    let l7 = 2.0 * mean(&|a, ap, b, bp| a.abs().max(ap.abs()) * b.abs().max(bp.abs()));

    let quantities = vec![
        ChainQuantity { label: "L1 = |<AB'> + <B'A'> + <A'B> - <BA>|".into(), value: l1 },
        ChainQuantity { label: "L2 = |<AB' + B'A' + A'B - BA>|".into(), value: l2 },
        ChainQuantity { label: "L3 = <|AB' + B'A' + A'B - BA|>".into(), value: l3 },
        ChainQuantity { label: "L4 = <|A(B'-B) + A'(B'+B)|>".into(), value: l4 },
        ChainQuantity { label: "L5 = <|A||B'-B| + |A'||B'+B|>".into(), value: l5 },
        ChainQuantity { label: "L6 = <max(|A|,|A'|)(|B'-B| + |B'+B|)>".into(), value: l6 },
        ChainQuantity { label: "L7 = 2<max(|A|,|A'|)max(|B|,|B'|)>".into(), value: l7 },
        ChainQuantity { label: "bound".into(), value: 2.0 },
    ];

    let equality = |relation: &str, lhs: f64, rhs: f64| ChainLink {
        relation: relation.into(),
        kind: LinkKind::Equality,
        lhs,
        rhs,
        pass: (lhs - rhs).abs() <= CHAIN_TOLERANCE,
    };
    let inequality = |relation: &str, lhs: f64, rhs: f64| ChainLink {
        relation: relation.into(),
        kind: LinkKind::Inequality,
        lhs,
        rhs,
        pass: lhs <= rhs + CHAIN_TOLERANCE,
    };

    let links = vec![
        equality("L1 = L2", l1, l2),
        inequality("L2 <= L3", l2, l3),
        equality("L3 = L4", l3, l4),
        inequality("L4 <= L5", l4, l5),
        inequality("L5 <= L6", l5, l6),
        equality("L6 = L7", l6, l7),
        inequality("L7 <= 2", l7, 2.0),
    ];

    let pass = links.iter().all(|l| l.pass);
    ChainReport {
        quantities,
        links,
        pass,
    }
}
