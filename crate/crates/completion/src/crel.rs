use structures::Structure;

use crate::CompletionError;

/// The five C-relation axioms and the convex-ordering clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CAxiom {
    /// `C(a,b,c) = C(a,c,b)`.
    Symmetry,
    /// `C(a,b,c) ⇒ ¬C(b,a,c)`.
    Asymmetry,
    /// `C(a,b,c) ⇒ C(a,d,c) ∨ C(d,b,c)`.
    Split,
    /// `a ≠ b ⇒ C(a,b,b)`.
    Degenerate,
    /// Pairwise distinct `a,b,c` ⇒ `C(a,b,c) ∨ C(b,a,c) ∨ C(c,a,b)`.
    Totality,
    /// `C(a,b,c) ∧ b < c ⇒ a < b < c ∨ b < c < a`.
    Convexity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRelationReport {
    /// First violated axiom, in the order above, with its witness tuple.
    pub violation: Option<(CAxiom, Vec<usize>)>,
    pub checked_convexity: bool,
}

impl CRelationReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn check_c_relation(s: &Structure) -> Result<CRelationReport, CompletionError> {
    let lang = s.language();
    let c = lang.rel_index("C").ok_or_else(|| CompletionError::MissingSymbol("C".into()))?;
    if lang.rel(c).arity != 3 {
        return Err(CompletionError::WrongArity("C".into()));
    }
    let lt = lang.order_index();
    let n = s.size();
    let cc = |a: usize, b: usize, x: usize| s.has_tuple(c, &[a, b, x]);
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |x| (a, b, x))));
    let report = |ax, w: Vec<usize>| Ok(CRelationReport { violation: Some((ax, w)), checked_convexity: lt.is_some() });

    if let Some((a, b, x)) = triples().find(|&(a, b, x)| cc(a, b, x) != cc(a, x, b)) {
        return report(CAxiom::Symmetry, vec![a, b, x]);
    }
    if let Some((a, b, x)) = triples().find(|&(a, b, x)| cc(a, b, x) && cc(b, a, x)) {
        return report(CAxiom::Asymmetry, vec![a, b, x]);
    }
    for (a, b, x) in triples().filter(|&(a, b, x)| cc(a, b, x)) {
        if let Some(d) = (0..n).find(|&d| !cc(a, d, x) && !cc(d, b, x)) {
            return report(CAxiom::Split, vec![a, b, x, d]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && !cc(a, b, b) {
                return report(CAxiom::Degenerate, vec![a, b]);
            }
        }
    }
    let distinct = |a: usize, b: usize, x: usize| a != b && b != x && a != x;
    if let Some((a, b, x)) = triples().find(|&(a, b, x)| distinct(a, b, x) && !cc(a, b, x) && !cc(b, a, x) && !cc(x, a, b)) {
        return report(CAxiom::Totality, vec![a, b, x]);
    }
    if let Some(lt) = lt {
        let l = |u: usize, v: usize| s.has_tuple(lt, &[u, v]);
        if let Some((a, b, x)) =
            triples().find(|&(a, b, x)| cc(a, b, x) && l(b, x) && !(l(a, b) && l(b, x)) && !(l(b, x) && l(x, a)))
        {
            return report(CAxiom::Convexity, vec![a, b, x]);
        }
    }
    Ok(CRelationReport { violation: None, checked_convexity: lt.is_some() })
}
