use std::collections::BTreeSet;

use structures::search::{embeddings, isomorphism, Constraints, MapSearch, SearchKind};
use structures::Structure;

use crate::{free_amalgam, is_amalgam, AmalgamationProblem, Grade};

/// Outcome for one class property over a finite catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyStatus {
    /// Every instance within the bound passed; larger instances were skipped.
    Verified { checked: usize, skipped: usize },
    Violated(Counterexample),
}

impl PropertyStatus {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyStatus::Verified { .. })
    }
}

/// Indices refer to `ClassReport::members`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    NotHereditary { member: usize, subset: Vec<usize> },
    NoJointEmbedding { left: usize, right: usize },
    NoAmalgam { base: usize, left: usize, right: usize, alpha1: Vec<usize>, alpha2: Vec<usize>, best: Grade },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    /// The catalog with isomorphic duplicates removed, in input order.
    pub members: Vec<Structure>,
    pub hereditary: PropertyStatus,
    pub jep: PropertyStatus,
    pub ap: PropertyStatus,
    pub strong_ap: PropertyStatus,
    pub free_ap: PropertyStatus,
}

struct Catalog {
    members: Vec<Structure>,
    bound: usize,
}

impl Catalog {
    fn find(&self, s: &Structure) -> Option<usize> {
        self.members.iter().position(|m| isomorphism(s, m).is_some())
    }

    /// Best grade over all amalgams inside catalog members of size at most the bound.
    fn best_amalgam(&self, p: &AmalgamationProblem) -> Grade {
        let mut best = Grade::None;
        for c in &self.members {
            if c.size() > self.bound || c.size() < p.left.size().max(p.right.size()) {
                continue;
            }
            for beta1 in embeddings(&p.left, c) {
                let mut domain: Vec<Vec<usize>> = vec![(0..c.size()).collect(); p.right.size()];
                for (a, &y) in p.alpha2.iter().enumerate() {
                    domain[y] = vec![beta1[p.alpha1[a]]];
                }
                let cons = Constraints { domain: Some(domain), u_closed: None };
                let search = MapSearch::new(&p.right, c, SearchKind::Embedding).constraints(cons);
                let _ = search.for_each(|beta2| {
                    best = best.max(is_amalgam(c, p, &beta1, beta2));
                    best < Grade::Strong
                });
                if best >= Grade::Strong {
                    return best;
                }
            }
        }
        best
    }
}

fn closed_subsets(s: &Structure) -> Vec<Vec<usize>> {
    let n = s.size();
    assert!(n <= 20, "catalog members are desk-scale");
    (1u32..(1 << n))
        .filter(|&m| m.count_ones() < n as u32)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<usize>>())
        .filter(|v| s.is_closed(&v.iter().copied().collect()))
        .collect()
}

/// Checks hereditary, joint embedding, amalgamation, strong and free
/// amalgamation on a finite catalog, taken up to isomorphism.
///
/// Instances whose free amalgam would exceed `min(bound, largest member)`
/// vertices are skipped, since the catalog cannot certify them either way.
pub fn check_class_properties(catalog: &[Structure], bound: usize) -> ClassReport {
    let mut members: Vec<Structure> = Vec::new();
    for s in catalog {
        if !members.iter().any(|m| isomorphism(s, m).is_some()) {
            members.push(s.clone());
        }
    }
    let largest = members.iter().map(|m| m.size()).max().unwrap_or(0);
    let cat = Catalog { members, bound: bound.min(largest) };
    let limit = cat.bound;

    let hereditary = {
        let mut checked = 0;
        let mut bad = None;
        'outer: for (i, m) in cat.members.iter().enumerate() {
            for sub in closed_subsets(m) {
                let set: BTreeSet<usize> = sub.iter().copied().collect();
                let (s, _) = m.induced(&set).expect("closed");
                checked += 1;
                if cat.find(&s).is_none() {
                    bad = Some(Counterexample::NotHereditary { member: i, subset: sub });
                    break 'outer;
                }
            }
        }
        bad.map_or(PropertyStatus::Verified { checked, skipped: 0 }, PropertyStatus::Violated)
    };

    let jep = {
        let (mut checked, mut skipped, mut bad) = (0, 0, None);
        'outer: for i in 0..cat.members.len() {
            for j in i..cat.members.len() {
                let (l, r) = (&cat.members[i], &cat.members[j]);
                if l.size() + r.size() > limit {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let joint = cat.members.iter().any(|c| {
                    c.size() <= limit && !embeddings(l, c).is_empty() && !embeddings(r, c).is_empty()
                });
                if !joint {
                    bad = Some(Counterexample::NoJointEmbedding { left: i, right: j });
                    break 'outer;
                }
            }
        }
        bad.map_or(PropertyStatus::Verified { checked, skipped }, PropertyStatus::Violated)
    };

    let (mut checked, mut skipped) = (0, 0);
    let (mut ap, mut strong, mut free) = (None, None, None);
    let n = cat.members.len();
    for a in 0..n {
        for l in 0..n {
            for r in 0..n {
                let (sa, sl, sr) = (&cat.members[a], &cat.members[l], &cat.members[r]);
                if sl.size() < sa.size() || sr.size() < sa.size() {
                    continue;
                }
                let e1 = embeddings(sa, sl);
                let e2 = embeddings(sa, sr);
                if e1.is_empty() || e2.is_empty() {
                    continue;
                }
                if sl.size() + sr.size() - sa.size() > limit {
                    skipped += e1.len() * e2.len();
                    continue;
                }
                for alpha1 in &e1 {
                    for alpha2 in &e2 {
                        checked += 1;
                        let p = AmalgamationProblem {
                            base: sa.clone(),
                            left: sl.clone(),
                            right: sr.clone(),
                            alpha1: alpha1.clone(),
                            alpha2: alpha2.clone(),
                        };
                        let witness = |best| Counterexample::NoAmalgam {
                            base: a,
                            left: l,
                            right: r,
                            alpha1: alpha1.clone(),
                            alpha2: alpha2.clone(),
                            best,
                        };
                        if cat.find(&free_amalgam(&p).structure).is_some() {
                            continue;
                        }
                        let best = cat.best_amalgam(&p);
                        if free.is_none() {
                            free = Some(witness(best));
                        }
                        if best < Grade::Strong && strong.is_none() {
                            strong = Some(witness(best));
                        }
                        if best < Grade::Amalgam && ap.is_none() {
                            ap = Some(witness(best));
                        }
                    }
                }
            }
        }
    }
    let status = |c: Option<Counterexample>| c.map_or(PropertyStatus::Verified { checked, skipped }, PropertyStatus::Violated);
    ClassReport {
        hereditary,
        jep,
        ap: status(ap),
        strong_ap: status(strong),
        free_ap: status(free),
        members: cat.members,
    }
}
