//! Finite probability distributions with the identification laws built in.

use super::term::Term;
use thiserror::Error;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOL: f64 = 1e-9;
/// Entries at or below this probability are dropped.
pub const DROP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("probabilities sum to {0}, not 1")]
    SumNotOne(f64),
    #[error("negative or non-finite probability {0}")]
    BadProbability(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dist<T> {
    entries: Vec<(f64, T)>,
}

impl<T: Clone> Dist<T> {
    pub fn point(t: T) -> Self {
        Dist {
            entries: vec![(1.0, t)],
        }
    }

    /// Merges entries with `same`, drops near-zero ones and checks the mass.
    pub fn normalize_by(
        raw: Vec<(f64, T)>,
        same: impl Fn(&T, &T) -> bool,
    ) -> Result<Self, DistError> {
        let mut total = 0.0;
        let mut entries: Vec<(f64, T)> = Vec::new();
        for (p, t) in raw {
            if !p.is_finite() || p < 0.0 {
                return Err(DistError::BadProbability(p));
            }
            total += p;
            match entries.iter_mut().find(|(_, u)| same(u, &t)) {
                Some(e) => e.0 += p,
                None => entries.push((p, t)),
            }
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(DistError::SumNotOne(total));
        }
        entries.retain(|(p, _)| *p > DROP_TOL);
        Ok(Dist { entries })
    }

    pub fn entries(&self) -> &[(f64, T)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(f64, T)> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(f64, T)> {
        self.entries.iter()
    }

    /// The payload of a singleton distribution.
    pub fn as_single(&self) -> Option<&T> {
        match self.entries.as_slice() {
            [(_, t)] => Some(t),
            _ => None,
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(p, _)| p).sum()
    }
}

impl Dist<Term> {
    /// Merged by `term_eq`, zero-dropped, keyed by canonical terms in
    /// canonical order.
    pub fn normalize(raw: Vec<(f64, Term)>) -> Result<Self, DistError> {
        let raw = raw.into_iter().map(|(p, t)| (p, t.canonicalize())).collect();
        let mut d = Dist::normalize_by(raw, |a, b| a.term_eq(b))?;
        d.entries.sort_by_cached_key(|(_, t)| t.alpha_key());
        Ok(d)
    }

    /// Replaces each payload by a distribution and flattens.
    pub fn bind(
        &self,
        mut f: impl FnMut(&Term) -> Result<Dist<Term>, DistError>,
    ) -> Result<Dist<Term>, DistError> {
        let mut raw = Vec::new();
        for (p, t) in &self.entries {
            for (q, u) in f(t)?.entries {
                raw.push((p * q, u));
            }
        }
        Dist::normalize(raw)
    }

    pub fn term_eq(&self, other: &Dist<Term>, tol: f64) -> bool {
        self.len() == other.len()
            && self.entries.iter().all(|(p, t)| {
                other
                    .entries
                    .iter()
                    .any(|(q, u)| (p - q).abs() <= tol && t.term_eq(u))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_law() {
        let d = Dist::normalize(vec![(0.5, Term::Ket0), (0.5, Term::Ket0)]).unwrap();
        assert_eq!(d.entries(), &[(1.0, Term::Ket0)]);
    }

    #[test]
    fn zero_entries_dropped() {
        let d = Dist::normalize(vec![(1.0, Term::Ket1), (0.0, Term::Ket0)]).unwrap();
        assert_eq!(d.as_single(), Some(&Term::Ket1));
    }

    #[test]
    fn already_normal() {
        let d = Dist::normalize(vec![(2.0 / 3.0, Term::Ket0), (1.0 / 3.0, Term::Ket1)]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.entries()[0], (2.0 / 3.0, Term::Ket0));
    }

    #[test]
    fn mass_checked() {
        assert_eq!(
            Dist::normalize(vec![(0.5, Term::Ket0)]),
            Err(DistError::SumNotOne(0.5))
        );
    }

    #[test]
    fn alpha_equal_payloads_merge() {
        use crate::ast::Type;
        let a = Term::lam("x", Type::B, Term::var("x"));
        let b = Term::lam("y", Type::B, Term::var("y"));
        let d = Dist::normalize(vec![(0.25, a), (0.75, b)]).unwrap();
        assert_eq!(d.len(), 1);
    }
}
