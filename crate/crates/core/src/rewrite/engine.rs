use super::rules::Found;
use super::{RewriteError, RuleName};
use crate::ast::{Dist, Term, Type};
use crate::typing::{derivable, type_of, Context};
use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

/// A redex: the rule, where it fires and the whole reduct.
#[derive(Clone, Debug, PartialEq)]
pub struct Redex {
    pub rule: RuleName,
    pub path: Vec<usize>,
    pub result: Dist<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepResult {
    NormalForm,
    Stepped {
        dist: Dist<Term>,
        rule: RuleName,
        path: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub rule: RuleName,
    pub path: Vec<usize>,
    /// The whole distribution after the step.
    pub dist: Dist<Term>,
}

/// Picks one of the available redexes by index.
pub type Chooser<'a> = &'a mut dyn FnMut(&[Redex]) -> usize;

/// Reduction with a memo of minimal types of closed subterms.
#[derive(Default)]
pub struct Rewriter {
    types: RefCell<HashMap<Term, Option<Type>>>,
}

impl Rewriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub(super) fn type_of(&self, t: &Term) -> Result<Type, RewriteError> {
        if let Some(hit) = self.types.borrow().get(t) {
            return hit.clone().ok_or_else(|| stuck(t, "untypable"));
        }
        let ty = type_of(t).ok();
        self.types.borrow_mut().insert(t.clone(), ty.clone());
        ty.ok_or_else(|| stuck(t, "untypable"))
    }

    /// Child positions where reduction may happen.
    fn positions(&self, t: &Term) -> Vec<usize> {
        match t {
            Term::Lam(..) | Term::IfTe(..) => vec![],
            Term::App(f, a) => {
                let arg = match &**f {
                    Term::Lam(_, p, _) if p.as_bn().is_some() => true,
                    Term::IfTe(..) => true,
                    // an argument that does not fit yet must be reduced first
                    Term::Lam(_, p, _) => !derivable(&Context::new(), a, p),
                    _ => false,
                };
                if arg {
                    vec![0, 1]
                } else {
                    vec![0]
                }
            }
            _ => (0..t.children().len()).collect(),
        }
    }

    fn search(
        &self,
        whole: &Term,
        t: &Term,
        path: &mut Vec<usize>,
        first_only: bool,
        out: &mut Vec<Redex>,
    ) -> Result<(), RewriteError> {
        let children_first = matches!(t, Term::Sum(_) | Term::Scale(..) | Term::Meas(..));
        if !children_first {
            self.root(whole, t, path, first_only, out)?;
        }
        let cs = t.children();
        for i in self.positions(t) {
            if first_only && !out.is_empty() {
                return Ok(());
            }
            path.push(i);
            self.search(whole, cs[i], path, first_only, out)?;
            path.pop();
        }
        if children_first && !(first_only && !out.is_empty()) {
            self.root(whole, t, path, first_only, out)?;
        }
        Ok(())
    }

    fn root(
        &self,
        whole: &Term,
        t: &Term,
        path: &[usize],
        first_only: bool,
        out: &mut Vec<Redex>,
    ) -> Result<(), RewriteError> {
        if first_only && !out.is_empty() {
            return Ok(());
        }
        let mut found = Found {
            first_only,
            out: Vec::new(),
        };
        self.root_rules(t, &mut found)?;
        for (rule, local) in found.out {
            let raw = local
                .into_entries()
                .into_iter()
                .map(|(p, u)| (p, whole.replace_at(path, u)))
                .collect();
            out.push(Redex {
                rule,
                path: path.to_vec(),
                result: Dist::normalize(raw)?,
            });
        }
        Ok(())
    }

    /// Every redex of `t`, in strategy order.
    pub fn redexes(&self, t: &Term) -> Result<Vec<Redex>, RewriteError> {
        let mut out = Vec::new();
        self.search(t, t, &mut Vec::new(), false, &mut out)?;
        Ok(out)
    }

    /// One step of the deterministic strategy.
    pub fn step(&self, t: &Term) -> Result<StepResult, RewriteError> {
        let mut out = Vec::new();
        self.search(t, t, &mut Vec::new(), true, &mut out)?;
        Ok(match out.into_iter().next() {
            None => StepResult::NormalForm,
            Some(r) => StepResult::Stepped {
                dist: r.result,
                rule: r.rule,
                path: r.path,
            },
        })
    }

    /// Reduces every branch to normal form, choosing each step with `choose`
    /// among the redexes of the first unfinished branch (`None` means the
    /// deterministic strategy).
    pub fn run(
        &self,
        t: &Term,
        fuel: usize,
        mut choose: Option<Chooser<'_>>,
        mut record: impl FnMut(TraceStep),
    ) -> Result<(Dist<Term>, usize), RewriteError> {
        let mut cur = Dist::point(t.canonicalize());
        let mut done: HashSet<Term> = HashSet::new();
        let mut steps = 0;
        loop {
            let next = cur
                .iter()
                .position(|(_, u)| !done.contains(&u.alpha_key()));
            let Some(i) = next else {
                return Ok((cur, steps));
            };
            let (p, u) = cur.entries()[i].clone();
            let stepped = match choose.as_mut() {
                None => match self.step(&u)? {
                    StepResult::NormalForm => None,
                    StepResult::Stepped { dist, rule, path } => Some((rule, path, dist)),
                },
                Some(ch) => {
                    let rs = self.redexes(&u)?;
                    if rs.is_empty() {
                        None
                    } else {
                        let k = ch(&rs).min(rs.len() - 1);
                        let r = rs.into_iter().nth(k).expect("index in range");
                        Some((r.rule, r.path, r.result))
                    }
                }
            };
            let Some((rule, path, d)) = stepped else {
                done.insert(u.alpha_key());
                continue;
            };
            if steps >= fuel {
                return Err(RewriteError::FuelExhausted {
                    partial: cur,
                    steps,
                });
            }
            steps += 1;
            let mut raw: Vec<(f64, Term)> = Vec::new();
            for (j, (q, v)) in cur.iter().enumerate() {
                if j != i {
                    raw.push((*q, v.clone()));
                }
            }
            raw.extend(d.into_entries().into_iter().map(|(q, v)| (p * q, v)));
            cur = Dist::normalize(raw)?;
            record(TraceStep {
                rule,
                path,
                dist: cur.clone(),
            });
        }
    }

    pub fn normalize(&self, t: &Term, fuel: usize) -> Result<Dist<Term>, RewriteError> {
        self.run(t, fuel, None, |_| {}).map(|(d, _)| d)
    }

    pub fn trace(&self, t: &Term, fuel: usize) -> Result<Vec<TraceStep>, RewriteError> {
        let mut steps = Vec::new();
        self.run(t, fuel, None, |s| steps.push(s))?;
        Ok(steps)
    }
}

fn stuck(t: &Term, detail: &str) -> RewriteError {
    RewriteError::StuckIllTyped {
        term: t.to_string(),
        detail: detail.into(),
    }
}

pub fn step(t: &Term) -> Result<StepResult, RewriteError> {
    Rewriter::new().step(t)
}

pub fn normalize(t: &Term, fuel: usize) -> Result<Dist<Term>, RewriteError> {
    Rewriter::new().normalize(t, fuel)
}

pub fn trace(t: &Term, fuel: usize) -> Result<Vec<TraceStep>, RewriteError> {
    Rewriter::new().trace(t, fuel)
}
