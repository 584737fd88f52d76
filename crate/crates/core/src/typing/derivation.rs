use crate::ast::{Dist, Term, Type};
use std::collections::BTreeMap;
use std::fmt;

pub type Context = BTreeMap<String, Type>;

/// Rule tags of the typing relation.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    Ax,
    AxZero,
    AxKet0,
    AxKet1,
    ScaleI,
    SumI,
    SI,
    SE,
    If,
    ArrowI,
    ArrowE,
    ArrowES,
    ProdI,
    ProdEr,
    ProdEl,
    CastR,
    CastL,
    Par,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::Ax,
        Rule::AxZero,
        Rule::AxKet0,
        Rule::AxKet1,
        Rule::ScaleI,
        Rule::SumI,
        Rule::SI,
        Rule::SE,
        Rule::If,
        Rule::ArrowI,
        Rule::ArrowE,
        Rule::ArrowES,
        Rule::ProdI,
        Rule::ProdEr,
        Rule::ProdEl,
        Rule::CastR,
        Rule::CastL,
        Rule::Par,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax => "Ax",
            Rule::AxZero => "Ax0",
            Rule::AxKet0 => "Ax|0>",
            Rule::AxKet1 => "Ax|1>",
            Rule::ScaleI => "αI",
            Rule::SumI => "+I",
            Rule::SI => "SI",
            Rule::SE => "SE",
            Rule::If => "If",
            Rule::ArrowI => "⇒I",
            Rule::ArrowE => "⇒E",
            Rule::ArrowES => "⇒ES",
            Rule::ProdI => "×I",
            Rule::ProdEr => "×Er",
            Rule::ProdEl => "×El",
            Rule::CastR => "⇑r",
            Rule::CastL => "⇑l",
            Rule::Par => "∥",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a judgement is about: a term, or a distribution of terms.
#[derive(Clone, Debug, PartialEq)]
pub enum Subject {
    Term(Term),
    Dist(Dist<Term>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub rule: Rule,
    pub ctx: Context,
    pub subject: Subject,
    pub ty: Type,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: Rule, ctx: &Context, t: &Term, ty: Type, premises: Vec<Derivation>) -> Self {
        Derivation {
            rule,
            ctx: ctx.clone(),
            subject: Subject::Term(t.clone()),
            ty,
            premises,
        }
    }

    /// The term of the conclusion; panics on a distribution judgement.
    pub fn term(&self) -> &Term {
        match &self.subject {
            Subject::Term(t) => t,
            Subject::Dist(_) => panic!("distribution judgement has no single term"),
        }
    }

    /// Wraps in one `S_I` step.
    pub fn lift(self) -> Derivation {
        Derivation {
            rule: Rule::SI,
            ctx: self.ctx.clone(),
            subject: self.subject.clone(),
            ty: Type::s(self.ty.clone()),
            premises: vec![self],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Every rule tag used, in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule.clone()];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    fn render(&self, depth: usize, out: &mut String) {
        let subject = match &self.subject {
            Subject::Term(t) => t.to_string(),
            Subject::Dist(d) => crate::syntax::print_dist(d),
        };
        out.push_str(&format!(
            "{}{}  ⊢ {} : {}\n",
            "  ".repeat(depth),
            self.rule,
            subject,
            self.ty
        ));
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(&s)
    }
}
