use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::ast::{Dist, Scalar, Term, Type};
use std::collections::BTreeMap;

const KEYWORDS: &[&str] = &[
    "if", "then", "else", "zero", "meas", "head", "tail", "castR", "castL", "sqrt", "def",
    "main",
];

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// First position at which each variable name occurs.
    pub(crate) var_pos: BTreeMap<String, (usize, usize)>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            var_pos: BTreeMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub(crate) fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`"))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub(crate) fn expect_eof(&self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            self.error(format!("unexpected {:?}", self.peek()))
        }
    }

    pub(crate) fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {t:?}")),
        }
    }

    pub(crate) fn eat(&mut self, t: Tok) -> bool {
        if *self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    // ---- types ----

    pub(crate) fn ty(&mut self) -> PResult<Type> {
        let (line, col) = self.here();
        let left = self.prod_ty()?;
        if self.eat(Tok::FatArrow) {
            if !left.is_qubit() {
                return Err(ParseError::NonQubitParam {
                    ty: left.to_string(),
                    line,
                    col,
                });
            }
            let right = self.ty()?;
            Ok(Type::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn prod_ty(&mut self) -> PResult<Type> {
        let mut elems = vec![self.atom_ty()?];
        while self.eat(Tok::Star) {
            elems.push(self.atom_ty()?);
        }
        if elems.len() > 1 && elems.iter().any(|e| !e.is_qubit()) {
            return self.error("product of a non-qubit type");
        }
        Ok(Type::from_list(elems))
    }

    fn atom_ty(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "B" => {
                self.bump();
                if self.eat(Tok::Caret) {
                    match self.bump() {
                        Tok::Num(n) if n >= 1.0 && n.fract() == 0.0 => Ok(Type::bn(n as usize)),
                        _ => self.error("expected a positive exponent"),
                    }
                } else {
                    Ok(Type::B)
                }
            }
            Tok::Ident(s) if s == "S" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Type::s(t))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            t => self.error(format!("expected a type, found {t:?}")),
        }
    }

    // ---- scalars ----

    pub(crate) fn scalar(&mut self) -> PResult<Scalar> {
        let mut acc = self.scalar_term()?;
        loop {
            if self.eat(Tok::Plus) {
                acc = acc + self.scalar_term()?;
            } else if *self.peek() == Tok::Minus {
                self.bump();
                acc = acc - self.scalar_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_term(&mut self) -> PResult<Scalar> {
        let mut acc = self.scalar_factor()?;
        loop {
            if self.eat(Tok::Star) {
                acc = acc * self.scalar_factor()?;
            } else if self.eat(Tok::Slash) {
                let d = self.scalar_factor()?;
                if d.abs() == 0.0 {
                    return self.error("division by zero");
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_factor(&mut self) -> PResult<Scalar> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(-self.scalar_factor()?)
            }
            Tok::Num(v) => {
                self.bump();
                Ok(Scalar::real(v))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(Scalar::new(0.0, 1.0))
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let v = self.scalar()?;
                self.expect(Tok::RParen, "`)`")?;
                if v.im() != 0.0 || v.re() < 0.0 {
                    return self.error("sqrt of a non-negative real expected");
                }
                Ok(Scalar::real(v.re().sqrt()))
            }
            Tok::LParen => {
                self.bump();
                let v = self.scalar()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            t => self.error(format!("expected a scalar, found {t:?}")),
        }
    }

    /// Tries `scalar '.'`; restores the position on failure.
    fn try_scalar_dot(&mut self) -> Option<Scalar> {
        let save = self.pos;
        match self.scalar() {
            Ok(s) if *self.peek() == Tok::Dot => {
                self.bump();
                Some(s)
            }
            _ => {
                self.pos = save;
                None
            }
        }
    }

    // ---- terms ----

    pub(crate) fn term(&mut self) -> PResult<Term> {
        if self.eat(Tok::Backslash) {
            let x = self.ident()?;
            self.expect(Tok::Colon, "`:`")?;
            let (line, col) = self.here();
            let ty = self.ty()?;
            if !ty.is_qubit() {
                return Err(ParseError::NonQubitParam {
                    ty: ty.to_string(),
                    line,
                    col,
                });
            }
            self.expect(Tok::Dot, "`.`")?;
            let body = self.term()?;
            return Ok(Term::lam(&x, ty, body));
        }
        if self.eat_kw("if") {
            let c = self.term()?;
            self.expect_kw("then")?;
            let t = self.term()?;
            self.expect_kw("else")?;
            let r = self.term()?;
            return Ok(Term::app(Term::if_te(t, r), c));
        }
        self.sum()
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut terms = vec![self.prod()?];
        loop {
            if self.eat(Tok::Plus) {
                terms.push(self.prod()?);
            } else if self.eat(Tok::Minus) {
                let t = self.prod()?;
                terms.push(match t {
                    Term::Scale(s, u) => Term::Scale(-s, u),
                    t => Term::scale(Scalar::real(-1.0), t),
                });
            } else {
                break;
            }
        }
        Ok(Term::sum(terms))
    }

    fn prod(&mut self) -> PResult<Term> {
        let mut elems = vec![self.unary()?];
        while self.eat(Tok::Star) {
            elems.push(self.unary()?);
        }
        Ok(Term::from_list(elems))
    }

    fn unary(&mut self) -> PResult<Term> {
        if self.eat_kw("castR") {
            return Ok(Term::cast_r(self.prod()?));
        }
        if self.eat_kw("castL") {
            return Ok(Term::cast_l(self.prod()?));
        }
        if self.eat_kw("head") {
            return Ok(Term::head(self.prod()?));
        }
        if self.eat_kw("tail") {
            return Ok(Term::tail(self.prod()?));
        }
        if self.eat_kw("meas") {
            let j = match self.bump() {
                Tok::Num(n) if n >= 1.0 && n.fract() == 0.0 => n as usize,
                _ => return self.error("expected a positive measurement index"),
            };
            return Ok(Term::meas(j, self.prod()?));
        }
        if let Some(s) = self.try_scalar_dot() {
            return Ok(Term::scale(s, self.unary()?));
        }
        if self.eat(Tok::Minus) {
            let t = self.unary()?;
            return Ok(match t {
                Term::Scale(s, u) => Term::Scale(-s, u),
                t => Term::scale(Scalar::real(-1.0), t),
            });
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || s == "zero",
            Tok::Ket(_) | Tok::LParen | Tok::IfQ => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            f = Term::app(f, a);
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Term> {
        let here = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if s == "zero" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let ty = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Term::Zero(ty))
            }
            Tok::Ident(_) => {
                let x = self.ident()?;
                self.var_pos.entry(x.clone()).or_insert(here);
                Ok(Term::Var(x))
            }
            Tok::Ket(body) => {
                self.bump();
                Ok(match body.as_str() {
                    "+" => Term::ket_plus(),
                    "-" => Term::ket_minus(),
                    bits => Term::ket(&bits.chars().map(|b| b == '1').collect::<Vec<_>>()),
                })
            }
            Tok::IfQ => {
                self.bump();
                let t = self.atom()?;
                let r = self.atom()?;
                Ok(Term::if_te(t, r))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            t => self.error(format!("expected a term, found {t:?}")),
        }
    }

    // ---- distributions ----

    /// A bracketed distribution, or a bare term standing for a point mass.
    pub(crate) fn dist(&mut self) -> PResult<Dist<Term>> {
        if !self.peek_is(&Tok::LBracket) {
            return Ok(Dist::point(self.term()?.canonicalize()));
        }
        self.expect(Tok::LBracket, "`[`")?;
        let mut raw = Vec::new();
        loop {
            let p = self.scalar()?;
            if p.im() != 0.0 {
                return self.error("probabilities must be real");
            }
            self.expect(Tok::Colon, "`:`")?;
            let t = self.term()?;
            raw.push((p.re(), t));
            if !self.eat(Tok::Par) {
                break;
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        let (line, col) = self.here();
        Dist::normalize(raw).map_err(|e| ParseError::Syntax {
            line,
            col,
            msg: e.to_string(),
        })
    }

    pub(crate) fn peek_is(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub(crate) fn peek2_is(&self, t: &Tok) -> bool {
        self.peek_at(1) == t
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_dist(src: &str) -> Result<Dist<Term>, ParseError> {
    let mut p = Parser::new(src)?;
    let d = p.dist()?;
    p.expect_eof()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Scalar {
        Scalar::real(std::f64::consts::FRAC_1_SQRT_2)
    }

    #[test]
    fn cloning_example() {
        let t = parse_term(r"(\x:B. x * x) ((1/sqrt(2)) . (|0> + |1>))").unwrap();
        let expected = Term::app(
            Term::lam("x", Type::B, Term::prod(Term::var("x"), Term::var("x"))),
            Term::scale(h(), Term::plus(Term::Ket0, Term::Ket1)),
        );
        assert!(t.term_eq(&expected));
    }

    #[test]
    fn conditional_forms() {
        let t = parse_term("if? |-> |+>").unwrap();
        assert_eq!(t, Term::if_te(Term::ket_minus(), Term::ket_plus()));
        let u = parse_term("if x then |0> else |1>").unwrap();
        assert_eq!(
            u,
            Term::app(Term::if_te(Term::Ket0, Term::Ket1), Term::var("x"))
        );
    }

    #[test]
    fn measurement_example() {
        let t = parse_term("meas 2 (|000> + 2.|110> + 3.|001> + |111>)").unwrap();
        match t {
            Term::Meas(2, body) => match *body {
                Term::Sum(ts) => assert_eq!(ts.len(), 4),
                b => panic!("{b:?}"),
            },
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn types() {
        assert_eq!(
            parse_type("B => S(B)").unwrap(),
            Type::arrow(Type::B, Type::s(Type::B))
        );
        assert_eq!(
            parse_type("S(B) * B").unwrap(),
            Type::prod(Type::s(Type::B), Type::B)
        );
        assert_eq!(parse_type("S(S(B))").unwrap(), Type::s(Type::s(Type::B)));
        assert_eq!(parse_type("B^3").unwrap(), Type::bn(3));
        assert!(matches!(
            parse_type("(B => B) => B"),
            Err(ParseError::NonQubitParam { .. })
        ));
    }

    #[test]
    fn subtraction_folds_scalars() {
        let t = parse_term("2.((1/2).|0> + |1>) - 2.|1>").unwrap();
        let expected = Term::plus(
            Term::scale(
                Scalar::real(2.0),
                Term::plus(Term::scale(Scalar::real(0.5), Term::Ket0), Term::Ket1),
            ),
            Term::scale(Scalar::real(-2.0), Term::Ket1),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn casts_take_products() {
        let t = parse_term("castR ((1/sqrt(2)).(|0>+|1>)) * |0>").unwrap();
        match t {
            Term::CastR(b) => assert!(matches!(*b, Term::Prod(..))),
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn complex_scalars() {
        let t = parse_term("(1 + 2*i).|0>").unwrap();
        assert_eq!(t, Term::scale(Scalar::new(1.0, 2.0), Term::Ket0));
        assert_eq!(parse_term("i").unwrap(), Term::var("i"));
    }

    #[test]
    fn errors_have_positions() {
        match parse_term("|0> +\n  )") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn distributions() {
        let d = parse_dist("[ 2/3: |0> || 1/3: |1> ]").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(parse_dist("|0>").unwrap().as_single(), Some(&Term::Ket0));
    }
}
