use super::lexer::Tok;
use super::parser::Parser;
use super::ParseError;
use crate::ast::Term;

/// A source file: named definitions and an optional main term. Definitions
/// are macros, expanded into everything that follows them.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceProgram {
    pub defs: Vec<(String, Term)>,
    pub main: Option<Term>,
}

fn expand(t: &Term, defs: &[(String, Term)]) -> Term {
    defs.iter()
        .rev()
        .fold(t.clone(), |acc, (name, body)| acc.substitute(name, body))
}

fn check_closed(t: &Term, p: &Parser) -> Result<(), ParseError> {
    if let Some(name) = t.free_vars().into_iter().next() {
        let (line, col) = p.var_pos.get(&name).copied().unwrap_or((1, 1));
        return Err(ParseError::UnknownIdentifier { name, line, col });
    }
    Ok(())
}

/// Parses `def name = term;` items and an optional `main = term;`. A file
/// holding a single bare term is accepted as its main.
pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    let mut p = Parser::new(src)?;
    let mut defs: Vec<(String, Term)> = Vec::new();
    let mut main = None;
    let is_item = p.is_def_start() || p.is_main_start();
    if !is_item {
        let t = p.term()?;
        p.eat(Tok::Semi);
        p.expect_eof()?;
        let t = expand(&t, &defs);
        check_closed(&t, &p)?;
        return Ok(SourceProgram {
            defs,
            main: Some(t),
        });
    }
    while !p.at_eof() {
        if p.eat_kw("def") {
            let name = p.ident()?;
            if defs.iter().any(|(n, _)| *n == name) {
                return p.error(format!("`{name}` is defined twice"));
            }
            p.expect_tok(Tok::Eq)?;
            let body = expand(&p.term()?, &defs);
            p.expect_tok(Tok::Semi)?;
            check_closed(&body, &p)?;
            defs.push((name, body));
        } else if p.eat_kw("main") {
            if main.is_some() {
                return p.error("`main` is defined twice");
            }
            p.expect_tok(Tok::Eq)?;
            let body = expand(&p.term()?, &defs);
            p.expect_tok(Tok::Semi)?;
            check_closed(&body, &p)?;
            main = Some(body);
        } else {
            return p.error("expected `def` or `main`");
        }
    }
    Ok(SourceProgram { defs, main })
}

/// Parses a term that must be closed.
pub fn parse_closed_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    check_closed(&t, &p)?;
    Ok(t)
}

impl Parser {
    fn is_def_start(&self) -> bool {
        self.peek_is(&Tok::Ident("def".into()))
    }

    fn is_main_start(&self) -> bool {
        self.peek_is(&Tok::Ident("main".into())) && self.peek2_is(&Tok::Eq)
    }

    fn expect_tok(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(t.clone()) {
            Ok(())
        } else {
            self.error(format!("expected {t:?}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defs_expand_in_order() {
        let src = r"
            # hadamard
            def H = \x:B. if x then |-> else |+>;
            def HH = \x:B. H (H x);
            main = HH |0>;
        ";
        let p = parse_program(src).unwrap();
        assert_eq!(p.defs.len(), 2);
        let main = p.main.unwrap();
        assert!(main.is_closed());
        assert!(matches!(main, Term::App(..)));
    }

    #[test]
    fn unknown_identifier() {
        match parse_program("main = f |0>;") {
            Err(ParseError::UnknownIdentifier { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("f", 1, 8))
            }
            r => panic!("{r:?}"),
        }
        assert!(matches!(
            parse_closed_term("x"),
            Err(ParseError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn bare_term_is_main() {
        let p = parse_program("|0> + |1>").unwrap();
        assert!(p.defs.is_empty());
        assert!(p.main.is_some());
    }
}
