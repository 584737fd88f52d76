use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(f64),
    /// Contents between `|` and `>`: bits, `+` or `-`.
    Ket(String),
    IfQ,
    Backslash,
    Colon,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    FatArrow,
    Eq,
    Semi,
    Par,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut adv = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, col: c0 });
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let v = text
                .parse::<f64>()
                .map_err(|_| err(l0, c0, format!("bad number `{text}`")))?;
            push(&mut out, Tok::Num(v));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            if text == "if" && i < chars.len() && chars[i] == '?' {
                i += 1;
                col += 1;
                push(&mut out, Tok::IfQ);
            } else {
                push(&mut out, Tok::Ident(text));
            }
            continue;
        }
        if c == '|' {
            if i + 1 < chars.len() && chars[i + 1] == '|' {
                adv(2, &mut i);
                push(&mut out, Tok::Par);
                continue;
            }
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '>' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '>' {
                return Err(err(l0, c0, "unterminated ket".into()));
            }
            let body: String = chars[start..j].iter().collect();
            let ok = body == "+"
                || body == "-"
                || (!body.is_empty() && body.chars().all(|b| b == '0' || b == '1'));
            if !ok {
                return Err(err(l0, c0, format!("bad ket `|{body}>`")));
            }
            col += j + 1 - i;
            i = j + 1;
            push(&mut out, Tok::Ket(body));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        if two == "=>" {
            adv(2, &mut i);
            push(&mut out, Tok::FatArrow);
            continue;
        }
        let tok = match c {
            '\\' | 'λ' => Tok::Backslash,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' | '×' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            _ => return Err(err(l0, c0, format!("unexpected character `{c}`"))),
        };
        adv(1, &mut i);
        push(&mut out, tok);
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn number_before_dot_ket() {
        assert_eq!(
            toks("2.|1>"),
            vec![Tok::Num(2.0), Tok::Dot, Tok::Ket("1".into()), Tok::Eof]
        );
        assert_eq!(toks("0.5.|0>")[0], Tok::Num(0.5));
    }

    #[test]
    fn kets_and_par() {
        assert_eq!(
            toks("|010> || |+>"),
            vec![
                Tok::Ket("010".into()),
                Tok::Par,
                Tok::Ket("+".into()),
                Tok::Eof
            ]
        );
        assert!(lex("|2>").is_err());
    }

    #[test]
    fn if_question() {
        assert_eq!(toks("if? x"), vec![Tok::IfQ, Tok::Ident("x".into()), Tok::Eof]);
    }
}
