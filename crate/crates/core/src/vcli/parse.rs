//! Line lexer and recursive-descent parser for fixture files.

use num_bigint::BigInt;

use super::VcliError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Str(String),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {}", n),
            Tok::Ident(s) => format!("'{}'", s),
            Tok::Str(s) => format!("\"{}\"", s),
            Tok::Sym(c) => format!("'{}'", c),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Lexed {
    pub tok: Tok,
    pub col: usize,
}

const SYMBOLS: &str = "+-*/^()[]{},;:=";

/// Split one line into tokens. Columns are 1-based character positions.
pub(crate) fn lex(text: &str, line: usize) -> Result<Vec<Lexed>, VcliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Lexed { tok: Tok::Int(s.parse().expect("digits")), col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(VcliError::Parse {
                    line,
                    col,
                    expected: "closing '\"'".into(),
                    found: "end of line".into(),
                });
            }
            out.push(Lexed { tok: Tok::Str(chars[start..i].iter().collect()), col });
            i += 1;
        } else if SYMBOLS.contains(c) {
            out.push(Lexed { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(VcliError::Parse { line, col, expected: "a token".into(), found: format!("'{}'", c) });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression tree. Names carry their position for later diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

impl Expr {
    /// Every name used in the expression, with its position.
    pub fn names(&self, out: &mut Vec<(String, usize, usize)>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name { name, line, col } => out.push((name.clone(), *line, *col)),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.names(out),
            Expr::Bin(_, a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

/// A name reference inside a check line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameRef {
    pub name: String,
    pub line: usize,
    pub col: usize,
}

pub(crate) struct Cursor<'a> {
    toks: &'a [Lexed],
    pos: usize,
    pub line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Lexed], line: usize, text: &str) -> Self {
        let end_col = text.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
        Cursor { toks, pos: 0, line, end_col }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn col(&self) -> usize {
        self.toks.get(self.pos).map(|l| l.col).unwrap_or(self.end_col)
    }

    fn found(&self) -> String {
        self.peek().map(|t| t.describe()).unwrap_or_else(|| "end of line".into())
    }

    pub fn err(&self, expected: &str) -> VcliError {
        VcliError::Parse { line: self.line, col: self.col(), expected: expected.into(), found: self.found() }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), VcliError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(&format!("'{}'", c)))
        }
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), VcliError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.err(&format!("'{}'", w)))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<NameRef, VcliError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let r = NameRef { name: s.clone(), line: self.line, col: self.col() };
                self.pos += 1;
                Ok(r)
            }
            _ => Err(self.err(what)),
        }
    }

    pub fn string(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Some(s)
            }
            _ => None,
        }
    }

    pub fn count(&mut self) -> Result<usize, VcliError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let v = usize::try_from(n).map_err(|_| self.err("a small nonnegative integer"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("a nonnegative integer")),
        }
    }

    pub fn skip(&mut self) {
        self.pos += 1;
    }

    pub fn end(&self) -> Result<(), VcliError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }

    /// `[a, b, ...]` of names.
    pub fn name_list(&mut self) -> Result<Vec<NameRef>, VcliError> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            out.push(self.ident("a name")?);
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    /// `[n, m, ...]` of counts.
    pub fn count_list(&mut self) -> Result<Vec<usize>, VcliError> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            out.push(self.count()?);
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    pub fn expr(&mut self) -> Result<Expr, VcliError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, VcliError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, VcliError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let e = self.count()?;
            let e = u32::try_from(e).map_err(|_| self.err("a small exponent"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    /// Contents of a parenthesized group. An unterminated group is reported
    /// at its opening parenthesis.
    fn group(&mut self) -> Result<Expr, VcliError> {
        let open = self.col();
        self.expect_sym('(')?;
        let line = self.line;
        let unclosed = move |found: String| VcliError::Parse {
            line,
            col: open,
            expected: "an expression closed by ')'".into(),
            found,
        };
        let inner = match self.expr() {
            Ok(e) => e,
            Err(e) if self.at_end() => {
                let _ = e;
                return Err(unclosed("end of line".into()));
            }
            Err(e) => return Err(e),
        };
        if self.eat_sym(')') {
            Ok(inner)
        } else if self.at_end() {
            Err(unclosed("end of line".into()))
        } else {
            Err(self.err("')'"))
        }
    }

    fn atom(&mut self) -> Result<Expr, VcliError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) if s == "sqrt" => {
                self.pos += 1;
                Ok(Expr::Sqrt(Box::new(self.group()?)))
            }
            Some(Tok::Ident(s)) => {
                let e = Expr::Name { name: s, line: self.line, col: self.col() };
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Sym('(')) => self.group(),
            _ => Err(self.err("an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_expr(s: &str) -> Result<Expr, VcliError> {
        let toks = lex(s, 1)?;
        let mut c = Cursor::new(&toks, 1, s);
        let e = c.expr()?;
        c.end()?;
        Ok(e)
    }

    #[test]
    fn precedence() {
        let e = parse_expr("1 + 2*x0^2").unwrap();
        match e {
            Expr::Bin(BinOp::Add, _, r) => assert!(matches!(*r, Expr::Bin(BinOp::Mul, _, _))),
            _ => panic!("{:?}", e),
        }
    }

    #[test]
    fn unclosed_paren_reported_at_open() {
        let err = parse_expr("3 + sqrt(").unwrap_err();
        assert_eq!(err, VcliError::Parse { line: 1, col: 9, expected: "an expression closed by ')'".into(), found: "end of line".into() });
        let err = parse_expr("(x0 + 1").unwrap_err();
        assert!(matches!(err, VcliError::Parse { col: 1, .. }));
    }

    #[test]
    fn bad_character() {
        assert!(matches!(parse_expr("x0 $ 1"), Err(VcliError::Parse { col: 4, .. })));
    }
}
