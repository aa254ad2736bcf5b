use super::lexer::{tokenize, Spanned, Tok};
use super::ParseDiagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RawTerm {
    Var(String),
    App(String, Vec<RawTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RawAtom {
    Pred(String, Vec<RawTerm>),
    Equal(RawTerm, RawTerm),
    True,
    False,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawLiteral {
    pub positive: bool,
    pub atom: RawAtom,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Statement {
    Include {
        file: String,
        selection: Option<Vec<String>>,
        line: usize,
        column: usize,
    },
    Cnf {
        name: String,
        role: String,
        literals: Vec<RawLiteral>,
        line: usize,
        column: usize,
    },
}

pub(crate) fn parse_statements(src: &str, file: &str) -> Result<Vec<Statement>, ParseDiagnostic> {
    let toks = tokenize(src, file)?;
    let mut p = Parser { toks, at: 0, file };
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.statement()?);
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    at: usize,
    file: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.at];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseDiagnostic {
        let (line, column) = self.here();
        ParseDiagnostic {
            file: self.file.to_owned(),
            line,
            column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseDiagnostic {
        self.error(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseDiagnostic> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseDiagnostic> {
        let (line, column) = self.here();
        let keyword = match self.peek() {
            Tok::Lower(w) => w.clone(),
            _ => return Err(self.unexpected("`cnf` or `include`")),
        };
        match keyword.as_str() {
            "include" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let file = match self.bump() {
                    Tok::Quoted(f) => f,
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("a quoted file name"));
                    }
                };
                let mut selection = None;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    selection = Some(self.name_list()?);
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Statement::Include {
                    file,
                    selection,
                    line,
                    column,
                })
            }
            "cnf" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let name = self.name()?;
                self.expect(Tok::Comma)?;
                let role = match self.bump() {
                    Tok::Lower(r) => r,
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("a formula role"));
                    }
                };
                self.expect(Tok::Comma)?;
                let literals = self.cnf_formula()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    self.skip_annotations()?;
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Statement::Cnf {
                    name,
                    role,
                    literals,
                    line,
                    column,
                })
            }
            "fof" | "tff" | "thf" | "tcf" | "tpi" => Err(self.error(format!(
                "`{keyword}` formulas are not supported; only clause normal form is accepted"
            ))),
            _ => Err(self.unexpected("`cnf` or `include`")),
        }
    }

    fn name(&mut self) -> Result<String, ParseDiagnostic> {
        match self.peek().clone() {
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Number(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a formula name")),
        }
    }

    fn name_list(&mut self) -> Result<Vec<String>, ParseDiagnostic> {
        self.expect(Tok::LBracket)?;
        let mut names = Vec::new();
        if *self.peek() != Tok::RBracket {
            names.push(self.name()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                names.push(self.name()?);
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(names)
    }

    /// Skip source/useful-info annotations up to the statement's closing
    /// parenthesis, which is left in place.
    fn skip_annotations(&mut self) -> Result<(), ParseDiagnostic> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return Err(self.unexpected("`)`")),
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket if depth == 0 => {
                    if *self.peek() == Tok::RBracket {
                        return Err(self.unexpected("`)`"));
                    }
                    return Ok(());
                }
                Tok::RParen | Tok::RBracket => depth -= 1,
                _ => {}
            }
            self.bump();
        }
    }

    fn cnf_formula(&mut self) -> Result<Vec<RawLiteral>, ParseDiagnostic> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let lits = self.cnf_formula()?;
            self.expect(Tok::RParen)?;
            if *self.peek() == Tok::Pipe {
                return Err(self.error("parenthesised disjunct must be the whole clause"));
            }
            return Ok(lits);
        }
        let mut lits = vec![self.literal()?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            lits.push(self.literal()?);
        }
        if matches!(self.peek(), Tok::Amp | Tok::Other(_)) {
            return Err(self.error(format!(
                "connective {} is not allowed in a clause",
                self.peek().describe()
            )));
        }
        Ok(lits)
    }

    fn literal(&mut self) -> Result<RawLiteral, ParseDiagnostic> {
        let (line, column) = self.here();
        let mut positive = true;
        if *self.peek() == Tok::Tilde {
            self.bump();
            positive = false;
            if *self.peek() == Tok::Tilde {
                return Err(self.error("double negation is not clause normal form"));
            }
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let mut inner = self.literal()?;
            self.expect(Tok::RParen)?;
            inner.positive = inner.positive == positive;
            inner.line = line;
            inner.column = column;
            return Ok(inner);
        }
        let lhs = self.term()?;
        let atom = match self.peek() {
            Tok::Eq | Tok::Neq => {
                if self.bump() == Tok::Neq {
                    positive = !positive;
                }
                let rhs = self.term()?;
                RawAtom::Equal(lhs, rhs)
            }
            _ => match lhs {
                RawTerm::Var(v) => {
                    return Err(ParseDiagnostic {
                        file: self.file.to_owned(),
                        line,
                        column,
                        message: format!("variable `{v}` used as a literal"),
                    })
                }
                RawTerm::App(name, args) if args.is_empty() && name == "$true" => RawAtom::True,
                RawTerm::App(name, args) if args.is_empty() && name == "$false" => RawAtom::False,
                RawTerm::App(name, args) => RawAtom::Pred(name, args),
            },
        };
        Ok(RawLiteral {
            positive,
            atom,
            line,
            column,
        })
    }

    fn term(&mut self) -> Result<RawTerm, ParseDiagnostic> {
        match self.peek().clone() {
            Tok::Upper(v) => {
                self.bump();
                Ok(RawTerm::Var(v))
            }
            Tok::Lower(f) | Tok::Quoted(f) | Tok::Dollar(f) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok(RawTerm::App(f, args))
            }
            Tok::Number(n) | Tok::Distinct(n) => {
                self.bump();
                Ok(RawTerm::App(n, Vec::new()))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}
