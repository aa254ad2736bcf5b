use super::ParseDiagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lower(String),
    Upper(String),
    /// single-quoted atom, quotes removed and escapes resolved
    Quoted(String),
    /// double-quoted distinct object, kept with its quotes
    Distinct(String),
    Dollar(String),
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Pipe,
    Amp,
    Tilde,
    Eq,
    Neq,
    Colon,
    /// any other connective or punctuation; only legal inside annotations
    Other(String),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Dollar(s) | Tok::Number(s) | Tok::Other(s) => {
                format!("`{s}`")
            }
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Distinct(s) => s.clone(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(src: &str, file: &str) -> Result<Vec<Spanned>, ParseDiagnostic> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        at: 0,
        line: 1,
        column: 1,
        file,
    };
    let mut out = Vec::new();
    loop {
        lx.skip_trivia()?;
        let (line, column) = (lx.line, lx.column);
        let tok = lx.next_token()?;
        let end = tok == Tok::Eof;
        out.push(Spanned { tok, line, column });
        if end {
            return Ok(out);
        }
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    at: usize,
    line: usize,
    column: usize,
    file: &'a str,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.at + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            file: self.file.to_owned(),
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseDiagnostic> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') if self.peek2() == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(self.error(line, column, "unterminated comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn quoted(&mut self, quote: char) -> Result<String, ParseDiagnostic> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('\\') => match self.bump() {
                    Some(c @ ('\\' | '\'' | '"')) => s.push(c),
                    _ => return Err(self.error(line, column, "invalid escape in quoted token")),
                },
                Some(c) if c == quote => return Ok(s),
                Some('\n') | None => {
                    return Err(self.error(line, column, "unterminated quoted token"))
                }
                Some(c) if (' '..='~').contains(&c) => s.push(c),
                Some(c) => {
                    return Err(self.error(
                        line,
                        column,
                        format!("character {c:?} not allowed in quoted token"),
                    ))
                }
            }
        }
    }

    fn next_token(&mut self) -> Result<Tok, ParseDiagnostic> {
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(Tok::Eof);
        };
        let tok = match c {
            'a'..='z' => Tok::Lower(self.word()),
            'A'..='Z' | '_' => Tok::Upper(self.word()),
            '0'..='9' => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit()
                        || c == '.' && self.peek2().is_some_and(|d| d.is_ascii_digit())
                        || c == '/'
                    {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Number(s)
            }
            '$' => {
                self.bump();
                let mut s = String::from("$");
                if self.peek() == Some('$') {
                    self.bump();
                    s.push('$');
                }
                let w = self.word();
                if w.is_empty() {
                    return Err(self.error(line, column, "expected a word after `$`"));
                }
                s.push_str(&w);
                Tok::Dollar(s)
            }
            '\'' => {
                let s = self.quoted('\'')?;
                if s.is_empty() {
                    return Err(self.error(line, column, "empty quoted atom"));
                }
                Tok::Quoted(s)
            }
            '"' => Tok::Distinct(format!("\"{}\"", self.quoted('"')?)),
            '(' => self.single(Tok::LParen),
            ')' => self.single(Tok::RParen),
            '[' => self.single(Tok::LBracket),
            ']' => self.single(Tok::RBracket),
            ',' => self.single(Tok::Comma),
            '.' => self.single(Tok::Dot),
            '|' => self.single(Tok::Pipe),
            '&' => self.single(Tok::Amp),
            ':' => self.single(Tok::Colon),
            '=' => {
                self.bump();
                if self.peek() == Some('>') {
                    self.bump();
                    Tok::Other("=>".into())
                } else {
                    Tok::Eq
                }
            }
            '!' if self.peek2() == Some('=') => {
                self.bump();
                self.bump();
                Tok::Neq
            }
            '~' => {
                self.bump();
                match self.peek() {
                    Some('|') | Some('&') => {
                        let c = self.bump().unwrap();
                        Tok::Other(format!("~{c}"))
                    }
                    _ => Tok::Tilde,
                }
            }
            '!' | '?' | '^' | '@' | '*' | '+' | '-' | '>' | '<' | '#' | '{' | '}' | ';' => {
                self.bump();
                let mut s = c.to_string();
                while let Some(n) = self.peek() {
                    if "=>~<-+*@!?".contains(n) {
                        s.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Other(s)
            }
            other => {
                return Err(self.error(line, column, format!("unexpected character {other:?}")))
            }
        };
        Ok(tok)
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }
}
