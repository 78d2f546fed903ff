use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::metamodel::{is_word_char, is_word_start};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(_) => "string literal".to_owned(),
            TokenKind::LBrace => "`{`".to_owned(),
            TokenKind::RBrace => "`}`".to_owned(),
            TokenKind::LBracket => "`[`".to_owned(),
            TokenKind::RBracket => "`]`".to_owned(),
            TokenKind::Colon => "`:`".to_owned(),
            TokenKind::Comma => "`,`".to_owned(),
            TokenKind::Eof => "end of input".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    file: &'a str,
    text: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, (pos, line, col): (usize, u32, u32)) -> SourceSpan {
        SourceSpan {
            file: self.file.to_owned(),
            start_line: line,
            start_col: col,
            end_line: self.line,
            end_col: self.col,
            offsets: pos..self.pos,
        }
    }
}

/// Splits `text` into tokens. Malformed input yields diagnostics, never a
/// failure; the token stream always ends with `Eof`.
pub(crate) fn tokenize(file: &str, text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        file,
        text,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.mark();
        let kind = match c {
            _ if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
                continue;
            }
            '{' | '}' | '[' | ']' | ':' | ',' => {
                cur.bump();
                match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    ':' => TokenKind::Colon,
                    _ => TokenKind::Comma,
                }
            }
            '"' => {
                cur.bump();
                match lex_string(&mut cur) {
                    Ok(s) => TokenKind::Str(s),
                    Err(message) => {
                        diagnostics.push(Diagnostic::error(
                            Code::UNEXPECTED_TOKEN,
                            cur.span_from(start),
                            message,
                        ));
                        continue;
                    }
                }
            }
            _ if is_word_start(c) => {
                while cur.peek().is_some_and(is_word_char) {
                    cur.bump();
                }
                TokenKind::Word(text[start.0..cur.pos].to_owned())
            }
            _ => {
                cur.bump();
                diagnostics.push(Diagnostic::error(
                    Code::UNEXPECTED_TOKEN,
                    cur.span_from(start),
                    format!("unexpected character `{c}`"),
                ));
                continue;
            }
        };
        tokens.push(Token {
            kind,
            span: cur.span_from(start),
        });
    }
    let end = cur.mark();
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: cur.span_from(end),
    });
    (tokens, diagnostics)
}

/// Lexes the body of a string literal after the opening quote.
fn lex_string(cur: &mut Cursor<'_>) -> Result<String, String> {
    let mut out = String::new();
    loop {
        match cur.bump() {
            None | Some('\n') => return Err("unterminated string literal".to_owned()),
            Some('"') => return Ok(out),
            Some('\\') => match cur.bump() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(c) => return Err(format!("unknown escape `\\{c}` in string literal")),
                None => return Err("unterminated string literal".to_owned()),
            },
            Some(c) => out.push(c),
        }
    }
}
