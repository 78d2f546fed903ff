use std::collections::HashMap;

use super::lexer::{tokenize, Token, TokenKind};
use crate::diagnostic::{has_errors, Code, Diagnostic, SourceSpan};
use crate::metamodel::{
    ArtifactModel, ConceptClass, ConceptInstance, MilestoneId, PropertySpec, PropertyType,
    PropertyValue, Relationship, RelationshipKind, RoleId, Tag, TagSet,
};

/// Output of [`parse`]. When `diagnostics` contains an error the model is
/// partial and must not be analysed further.
#[derive(Debug, Clone)]
pub struct ParseResult {
    pub model: ArtifactModel,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn is_partial(&self) -> bool {
        has_errors(&self.diagnostics)
    }
}

/// Parses `.amr` source. Never aborts: after an error the parser skips to
/// the next top-level keyword and continues.
pub fn parse(source_name: &str, text: &str) -> ParseResult {
    let (tokens, mut diagnostics) = tokenize(source_name, text);
    let mut parser = Parser {
        text,
        tokens,
        pos: 0,
        open_braces: 0,
        model: ArtifactModel::new(source_name),
        first_spans: HashMap::new(),
        signoff_spans: HashMap::new(),
        diagnostics: Vec::new(),
    };
    parser.file();
    diagnostics.append(&mut parser.diagnostics);
    diagnostics.sort_by_key(|d| d.span.offsets.start);
    ParseResult {
        model: parser.model,
        diagnostics,
    }
}

/// Marker for a structural error that has already been reported.
struct Bail;

type PResult<T> = Result<T, Bail>;

enum RawValue {
    Str(String),
    Word(String),
    Tags(Vec<(String, SourceSpan)>),
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    open_braces: u32,
    model: ArtifactModel,
    first_spans: HashMap<String, SourceSpan>,
    signoff_spans: HashMap<(MilestoneId, RoleId), SourceSpan>,
    diagnostics: Vec<Diagnostic>,
}

fn is_top_keyword(word: &str) -> bool {
    word == "rel" || word == "accept" || ConceptClass::from_keyword(word).is_some()
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&mut self, code: Code, span: SourceSpan, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(code, span, message));
    }

    fn unexpected(&mut self, expected: &str) -> Bail {
        let tok = self.peek().clone();
        self.error(
            Code::UNEXPECTED_TOKEN,
            tok.span,
            format!("expected {expected}, found {}", tok.kind.describe()),
        );
        Bail
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_word(&mut self, expected: &str) -> PResult<(String, SourceSpan)> {
        match &self.peek().kind {
            TokenKind::Word(w) => {
                let w = w.clone();
                Ok((w, self.bump().span))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn file(&mut self) {
        loop {
            let tok = self.peek().clone();
            let result = match &tok.kind {
                TokenKind::Eof => break,
                TokenKind::Word(w) if w == "rel" => self.relationship(),
                TokenKind::Word(w) if w == "accept" => self.accept(),
                TokenKind::Word(w) => match ConceptClass::from_keyword(w) {
                    Some(class) => self.instance(class),
                    None => {
                        self.error(
                            Code::UNEXPECTED_TOKEN,
                            tok.span.clone(),
                            format!("unknown declaration keyword `{w}`"),
                        );
                        self.bump();
                        Err(Bail)
                    }
                },
                other => {
                    self.error(
                        Code::UNEXPECTED_TOKEN,
                        tok.span.clone(),
                        format!("expected a declaration, found {}", other.describe()),
                    );
                    self.bump();
                    Err(Bail)
                }
            };
            if result.is_err() {
                self.recover();
            }
            self.open_braces = 0;
        }
    }

    /// Skips to the next top-level keyword outside any block. A keyword in
    /// the first column also ends recovery, so an unclosed block does not
    /// swallow the rest of the file.
    fn recover(&mut self) {
        let mut depth = self.open_braces;
        loop {
            let tok = self.peek();
            match &tok.kind {
                TokenKind::Eof => return,
                TokenKind::Word(w) if is_top_keyword(w) && (depth == 0 || tok.span.start_col == 1) => {
                    return
                }
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.bump();
        }
    }

    fn instance(&mut self, class: ConceptClass) -> PResult<()> {
        self.bump();
        let (id, id_span) = self.expect_word("an identifier")?;
        let duplicate = self.first_spans.get(&id).cloned();
        if let Some(first) = &duplicate {
            self.diagnostics.push(
                Diagnostic::error(
                    Code::DUPLICATE_IDENTIFIER,
                    id_span.clone(),
                    format!("duplicate identifier `{id}`; the first declaration is kept"),
                )
                .with_related(first.clone())
                .about(id.clone()),
            );
        }
        // Word tokens are always valid identifiers.
        let mut instance = ConceptInstance::new(id.clone(), class)
            .expect("word token is an identifier")
            .with_span(id_span.clone());

        self.expect(TokenKind::LBrace, "`{`")?;
        self.open_braces = 1;
        let mut seen: HashMap<String, SourceSpan> = HashMap::new();
        loop {
            let tok = self.peek().clone();
            match &tok.kind {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Word(w)
                    if is_top_keyword(w)
                        && self.tokens.get(self.pos + 1).map(|t| &t.kind) != Some(&TokenKind::Colon) =>
                {
                    self.error(
                        Code::UNEXPECTED_TOKEN,
                        tok.span.clone(),
                        format!("expected `}}` to close `{id}` before {}", tok.kind.describe()),
                    );
                    return Err(Bail);
                }
                TokenKind::Word(_) => {}
                _ => return Err(self.unexpected("a property name or `}`")),
            }
            let (key, key_span) = self.expect_word("a property name")?;
            self.expect(TokenKind::Colon, "`:`")?;
            let (raw, value_span) = self.value()?;

            let Some(spec) = class.property(&key) else {
                self.error(
                    Code::UNKNOWN_PROPERTY,
                    key_span,
                    format!("{class} has no property `{key}`"),
                );
                continue;
            };
            if let Some(first) = seen.get(&key) {
                let diag = Diagnostic::error(
                    Code::DUPLICATE_IDENTIFIER,
                    key_span,
                    format!("property `{key}` is set twice"),
                )
                .with_related(first.clone());
                self.diagnostics.push(diag);
                continue;
            }
            seen.insert(key.clone(), key_span);
            if let Some(value) = self.convert(spec, raw, &value_span) {
                instance
                    .set_property(&key, value, Some(value_span))
                    .expect("converted value matches the blueprint");
            }
        }
        self.open_braces = 0;

        if duplicate.is_none() {
            self.first_spans.insert(id, id_span);
            self.model
                .add_instance(instance)
                .expect("first declaration of id");
        }
        Ok(())
    }

    fn value(&mut self) -> PResult<(RawValue, SourceSpan)> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Str(s) => {
                self.bump();
                Ok((RawValue::Str(s), tok.span))
            }
            TokenKind::Word(w) => {
                self.bump();
                Ok((RawValue::Word(w), tok.span))
            }
            TokenKind::LBracket => {
                self.bump();
                let mut tags = Vec::new();
                loop {
                    tags.push(self.tag_text()?);
                    match self.peek().kind {
                        TokenKind::Comma => {
                            self.bump();
                        }
                        TokenKind::RBracket => {
                            let end = self.bump().span;
                            return Ok((RawValue::Tags(tags), tok.span.to(&end)));
                        }
                        _ => return Err(self.unexpected("`,` or `]`")),
                    }
                }
            }
            _ => Err(self.unexpected("a string, word or tag list")),
        }
    }

    /// Collects the raw text of one tag: the source between the first and
    /// last word or colon token before the next `,` or `]`.
    fn tag_text(&mut self) -> PResult<(String, SourceSpan)> {
        let start = self.peek().span.clone();
        let mut end: Option<SourceSpan> = None;
        while matches!(self.peek().kind, TokenKind::Word(_) | TokenKind::Colon) {
            end = Some(self.bump().span);
        }
        match end {
            Some(end) => {
                let span = start.to(&end);
                Ok((span.slice(self.text).to_owned(), span))
            }
            None if matches!(self.peek().kind, TokenKind::Comma | TokenKind::RBracket) => {
                Ok((String::new(), start))
            }
            None => Err(self.unexpected("a tag")),
        }
    }

    fn convert(&mut self, spec: &PropertySpec, raw: RawValue, span: &SourceSpan) -> Option<PropertyValue> {
        match (spec.ty, raw) {
            (PropertyType::Text, RawValue::Str(s)) => Some(PropertyValue::Text(s)),
            (PropertyType::Tags(ns), RawValue::Tags(items)) => {
                let mut set = TagSet::new();
                let mut ok = true;
                for (text, tag_span) in items {
                    let message = match text.parse::<Tag>() {
                        Ok(tag) if tag.namespace() == ns => {
                            set.insert(tag);
                            continue;
                        }
                        Ok(tag) => format!(
                            "tag `{tag}` is not allowed in `{}`; expected a `{ns}:` tag",
                            spec.name
                        ),
                        Err(_) if text.is_empty() => "empty tag".to_owned(),
                        Err(e) => e.to_string(),
                    };
                    ok = false;
                    self.error(Code::INVALID_TAG, tag_span, message);
                }
                ok.then_some(PropertyValue::Tags(set))
            }
            (ty @ PropertyType::Reference(_), RawValue::Word(w)) => ty.value_from_word(&w),
            (ty, RawValue::Word(w)) if !ty.keywords().is_empty() => {
                let value = ty.value_from_word(&w);
                if value.is_none() {
                    self.error(
                        Code::UNEXPECTED_TOKEN,
                        span.clone(),
                        format!(
                            "invalid value `{w}` for `{}`; expected one of: {}",
                            spec.name,
                            ty.keywords().join(", ")
                        ),
                    );
                }
                value
            }
            (ty, _) => {
                let expected = match ty {
                    PropertyType::Text => "a string literal",
                    PropertyType::Tags(_) => "a tag list",
                    PropertyType::Reference(_) => "an identifier",
                    _ => "a keyword",
                };
                self.error(
                    Code::UNEXPECTED_TOKEN,
                    span.clone(),
                    format!("`{}` expects {expected}", spec.name),
                );
                None
            }
        }
    }

    fn relationship(&mut self) -> PResult<()> {
        let start = self.bump().span;
        let (source, source_span) = self.expect_word("a source identifier")?;
        let (kw, kw_span) = self.expect_word("a relationship kind")?;
        let Some(kind) = RelationshipKind::from_keyword(&kw) else {
            self.error(
                Code::UNEXPECTED_TOKEN,
                kw_span,
                format!("unknown relationship kind `{kw}`"),
            );
            return Err(Bail);
        };
        let (target, target_span) = self.expect_word("a target identifier")?;
        let rel = Relationship::declared(kind, source, target).with_spans(
            start.to(&target_span),
            source_span,
            target_span,
        );
        self.model.add_relationship(rel);
        Ok(())
    }

    fn accept(&mut self) -> PResult<()> {
        let start = self.bump().span;
        let (m, m_span) = self.expect_word("a milestone (M1..M4)")?;
        let Some(milestone) = MilestoneId::from_keyword(&m) else {
            self.error(Code::UNEXPECTED_TOKEN, m_span, format!("unknown milestone `{m}`"));
            return Err(Bail);
        };
        let by = self.expect_word("`by`")?;
        if by.0 != "by" {
            self.error(
                Code::UNEXPECTED_TOKEN,
                by.1,
                format!("expected `by`, found `{}`", by.0),
            );
            return Err(Bail);
        }
        let (r, r_span) = self.expect_word("a role")?;
        let Some(role) = RoleId::from_keyword(&r) else {
            self.error(Code::UNEXPECTED_TOKEN, r_span, format!("unknown role `{r}`"));
            return Err(Bail);
        };
        let span = start.to(&r_span);
        if let Some(first) = self.signoff_spans.get(&(milestone, role)) {
            let diag = Diagnostic::error(
                Code::DUPLICATE_IDENTIFIER,
                span,
                format!("{milestone} is already accepted by {role}"),
            )
            .with_related(first.clone());
            self.diagnostics.push(diag);
            return Ok(());
        }
        self.signoff_spans.insert((milestone, role), span.clone());
        self.model
            .add_signoff(milestone, role, span)
            .expect("sign-off pair not seen before");
        Ok(())
    }
}
