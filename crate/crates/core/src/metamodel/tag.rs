use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Loc,
    Intent,
    Data,
}

impl Namespace {
    pub const ALL: [Namespace; 3] = [Namespace::Loc, Namespace::Intent, Namespace::Data];

    pub fn as_str(self) -> &'static str {
        match self {
            Namespace::Loc => "loc",
            Namespace::Intent => "intent",
            Namespace::Data => "data",
        }
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("tag `{0}` has no `namespace:` prefix")]
    MissingNamespace(String),
    #[error("unknown tag namespace `{0}` (expected loc, intent or data)")]
    UnknownNamespace(String),
    #[error("tag `{0}` has an empty name")]
    EmptyName(String),
    #[error("tag `{0}` contains whitespace")]
    Whitespace(String),
    #[error("tag `{0}` contains characters not allowed in a tag name")]
    InvalidCharacter(String),
}

/// A namespaced tag such as `loc:EU`. Case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    namespace: Namespace,
    name: String,
}

impl Tag {
    pub fn new(namespace: Namespace, name: impl Into<String>) -> Result<Tag, TagError> {
        let name = name.into();
        if name.is_empty() {
            return Err(TagError::EmptyName(format!("{namespace}:")));
        }
        if name.chars().any(char::is_whitespace) {
            return Err(TagError::Whitespace(format!("{namespace}:{name}")));
        }
        if !super::is_identifier(&name) {
            return Err(TagError::InvalidCharacter(format!("{namespace}:{name}")));
        }
        Ok(Tag { namespace, name })
    }

    pub fn namespace(&self) -> Namespace {
        self.namespace
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl FromStr for Tag {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Tag, TagError> {
        if s.chars().any(char::is_whitespace) {
            return Err(TagError::Whitespace(s.to_owned()));
        }
        let (ns, name) = s
            .split_once(':')
            .ok_or_else(|| TagError::MissingNamespace(s.to_owned()))?;
        let namespace = Namespace::ALL
            .into_iter()
            .find(|n| n.as_str() == ns)
            .ok_or_else(|| TagError::UnknownNamespace(ns.to_owned()))?;
        Tag::new(namespace, name)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.namespace, self.name)
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite, ordered set of tags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TagSet(BTreeSet<Tag>);

impl TagSet {
    pub fn new() -> Self {
        TagSet::default()
    }

    pub fn insert(&mut self, tag: Tag) -> bool {
        self.0.insert(tag)
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.0.contains(tag)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tag> {
        self.0.iter()
    }

    pub fn intersection<'a>(&'a self, other: &'a TagSet) -> impl Iterator<Item = &'a Tag> {
        self.0.intersection(&other.0)
    }

    /// True when every tag lives in `namespace`.
    pub fn all_in(&self, namespace: Namespace) -> bool {
        self.0.iter().all(|t| t.namespace == namespace)
    }
}

impl FromIterator<Tag> for TagSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        TagSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TagSet {
    type Item = &'a Tag;
    type IntoIter = std::collections::btree_set::Iter<'a, Tag>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
