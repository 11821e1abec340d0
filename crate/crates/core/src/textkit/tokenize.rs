/// Words and single punctuation marks, in source order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tokens {
    pub items: Vec<String>,
}

impl Tokens {
    pub fn new(items: Vec<String>) -> Self {
        Self { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(String::as_str)
    }

    /// Tokens that contain a letter or digit.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.iter().filter(|t| is_word(t))
    }
}

impl<S: Into<String>> FromIterator<S> for Tokens {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Tokens::new(iter.into_iter().map(Into::into).collect())
    }
}

pub fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

/// Split on whitespace, then peel leading and trailing non-alphanumeric
/// characters off each chunk as one-character tokens. Characters between the
/// first and last alphanumeric stay in the word, so `don't` and `mind-blowing`
/// survive intact.
pub fn tokenize(text: &str) -> Tokens {
    let mut items = Vec::new();
    for chunk in text.split_whitespace() {
        let Some(start) = chunk.find(char::is_alphanumeric) else {
            items.extend(chunk.chars().map(String::from));
            continue;
        };
        let end = chunk
            .char_indices()
            .filter(|(_, c)| c.is_alphanumeric())
            .map(|(i, c)| i + c.len_utf8())
            .last()
            .unwrap_or(chunk.len());
        items.extend(chunk[..start].chars().map(String::from));
        items.push(chunk[start..end].to_owned());
        items.extend(chunk[end..].chars().map(String::from));
    }
    Tokens { items }
}

/// Sentences end after a run of `.`, `!` or `?` that is followed by whitespace
/// or the end of the text. Text without a terminator is one sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let next = chars.peek().map(|&(_, n)| n);
        if matches!(next, Some('.' | '!' | '?')) {
            continue;
        }
        if next.is_none_or(char::is_whitespace) {
            let end = i + c.len_utf8();
            let sentence = text[start..end].trim();
            if !sentence.is_empty() {
                out.push(sentence.to_owned());
            }
            start = end;
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_owned());
    }
    out
}
