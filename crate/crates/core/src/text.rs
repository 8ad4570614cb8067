//! Character cursor shared by the AVM and grammar readers.

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '*' || c == '\''
}

pub(crate) struct Cursor<'t> {
    src: &'t str,
    pos: usize,
}

impl<'t> Cursor<'t> {
    pub(crate) fn new(src: &'t str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn set_pos(&mut self, pos: usize) {
        self.pos = pos;
    }

    /// Skips a bracketed region, honouring comments. Returns false on an
    /// unbalanced bracket.
    pub(crate) fn skip_brackets(&mut self) -> bool {
        self.skip_ws();
        if !self.rest().starts_with('[') {
            return false;
        }
        let mut depth = 0usize;
        while let Some(c) = self.rest().chars().next() {
            match c {
                '%' => {
                    let end = self.rest().find('\n').unwrap_or(self.rest().len());
                    self.pos += end;
                    continue;
                }
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return true;
                    }
                }
                _ => {}
            }
            self.pos += c.len_utf8();
        }
        false
    }

    pub(crate) fn rest(&self) -> &'t str {
        &self.src[self.pos..]
    }

    /// 1-based line and column of a byte offset.
    pub(crate) fn line_col(&self, at: usize) -> (usize, usize) {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        self.line_col(self.pos)
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('%') {
                let end = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += end;
            } else {
                return;
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Character right after the next one, without skipping whitespace.
    pub(crate) fn peek_second(&mut self) -> Option<char> {
        self.skip_ws();
        let mut it = self.rest().chars();
        it.next();
        it.next()
    }

    pub(crate) fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|&c| is_ident_char(c))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return None;
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Some(s)
    }

    pub(crate) fn number(&mut self) -> Option<u32> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return None;
        }
        let n = self.rest()[..len].parse().ok()?;
        self.pos += len;
        Some(n)
    }

    /// A run of non-whitespace characters.
    pub(crate) fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|c| !c.is_whitespace())
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return None;
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Some(s)
    }
}
