//! Tokenizer for the declaration language.
//!
//! Whitespace-insensitive; `(* ... *)` comments nest as in OCaml.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    KwType,
    KwAnd,
    KwOf,
    KwMutable,
    KwAs,
    KwForall,
    KwExists,
    KwFloat,
    KwInt,
    KwBool,
    /// Lowercase identifier (type names, record labels).
    Ident(String),
    /// Capitalized identifier (variant constructors).
    UIdent(String),
    /// `'name` type variable.
    TyVar(String),
    Underscore,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    Star,
    Comma,
    Semi,
    Colon,
    Dot,
    Bar,
    Eq,
    /// `[@@unboxed]` (or `[@@ocaml.unboxed]`).
    UnboxedAttr,
    Eof,
}

impl Token {
    pub fn describe(&self) -> String {
        match self {
            Token::KwType => "'type'".into(),
            Token::KwAnd => "'and'".into(),
            Token::KwOf => "'of'".into(),
            Token::KwMutable => "'mutable'".into(),
            Token::KwAs => "'as'".into(),
            Token::KwForall => "'forall'".into(),
            Token::KwExists => "'exists'".into(),
            Token::KwFloat => "'float'".into(),
            Token::KwInt => "'int'".into(),
            Token::KwBool => "'bool'".into(),
            Token::Ident(s) => format!("identifier '{s}'"),
            Token::UIdent(s) => format!("constructor '{s}'"),
            Token::TyVar(s) => format!("type variable ''{s}'"),
            Token::Underscore => "'_'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::LBrace => "'{'".into(),
            Token::RBrace => "'}'".into(),
            Token::Arrow => "'->'".into(),
            Token::Star => "'*'".into(),
            Token::Comma => "','".into(),
            Token::Semi => "';'".into(),
            Token::Colon => "':'".into(),
            Token::Dot => "'.'".into(),
            Token::Bar => "'|'".into(),
            Token::Eq => "'='".into(),
            Token::UnboxedAttr => "'[@@unboxed]'".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn tokenize(text: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '(' && i + 1 < chars.len() && chars[i + 1] == '*' {
            let mut depth = 0usize;
            let start = pos;
            while i < chars.len() {
                if chars[i] == '(' && i + 1 < chars.len() && chars[i + 1] == '*' {
                    depth += 1;
                    bump!();
                    bump!();
                } else if chars[i] == '*' && i + 1 < chars.len() && chars[i + 1] == ')' {
                    depth -= 1;
                    bump!();
                    bump!();
                    if depth == 0 {
                        break;
                    }
                } else {
                    bump!();
                }
            }
            if depth > 0 {
                return Err(ParseError {
                    pos: start,
                    message: "unterminated comment".into(),
                });
            }
            continue;
        }
        match c {
            '(' => {
                out.push((Token::LParen, pos));
                bump!();
            }
            ')' => {
                out.push((Token::RParen, pos));
                bump!();
            }
            '{' => {
                out.push((Token::LBrace, pos));
                bump!();
            }
            '}' => {
                out.push((Token::RBrace, pos));
                bump!();
            }
            '*' => {
                out.push((Token::Star, pos));
                bump!();
            }
            ',' => {
                out.push((Token::Comma, pos));
                bump!();
            }
            ';' => {
                out.push((Token::Semi, pos));
                bump!();
            }
            ':' => {
                out.push((Token::Colon, pos));
                bump!();
            }
            '.' => {
                out.push((Token::Dot, pos));
                bump!();
            }
            '|' => {
                out.push((Token::Bar, pos));
                bump!();
            }
            '=' => {
                out.push((Token::Eq, pos));
                bump!();
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    out.push((Token::Arrow, pos));
                    bump!();
                    bump!();
                } else {
                    return Err(ParseError {
                        pos,
                        message: "expected '->'".into(),
                    });
                }
            }
            '[' => {
                // Attribute: [@@unboxed] or [@@ocaml.unboxed].
                let rest: String = chars[i..].iter().take(20).collect();
                let accepted = ["[@@unboxed]", "[@@ocaml.unboxed]"]
                    .iter()
                    .find(|a| rest.starts_with(**a))
                    .copied();
                match accepted {
                    Some(a) => {
                        for _ in 0..a.chars().count() {
                            bump!();
                        }
                        out.push((Token::UnboxedAttr, pos));
                    }
                    None => {
                        return Err(ParseError {
                            pos,
                            message: "expected '[@@unboxed]'".into(),
                        });
                    }
                }
            }
            '\'' => {
                bump!();
                let mut name = String::new();
                while i < chars.len() && is_ident_char(chars[i]) {
                    name.push(chars[i]);
                    bump!();
                }
                if name.is_empty() {
                    return Err(ParseError {
                        pos,
                        message: "expected a type variable name after '''".into(),
                    });
                }
                out.push((Token::TyVar(name), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while i < chars.len() && is_ident_char(chars[i]) {
                    word.push(chars[i]);
                    bump!();
                }
                let tok = match word.as_str() {
                    "type" => Token::KwType,
                    "and" => Token::KwAnd,
                    "of" => Token::KwOf,
                    "mutable" => Token::KwMutable,
                    "as" => Token::KwAs,
                    "forall" => Token::KwForall,
                    "exists" => Token::KwExists,
                    "float" => Token::KwFloat,
                    "int" => Token::KwInt,
                    "bool" => Token::KwBool,
                    "_" => Token::Underscore,
                    _ if word.starts_with(|c: char| c.is_ascii_uppercase()) => {
                        Token::UIdent(word)
                    }
                    _ => Token::Ident(word),
                };
                out.push((tok, pos));
            }
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    out.push((
        Token::Eof,
        Pos { line, col },
    ));
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}
