//! Parser for algebraic normal form expressions.
//!
//! Grammar: terms joined by `+` (XOR), factors within a term joined by `*`
//! (AND), factors are variables `x1..xn` or the constant `1`. Whitespace is
//! ignored. `x1` is the most significant bit of the truth-table index.

use crate::error::{Error, Result};

/// One XOR-term as the set of 1-based variable indices it multiplies.
/// An empty set is the constant-1 term.
type Term = Vec<usize>;

#[derive(Debug)]
pub(crate) struct ParsedAnf {
    terms: Vec<Term>,
    max_var: usize,
}

impl ParsedAnf {
    pub(crate) fn max_var(&self) -> usize {
        self.max_var
    }

    /// Evaluates the expression on every point of an n-variable domain.
    /// Requires `n >= self.max_var()`.
    pub(crate) fn truth_table(&self, n: usize) -> Vec<bool> {
        assert!(n >= self.max_var);
        let masks: Vec<usize> = self
            .terms
            .iter()
            .map(|term| term.iter().fold(0usize, |m, &var| m | (1 << (n - var))))
            .collect();
        (0..1usize << n)
            .map(|x| {
                masks
                    .iter()
                    .fold(false, |acc, &mask| acc ^ ((x & mask) == mask))
            })
            .collect()
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Token {
    Plus,
    Star,
    One,
    Var(usize),
}

/// Tokens carry the 1-based column of their first character.
fn tokenize(expr: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut chars = expr.chars().enumerate().peekable();
    while let Some((idx, ch)) = chars.next() {
        let column = idx + 1;
        match ch {
            c if c.is_whitespace() => {}
            '+' => tokens.push((column, Token::Plus)),
            '*' => tokens.push((column, Token::Star)),
            '1' => tokens.push((column, Token::One)),
            'x' => {
                let mut digits = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if digits.is_empty() {
                    return Err(Error::parse_at(column, "expected digits after 'x'"));
                }
                let var: usize = digits.parse().map_err(|_| {
                    Error::parse_at(column, format!("variable index x{digits} out of range"))
                })?;
                if var == 0 {
                    return Err(Error::parse_at(column, "variable indices start at x1"));
                }
                tokens.push((column, Token::Var(var)));
            }
            other => {
                return Err(Error::parse_at(
                    column,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    Ok(tokens)
}

/// Parses an ANF expression into its term list.
///
/// Syntax is validated here; variable-count bounds are the caller's problem
/// since they depend on whether `n` was declared or is being inferred.
pub(crate) fn parse_expression(expr: &str) -> Result<ParsedAnf> {
    let tokens = tokenize(expr)?;
    if tokens.is_empty() {
        return Err(Error::parse_at(1, "empty expression"));
    }

    let end_column = expr.chars().count() + 1;
    let mut terms: Vec<Term> = Vec::new();
    let mut max_var = 0;
    let mut cursor = tokens.iter().peekable();

    loop {
        // One term: factor (* factor)*
        let mut term: Term = Vec::new();
        loop {
            match cursor.next() {
                Some((_, Token::One)) => {}
                Some(&(_, Token::Var(var))) => {
                    max_var = max_var.max(var);
                    if !term.contains(&var) {
                        term.push(var);
                    }
                }
                Some(&(column, ref tok)) => {
                    return Err(Error::parse_at(
                        column,
                        format!("expected a variable or '1', found {tok:?}"),
                    ));
                }
                None => {
                    return Err(Error::parse_at(end_column, "expression ends mid-term"));
                }
            }
            match cursor.peek() {
                Some((_, Token::Star)) => {
                    cursor.next();
                }
                _ => break,
            }
        }
        // `x1*x1` collapses to `x1`; a term with no variables is the
        // constant 1, kept as an empty set so XOR cancellation still works.
        term.sort_unstable();
        terms.push(term);

        match cursor.next() {
            None => break,
            Some((_, Token::Plus)) => {}
            Some(&(column, ref tok)) => {
                return Err(Error::parse_at(
                    column,
                    format!("expected '+' or '*' between terms, found {tok:?}"),
                ));
            }
        }
    }

    Ok(ParsedAnf { terms, max_var })
}
