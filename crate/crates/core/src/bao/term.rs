use std::collections::BTreeMap;
use std::fmt;

use super::{AtomSet, BaoError, ComplexAlgebra, Operator};

/// An operator expression over element variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Diag(usize, usize),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Apply(Operator, Box<Term>),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Diag(i, j) => write!(f, "d{i}{j}"),
            Term::Not(t) => write!(f, "¬{t}"),
            Term::And(a, b) => write!(f, "({a} ∧ {b})"),
            Term::Or(a, b) => write!(f, "({a} ∨ {b})"),
            Term::Apply(op, t) => write!(f, "{op}({t})"),
        }
    }
}

pub fn eval_term(
    alg: &ComplexAlgebra,
    term: &Term,
    env: &BTreeMap<String, AtomSet>,
) -> Result<AtomSet, BaoError> {
    Ok(match term {
        Term::Var(v) => {
            let x = env.get(v).ok_or_else(|| BaoError::UnboundVariable(v.clone()))?;
            if x.universe() != alg.atom_count() {
                return Err(BaoError::Shape(format!(
                    "variable `{v}` ranges over {} atoms, algebra has {}",
                    x.universe(),
                    alg.atom_count()
                )));
            }
            x.clone()
        }
        Term::Zero => alg.zero(),
        Term::One => alg.one(),
        Term::Diag(i, j) => alg.diagonal(*i, *j)?,
        Term::Not(t) => eval_term(alg, t, env)?.complement(),
        Term::And(a, b) => eval_term(alg, a, env)?.intersection(&eval_term(alg, b, env)?),
        Term::Or(a, b) => eval_term(alg, a, env)?.union(&eval_term(alg, b, env)?),
        Term::Apply(op, t) => alg.apply(*op, &eval_term(alg, t, env)?)?,
    })
}

/// Parses terms such as `x ∧ ¬x`, `c_0(d_{01})` or `s_{[0,1]}(s_{[0,1]}(x))`.
///
/// Precedence from loosest: `∨`/`|`/`+`, then `∧`/`&`/`*`/`·`, then prefix
/// `¬`/`~`/`!`/`-`. Diagonal indices are single digits unless separated by a comma.
pub fn parse_term(input: &str) -> Result<Term, BaoError> {
    let mut p = Parser { chars: input.chars().collect(), pos: 0 };
    let t = p.disjunction()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, what: &str) -> BaoError {
        BaoError::Parse(format!("{what} at character {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, options: &[char]) -> bool {
        match self.peek() {
            Some(c) if options.contains(&c) => {
                self.pos += 1;
                true
            }
            _ => false,
        }
    }

    fn disjunction(&mut self) -> Result<Term, BaoError> {
        let mut t = self.conjunction()?;
        while self.eat(&['∨', '|', '+']) {
            t = Term::Or(Box::new(t), Box::new(self.conjunction()?));
        }
        Ok(t)
    }

    fn conjunction(&mut self) -> Result<Term, BaoError> {
        let mut t = self.unary()?;
        while self.eat(&['∧', '&', '*', '·']) {
            t = Term::And(Box::new(t), Box::new(self.unary()?));
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, BaoError> {
        if self.eat(&['¬', '~', '!', '-']) {
            return Ok(Term::Not(Box::new(self.unary()?)));
        }
        if self.eat(&['(']) {
            let t = self.disjunction()?;
            if !self.eat(&[')']) {
                return Err(self.error("expected `)`"));
            }
            return Ok(t);
        }
        let word = self.word()?;
        if self.eat(&['(']) {
            let op: Operator = word.parse()?;
            let arg = self.disjunction()?;
            if !self.eat(&[')']) {
                return Err(self.error("expected `)`"));
            }
            return Ok(Term::Apply(op, Box::new(arg)));
        }
        match word.as_str() {
            "0" => return Ok(Term::Zero),
            "1" => return Ok(Term::One),
            _ => {}
        }
        if let Some(d) = diagonal(&word) {
            return Ok(d);
        }
        if word.chars().next().is_some_and(|c| c.is_alphabetic()) {
            Ok(Term::Var(word))
        } else {
            Err(BaoError::Parse(format!("`{word}` is not a term")))
        }
    }

    /// A name possibly carrying `_`, `^` and balanced `{..}` / `[..]` groups.
    fn word(&mut self) -> Result<String, BaoError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(&c) = self.chars.get(self.pos) {
            match c {
                '{' | '[' => depth += 1,
                '}' | ']' if depth > 0 => depth -= 1,
                ',' if depth > 0 => {}
                c if c.is_alphanumeric() || c == '_' || c == '^' || c == '\'' => {}
                _ => break,
            }
            self.pos += 1;
        }
        if depth != 0 {
            return Err(self.error("unbalanced brackets"));
        }
        if self.pos == start {
            return Err(self.error("expected a term"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

fn diagonal(word: &str) -> Option<Term> {
    let rest = word.strip_prefix('d')?;
    let compact: String = rest.chars().filter(|c| !matches!(c, '_' | '{' | '}')).collect();
    let (i, j) = match compact.split_once(',') {
        Some((i, j)) => (i.parse().ok()?, j.parse().ok()?),
        None => {
            let digits: Vec<u32> = compact.chars().map(|c| c.to_digit(10)).collect::<Option<_>>()?;
            match digits[..] {
                [i, j] => (i as usize, j as usize),
                _ => return None,
            }
        }
    };
    Some(Term::Diag(i, j))
}
