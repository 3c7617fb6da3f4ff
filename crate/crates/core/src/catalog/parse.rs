//! Parsers for structure equations, K matrices, rational functions of `t`
//! and forms.
//!
//! Algebra grammar (whitespace ignored, `−` accepted for `-`):
//!
//! ```text
//! algebra := "(" entry ("," entry)* ")" | entry ("," entry)*
//! entry   := "0" | "0^" uint | term (("+" | "-") term)*
//! term    := ["+" | "-"] [rational "*"] digit digit
//! ```

use super::CatalogError;
use crate::exterior::Form;
use crate::lie::{LieAlgebra, LieError, MAX_DIM};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, Field, Polynomial, Rational, RationalFunction};

struct Cursor {
    chars: Vec<(usize, char)>,
    i: usize,
    len: usize,
}

impl Cursor {
    fn new(s: &str) -> Self {
        // superscript runs become "^digits"
        let mut chars = Vec::new();
        let mut in_sup = false;
        for (i, c) in s.chars().enumerate().filter(|(_, c)| !c.is_whitespace()) {
            let sup = "⁰¹²³⁴⁵⁶⁷⁸⁹".contains(c);
            if sup && !in_sup {
                chars.push((i, '^'));
            }
            in_sup = sup;
            chars.push((i, normalize(c)));
        }
        Cursor {
            chars,
            i: 0,
            len: s.chars().count(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.len, |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.i += 1;
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.chars.len()
    }

    fn err(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn digits(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            out.push(c);
            self.i += 1;
        }
        out
    }

    /// `uint ["/" uint]`.
    fn rational(&mut self) -> Result<Rational, CatalogError> {
        let start = self.pos();
        let num = self.digits();
        if num.is_empty() {
            return Err(self.err("expected a number"));
        }
        let mut text = num;
        if self.peek() == Some('/') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
            text.push('/');
            text.push_str(&self.digits());
        }
        parse_rational(&text).ok_or_else(|| CatalogError::Parse {
            pos: start,
            msg: format!("invalid rational '{text}'"),
        })
    }
}

fn normalize(c: char) -> char {
    match c {
        '−' | '–' => '-',
        '⁰' => '0',
        '¹' => '1',
        '²' => '2',
        '³' => '3',
        '⁴' => '4',
        '⁵' => '5',
        '⁶' => '6',
        '⁷' => '7',
        '⁸' => '8',
        '⁹' => '9',
        c => c,
    }
}

/// Structure equations in compact notation, e.g. `(0^4, 12, 13)`.
pub fn parse_algebra(s: &str) -> Result<LieAlgebra, CatalogError> {
    let raw = parse_algebra_entries(s)?;
    let n = raw.len();
    if n == 0 || n > MAX_DIM {
        return Err(CatalogError::Index {
            pos: 0,
            msg: format!("dimension {n} outside 1..={MAX_DIM}"),
        });
    }
    let mut diffs = Vec::with_capacity(n);
    for terms in raw {
        let mut f = Form::zero(n);
        for (pos, j, k, c) in terms {
            if j >= k {
                return Err(CatalogError::Index {
                    pos,
                    msg: format!("pair {}{} must be increasing", j + 1, k + 1),
                });
            }
            if k >= n {
                return Err(CatalogError::Index {
                    pos,
                    msg: format!("index {} exceeds dimension {n}", k + 1),
                });
            }
            f.add_term(&[j as u8, k as u8], c);
        }
        diffs.push(f);
    }
    LieAlgebra::new(diffs).map_err(|e| match e {
        LieError::Jacobi { k, witness } => CatalogError::Jacobi { k, witness },
        other => CatalogError::Lie(other),
    })
}

type RawTerm = (usize, usize, usize, Rational);

fn parse_algebra_entries(s: &str) -> Result<Vec<Vec<RawTerm>>, CatalogError> {
    let mut cur = Cursor::new(s);
    let paren = cur.eat('(');
    let mut entries = Vec::new();
    loop {
        parse_entry(&mut cur, &mut entries)?;
        if !cur.eat(',') {
            break;
        }
    }
    if paren && !cur.eat(')') {
        return Err(cur.err("expected ')'"));
    }
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(entries)
}

fn parse_entry(cur: &mut Cursor, out: &mut Vec<Vec<RawTerm>>) -> Result<(), CatalogError> {
    // "0" or "0^k": closed generators
    if cur.peek() == Some('0')
        && !cur
            .peek_at(1)
            .is_some_and(|c| c.is_ascii_digit() || c == '*')
    {
        cur.bump();
        let mut count = 1;
        if cur.eat('^') {
            let d = cur.digits();
            count = d
                .parse()
                .map_err(|_| cur.err("expected exponent after '^'"))?;
        }
        out.extend((0..count).map(|_| Vec::new()));
        return Ok(());
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut neg = false;
        if cur.eat('-') {
            neg = true;
        } else if !cur.eat('+') && !first {
            break;
        }
        first = false;
        let pos = cur.pos();
        // optional "coefficient *"
        let save = cur.i;
        let mut coeff = Rational::from_i64(1);
        if let Ok(c) = cur.rational() {
            if cur.eat('*') {
                coeff = c;
            } else {
                cur.i = save;
            }
        } else {
            cur.i = save;
        }
        let a = cur.bump().filter(char::is_ascii_digit);
        let b = cur.bump().filter(char::is_ascii_digit);
        let (Some(a), Some(b)) = (a, b) else {
            return Err(CatalogError::Parse {
                pos,
                msg: "expected a digit pair such as 12".into(),
            });
        };
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(cur.err("a term is exactly two digits"));
        }
        let (j, k) = (a as usize - '0' as usize, b as usize - '0' as usize);
        if j == 0 || k == 0 {
            return Err(CatalogError::Index {
                pos,
                msg: "indices start at 1".into(),
            });
        }
        if coeff.is_zero() {
            continue;
        }
        terms.push((pos, j - 1, k - 1, if neg { -coeff } else { coeff }));
        if !matches!(cur.peek(), Some('+') | Some('-')) {
            break;
        }
    }
    out.push(terms);
    Ok(())
}

/// A raw K: either a sign string or an explicit matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum KSpec {
    Signs(Vec<bool>),
    Matrix(Matrix<Rational>),
}

impl KSpec {
    pub fn into_matrix(self) -> Matrix<Rational> {
        match self {
            KSpec::Signs(s) => crate::paracomplex::diagonal_k(&s),
            KSpec::Matrix(m) => m,
        }
    }
}

fn is_sign_string(s: &str) -> bool {
    let mut any = false;
    for c in s.chars().map(normalize) {
        match c {
            '+' | '-' => any = true,
            '(' | ')' | ',' => {}
            c if c.is_whitespace() => {}
            _ => return false,
        }
    }
    any
}

/// `"(-,+,+,-)"`, `"(- + + -)"` or `"a,b;c,d"` with rational entries.
pub fn parse_k(s: &str) -> Result<KSpec, CatalogError> {
    if is_sign_string(s) {
        let signs = s
            .chars()
            .map(normalize)
            .filter_map(|c| match c {
                '+' => Some(true),
                '-' => Some(false),
                _ => None,
            })
            .collect();
        return Ok(KSpec::Signs(signs));
    }
    let entries = parse_matrix_with(s, |text, offset| {
        let mut cur = Cursor::new(text);
        let neg = cur.eat('-');
        if !neg {
            cur.eat('+');
        }
        let r = cur.rational().map_err(|e| shift(e, offset))?;
        if !cur.at_end() {
            return Err(shift(cur.err("unexpected input in matrix entry"), offset));
        }
        Ok(if neg { -r } else { r })
    })?;
    Ok(KSpec::Matrix(entries))
}

/// Parses `K` and checks its size against `n`.
pub fn parse_k_for(s: &str, n: usize) -> Result<Matrix<Rational>, CatalogError> {
    let m = parse_k(s)?.into_matrix();
    if m.rows() != n || m.cols() != n {
        return Err(CatalogError::Length {
            expected: n,
            got: m.rows(),
        });
    }
    Ok(m)
}

/// Matrix of rational functions of `t`, rows separated by `;`.
pub fn parse_family_matrix(s: &str) -> Result<Matrix<RationalFunction>, CatalogError> {
    parse_matrix_with(s, |text, offset| {
        parse_rational_function(text).map_err(|e| shift(e, offset))
    })
}

fn shift(e: CatalogError, offset: usize) -> CatalogError {
    match e {
        CatalogError::Parse { pos, msg } => CatalogError::Parse {
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

fn parse_matrix_with<F: Field>(
    s: &str,
    entry: impl Fn(&str, usize) -> Result<F, CatalogError>,
) -> Result<Matrix<F>, CatalogError> {
    let trimmed = s.trim();
    let (body, base) = match trimmed.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        Some(b) => (b, s.find('[').unwrap_or(0) + 1),
        None => (trimmed, s.len() - s.trim_start().len()),
    };
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut offset = base;
    for row_text in body.split(';') {
        let mut row = Vec::new();
        let mut col_offset = offset;
        for cell in row_text.split(',') {
            if cell.trim().is_empty() {
                return Err(CatalogError::Parse {
                    pos: col_offset,
                    msg: "empty matrix entry".into(),
                });
            }
            row.push(entry(cell, col_offset)?);
            col_offset += cell.chars().count() + 1;
        }
        offset += row_text.chars().count() + 1;
        rows.push(row);
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CatalogError::Parse {
            pos: base,
            msg: "rows have different lengths".into(),
        });
    }
    Ok(Matrix::from_rows(cols, rows))
}

/// Rational function of `t`: `+ - * / ^`, parentheses, integers, `t`.
/// Juxtaposition multiplies (`2t`).
pub fn parse_rational_function(s: &str) -> Result<RationalFunction, CatalogError> {
    let mut cur = Cursor::new(s);
    let v = rf_expr(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(v)
}

fn rf_expr(cur: &mut Cursor) -> Result<RationalFunction, CatalogError> {
    let mut acc = rf_term(cur)?;
    loop {
        if cur.eat('+') {
            acc = acc + rf_term(cur)?;
        } else if cur.eat('-') {
            acc = acc - rf_term(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn rf_term(cur: &mut Cursor) -> Result<RationalFunction, CatalogError> {
    let mut acc = rf_unary(cur)?;
    loop {
        if cur.eat('*') {
            acc = acc * rf_unary(cur)?;
        } else if cur.peek() == Some('/') {
            let pos = cur.pos();
            cur.bump();
            let d = rf_unary(cur)?;
            let inv = d.inv().ok_or(CatalogError::Parse {
                pos,
                msg: "division by zero".into(),
            })?;
            acc = acc * inv;
        } else if matches!(cur.peek(), Some('t') | Some('('))
            || cur.peek().is_some_and(|c| c.is_ascii_digit())
        {
            acc = acc * rf_power(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn rf_unary(cur: &mut Cursor) -> Result<RationalFunction, CatalogError> {
    if cur.eat('-') {
        return Ok(-rf_unary(cur)?);
    }
    if cur.eat('+') {
        return rf_unary(cur);
    }
    rf_power(cur)
}

fn rf_power(cur: &mut Cursor) -> Result<RationalFunction, CatalogError> {
    let base = rf_atom(cur)?;
    if cur.eat('^') {
        let d = cur.digits();
        let e: u32 = d
            .parse()
            .map_err(|_| cur.err("expected exponent after '^'"))?;
        return Ok(base.pow(e));
    }
    Ok(base)
}

fn rf_atom(cur: &mut Cursor) -> Result<RationalFunction, CatalogError> {
    match cur.peek() {
        Some('t') => {
            cur.bump();
            Ok(RationalFunction::t())
        }
        Some('(') => {
            cur.bump();
            let v = rf_expr(cur)?;
            if !cur.eat(')') {
                return Err(cur.err("expected ')'"));
            }
            Ok(v)
        }
        Some(c) if c.is_ascii_digit() => {
            let d = cur.digits();
            let r = parse_rational(&d).ok_or_else(|| cur.err("invalid number"))?;
            Ok(RationalFunction::from_poly(Polynomial::constant(r)))
        }
        _ => Err(cur.err("expected a number, 't' or '('")),
    }
}

/// Forms as rendered in reports: `e14 + 2*e23 - 1/2*e56`, or `0`.
pub fn parse_form(s: &str, n: usize) -> Result<Form<Rational>, CatalogError> {
    let mut cur = Cursor::new(s);
    let mut out = Form::zero(n);
    if cur.peek() == Some('0') && cur.peek_at(1).is_none() {
        return Ok(out);
    }
    let mut first = true;
    while !cur.at_end() {
        let mut neg = false;
        if cur.eat('-') {
            neg = true;
        } else if !cur.eat('+') && !first {
            return Err(cur.err("expected '+' or '-'"));
        }
        first = false;
        let mut coeff = Rational::from_i64(1);
        let mut mono = Vec::new();
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = cur.rational()?;
            if !cur.eat('*') {
                // constant term
                out.add_term(&[], if neg { -coeff } else { coeff });
                continue;
            }
        }
        let pos = cur.pos();
        if !cur.eat('e') {
            return Err(cur.err("expected 'e'"));
        }
        let digits = cur.digits();
        if digits.is_empty() {
            return Err(cur.err("expected indices after 'e'"));
        }
        for ch in digits.chars() {
            let i = ch as usize - '0' as usize;
            if i == 0 || i > n {
                return Err(CatalogError::Index {
                    pos,
                    msg: format!("index {i} outside 1..={n}"),
                });
            }
            mono.push((i - 1) as u8);
        }
        out.add_term(&mono, if neg { -coeff } else { coeff });
    }
    Ok(out)
}
