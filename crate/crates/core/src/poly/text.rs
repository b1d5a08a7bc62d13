use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Monomial, Poly};
use crate::error::{Error, Result};
use crate::gf::Field;

/// How global variable indices map to printed names: consecutive groups
/// such as x1..x4 followed by z1..z6.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarLayout {
    groups: Vec<(char, usize)>,
}

impl VarLayout {
    pub fn new(groups: Vec<(char, usize)>) -> Result<Self> {
        for (i, (c, _)) in groups.iter().enumerate() {
            if !matches!(c, 'x' | 'y' | 'z') {
                return Err(Error::OutOfRange(format!("variable prefix '{c}'")));
            }
            if groups[..i].iter().any(|(d, _)| d == c) {
                return Err(Error::OutOfRange(format!("prefix '{c}' used twice")));
            }
        }
        Ok(VarLayout { groups })
    }

    pub fn x(n: usize) -> Self {
        VarLayout { groups: vec![('x', n)] }
    }

    pub fn y(n: usize) -> Self {
        VarLayout { groups: vec![('y', n)] }
    }

    /// n variables named x1..xn then m named `second`1..`second`m.
    pub fn pair(n: usize, second: char, m: usize) -> Self {
        VarLayout {
            groups: vec![('x', n), (second, m)],
        }
    }

    pub fn groups(&self) -> &[(char, usize)] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self, mut i: usize) -> String {
        for &(c, n) in &self.groups {
            if i < n {
                return format!("{c}{}", i + 1);
            }
            i -= n;
        }
        format!("v{}", i + 1)
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.name(i)).collect()
    }

    /// Global index of a prefixed 1-based variable name.
    pub fn index(&self, prefix: char, one_based: usize) -> Option<usize> {
        let mut offset = 0;
        for &(c, n) in &self.groups {
            if c == prefix {
                return (one_based >= 1 && one_based <= n).then(|| offset + one_based - 1);
            }
            offset += n;
        }
        None
    }

    /// Layout covering every variable mentioned in `texts`, groups in x, y, z order.
    pub fn infer<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut max = [0usize; 3];
        for text in texts {
            let bytes = text.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                let slot = match bytes[i] {
                    b'x' => Some(0),
                    b'y' => Some(1),
                    b'z' => Some(2),
                    _ => None,
                };
                i += 1;
                if let Some(slot) = slot {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if let Ok(idx) = text[start..i].parse::<usize>() {
                        max[slot] = max[slot].max(idx);
                    }
                }
            }
        }
        let groups = ['x', 'y', 'z'].into_iter().zip(max).filter(|&(_, n)| n > 0).collect();
        VarLayout { groups }
    }

    /// Parses the compact form `x4,z6`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(VarLayout { groups: Vec::new() });
        }
        let groups = s
            .split(',')
            .map(|g| {
                let g = g.trim();
                let mut chars = g.chars();
                let c = chars.next().ok_or_else(|| Error::parse(1, 1, "empty layout group"))?;
                let n = chars
                    .as_str()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(1, 1, format!("bad layout group '{g}'")))?;
                Ok((c, n))
            })
            .collect::<Result<Vec<_>>>()?;
        VarLayout::new(groups)
    }
}

impl std::fmt::Display for VarLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|(c, n)| format!("{c}{n}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl Poly {
    /// Canonical text: terms in descending grlex order, coefficient always
    /// printed, `^e` only for e > 1.
    pub fn to_text(&self, layout: &VarLayout) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&self.field.format_elem(c));
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        let _ = write!(out, "*{}", layout.name(v));
                    }
                    _ => {
                        let _ = write!(out, "*{}^{e}", layout.name(v));
                    }
                }
            }
        }
        out
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.text[..self.pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        Error::parse(line, column, message)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("number does not fit in 64 bits"))
    }
}

/// Parses `term (("+"|"-") term)*` where a term is a `*`-product of
/// coefficients (decimal or `[c0,c1,...]`) and powers `x3^2`.
pub fn parse_poly(field: &Arc<Field>, layout: &VarLayout, text: &str) -> Result<Poly> {
    let n = layout.len();
    let mut parser = Parser { text, pos: 0 };
    let mut out = Poly::zero(field, n);
    parser.skip_ws();
    if parser.text.trim() == "0" {
        return Ok(out);
    }
    let mut negate = parser.eat('-');
    loop {
        let mut coeff = field.one();
        let mut exps = vec![0u32; n];
        loop {
            parser.skip_ws();
            match parser.peek() {
                Some('[') => {
                    let start = parser.pos;
                    let end = parser.text[start..]
                        .find(']')
                        .map(|i| start + i + 1)
                        .ok_or_else(|| parser.error("unterminated coefficient vector"))?;
                    let elem = field
                        .parse_elem(&parser.text[start..end])
                        .map_err(|_| parser.error("bad coefficient vector"))?;
                    coeff = field.mul(&coeff, &elem);
                    parser.pos = end;
                }
                Some(c) if c.is_ascii_digit() => {
                    let v = parser.number()?;
                    coeff = field.mul(&coeff, &field.from_u64(v));
                }
                Some(c @ ('x' | 'y' | 'z')) => {
                    parser.pos += 1;
                    let at = parser.pos;
                    let idx = parser.number()? as usize;
                    let var = layout.index(c, idx).ok_or_else(|| {
                        parser.pos = at - 1;
                        parser.error(format!("variable {c}{idx} is not in layout {layout}"))
                    })?;
                    let e = if parser.eat('^') {
                        u32::try_from(parser.number()?).map_err(|_| parser.error("exponent too large"))?
                    } else {
                        1
                    };
                    exps[var] += e;
                }
                _ => return Err(parser.error("expected a coefficient or a variable")),
            }
            if !parser.eat('*') {
                break;
            }
        }
        if negate {
            coeff = field.neg(&coeff);
        }
        out.add_term(Monomial::from_exponents(&exps), &coeff);
        parser.skip_ws();
        if parser.eat('+') {
            negate = false;
        } else if parser.eat('-') {
            negate = true;
        } else if parser.pos == parser.text.len() {
            return Ok(out);
        } else {
            return Err(parser.error("expected '+', '-' or end of input"));
        }
    }
}
