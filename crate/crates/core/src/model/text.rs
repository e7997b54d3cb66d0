//! Model text format.
//!
//! ```text
//! model  := term ('+' term)* '+' 'xi' | 'xi'
//! term   := coeff ('*' factor)*
//! coeff  := 'c' INT (':' REAL)?
//! factor := ('u' | 'y' | 'xi') '[' '-'? INT ']' ('^' INT)?
//! ```
//!
//! Delays are written as non-positive offsets: `u[0]` is `u_k`, `y[-1]` is
//! `y_{k-1}`.

use std::fmt;
use std::str::FromStr;

use super::error::ModelError;
use super::monomial::{Factor, Mode, Monomial, SignalKind};
use super::narmax::NarmaxModel;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        pos,
        msg: msg.into(),
    }
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ModelError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{}`", s)))
        }
    }

    fn int(&mut self) -> Result<u32, ModelError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(syntax(self.pos, "expected an integer"));
        }
        let value = self.rest()[..len]
            .parse()
            .map_err(|_| syntax(self.pos, "integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn real(&mut self) -> Result<f64, ModelError> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i > s
        };
        if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
            i += 1;
        }
        let mut any = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            any |= digits(&mut i);
        }
        if !any {
            return Err(syntax(self.pos, "expected a number"));
        }
        if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
            let mut j = i + 1;
            if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                j += 1;
            }
            if digits(&mut j) {
                i = j;
            }
        }
        let value: f64 = self.rest()[..i]
            .parse()
            .map_err(|_| syntax(self.pos, "malformed number"))?;
        self.pos += i;
        Ok(value)
    }
}

/// Parses one `coeff ('*' factor)*` term over the named signals.
fn parse_term(
    cur: &mut Cursor<'_>,
    signals: &[(&str, SignalKind)],
) -> Result<Monomial, ModelError> {
    cur.expect("c")?;
    let mut term = Monomial::new(cur.int()?);
    if cur.eat(":") {
        term.coeff_value = Some(cur.real()?);
    }
    while cur.eat("*") {
        cur.skip_ws();
        let pos = cur.pos;
        let signal = signals
            .iter()
            .find(|(name, _)| cur.eat(name))
            .map(|&(_, kind)| kind)
            .ok_or_else(|| syntax(pos, "expected a signal name"))?;
        cur.expect("[")?;
        let negative = cur.eat("-");
        let offset = cur.int()?;
        cur.expect("]")?;
        if !negative && offset != 0 {
            return Err(ModelError::CausalityViolation(format!(
                "{}[{}] refers to the future",
                signal, offset
            )));
        }
        let exponent = if cur.eat("^") {
            let e_pos = cur.pos;
            let e = cur.int()?;
            if e == 0 {
                return Err(syntax(e_pos, "exponents must be at least 1"));
            }
            e
        } else {
            1
        };
        term.multiply(Factor::new(signal, offset), exponent);
    }
    Ok(term)
}

const NARMAX_SIGNALS: [(&str, SignalKind); 3] = [
    ("xi", SignalKind::Noise),
    ("u", SignalKind::Input),
    ("y", SignalKind::Output),
];

impl NarmaxModel {
    /// Parses the text format and canonicalizes the result.
    pub fn parse_with_mode(src: &str, mode: Mode) -> Result<NarmaxModel, ModelError> {
        let mut cur = Cursor { src, pos: 0 };
        let mut terms = Vec::new();
        loop {
            cur.skip_ws();
            if cur.rest().starts_with("xi") {
                cur.pos += 2;
                break;
            }
            terms.push(parse_term(&mut cur, &NARMAX_SIGNALS)?);
            cur.expect("+")?;
        }
        if !cur.at_end() {
            return Err(syntax(cur.pos, "trailing input after `xi`"));
        }
        Ok(NarmaxModel::new(terms, mode)?.canonicalize())
    }
}

impl FromStr for NarmaxModel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NarmaxModel::parse_with_mode(s, Mode::Extended)
    }
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    t: &Monomial,
    name_of: impl Fn(SignalKind) -> &'static str,
) -> fmt::Result {
    write!(f, "c{}", t.coeff_id)?;
    if let Some(v) = t.coeff_value {
        write!(f, ":{}", v)?;
    }
    for (factor, e) in t.factors() {
        if factor.delay == 0 {
            write!(f, "*{}[0]", name_of(factor.signal))?;
        } else {
            write!(f, "*{}[-{}]", name_of(factor.signal), factor.delay)?;
        }
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for NarmaxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.terms() {
            write_term(f, t, SignalKind::text_name)?;
            f.write_str(" + ")?;
        }
        f.write_str("xi")
    }
}

/// Free-function form of the parser, in extended mode.
pub fn parse_model_text(s: &str) -> Result<NarmaxModel, ModelError> {
    s.parse()
}

pub fn format_model_text(m: &NarmaxModel) -> String {
    m.to_string()
}
