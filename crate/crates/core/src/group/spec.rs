use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::MAX_ORDER;

/// A named finite group family with its parameter.
///
/// Textual form is `family:int`, or `prod:spec+spec+...` for direct
/// products (nested products are not accepted inside a `prod`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GroupSpec {
    Cyclic(u64),
    Dihedral(u64),
    Sym(u64),
    Alt(u64),
    Sl2(u64),
    Psl2(u64),
    Prod(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::Dihedral(_) => "dihedral",
            GroupSpec::Sym(_) => "sym",
            GroupSpec::Alt(_) => "alt",
            GroupSpec::Sl2(_) => "sl2",
            GroupSpec::Psl2(_) => "psl2",
            GroupSpec::Prod(_) => "prod",
        }
    }

    /// Group order implied by the spec, saturating on overflow.
    pub fn order(&self) -> u64 {
        match *self {
            GroupSpec::Cyclic(n) => n,
            GroupSpec::Dihedral(n) => n.saturating_mul(2),
            GroupSpec::Sym(n) => factorial(n),
            GroupSpec::Alt(n) => factorial(n) / 2,
            GroupSpec::Sl2(p) => sl2_order(p),
            GroupSpec::Psl2(p) => sl2_order(p) / 2,
            GroupSpec::Prod(ref parts) => parts
                .iter()
                .fold(1u64, |acc, s| acc.saturating_mul(s.order())),
        }
    }

    /// Check the per-family guards.
    pub fn validate(&self) -> Result<()> {
        let max = MAX_ORDER as u64;
        match *self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) => {
                if n < 2 {
                    return Err(Error::OutOfRange(format!(
                        "{} requires n >= 2, got {n}",
                        self.family()
                    )));
                }
                if self.order() > max {
                    return Err(Error::TooLarge { limit: MAX_ORDER });
                }
            }
            GroupSpec::Sym(n) | GroupSpec::Alt(n) => {
                if !(3..=8).contains(&n) {
                    return Err(Error::OutOfRange(format!(
                        "{} requires 3 <= n <= 8, got {n}",
                        self.family()
                    )));
                }
            }
            GroupSpec::Sl2(p) | GroupSpec::Psl2(p) => {
                if p < 3 || !is_prime(p) {
                    return Err(Error::NotOddPrime(p));
                }
                if sl2_order(p) > max {
                    return Err(Error::OutOfRange(format!(
                        "{} requires p(p^2-1) <= {MAX_ORDER}, got p = {p}",
                        self.family()
                    )));
                }
            }
            GroupSpec::Prod(ref parts) => {
                if parts.len() < 2 {
                    return Err(Error::OutOfRange(
                        "prod requires at least two factors".into(),
                    ));
                }
                for part in parts {
                    if matches!(part, GroupSpec::Prod(_)) {
                        return Err(Error::OutOfRange("nested prod is not supported".into()));
                    }
                    part.validate()?;
                }
                if self.order() > max {
                    return Err(Error::TooLarge { limit: MAX_ORDER });
                }
            }
        }
        Ok(())
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).fold(1u64, |acc, k| acc.saturating_mul(k))
}

fn sl2_order(p: u64) -> u64 {
    p.saturating_mul(p.saturating_mul(p).saturating_sub(1))
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Prod(parts) => {
                write!(f, "prod:")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
            GroupSpec::Cyclic(n)
            | GroupSpec::Dihedral(n)
            | GroupSpec::Sym(n)
            | GroupSpec::Alt(n)
            | GroupSpec::Sl2(n)
            | GroupSpec::Psl2(n) => write!(f, "{}:{n}", self.family()),
        }
    }
}

impl From<GroupSpec> for String {
    fn from(spec: GroupSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_spec(&s)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

/// Parse and validate a group spec string such as `sl2:7` or
/// `prod:alt:5+cyclic:2`.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let spec = Parser { src: text, pos: 0 }.spec(true)?;
    spec.validate()?;
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn spec(&mut self, top: bool) -> Result<GroupSpec> {
        let start = self.pos;
        let name_len = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric())
            .count();
        if name_len == 0 {
            return self.err("expected family name");
        }
        let name = &self.src[start..start + name_len];
        self.pos += name_len;
        if !self.rest().starts_with(':') {
            return self.err("expected ':'");
        }
        self.pos += 1;

        if name == "prod" {
            if !top {
                return self.err("nested prod is not supported");
            }
            let mut parts = vec![self.spec(false)?];
            while self.rest().starts_with('+') {
                self.pos += 1;
                parts.push(self.spec(false)?);
            }
            if !self.rest().is_empty() {
                return self.err("unexpected trailing input");
            }
            return Ok(GroupSpec::Prod(parts));
        }

        let ctor: fn(u64) -> GroupSpec = match name {
            "cyclic" => GroupSpec::Cyclic,
            "dihedral" => GroupSpec::Dihedral,
            "sym" => GroupSpec::Sym,
            "alt" => GroupSpec::Alt,
            "sl2" => GroupSpec::Sl2,
            "psl2" => GroupSpec::Psl2,
            _ => {
                self.pos = start;
                return self.err(format!("unknown family '{name}'"));
            }
        };

        let mut params = vec![self.int()?];
        while self.rest().starts_with(',') {
            self.pos += 1;
            params.push(self.int()?);
        }
        let terminated = self.rest().is_empty() || (!top && self.rest().starts_with('+'));
        if !terminated {
            return self.err("unexpected trailing input");
        }
        if params.len() != 1 {
            return Err(Error::OutOfRange(format!(
                "{name} takes exactly one parameter, got {}",
                params.len()
            )));
        }
        Ok(ctor(params[0]))
    }

    fn int(&mut self) -> Result<u64> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected integer");
        }
        let digits = &self.src[self.pos..self.pos + len];
        match digits.parse::<u64>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("integer overflow"),
        }
    }
}
