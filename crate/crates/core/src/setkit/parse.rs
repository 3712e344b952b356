use std::collections::BTreeMap;

use super::{GridSet, SetError, Subset, UpSet};

/// Parses `up:pre=<bits>;per=<bits>` or
/// `grid:cols=<up>;def=<up>;out=<up>[;cls=<up>/<up>,..][;ovr=<idx>:<up>,..]`.
///
/// A few names are accepted as shorthand: `omega`, `empty`, `evens`,
/// `odds`, `tailN` (`[N, ∞)`), `multN` (multiples of N).
pub fn parse_set(text: &str) -> Result<Subset, SetError> {
    let mut p = Parser { src: text, pos: 0 };
    let out = p.subset()?;
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SetError {
        SetError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), SetError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{lit}`")))
        }
    }

    fn bits(&mut self) -> Vec<bool> {
        let mut out = Vec::new();
        while let Some(c) = self.rest().chars().next() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => break,
            }
            self.pos += 1;
        }
        out
    }

    fn number(&mut self) -> Result<u64, SetError> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        let v = digits.parse().map_err(|_| self.err("number out of range"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn subset(&mut self) -> Result<Subset, SetError> {
        if self.rest().starts_with("grid:") {
            self.grid().map(Subset::Grid)
        } else {
            self.up().map(Subset::Up)
        }
    }

    fn up(&mut self) -> Result<UpSet, SetError> {
        if self.eat("up:") {
            self.expect("pre=")?;
            let prefix = self.bits();
            self.expect(";per=")?;
            let at = self.pos;
            let period = self.bits();
            if period.is_empty() {
                self.pos = at;
                return Err(SetError::EmptyPeriod);
            }
            return UpSet::new(prefix, period);
        }
        for (name, set) in [
            ("omega", UpSet::omega()),
            ("empty", UpSet::empty()),
            ("evens", UpSet::evens()),
            ("odds", UpSet::odds()),
        ] {
            if self.eat(name) {
                return Ok(set);
            }
        }
        if self.eat("tail") {
            return Ok(UpSet::tail(self.number()?));
        }
        if self.eat("mult") {
            let m = self.number()?;
            if m == 0 {
                return Err(self.err("modulus must be positive"));
            }
            return Ok(UpSet::multiples(m));
        }
        Err(self.err("expected a set descriptor"))
    }

    fn grid(&mut self) -> Result<GridSet, SetError> {
        self.expect("grid:cols=")?;
        let cols = self.up()?;
        self.expect(";def=")?;
        let def = self.up()?;
        self.expect(";out=")?;
        let out = self.up()?;
        let mut parts = vec![(cols, def)];
        let mut extra = Vec::new();
        if self.eat(";cls=") {
            loop {
                let c = self.up()?;
                self.expect("/")?;
                let x = self.up()?;
                extra.push((c, x));
                if !self.eat(",") {
                    break;
                }
            }
        }
        let mut overrides = BTreeMap::new();
        if self.eat(";ovr=") {
            loop {
                let k = self.number()?;
                self.expect(":")?;
                let v = self.up()?;
                if overrides.insert(k, v).is_some() {
                    return Err(self.err("duplicate override index"));
                }
                if !self.eat(",") {
                    break;
                }
            }
        }
        parts.extend(extra);
        parts.push((UpSet::omega(), out));
        Ok(GridSet::from_parts(parts, overrides))
    }
}
