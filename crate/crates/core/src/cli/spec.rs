//! Textual state specifications.
//!
//! ```text
//! fock:<n>
//! coherent:<re>[+/-<im>i]
//! cat:(<c>,<alpha>)[;(<c>,<alpha>)]*
//! thermal:<nbar>
//! gauss:<r>,<phi>,<nbar>[,<alpha>]
//! ```
//!
//! Complex numbers are written `<re>[+/-<im>i]`. Errors carry the byte offset
//! of the first offending character.

use std::fmt;

use crate::error::{Error, Result};
use crate::operator_algebra::C64;
use crate::states::{CatSpec, GaussianParams};

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    Coherent(C64),
    Cat(CatSpec),
    Thermal(f64),
    Gauss(GaussianParams),
}

impl StateSpec {
    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::Fock(_) => "fock",
            StateSpec::Coherent(_) => "coherent",
            StateSpec::Cat(_) => "cat",
            StateSpec::Thermal(_) => "thermal",
            StateSpec::Gauss(_) => "gauss",
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(match self.peek() {
                Some(_) => format!("expected '{}'", b as char),
                None => format!("expected '{}' but input ended", b as char),
            }))
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// `[+-]?(d+(.d*)?|.d+)([eE][+-]?d+)?`
    fn number(&mut self, signed: bool) -> Result<f64> {
        let start = self.pos;
        if signed && matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let mut mantissa = self.digits();
        if self.eat(b'.') {
            mantissa += self.digits();
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = mark + 1;
                return Err(self.error("expected exponent digits"));
            }
        }
        let value: f64 = self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "malformed number"))?;
        if !value.is_finite() {
            return Err(self.error_at(start, "number out of range"));
        }
        Ok(value)
    }

    fn nonnegative(&mut self, what: &str) -> Result<f64> {
        let start = self.pos;
        let value = self.number(true)?;
        if value < 0.0 {
            return Err(self.error_at(start, format!("{what} must be >= 0")));
        }
        Ok(value)
    }

    fn complex(&mut self) -> Result<C64> {
        let re = self.number(true)?;
        let sign = match self.peek() {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => return Ok(C64::new(re, 0.0)),
        };
        self.pos += 1;
        let im = self.number(false)?;
        self.expect(b'i')?;
        Ok(C64::new(re, sign * im))
    }

    fn count(&mut self) -> Result<usize> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            return Err(self.error("photon number must be >= 0"));
        }
        if self.digits() == 0 {
            return Err(self.error("expected a photon number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error_at(start, "photon number out of range"))
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.text.len() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let mut cur = Cursor { text, pos: 0 };
    let name_len = text.bytes().take_while(|b| b.is_ascii_alphabetic()).count();
    let family = &text[..name_len];
    cur.pos = name_len;
    if !matches!(family, "fock" | "coherent" | "cat" | "thermal" | "gauss") {
        return Err(cur.error_at(0, format!("unknown state family '{family}'")));
    }
    cur.expect(b':')?;

    let spec = match family {
        "fock" => StateSpec::Fock(cur.count()?),
        "coherent" => StateSpec::Coherent(cur.complex()?),
        "thermal" => StateSpec::Thermal(cur.nonnegative("thermal occupation")?),
        "cat" => {
            let mut components = Vec::new();
            loop {
                cur.expect(b'(')?;
                let c = cur.complex()?;
                cur.expect(b',')?;
                let alpha = cur.complex()?;
                cur.expect(b')')?;
                components.push((c, alpha));
                if !cur.eat(b';') {
                    break;
                }
            }
            StateSpec::Cat(CatSpec::new(components).map_err(|e| cur.error_at(4, e.to_string()))?)
        }
        _ => {
            let r = cur.nonnegative("squeezing r")?;
            cur.expect(b',')?;
            let phi = cur.number(true)?;
            cur.expect(b',')?;
            let nbar = cur.nonnegative("thermal occupation")?;
            let alpha = if cur.eat(b',') {
                cur.complex()?
            } else {
                C64::new(0.0, 0.0)
            };
            let params = GaussianParams::new(alpha, r, phi, nbar)
                .map_err(|e| cur.error_at(6, e.to_string()))?;
            StateSpec::Gauss(params)
        }
    };
    cur.finish()?;
    Ok(spec)
}

struct Complex(C64);

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        write!(f, "{}", z.re)?;
        if z.im != 0.0 {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            write!(f, "{sign}{}i", z.im.abs())?;
        }
        Ok(())
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Coherent(a) => write!(f, "coherent:{}", Complex(*a)),
            StateSpec::Thermal(n) => write!(f, "thermal:{n}"),
            StateSpec::Cat(spec) => {
                write!(f, "cat:")?;
                for (k, (c, a)) in spec.components().iter().enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "({},{})", Complex(*c), Complex(*a))?;
                }
                Ok(())
            }
            StateSpec::Gauss(p) => {
                write!(f, "gauss:{},{},{}", p.r(), p.phi(), p.nbar())?;
                if p.alpha() != C64::new(0.0, 0.0) {
                    write!(f, ",{}", Complex(p.alpha()))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn offset(text: &str) -> usize {
        match parse_state_spec(text) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{text}: expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_state_spec("fock:3").unwrap(), StateSpec::Fock(3));
        assert_eq!(
            parse_state_spec("cat:(1,3);(1,-3)").unwrap(),
            StateSpec::Cat(CatSpec::even(c(3.0, 0.0)))
        );
        assert_eq!(
            parse_state_spec("coherent:1.5+0.5i").unwrap(),
            StateSpec::Coherent(c(1.5, 0.5))
        );
        assert_eq!(parse_state_spec("thermal:0.5").unwrap(), StateSpec::Thermal(0.5));
        assert_eq!(
            parse_state_spec("gauss:0.3,1.2,0.1,2-1e-1i").unwrap(),
            StateSpec::Gauss(GaussianParams::new(c(2.0, -0.1), 0.3, 1.2, 0.1).unwrap())
        );
        assert_eq!(
            parse_state_spec("coherent:-2.5e-1-.5i").unwrap(),
            StateSpec::Coherent(c(-0.25, -0.5))
        );
    }

    #[test]
    fn error_offsets() {
        assert_eq!(offset("squeezed:1"), 0);
        assert_eq!(offset("fock3"), 4);
        assert_eq!(offset("fock:"), 5);
        assert_eq!(offset("fock:-1"), 5);
        assert_eq!(offset("fock:2x"), 6);
        assert_eq!(offset("coherent:1+2"), 12);
        assert_eq!(offset("coherent:1e"), 11);
        assert_eq!(offset("thermal:-0.5"), 8);
        assert_eq!(offset("cat:(1,3);"), 10);
        assert_eq!(offset("cat:(1,3"), 8);
        assert_eq!(offset("gauss:0.1,0"), 11);
        assert_eq!(offset("gauss:-0.1,0,0"), 6);
        assert_eq!(offset("gauss:0.1,0,-1"), 12);
        assert_eq!(offset("coherent:1e999"), 9);
    }

    #[test]
    fn display_examples() {
        assert_eq!(parse_state_spec("cat:(1,3);(1,-3)").unwrap().to_string(), "cat:(1,3);(1,-3)");
        assert_eq!(parse_state_spec("coherent:1.5-0.5i").unwrap().to_string(), "coherent:1.5-0.5i");
        assert_eq!(parse_state_spec("gauss:0.1,0,0").unwrap().to_string(), "gauss:0.1,0,0");
    }

    fn arb_real() -> impl Strategy<Value = f64> {
        prop_oneof![-1e3f64..1e3, Just(0.0), (-300i32..300).prop_map(|e| 10f64.powi(e))]
    }

    fn arb_complex() -> impl Strategy<Value = C64> {
        (arb_real(), arb_real()).prop_map(|(re, im)| C64::new(re, im))
    }

    fn arb_spec() -> impl Strategy<Value = StateSpec> {
        prop_oneof![
            (0usize..1000).prop_map(StateSpec::Fock),
            arb_complex().prop_map(StateSpec::Coherent),
            (0.0f64..50.0).prop_map(StateSpec::Thermal),
            prop::collection::vec((arb_complex(), arb_complex()), 1..5)
                .prop_map(|v| StateSpec::Cat(CatSpec::new(v).unwrap())),
            (0.0f64..3.0, -10.0f64..10.0, 0.0f64..5.0, arb_complex()).prop_map(|(r, phi, n, a)| {
                StateSpec::Gauss(GaussianParams::new(a, r, phi, n).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn formatting_round_trips(spec in arb_spec()) {
            let text = spec.to_string();
            prop_assert_eq!(parse_state_spec(&text).unwrap(), spec);
        }

        #[test]
        fn parse_is_total(text in "[a-z:()0-9.,;+eEi-]{0,24}") {
            match parse_state_spec(&text) {
                Ok(spec) => prop_assert_eq!(parse_state_spec(&spec.to_string()).unwrap(), spec),
                Err(Error::Parse { offset, .. }) => prop_assert!(offset <= text.len()),
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }
    }
}
