//! Text syntax for solid expressions.
//!
//! ```text
//! sum     := tensor ("(+)" tensor)*
//! tensor  := postfix ("(x)" postfix)*
//! postfix := primary ("[" int "]")*
//! primary := "(" sum ")" | "Dual(" sum ")" | atom
//! atom    := "Zp(" p ")" ["[[" vars "]]"] | "PS(" vars ")" | "Prod(" index ")"
//!          | "Laurent(" name ")" | "R" | "0" | "1" | "Z"
//! index   := factor ("*" factor)* ("+" ...)*, factor := name | int | "(" index ")"
//! ```

use super::expr::{Atom, IndexSet, SolidExpr};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

pub fn parse_expr(src: &str) -> Result<SolidExpr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.sum()?;
    p.ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    e.validate()?;
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| !(c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(r.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(r[..len].to_string())
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let r = self.rest();
        let sign = usize::from(r.starts_with('-'));
        let digits = r[sign..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = r[..sign + digits]
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        self.pos += sign + digits;
        Ok(v)
    }

    fn unsigned(&mut self) -> Result<u64> {
        let v = self.int()?;
        u64::try_from(v).map_err(|_| self.err("expected a nonnegative integer"))
    }

    fn sum(&mut self) -> Result<SolidExpr> {
        let mut parts = vec![self.tensor()?];
        while self.eat("(+)") {
            parts.push(self.tensor()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SolidExpr::Sum(parts)
        })
    }

    fn tensor(&mut self) -> Result<SolidExpr> {
        let mut parts = vec![self.postfix()?];
        while self.eat("(x)") {
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SolidExpr::Tensor(parts)
        })
    }

    fn postfix(&mut self) -> Result<SolidExpr> {
        let mut e = self.primary()?;
        loop {
            self.ws();
            if self.rest().starts_with('[') && !self.rest().starts_with("[[") {
                self.pos += 1;
                let k = self.int()?;
                self.expect("]")?;
                e = SolidExpr::shift(k, e);
            } else {
                return Ok(e);
            }
        }
    }

    fn vars(&mut self) -> Result<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.eat(",") {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn primary(&mut self) -> Result<SolidExpr> {
        self.ws();
        if self.eat("(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(e);
        }
        let r = self.rest();
        if r.starts_with('0') || r.starts_with('1') {
            let v = self.unsigned()?;
            return match v {
                0 => Ok(SolidExpr::zero()),
                1 => Ok(SolidExpr::unit()),
                _ => Err(self.err("only 0 and 1 are numeric atoms")),
            };
        }
        let start = self.pos;
        let name = self.ident()?;
        let atom = match name.as_str() {
            "R" => Atom::Real,
            "Z" => Atom::Unit,
            "Zp" => {
                self.expect("(")?;
                let p = self.unsigned()?;
                self.expect(")")?;
                self.ws();
                if self.rest().starts_with("[[") {
                    self.pos += 2;
                    let v = self.vars()?;
                    self.expect("]]")?;
                    Atom::AdicSeries(p, v)
                } else {
                    Atom::PAdic(p)
                }
            }
            "PS" => {
                self.expect("(")?;
                let v = self.vars()?;
                self.expect(")")?;
                Atom::PowerSeries(v)
            }
            "Laurent" => {
                self.expect("(")?;
                let v = self.ident()?;
                self.expect(")")?;
                Atom::LaurentBoundary(v)
            }
            "Prod" => {
                self.expect("(")?;
                let i = self.index()?;
                self.expect(")")?;
                Atom::ProdZ(i)
            }
            "Dual" => {
                self.expect("(")?;
                let e = self.sum()?;
                self.expect(")")?;
                return Ok(SolidExpr::dual(e));
            }
            _ => {
                self.pos = start;
                return Err(self.err(&format!("unknown atom `{name}`")));
            }
        };
        Ok(SolidExpr::Atom(atom))
    }

    fn index(&mut self) -> Result<IndexSet> {
        let mut terms = vec![self.index_term()?];
        while self.eat("+") {
            terms.push(self.index_term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            IndexSet::Union(terms)
        })
    }

    fn index_term(&mut self) -> Result<IndexSet> {
        let mut factors = vec![self.index_factor()?];
        while self.eat("*") {
            factors.push(self.index_factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            IndexSet::Product(factors)
        })
    }

    fn index_factor(&mut self) -> Result<IndexSet> {
        self.ws();
        if self.eat("(") {
            let i = self.index()?;
            self.expect(")")?;
            return Ok(i);
        }
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return Ok(IndexSet::Finite(self.unsigned()?));
        }
        Ok(IndexSet::Named(self.ident()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        assert_eq!(parse_expr("Zp(5)").unwrap(), SolidExpr::padic(5));
        assert_eq!(parse_expr("PS(T,U)").unwrap(), SolidExpr::power_series(&["T", "U"]));
        assert_eq!(parse_expr("R").unwrap(), SolidExpr::Atom(Atom::Real));
        assert_eq!(
            parse_expr("Zp(3)[[T]]").unwrap(),
            SolidExpr::Atom(Atom::AdicSeries(3, vec!["T".into()]))
        );
        assert_eq!(
            parse_expr("Prod(I*J+3)").unwrap(),
            SolidExpr::Atom(Atom::ProdZ(IndexSet::Union(vec![
                IndexSet::Product(vec![IndexSet::Named("I".into()), IndexSet::Named("J".into())]),
                IndexSet::Finite(3),
            ])))
        );
    }

    #[test]
    fn operators_and_precedence() {
        let e = parse_expr("Zp(2)(x)Zp(3) (+) R[2]").unwrap();
        assert_eq!(
            e,
            SolidExpr::sum(vec![
                SolidExpr::tensor(vec![SolidExpr::padic(2), SolidExpr::padic(3)]),
                SolidExpr::shift(2, SolidExpr::Atom(Atom::Real)),
            ])
        );
        // a variable named x does not confuse the tensor operator
        assert_eq!(parse_expr("PS(x)(x)PS(x)").unwrap().to_string(), "PS(x) (x) PS(x)");
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "Zp(2) (x) Zp(3)",
            "(Zp(2) (+) 1) (x) Laurent(T)[-1]",
            "Dual(PS(T) (+) 0)[3]",
            "Prod((I+2)*J)",
            "(Zp(7)[[T,U]] (x) R)[1][2]",
        ] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{s}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("Zp(4)"), Err(Error::Structural(_))));
        assert!(matches!(parse_expr("Foo"), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_expr("Zp(2) (x)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("PS()"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("2"), Err(Error::Parse { .. })));
    }
}
