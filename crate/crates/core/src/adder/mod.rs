// SPDX-License-Identifier: Apache-2.0

//! Complete adder, subtractor and comparator circuits.
//!
//! Register conventions (bit `i` of a register is the `2^i` place):
//!
//! | circuit            | registers                                            |
//! |--------------------|------------------------------------------------------|
//! | add, out of place  | `A[n] B[n] Z[n+1] X [Y]`                             |
//! | add, in place      | `A[n] B[n]` (sum) `C[n-1]` (carries) `Z[1]` (high bit) `X [Y]` |
//! | add mod 2^n        | as above without the high bit (`Z[n]` / no `Z`)       |
//! | compare            | `A[n] B[n] C[n-1] Z[1] X [Y]`                        |
//! | add mod 2^n - 1    | `A[n] B[n] Z[n] X`, or in place `A[n] B[n] C[n] X`    |
//!
//! With an incoming carry the circuit works on the `n+1`-bit operands
//! `2a+y` and `2b+y`; position 0 is never materialized and `Y` stands in for
//! `G[1]` (out of place it is first copied into `Z[0]`).

mod add;
mod compare;
mod mersenne;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::carry_network::{NetworkError, ResolveError};
use crate::circuit::{Circuit, CircuitError, Wire};

pub use add::{gen_add_ip, gen_add_mod2n, gen_add_oop, gen_sub};
pub use compare::gen_compare;
pub use mersenne::gen_add_mersenne;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    Add,
    AddMod2n,
    AddMersenne,
    Subtract,
    Compare,
}

impl Function {
    pub fn as_str(self) -> &'static str {
        match self {
            Function::Add => "add",
            Function::AddMod2n => "add-mod2n",
            Function::AddMersenne => "add-mersenne",
            Function::Subtract => "subtract",
            Function::Compare => "compare",
        }
    }

    pub fn min_width(self) -> usize {
        match self {
            Function::AddMersenne | Function::Compare => 2,
            _ => 1,
        }
    }

    pub(crate) fn check_width(self, n: usize) -> Result<(), AdderError> {
        if n < self.min_width() {
            return Err(AdderError::Width {
                function: self,
                n,
                min: self.min_width(),
            });
        }
        Ok(())
    }
}

impl FromStr for Function {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "add" => Function::Add,
            "add-mod2n" => Function::AddMod2n,
            "add-mersenne" => Function::AddMersenne,
            "subtract" => Function::Subtract,
            "compare" => Function::Compare,
            other => return Err(format!("unknown function `{other}`")),
        })
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which bit string denotes zero in one's-complement addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZeroRep {
    Ones,
    Zeros,
}

impl ZeroRep {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroRep::Ones => "ones",
            ZeroRep::Zeros => "zeros",
        }
    }

    pub fn other(self) -> Self {
        match self {
            ZeroRep::Ones => ZeroRep::Zeros,
            ZeroRep::Zeros => ZeroRep::Ones,
        }
    }
}

impl FromStr for ZeroRep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ones" => Ok(ZeroRep::Ones),
            "zeros" => Ok(ZeroRep::Zeros),
            other => Err(format!("unknown zero representation `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdderError {
    #[error("{function} needs n >= {min}, got {n}")]
    Width {
        function: Function,
        n: usize,
        min: usize,
    },
    #[error("{0} does not take an incoming carry")]
    CarryIn(Function),
    #[error("{0} has no in-place form")]
    InPlace(Function),
    #[error("a zero representation only applies to add-mersenne")]
    ZeroRep,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("padded network: {0}")]
    Resolve(#[from] ResolveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdderRequest {
    pub n: usize,
    pub function: Function,
    pub in_place: bool,
    pub incoming_carry: bool,
    /// Only for [`Function::AddMersenne`]; `None` there means ones.
    pub zero_rep: Option<ZeroRep>,
}

impl AdderRequest {
    pub fn new(function: Function, n: usize) -> Self {
        AdderRequest {
            n,
            function,
            in_place: false,
            incoming_carry: false,
            zero_rep: None,
        }
    }

    pub fn in_place(mut self, yes: bool) -> Self {
        self.in_place = yes;
        self
    }

    pub fn carry_in(mut self, yes: bool) -> Self {
        self.incoming_carry = yes;
        self
    }

    pub fn zero_rep(mut self, rep: ZeroRep) -> Self {
        self.zero_rep = Some(rep);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// Zero representation of a mersenne adder.
    pub fn rep(&self) -> ZeroRep {
        self.zero_rep.unwrap_or(ZeroRep::Ones)
    }

    pub fn validate(&self) -> Result<(), AdderError> {
        let f = self.function;
        f.check_width(self.n)?;
        if self.incoming_carry && matches!(f, Function::AddMersenne | Function::Subtract) {
            return Err(AdderError::CarryIn(f));
        }
        if self.in_place && f == Function::Compare {
            return Err(AdderError::InPlace(f));
        }
        if self.zero_rep.is_some() && f != Function::AddMersenne {
            return Err(AdderError::ZeroRep);
        }
        Ok(())
    }

    /// Whether `b` is a valid second operand. An in-place mersenne adder
    /// cannot accept both encodings of zero for `b` (both would map to the
    /// same output), so the encoding that is not its own zero is excluded.
    pub fn b_in_domain(&self, b_is_zeros: bool, b_is_ones: bool) -> bool {
        if self.function != Function::AddMersenne || !self.in_place {
            return true;
        }
        match self.rep() {
            ZeroRep::Zeros => !b_is_ones,
            ZeroRep::Ones => !b_is_zeros,
        }
    }
}

impl fmt::Display for AdderRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.function, self.n)?;
        if self.in_place {
            f.write_str(" in-place")?;
        }
        if self.incoming_carry {
            f.write_str(" carry-in")?;
        }
        if let Some(rep) = self.zero_rep {
            write!(f, " zero-rep={}", rep.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for AdderRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut toks = s.split_whitespace();
        let function: Function = toks.next().ok_or("empty variant")?.parse()?;
        let mut req = AdderRequest::new(function, 0);
        let mut saw_n = false;
        for tok in toks {
            match tok {
                "in-place" => req.in_place = true,
                "carry-in" => req.incoming_carry = true,
                _ => {
                    if let Some(v) = tok.strip_prefix("n=") {
                        req.n = v.parse().map_err(|_| format!("bad width `{v}`"))?;
                        saw_n = true;
                    } else if let Some(v) = tok.strip_prefix("zero-rep=") {
                        req.zero_rep = Some(v.parse()?);
                    } else {
                        return Err(format!("unknown variant token `{tok}`"));
                    }
                }
            }
        }
        if !saw_n {
            return Err("variant is missing n=".into());
        }
        Ok(req)
    }
}

/// Builds the circuit for a request.
pub fn generate(req: &AdderRequest) -> Result<Circuit, AdderError> {
    req.validate()?;
    let n = req.n;
    let mut c = match req.function {
        Function::Add if req.in_place => gen_add_ip(n, req.incoming_carry)?,
        Function::Add => gen_add_oop(n, req.incoming_carry)?,
        Function::AddMod2n => gen_add_mod2n(n, req.in_place, req.incoming_carry)?,
        Function::Subtract => gen_sub(n, req.in_place)?,
        Function::Compare => gen_compare(n, req.incoming_carry)?,
        Function::AddMersenne => gen_add_mersenne(n, req.in_place, req.rep())?,
    };
    c.variant = Some(req.to_string());
    Ok(c)
}

/// Operand positions of the (possibly carry-extended) virtual adder.
/// `None` marks position 0 when it stands for the incoming carry.
pub(crate) struct Virtual {
    pub a: Vec<Option<Wire>>,
    pub b: Vec<Option<Wire>>,
}

impl Virtual {
    pub fn new(a: &[Wire], b: &[Wire], carry_in: bool) -> Self {
        let lift = |v: &[Wire]| {
            let mut out: Vec<Option<Wire>> = Vec::with_capacity(v.len() + 1);
            if carry_in {
                out.push(None);
            }
            out.extend(v.iter().map(|&w| Some(w)));
            out
        };
        Virtual {
            a: lift(a),
            b: lift(b),
        }
    }
}

pub(crate) fn reg_wires(c: &Circuit, name: &str) -> Vec<Wire> {
    let id = c.layout.find(name).expect("register declared");
    (0..c.layout.register(id).size)
        .map(|i| Wire::new(id, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_text_round_trip() {
        let reqs = [
            AdderRequest::new(Function::Add, 10),
            AdderRequest::new(Function::Add, 4)
                .in_place(true)
                .carry_in(true),
            AdderRequest::new(Function::AddMersenne, 7)
                .in_place(true)
                .zero_rep(ZeroRep::Zeros),
        ];
        for r in reqs {
            assert_eq!(r.to_string().parse::<AdderRequest>().unwrap(), r);
        }
        assert!("add".parse::<AdderRequest>().is_err());
        assert!("add n=3 sideways".parse::<AdderRequest>().is_err());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            generate(&AdderRequest::new(Function::Compare, 1)),
            Err(AdderError::Width { .. })
        ));
        assert!(generate(&AdderRequest::new(Function::AddMersenne, 1)).is_err());
        assert!(generate(&AdderRequest::new(Function::AddMersenne, 4).carry_in(true)).is_err());
        assert!(generate(&AdderRequest::new(Function::Add, 4).zero_rep(ZeroRep::Ones)).is_err());
        assert!(generate(&AdderRequest::new(Function::Compare, 4).in_place(true)).is_err());
        assert!(generate(&AdderRequest::new(Function::Add, 0)).is_err());
    }
}
