//! JSON form of a polynomial: a list of
//! `{"var": i | null, "coeff": int, "exp": {"const": int, "syms": {"c1": int}}}`.

use serde_json::{json, Map, Value};

use super::{AffineInt, AlgebraError, Coeff, LaurentPoly, SymbolId, VarIndex};

impl AffineInt {
    pub fn to_json(&self) -> Value {
        let syms: Map<String, Value> = self.symbols().map(|(s, c)| (s.to_string(), json!(c))).collect();
        json!({ "const": self.constant_part(), "syms": syms })
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = |what: &str| AlgebraError::Parse(format!("exponent JSON: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let constant = match obj.get("const") {
            None => 0,
            Some(c) => c.as_i64().ok_or_else(|| bad("`const` must be an integer"))?,
        };
        let mut coeffs = Vec::new();
        if let Some(syms) = obj.get("syms") {
            let syms = syms.as_object().ok_or_else(|| bad("`syms` must be an object"))?;
            for (name, c) in syms {
                let idx: u32 = name
                    .strip_prefix('c')
                    .and_then(|d| d.parse().ok())
                    .filter(|i| *i >= 1)
                    .ok_or_else(|| bad(&format!("bad symbol name `{name}`")))?;
                let c = c.as_i64().ok_or_else(|| bad("symbol coefficients must be integers"))?;
                coeffs.push((SymbolId::new(idx), c));
            }
        }
        Ok(AffineInt::from_parts(constant, coeffs))
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|t| {
                let text = t.coeff.to_string();
                // beyond i64 the coefficient is written as a decimal string
                let coeff = text.parse::<i64>().map(Value::from).unwrap_or(Value::String(text));
                json!({
                    "var": t.var.map(|v| v.index()),
                    "coeff": coeff,
                    "exp": t.exp.to_json(),
                })
            })
            .collect();
        Value::Array(terms)
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = |what: &str| AlgebraError::Parse(format!("polynomial JSON: {what}"));
        let list = v.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut out = Self::zero();
        for term in list {
            let obj = term.as_object().ok_or_else(|| bad("term must be an object"))?;
            let var = match obj.get("var") {
                None | Some(Value::Null) => None,
                Some(v) => {
                    let i = v.as_u64().filter(|i| *i >= 1).ok_or_else(|| bad("`var` must be a positive integer"))?;
                    Some(VarIndex::new(i as u32))
                }
            };
            let coeff: C = match obj.get("coeff") {
                Some(Value::Number(n)) => n.to_string().parse().map_err(|_| bad("bad coefficient"))?,
                Some(Value::String(s)) => s.parse().map_err(|_| bad("bad coefficient"))?,
                _ => return Err(bad("missing coefficient")),
            };
            let exp = match obj.get("exp") {
                Some(e) => AffineInt::from_json(e)?,
                None => AffineInt::zero(),
            };
            match var {
                Some(v) => out += LaurentPoly::monomial(v, exp, coeff),
                None if exp.is_zero() => out += LaurentPoly::constant(coeff),
                None => return Err(bad("constant term with nonzero exponent")),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn round_trip_example() {
        let p: LaurentPoly<BigInt> = "1 - t1^(-1) + t1^(c1-c2-1) - t1".parse().unwrap();
        let v = p.to_json();
        assert_eq!(v[0]["var"], Value::Null);
        assert_eq!(v[0]["coeff"], json!(1));
        assert_eq!(LaurentPoly::<BigInt>::from_json(&v).unwrap(), p);
    }

    #[test]
    fn reads_documented_schema() {
        let v = json!([
            {"var": 1, "coeff": 1, "exp": {"const": -1, "syms": {"c1": 1, "c3": -1}}},
            {"var": 2, "coeff": -1, "exp": {"const": 0, "syms": {"c2": 1, "c3": -1}}}
        ]);
        let p = LaurentPoly::<BigInt>::from_json(&v).unwrap();
        assert_eq!(p.to_string(), "t1^(c1-c3-1) - t2^(c2-c3)");
    }

    #[test]
    fn huge_coefficients_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = LaurentPoly::constant(big);
        assert_eq!(LaurentPoly::<BigInt>::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        assert!(LaurentPoly::<BigInt>::from_json(&json!({})).is_err());
        assert!(LaurentPoly::<BigInt>::from_json(&json!([{"var": 0, "coeff": 1}])).is_err());
        assert!(LaurentPoly::<BigInt>::from_json(&json!([{"var": null, "coeff": 1, "exp": {"const": 2}}])).is_err());
        assert!(LaurentPoly::<BigInt>::from_json(&json!([{"var": 1, "coeff": 1, "exp": {"syms": {"x": 1}}}])).is_err());
    }
}
