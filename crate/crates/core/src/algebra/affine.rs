use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use super::AlgebraError;

/// The starting-label symbol `c_i` of component `i` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(u32);

impl SymbolId {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "symbol indices start at 1");
        SymbolId(index)
    }

    /// Symbol for the 0-based component index `component`.
    pub fn of_component(component: usize) -> Self {
        SymbolId(component as u32 + 1)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// An integer plus an integer combination of starting-label symbols,
/// e.g. `c1 - c3 - 1`.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineInt {
    constant: i64,
    coeffs: BTreeMap<SymbolId, i64>,
}

impl AffineInt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: i64) -> Self {
        AffineInt { constant: value, coeffs: BTreeMap::new() }
    }

    pub fn symbol(sym: SymbolId) -> Self {
        Self::term(sym, 1)
    }

    pub fn term(sym: SymbolId, coeff: i64) -> Self {
        let mut a = Self::zero();
        a.add_symbol(sym, coeff);
        a
    }

    /// Builds from parts, dropping zero coefficients.
    pub fn from_parts(constant: i64, coeffs: impl IntoIterator<Item = (SymbolId, i64)>) -> Self {
        let mut a = Self::constant(constant);
        for (s, c) in coeffs {
            a.add_symbol(s, c);
        }
        a
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn coeff(&self, sym: SymbolId) -> i64 {
        self.coeffs.get(&sym).copied().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, i64)> + '_ {
        self.coeffs.iter().map(|(s, c)| (*s, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.is_empty()
    }

    /// True when no symbol occurs.
    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.is_constant().then_some(self.constant)
    }

    fn add_symbol(&mut self, sym: SymbolId, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(sym).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&sym);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_parts(self.constant * k, self.coeffs.iter().map(|(s, c)| (*s, c * k)))
    }

    /// Replaces every symbol by an integer.
    pub fn evaluate(&self, assignment: &BTreeMap<SymbolId, i64>) -> Result<i64, AlgebraError> {
        let mut total = self.constant;
        for (s, c) in &self.coeffs {
            let v = assignment.get(s).ok_or(AlgebraError::MissingSymbol(*s))?;
            total += c * v;
        }
        Ok(total)
    }

    /// Replaces symbols by affine expressions; symbols missing from
    /// `map` are kept.
    pub fn substitute(&self, map: &BTreeMap<SymbolId, AffineInt>) -> AffineInt {
        let mut out = AffineInt::constant(self.constant);
        for (s, c) in &self.coeffs {
            match map.get(s) {
                Some(image) => out += image.scale(*c),
                None => out.add_symbol(*s, *c),
            }
        }
        out
    }

    /// Renames symbols through `f`.
    pub fn map_symbols(&self, mut f: impl FnMut(SymbolId) -> SymbolId) -> AffineInt {
        Self::from_parts(self.constant, self.coeffs.iter().map(|(s, c)| (f(*s), *c)))
    }
}

impl From<i64> for AffineInt {
    fn from(value: i64) -> Self {
        AffineInt::constant(value)
    }
}

impl From<SymbolId> for AffineInt {
    fn from(sym: SymbolId) -> Self {
        AffineInt::symbol(sym)
    }
}

impl AddAssign<&AffineInt> for AffineInt {
    fn add_assign(&mut self, rhs: &AffineInt) {
        self.constant += rhs.constant;
        for (s, c) in &rhs.coeffs {
            self.add_symbol(*s, *c);
        }
    }
}

impl AddAssign for AffineInt {
    fn add_assign(&mut self, rhs: AffineInt) {
        *self += &rhs;
    }
}

impl AddAssign<i64> for AffineInt {
    fn add_assign(&mut self, rhs: i64) {
        self.constant += rhs;
    }
}

impl SubAssign<&AffineInt> for AffineInt {
    fn sub_assign(&mut self, rhs: &AffineInt) {
        *self += &-rhs;
    }
}

impl Add for AffineInt {
    type Output = AffineInt;
    fn add(mut self, rhs: AffineInt) -> AffineInt {
        self += &rhs;
        self
    }
}

impl Add<&AffineInt> for &AffineInt {
    type Output = AffineInt;
    fn add(self, rhs: &AffineInt) -> AffineInt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add<i64> for AffineInt {
    type Output = AffineInt;
    fn add(mut self, rhs: i64) -> AffineInt {
        self.constant += rhs;
        self
    }
}

impl Add<i64> for &AffineInt {
    type Output = AffineInt;
    fn add(self, rhs: i64) -> AffineInt {
        self.clone() + rhs
    }
}

impl Sub for AffineInt {
    type Output = AffineInt;
    fn sub(mut self, rhs: AffineInt) -> AffineInt {
        self -= &rhs;
        self
    }
}

impl Sub<&AffineInt> for &AffineInt {
    type Output = AffineInt;
    fn sub(self, rhs: &AffineInt) -> AffineInt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub<i64> for AffineInt {
    type Output = AffineInt;
    fn sub(mut self, rhs: i64) -> AffineInt {
        self.constant -= rhs;
        self
    }
}

impl Neg for AffineInt {
    type Output = AffineInt;
    fn neg(self) -> AffineInt {
        self.scale(-1)
    }
}

impl Neg for &AffineInt {
    type Output = AffineInt;
    fn neg(self) -> AffineInt {
        self.scale(-1)
    }
}

/// Dense lexicographic order on the symbol-coefficient vector (symbols by
/// index, absent symbols read as 0), then by constant.
impl Ord for AffineInt {
    fn cmp(&self, other: &Self) -> Ordering {
        let keys: BTreeSet<SymbolId> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for s in keys {
            let ord = self.coeff(s).cmp(&other.coeff(s));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.constant.cmp(&other.constant)
    }
}

impl PartialOrd for AffineInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `c1-c3-1`, `-c1+2c2`, `0`.
impl fmt::Display for AffineInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in &self.coeffs {
            let mag = c.unsigned_abs();
            match (first, *c < 0) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, "-")?,
                (false, false) => write!(f, "+")?,
                (true, false) => {}
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        if self.constant != 0 {
            if first {
                write!(f, "{}", self.constant)?;
            } else if self.constant < 0 {
                write!(f, "-{}", self.constant.unsigned_abs())?;
            } else {
                write!(f, "+{}", self.constant)?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for AffineInt {
    type Err = AlgebraError;

    /// Reads the [`Display`](fmt::Display) form; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || AlgebraError::Parse(format!("bad affine expression `{s}`"));
        if compact.is_empty() {
            return Err(bad());
        }
        let bytes = compact.as_bytes();
        let mut out = AffineInt::zero();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &compact[start..i];
            if i < bytes.len() && bytes[i] == b'c' {
                i += 1;
                let sym_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: u32 = compact[sym_start..i].parse().map_err(|_| bad())?;
                if idx == 0 {
                    return Err(bad());
                }
                let k: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad())? };
                out.add_symbol(SymbolId::new(idx), sign * k);
            } else {
                if digits.is_empty() {
                    return Err(bad());
                }
                let v: i64 = digits.parse().map_err(|_| bad())?;
                out.constant += sign * v;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(i: u32) -> AffineInt {
        AffineInt::symbol(SymbolId::new(i))
    }

    #[test]
    fn constant_shift() {
        let a = c(1) - c(2) - 2;
        assert_eq!(a + 1, c(1) - c(2) - 1);
    }

    #[test]
    fn pairing_shift_gives_example_exponent() {
        let a = c(1) - c(3);
        assert_eq!(a + AffineInt::constant(-1), c(1) - c(3) - 1);
        assert_eq!((c(1) - c(3) - 1).to_string(), "c1-c3-1");
    }

    #[test]
    fn cancellation_leaves_no_entries() {
        let a = (c(1) - c(2)) + (c(2) - c(1));
        assert!(a.is_zero());
        assert_eq!(a, AffineInt::zero());
        assert_eq!(a.symbols().count(), 0);
    }

    #[test]
    fn display_and_parse() {
        for (a, s) in [
            (AffineInt::zero(), "0"),
            (AffineInt::constant(-1), "-1"),
            (c(2) - c(1), "-c1+c2"),
            (c(1).scale(2) - c(4) + 3, "2c1-c4+3"),
        ] {
            assert_eq!(a.to_string(), s);
            assert_eq!(s.parse::<AffineInt>().unwrap(), a);
        }
        assert!("c0".parse::<AffineInt>().is_err());
        assert!("1c".parse::<AffineInt>().is_err());
        assert!("".parse::<AffineInt>().is_err());
    }

    #[test]
    fn dense_order() {
        // symbol-free sorts between negative and positive c1 coefficients
        let mut v = vec![c(1), AffineInt::constant(5), -c(1), c(2), AffineInt::constant(-1)];
        v.sort();
        assert_eq!(v, vec![-c(1), AffineInt::constant(-1), AffineInt::constant(5), c(2), c(1)]);
    }

    #[test]
    fn evaluate_reports_missing() {
        let mut asg = BTreeMap::new();
        asg.insert(SymbolId::new(1), 4);
        assert_eq!((c(1) + 2).evaluate(&asg).unwrap(), 6);
        assert_eq!((c(1) + c(2)).evaluate(&asg), Err(AlgebraError::MissingSymbol(SymbolId::new(2))));
    }

    fn arb_affine() -> impl Strategy<Value = AffineInt> {
        (-20i64..20, prop::collection::vec((1u32..5, -3i64..4), 0..4))
            .prop_map(|(k, cs)| AffineInt::from_parts(k, cs.into_iter().map(|(s, c)| (SymbolId::new(s), c))))
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_affine(), b in arb_affine(), d in arb_affine()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &d, &a + &(&b + &d));
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&a + &AffineInt::zero(), a.clone());
        }

        #[test]
        fn substitution_commutes_with_add(a in arb_affine(), b in arb_affine(), vals in prop::collection::vec(-9i64..9, 4)) {
            let asg: BTreeMap<_, _> = vals.iter().enumerate().map(|(i, v)| (SymbolId::new(i as u32 + 1), *v)).collect();
            prop_assert_eq!((&a + &b).evaluate(&asg).unwrap(), a.evaluate(&asg).unwrap() + b.evaluate(&asg).unwrap());
        }

        #[test]
        fn display_round_trip(a in arb_affine()) {
            prop_assert_eq!(a.to_string().parse::<AffineInt>().unwrap(), a);
        }

        #[test]
        fn order_is_total_and_consistent(a in arb_affine(), b in arb_affine()) {
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }
    }
}
