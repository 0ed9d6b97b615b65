use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::{AffineInt, AlgebraError, Coeff, SymbolId};

/// Polynomial variable `t_i` (1-based, matching component `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(u32);

impl VarIndex {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        VarIndex(index)
    }

    pub fn of_component(component: usize) -> Self {
        VarIndex(component as u32 + 1)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// 0-based component this variable belongs to.
    pub fn component(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Key of one monomial. `var == None` is the variable-free constant
/// monomial; a zero exponent is always stored that way so that `t_i^0`
/// contributions of different variables merge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct TermKey {
    var: Option<VarIndex>,
    exp: AffineInt,
}

impl TermKey {
    fn new(var: VarIndex, exp: AffineInt) -> Self {
        if exp.is_zero() {
            TermKey { var: None, exp }
        } else {
            TermKey { var: Some(var), exp }
        }
    }

    fn one() -> Self {
        TermKey { var: None, exp: AffineInt::zero() }
    }
}

/// Borrowed view of one normalized term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term<'a, C> {
    pub var: Option<VarIndex>,
    pub exp: &'a AffineInt,
    pub coeff: &'a C,
}

/// Multivariate Laurent polynomial in `t_1, t_2, ...` with [`AffineInt`]
/// exponents and coefficients in `C`.
///
/// Always normalized: no zero coefficients, unique keys, and the zero
/// polynomial has no terms. Iteration order is the canonical render order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<TermKey, C>,
}

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(TermKey::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// `coeff * t_var^exp`.
    pub fn monomial(var: VarIndex, exp: AffineInt, coeff: C) -> Self {
        let mut p = Self::zero();
        p.add_term(TermKey::new(var, exp), coeff);
        p
    }

    /// `t_var^exp` with coefficient 1.
    pub fn power(var: VarIndex, exp: AffineInt) -> Self {
        Self::monomial(var, exp, C::one())
    }

    fn add_term(&mut self, key: TermKey, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// Adds `coeff * t_var^exp` (or a constant when `var` is `None`).
    pub fn add_monomial(&mut self, var: Option<VarIndex>, exp: AffineInt, coeff: C) {
        let key = match var {
            Some(v) => TermKey::new(v, exp),
            None => {
                assert!(exp.is_zero(), "constant terms carry a zero exponent");
                TermKey::one()
            }
        };
        self.add_term(key, coeff);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Term<'_, C>> + '_ {
        self.terms.iter().map(|(k, c)| Term { var: k.var, exp: &k.exp, coeff: c })
    }

    /// Coefficient of `t_var^exp` (`var == None` for the constant).
    pub fn coeff(&self, var: Option<VarIndex>, exp: &AffineInt) -> C {
        let key = match var {
            Some(v) => TermKey::new(v, exp.clone()),
            None => TermKey::one(),
        };
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn variables(&self) -> BTreeSet<VarIndex> {
        self.terms.keys().filter_map(|k| k.var).collect()
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        self.terms.keys().flat_map(|k| k.exp.symbols().map(|(s, _)| s)).collect()
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Multiplies by `t_var^shift`. Every term must be in `var` or constant.
    pub fn shift_monomial(&self, var: VarIndex, shift: &AffineInt) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            if let Some(v) = key.var {
                if v != var {
                    return Err(AlgebraError::MixedVariable { expected: var, found: v });
                }
            }
            out.add_term(TermKey::new(var, &key.exp + shift), c.clone());
        }
        Ok(out)
    }

    /// Replaces every symbol in every exponent by an integer.
    pub fn substitute_symbols(&self, assignment: &BTreeMap<SymbolId, i64>) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let exp = AffineInt::constant(key.exp.evaluate(assignment)?);
            let key = match key.var {
                Some(v) => TermKey::new(v, exp),
                None => TermKey::one(),
            };
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Replaces symbols in exponents by affine expressions (unmapped
    /// symbols are kept).
    pub fn substitute_affine(&self, map: &BTreeMap<SymbolId, AffineInt>) -> Self {
        self.map_terms(|var, exp| (var, exp.substitute(map)))
    }

    /// Renames every variable to `t1`. Exponents must be symbol-free.
    pub fn collapse_variables(&self) -> Result<Self, AlgebraError> {
        let t = VarIndex::new(1);
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            if !key.exp.is_constant() {
                return Err(AlgebraError::SymbolicExponent(key.exp.clone()));
            }
            let key = match key.var {
                Some(_) => TermKey::new(t, key.exp.clone()),
                None => TermKey::one(),
            };
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Renames variables and symbols, e.g. to reindex a tensor factor.
    pub fn reindex(
        &self,
        mut var_map: impl FnMut(VarIndex) -> VarIndex,
        mut sym_map: impl FnMut(SymbolId) -> SymbolId,
    ) -> Self {
        self.map_terms(|var, exp| (var.map(&mut var_map), exp.map_symbols(&mut sym_map)))
    }

    fn map_terms(&self, mut f: impl FnMut(Option<VarIndex>, &AffineInt) -> (Option<VarIndex>, AffineInt)) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let (var, exp) = f(key.var, &key.exp);
            let key = match var {
                Some(v) => TermKey::new(v, exp),
                None => TermKey::one(),
            };
            out.add_term(key, c.clone());
        }
        out
    }

    /// Same polynomial over another coefficient ring. Panics if a
    /// coefficient does not fit.
    pub fn convert<D: Coeff>(&self) -> LaurentPoly<D> {
        let mut out = LaurentPoly::<D>::zero();
        for (key, c) in &self.terms {
            let d: D = c.to_string().parse().unwrap_or_else(|_| panic!("coefficient {c} does not fit the target ring"));
            out.add_term(key.clone(), d);
        }
        out
    }
}

impl<C: Coeff> AddAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl<C: Coeff> AddAssign for LaurentPoly<C> {
    fn add_assign(&mut self, rhs: LaurentPoly<C>) {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl<C: Coeff> SubAssign<&LaurentPoly<C>> for LaurentPoly<C> {
    fn sub_assign(&mut self, rhs: &LaurentPoly<C>) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), -c.clone());
        }
    }
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<C: Coeff> Add<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<C: Coeff> Sub<&LaurentPoly<C>> for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<C: Coeff> std::iter::Sum for LaurentPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

/// Canonical form, e.g. `t1^(c1-c3-1) - t2^(c2-c3)` or `1 - t1^(-1)`.
impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            match key.var {
                None => write!(f, "{mag}")?,
                Some(v) => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "{v}")?;
                    if key.exp != AffineInt::constant(1) {
                        write!(f, "^({})", key.exp)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> FromStr for LaurentPoly<C> {
    type Err = AlgebraError;

    /// Reads the canonical form. Also accepts `*` between coefficient and
    /// variable, `^k` without parentheses, and a bare `t` for `t1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(AlgebraError::Parse("empty polynomial".into()));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for (negative, body) in split_terms(&compact)? {
            let (key, coeff) = parse_term::<C>(body)?;
            out.add_term(key, if negative { -coeff } else { coeff });
        }
        Ok(out)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>, AlgebraError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        negative = bytes[0] == b'-';
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                out.push((negative, &s[start..i]));
                negative = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(AlgebraError::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        i += 1;
    }
    if depth != 0 {
        return Err(AlgebraError::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    out.push((negative, &s[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err(AlgebraError::Parse(format!("empty term in `{s}`")));
    }
    Ok(out)
}

fn parse_term<C: Coeff>(term: &str) -> Result<(TermKey, C), AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad term `{term}`"));
    let digits_end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
    let coeff: C = if digits_end == 0 { C::one() } else { term[..digits_end].parse().map_err(|_| bad())? };
    let mut rest = &term[digits_end..];
    if rest.is_empty() {
        if digits_end == 0 {
            return Err(bad());
        }
        return Ok((TermKey::one(), coeff));
    }
    if let Some(r) = rest.strip_prefix('*') {
        if digits_end == 0 {
            return Err(bad());
        }
        rest = r;
    }
    let rest = rest.strip_prefix('t').ok_or_else(bad)?;
    let idx_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let var = if idx_end == 0 {
        VarIndex::new(1)
    } else {
        let idx: u32 = rest[..idx_end].parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        VarIndex::new(idx)
    };
    let rest = &rest[idx_end..];
    let exp = if rest.is_empty() {
        AffineInt::constant(1)
    } else {
        let e = rest.strip_prefix('^').ok_or_else(bad)?;
        let e = match e.strip_prefix('(') {
            Some(inner) => inner.strip_suffix(')').ok_or_else(bad)?,
            None => e,
        };
        e.parse::<AffineInt>()?
    };
    Ok((TermKey::new(var, exp), coeff))
}
