//! Box labels: constants, parameterised phases and arbitrary differentiable functions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, ZxError};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Name of a real parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(String);

impl Param {
    pub fn new(name: impl Into<String>) -> Self {
        Param(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Param {
    fn from(s: &str) -> Self {
        Param(s.to_string())
    }
}

impl From<String> for Param {
    fn from(s: String) -> Self {
        Param(s)
    }
}

impl Borrow<str> for Param {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Values assigned to parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding(BTreeMap<Param, f64>);

impl Binding {
    pub fn new() -> Self {
        Binding(BTreeMap::new())
    }

    pub fn with(mut self, name: impl Into<Param>, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<Param>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn require(&self, name: &Param) -> Result<f64> {
        self.get(name.as_str())
            .ok_or_else(|| ZxError::UnboundParameter(name.0.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Param, f64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

/// A differentiable map from a real parameter to a complex box label.
pub trait ParamFunction: Send + Sync + fmt::Debug {
    /// Stable identifier used for equality and serialisation.
    fn id(&self) -> String;
    fn value(&self, x: f64) -> C64;
    fn derivative(&self, x: f64) -> C64;

    /// Whether `value` is known to be nonzero for every real input.
    fn never_vanishes(&self) -> bool {
        false
    }

    /// The pointwise complex conjugate, if it is representable.
    fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct FuncLabel {
    pub param: Param,
    pub func: Arc<dyn ParamFunction>,
}

impl PartialEq for FuncLabel {
    fn eq(&self, other: &Self) -> bool {
        self.param == other.param && self.func.id() == other.func.id()
    }
}

/// `exp(i (k * param + c))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseLabel {
    pub param: Param,
    pub k: i32,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Label {
    Const(C64),
    Phase(PhaseLabel),
    Func(FuncLabel),
}

impl Label {
    pub fn real(x: f64) -> Self {
        Label::Const(C64::new(x, 0.0))
    }

    pub fn phase(param: impl Into<Param>, k: i32, c: f64) -> Result<Self> {
        if k == 0 {
            return Err(ZxError::InvalidKind("phase coefficient k must be nonzero".into()));
        }
        Ok(Label::Phase(PhaseLabel {
            param: param.into(),
            k,
            c,
        }))
    }

    pub fn func(param: impl Into<Param>, func: Arc<dyn ParamFunction>) -> Self {
        Label::Func(FuncLabel {
            param: param.into(),
            func,
        })
    }

    /// Unit-modulus constant `exp(i alpha)`.
    pub fn angle(alpha: f64) -> Self {
        Label::Const(C64::from_polar(1.0, alpha))
    }

    pub fn param(&self) -> Option<&Param> {
        match self {
            Label::Const(_) => None,
            Label::Phase(p) => Some(&p.param),
            Label::Func(f) => Some(&f.param),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.param().is_some_and(|p| p.as_str() == name)
    }

    pub fn value(&self, binding: &Binding) -> Result<C64> {
        match self {
            Label::Const(a) => Ok(*a),
            Label::Phase(p) => {
                let x = binding.require(&p.param)?;
                Ok(C64::from_polar(1.0, p.k as f64 * x + p.c))
            }
            Label::Func(f) => Ok(f.func.value(binding.require(&f.param)?)),
        }
    }

    pub fn conj(&self) -> Result<Label> {
        match self {
            Label::Const(a) => Ok(Label::Const(a.conj())),
            Label::Phase(p) => Ok(Label::Phase(PhaseLabel {
                param: p.param.clone(),
                k: -p.k,
                c: -p.c,
            })),
            Label::Func(f) => match f.func.conjugate() {
                Some(g) => Ok(Label::Func(FuncLabel {
                    param: f.param.clone(),
                    func: g,
                })),
                None => Err(ZxError::NotDaggerable(f.func.id())),
            },
        }
    }

    /// Product of two labels when it is again a single label.
    pub fn fuse(&self, other: &Label) -> Option<Label> {
        match (self, other) {
            (Label::Const(a), Label::Const(b)) => Some(Label::Const(a * b)),
            (Label::Const(a), l) | (l, Label::Const(a)) if *a == ONE => Some(l.clone()),
            (Label::Phase(p), Label::Phase(q)) if p.param == q.param => {
                let k = p.k + q.k;
                let c = p.c + q.c;
                if k == 0 {
                    Some(Label::angle(c))
                } else {
                    Some(Label::Phase(PhaseLabel {
                        param: p.param.clone(),
                        k,
                        c,
                    }))
                }
            }
            (Label::Phase(p), Label::Const(a)) | (Label::Const(a), Label::Phase(p))
                if (a.norm() - 1.0).abs() < 1e-14 =>
            {
                Some(Label::Phase(PhaseLabel {
                    param: p.param.clone(),
                    k: p.k,
                    c: p.c + a.arg(),
                }))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Const(a) => write!(f, "{a}"),
            Label::Phase(p) => write!(f, "exp(i({}*{} + {}))", p.k, p.param, p.c),
            Label::Func(g) => write!(f, "{}({})", g.func.id(), g.param),
        }
    }
}

/// Built-in label functions.
pub mod funcs {
    use super::*;

    /// `x`
    #[derive(Debug)]
    pub struct Identity;
    /// `sin x`
    #[derive(Debug)]
    pub struct Sine;
    /// `cos x`
    #[derive(Debug)]
    pub struct Cosine;
    /// `exp(s i x)` for `s = +1` or `-1`.
    #[derive(Debug)]
    pub struct ExpI(pub i32);
    /// `a x + b` with complex coefficients.
    #[derive(Debug)]
    pub struct Affine(pub C64, pub C64);
    /// `2 + sin x`, nonvanishing.
    #[derive(Debug)]
    pub struct SinPlusTwo;

    impl ParamFunction for Identity {
        fn id(&self) -> String {
            "id".into()
        }
        fn value(&self, x: f64) -> C64 {
            C64::new(x, 0.0)
        }
        fn derivative(&self, _x: f64) -> C64 {
            ONE
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(Identity))
        }
    }

    impl ParamFunction for Sine {
        fn id(&self) -> String {
            "sin".into()
        }
        fn value(&self, x: f64) -> C64 {
            C64::new(x.sin(), 0.0)
        }
        fn derivative(&self, x: f64) -> C64 {
            C64::new(x.cos(), 0.0)
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(Sine))
        }
    }

    impl ParamFunction for Cosine {
        fn id(&self) -> String {
            "cos".into()
        }
        fn value(&self, x: f64) -> C64 {
            C64::new(x.cos(), 0.0)
        }
        fn derivative(&self, x: f64) -> C64 {
            C64::new(-x.sin(), 0.0)
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(Cosine))
        }
    }

    impl ParamFunction for ExpI {
        fn id(&self) -> String {
            if self.0 >= 0 { "expi".into() } else { "expmi".into() }
        }
        fn value(&self, x: f64) -> C64 {
            C64::from_polar(1.0, self.0 as f64 * x)
        }
        fn derivative(&self, x: f64) -> C64 {
            I * self.0 as f64 * self.value(x)
        }
        fn never_vanishes(&self) -> bool {
            true
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(ExpI(-self.0)))
        }
    }

    impl ParamFunction for Affine {
        fn id(&self) -> String {
            format!("affine({},{},{},{})", self.0.re, self.0.im, self.1.re, self.1.im)
        }
        fn value(&self, x: f64) -> C64 {
            self.0 * x + self.1
        }
        fn derivative(&self, _x: f64) -> C64 {
            self.0
        }
        fn never_vanishes(&self) -> bool {
            // a x + b has a real root only when b / a is real.
            if self.0 == ZERO {
                return self.1 != ZERO;
            }
            (self.1 / self.0).im.abs() > 1e-12
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(Affine(self.0.conj(), self.1.conj())))
        }
    }

    impl ParamFunction for SinPlusTwo {
        fn id(&self) -> String {
            "sin_plus_2".into()
        }
        fn value(&self, x: f64) -> C64 {
            C64::new(2.0 + x.sin(), 0.0)
        }
        fn derivative(&self, x: f64) -> C64 {
            C64::new(x.cos(), 0.0)
        }
        fn never_vanishes(&self) -> bool {
            true
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            Some(Arc::new(SinPlusTwo))
        }
    }

    /// `f'(x) / f(x)`.
    #[derive(Debug)]
    pub struct Ratio(pub Arc<dyn ParamFunction>);

    impl ParamFunction for Ratio {
        fn id(&self) -> String {
            format!("ratio({})", self.0.id())
        }
        fn value(&self, x: f64) -> C64 {
            self.0.derivative(x) / self.0.value(x)
        }
        fn derivative(&self, x: f64) -> C64 {
            let h = 1e-5;
            (self.value(x + h) - self.value(x - h)) / (2.0 * h)
        }
        fn conjugate(&self) -> Option<Arc<dyn ParamFunction>> {
            self.0.conjugate().map(|g| Arc::new(Ratio(g)) as Arc<dyn ParamFunction>)
        }
    }
}

/// Lookup table from function identifiers to implementations.
#[derive(Clone, Debug, Default)]
pub struct FuncRegistry(BTreeMap<String, Arc<dyn ParamFunction>>);

impl FuncRegistry {
    pub fn empty() -> Self {
        FuncRegistry(BTreeMap::new())
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(funcs::Identity));
        r.register(Arc::new(funcs::Sine));
        r.register(Arc::new(funcs::Cosine));
        r.register(Arc::new(funcs::ExpI(1)));
        r.register(Arc::new(funcs::ExpI(-1)));
        r.register(Arc::new(funcs::SinPlusTwo));
        r
    }

    pub fn register(&mut self, f: Arc<dyn ParamFunction>) {
        self.0.insert(f.id(), f);
    }

    /// Resolves an identifier, including the composite forms `ratio(..)` and `affine(..)`.
    pub fn get(&self, id: &str) -> Option<Arc<dyn ParamFunction>> {
        if let Some(f) = self.0.get(id) {
            return Some(f.clone());
        }
        let inner = |prefix: &str| id.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        if let Some(rest) = inner("ratio(") {
            return self.get(rest).map(|f| Arc::new(funcs::Ratio(f)) as Arc<dyn ParamFunction>);
        }
        let nums: Vec<f64> = inner("affine(")?
            .split(',')
            .map(|t| t.trim().parse().ok())
            .collect::<Option<_>>()?;
        match nums[..] {
            [ar, ai, br, bi] => Some(Arc::new(funcs::Affine(C64::new(ar, ai), C64::new(br, bi)))),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_value_and_conj() {
        let l = Label::phase("t", 2, 0.3).unwrap();
        let b = Binding::new().with("t", 0.7);
        let v = l.value(&b).unwrap();
        assert!((v - C64::from_polar(1.0, 1.7)).norm() < 1e-15);
        let c = l.conj().unwrap().value(&b).unwrap();
        assert!((c - v.conj()).norm() < 1e-15);
    }

    #[test]
    fn zero_k_rejected() {
        assert!(Label::phase("t", 0, 0.0).is_err());
    }

    #[test]
    fn unbound_reported() {
        let l = Label::phase("t", 1, 0.0).unwrap();
        assert_eq!(
            l.value(&Binding::new()),
            Err(ZxError::UnboundParameter("t".into()))
        );
    }

    #[test]
    fn phase_fusion_cancels_to_const() {
        let a = Label::phase("t", 1, 0.2).unwrap();
        let b = Label::phase("t", -1, 0.5).unwrap();
        match a.fuse(&b).unwrap() {
            Label::Const(z) => assert!((z - C64::from_polar(1.0, 0.7)).norm() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ratio_matches_quotient() {
        let r = funcs::Ratio(Arc::new(funcs::SinPlusTwo));
        let x = 0.4_f64;
        let want = x.cos() / (2.0 + x.sin());
        assert!((r.value(x).re - want).abs() < 1e-14);
    }

    #[test]
    fn affine_vanishing() {
        assert!(!funcs::Affine(ONE, ONE).never_vanishes());
        assert!(funcs::Affine(ONE, I).never_vanishes());
    }
}
