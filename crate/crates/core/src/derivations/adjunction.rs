//! `K((t))[y, y^{-1}]` for a formal solution `y` of `theta(y) = a(T) y`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::char_p::{MultiIndex, Prime};
use crate::derivations::laurent_model::LaurentModel;
use crate::error::{Error, Result};
use crate::ide::{Ide, Matrix};
use crate::ring::{IdRing, Ring};
use crate::series::laurent::LaurentSeries;
use crate::series::poly::SeriesRing;
use crate::series::tseries::TSeries;

/// `sum_e c_e y^e` with series coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjElem {
    terms: BTreeMap<i64, LaurentSeries>,
}

impl AdjElem {
    pub fn zero() -> Self {
        AdjElem { terms: BTreeMap::new() }
    }

    /// `c * y^e`.
    pub fn term(c: LaurentSeries, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        AdjElem { terms }
    }

    /// A base-field element.
    pub fn base(c: LaurentSeries) -> Self {
        AdjElem::term(c, 0)
    }

    pub fn coeff(&self, e: i64) -> Option<&LaurentSeries> {
        self.terms.get(&e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &LaurentSeries)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    fn push(&mut self, e: i64, c: LaurentSeries) {
        let next = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(e, next);
        }
    }
}

#[derive(Debug)]
pub struct AdjunctionModel {
    p: Prime,
    base: LaurentModel,
    a: TSeries<LaurentSeries>,
    cache: Mutex<HashMap<i64, TSeries<LaurentSeries>>>,
}

impl Clone for AdjunctionModel {
    fn clone(&self) -> Self {
        AdjunctionModel { p: self.p, base: self.base, a: self.a.clone(), cache: Mutex::new(HashMap::new()) }
    }
}

impl AdjunctionModel {
    /// The rule is taken as given; see [`adjoin_solution`] for the checked
    /// constructor.
    pub fn new_unchecked(p: Prime, a: TSeries<LaurentSeries>) -> Result<Self> {
        let one = LaurentSeries::one(p);
        match a.get_uni(0) {
            Some(c) if *c == one => {}
            _ => return Err(Error::Incompatible("the rule must have constant term 1".into())),
        }
        Ok(AdjunctionModel { p, base: LaurentModel::standard(p), a, cache: Mutex::new(HashMap::new()) })
    }

    pub fn rule(&self) -> &TSeries<LaurentSeries> {
        &self.a
    }

    pub fn order(&self) -> u64 {
        self.a.order()
    }

    pub fn y(&self) -> AdjElem {
        AdjElem::term(LaurentSeries::one(self.p), 1)
    }

    pub fn base_elem(&self, c: LaurentSeries) -> AdjElem {
        AdjElem::base(c)
    }

    fn rule_power(&self, e: i64) -> Result<TSeries<LaurentSeries>> {
        if let Some(s) = self.cache.lock().unwrap().get(&e) {
            return Ok(s.clone());
        }
        let s = self.a.pow(&SeriesRing { p: self.p }, e)?;
        self.cache.lock().unwrap().insert(e, s.clone());
        Ok(s)
    }
}

/// Adjoin a solution of the 1x1 equation `theta(y) = a y` after checking
/// that `a` is compatible up to its order.
pub fn adjoin_solution(p: Prime, a: TSeries<LaurentSeries>) -> Result<AdjunctionModel> {
    let model = LaurentModel::standard(p);
    let order = a.order();
    let mut ide = Ide::identity(&model, 1, 1, order);
    for (k, c) in a.iter() {
        if !k.is_zero() {
            ide.set(k.clone(), Matrix::from_rows(vec![vec![c.clone()]]));
        }
    }
    let report = ide.validate(&model, order)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Incompatible(format!(
            "compatibility fails at (k, l) = ({}, {})",
            v.k, v.l
        )));
    }
    AdjunctionModel::new_unchecked(p, a)
}

impl Ring for AdjunctionModel {
    type Elem = AdjElem;

    fn prime(&self) -> Prime {
        self.p
    }
    fn zero(&self) -> AdjElem {
        AdjElem::zero()
    }
    fn one(&self) -> AdjElem {
        AdjElem::base(LaurentSeries::one(self.p))
    }
    fn add(&self, a: &AdjElem, b: &AdjElem) -> AdjElem {
        let mut out = a.clone();
        for (e, c) in b.terms() {
            out.push(e, c.clone());
        }
        out
    }
    fn neg(&self, a: &AdjElem) -> AdjElem {
        AdjElem { terms: a.terms.iter().map(|(&e, c)| (e, c.neg())).collect() }
    }
    fn mul(&self, a: &AdjElem, b: &AdjElem) -> AdjElem {
        let mut out = AdjElem::zero();
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                out.push(ea + eb, ca.mul(cb));
            }
        }
        out
    }
    fn scale(&self, c: u32, a: &AdjElem) -> AdjElem {
        let mut out = AdjElem::zero();
        for (e, x) in a.terms() {
            out.push(e, x.scale(c));
        }
        out
    }
    fn inv(&self, a: &AdjElem) -> Result<AdjElem> {
        if a.terms.len() != 1 {
            return Err(Error::NotInvertible("only c*y^e is a unit".into()));
        }
        let (&e, c) = a.terms.iter().next().unwrap();
        Ok(AdjElem::term(c.inv()?, -e))
    }
    fn is_zero(&self, a: &AdjElem) -> bool {
        a.terms.values().all(LaurentSeries::is_zero)
    }
    fn show(&self, a: &AdjElem) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        a.terms()
            .map(|(e, c)| if e == 0 { format!("({c})") } else { format!("({c})*y^{e}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl IdRing for AdjunctionModel {
    fn nvars(&self) -> usize {
        1
    }

    fn theta(&self, x: &AdjElem, k: &MultiIndex) -> Result<AdjElem> {
        if k.len() != 1 {
            return Err(Error::LengthMismatch(k.len(), 1));
        }
        let n = k.0[0];
        if n > self.order() {
            return Err(Error::DepthExceeded { requested: n as usize, depth: self.order() as usize });
        }
        let ring = SeriesRing { p: self.p };
        let mut out = AdjElem::zero();
        for (e, c) in x.terms() {
            let ae = self.rule_power(e)?;
            for i in 0..=n {
                let aj = ae.coeff(&ring, &MultiIndex::uni(n - i));
                if aj.is_zero() {
                    continue;
                }
                out.push(e, self.base.theta_n(c, i)?.mul(&aj));
            }
        }
        Ok(out)
    }

    fn coords(&self, x: &AdjElem) -> Result<BTreeMap<Vec<i64>, u32>> {
        Ok(x.terms().flat_map(|(e, c)| c.terms().map(move |(f, v)| (vec![e, f], v))).collect())
    }

    fn generators(&self) -> Vec<AdjElem> {
        vec![AdjElem::base(LaurentSeries::monomial(self.p, 1, 1)), self.y()]
    }

    fn samples(&self) -> Vec<AdjElem> {
        let p = self.p;
        let t = |e: i64| LaurentSeries::monomial(p, 1, e);
        vec![
            self.one(),
            AdjElem::base(t(1)),
            AdjElem::base(t(-1)),
            self.y(),
            AdjElem::term(t(0), -1),
            AdjElem::term(t(1), 1),
            AdjElem::term(t(0), 2),
            self.add(&self.one(), &AdjElem::term(t(1), 1)),
        ]
    }

    fn max_order(&self) -> Option<u64> {
        Some(self.order())
    }
}
