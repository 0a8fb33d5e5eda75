//! Laurent polynomials in named generators with a per-(variable, generator)
//! derivation rule.
//!
//! `theta_i` acts on a monomial through the ring-homomorphism law:
//! `theta_i(g^e) = theta_i(g)^e`. The m-variate map is the composite
//! `theta^(k) = theta_1^(k_1) o ... o theta_m^(k_m)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::char_p::{lucas_binom, MultiIndex, Prime};
use crate::error::{Error, Result};
use crate::ring::{IdRing, Ring};
use crate::series::laurent::LaurentSeries;
use crate::series::parse::{parse_poly, parse_series};
use crate::series::poly::{Poly, PolyRing};
use crate::series::tseries::TSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `theta_i(g) = g + T_i`.
    Standard,
    /// `theta_i(g) = g`.
    Constant,
    /// `theta_i(g) = sum_k coeffs[k] T_i^k`; missing coefficients are zero.
    Custom(Vec<Poly>),
}

#[derive(Debug)]
pub struct PolyModel {
    p: Prime,
    names: Vec<String>,
    m: usize,
    /// `rules[i][g]`: action of the i-th derivation variable on generator g.
    rules: Vec<Vec<Rule>>,
    order: u64,
    realization: Option<Vec<LaurentSeries>>,
    cache: Mutex<HashMap<(usize, usize, i64), TSeries<Poly>>>,
}

impl Clone for PolyModel {
    fn clone(&self) -> Self {
        PolyModel {
            p: self.p,
            names: self.names.clone(),
            m: self.m,
            rules: self.rules.clone(),
            order: self.order,
            realization: self.realization.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PolyModel {
    pub fn new(p: Prime, names: Vec<String>, rules: Vec<Vec<Rule>>, order: u64) -> Result<Self> {
        let m = rules.len();
        for row in &rules {
            if row.len() != names.len() {
                return Err(Error::LengthMismatch(row.len(), names.len()));
            }
            for (g, r) in row.iter().enumerate() {
                if let Rule::Custom(cs) = r {
                    if cs.iter().any(|c| c.nvars() != names.len()) {
                        return Err(Error::Config(format!(
                            "rule for `{}` uses the wrong number of generators",
                            names[g]
                        )));
                    }
                    if cs.first() != Some(&Poly::var(p, names.len(), g)) {
                        return Err(Error::Config(format!(
                            "rule for `{}` must start with the generator itself",
                            names[g]
                        )));
                    }
                }
            }
        }
        Ok(PolyModel { p, names, m, rules, order, realization: None, cache: Mutex::new(HashMap::new()) })
    }

    /// `K[t_1^{±1}, ..., t_m^{±1}]` with `theta_i(t_j) = t_j + delta_ij T_i`.
    pub fn standard(p: Prime, m: usize, order: u64) -> Self {
        let names = if m == 1 { vec!["t".to_string()] } else { (1..=m).map(|i| format!("t{i}")).collect() };
        let rules = (0..m)
            .map(|i| (0..m).map(|j| if i == j { Rule::Standard } else { Rule::Constant }).collect())
            .collect();
        let mut model = PolyModel::new(p, names, rules, order).expect("standard rules are well formed");
        if m == 1 {
            model.realization = Some(vec![LaurentSeries::monomial(p, 1, 1)]);
        }
        model
    }

    /// Every generator constant.
    pub fn trivial(p: Prime, names: Vec<String>, m: usize, order: u64) -> Self {
        let rules = vec![vec![Rule::Constant; names.len()]; m];
        PolyModel::new(p, names, rules, order).expect("constant rules are well formed")
    }

    pub fn with_realization(mut self, values: Vec<LaurentSeries>) -> Result<Self> {
        if values.len() != self.names.len() {
            return Err(Error::LengthMismatch(values.len(), self.names.len()));
        }
        self.realization = Some(values);
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rules(&self) -> &[Vec<Rule>] {
        &self.rules
    }

    pub fn realization(&self) -> Option<&[LaurentSeries]> {
        self.realization.as_deref()
    }

    pub fn gen(&self, g: usize) -> Poly {
        Poly::var(self.p, self.ngens(), g)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn poly(&self, s: &str) -> Result<Poly> {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        parse_poly(self.p, &names, s)
    }

    pub fn constant_poly(&self, c: u32) -> Poly {
        Poly::constant(self.p, self.ngens(), c)
    }

    /// Evaluate through the series realization.
    pub fn realize(&self, x: &Poly) -> Result<LaurentSeries> {
        let vals = self
            .realization
            .as_ref()
            .ok_or_else(|| Error::Config("model has no series realization".into()))?;
        x.evaluate(vals)
    }

    /// Replace one rule and drop cached powers.
    pub fn set_rule(&mut self, var: usize, gen: usize, rule: Rule) {
        self.rules[var][gen] = rule;
        self.cache.lock().unwrap().clear();
    }

    pub fn display(&self, x: &Poly) -> String {
        x.display_with(&self.names)
    }

    /// `theta_i(g)^e` as a T-series up to the working order.
    fn gen_power(&self, i: usize, g: usize, e: i64) -> Result<TSeries<Poly>> {
        if let Some(s) = self.cache.lock().unwrap().get(&(i, g, e)) {
            return Ok(s.clone());
        }
        let n = self.ngens();
        let ring = PolyRing { p: self.p, nvars: n };
        let mut exps = vec![0i64; n];
        let mut out = TSeries::new(1, self.order);
        match &self.rules[i][g] {
            Rule::Constant => {
                exps[g] = e;
                out.set_uni(0, Poly::monomial(self.p, 1, exps));
            }
            Rule::Standard => {
                for j in 0..=self.order {
                    let c = lucas_binom(self.p, e, j);
                    if c != 0 {
                        exps[g] = e - j as i64;
                        out.set_uni(j, Poly::monomial(self.p, c, exps.clone()));
                    }
                }
            }
            Rule::Custom(cs) => {
                let mut base = TSeries::new(1, self.order);
                for (j, c) in cs.iter().enumerate() {
                    if !c.is_zero() {
                        base.set_uni(j as u64, c.clone());
                    }
                }
                out = base.pow(&ring, e)?;
            }
        }
        self.cache.lock().unwrap().insert((i, g, e), out.clone());
        Ok(out)
    }

    /// `theta_i^(k)` for one derivation variable.
    pub fn theta_var(&self, x: &Poly, i: usize, k: u64) -> Result<Poly> {
        if k == 0 {
            return Ok(x.clone());
        }
        if k > self.order {
            return Err(Error::DepthExceeded { requested: k as usize, depth: self.order as usize });
        }
        let ring = PolyRing { p: self.p, nvars: self.ngens() };
        let mut acc = Poly::zero(self.p, self.ngens());
        for (e, c) in x.terms() {
            // constant factors collapse into one monomial
            let mut fixed = vec![0i64; e.len()];
            let mut factors: Vec<TSeries<Poly>> = Vec::new();
            for (g, &eg) in e.iter().enumerate() {
                if eg == 0 {
                    continue;
                }
                if self.rules[i][g] == Rule::Constant {
                    fixed[g] = eg;
                } else {
                    factors.push(self.gen_power(i, g, eg)?);
                }
            }
            let coeff = match factors.len() {
                0 => Poly::zero(self.p, self.ngens()),
                1 => factors[0].coeff(&ring, &MultiIndex::uni(k)),
                _ => {
                    let mut prod = factors[0].truncate(k);
                    for f in &factors[1..] {
                        prod = prod.mul(&ring, &f.truncate(k));
                    }
                    prod.coeff(&ring, &MultiIndex::uni(k))
                }
            };
            if !coeff.is_zero() {
                acc = acc.add(&coeff.shift(&fixed).scale(c));
            }
        }
        Ok(acc)
    }

    /// `theta(x)` along variable `i` as a T-series up to `order`.
    pub fn theta_series(&self, x: &Poly, i: usize, order: u64) -> Result<TSeries<Poly>> {
        let mut out = TSeries::new(1, order);
        for k in 0..=order {
            out.set_uni(k, self.theta_var(x, i, k)?);
        }
        Ok(out)
    }

    /// Adjoin `u = s^{-1}` with `theta_i(u) = theta_i(s)^{-1}`, expanded as
    /// `u * sum_j (-u (theta_i(s) - s))^j`. Monomials and nonzero constants are
    /// already units and leave the model unchanged.
    pub fn extend_localization(&self, s: &Poly, name: &str) -> Result<PolyModel> {
        if s.is_zero() {
            return Err(Error::NotInvertible("cannot localize at 0".into()));
        }
        if s.num_terms() == 1 {
            return Ok(self.clone());
        }
        if let Some(vals) = &self.realization {
            let v = s.evaluate(vals)?;
            if v.valuation().is_none() {
                return Err(Error::NotInvertible(format!("{} vanishes on the window", self.display(s))));
            }
        }
        let n = self.ngens();
        let lift = |x: &Poly| -> Poly {
            Poly::from_terms(self.p, n + 1, x.terms().map(|(e, c)| {
                let mut e = e.clone();
                e.push(0);
                (e, c)
            }))
        };
        let ring = PolyRing { p: self.p, nvars: n + 1 };
        let u = Poly::var(self.p, n + 1, n);
        let mut rules: Vec<Vec<Rule>> = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let mut row: Vec<Rule> = self.rules[i]
                .iter()
                .map(|r| match r {
                    Rule::Custom(cs) => Rule::Custom(cs.iter().map(lift).collect()),
                    other => other.clone(),
                })
                .collect();
            let mut d = TSeries::new(1, self.order);
            for k in 1..=self.order {
                let c = self.theta_var(s, i, k)?;
                if !c.is_zero() {
                    d.set_uni(k, lift(&c).mul(&u).neg());
                }
            }
            // sum_j (-u D)^j, D has no constant term so j <= order suffices
            let mut acc = TSeries::constant(&ring, 1, self.order, ring.one());
            let mut term = acc.clone();
            for _ in 0..self.order {
                term = term.mul(&ring, &d);
                acc = acc.add(&ring, &term);
            }
            let coeffs: Vec<Poly> =
                (0..=self.order).map(|k| acc.coeff(&ring, &MultiIndex::uni(k)).mul(&u)).collect();
            row.push(if coeffs[1..].iter().all(Poly::is_zero) { Rule::Constant } else { Rule::Custom(coeffs) });
            rules.push(row);
        }
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut model = PolyModel::new(self.p, names, rules, self.order)?;
        if let Some(vals) = &self.realization {
            let mut vals = vals.clone();
            vals.push(s.evaluate(&vals)?.inv()?);
            model.realization = Some(vals);
        }
        Ok(model)
    }

    /// Substitute `gen := s^{-1}` and clear denominators: returns
    /// `sum_j c_j s^(J - j)` for `x = sum_j c_j gen^j`, which vanishes exactly
    /// when `x` does after the substitution.
    pub fn clear_inverse(&self, x: &Poly, gen: usize, s: &Poly) -> Result<Poly> {
        let mut parts: BTreeMap<i64, Poly> = BTreeMap::new();
        for (e, c) in x.terms() {
            let mut rest = e.clone();
            let j = rest[gen];
            rest[gen] = 0;
            let slot = parts.entry(j).or_insert_with(|| Poly::zero(self.p, x.nvars()));
            *slot = slot.add(&Poly::monomial(self.p, c, rest));
        }
        let Some(&top) = parts.keys().next_back() else { return Ok(Poly::zero(self.p, x.nvars())) };
        let ring = PolyRing { p: self.p, nvars: x.nvars() };
        let mut out = Poly::zero(self.p, x.nvars());
        for (j, c) in parts {
            out = out.add(&c.mul(&ring.pow(s, (top - j) as u64)));
        }
        Ok(out)
    }
}

impl Ring for PolyModel {
    type Elem = Poly;

    fn prime(&self) -> Prime {
        self.p
    }
    fn zero(&self) -> Poly {
        Poly::zero(self.p, self.ngens())
    }
    fn one(&self) -> Poly {
        Poly::constant(self.p, self.ngens(), 1)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }
    fn scale(&self, c: u32, a: &Poly) -> Poly {
        a.scale(c)
    }
    fn inv(&self, a: &Poly) -> Result<Poly> {
        a.inv()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn show(&self, a: &Poly) -> String {
        self.display(a)
    }
}

impl IdRing for PolyModel {
    fn nvars(&self) -> usize {
        self.m
    }

    fn theta(&self, x: &Poly, k: &MultiIndex) -> Result<Poly> {
        if k.len() != self.m {
            return Err(Error::LengthMismatch(k.len(), self.m));
        }
        if k.total() > self.order {
            return Err(Error::DepthExceeded { requested: k.total() as usize, depth: self.order as usize });
        }
        let mut y = x.clone();
        for i in (0..self.m).rev() {
            if k.0[i] > 0 {
                y = self.theta_var(&y, i, k.0[i])?;
                if y.is_zero() {
                    break;
                }
            }
        }
        Ok(y)
    }

    fn coords(&self, x: &Poly) -> Result<BTreeMap<Vec<i64>, u32>> {
        Ok(x.terms().map(|(e, c)| (e.clone(), c)).collect())
    }

    fn generators(&self) -> Vec<Poly> {
        (0..self.ngens()).map(|g| self.gen(g)).collect()
    }

    fn samples(&self) -> Vec<Poly> {
        let n = self.ngens();
        let mut out = vec![self.one()];
        for g in 0..n {
            let x = self.gen(g);
            out.push(x.clone());
            out.push(x.mul(&x));
            out.push(x.inv().expect("generators are monomials"));
        }
        for a in 0..n {
            for b in a + 1..n {
                out.push(self.gen(a).mul(&self.gen(b)));
                out.push(self.gen(a).add(&self.gen(b)));
            }
        }
        if n > 0 {
            let x = self.gen(0);
            out.push(x.mul(&x).mul(&x).add(&self.one()));
        }
        out
    }

    fn max_order(&self) -> Option<u64> {
        Some(self.order)
    }
}

/// Model description file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub p: Prime,
    pub m: usize,
    #[serde(alias = "working_order")]
    pub order: u64,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    /// Series literal, e.g. `1*t^1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<String>,
    /// One rule per derivation variable.
    pub rules: Vec<RuleJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleJson {
    Standard,
    Constant,
    /// T-coefficients as literals in the generator names.
    Custom(Vec<String>),
}

impl ModelJson {
    pub fn build(&self) -> Result<PolyModel> {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut rules = vec![Vec::with_capacity(names.len()); self.m];
        for g in &self.generators {
            if g.rules.len() != self.m {
                return Err(Error::Config(format!(
                    "generator `{}` has {} rules, expected {}",
                    g.name,
                    g.rules.len(),
                    self.m
                )));
            }
            for (i, r) in g.rules.iter().enumerate() {
                rules[i].push(match r {
                    RuleJson::Standard => Rule::Standard,
                    RuleJson::Constant => Rule::Constant,
                    RuleJson::Custom(cs) => Rule::Custom(
                        cs.iter().map(|c| parse_poly(self.p, &name_refs, c)).collect::<Result<_>>()?,
                    ),
                });
            }
        }
        let model = PolyModel::new(self.p, names, rules, self.order)?;
        if self.generators.iter().all(|g| g.realization.is_some()) && !self.generators.is_empty() {
            let vals = self
                .generators
                .iter()
                .map(|g| parse_series(self.p, g.realization.as_deref().unwrap()))
                .collect::<Result<Vec<_>>>()?;
            return model.with_realization(vals);
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_matches_termwise() {
        let p = Prime::new(3).unwrap();
        let model = PolyModel::standard(p, 1, 12);
        for a in -5..=9 {
            let x = Poly::monomial(p, 1, vec![a]);
            for n in 0..=12 {
                let got = model.theta_n(&x, n).unwrap();
                let want = crate::series::laurent::theta_term(p, 1, a, n);
                assert_eq!(model.realize(&got).unwrap(), want, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn custom_rule_equals_standard() {
        let p = Prime::new(2).unwrap();
        let t = Poly::var(p, 1, 0);
        let custom = PolyModel::new(
            p,
            vec!["t".into()],
            vec![vec![Rule::Custom(vec![t.clone(), Poly::constant(p, 1, 1)])]],
            10,
        )
        .unwrap();
        let standard = PolyModel::standard(p, 1, 10);
        for a in -4..=6 {
            let x = Poly::monomial(p, 1, vec![a]);
            for n in 0..=10 {
                assert_eq!(custom.theta_n(&x, n).unwrap(), standard.theta_n(&x, n).unwrap());
            }
        }
    }
}
