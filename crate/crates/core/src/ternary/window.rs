use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::rc::Rc;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::coeff::{Coeff, SmallGaussian};
use super::{identity, Algebra, Element, Family, Generator, Mode, Report, TwistPair, Violation};
use crate::error::{Error, Result};
use crate::scalar::{Bindings, GaussianRational, SymbolicScalar};

type CGen = (usize, i64);
/// Sparse element with distinct generators.
type CElem<C> = Vec<(CGen, C)>;

enum Fail {
    Error(Error),
    /// The small representation ran out of range.
    Overflow,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Error(e)
    }
}

type Step<T> = std::result::Result<T, Fail>;

/// Concrete evaluator used as an independent check of the symbolic
/// engine: integer degrees, exact numeric coefficients, memoized
/// structure constants.
pub struct WindowEngine {
    algebra: Algebra,
    twist: Option<TwistPair>,
    families: Vec<Family>,
    bindings: Bindings,
    shared: RwLock<HashMap<[CGen; 3], Arc<CElem<GaussianRational>>>>,
}

struct Cache<C> {
    brackets: HashMap<[CGen; 3], Rc<CElem<C>>>,
    alpha: [HashMap<CGen, Rc<CElem<C>>>; 2],
}

impl<C> Default for Cache<C> {
    fn default() -> Self {
        Cache {
            brackets: HashMap::new(),
            alpha: [HashMap::new(), HashMap::new()],
        }
    }
}

#[derive(Default)]
struct Caches {
    small: Cache<SmallGaussian>,
    exact: Cache<GaussianRational>,
}

fn accumulate<C: Coeff>(acc: &mut CElem<C>, g: CGen, v: C) -> Step<()> {
    match acc.iter_mut().find(|(h, _)| *h == g) {
        Some((_, c)) => *c = c.add(&v).ok_or(Fail::Overflow)?,
        None => acc.push((g, v)),
    }
    Ok(())
}

fn units<C: Coeff>(tuple: &[CGen; 5]) -> [CElem<C>; 5] {
    tuple.map(|g| vec![(g, C::one())])
}

fn finish<C: Coeff>(mut acc: CElem<C>) -> CElem<C> {
    acc.retain(|(_, c)| !c.is_zero());
    acc.sort_by_key(|(g, _)| *g);
    acc
}

impl WindowEngine {
    /// `bindings` must give exact values for every free parameter, and
    /// `q` when the algebra or twist uses it.
    pub fn new(a: &Algebra, t: Option<&TwistPair>, bindings: &Bindings) -> Result<Self> {
        let algebra = a.specialize(bindings)?;
        let twist = t
            .map(|t| t.specialize(algebra.specialization()))
            .transpose()?;
        let mut families = a.families().to_vec();
        families.sort();
        Ok(WindowEngine {
            algebra,
            twist,
            families,
            bindings: bindings.clone(),
            shared: RwLock::default(),
        })
    }

    fn family_index(&self, f: &Family) -> Result<usize> {
        self.families
            .iter()
            .position(|g| g == f)
            .ok_or_else(|| Error::UnknownFamily {
                algebra: self.algebra.name().to_string(),
                family: f.clone(),
            })
    }

    fn to_generator(&self, g: CGen) -> Generator {
        Generator::new(self.families[g.0].clone(), g.1)
    }

    fn lower_element<C: Coeff>(&self, e: &Element) -> Step<CElem<C>> {
        let mut out = Vec::with_capacity(e.len());
        for (g, c) in e.terms() {
            let d = g
                .degree
                .as_constant()
                .ok_or_else(|| Error::Precondition(format!("degree of {g} is not concrete")))?;
            let v = c.as_constant().ok_or_else(|| {
                let free = c.param_symbols().into_iter().next();
                match free {
                    Some(s) => Error::UnboundSymbol(s.to_string()),
                    None => Error::UnboundSymbol("q".into()),
                }
            })?;
            out.push((
                (self.family_index(&g.family)?, d),
                C::from_exact(&v).ok_or(Fail::Overflow)?,
            ));
        }
        Ok(finish(out))
    }

    fn to_element<C: Coeff>(&self, e: &CElem<C>) -> Element {
        let mut out = Element::zero();
        for (g, c) in e {
            out.add_term(
                self.to_generator(*g),
                SymbolicScalar::constant(c.to_exact()),
            );
        }
        out
    }

    /// Structure constants in exact form, shared by all workers.
    fn exact_bracket(&self, key: [CGen; 3]) -> Result<Arc<CElem<GaussianRational>>> {
        if let Some(v) = self.shared.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(v));
        }
        let [a, b, c] = key.map(|g| self.to_generator(g));
        let v = match self.lower_element(&self.algebra.bracket_generators(&a, &b, &c)?) {
            Ok(v) => Arc::new(v),
            Err(Fail::Error(e)) => return Err(e),
            Err(Fail::Overflow) => unreachable!("big rationals do not overflow"),
        };
        self.shared
            .write()
            .expect("cache lock")
            .insert(key, Arc::clone(&v));
        Ok(v)
    }

    fn bracket_gen<C: Coeff>(&self, cache: &mut Cache<C>, key: [CGen; 3]) -> Step<Rc<CElem<C>>> {
        if let Some(v) = cache.brackets.get(&key) {
            return Ok(Rc::clone(v));
        }
        let exact = self.exact_bracket(key)?;
        let v = exact
            .iter()
            .map(|(g, c)| C::from_exact(c).map(|c| (*g, c)).ok_or(Fail::Overflow))
            .collect::<Step<Vec<_>>>()?;
        let v = Rc::new(v);
        cache.brackets.insert(key, Rc::clone(&v));
        Ok(v)
    }

    fn bracket<C: Coeff>(
        &self,
        cache: &mut Cache<C>,
        x: &CElem<C>,
        y: &CElem<C>,
        w: &CElem<C>,
    ) -> Step<CElem<C>> {
        let mut acc = Vec::new();
        for (gx, cx) in x {
            for (gy, cy) in y {
                let cxy = cx.mul(cy).ok_or(Fail::Overflow)?;
                for (gw, cw) in w {
                    let b = self.bracket_gen(cache, [*gx, *gy, *gw])?;
                    if b.is_empty() {
                        continue;
                    }
                    let c = cxy.mul(cw).ok_or(Fail::Overflow)?;
                    for (g, v) in b.iter() {
                        accumulate(&mut acc, *g, c.mul(v).ok_or(Fail::Overflow)?)?;
                    }
                }
            }
        }
        Ok(finish(acc))
    }

    fn alpha<C: Coeff>(&self, cache: &mut Cache<C>, which: usize, x: &CElem<C>) -> Step<CElem<C>> {
        let t = match &self.twist {
            Some(t) => t,
            None => return Ok(x.clone()),
        };
        let map = if which == 0 { &t.alpha1 } else { &t.alpha2 };
        let mut acc = Vec::new();
        for (g, c) in x {
            let img = match cache.alpha[which].get(g) {
                Some(v) => Rc::clone(v),
                None => {
                    let v =
                        Rc::new(self.lower_element(&map.apply_generator(&self.to_generator(*g))?)?);
                    cache.alpha[which].insert(*g, v.clone());
                    v
                }
            };
            for (h, v) in img.iter() {
                accumulate(&mut acc, *h, c.mul(v).ok_or(Fail::Overflow)?)?;
            }
        }
        Ok(finish(acc))
    }

    fn residual_c<C: Coeff>(&self, cache: &mut Cache<C>, x: &[CElem<C>; 5]) -> Step<CElem<C>> {
        let [x1, x2, x3, x4, x5] = x;
        let mut acc = Vec::new();
        let mut add = |e: CElem<C>, negate: bool| -> Step<()> {
            for (g, v) in e {
                let v = if negate {
                    v.neg().ok_or(Fail::Overflow)?
                } else {
                    v
                };
                accumulate(&mut acc, g, v)?;
            }
            Ok(())
        };
        let b345 = self.bracket(cache, x3, x4, x5)?;
        let (ax1, ax2) = (self.alpha(cache, 0, x1)?, self.alpha(cache, 1, x2)?);
        add(self.bracket(cache, &ax1, &ax2, &b345)?, false)?;
        let b123 = self.bracket(cache, x1, x2, x3)?;
        let (ax4, ax5) = (self.alpha(cache, 0, x4)?, self.alpha(cache, 1, x5)?);
        add(self.bracket(cache, &b123, &ax4, &ax5)?, true)?;
        let b124 = self.bracket(cache, x1, x2, x4)?;
        let ax3 = self.alpha(cache, 0, x3)?;
        add(self.bracket(cache, &ax3, &b124, &ax5)?, true)?;
        let b125 = self.bracket(cache, x1, x2, x5)?;
        let ax4b = self.alpha(cache, 1, x4)?;
        add(self.bracket(cache, &ax3, &ax4b, &b125)?, true)?;
        Ok(finish(acc))
    }

    /// Residual of a tuple of single generators, in small integers when
    /// they suffice and in big rationals otherwise.
    fn residual_gens(&self, caches: &mut Caches, tuple: &[CGen; 5]) -> Result<Option<Element>> {
        match self.residual_c::<SmallGaussian>(&mut caches.small, &units(tuple)) {
            Ok(r) => return Ok((!r.is_empty()).then(|| self.to_element(&r))),
            Err(Fail::Error(e)) => return Err(e),
            Err(Fail::Overflow) => {}
        }
        match self.residual_c::<GaussianRational>(&mut caches.exact, &units(tuple)) {
            Ok(r) => Ok((!r.is_empty()).then(|| self.to_element(&r))),
            Err(Fail::Error(e)) => Err(e),
            Err(Fail::Overflow) => unreachable!("big rationals do not overflow"),
        }
    }

    /// Residual at one concrete tuple of generators.
    pub fn residual_at(&self, gens: &[Generator; 5]) -> Result<Element> {
        let mut tuple = [(0, 0); 5];
        for (slot, g) in tuple.iter_mut().zip(gens) {
            let d = g
                .degree
                .as_constant()
                .ok_or_else(|| Error::Precondition(format!("degree of {g} is not concrete")))?;
            *slot = (self.family_index(&g.family)?, d);
        }
        Ok(self
            .residual_gens(&mut Caches::default(), &tuple)?
            .unwrap_or_else(Element::zero))
    }

    fn bindings_text(&self) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> = self
            .bindings
            .params
            .iter()
            .map(|(s, v)| (s.to_string(), v.to_string()))
            .collect();
        if let Some(q) = &self.bindings.q {
            out.insert("q".into(), q.to_string());
        }
        out
    }

    /// Every 5-tuple of generators with degrees in `window`.
    pub fn run(&self, window: RangeInclusive<i64>) -> Result<Report> {
        let gens: Vec<CGen> = (0..self.families.len())
            .flat_map(|f| window.clone().map(move |d| (f, d)))
            .collect();
        let n = gens.len();
        let witness = self.bindings_text();
        let per_first: Vec<Vec<Violation>> = gens
            .par_iter()
            .map_init(Caches::default, |caches, g1| {
                let mut found = Vec::new();
                for code in 0..n.pow(4) {
                    let mut c = code;
                    let mut tuple = [*g1; 5];
                    for slot in (1..5).rev() {
                        tuple[slot] = gens[c % n];
                        c /= n;
                    }
                    if let Some(residual) = self.residual_gens(caches, &tuple)? {
                        let labels: Vec<Generator> =
                            tuple.iter().map(|g| self.to_generator(*g)).collect();
                        found.push(Violation {
                            pattern: identity::pattern_label(&labels),
                            residual,
                            bindings: Some(witness.clone()),
                        });
                    }
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;
        Ok(Report {
            algebra: identity::algebra_label(&self.algebra),
            twist: self.twist.as_ref().map(|t| t.name.clone()),
            mode: Mode::Window,
            checked: n.pow(5),
            violations: per_first.into_iter().flatten().collect(),
        })
    }
}

/// Exhaustive check over all concrete 5-tuples with degrees in `window`.
pub fn brute_force_window(
    a: &Algebra,
    t: Option<&TwistPair>,
    window: RangeInclusive<i64>,
    bindings: &Bindings,
) -> Result<Report> {
    WindowEngine::new(a, t, bindings)?.run(window)
}
