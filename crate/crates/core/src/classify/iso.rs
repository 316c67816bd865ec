//! Isomorphism testing by lifting through the lower p-central series.
//!
//! Both rings are put on graded bases. At weight 1 any matching of
//! generators is an isomorphism. Given an isomorphism `σ` between the
//! weight-`k−1` quotients, both weight-`k` quotients are quotients of the
//! p-cover `Â` of the first one: by `T_A` for the map fixing generators and
//! by `T_B` for the map sending generators to lifts of `σ`. They are
//! isomorphic iff some automorphism of the smaller ring carries `T_A` to
//! `T_B` in the multiplicator, and that automorphism corrects `σ`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generation::{
    cover_kernel, extend_to_cover, gl_generators, lift_automorphisms, p_cover, AutGroup, Automorphism,
};
use crate::gfplin::{primitive_root, SchreierTree};
use crate::liering::{lower_central_series, lower_p_central_series, standardize, Ideal, LieRing, StandardForm};

/// Environment variable capping a single search, in milliseconds.
pub const BUDGET_ENV: &str = "LIERING_BUDGET_MS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoResult {
    /// Images in the second ring of each basis element of the first.
    Isomorphic(Vec<Vec<u32>>),
    /// The first invariant or lifting step that tells the rings apart.
    NonIsomorphic(String),
    /// The search budget ran out.
    Indeterminate,
}

impl IsoResult {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            IsoResult::Isomorphic(_) => Some(true),
            IsoResult::NonIsomorphic(_) => Some(false),
            IsoResult::Indeterminate => None,
        }
    }
}

/// Cheap isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub p: u32,
    pub dim: usize,
    /// `log_p |L^i|` down the lower central series.
    pub lower_central: Vec<usize>,
    /// `log_p |L_i|` down the lower p-central series.
    pub lower_p_central: Vec<usize>,
    /// `log_p |p^k L|` for `k = 0, 1, …`, which fixes the additive group.
    pub p_powers: Vec<usize>,
}

pub fn invariants(ring: &LieRing) -> Invariants {
    let mut p_powers = vec![ring.dim()];
    let mut cur = Ideal::whole(ring);
    while !cur.is_zero() {
        let next: Vec<Vec<u32>> = cur.generators().map(|g| ring.p_multiple(g)).collect();
        cur = Ideal::span(ring, &next);
        p_powers.push(cur.dim());
    }
    Invariants {
        p: ring.p(),
        dim: ring.dim(),
        lower_central: lower_central_series(ring).iter().map(Ideal::dim).collect(),
        lower_p_central: lower_p_central_series(ring).iter().map(Ideal::dim).collect(),
        p_powers,
    }
}

fn invariant_difference(a: &Invariants, b: &Invariants) -> Option<String> {
    let fields: [(&str, String, String); 5] = [
        ("characteristic prime", a.p.to_string(), b.p.to_string()),
        ("order exponent", a.dim.to_string(), b.dim.to_string()),
        ("lower central series", format!("{:?}", a.lower_central), format!("{:?}", b.lower_central)),
        ("lower p-central series", format!("{:?}", a.lower_p_central), format!("{:?}", b.lower_p_central)),
        ("additive group", format!("{:?}", a.p_powers), format!("{:?}", b.p_powers)),
    ];
    fields.into_iter().find(|(_, x, y)| x != y).map(|(name, x, y)| format!("{name}: {x} vs {y}"))
}

/// Search state shared by the steps of one test.
#[derive(Clone, Debug)]
pub struct IsoContext {
    deadline: Option<Instant>,
}

impl IsoContext {
    pub fn new(budget: Option<Duration>) -> Self {
        IsoContext { deadline: budget.map(|d| Instant::now() + d) }
    }

    /// Budget from `LIERING_BUDGET_MS`, unlimited when unset or unparsable.
    pub fn from_env() -> Self {
        let ms = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok());
        IsoContext::new(ms.map(Duration::from_millis))
    }

    fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }

    pub fn is_isomorphic(&self, a: &LieRing, b: &LieRing) -> Result<IsoResult> {
        if a == b {
            return Ok(IsoResult::Isomorphic((0..a.dim()).map(|k| a.basis(k)).collect()));
        }
        if let Some(why) = invariant_difference(&invariants(a), &invariants(b)) {
            return Ok(IsoResult::NonIsomorphic(why));
        }
        let sa = graded_form(a)?;
        let sb = graded_form(b)?;
        let (ga, gb) = (sa.as_ref().map_or(a, |s| &s.ring), sb.as_ref().map_or(b, |s| &s.ring));
        let gens = match self.graded(ga, gb) {
            Ok(Ok(g)) => g,
            Ok(Err(why)) => return Ok(IsoResult::NonIsomorphic(why)),
            Err(Error::BudgetExceeded) => return Ok(IsoResult::Indeterminate),
            Err(e) => return Err(e),
        };
        let graded_images = ga.images_from_generators(gb, &gens)?;
        let images: Vec<Vec<u32>> = (0..a.dim())
            .map(|k| {
                let x = match &sa {
                    Some(s) => s.forward(a, &a.basis(k)),
                    None => a.basis(k),
                };
                let y = LieRing::apply_linear(gb, &graded_images, &x);
                match &sb {
                    Some(s) => s.backward(b, &y),
                    None => y,
                }
            })
            .collect();
        if !is_isomorphism(a, b, &images) {
            return Err(Error::Extension("lifted map failed verification".into()));
        }
        Ok(IsoResult::Isomorphic(images))
    }

    /// Generator images of an isomorphism between graded rings with equal
    /// invariants, or the reason there is none.
    fn graded(&self, a: &LieRing, b: &LieRing) -> Result<std::result::Result<Vec<Vec<u32>>, String>> {
        let p = a.p();
        let c = a.top_weight();
        let d = a.layer(1).len();
        let q1 = a.truncate(1);
        let mut group = AutGroup::new(&q1);
        for mat in gl_generators(p, d, primitive_root(p)?) {
            let imgs: Vec<Vec<u32>> = mat.rows().map(|r| r.to_vec()).collect();
            group.sift(&Automorphism::from_generator_images_unchecked(&q1, &imgs)?)?;
        }
        let mut sigma: Vec<Vec<u32>> = (0..d).map(|i| q1.basis(i)).collect();
        for k in 2..=c {
            self.check()?;
            let q = group.ring().clone();
            let (ak, bk) = (a.truncate(k), b.truncate(k));
            let cov = p_cover(&q)?;
            let own: Vec<Vec<u32>> = (0..d).map(|i| ak.basis(i)).collect();
            let ta = cover_kernel(&cov, &ak, &own)?;
            let lifted: Vec<Vec<u32>> = sigma.iter().map(|x| pad(x, bk.dim())).collect();
            let tb = cover_kernel(&cov, &bk, &lifted)?;
            let action = extend_to_cover(&group, &cov)?;
            let tree = SchreierTree::build(&ta, &action.restriction_to_z)?;
            let Some(y) = tree.position(&tb) else {
                return Ok(Err(format!("quotients of p-class {k} differ")));
            };
            let mut beta = Automorphism::identity(&q);
            for g in tree.word(y) {
                beta = group.generators()[g].compose(&q, &beta);
            }
            let to_b = cov.cover().images_from_generators(&bk, &lifted)?;
            sigma = (0..d).map(|i| LieRing::apply_linear(&bk, &to_b, &cov.lift(&beta.images()[i]))).collect();
            if k < c {
                self.check()?;
                group = lift_automorphisms(&group, &ak)?;
            }
        }
        Ok(Ok(sigma))
    }
}

fn pad(x: &[u32], n: usize) -> Vec<u32> {
    let mut v = x.to_vec();
    v.resize(n, 0);
    v
}

fn graded_form(ring: &LieRing) -> Result<Option<StandardForm>> {
    ring.validate()?;
    if ring.is_graded() && ring.definitions().is_some() {
        Ok(None)
    } else {
        standardize(ring).map(Some)
    }
}

/// Whether basis images define a bijective homomorphism `a → b`.
pub fn is_isomorphism(a: &LieRing, b: &LieRing, images: &[Vec<u32>]) -> bool {
    a.dim() == b.dim() && a.is_homomorphism(b, images) && Ideal::span(b, images).dim() == b.dim()
}

/// Decides isomorphism under the budget in `LIERING_BUDGET_MS`.
pub fn is_isomorphic(a: &LieRing, b: &LieRing) -> Result<IsoResult> {
    IsoContext::from_env().is_isomorphic(a, b)
}

/// Isomorphism by trying every tuple of generator images; tiny rings only.
pub fn brute_force_isomorphic(a: &LieRing, b: &LieRing) -> Result<bool> {
    if a.p() != b.p() || a.dim() != b.dim() {
        return Ok(false);
    }
    let sa = graded_form(a)?;
    let ga = sa.as_ref().map_or(a, |s| &s.ring);
    let d = ga.layer(1).len();
    let mut found = false;
    crate::generation::for_each_generator_tuple(b, d, |imgs| {
        if let Ok(all) = ga.images_from_generators(b, imgs) {
            found = is_isomorphism(ga, b, &all);
        }
        !found
    });
    Ok(found)
}
