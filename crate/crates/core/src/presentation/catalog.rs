use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use serde::Serialize;
use serde_json::{Map, Value};

use super::{instantiate, parse, Binding, Presentation};
use crate::classify::{parse_comment, solve_equivalence, EquivRelation};
use crate::error::Result;
use crate::gfplin::{check_prime, primitive_root};
use crate::liering::{LieRing, RingJson};

/// The nine maximal-class rings of order `p^7` and characteristic `p` with
/// descendants of order `p^8`, in database order. `7.650` is a family in `x`.
pub const P8_PARENTS: [&str; 9] = ["7.623", "7.627", "7.633", "7.641", "7.646", "7.648", "7.650", "7.656", "7.657"];

const P7: [(&str, &str, &str); 9] = [
    ("7.623", "bab, ba^3b, pa, pb", ""),
    ("7.627", "bab, ba^3b-ba^5, pa, pb", ""),
    ("7.633", "bab-ba^5, ba^3b, pa, pb", ""),
    ("7.641", "bab-ba^4, ba^3b, pa, pb", ""),
    ("7.646", "bab-ba^4, ba^3b-ba^5, pa, pb", ""),
    ("7.648", "bab-ba^4-ba^5, ba^3b, pa, pb", ""),
    ("7.650", "bab-ba^3, ba^3b-xba^5, pa, pb", "all x"),
    ("7.656", "bab-ba^3-ba^5, ba^3b-ba^5, pa, pb", ""),
    ("7.657", "bab-ba^3-wba^5, ba^3b-ba^5, pa, pb", ""),
];

/// Order `p^8` descendants, grouped by parent; the comment lists the
/// constraints and the parameter equivalence of the line.
const P8: [(&str, &[(&str, &str)]); 9] = [
    (
        "7.623",
        &[
            ("bab, ba^3b, pa, pb, ba^5b", ""),
            ("bab, ba^3b, pa-ba^6, pb, ba^5b", ""),
            ("bab, ba^3b, pa, pb-xba^6, ba^5b", "x != 0, x ~ xa^6"),
            ("bab, ba^3b-ba^6, pa, pb, ba^5b", ""),
            ("bab, ba^3b-ba^6, pa-xba^6, pb, ba^5b", "x != 0, x ~ xa^8"),
            ("bab, ba^3b-ba^6, pa, pb-xba^6, ba^5b", "x != 0, x ~ xa^6"),
            ("bab-ba^6, ba^3b, pa, pb, ba^5b", ""),
            ("bab-ba^6, ba^3b, pa-xba^6, pb, ba^5b", "x != 0, x ~ xa^10"),
            ("bab-ba^6, ba^3b, pa, pb-xba^6, ba^5b", "x != 0, x ~ xa^6"),
            ("bab, ba^3b, pa, pb, ba^6", ""),
            ("bab, ba^3b, pa-ba^5b, pb, ba^6", ""),
            ("bab, ba^3b, pa-wba^5b, pb, ba^6", ""),
            ("bab, ba^3b, pa, pb-ba^5b, ba^6", ""),
            ("bab, ba^3b, pa-xba^5b, pb-ba^5b, ba^6", "x != 0, x ~ xa^6"),
        ],
    ),
    (
        "7.627",
        &[
            ("bab, ba^3b-ba^5, pa, pb", ""),
            ("bab, ba^3b-ba^5, pa-xba^6, pb", "x != 0, x ~ xa^7"),
            ("bab, ba^3b-ba^5, pa, pb-xba^6", "x != 0, x ~ xa^6"),
            ("bab, ba^3b-ba^5, pa-xba^6, pb-yba^6", "x,y != 0, [x,y] ~ [xa^7,ya^6]"),
        ],
    ),
    (
        "7.633",
        &[
            ("bab-ba^5, ba^3b, pa, pb, ba^5b", ""),
            ("bab-ba^5, ba^3b, pa, pb-xba^6, ba^5b", "x != 0, x ~ xa^6"),
            ("bab-ba^5, ba^3b, pa-xba^6, pb, ba^5b", "x != 0, x ~ xa^9"),
            ("bab-ba^5-ba^6, ba^3b, pa, pb, ba^5b", ""),
            ("bab-ba^5-ba^6, ba^3b, pa-xba^6, pb, ba^5b", "x != 0"),
            ("bab-ba^5-ba^6, ba^3b, pa, pb-xba^6, ba^5b", "x != 0"),
            ("bab-ba^5, ba^3b-ba^6, pa, pb, ba^5b", ""),
            ("bab-ba^5, ba^3b-ba^6, pa-xba^6, pb, ba^5b", "x != 0"),
            ("bab-ba^5, ba^3b-ba^6, pa, pb-xba^6, ba^5b", "x != 0"),
            ("bab-ba^5, ba^3b, pa, pb, ba^6", ""),
            ("bab-ba^5, ba^3b, pa-xba^5b, pb, ba^6", "x != 0, x ~ xa^12"),
            ("bab-ba^5, ba^3b, pa, pb-xba^5b, ba^6", "x != 0, x ~ xa^9"),
            ("bab-ba^5, ba^3b, pa-xba^5b, pb-yba^5b, ba^6", "x,y != 0, [x,y] ~ [xa^12,ya^9]"),
        ],
    ),
    (
        "7.641",
        &[
            ("bab-ba^4, ba^3b-xba^6, pa, pb, ba^5b", "all x"),
            ("bab-ba^4, ba^3b-xba^6, pa-yba^6, pb, ba^5b", "y != 0, [x,y] ~ [x,ya^8]"),
            ("bab-ba^4, ba^3b-xba^6, pa, pb-yba^6, ba^5b", "y != 0, [x,y] ~ [x,ya^6]"),
            ("bab-ba^4, ba^3b-ba^6, pa-xba^6, pb-yba^6, ba^5b", "x,y != 0, [x,y] ~ [xa^8,ya^6]"),
            ("bab-ba^4, ba^3b, pa, pb, ba^6", ""),
            ("bab-ba^4, ba^3b, pa-xba^5b, pb, ba^6", "x != 0, x ~ xa^10"),
            ("bab-ba^4, ba^3b, pa, pb-xba^5b, ba^6", "x != 0, x ~ xa^8"),
            ("bab-ba^4, ba^3b, pa-xba^5b, pb-yba^5b, ba^6", "x,y != 0, [x,y] ~ [xa^10,ya^8]"),
        ],
    ),
    ("7.646", &[("bab-ba^4, ba^3b-ba^5, pa-xba^6, pb-yba^6", "all x,y")]),
    (
        "7.648",
        &[
            ("bab-ba^4-ba^5, ba^3b-xba^6, pa, pb, ba^5b", "x != 1"),
            ("bab-ba^4-ba^5, ba^3b-xba^6, pa-yba^6, pb, ba^5b", "x != 1, y != 0"),
            ("bab-ba^4-ba^5, ba^3b-xba^6, pa, pb-yba^6, ba^5b", "x != 1, y != 0"),
            ("bab-ba^4-ba^5, ba^3b-ba^6, pa-xba^6, pb-yba^6, ba^5b", "all x,y"),
            ("bab-ba^4-ba^5, ba^3b, pa-xba^5b, pb-yba^5b, ba^6", "all x,y"),
        ],
    ),
    (
        "7.650",
        &[
            ("bab-ba^3, ba^3b-ba^5, ba^5b, pa, pb", ""),
            ("bab-ba^3, ba^3b-ba^5, ba^5b, pa-xba^6, pb", "x != 0, x ~ xa^7"),
            ("bab-ba^3, ba^3b-ba^5, ba^5b, pa, pb-xba^6", "x != 0, x ~ xa^6"),
            ("bab-ba^3, ba^3b-ba^5, ba^5b, pa-xba^6, pb-yba^6", "x,y != 0, [x,y] ~ [xa^7,ya^6]"),
            ("bab-ba^3, ba^3b-ba^5-ba^6, ba^5b, pa-xba^6, pb-yba^6", "all x,y"),
            ("bab-ba^3-xba^6, ba^3b-ba^5, ba^5b, pa-yba^6, pb-zba^6", "x != 0, [x,y,z] ~ [xa^3,ya^7,za^6]"),
            ("bab-ba^3, ba^3b-xba^5, pa, pb, ba^5b", "x != 1"),
            ("bab-ba^3, ba^3b-xba^5, pa-yba^6, pb, ba^5b", "x != 1, y != 0, [x,y] ~ [x,ya^7]"),
            ("bab-ba^3, ba^3b-xba^5, pa, pb-yba^6, ba^5b", "x != 1, y != 0, [x,y] ~ [x,ya^6]"),
            ("bab-ba^3, ba^3b-xba^5, pa-yba^6, pb-zba^6, ba^5b", "x != 1, y,z != 0, [x,y,z] ~ [x,ya^7,za^6]"),
            ("bab-ba^3, ba^3b-xba^5-ba^6, pa-yba^6, pb-zba^6, ba^5b", "x != 1, all y,z"),
            ("bab-ba^3, ba^3b-3ba^5, pa, pb, ba^6", ""),
            ("bab-ba^3, ba^3b-3ba^5, pa-xba^5b, pb, ba^6", "x != 0, x ~ xa^8"),
            ("bab-ba^3, ba^3b-3ba^5, pa, pb-xba^5b, ba^6", "x != 0, x ~ xa^7"),
            ("bab-ba^3, ba^3b-3ba^5, pa-xba^5b, pb-yba^5b, ba^6", "x,y != 0, [x,y] ~ [xa^8,ya^7]"),
            ("bab-ba^3, ba^3b-3ba^5-ba^5b, pa-xba^5b, pb-yba^5b, ba^6", "[x,y] ~ [x,-y]"),
            ("bab-ba^3, ba^3b-3ba^5-wba^5b, pa-xba^5b, pb-yba^5b, ba^6", "[x,y] ~ [x,-y]"),
            ("bab-ba^3, ba^3b-3ba^5-xba^6, pa-yba^6, pb-zba^6, ba^5b-ba^6", "all x,y,z"),
        ],
    ),
    (
        "7.656",
        &[
            ("bab-ba^3-ba^5, ba^3b-ba^5, ba^5b, pa-xba^6, pb-yba^6", "[x,y] ~ [-x,y]"),
            ("bab-ba^3-ba^5-xba^6, ba^3b-ba^5, ba^5b, pa-yba^6, pb-zba^6", "x != 0, [x,y,z] ~ [-x,y,z]"),
            ("bab-ba^3-ba^5, ba^3b-ba^5-xba^6, ba^5b, pa-yba^6, pb-zba^6", "x != 0, [x,y,z] ~ [-x,y,z]"),
        ],
    ),
    (
        "7.657",
        &[
            ("bab-ba^3-wba^5, ba^3b-ba^5, ba^5b, pa-xba^6, pb-yba^6", "[x,y] ~ [-x,y]"),
            ("bab-ba^3-wba^5-xba^6, ba^3b-ba^5, ba^5b, pa-yba^6, pb-zba^6", "x != 0, [x,y,z] ~ [-x,y,z]"),
            ("bab-ba^3-wba^5, ba^3b-ba^5-xba^6, ba^5b, pa-yba^6, pb-zba^6", "x != 0, [x,y,z] ~ [-x,y,z]"),
        ],
    ),
];

/// One presentation line of a catalog, possibly with parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    /// `7.623` for order `p^7`; `7.650-d12` for line 12 under `7.650`.
    pub library_name: String,
    /// The order-`p^7` parent (itself, for order `p^7` entries).
    pub subsection: String,
    /// 1-based position within the subsection.
    pub line: usize,
    pub presentation: Presentation,
    pub relation: EquivRelation,
}

impl CatalogEntry {
    fn new(library_name: String, subsection: &str, line: usize, rels: &str, comment: &str, class: usize) -> Self {
        let presentation = parse(&format!("<a,b | {rels}, class {class}>")).expect("catalog presentations parse");
        let relation = parse_comment(comment, &presentation.free_params()).expect("catalog comments parse");
        CatalogEntry { library_name, subsection: subsection.to_string(), line, presentation, relation }
    }

    /// The parameter comment, or `None` for a line without parameters.
    pub fn comment(&self) -> Option<String> {
        (!self.relation.params.is_empty()).then(|| self.relation.to_string())
    }

    /// Every instance, with parameters running over canonical representatives.
    pub fn instances(&self, p: u32, w: Option<u32>) -> Result<Vec<CatalogRing>> {
        let w = match w {
            Some(w) => w,
            None => primitive_root(p)?,
        };
        let tuples = solve_equivalence(&self.relation, p, w)?;
        tuples.iter().map(|t| self.instance(p, w, t)).collect()
    }

    pub fn instance(&self, p: u32, w: u32, values: &[u32]) -> Result<CatalogRing> {
        let mut binding = Binding::new().with('w', w);
        for (&q, &v) in self.relation.params.iter().zip(values) {
            binding.set(q, v);
        }
        let ring = instantiate(&self.presentation, p, &binding)?;
        let mut params: Vec<(char, u32)> = self.relation.params.iter().copied().zip(values.iter().copied()).collect();
        if self.presentation.params().contains(&'w') {
            params.insert(0, ('w', w));
        }
        Ok(CatalogRing { entry: self.clone(), params, ring })
    }
}

/// A catalog entry instantiated at one prime and parameter tuple.
#[derive(Clone, Debug)]
pub struct CatalogRing {
    pub entry: CatalogEntry,
    /// Parameter values, including `w` when the presentation uses it.
    pub params: Vec<(char, u32)>,
    pub ring: LieRing,
}

#[derive(Serialize)]
struct Record<'a> {
    library_name: &'a str,
    subsection: &'a str,
    line: usize,
    params: Map<String, Value>,
    constraints: Vec<String>,
    equivalence_comment: Option<String>,
    presentation: String,
    ring: RingJson,
}

impl CatalogRing {
    /// `7.650-d12[x=1,y=2]`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.entry.library_name.clone();
        }
        let ps: Vec<String> = self.params.iter().map(|(q, v)| format!("{q}={v}")).collect();
        format!("{}[{}]", self.entry.library_name, ps.join(","))
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        let params = self.params.iter().map(|(q, v)| (q.to_string(), Value::from(*v))).collect();
        let rec = Record {
            library_name: &self.entry.library_name,
            subsection: &self.entry.subsection,
            line: self.entry.line,
            params,
            constraints: self.entry.relation.constraint_strings(),
            equivalence_comment: self.entry.relation.action_string(),
            presentation: self.entry.presentation.to_string(),
            ring: RingJson::from(&self.ring),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    /// The presentation with parameter values substituted, for reading
    /// alongside the printed lists.
    pub fn to_text(&self) -> String {
        let mut s = self.entry.presentation.to_string();
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(q, v)| format!("{q}={v}")).collect();
            s = format!("{s}  ({})", ps.join(", "));
        }
        format!("{}: {}", self.entry.library_name, s)
    }
}

/// The order-`p^7` entries (`7.650` with its parameter).
pub fn p7_entries() -> Vec<CatalogEntry> {
    P7.iter()
        .enumerate()
        .map(|(i, (name, rels, comment))| CatalogEntry::new(name.to_string(), name, i + 1, rels, comment, 6))
        .collect()
}

/// The order-`p^8` entries, in subsection order.
pub fn p8_entries() -> Vec<CatalogEntry> {
    P8.iter()
        .flat_map(|(parent, lines)| {
            lines.iter().enumerate().map(move |(i, (rels, comment))| {
                CatalogEntry::new(format!("{parent}-d{}", i + 1), parent, i + 1, rels, comment, 7)
            })
        })
        .collect()
}

fn instantiate_all(entries: Vec<CatalogEntry>, p: u32, w: Option<u32>) -> Result<Vec<CatalogRing>> {
    check_prime(p)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts: Vec<Vec<CatalogRing>> = entries.par_iter().map(|e| e.instances(p, w)).collect::<Result<_>>()?;
        Ok(parts.into_iter().flatten().collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let parts: Vec<Vec<CatalogRing>> = entries.iter().map(|e| e.instances(p, w)).collect::<Result<_>>()?;
        Ok(parts.into_iter().flatten().collect())
    }
}

type CatalogKey = (usize, u32, Option<u32>);

static MEMO: LazyLock<RwLock<HashMap<CatalogKey, Arc<Vec<CatalogRing>>>>> = LazyLock::new(Default::default);

/// Instantiated catalogs are pure functions of `(order, p, w)`; compute each once.
fn memoized(order: usize, p: u32, w: Option<u32>, entries: fn() -> Vec<CatalogEntry>) -> Result<Vec<CatalogRing>> {
    let key = (order, p, w);
    if let Some(hit) = MEMO.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(hit.as_ref().clone());
    }
    let rings = Arc::new(instantiate_all(entries(), p, w)?);
    MEMO.write().unwrap_or_else(|e| e.into_inner()).entry(key).or_insert_with(|| rings.clone());
    Ok(rings.as_ref().clone())
}

/// The `p + 8` maximal-class rings of order `p^7` and characteristic `p`;
/// `w` overrides the primitive root.
pub fn catalog_p7(p: u32, w: Option<u32>) -> Result<Vec<CatalogRing>> {
    memoized(7, p, w, p7_entries)
}

/// Every maximal-class ring of order `p^8`, one per isomorphism class.
pub fn catalog_p8(p: u32, w: Option<u32>) -> Result<Vec<CatalogRing>> {
    memoized(8, p, w, p8_entries)
}
