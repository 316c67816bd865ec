use serde::{Deserialize, Serialize};

use super::{Definition, LieRing};
use crate::error::{Error, Result};

/// Canonical serialized form. Field order is fixed and all coefficients are
/// reduced, so identical rings serialize to identical bytes.
///
/// `orders[i]` is the exponent of the relative order of `b_i`; the basis is a
/// refined (p-adic) one, so this is always 1. `products` lists `b_i·b_j` for
/// `i < j` in lexicographic order; `pmults[i]` is `p·b_i`, written `[]` when
/// zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub p: u32,
    pub orders: Vec<u32>,
    pub weights: Vec<u32>,
    pub products: Vec<Vec<u32>>,
    pub pmults: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definitions: Option<Vec<Definition>>,
}

impl From<&LieRing> for RingJson {
    fn from(r: &LieRing) -> Self {
        let n = r.dim();
        let mut products = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                products.push(r.basis_product(i, j).to_vec());
            }
        }
        let pmults = (0..n)
            .map(|i| {
                let v = r.basis_pmult(i);
                if v.iter().all(|&c| c == 0) {
                    Vec::new()
                } else {
                    v.to_vec()
                }
            })
            .collect();
        RingJson {
            p: r.p(),
            orders: vec![1; n],
            weights: r.weights().to_vec(),
            products,
            pmults,
            definitions: r.definitions().map(|d| d.to_vec()),
        }
    }
}

impl RingJson {
    pub fn to_ring(&self) -> Result<LieRing> {
        let n = self.weights.len();
        let p = self.p;
        if self.orders.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.orders.len() });
        }
        if let Some(&e) = self.orders.iter().find(|&&e| e != 1) {
            return Err(Error::Json(format!(
                "relative order exponent {e} unsupported; refine the basis so every element has relative order p"
            )));
        }
        if self.products.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch { expected: n * n.saturating_sub(1) / 2, found: self.products.len() });
        }
        if self.pmults.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.pmults.len() });
        }
        let reduce = |v: &Vec<u32>| -> Result<Vec<u32>> {
            match v.len() {
                0 => Ok(vec![0; n]),
                l if l == n => Ok(v.iter().map(|&c| c % p).collect()),
                l => Err(Error::DimensionMismatch { expected: n, found: l }),
            }
        };
        let mut table = vec![0u32; n * n * n];
        let mut it = self.products.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = reduce(it.next().unwrap())?;
                table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
            }
        }
        let mut pmul = vec![0u32; n * n];
        for (i, v) in self.pmults.iter().enumerate() {
            pmul[i * n..(i + 1) * n].copy_from_slice(&reduce(v)?);
        }
        let mut ring = LieRing::from_parts(p, self.weights.clone(), table, pmul, self.definitions.clone());
        // b_j·b_i = −(b_i·b_j), negated with carries through the power table
        for i in 0..n {
            for j in i + 1..n {
                let v = ring.neg(ring.basis_product(i, j));
                ring.table[(j * n + i) * n..(j * n + i + 1) * n].copy_from_slice(&v);
            }
        }
        ring.validate()?;
        Ok(ring)
    }
}

impl LieRing {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&RingJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<LieRing> {
        let j: RingJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        j.to_ring()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::tests::heisenberg;

    #[test]
    fn round_trip_is_byte_stable() {
        let h = heisenberg(5);
        let s = h.to_json();
        assert_eq!(
            s,
            r#"{"p":5,"orders":[1,1,1],"weights":[1,1,2],"products":[[0,0,4],[0,0,0],[0,0,0]],"pmults":[[],[],[]],"definitions":["generator","generator",{"product":{"left":1,"right":0}}]}"#
        );
        let back = LieRing::from_json(&s).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn rejects_bad_input() {
        let inconsistent = r#"{"p":5,"orders":[1,1,1],"weights":[1,1,2],"products":[[0,0,4],[0,0,0],[0,0,0]],"pmults":[[0,1,0],[],[]]}"#;
        assert!(matches!(LieRing::from_json(inconsistent), Err(Error::Inconsistent(_))));
        let orders = r#"{"p":5,"orders":[2],"weights":[1],"products":[],"pmults":[[]]}"#;
        assert!(matches!(LieRing::from_json(orders), Err(Error::Json(_))));
        assert!(matches!(LieRing::from_json("{"), Err(Error::Json(_))));
    }
}
