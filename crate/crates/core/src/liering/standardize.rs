use super::{inv_scalar, lower_p_central_series, Definition, Ideal, LieRing};
use crate::error::{Error, Result};

/// A graded basis for a ring together with the basis changes.
#[derive(Clone, Debug)]
pub struct StandardForm {
    /// The ring on its new basis: weights are p-central weights, generators
    /// come first and every other element carries a definition.
    pub ring: LieRing,
    /// New coordinates of each old basis element.
    pub to_standard: Vec<Vec<u32>>,
    /// Each new basis element in old coordinates.
    pub from_standard: Vec<Vec<u32>>,
}

impl StandardForm {
    pub fn forward(&self, original: &LieRing, x: &[u32]) -> Vec<u32> {
        debug_assert_eq!(x.len(), original.dim());
        LieRing::apply_linear(&self.ring, &self.to_standard, x)
    }

    pub fn backward(&self, original: &LieRing, x: &[u32]) -> Vec<u32> {
        LieRing::apply_linear(original, &self.from_standard, x)
    }
}

/// Sifting against `S_{w+1}` plus the chosen layer-`w` elements, tracking the
/// layer coordinates of each row.
struct LayerSolver {
    rows: Vec<Option<(Vec<u32>, Vec<u32>)>>,
    width: usize,
}

impl LayerSolver {
    fn new(ring: &LieRing, below: &Ideal, width: usize) -> Self {
        let mut rows = vec![None; ring.dim()];
        for (l, g) in below.leads().into_iter().zip(below.generators()) {
            rows[l] = Some((g.clone(), vec![0; width]));
        }
        LayerSolver { rows, width }
    }

    fn sift(&self, ring: &LieRing, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let p = ring.p();
        let mut v = v.to_vec();
        let mut lab = vec![0u32; self.width];
        while let Some(l) = v.iter().position(|&c| c != 0) {
            let Some((row, rl)) = &self.rows[l] else { break };
            let c = v[l];
            v = ring.combine(&[(1, &v), (-(c as i64), row)]);
            for (a, &b) in lab.iter_mut().zip(rl) {
                *a = ((*a as u64 + c as u64 * b as u64) % p as u64) as u32;
            }
        }
        (v, lab)
    }

    fn insert(&mut self, ring: &LieRing, x: &[u32], label: Vec<u32>) {
        let p = ring.p();
        let mut stack = vec![(x.to_vec(), label)];
        while let Some((v, lab0)) = stack.pop() {
            let (r, lab) = self.sift(ring, &v);
            let lab: Vec<u32> = lab0.iter().zip(&lab).map(|(&a, &b)| (a + p - b) % p).collect();
            if let Some(l) = r.iter().position(|&c| c != 0) {
                let s = inv_scalar(r[l], p);
                let row = ring.scale(&r, s);
                let lab: Vec<u32> = lab.iter().map(|&a| ((a as i64 * s) % p as i64) as u32).collect();
                stack.push((ring.p_multiple(&row), vec![0; self.width]));
                self.rows[l] = Some((row, lab));
            }
        }
    }
}

/// Rewrites a ring on a basis adapted to its lower p-central series, with a
/// definition for every non-generator.
pub fn standardize(ring: &LieRing) -> Result<StandardForm> {
    let series = lower_p_central_series(ring);
    let c = series.len() - 1;
    let mut chosen: Vec<(Vec<u32>, u32, Definition)> = Vec::new();
    let mut layer_start = vec![0usize; c + 2];

    // generators: basis elements independent modulo S_2
    if c >= 1 {
        let mut h = series[1].clone();
        for m in 0..ring.dim() {
            if !h.insert(ring, &ring.basis(m)).is_empty() {
                chosen.push((ring.basis(m), 1, Definition::Generator));
            }
        }
        layer_start[2] = chosen.len();
    }
    let d = chosen.len();
    for w in 1..c {
        let mut h = series[w + 1].clone();
        let target = series[w].dim() - series[w + 1].dim();
        let layer: Vec<usize> = (layer_start[w]..layer_start[w + 1]).collect();
        let mut cands: Vec<(Vec<u32>, Definition)> = Vec::new();
        for &e in &layer {
            for g in 0..d {
                if w == 1 && e <= g {
                    continue;
                }
                cands.push((ring.mul(&chosen[e].0, &chosen[g].0), Definition::Product { left: e, right: g }));
            }
        }
        for &e in &layer {
            cands.push((ring.p_multiple(&chosen[e].0), Definition::Power(e)));
        }
        let before = chosen.len();
        for (x, def) in cands {
            if chosen.len() - before == target {
                break;
            }
            if !h.insert(ring, &x).is_empty() {
                chosen.push((x, (w + 1) as u32, def));
            }
        }
        if chosen.len() - before != target {
            return Err(Error::Inconsistent(format!("layer {} is not spanned by products", w + 1)));
        }
        layer_start[w + 2] = chosen.len();
    }
    let n = chosen.len();
    if n != ring.dim() {
        return Err(Error::Inconsistent("p-central series does not exhaust the ring".into()));
    }

    let solvers: Vec<LayerSolver> = (1..=c)
        .map(|w| {
            let width = layer_start[w + 1] - layer_start[w];
            let mut s = LayerSolver::new(ring, &series[w], width);
            for (i, k) in (layer_start[w]..layer_start[w + 1]).enumerate() {
                let mut lab = vec![0; width];
                lab[i] = 1;
                s.insert(ring, &chosen[k].0, lab);
            }
            s
        })
        .collect();
    let coords = |x: &[u32]| -> Vec<u32> {
        let mut out = vec![0u32; n];
        let mut cur = x.to_vec();
        for w in 1..=c {
            let (_, lab) = solvers[w - 1].sift(ring, &cur);
            let mut terms: Vec<(i64, &[u32])> = vec![(1, &cur)];
            for (i, &l) in lab.iter().enumerate() {
                let k = layer_start[w] + i;
                out[k] = l;
                terms.push((-(l as i64), &chosen[k].0));
            }
            cur = ring.combine(&terms);
        }
        debug_assert!(cur.iter().all(|&x| x == 0));
        out
    };

    let mut table = vec![0u32; n * n * n];
    let mut pmul = vec![0u32; n * n];
    for i in 0..n {
        pmul[i * n..(i + 1) * n].copy_from_slice(&coords(&ring.p_multiple(&chosen[i].0)));
        for j in 0..n {
            let v = coords(&ring.mul(&chosen[i].0, &chosen[j].0));
            table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
        }
    }
    let weights = chosen.iter().map(|c| c.1).collect();
    let defs = chosen.iter().map(|c| c.2).collect();
    let std_ring = LieRing::from_parts(ring.p(), weights, table, pmul, Some(defs));
    let to_standard = (0..ring.dim()).map(|m| coords(&ring.basis(m))).collect();
    let from_standard = chosen.into_iter().map(|c| c.0).collect();
    Ok(StandardForm { ring: std_ring, to_standard, from_standard })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{class, RingBuilder};

    #[test]
    fn standardizes_scrambled_heisenberg() {
        // Heisenberg-like ring with ba = 3c, pa = 2c, all weights claimed to be 1
        let r = RingBuilder::new(5, vec![1, 1, 1]).product(1, 0, &[0, 0, 3]).pmult(0, &[0, 0, 2]).build().unwrap();
        assert!(!r.is_graded());
        let sf = standardize(&r).unwrap();
        assert!(sf.ring.is_graded());
        assert!(sf.ring.is_consistent());
        assert_eq!(sf.ring.weights(), &[1, 1, 2]);
        assert_eq!(class(&sf.ring), 2);
        // the basis change is an isomorphism
        assert!(r.is_homomorphism(&sf.ring, &sf.to_standard));
        assert!(sf.ring.is_homomorphism(&r, &sf.from_standard));
        for m in 0..3 {
            let x = r.basis(m);
            assert_eq!(sf.backward(&r, &sf.forward(&r, &x)), x);
        }
    }

    #[test]
    fn standardizes_cyclic() {
        let z = RingBuilder::new(7, vec![1, 1]).pmult(0, &[0, 1]).build().unwrap();
        let sf = standardize(&z).unwrap();
        assert_eq!(sf.ring.weights(), &[1, 2]);
        assert_eq!(sf.ring.definitions().unwrap()[1], Definition::Power(0));
    }
}
