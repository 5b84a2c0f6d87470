//! Brute-force oracles on integer grids, independent of the library.
#![allow(dead_code)]

/// Open arc `(lo, hi)` on the circle `Z / modulus`, stored lifted.
#[derive(Clone, Copy, Debug)]
pub struct Arc {
    pub lo: i128,
    pub hi: i128,
}

fn overlap_1d(a: Arc, b: Arc, modulus: i128) -> Option<Arc> {
    for m in [-modulus, 0, modulus] {
        let lo = a.lo.max(b.lo + m);
        let hi = a.hi.min(b.hi + m);
        if lo < hi {
            return Some(Arc { lo, hi });
        }
    }
    None
}

/// Arcs `(c - r, c + r)` with `c = (p + theta) * modulus / q` in grid units,
/// for every `p < q`. Requires every quantity to be an integer.
pub fn level_arcs(q: i128, theta_num: i128, theta_den: i128, radius: i128, modulus: i128) -> Vec<Arc> {
    assert_eq!(modulus % (q * theta_den), 0, "grid too coarse");
    let step = modulus / q;
    (0..q)
        .map(|p| {
            let c = p * step + theta_num * step / theta_den;
            Arc { lo: c - radius, hi: c + radius }
        })
        .collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Components of `∩_levels (∪ arcs)^d` on the `d`-torus, found by
/// intersecting every combination of boxes and merging overlapping boxes.
pub fn brute_components(levels: &[Vec<Arc>], d: usize, modulus: i128) -> usize {
    // pieces of the one-dimensional intersection, level by level
    let mut pieces: Vec<Arc> = vec![Arc { lo: 0, hi: modulus }];
    let mut full = true;
    for arcs in levels {
        let mut next = Vec::new();
        for &piece in &pieces {
            for &arc in arcs {
                let hit = if full { Some(arc) } else { overlap_1d(piece, arc, modulus) };
                if let Some(x) = hit {
                    next.push(x);
                }
            }
        }
        pieces = next;
        full = false;
    }
    // all d-fold boxes of pieces
    let n = pieces.len().pow(d as u32);
    let boxes: Vec<Vec<Arc>> = (0..n)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let a = pieces[i % pieces.len()];
                    i /= pieces.len();
                    a
                })
                .collect()
        })
        .collect();
    let mut dsu = Dsu((0..n).collect());
    for i in 0..n {
        for j in i + 1..n {
            if boxes[i]
                .iter()
                .zip(&boxes[j])
                .all(|(a, b)| overlap_1d(*a, *b, modulus).is_some())
            {
                dsu.union(i, j);
            }
        }
    }
    (0..n).filter(|&i| dsu.find(i) == i).count()
}
