//! Fold construction for the cross-validation evaluation setups.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::datasets::LabeledPair;
use crate::error::{Error, Result};

/// The four evaluation protocols. `Standard`, `Clustered` and `Balanced`
/// are cross-validation setups; `Different` trains on one dataset and
/// tests on another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalSetup {
    Standard,
    Clustered,
    Balanced,
    Different,
}

impl fmt::Display for EvalSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalSetup::Standard => "standard",
            EvalSetup::Clustered => "clustered",
            EvalSetup::Balanced => "balanced",
            EvalSetup::Different => "different",
        })
    }
}

impl std::str::FromStr for EvalSetup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(EvalSetup::Standard),
            "clustered" => Ok(EvalSetup::Clustered),
            "balanced" => Ok(EvalSetup::Balanced),
            "different" => Ok(EvalSetup::Different),
            other => Err(Error::Parameter(format!(
                "unknown evaluation setup: {other}"
            ))),
        }
    }
}

/// Index sets of each fold. For the balanced setup the folds cover only
/// the retained (downsampled) pairs; otherwise they partition the whole
/// dataset. `leaked_terms` counts the shared terms that oversized
/// components had to be split on.
#[derive(Debug, Clone)]
pub struct FoldPlan {
    pub setup: EvalSetup,
    pub folds: Vec<Vec<usize>>,
    pub leaked_terms: usize,
    pub seed: u64,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn standard_folds(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut cursor = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(idx[cursor..cursor + size].to_vec());
        cursor += size;
    }
    folds
}

/// Shared-term components of a set of pairs. Pairs are connected when they
/// have a term in common.
fn components(dataset: &[LabeledPair], members: &[usize]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(members.len());
    let mut by_term: HashMap<&str, usize> = HashMap::new();
    for (pos, &i) in members.iter().enumerate() {
        for term in [dataset[i].a.as_str(), dataset[i].b.as_str()] {
            match by_term.entry(term) {
                std::collections::hash_map::Entry::Occupied(first) => uf.union(*first.get(), pos),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(pos);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (pos, &member) in members.iter().enumerate() {
        let root = uf.find(pos);
        groups.entry(root).or_default().push(member);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.iter_mut().for_each(|g| g.sort_unstable());
    out.sort_by_key(|g| g[0]);
    out
}

/// Split an oversized component by removing its rarest shared terms until
/// every piece fits the fold capacity. Returns the pieces and the terms
/// removed (the potential cross-fold leaks).
fn split_component(
    dataset: &[LabeledPair],
    component: Vec<usize>,
    cap: usize,
    leaked: &mut HashSet<String>,
) -> Vec<Vec<usize>> {
    let mut work = vec![component];
    let mut done = Vec::new();
    while let Some(piece) = work.pop() {
        if piece.len() <= cap {
            done.push(piece);
            continue;
        }
        // shared terms of this piece, ignoring already-removed ones
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for &i in &piece {
            for term in [dataset[i].a.as_str(), dataset[i].b.as_str()] {
                if !leaked.contains(term) {
                    *counts.entry(term).or_insert(0) += 1;
                }
            }
        }
        let rarest = counts
            .iter()
            .filter(|(_, &c)| c >= 2)
            .min_by(|(ta, ca), (tb, cb)| ca.cmp(cb).then(ta.cmp(tb)))
            .map(|(t, _)| (*t).to_owned());
        let Some(term) = rarest else {
            // no shared terms left: the piece is held together by removed
            // terms only, so it decomposes into singletons
            done.extend(piece.into_iter().map(|i| vec![i]));
            continue;
        };
        leaked.insert(term);
        // recompute connectivity without the removed terms
        let sub = components_excluding(dataset, &piece, leaked);
        if sub.len() == 1 {
            // the removed term did not disconnect anything yet; keep going
            work.push(sub.into_iter().next().unwrap());
        } else {
            work.extend(sub);
        }
    }
    done.sort_by_key(|g| g[0]);
    done
}

fn components_excluding(
    dataset: &[LabeledPair],
    members: &[usize],
    removed: &HashSet<String>,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(members.len());
    let mut by_term: HashMap<&str, usize> = HashMap::new();
    for (pos, &i) in members.iter().enumerate() {
        for term in [dataset[i].a.as_str(), dataset[i].b.as_str()] {
            if removed.contains(term) {
                continue;
            }
            match by_term.entry(term) {
                std::collections::hash_map::Entry::Occupied(first) => uf.union(*first.get(), pos),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(pos);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (pos, &member) in members.iter().enumerate() {
        let root = uf.find(pos);
        groups.entry(root).or_default().push(member);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.iter_mut().for_each(|g| g.sort_unstable());
    out.sort_by_key(|g| g[0]);
    out
}

fn clustered_folds(dataset: &[LabeledPair], k: usize) -> (Vec<Vec<usize>>, usize) {
    let n = dataset.len();
    let cap = n.div_ceil(k);
    let all: Vec<usize> = (0..n).collect();
    let comps = components(dataset, &all);

    let mut leaked = HashSet::new();
    let mut pieces = Vec::new();
    for comp in comps {
        if comp.len() <= cap {
            pieces.push(comp);
        } else {
            pieces.extend(split_component(dataset, comp, cap, &mut leaked));
        }
    }

    // largest pieces first, each to the currently smallest fold
    pieces.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for piece in pieces {
        let target = (0..k).min_by_key(|&f| (folds[f].len(), f)).unwrap();
        folds[target].extend(piece);
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    (folds, leaked.len())
}

/// Downsample the larger class inside each fold so both classes are
/// exactly equal, seeded-random. Class 0 is the one removed unless it is
/// the minority.
fn balance_folds(dataset: &[LabeledPair], folds: &mut [Vec<usize>], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0bad_5eed_0bad_5eed);
    for fold in folds.iter_mut() {
        let ones: Vec<usize> = fold
            .iter()
            .copied()
            .filter(|&i| dataset[i].label == 1)
            .collect();
        let zeros: Vec<usize> = fold
            .iter()
            .copied()
            .filter(|&i| dataset[i].label == 0)
            .collect();
        let keep = ones.len().min(zeros.len());
        let trim = |mut side: Vec<usize>, rng: &mut ChaCha8Rng| {
            side.shuffle(rng);
            side.truncate(keep);
            side
        };
        let (ones, zeros) = if zeros.len() >= ones.len() {
            (ones, trim(zeros, &mut rng))
        } else {
            (trim(ones, &mut rng), zeros)
        };
        *fold = ones.into_iter().chain(zeros).collect();
        fold.sort_unstable();
    }
}

/// Build the fold plan of a cross-validation setup.
///
/// `Standard` deals a seeded shuffle into `k` near-equal folds.
/// `Clustered` keeps pairs sharing a term in one fold, splitting only
/// components larger than `ceil(n/k)` on their rarest shared terms
/// (counted as leaked). `Balanced` starts from clustered folds and
/// downsamples each fold to exactly equal class counts.
pub fn make_folds(
    dataset: &[LabeledPair],
    setup: EvalSetup,
    k: usize,
    seed: u64,
) -> Result<FoldPlan> {
    if dataset.is_empty() {
        return Err(Error::Input(
            "cannot build folds of an empty dataset".into(),
        ));
    }
    if setup == EvalSetup::Different {
        return Err(Error::Parameter(
            "the different setup trains and tests on distinct datasets; \
             it has no cross-validation folds"
                .into(),
        ));
    }
    if k < 2 || k > dataset.len() {
        return Err(Error::Parameter(format!(
            "fold count must satisfy 2 <= k <= {}, got {k}",
            dataset.len()
        )));
    }
    let (folds, leaked_terms) = match setup {
        EvalSetup::Standard => (standard_folds(dataset.len(), k, seed), 0),
        EvalSetup::Clustered => clustered_folds(dataset, k),
        EvalSetup::Balanced => {
            let (mut folds, leaked) = clustered_folds(dataset, k);
            balance_folds(dataset, &mut folds, seed);
            (folds, leaked)
        }
        EvalSetup::Different => unreachable!(),
    };
    Ok(FoldPlan {
        setup,
        folds,
        leaked_terms,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str, label: u8) -> LabeledPair {
        LabeledPair::new(a, b, label)
    }

    fn assert_partition(plan: &FoldPlan, n: usize) {
        let mut seen = HashSet::new();
        for fold in &plan.folds {
            for &i in fold {
                assert!(i < n);
                assert!(seen.insert(i), "index {i} in two folds");
            }
        }
        assert_eq!(seen.len(), n, "folds do not cover the dataset");
    }

    #[test]
    fn standard_ten_pairs_five_folds() {
        let data: Vec<LabeledPair> = (0..10)
            .map(|i| pair(&format!("a{i}"), &format!("b{i}"), (i % 2) as u8))
            .collect();
        let plan = make_folds(&data, EvalSetup::Standard, 5, 3).unwrap();
        assert_eq!(plan.folds.len(), 5);
        assert!(plan.folds.iter().all(|f| f.len() == 2));
        assert_partition(&plan, 10);
    }

    #[test]
    fn clustered_components_stay_together() {
        let data = vec![pair("a", "b", 1), pair("a", "c", 0), pair("d", "e", 1)];
        let plan = make_folds(&data, EvalSetup::Clustered, 2, 0).unwrap();
        assert_eq!(plan.leaked_terms, 0);
        // pairs 0 and 1 share "a" and must be in one fold
        let fold_of = |i: usize| plan.folds.iter().position(|f| f.contains(&i)).unwrap();
        assert_eq!(fold_of(0), fold_of(1));
        assert_ne!(fold_of(0), fold_of(2));
        assert_partition(&plan, 3);
    }

    #[test]
    fn clustered_leak_count_is_structural() {
        let data = vec![
            pair("a", "b", 1),
            pair("a", "c", 0),
            pair("d", "e", 1),
            pair("f", "g", 0),
        ];
        let p1 = make_folds(&data, EvalSetup::Clustered, 2, 1).unwrap();
        let p2 = make_folds(&data, EvalSetup::Clustered, 2, 999).unwrap();
        assert_eq!(p1.leaked_terms, p2.leaked_terms);
        assert_eq!(p1.leaked_terms, 0);
    }

    #[test]
    fn oversized_star_component_is_split_with_leak() {
        // one hub term shared by 6 pairs, k = 2 on 8 pairs: cap = 4
        let mut data: Vec<LabeledPair> = (0..6)
            .map(|i| pair("hub", &format!("w{i}"), (i % 2) as u8))
            .collect();
        data.push(pair("x", "y", 1));
        data.push(pair("p", "q", 0));
        let plan = make_folds(&data, EvalSetup::Clustered, 2, 0).unwrap();
        assert!(plan.leaked_terms >= 1);
        assert_partition(&plan, 8);
        let cap = data.len().div_ceil(2);
        // greedy assignment keeps folds near-balanced in size
        for fold in &plan.folds {
            assert!(fold.len() <= cap + 2, "fold size {}", fold.len());
        }
    }

    #[test]
    fn balanced_folds_have_equal_class_counts() {
        // 6 zeros and 2 ones in one shared-term cluster per fold
        let mut data = Vec::new();
        for f in 0..2 {
            for i in 0..6 {
                data.push(pair(&format!("z{f}"), &format!("n{f}_{i}"), 0));
            }
            for i in 0..2 {
                data.push(pair(&format!("o{f}_x{i}"), &format!("o{f}_y{i}"), 1));
            }
        }
        let plan = make_folds(&data, EvalSetup::Balanced, 2, 5).unwrap();
        for fold in &plan.folds {
            let ones = fold.iter().filter(|&&i| data[i].label == 1).count();
            let zeros = fold.len() - ones;
            assert_eq!(ones, zeros, "fold not balanced");
        }
    }

    #[test]
    fn different_setup_has_no_folds() {
        let data = vec![pair("a", "b", 1), pair("c", "d", 0)];
        assert!(make_folds(&data, EvalSetup::Different, 2, 0).is_err());
    }

    #[test]
    fn k_out_of_range() {
        let data = vec![pair("a", "b", 1), pair("c", "d", 0)];
        assert!(make_folds(&data, EvalSetup::Standard, 1, 0).is_err());
        assert!(make_folds(&data, EvalSetup::Standard, 3, 0).is_err());
    }

    #[test]
    fn standard_folds_differ_by_seed_but_partition_always() {
        let data: Vec<LabeledPair> = (0..37)
            .map(|i| pair(&format!("a{i}"), &format!("b{i}"), (i % 2) as u8))
            .collect();
        let p1 = make_folds(&data, EvalSetup::Standard, 10, 1).unwrap();
        let p2 = make_folds(&data, EvalSetup::Standard, 10, 2).unwrap();
        assert_partition(&p1, 37);
        assert_partition(&p2, 37);
        assert_ne!(p1.folds, p2.folds);
    }
}
