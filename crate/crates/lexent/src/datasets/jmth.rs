//! Rated-pairs-to-entailment pipeline: clean, double, map, balance.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::taxonomy::RelationTaxonomy;
use super::{LabeledPair, RatedPair};

/// Step counts and flags of one pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JmthReport {
    pub input: usize,
    pub after_clean: usize,
    pub after_double: usize,
    pub ones: usize,
    pub zeros: usize,
    pub final_size: usize,
    /// Subcategories too small to lose ten pairs, with their sizes.
    pub small_subcategories: Vec<(String, usize)>,
    /// Set when the zeros were the minority and ones had to be removed.
    pub balanced_by_removing_ones: bool,
}

/// Entailment bit of a subcategory in the given direction: the forward bit
/// for the original pair order, the backward bit for the inverted order.
pub fn mapping_label(relation_id: &str, inverted: bool, taxonomy: &RelationTaxonomy) -> Result<u8> {
    let entry = taxonomy.require(relation_id)?;
    let bit = if inverted {
        entry.b_entails_a
    } else {
        entry.a_entails_b
    };
    Ok(u8::from(bit))
}

/// Downsample the majority class until both classes are equal, removing
/// class-0 pairs by default. Removal is seeded-random; surviving pairs keep
/// their input order. The flag is set when class 1 was the majority and had
/// to be removed instead.
pub fn balance_classes(pairs: &[LabeledPair], seed: u64) -> (Vec<LabeledPair>, bool) {
    let ones = pairs.iter().filter(|p| p.label == 1).count();
    let zeros = pairs.len() - ones;
    let (majority_label, excess) = if zeros >= ones {
        (0u8, zeros - ones)
    } else {
        (1u8, ones - zeros)
    };
    if excess == 0 {
        return (pairs.to_vec(), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut majority_idx: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.label == majority_label)
        .map(|(i, _)| i)
        .collect();
    majority_idx.shuffle(&mut rng);
    let removed: std::collections::HashSet<usize> = majority_idx.into_iter().take(excess).collect();
    let kept = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    (kept, majority_label == 1)
}

/// Run the four-step pipeline:
///
/// 1. *Cleaning* removes the ten lowest-rated pairs of every subcategory
///    (`min(10, size - 1)` for undersized subcategories, which are
///    flagged); rating ties at the boundary remove the lexicographically
///    later pair.
/// 2. *Doubling* adds the reversed pair `b:a` under the inverse relation.
/// 3. *Mapping* turns relation ids into entailment labels via the
///    taxonomy bits.
/// 4. *Balancing* removes random class-0 pairs until the classes are
///    equal.
pub fn jmth_transform(
    rated: &[RatedPair],
    taxonomy: &RelationTaxonomy,
    seed: u64,
) -> Result<(Vec<LabeledPair>, JmthReport)> {
    let mut report = JmthReport {
        input: rated.len(),
        ..JmthReport::default()
    };
    if rated.is_empty() {
        return Ok((Vec::new(), report));
    }
    for p in rated {
        taxonomy.require(&p.subcategory_id).map_err(|_| {
            Error::Input(format!(
                "unknown subcategory {} for pair {}:{}",
                p.subcategory_id, p.a, p.b
            ))
        })?;
    }

    // cleaning, per subcategory in first-seen order
    let mut subcat_order: Vec<&str> = Vec::new();
    let mut groups: std::collections::HashMap<&str, Vec<&RatedPair>> =
        std::collections::HashMap::new();
    for p in rated {
        let entry = groups.entry(p.subcategory_id.as_str()).or_default();
        if entry.is_empty() {
            subcat_order.push(&p.subcategory_id);
        }
        entry.push(p);
    }

    let mut surviving: Vec<&RatedPair> = Vec::new();
    for id in &subcat_order {
        let group = &groups[id];
        let remove = 10.min(group.len().saturating_sub(1));
        if remove < 10 {
            report
                .small_subcategories
                .push(((*id).to_owned(), group.len()));
        }
        // lowest ratings first; ties put the lexicographically later pair
        // first so it is the one removed
        let mut order: Vec<usize> = (0..group.len()).collect();
        order.sort_by(|&x, &y| {
            group[x]
                .rating
                .partial_cmp(&group[y].rating)
                .unwrap()
                .then_with(|| (&group[y].a, &group[y].b).cmp(&(&group[x].a, &group[x].b)))
        });
        let removed: std::collections::HashSet<usize> = order.into_iter().take(remove).collect();
        surviving.extend(
            group
                .iter()
                .enumerate()
                .filter(|(i, _)| !removed.contains(i))
                .map(|(_, p)| *p),
        );
    }
    report.after_clean = surviving.len();

    // doubling and mapping
    let mut labeled = Vec::with_capacity(2 * surviving.len());
    for p in &surviving {
        let forward = mapping_label(&p.subcategory_id, false, taxonomy)?;
        let backward = mapping_label(&p.subcategory_id, true, taxonomy)?;
        labeled.push(
            LabeledPair::new(p.a.clone(), p.b.clone(), forward)
                .with_relation(p.subcategory_id.clone()),
        );
        labeled.push(
            LabeledPair::new(p.b.clone(), p.a.clone(), backward)
                .with_relation(format!("{}^-1", p.subcategory_id)),
        );
    }
    report.after_double = labeled.len();
    report.ones = labeled.iter().filter(|p| p.label == 1).count();
    report.zeros = labeled.len() - report.ones;

    // balancing
    let (balanced, removed_ones) = balance_classes(&labeled, seed);
    report.balanced_by_removing_ones = removed_ones;
    report.final_size = balanced.len();
    Ok((balanced, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rated(a: &str, b: &str, id: &str, rating: f64) -> RatedPair {
        RatedPair {
            a: a.into(),
            b: b.into(),
            subcategory_id: id.into(),
            rating,
        }
    }

    #[test]
    fn twelve_pair_subcategory_walkthrough() {
        // 8f has bits a|=b = 1, b|=a = 0
        let tax = RelationTaxonomy::embedded();
        let pairs: Vec<RatedPair> = (0..12)
            .map(|i| rated(&format!("a{i}"), &format!("b{i}"), "8f", i as f64))
            .collect();
        let (out, report) = jmth_transform(&pairs, tax, 7).unwrap();
        assert_eq!(report.after_clean, 2);
        assert_eq!(report.after_double, 4);
        assert_eq!(report.ones, 2);
        assert_eq!(report.zeros, 2);
        assert_eq!(report.final_size, 4);
        assert_eq!(out.len(), 4);
        // the two highest-rated pairs survive
        assert!(out.iter().any(|p| p.a == "a10"));
        assert!(out.iter().any(|p| p.a == "a11"));
        // reversed pairs carry the inverse relation and label 0
        let inverse: Vec<&LabeledPair> = out
            .iter()
            .filter(|p| p.relation_id.as_deref() == Some("8f^-1"))
            .collect();
        assert_eq!(inverse.len(), 2);
        assert!(inverse.iter().all(|p| p.label == 0));
    }

    #[test]
    fn empty_input_empty_output() {
        let tax = RelationTaxonomy::embedded();
        let (out, report) = jmth_transform(&[], tax, 0).unwrap();
        assert!(out.is_empty());
        assert_eq!(report, JmthReport::default());
    }

    #[test]
    fn unknown_subcategory_is_an_input_error() {
        let tax = RelationTaxonomy::embedded();
        let pairs = vec![rated("x", "y", "zz9", 1.0)];
        assert!(jmth_transform(&pairs, tax, 0).is_err());
    }

    #[test]
    fn tiny_subcategory_keeps_one_pair_and_is_flagged() {
        let tax = RelationTaxonomy::embedded();
        let pairs: Vec<RatedPair> = (0..3)
            .map(|i| rated(&format!("a{i}"), &format!("b{i}"), "3a", i as f64))
            .collect();
        let (_, report) = jmth_transform(&pairs, tax, 0).unwrap();
        assert_eq!(report.after_clean, 1);
        assert_eq!(report.small_subcategories, vec![("3a".to_owned(), 3)]);
        // 3a is symmetric (1/1): doubling gives two ones, zero zeros;
        // balancing must remove ones and flag it
        assert!(report.balanced_by_removing_ones);
        assert_eq!(report.final_size, 0);
    }

    #[test]
    fn cleaning_tie_break_removes_lexicographically_later() {
        let tax = RelationTaxonomy::embedded();
        // 11 pairs of equal rating: exactly one survives and it must be the
        // lexicographically smallest
        let pairs: Vec<RatedPair> = (0..11)
            .map(|i| rated(&format!("w{i:02}"), "x", "2a", 5.0))
            .collect();
        let (out, report) = jmth_transform(&pairs, tax, 0).unwrap();
        assert_eq!(report.after_clean, 1);
        assert!(out.iter().any(|p| p.a == "w00" || p.b == "w00"));
    }

    #[test]
    fn doubling_invariant() {
        let tax = RelationTaxonomy::embedded();
        let pairs: Vec<RatedPair> = (0..15)
            .map(|i| rated(&format!("a{i}"), &format!("b{i}"), "2a", i as f64))
            .collect();
        let (_, report) = jmth_transform(&pairs, tax, 1).unwrap();
        assert_eq!(report.after_double, 2 * report.after_clean);
    }

    #[test]
    fn balancing_never_removes_ones_by_default() {
        let pairs: Vec<LabeledPair> = (0..10)
            .map(|i| LabeledPair::new(format!("a{i}"), "b", u8::from(i < 3)))
            .collect();
        let (balanced, removed_ones) = balance_classes(&pairs, 3);
        assert!(!removed_ones);
        let ones = balanced.iter().filter(|p| p.label == 1).count();
        let zeros = balanced.len() - ones;
        assert_eq!(ones, 3);
        assert_eq!(zeros, 3);
    }

    #[test]
    fn deterministic_given_seed() {
        let tax = RelationTaxonomy::embedded();
        let pairs: Vec<RatedPair> = (0..40)
            .map(|i| {
                rated(
                    &format!("a{i}"),
                    &format!("b{i}"),
                    if i % 2 == 0 { "2a" } else { "1a" },
                    (i % 13) as f64,
                )
            })
            .collect();
        let (out1, r1) = jmth_transform(&pairs, tax, 42).unwrap();
        let (out2, r2) = jmth_transform(&pairs, tax, 42).unwrap();
        assert_eq!(out1, out2);
        assert_eq!(r1, r2);
    }

    #[test]
    fn mapping_label_directions() {
        let tax = RelationTaxonomy::embedded();
        assert_eq!(mapping_label("8f", false, tax).unwrap(), 1);
        assert_eq!(mapping_label("8f", true, tax).unwrap(), 0);
        assert_eq!(mapping_label("3a", false, tax).unwrap(), 1);
        assert_eq!(mapping_label("3a", true, tax).unwrap(), 1);
        assert_eq!(mapping_label("2i", false, tax).unwrap(), 0);
        assert_eq!(mapping_label("2i", true, tax).unwrap(), 0);
        assert!(mapping_label("nope", false, tax).is_err());
    }
}
