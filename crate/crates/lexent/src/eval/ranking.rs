//! Ranked lists and the two average-precision variants.

/// Scored, labeled items in descending score order. Ties keep their
/// original submission order (stable sort), which pins down the
/// tie-sensitive average-precision values.
#[derive(Debug, Clone, Default)]
pub struct RankedList {
    items: Vec<(f64, u8)>,
}

/// `FromTop` walks the ranking from the highest score down; `FromBottom`
/// from the lowest score up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanDirection {
    FromTop,
    FromBottom,
}

impl RankedList {
    pub fn from_scores(scored: &[(f64, u8)]) -> Self {
        let mut items = scored.to_vec();
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        RankedList { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `(score, label)` in descending score order.
    pub fn items(&self) -> &[(f64, u8)] {
        &self.items
    }

    /// Average precision for class 1, scanning from the top.
    pub fn ap1(&self) -> Option<f64> {
        average_precision(self, 1, ScanDirection::FromTop)
    }

    /// Average precision for class 0, scanning from the bottom.
    pub fn ap0(&self) -> Option<f64> {
        average_precision(self, 0, ScanDirection::FromBottom)
    }
}

/// Mean over the positions of positive items of the positive density seen
/// so far in scan order. `None` when the list has no item of the positive
/// label.
pub fn average_precision(
    ranked: &RankedList,
    positive_label: u8,
    direction: ScanDirection,
) -> Option<f64> {
    let walk: Box<dyn Iterator<Item = &(f64, u8)>> = match direction {
        ScanDirection::FromTop => Box::new(ranked.items.iter()),
        ScanDirection::FromBottom => Box::new(ranked.items.iter().rev()),
    };
    let mut positives = 0usize;
    let mut sum = 0.0;
    for (r, &(_, label)) in walk.enumerate() {
        if label == positive_label {
            positives += 1;
            sum += positives as f64 / (r + 1) as f64;
        }
    }
    (positives > 0).then(|| sum / positives as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(labels: &[u8]) -> RankedList {
        // strictly descending scores so the label order is the rank order
        let scored: Vec<(f64, u8)> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (1000.0 - i as f64, l))
            .collect();
        RankedList::from_scores(&scored)
    }

    #[test]
    fn perfect_top_ranking() {
        assert!((list(&[1, 1, 0]).ap1().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interleaved_ranking() {
        let ap = list(&[1, 0, 1]).ap1().unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_ranking_maximizes_both_variants() {
        let l = list(&[1, 1, 0, 0]);
        assert!((l.ap1().unwrap() - 1.0).abs() < 1e-15);
        assert!((l.ap0().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn top_and_bottom_scans_mirror_each_other() {
        // ap0 of a list equals ap1 of the reversed, label-flipped list
        for labels in [
            vec![0, 0, 1, 1],
            vec![1, 0, 1, 0, 0],
            vec![0, 1, 1, 0, 1, 0],
        ] {
            let mirrored: Vec<u8> = labels.iter().rev().map(|&l| 1 - l).collect();
            let a = list(&labels).ap0().unwrap();
            let b = list(&mirrored).ap1().unwrap();
            assert!((a - b).abs() < 1e-15, "labels {labels:?}");
        }
    }

    #[test]
    fn no_positives_is_absent() {
        assert_eq!(list(&[0, 0]).ap1(), None);
        assert_eq!(list(&[1, 1]).ap0(), None);
    }

    #[test]
    fn ties_keep_submission_order() {
        let a = RankedList::from_scores(&[(0.5, 1), (0.5, 0)]);
        let b = RankedList::from_scores(&[(0.5, 0), (0.5, 1)]);
        assert_eq!(a.items()[0].1, 1);
        assert_eq!(b.items()[0].1, 0);
    }
}
