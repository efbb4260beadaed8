//! Componentwise-domination queries with support-bitmask prefiltering.

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64).max(1)
}

pub(crate) fn support_mask(v: &[u32], out: &mut [u64]) {
    out.iter_mut().for_each(|w| *w = 0);
    for (i, &x) in v.iter().enumerate() {
        if x > 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
}

#[inline]
pub(crate) fn le(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[inline]
pub(crate) fn mask_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// A fixed set of vectors searchable for elements `<= z`.
pub(crate) struct SupportIndex<'a> {
    words: usize,
    masks: Vec<u64>,
    vectors: Vec<&'a [u32]>,
}

impl<'a> SupportIndex<'a> {
    pub fn new<I: IntoIterator<Item = &'a [u32]>>(vectors: I) -> Self {
        let vectors: Vec<&[u32]> = vectors.into_iter().collect();
        let words = words_for(vectors.first().map_or(1, |v| v.len()));
        let mut masks = vec![0u64; words * vectors.len()];
        for (i, v) in vectors.iter().enumerate() {
            support_mask(v, &mut masks[i * words..(i + 1) * words]);
        }
        Self {
            words,
            masks,
            vectors,
        }
    }

    /// Index of some stored vector `w <= z`, skipping index `skip`.
    pub fn find_dominated(&self, z: &[u32], skip: Option<usize>) -> Option<usize> {
        let mut zmask = vec![0u64; self.words];
        support_mask(z, &mut zmask);
        (0..self.vectors.len()).find(|&i| {
            Some(i) != skip
                && mask_subset(&self.masks[i * self.words..(i + 1) * self.words], &zmask)
                && le(self.vectors[i], z)
        })
    }
}

/// Sorted, deduplicated, and reduced to the elements that dominate no
/// other element.
pub(crate) fn minimal_elements(mut raw: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    raw.retain(|v| v.iter().any(|&x| x > 0));
    raw.sort();
    raw.dedup();
    // A dominated-by relation needs a strictly smaller total.
    let mut by_total: Vec<(u64, usize)> = raw
        .iter()
        .enumerate()
        .map(|(i, v)| (v.iter().map(|&x| x as u64).sum(), i))
        .collect();
    by_total.sort();
    let mut kept: Vec<usize> = Vec::new();
    let mut keep = vec![false; raw.len()];
    let words = words_for(raw.first().map_or(1, |v| v.len()));
    let mut masks: Vec<u64> = Vec::new();
    let mut zmask = vec![0u64; words];
    for &(_, i) in &by_total {
        support_mask(&raw[i], &mut zmask);
        let dominated = kept.iter().enumerate().any(|(slot, &j)| {
            mask_subset(&masks[slot * words..(slot + 1) * words], &zmask) && le(&raw[j], &raw[i])
        });
        if !dominated {
            kept.push(i);
            masks.extend_from_slice(&zmask);
            keep[i] = true;
        }
    }
    raw.into_iter()
        .zip(keep)
        .filter_map(|(v, k)| k.then_some(v))
        .collect()
}
