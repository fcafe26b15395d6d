//! Small combinatorial helpers shared by the enumerating searches.

/// Binomial coefficient as a float, exact up to 2^53.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Harmonic number `H_n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order of
/// positions. Returning `false` from `f` stops the walk early.
pub fn for_each_combination<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T]) -> bool) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if !f(&buf) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let i = i - 1;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(28, 4), 20475.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(7, 0), 1.0);
    }

    #[test]
    fn combinations_are_complete_and_ordered() {
        let items = [1, 2, 3, 4, 5];
        for k in 0..=6 {
            let mut seen = Vec::new();
            for_each_combination(&items, k, |c| {
                seen.push(c.to_vec());
                true
            });
            assert_eq!(seen.len() as f64, binomial(5, k));
            let mut sorted = seen.clone();
            sorted.sort();
            assert_eq!(seen, sorted);
        }
    }

    #[test]
    fn early_stop() {
        let mut count = 0;
        for_each_combination(&[1, 2, 3, 4], 2, |_| {
            count += 1;
            count < 3
        });
        assert_eq!(count, 3);
    }
}
