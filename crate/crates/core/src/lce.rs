//! Longest-common-extension tables built from the Z-algorithm.

/// `z[i]` is the length of the longest common prefix of `s` and `s[i..]`,
/// with `z[0] = s.len()`. Linear time.
pub fn z_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        while i + k < n && s[k] == s[i + k] {
            k += 1;
        }
        if i + k > r {
            l = i;
            r = i + k;
        }
        z[i] = k;
    }
    z
}

/// `out[i]` is the length of the longest common prefix of `pattern` and
/// `text[i..]`. Runs in `O(|pattern| + |text|)`.
pub fn lcp_against<T: Eq>(pattern: &[T], text: &[T]) -> Vec<usize> {
    let z = z_function(pattern);
    let (plen, m) = (pattern.len(), text.len());
    let mut out = vec![0; m];
    // text[l..r) == pattern[..r - l]
    let (mut l, mut r) = (0, 0);
    for i in 0..m {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        if i + k >= r {
            while i + k < m && k < plen && text[i + k] == pattern[k] {
                k += 1;
            }
            if i + k > r {
                l = i;
                r = i + k;
            }
        }
        out[i] = k;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_lcp(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).take_while(|(x, y)| x == y).count()
    }

    #[test]
    fn z_small() {
        assert_eq!(z_function(b"aabxaab"), vec![7, 1, 0, 0, 3, 1, 0]);
        assert!(z_function::<u8>(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn z_matches_naive(s in proptest::collection::vec(0u8..3, 0..40)) {
            let z = z_function(&s);
            for i in 0..s.len() {
                prop_assert_eq!(z[i], naive_lcp(&s, &s[i..]));
            }
        }

        #[test]
        fn lcp_against_matches_naive(
            p in proptest::collection::vec(0u8..3, 0..20),
            t in proptest::collection::vec(0u8..3, 0..40),
        ) {
            let out = lcp_against(&p, &t);
            for i in 0..t.len() {
                prop_assert_eq!(out[i], naive_lcp(&p, &t[i..]));
            }
        }
    }
}
