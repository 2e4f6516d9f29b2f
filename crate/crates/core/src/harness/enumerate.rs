/// All words of length `0..=max_len` in length-then-lexicographic order,
/// where letters are ordered as in `alphabet`.
#[derive(Debug, Clone)]
pub struct Words {
    alphabet: Vec<String>,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl Words {
    /// Advances the odometer, clearing it after the last word.
    fn advance(&mut self) {
        let Some(digits) = self.current.as_mut() else { return };
        let base = self.alphabet.len();
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                return;
            }
            *d = 0;
        }
        if digits.len() < self.max_len && base > 0 {
            digits.push(0);
            digits.iter_mut().for_each(|d| *d = 0);
        } else {
            self.current = None;
        }
    }

    /// The current word as letter indices, for callers that avoid allocating.
    pub fn next_indices(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
}

impl Iterator for Words {
    type Item = Vec<String>;

    fn next(&mut self) -> Option<Vec<String>> {
        let idx = self.next_indices()?;
        Some(idx.into_iter().map(|i| self.alphabet[i].clone()).collect())
    }
}

/// Lazily enumerates `Σ^{≤max_len}`. The alphabet is taken as a set: sorted
/// and deduplicated.
pub fn enumerate_words<S: AsRef<str>>(alphabet: &[S], max_len: usize) -> Words {
    let mut letters: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
    letters.sort();
    letters.dedup();
    Words {
        alphabet: letters,
        max_len,
        current: Some(Vec::new()),
    }
}

/// `Σ_{i ≤ max_len} k^i`.
pub fn word_count(alphabet_size: usize, max_len: usize) -> u128 {
    (0..=max_len as u32).map(|i| (alphabet_size as u128).pow(i)).sum()
}
