//! Porter stemmer, ported from the classic reference implementation.
//!
//! Words of length <= 2 and tokens containing anything outside `a..=z`
//! (digit-bearing tokens like `her2`, `3`) are returned unchanged.

/// Stem a lowercase token.
pub fn stem(token: &str) -> String {
    if token.len() <= 2 || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut s = Stemmer {
        b: token.as_bytes().to_vec(),
        len: token.len(),
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    String::from_utf8(s.b[..s.len].to_vec()).expect("stemmer output is ascii")
}

struct Stemmer {
    b: Vec<u8>,
    len: usize,
}

impl Stemmer {
    fn is_cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_cons(i - 1),
            _ => true,
        }
    }

    /// Number of consonant-vowel sequences, the m of [C](VC)^m[V], over b[0..upto].
    fn measure(&self, upto: usize) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i >= upto {
                return n;
            }
            if !self.is_cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i >= upto {
                    return n;
                }
                if self.is_cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i >= upto {
                    return n;
                }
                if !self.is_cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn has_vowel(&self, upto: usize) -> bool {
        (0..upto).any(|i| !self.is_cons(i))
    }

    /// b[0..upto] ends with a double consonant.
    fn double_c(&self, upto: usize) -> bool {
        upto >= 2 && self.b[upto - 1] == self.b[upto - 2] && self.is_cons(upto - 1)
    }

    /// b[0..upto] ends consonant-vowel-consonant with the final consonant
    /// not being w, x or y.
    fn is_cvc(&self, upto: usize) -> bool {
        if upto < 3 || !self.is_cons(upto - 1) || self.is_cons(upto - 2) || !self.is_cons(upto - 3)
        {
            return false;
        }
        !matches!(self.b[upto - 1], b'w' | b'x' | b'y')
    }

    fn ends(&self, suffix: &[u8]) -> bool {
        suffix.len() <= self.len && &self.b[self.len - suffix.len()..self.len] == suffix
    }

    fn set_suffix(&mut self, old_len: usize, replacement: &[u8]) {
        self.b.truncate(self.len - old_len);
        self.b.extend_from_slice(replacement);
        self.len = self.b.len();
    }

    fn step1ab(&mut self) {
        if self.b[self.len - 1] == b's' {
            if self.ends(b"sses") {
                self.len -= 2;
            } else if self.ends(b"ies") {
                self.set_suffix(3, b"i");
            } else if self.b[self.len - 2] != b's' {
                self.len -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure(self.len - 3) > 0 {
                self.len -= 1;
            }
        } else if self.ends(b"ed") && self.has_vowel(self.len - 2) {
            self.len -= 2;
            self.b.truncate(self.len);
            self.post_1b();
        } else if self.ends(b"ing") && self.has_vowel(self.len - 3) {
            self.len -= 3;
            self.b.truncate(self.len);
            self.post_1b();
        }
    }

    fn post_1b(&mut self) {
        if self.ends(b"at") || self.ends(b"bl") || self.ends(b"iz") {
            self.b.truncate(self.len);
            self.b.push(b'e');
            self.len += 1;
        } else if self.double_c(self.len) {
            if !matches!(self.b[self.len - 1], b'l' | b's' | b'z') {
                self.len -= 1;
            }
        } else if self.measure(self.len) == 1 && self.is_cvc(self.len) {
            self.b.truncate(self.len);
            self.b.push(b'e');
            self.len += 1;
        }
    }

    fn step1c(&mut self) {
        if self.ends(b"y") && self.has_vowel(self.len - 1) {
            self.b[self.len - 1] = b'i';
        }
    }

    /// Apply the first rule whose suffix matches textually; the m-condition
    /// only gates the rewrite, exactly as in the reference code.
    fn rule_list(&mut self, rules: &[(&[u8], &[u8])], min_measure: usize) {
        for &(suffix, replacement) in rules {
            if self.ends(suffix) {
                if self.measure(self.len - suffix.len()) > min_measure {
                    self.set_suffix(suffix.len(), replacement);
                }
                return;
            }
        }
    }

    fn step2(&mut self) {
        self.rule_list(
            &[
                (b"ational", b"ate"),
                (b"tional", b"tion"),
                (b"enci", b"ence"),
                (b"anci", b"ance"),
                (b"izer", b"ize"),
                (b"bli", b"ble"),
                (b"alli", b"al"),
                (b"entli", b"ent"),
                (b"eli", b"e"),
                (b"ousli", b"ous"),
                (b"ization", b"ize"),
                (b"ation", b"ate"),
                (b"ator", b"ate"),
                (b"alism", b"al"),
                (b"iveness", b"ive"),
                (b"fulness", b"ful"),
                (b"ousness", b"ous"),
                (b"aliti", b"al"),
                (b"iviti", b"ive"),
                (b"biliti", b"ble"),
                (b"logi", b"log"),
            ],
            0,
        );
    }

    fn step3(&mut self) {
        self.rule_list(
            &[
                (b"icate", b"ic"),
                (b"ative", b""),
                (b"alize", b"al"),
                (b"iciti", b"ic"),
                (b"ical", b"ic"),
                (b"ful", b""),
                (b"ness", b""),
            ],
            0,
        );
    }

    fn step4(&mut self) {
        const SUFFIXES: &[&[u8]] = &[
            b"al", b"ance", b"ence", b"er", b"ic", b"able", b"ible", b"ant", b"ement", b"ment",
            b"ent", b"ion", b"ou", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize",
        ];
        for &suffix in SUFFIXES {
            if self.ends(suffix) {
                let stem_len = self.len - suffix.len();
                if suffix == b"ion" && !(stem_len >= 1 && matches!(self.b[stem_len - 1], b's' | b't'))
                {
                    continue;
                }
                if self.measure(stem_len) > 1 {
                    self.len = stem_len;
                    self.b.truncate(self.len);
                }
                return;
            }
        }
    }

    fn step5(&mut self) {
        if self.b[self.len - 1] == b'e' {
            let m = self.measure(self.len);
            if m > 1 || (m == 1 && !self.is_cvc(self.len - 1)) {
                self.len -= 1;
            }
        }
        if self.b[self.len - 1] == b'l' && self.double_c(self.len) && self.measure(self.len) > 1 {
            self.len -= 1;
        }
    }
}
