/// Vowel-group syllable estimate.
///
/// Counts maximal runs of `a e i o u y` over the word's letters, drops one for
/// a trailing silent `e` when more than one group remains, and never returns
/// less than 1 for a word with a letter. Words without letters count 0.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return 0;
    }
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    if letters.last() == Some(&'e') && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}
