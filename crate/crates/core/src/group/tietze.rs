use super::presentation::Presentation;
use super::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TietzeConfig {
    /// Maximum number of generator eliminations before giving up.
    pub max_passes: usize,
}

impl Default for TietzeConfig {
    fn default() -> Self {
        TietzeConfig { max_passes: 1000 }
    }
}

/// Output of [`tietze_simplify`]: an isomorphic presentation together with
/// the images of the original generators in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplification {
    pub presentation: Presentation,
    /// `images[g]` is the word in the simplified generators that original
    /// generator `g` maps to under the isomorphism.
    pub images: Vec<Word>,
    /// Original indices of the generators that survived.
    pub survivors: Vec<usize>,
    pub passes: usize,
    /// False when the pass cap was hit; the presentation is still valid, just
    /// not fully simplified.
    pub complete: bool,
}

impl Simplification {
    /// Rewrites a word over the original generators in the simplified ones.
    pub fn map_word(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// True when every pair of surviving generators has a commutator among
    /// the relators. Such a presentation visibly defines an abelian group.
    pub fn visibly_abelian(&self) -> bool {
        visibly_abelian(self.presentation.generator_count(), self.presentation.relators())
    }
}

pub fn tietze_simplify(p: &Presentation) -> Simplification {
    tietze_simplify_with(p, &TietzeConfig::default())
}

/// Deterministic Tietze simplification.
///
/// Each pass drops trivial and duplicate relators, then scans relators
/// shortest-first for a generator occurring exactly once; the lowest-index
/// such generator is solved for and substituted everywhere. When no move
/// applies and every surviving pair commutes, the remaining relators are
/// rewritten in sorted abelian form and those with zero exponent sum are
/// dropped.
pub fn tietze_simplify_with(p: &Presentation, config: &TietzeConfig) -> Simplification {
    let n = p.generator_count();
    let mut alive = vec![true; n];
    let mut relators: Vec<Word> = p.relators().to_vec();
    let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
    let mut passes = 0;
    let mut complete = true;

    loop {
        normalize(&mut relators);
        let Some((ri, g)) = find_elimination(&relators, &alive) else {
            break;
        };
        if passes >= config.max_passes {
            complete = false;
            break;
        }
        passes += 1;

        let r = relators.remove(ri);
        let value = solve_for(&r, g);
        for rel in relators.iter_mut() {
            *rel = rel.substitute_one(g, &value);
        }
        for image in images.iter_mut() {
            *image = image.substitute_one(g, &value);
        }
        alive[g] = false;
    }

    let survivors: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    let mut map = vec![None; n];
    for (new, &old) in survivors.iter().enumerate() {
        map[old] = Some(new);
    }
    let mut relators: Vec<Word> = relators.iter().map(|r| r.reindex(&map)).collect();
    let images: Vec<Word> = images.iter().map(|w| w.reindex(&map)).collect();
    if complete {
        abelian_cleanup(survivors.len(), &mut relators);
    }

    let generators = survivors.iter().map(|&g| p.generators()[g].clone()).collect();
    let presentation =
        Presentation::new(generators, relators).expect("survivor relators stay in range");
    Simplification {
        presentation,
        images,
        survivors,
        passes,
        complete,
    }
}

fn normalize(relators: &mut Vec<Word>) {
    let mut out: Vec<Word> = Vec::with_capacity(relators.len());
    for r in relators.drain(..) {
        let r = r.cyclic_reduce();
        if !r.is_empty() && !out.contains(&r) {
            out.push(r);
        }
    }
    *relators = out;
}

fn find_elimination(relators: &[Word], alive: &[bool]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..relators.len()).collect();
    order.sort_by_key(|&i| (relators[i].len(), i));
    for i in order {
        let r = &relators[i];
        let mut candidates: Vec<usize> = r.letters().iter().map(|l| l.generator).collect();
        candidates.sort_unstable();
        candidates.dedup();
        if let Some(&g) = candidates
            .iter()
            .find(|&&g| alive[g] && r.occurrences(g) == 1)
        {
            return Some((i, g));
        }
    }
    None
}

/// For `r = u g^e v` with `g` absent from `u`, `v`: `g = (v u)^(-e)`.
fn solve_for(r: &Word, g: usize) -> Word {
    let letters = r.letters();
    let pos = letters.iter().position(|l| l.generator == g).expect("generator occurs");
    let mut rest: Vec<_> = letters[pos + 1..].to_vec();
    rest.extend_from_slice(&letters[..pos]);
    let rest = Word::from_letters(rest);
    if letters[pos].inverse {
        rest.free_reduce()
    } else {
        rest.inverse().free_reduce()
    }
}

fn commuting_pairs(generators: usize, relators: &[Word]) -> Vec<Vec<bool>> {
    let mut seen = vec![vec![false; generators]; generators];
    for r in relators {
        if let Some((a, b)) = r.commutator_pair() {
            seen[a][b] = true;
        }
    }
    seen
}

pub(super) fn visibly_abelian(generators: usize, relators: &[Word]) -> bool {
    let seen = commuting_pairs(generators, relators);
    (0..generators).all(|a| (a + 1..generators).all(|b| seen[a][b]))
}

fn abelian_cleanup(generators: usize, relators: &mut Vec<Word>) {
    if generators < 2 || !visibly_abelian(generators, relators) {
        return;
    }
    let mut kept_pair = vec![vec![false; generators]; generators];
    let mut out: Vec<Word> = Vec::with_capacity(relators.len());
    for r in relators.drain(..) {
        match r.commutator_pair() {
            Some((a, b)) => {
                if !kept_pair[a][b] {
                    kept_pair[a][b] = true;
                    out.push(r);
                }
            }
            None => {
                let sorted = Word::from_exponents(&r.exponent_vector(generators));
                if !sorted.is_empty() && !out.contains(&sorted) {
                    out.push(sorted);
                }
            }
        }
    }
    *relators = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::abelian_invariants;

    #[test]
    fn commuting_pair_survives() {
        let p = Presentation::parse(
            &["alpha1", "alpha2", "alpha3"],
            &["[alpha1,alpha2]", "[alpha2,alpha3]", "alpha1 alpha3^2"],
        )
        .unwrap();
        let s = tietze_simplify(&p);
        assert!(s.complete);
        let q = &s.presentation;
        assert_eq!(q.generator_count(), 2);
        assert_eq!(q.to_string(), "<alpha2, alpha3 | [alpha2,alpha3]>");
        assert_eq!(s.survivors, vec![1, 2]);
        // alpha1 = alpha3^-2
        assert_eq!(s.images[0], Word::power(1, -2));
    }

    #[test]
    fn single_relator_leaves_infinite_cyclic() {
        let p = Presentation::parse(&["alpha1", "alpha3"], &["alpha1 alpha3^2"]).unwrap();
        let s = tietze_simplify(&p);
        assert_eq!(s.presentation.to_string(), "<alpha3 |>");
    }

    #[test]
    fn nothing_to_do() {
        let p = Presentation::free(&["x"]).unwrap();
        let s = tietze_simplify(&p);
        assert_eq!(s.presentation, p);
        assert_eq!(s.passes, 0);
    }

    #[test]
    fn pass_cap_reports_incomplete() {
        let p = Presentation::parse(&["a", "b", "c"], &["a b^2", "b c^2"]).unwrap();
        let capped = tietze_simplify_with(&p, &TietzeConfig { max_passes: 1 });
        assert!(!capped.complete);
        assert_eq!(capped.passes, 1);
        assert_eq!(
            abelian_invariants(&capped.presentation),
            abelian_invariants(&p)
        );
        let full = tietze_simplify(&p);
        assert!(full.complete);
        assert_eq!(full.presentation.generator_count(), 1);
    }

    #[test]
    fn images_respect_relators() {
        // every original relator maps to a consequence of the new relators;
        // for this presentation the image is freely trivial
        let p = Presentation::parse(&["a", "b", "c"], &["a^-1 b c", "c"]).unwrap();
        let s = tietze_simplify(&p);
        for r in p.relators() {
            assert!(s.map_word(r).is_empty());
        }
    }
}
