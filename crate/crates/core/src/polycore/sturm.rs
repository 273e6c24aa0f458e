use super::{signum, PolyQ};

/// Canonical Sturm chain `p, p', −rem(p, p'), …`.
pub fn sturm_sequence(p: &PolyQ) -> Vec<PolyQ> {
    let mut seq = vec![p.clone()];
    if p.is_zero() {
        return seq;
    }
    let mut cur = p.derivative();
    while !cur.is_zero() {
        let (_, r) = seq.last().unwrap().div_rem(&cur);
        seq.push(cur);
        cur = -r;
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in the open interval `(0, ∞)`.
pub fn count_positive_roots(p: &PolyQ) -> usize {
    let Some(v) = p.valuation() else {
        // the zero polynomial vanishes everywhere
        return usize::MAX;
    };
    // strip the root at η = 0, it is not in the open interval
    let q = PolyQ::from_coeffs(p.coeffs()[v..].to_vec());
    if q.degree() == Some(0) {
        return 0;
    }
    if q.all_coeffs_positive() || (-&q).all_coeffs_positive() {
        return 0;
    }
    let seq = sturm_sequence(&q);
    let at_zero = sign_changes(seq.iter().map(|s| signum(&s.coeff(0))));
    let at_inf = sign_changes(seq.iter().map(|s| signum(&s.leading())));
    at_zero - at_inf
}
