use num_traits::{Signed, Zero};

use super::{Polynomial, Rational, ScalarError};

/// Interval endpoint for root counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// Sturm chain `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

/// Sign of `p` at a bound; infinite bounds use the leading term.
fn sign_at(p: &Polynomial, at: &Bound) -> i8 {
    let sgn = |r: &Rational| {
        if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        }
    };
    match at {
        Bound::Finite(x) => sgn(&p.eval(x)),
        Bound::PosInf => p.leading().map_or(0, sgn),
        Bound::NegInf => {
            let s = p.leading().map_or(0, sgn);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations(seq: &[Polynomial], at: &Bound) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign_at(p, at))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_real_root_count(p: &Polynomial, lo: &Bound, hi: &Bound) -> Result<usize, ScalarError> {
    if p.is_zero() {
        return Err(ScalarError::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    let seq = sturm_sequence(&sf);
    let (vlo, vhi) = (variations(&seq, lo), variations(&seq, hi));
    Ok(vlo.saturating_sub(vhi))
}
