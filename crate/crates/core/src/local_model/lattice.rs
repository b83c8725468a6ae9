use super::MonomialValuation;

/// `#{(i, j) ∈ Z²_{≥0} : a·i + b·j < p}`, the colength of the valuation ideal
/// `{f : v(f) >= p}` of a monomial valuation. Summed row by row in `j`.
pub fn colength(v: &MonomialValuation, p: u64) -> u64 {
    let (a, b) = (v.a(), v.b());
    (0..)
        .map(|j| b * j)
        .take_while(|&bj| bj < p)
        .map(|bj| (p - bj).div_ceil(a))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: u64, b: u64, p: u64) -> u64 {
        let mut n = 0;
        for i in 0..=p {
            for j in 0..=p {
                if a * i + b * j < p {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn examples() {
        let v = |a, b| MonomialValuation::new(a, b).unwrap();
        assert_eq!(colength(&v(1, 5), 5), 5);
        assert_eq!(colength(&v(2, 13), 26), 20);
        assert_eq!(colength(&v(3, 7), 0), 0);
    }

    #[test]
    fn matches_enumeration_and_swap() {
        for a in 1..7u64 {
            for b in 1..7u64 {
                let Ok(v) = MonomialValuation::new(a, b) else { continue };
                for p in 0..40 {
                    assert_eq!(colength(&v, p), brute(a, b, p));
                    assert_eq!(colength(&v, p), colength(&v.swapped(), p));
                }
            }
        }
    }
}
