/// Bartlett weight `(1 - h/L)_+` for a non-negative lag `h` and bandwidth `l >= 1`.
pub fn bartlett_weight(h: usize, l: usize) -> f64 {
    debug_assert!(l >= 1, "bandwidth must be positive");
    if h < l {
        1.0 - h as f64 / l as f64
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(bartlett_weight(0, 4), 1.0);
        assert_eq!(bartlett_weight(2, 4), 0.5);
        assert_eq!(bartlett_weight(4, 4), 0.0);
        assert_eq!(bartlett_weight(9, 4), 0.0);
    }

    #[test]
    fn non_increasing_in_lag() {
        for l in 1..20 {
            assert_eq!(bartlett_weight(0, l), 1.0);
            for h in 0..30 {
                let (a, b) = (bartlett_weight(h, l), bartlett_weight(h + 1, l));
                assert!(b <= a);
                assert!((0.0..=1.0).contains(&a));
                if h >= l {
                    assert_eq!(a, 0.0);
                }
            }
        }
    }
}
