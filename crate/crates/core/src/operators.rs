use crate::error::Result;
use crate::field::{forward_transform, RealField};
use crate::multiplier::MultiplierSymbol;

/// Periodic Hilbert transform, multiplier `-i sgn ξ`.
pub fn hilbert_transform(v: &RealField) -> Result<RealField> {
    forward_transform(v)?.apply(&MultiplierSymbol::hilbert(v.grid()))?.inverse()
}

/// Spectral derivative of the given order.
pub fn derivative(v: &RealField, order: u32) -> Result<RealField> {
    forward_transform(v)?.apply(&MultiplierSymbol::derivative(v.grid(), order))?.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use core::f64::consts::PI;

    #[test]
    fn hilbert_of_cosine_and_sine() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        for k in [1.0, 3.0, 17.0] {
            let c = RealField::from_fn(&g, |x| (k * x).cos()).unwrap();
            let s = RealField::from_fn(&g, |x| (k * x).sin()).unwrap();
            let hc = hilbert_transform(&c).unwrap();
            let hs = hilbert_transform(&s).unwrap();
            for j in 0..64 {
                assert!((hc.samples()[j] - s.samples()[j]).abs() < 1e-13);
                assert!((hs.samples()[j] + c.samples()[j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn hilbert_kills_constants() {
        let g = Grid::new(5.0, 16).unwrap();
        let c = RealField::new(&g, alloc::vec![2.5; 16]).unwrap();
        assert!(hilbert_transform(&c).unwrap().max_abs() < 1e-15);
    }
}
