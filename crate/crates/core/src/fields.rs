//! `λ`-fields of the free problem at fixed `z` and `E`.

use num_complex::Complex64;

use crate::gaf::LambdaField;
use crate::spectral::{conjugate_plane_wave, plane_wave, Energy, PhysicalPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `f ≡ 1`.
pub fn vacuum_f() -> LambdaField {
    LambdaField::new("f_vacuum", |_| Ok(Complex64::new(1.0, 0.0)))
}

/// `f* = i sign(λλ̄-1)/λ`.
pub fn vacuum_f_star() -> LambdaField {
    LambdaField::new("f_star_vacuum", |l| Ok(I * l.sign()? / l.value()))
}

/// `λ ↦ e^{ik_E(λ)x}`.
pub fn plane_wave_field(z: PhysicalPoint, energy: Energy) -> LambdaField {
    LambdaField::new("plane_wave", move |l| Ok(plane_wave(z, l, energy)))
}

/// `λ ↦ (i/λ) exp[+(√|E|/2)(λz̄ + z/λ)]`.
pub fn conjugate_plane_wave_field(z: PhysicalPoint, energy: Energy) -> LambdaField {
    LambdaField::new("conjugate_plane_wave", move |l| {
        Ok(conjugate_plane_wave(z, l, energy))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaf::{build_grid, check_dbar_pair};

    #[test]
    fn vacuum_fields_are_generalized_analytic_with_zero_b() {
        let e = Energy::new(-2.0).unwrap();
        let z = PhysicalPoint::new(0.4, -0.7);
        let grid = build_grid(0.2, 5.0, 12, 6, e, None).unwrap();
        let zero = LambdaField::zero();
        let (a, b) = check_dbar_pair(&vacuum_f(), &vacuum_f_star(), &zero, &grid, 1e-3).unwrap();
        assert!(a.max_abs == 0.0 && b.max_rel < 1e-5);
        let (a, b) = check_dbar_pair(
            &plane_wave_field(z, e),
            &conjugate_plane_wave_field(z, e),
            &zero,
            &grid,
            1e-3,
        )
        .unwrap();
        assert!(
            a.max_rel < 1e-4 && b.max_rel < 1e-4,
            "{} {}",
            a.max_rel,
            b.max_rel
        );
    }
}
