//! The quickstart from README.md, kept compiling.

use affine_toeplitz::affine::ConePoint;
use affine_toeplitz::measure::Measure;
use affine_toeplitz::monomial::{reduce_cl, Monomial, StarMonomial};
use affine_toeplitz::state::{kms_state, KmsParams};

fn main() -> Result<(), affine_toeplitz::Error> {
    let x = Monomial::new(2u64, 1u64, 0u64, 3u64)?;
    let y = Monomial::new(6u64, 0u64, 2u64, 5u64)?;
    assert_eq!(x.mul(&y), Monomial::new(4u64, 2u64, 2u64, 5u64)?);

    let gamma = reduce_cl(&x); // image in ℚ ⋊ ℚ₊^×
    assert_eq!(gamma.mul(&gamma.inverse()), reduce_cl(&Monomial::identity()));

    let join = ConePoint::new(4u64, 3u64)?.join(&ConePoint::new(6u64, 1u64)?);
    println!("(4,3) ∨ (6,1) = ({}, {})", join.a(), join.m());

    let psi = kms_state(&KmsParams::new(2.0), &Measure::delta_one())?;
    let v = psi.evaluate(&Monomial::new(3u64, 5u64, 5u64, 3u64)?)?;
    assert!((v.value.re - 1.0 / 9.0).abs() <= v.error_bound);
    println!("ψ₂(V₃S⁵S*⁵V₃*) = {} (± {})", v.value.re, v.error_bound);
    Ok(())
}
