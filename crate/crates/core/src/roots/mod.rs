//! Square roots of the classical operators.
//!
//! | target | construction |
//! |---|---|
//! | `S²` | block symbol `U*[za, b; zc, -za]U` pulled back through the even/odd interleaving |
//! | `T_φ` (analytic polynomial symbol) | `T_ψ` with `ψ² = φ`, when it exists |
//! | Volterra `V` | Abel kernel `(x - t)^{-1/2}/√π` |
//! | compressed shift `S_Θ` | `√(z + Θ(1-z)^{1/5})` applied to the Cayley transform of `V` |
//! | `½(S + S*)` | Chebyshev-U moments of `φ` with `φ(x)² = x` |
//! | Hilbert matrix | Lebedev-basis moments of `g` with `g² = π/cosh(πτ)` |
//! | Cesàro matrix | closed form, operator series, and binomial factorization |

mod cesaro;
mod hilbert;
mod shift;
mod tcos;
mod toeplitz;
mod volterra;

pub use cesaro::{
    cesaro_entry_alternating, cesaro_root_closed, cesaro_root_factored,
    cesaro_root_factored_columns, cesaro_root_series, sqrt_one_minus_z_coeffs, SignPattern,
};
pub use hilbert::{
    bessel_k_imag, bessel_k_imag_auto, hilbert_root, lebedev_basis, lebedev_sample_direct,
    LebedevBasis, GRAM_CHECK_UPTO, GRAM_TOL, TAU_MAX, TAU_MIN,
};
pub use shift::{shift2_root, ShiftRootParams};
pub use tcos::{tcos_root, TcosBranch};
pub use toeplitz::{toeplitz_root_decide, PolynomialSymbol};
pub use volterra::{compressed_shift_root, compressed_shift_symbol, volterra_abel_root};
