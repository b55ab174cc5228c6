#pragma once

// Dimensionless spectral-function machinery for the ring with a junction.
//
// Lengths are measured in units of the ring length (l = 1), energies as
// eps_hat = eps l^2 with eps = 2 m E / hbar^2. The interval is [-1/2, 1/2].
//
//   Psi_pm = Psi +- i Psi'  = A_pm(eps) (c1, c2)^T
//   B(eps) = A_-(eps) A_+(eps)^{-1} = a(eps) I + b(eps) sigma_x
//   F_U(eps) = det[B(eps) - U]
//            = e^{2i eta} - 2 e^{i eta} m0 a + 2i e^{i eta} m1 b + c
//
// F_U is continuous in eps, including eps = 0, and its zero set is the
// spectrum of H_U in units of hbar^2 / (2 m l^2).

#include "bcspec/algebra.hpp"

namespace bcspec {

/// eps_hat = 2 m E l^2 / hbar^2.
struct DimlessEnergy {
    double value = 0.0;

    constexpr explicit DimlessEnergy(double v) : value(v) {}
};

/// x = k l: real and nonnegative for eps_hat >= 0, i kappa with kappa > 0 below.
struct WaveNumber {
    Complex x;

    bool is_imaginary() const { return x.imag() > 0.0; }
};

enum class SolutionBasis {
    exponential, // c1 e^{ikx} + c2 e^{-ikx}
    affine,      // c1 - c2 x, the eps = 0 basis matching A_pm(0)
};

struct BoundaryMatrices {
    Mat2 a_plus;
    Mat2 a_minus;
    SolutionBasis basis = SolutionBasis::exponential;
};

struct SpectralCoeffs {
    Complex a;
    Complex b;
    Complex c;
    /// [1 + x^2] sin x + 2 i x cos x; zero at eps = 0, may overflow for very
    /// negative eps (a, b, c stay finite there).
    Complex D;
};

/// Which sign of the energy a root or evaluation lives on.
enum class Branch { negative, zero, positive };

const char* to_string(Branch b);

WaveNumber wave_number(DimlessEnergy e);

/// A_pm(eps). For eps != 0 in the exponential basis,
///   A_pm = ((1 +- x) e^{-ix/2}, (1 -+ x) e^{ix/2}; (1 -+ x) e^{ix/2}, (1 +- x) e^{-ix/2}),
/// and at eps = 0 A_pm(0) = ((1, 1/2 +- i), (1, -1/2 -+ i)) in the affine basis.
BoundaryMatrices boundary_matrices(DimlessEnergy e);

/// a, b, c and the common denominator. At eps = 0 the limits
/// 1/(1+2i), 2i/(1+2i), (1-2i)/(1+2i) are returned with D = 0.
SpectralCoeffs coeffs(DimlessEnergy e);

/// B(eps) = a I + b sigma_x from the closed forms.
Mat2 b_matrix(DimlessEnergy e);

/// F_U(eps) through the (eta, m0, m1) expansion.
Complex spectral_function(const BoundaryParams& p, DimlessEnergy e);
Complex spectral_function(const Unitary2& u, DimlessEnergy e);

/// det[B(eps) - U] computed directly; an independent route to F_U.
Complex spectral_function_det(const Unitary2& u, DimlessEnergy e);

/// det[A_-(eps) - U A_+(eps)] = det(A_+) F_U(eps). Discontinuous at zero, so
/// eps = 0 throws InvalidParameter.
Complex spectral_function_alt(const Unitary2& u, DimlessEnergy e);

/// Real secular function, Re or Im of e^{-i eta} D(eps) F_U(eps):
///   eps > 0: 2[cos eta (1+x^2) sin x - 2 sin eta x cos x] - 2 m0 (1-x^2) sin x - 4 m1 x
///   eps < 0: 2[cos eta (1-k^2) sinh k - 2 sin eta k cosh k] - 2 m0 (1+k^2) sinh k - 4 m1 k
/// For kappa > 30 the negative-branch value is multiplied by e^{-kappa}; only
/// its sign and zeros are meaningful there. eps = 0 throws InvalidParameter.
double secular(const Unitary2& u, DimlessEnergy e);
double secular(const BoundaryParams& p, DimlessEnergy e);

/// Secular value and its derivative in the branch variable t (x or kappa).
/// On the negative branch both refer to e^{-kappa} times the secular function.
struct SecularSample {
    double value;
    double slope;
};

SecularSample secular_on_branch(const BoundaryParams& p, Branch branch, double t);

/// cos eta - 2 sin eta - (m0 + 2 m1); zero iff H_U has a zero mode.
double zero_mode_residual(const BoundaryParams& p);

inline constexpr double kZeroModeTol = 1e-10;

bool zero_mode_condition(const Unitary2& u, double tol = kZeroModeTol);

/// det M + det N + tr(MN) - tr(M) tr(N), which equals det(M - N).
Complex det_identity(const Mat2& m, const Mat2& n);

} // namespace bcspec
