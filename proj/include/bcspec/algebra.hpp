#pragma once

// 2x2 complex and U(2) arithmetic for quantum boundary conditions.
//
// A boundary condition is a unitary U in U(2). Two presentations are used
// throughout the library:
//
//   covering form    U = e^{i eta} (m0 I + i m.sigma),  eta in [0, pi)
//   semidirect form  U = M diag(e^{i phase}, 1),        M in SU(2)
//
// The covering form is two-to-one before eta is restricted; restricting
// eta to [0, pi) makes it one-to-one.

#include <complex>
#include <numbers>

namespace bcspec {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Frobenius tolerance on U^dagger U - I accepted by Unitary2.
inline constexpr double kUnitarityTol = 1e-12;
/// Tolerance on m0^2 + |m|^2 - 1 accepted by BoundaryParams.
inline constexpr double kSphereTol = 1e-12;

/// Throws InvalidParameter unless both components are finite.
Complex checked_complex(double re, double im);

struct Mat2 {
    Complex e11{}, e12{}, e21{}, e22{};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {}; }
    static constexpr Mat2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static constexpr Mat2 sigma_y() { return {0.0, Complex{0, -1}, Complex{0, 1}, 0.0}; }
    static constexpr Mat2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }
    static constexpr Mat2 diag(Complex a, Complex d) { return {a, 0.0, 0.0, d}; }

    Complex det() const { return e11 * e22 - e12 * e21; }
    Complex trace() const { return e11 + e22; }
    Mat2 adjoint() const;
    Mat2 transpose() const { return {e11, e21, e12, e22}; }
    Mat2 conj() const;
    /// Throws InvalidParameter on a singular matrix.
    Mat2 inverse() const;
    double frobenius_norm() const;
    bool is_finite() const;

    friend Mat2 operator+(const Mat2& a, const Mat2& b);
    friend Mat2 operator-(const Mat2& a, const Mat2& b);
    friend Mat2 operator-(const Mat2& a);
    friend Mat2 operator*(const Mat2& a, const Mat2& b);
    friend Mat2 operator*(Complex s, const Mat2& a);
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Frobenius distance.
double distance(const Mat2& a, const Mat2& b);

/// A 2x2 unitary matrix, checked at construction.
class Unitary2 {
public:
    explicit Unitary2(const Mat2& m);

    static Unitary2 identity() { return Unitary2(Mat2::identity()); }

    const Mat2& matrix() const { return m_; }
    Complex operator()(int row, int col) const;
    Unitary2 adjoint() const { return Unitary2(m_.adjoint(), Trusted{}); }
    Unitary2 transpose() const { return Unitary2(m_.transpose(), Trusted{}); }

    friend Unitary2 operator*(const Unitary2& a, const Unitary2& b);
    friend bool operator==(const Unitary2&, const Unitary2&) = default;

private:
    struct Trusted {};
    Unitary2(const Mat2& m, Trusted) : m_(m) {}

    Mat2 m_;
};

/// Canonical covering-map coordinates (eta, m0, m1, m2, m3).
struct BoundaryParams {
    double eta = 0.0;
    double m0 = 1.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;

    /// Throws InvalidParameter when eta is outside [0, pi) or the S^3
    /// constraint fails by more than kSphereTol.
    static BoundaryParams make(double eta, double m0, double m1, double m2, double m3);

    double sphere_defect() const;
};

/// e^{i eta} (m0 I + i m.sigma), laid out as
/// e^{i eta} ((m0 + i m3, m2 + i m1), (-m2 + i m1, m0 - i m3)).
Unitary2 from_params(const BoundaryParams& p);

/// Inverse of from_params: eta = arg(det U)/2 folded into [0, pi), then m read
/// off e^{-i eta} U. The m-vector is renormalized onto S^3.
BoundaryParams to_params(const Unitary2& u);

struct Traces {
    Complex det;
    Complex tr;
    Complex tr_sx;
};

/// det U = e^{2i eta}, tr U = 2 e^{i eta} m0, tr(U sigma_x) = 2i e^{i eta} m1.
Traces traces(const Unitary2& u);

/// The section U(1) -> U(2), e^{i phase} -> diag(e^{i phase}, 1).
Unitary2 section(double phase);

struct SemidirectSplit {
    Unitary2 su2;
    double phase = 0.0; // in [0, 2 pi)
};

/// Writes u = M section(phase) with det M = 1.
SemidirectSplit semidirect_split(const Unitary2& u);

/// phi_{e^{i phase}}: (a, b; c, d) -> (a, e^{i phase} b; e^{-i phase} c, d).
/// Throws InvalidParameter when det n != 1.
Unitary2 phi_action(double phase, const Unitary2& n);

/// Covering projection (M, e^{i phase}) -> e^{i phase} M for M in SU(2).
/// Throws InvalidParameter when det M != 1.
Unitary2 cover_project(const Unitary2& su2, double phase);

/// Builds an SU(2) element m0 I + i m.sigma (no eta factor).
Unitary2 su2_from_vector(double m0, double m1, double m2, double m3);

/// Reduces an angle to [0, period).
double wrap_angle(double angle, double period = kTwoPi);

} // namespace bcspec
