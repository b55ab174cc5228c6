#include "bcspec/algebra.hpp"

#include <cmath>
#include <sstream>

#include "bcspec/errors.hpp"

namespace bcspec {

namespace {

constexpr double kDetOneTol = 1e-12;

void require_special(const Unitary2& n, const char* who) {
    const Complex d = n.matrix().det();
    if (std::abs(d - 1.0) > kDetOneTol) {
        std::ostringstream msg;
        msg << who << ": expected det = 1, got " << d;
        throw InvalidParameter(msg.str());
    }
}

} // namespace

Complex checked_complex(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw InvalidParameter("complex component is not finite");
    }
    return {re, im};
}

Mat2 Mat2::adjoint() const {
    return {std::conj(e11), std::conj(e21), std::conj(e12), std::conj(e22)};
}

Mat2 Mat2::conj() const {
    return {std::conj(e11), std::conj(e12), std::conj(e21), std::conj(e22)};
}

Mat2 Mat2::inverse() const {
    const Complex d = det();
    if (d == Complex{}) {
        throw InvalidParameter("Mat2::inverse: singular matrix");
    }
    return {e22 / d, -e12 / d, -e21 / d, e11 / d};
}

double Mat2::frobenius_norm() const {
    return std::sqrt(std::norm(e11) + std::norm(e12) + std::norm(e21) + std::norm(e22));
}

bool Mat2::is_finite() const {
    for (const Complex& z : {e11, e12, e21, e22}) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.e11 + b.e11, a.e12 + b.e12, a.e21 + b.e21, a.e22 + b.e22};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.e11 - b.e11, a.e12 - b.e12, a.e21 - b.e21, a.e22 - b.e22};
}

Mat2 operator-(const Mat2& a) { return {-a.e11, -a.e12, -a.e21, -a.e22}; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.e11 * b.e11 + a.e12 * b.e21, a.e11 * b.e12 + a.e12 * b.e22,
            a.e21 * b.e11 + a.e22 * b.e21, a.e21 * b.e12 + a.e22 * b.e22};
}

Mat2 operator*(Complex s, const Mat2& a) { return {s * a.e11, s * a.e12, s * a.e21, s * a.e22}; }

double distance(const Mat2& a, const Mat2& b) { return (a - b).frobenius_norm(); }

Unitary2::Unitary2(const Mat2& m) : m_(m) {
    if (!m.is_finite()) {
        throw InvalidParameter("Unitary2: matrix has non-finite entries");
    }
    const double defect = distance(m.adjoint() * m, Mat2::identity());
    if (defect > kUnitarityTol) {
        std::ostringstream msg;
        msg << "Unitary2: ||U^dagger U - I||_F = " << defect << " exceeds " << kUnitarityTol;
        throw InvalidParameter(msg.str());
    }
}

Complex Unitary2::operator()(int row, int col) const {
    if (row == 0) return col == 0 ? m_.e11 : m_.e12;
    return col == 0 ? m_.e21 : m_.e22;
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    // Products of unitaries stay within a few ulps of unitarity, so the
    // constructor check is skipped.
    return Unitary2(a.m_ * b.m_, Unitary2::Trusted{});
}

double BoundaryParams::sphere_defect() const {
    return std::abs(m0 * m0 + m1 * m1 + m2 * m2 + m3 * m3 - 1.0);
}

BoundaryParams BoundaryParams::make(double eta, double m0, double m1, double m2, double m3) {
    BoundaryParams p{eta, m0, m1, m2, m3};
    for (double v : {eta, m0, m1, m2, m3}) {
        if (!std::isfinite(v)) throw InvalidParameter("BoundaryParams: non-finite component");
    }
    if (eta < 0.0 || eta >= kPi) {
        std::ostringstream msg;
        msg << "BoundaryParams: eta = " << eta << " outside [0, pi)";
        throw InvalidParameter(msg.str());
    }
    if (p.sphere_defect() > kSphereTol) {
        std::ostringstream msg;
        msg << "BoundaryParams: |m0^2 + |m|^2 - 1| = " << p.sphere_defect() << " exceeds "
            << kSphereTol;
        throw InvalidParameter(msg.str());
    }
    return p;
}

Unitary2 su2_from_vector(double m0, double m1, double m2, double m3) {
    return Unitary2(Mat2{Complex{m0, m3}, Complex{m2, m1}, Complex{-m2, m1}, Complex{m0, -m3}});
}

Unitary2 from_params(const BoundaryParams& p) {
    // Revalidate: callers may have built the aggregate by hand.
    BoundaryParams q = BoundaryParams::make(p.eta, p.m0, p.m1, p.m2, p.m3);
    const double norm = std::sqrt(q.m0 * q.m0 + q.m1 * q.m1 + q.m2 * q.m2 + q.m3 * q.m3);
    q.m0 /= norm;
    q.m1 /= norm;
    q.m2 /= norm;
    q.m3 /= norm;
    const Complex phase = std::polar(1.0, q.eta);
    const Mat2 m{Complex{q.m0, q.m3}, Complex{q.m2, q.m1}, Complex{-q.m2, q.m1},
                 Complex{q.m0, -q.m3}};
    return Unitary2(phase * m);
}

BoundaryParams to_params(const Unitary2& u) {
    const Mat2& m = u.matrix();
    double eta = 0.5 * std::arg(m.det());
    if (eta < 0.0) eta += kPi;
    if (eta >= kPi) eta -= kPi;

    const Mat2 su = std::polar(1.0, -eta) * m;
    double m0 = 0.5 * (su.e11 + su.e22).real();
    double m3 = 0.5 * (su.e11 - su.e22).imag();
    double m1 = 0.5 * (su.e12 + su.e21).imag();
    double m2 = 0.5 * (su.e12 - su.e21).real();
    const double norm = std::sqrt(m0 * m0 + m1 * m1 + m2 * m2 + m3 * m3);
    m0 /= norm;
    m1 /= norm;
    m2 /= norm;
    m3 /= norm;
    return BoundaryParams{eta, m0, m1, m2, m3};
}

Traces traces(const Unitary2& u) {
    const Mat2& m = u.matrix();
    return {m.det(), m.trace(), (m * Mat2::sigma_x()).trace()};
}

double wrap_angle(double angle, double period) {
    double r = std::fmod(angle, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

Unitary2 section(double phase) { return Unitary2(Mat2::diag(std::polar(1.0, phase), 1.0)); }

SemidirectSplit semidirect_split(const Unitary2& u) {
    const double phase = wrap_angle(std::arg(u.matrix().det()));
    const Unitary2 su2 = u * section(-phase);
    return {su2, phase};
}

Unitary2 phi_action(double phase, const Unitary2& n) {
    require_special(n, "phi_action");
    const Mat2& m = n.matrix();
    const Complex w = std::polar(1.0, phase);
    return Unitary2(Mat2{m.e11, w * m.e12, std::conj(w) * m.e21, m.e22});
}

Unitary2 cover_project(const Unitary2& su2, double phase) {
    require_special(su2, "cover_project");
    return Unitary2(std::polar(1.0, phase) * su2.matrix());
}

} // namespace bcspec
