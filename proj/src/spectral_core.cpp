#include "bcspec/spectral_core.hpp"

#include <cmath>

#include "bcspec/errors.hpp"

namespace bcspec {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kScaleThreshold = 30.0;

// Returns sin x, cos x and the factor s such that the three numerators and
// the denominator below are all multiplied by s. On the negative branch
// s = e^{-kappa} keeps everything finite.
struct ScaledTrig {
    Complex x;
    Complex sin_x;
    Complex cos_x;
    double scale;
};

ScaledTrig scaled_trig(double eps) {
    if (eps > 0.0) {
        const double x = std::sqrt(eps);
        return {x, std::sin(x), std::cos(x), 1.0};
    }
    const double kappa = std::sqrt(-eps);
    const double decay = std::exp(-2.0 * kappa);
    // sin(i kappa) = i sinh kappa, cos(i kappa) = cosh kappa, both times e^{-kappa}
    return {Complex{0.0, kappa}, Complex{0.0, 0.5 * (1.0 - decay)}, 0.5 * (1.0 + decay),
            std::exp(-kappa)};
}

const Complex kOnePlus2i{1.0, 2.0};

} // namespace

const char* to_string(Branch b) {
    switch (b) {
    case Branch::negative: return "negative";
    case Branch::zero: return "zero";
    case Branch::positive: return "positive";
    }
    return "?";
}

WaveNumber wave_number(DimlessEnergy e) {
    if (e.value >= 0.0) return {Complex{std::sqrt(e.value), 0.0}};
    return {Complex{0.0, std::sqrt(-e.value)}};
}

BoundaryMatrices boundary_matrices(DimlessEnergy e) {
    if (e.value == 0.0) {
        const Complex half_i{0.5, 1.0};
        return {Mat2{1.0, half_i, 1.0, -half_i}, Mat2{1.0, std::conj(half_i), 1.0, -std::conj(half_i)},
                SolutionBasis::affine};
    }
    const Complex x = wave_number(e).x;
    const Complex back = std::exp(-kI * x * 0.5);
    const Complex fwd = std::exp(kI * x * 0.5);
    const Mat2 plus{(1.0 + x) * back, (1.0 - x) * fwd, (1.0 - x) * fwd, (1.0 + x) * back};
    const Mat2 minus{(1.0 - x) * back, (1.0 + x) * fwd, (1.0 + x) * fwd, (1.0 - x) * back};
    return {plus, minus, SolutionBasis::exponential};
}

SpectralCoeffs coeffs(DimlessEnergy e) {
    if (e.value == 0.0) {
        return {1.0 / kOnePlus2i, Complex{0.0, 2.0} / kOnePlus2i, std::conj(kOnePlus2i) / kOnePlus2i,
                0.0};
    }
    const ScaledTrig t = scaled_trig(e.value);
    const Complex x2 = t.x * t.x;
    const Complex den = (1.0 + x2) * t.sin_x + 2.0 * kI * t.x * t.cos_x;
    SpectralCoeffs out;
    out.a = (1.0 - x2) * t.sin_x / den;
    out.b = 2.0 * kI * t.x * t.scale / den;
    out.c = ((1.0 + x2) * t.sin_x - 2.0 * kI * t.x * t.cos_x) / den;
    out.D = den / t.scale;
    return out;
}

Mat2 b_matrix(DimlessEnergy e) {
    const SpectralCoeffs k = coeffs(e);
    return Mat2{k.a, k.b, k.b, k.a};
}

Complex spectral_function(const BoundaryParams& p, DimlessEnergy e) {
    const SpectralCoeffs k = coeffs(e);
    const Complex w = std::polar(1.0, p.eta);
    return w * w - 2.0 * w * p.m0 * k.a + 2.0 * kI * w * p.m1 * k.b + k.c;
}

Complex spectral_function(const Unitary2& u, DimlessEnergy e) {
    return spectral_function(to_params(u), e);
}

Complex spectral_function_det(const Unitary2& u, DimlessEnergy e) {
    return (b_matrix(e) - u.matrix()).det();
}

Complex spectral_function_alt(const Unitary2& u, DimlessEnergy e) {
    if (e.value == 0.0) {
        throw InvalidParameter(
            "spectral_function_alt is discontinuous at eps = 0; use spectral_function");
    }
    const BoundaryMatrices am = boundary_matrices(e);
    return (am.a_minus - u.matrix() * am.a_plus).det();
}

SecularSample secular_on_branch(const BoundaryParams& p, Branch branch, double t) {
    const double ce = std::cos(p.eta);
    const double se = std::sin(p.eta);
    if (branch == Branch::positive) {
        const double s = std::sin(t);
        const double c = std::cos(t);
        const double t2 = t * t;
        const double value =
            2.0 * (ce * (1.0 + t2) * s - 2.0 * se * t * c) - 2.0 * p.m0 * (1.0 - t2) * s - 4.0 * p.m1 * t;
        const double slope = 2.0 * ce * (2.0 * t * s + (1.0 + t2) * c) - 4.0 * se * (c - t * s) -
                             2.0 * p.m0 * (-2.0 * t * s + (1.0 - t2) * c) - 4.0 * p.m1;
        return {value, slope};
    }
    if (branch == Branch::negative) {
        const double decay = std::exp(-2.0 * t);
        const double sh = 0.5 * (1.0 - decay); // e^{-k} sinh k
        const double ch = 0.5 * (1.0 + decay); // e^{-k} cosh k
        const double lin = std::exp(-t);
        const double t2 = t * t;
        const double value = 2.0 * ce * (1.0 - t2) * sh - 4.0 * se * t * ch -
                             2.0 * p.m0 * (1.0 + t2) * sh - 4.0 * p.m1 * t * lin;
        // d/dk [e^{-k} g] = e^{-k} (g' - g)
        const double scaled_g_prime = 2.0 * ce * (-2.0 * t * sh + (1.0 - t2) * ch) -
                                      4.0 * se * (ch + t * sh) -
                                      2.0 * p.m0 * (2.0 * t * sh + (1.0 + t2) * ch) - 4.0 * p.m1 * lin;
        return {value, scaled_g_prime - value};
    }
    throw InvalidParameter("secular_on_branch: no secular function on the zero branch");
}

double secular(const BoundaryParams& p, DimlessEnergy e) {
    if (e.value == 0.0) {
        throw InvalidParameter("secular is undefined at eps = 0; use zero_mode_condition");
    }
    if (e.value > 0.0) return secular_on_branch(p, Branch::positive, std::sqrt(e.value)).value;
    const double kappa = std::sqrt(-e.value);
    const double scaled = secular_on_branch(p, Branch::negative, kappa).value;
    return kappa > kScaleThreshold ? scaled : scaled * std::exp(kappa);
}

double secular(const Unitary2& u, DimlessEnergy e) { return secular(to_params(u), e); }

double zero_mode_residual(const BoundaryParams& p) {
    return std::cos(p.eta) - 2.0 * std::sin(p.eta) - (p.m0 + 2.0 * p.m1);
}

bool zero_mode_condition(const Unitary2& u, double tol) {
    return std::abs(zero_mode_residual(to_params(u))) < tol;
}

Complex det_identity(const Mat2& m, const Mat2& n) {
    return m.det() + n.det() + (m * n).trace() - m.trace() * n.trace();
}

} // namespace bcspec
