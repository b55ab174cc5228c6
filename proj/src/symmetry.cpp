#include "bcspec/symmetry.hpp"

#include <cmath>

#include "bcspec/errors.hpp"

namespace bcspec {

SpectralClass SpectralClass::canonical(double eta, double m0, double m1) {
    const double turns = std::floor(eta / kPi);
    double folded = eta - turns * kPi;
    if (folded >= kPi) folded -= kPi;
    if (folded < 0.0) folded = 0.0;
    const bool odd = std::fmod(std::abs(turns), 2.0) == 1.0;
    return odd ? SpectralClass{folded, -m0, -m1} : SpectralClass{folded, m0, m1};
}

bool operator==(const SpectralClass& a, const SpectralClass& b) {
    const auto close = [](double x, double y) { return std::abs(x - y) <= kClassTol; };
    if (close(a.eta, b.eta) && close(a.m0, b.m0) && close(a.m1, b.m1)) return true;
    // across the seam, eta near 0 on one side is eta near pi on the other
    if (close(a.eta + kPi, b.eta) && close(-a.m0, b.m0) && close(-a.m1, b.m1)) return true;
    if (close(a.eta, b.eta + kPi) && close(a.m0, -b.m0) && close(a.m1, -b.m1)) return true;
    return false;
}

std::vector<IsospectralMember> IsospectralFamily::distinct(double tol) const {
    std::vector<IsospectralMember> out;
    for (const IsospectralMember& m : samples) {
        bool seen = false;
        for (const IsospectralMember& o : out) {
            if (distance(o.u.matrix(), m.u.matrix()) <= tol) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(m);
    }
    return out;
}

ZeroModeCurves::Point ZeroModeCurves::intersection_canonical() const {
    // U(-eta0, eta0) = e^{i(pi - eta0)} U(0, eta0 + pi) after absorbing -1.
    return {kPi - eta0, kPi + eta0};
}

const char* to_string(Locus l) { return l == Locus::boundary ? "boundary" : "interior"; }

Unitary2 parity_family(double eta, double theta) {
    const Complex phase = std::polar(1.0, eta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return Unitary2(phase * Mat2{c, Complex{0.0, s}, Complex{0.0, s}, c});
}

Unitary2 parity_conjugate(const Unitary2& u, double delta) {
    const Unitary2 rot = parity_family(0.0, delta);
    return rot * u * rot.adjoint();
}

Unitary2 time_reverse(const Unitary2& u) { return u.transpose(); }

bool is_parity_symmetric(const Unitary2& u, double tol) {
    const BoundaryParams p = to_params(u);
    return std::abs(p.m2) < tol && std::abs(p.m3) < tol;
}

SpectralClass spectral_class(const Unitary2& u) {
    const BoundaryParams p = to_params(u);
    return {p.eta, p.m0, p.m1};
}

IsospectralFamily isospectral_family(const Unitary2& u, int n_samples) {
    if (n_samples < 1) throw InvalidParameter("isospectral_family: n_samples must be >= 1");
    IsospectralFamily fam{u, {}};
    const bool fixed = is_parity_symmetric(u);
    for (int j = 0; j < n_samples; ++j) {
        const double delta = kPi * j / n_samples;
        fam.samples.push_back({delta, fixed ? u : parity_conjugate(u, delta)});
    }
    return fam;
}

ZeroModeCurves zero_mode_curves() { return {std::atan(2.0)}; }

Locus hamiltonian_space_locus(const Unitary2& u) {
    return is_parity_symmetric(u, kParityTol) ? Locus::boundary : Locus::interior;
}

} // namespace bcspec
