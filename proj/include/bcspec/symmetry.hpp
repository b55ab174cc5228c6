#pragma once

// Parity orbits, time reversal and coordinates on the space of spectra.
//
// The spectrum of H_U depends on U only through (eta, m0, m1). Conjugation
// by e^{i delta sigma_x} (the parity group acting on the boundary) preserves
// these three numbers, so every spectrum in the interior of the disk
// m0^2 + m1^2 < 1 is shared by a circle of boundary conditions, while the
// parity-symmetric family U(eta, theta) = e^{i(eta I + theta sigma_x)} sits
// alone on the boundary circle. Identifying eta = 0 with eta = pi costs a
// sign flip of (m0, m1): the space of spectra is a solid torus twisted by pi.

#include <vector>

#include "bcspec/algebra.hpp"

namespace bcspec {

/// Tolerance used by spectral-class equality (per coordinate).
inline constexpr double kClassTol = 1e-12;
/// Tolerance on |m2|, |m3| for membership in the parity-symmetric family.
inline constexpr double kParityTol = 1e-10;

struct SpectralClass {
    double eta = 0.0; // [0, pi)
    double m0 = 1.0;
    double m1 = 0.0;

    /// Folds any eta into [0, pi), flipping (m0, m1) once per pi shift.
    static SpectralClass canonical(double eta, double m0, double m1);

    /// Coordinate-wise comparison within kClassTol, with the eta = 0 ~ pi
    /// seam compared through the twist.
    friend bool operator==(const SpectralClass& a, const SpectralClass& b);
};

struct IsospectralMember {
    double delta;
    Unitary2 u;
};

struct IsospectralFamily {
    Unitary2 base;
    std::vector<IsospectralMember> samples;

    /// Members that differ entrywise by more than `tol` from every earlier one.
    std::vector<IsospectralMember> distinct(double tol = 1e-10) const;
};

/// theta_1(eta) = eta + 2 eta0 and theta_2(eta) = -eta, eta0 = arctan 2:
/// the zero-mode set of the parity-symmetric family.
struct ZeroModeCurves {
    double eta0;

    double theta1(double eta) const { return eta + 2.0 * eta0; }
    double theta2(double eta) const { return -eta; }

    /// The crossing point as stated, (eta, theta) = (-eta0, eta0), which is
    /// outside the canonical eta range.
    struct Point {
        double eta;
        double theta;
    };
    Point intersection_raw() const { return {-eta0, eta0}; }
    /// The same point folded into eta in [0, pi): (pi - eta0, pi + eta0).
    Point intersection_canonical() const;
};

enum class Locus { boundary, interior };

const char* to_string(Locus l);

/// U(eta, theta) = e^{i eta} (cos theta I + i sin theta sigma_x). eta and theta
/// are taken as given; no folding.
Unitary2 parity_family(double eta, double theta);

/// e^{i delta sigma_x} U e^{-i delta sigma_x}.
Unitary2 parity_conjugate(const Unitary2& u, double delta);

/// U^T; flips the sign of m2 only.
Unitary2 time_reverse(const Unitary2& u);

bool is_parity_symmetric(const Unitary2& u, double tol = kParityTol);

SpectralClass spectral_class(const Unitary2& u);

/// Parity orbit sampled at delta_j = j pi / n_samples, j = 0..n-1. Throws
/// InvalidParameter when n_samples < 1.
IsospectralFamily isospectral_family(const Unitary2& u, int n_samples);

ZeroModeCurves zero_mode_curves();

Locus hamiltonian_space_locus(const Unitary2& u);

} // namespace bcspec
