#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "bcspec/algebra.hpp"

namespace bcspec::cli {

/// One boundary condition as given on the command line.
struct BcInput {
    enum class Kind { preset, family, params, matrix };

    Kind kind = Kind::preset;
    std::string preset;               // dirichlet, neumann, periodic, antiperiodic, quasiperiodic
    double alpha = 0.0;               // quasiperiodic twist
    double eta = 0.0;
    double theta = 0.0;               // U(eta, theta) = e^{i(eta I + theta sigma_x)}
    BoundaryParams params;
    Mat2 matrix;

    /// Throws InvalidParameter when the input does not describe a unitary.
    Unitary2 resolve() const;
    nlohmann::ordered_json echo() const;
};

/// Raw flag values; unset options stay empty.
struct BcFlags {
    std::optional<std::string> preset;
    std::optional<double> alpha;
    std::optional<double> eta;
    std::optional<double> theta;
    std::optional<double> m0, m1, m2, m3;
    std::optional<std::string> matrix;
};

/// Exactly one of --preset, --matrix or --eta (with --theta or all of
/// --m0..--m3) must be present. Throws InvalidParameter otherwise.
BcInput parse_bc(const BcFlags& f);

/// e^{i alpha} continuity of psi and psi' across the junction:
/// ((0, e^{-i alpha}), (e^{i alpha}, 0)).
Unitary2 quasiperiodic(double alpha);

/// dirichlet = -I, neumann = I, periodic = sigma_x, antiperiodic = -sigma_x.
Unitary2 preset_matrix(const std::string& name, double alpha = 0.0);

/// Eight comma-separated reals: re, im of U11, U12, U21, U22.
Mat2 parse_matrix(const std::string& text);

struct PhysicalScale {
    double length = 1.0; // m
    double mass = 1.0;   // kg
    double hbar = 1.054571817e-34;

    /// E = hbar^2 eps_hat / (2 m l^2) in joules.
    double energy(double eps_hat) const { return hbar * hbar * eps_hat / (2.0 * mass * length * length); }
};

/// "length,mass" with both positive. Throws InvalidParameter.
PhysicalScale parse_physical(const std::string& text, double hbar);

} // namespace bcspec::cli
