#pragma once

// Root finding on the secular function and spectrum assembly.
//
// The positive branch is scanned in x = sqrt(eps_hat), the negative branch in
// kappa = sqrt(-eps_hat). eps_hat = 0 is never scanned; it is decided by the
// zero-mode law. Double roots appear as tangencies of the secular function and
// are only accepted when B(eps) = U, which is exactly the condition for the
// boundary condition to annihilate the whole two-dimensional solution space.

#include <optional>
#include <string>
#include <vector>

#include "bcspec/algebra.hpp"
#include "bcspec/spectral_core.hpp"

namespace bcspec {

struct ScanWindow {
    double x_max_pos = 50.0 * kPi;
    double kappa_max = 60.0;

    /// A window at least as large as `base` whose negative cutoff lies beyond
    /// every negative-branch root predicted by the large-kappa asymptotics.
    static ScanWindow covering(const Unitary2& u);
    static ScanWindow covering(const Unitary2& u, const ScanWindow& base);
};

struct SolverTolerances {
    double grid_step = kPi / 100.0;
    /// |x| below this is never scanned.
    double zero_exclusion = 1e-4;
    double root_dx = 1e-12;
    /// |secular| at an extremum, relative to 4 (1 + t^2), that makes it a
    /// tangential candidate.
    double tangent = 1e-8;
    /// Every root must satisfy |F_U| < root_residual (1 + |eps_hat|).
    double root_residual = 1e-8;
    /// ||B(eps) - U||_F below this means multiplicity 2.
    double multiplicity = 1e-7;
    double zero_mode = kZeroModeTol;
    int max_iterations = 200;
};

struct SpectralPoint {
    double x = 0.0; // k l on the positive branch, kappa l on the negative one
    Branch branch = Branch::positive;
    double eps_hat = 0.0;
    int multiplicity = 1;

    static SpectralPoint on_branch(Branch b, double t, int multiplicity = 1);
};

struct Bracket {
    enum class Kind { sign_change, tangential };

    Branch branch = Branch::positive;
    double lo = 0.0;
    double hi = 0.0;
    Kind kind = Kind::sign_change;
};

struct SolverDiagnostics {
    double grid_step_used = 0.0;
    int rescans = 0;
    int counting_deviation = 0;
    std::vector<std::string> discarded;
};

struct Spectrum {
    std::vector<SpectralPoint> points; // strictly increasing eps_hat
    bool zero_mode = false;
    ScanWindow window;
    SolverTolerances tolerances;
    SolverDiagnostics diagnostics;

    /// eps_hat of every level, repeated according to multiplicity.
    std::vector<double> levels() const;
    int negative_count() const;
};

/// Sign-change intervals and tangential candidates of the secular function on
/// both branches. Tangential brackets are degenerate (lo == hi at the extremum).
std::vector<Bracket> scan_brackets(const Unitary2& u, const ScanWindow& window,
                                   const SolverTolerances& tol = {});

/// Refines a sign-change bracket to |dx| < tol.root_dx, or verifies a
/// tangential candidate. Rejected candidates return nullopt and, when
/// `discarded` is given, leave a note there.
std::optional<SpectralPoint> refine_root(const Unitary2& u, const Bracket& bracket,
                                         const SolverTolerances& tol = {},
                                         std::vector<std::string>* discarded = nullptr);

int multiplicity_of(const Unitary2& u, const SpectralPoint& p, double tol = 1e-7);

/// Every eigenvalue with x in (0, x_max_pos] and kappa in (0, kappa_max],
/// plus the zero mode when the zero-mode law holds.
///
/// Throws InvalidParameter for a nonpositive window or grid step and
/// SolverDiagnostic when a bracket cannot be refined, a root fails its residual
/// check, the negative tail is not sign-definite past kappa_max, or the
/// counting function still deviates after one rescan at half the grid step.
Spectrum solve_spectrum(const Unitary2& u, const ScanWindow& window = {},
                        const SolverTolerances& tol = {});

/// max over Lambda of |N_U(Lambda) - N_Dirichlet(Lambda)| within the window.
int counting_deviation(const Spectrum& s);

/// psi(s) = c1 psi_1(s) + c2 psi_2(s) on s in [-1/2, 1/2], with basis
/// {e^{iks}, e^{-iks}} or, at eps = 0, {1, -s}.
struct Eigenfunction {
    Complex c1;
    Complex c2;
    Branch branch = Branch::positive;
    double x = 0.0;

    SolutionBasis basis() const;
    Complex value(double s) const;
    Complex derivative(double s) const;
    /// Closed-form integral of |psi|^2 over [-1/2, 1/2].
    double norm_squared() const;
};

/// L2-orthonormal basis of the eigenspace at p. Throws InconsistentRoot when
/// A_- - U A_+ has no numerical null space at p.
std::vector<Eigenfunction> eigenfunction_at(const Unitary2& u, const SpectralPoint& p);

} // namespace bcspec
