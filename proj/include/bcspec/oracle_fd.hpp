#pragma once

// Finite-difference cross-check of the spectrum.
//
// -d^2/ds^2 on [-1/2, 1/2] is discretized on n cell centres
// s_j = -1/2 + (j + 1/2) h, h = 1/n, with one ghost cell beyond each end.
// At the junction the boundary data are taken at the cell faces,
//
//   Psi  ~ (g + v) / 2,   Psi' ~ (g - v) / h,
//
// where v = (psi_0, psi_{n-1}) and g = (psi_{-1}, psi_n) are the ghosts.
// (I - U) Psi = i (I + U) Psi' then fixes g = G v with
//
//   G = [h/2 (I - U) - i (I + U)]^{-1} [-h/2 (I - U) - i (I + U)],
//
// a Hermitian function of U, so the eliminated matrix stays Hermitian. Both
// face formulas are second order, which the convergence check relies on.

#include <array>
#include <string>
#include <vector>

#include "bcspec/algebra.hpp"
#include "bcspec/spectral_core.hpp"

namespace bcspec {

/// Tridiagonal-plus-corners matrix of the discretized operator (natural
/// ordering), already divided by h^2 so its eigenvalues are eps_hat values.
struct FdProblem {
    int n = 0;
    double h = 0.0;
    Unitary2 u = Unitary2::identity();
    Mat2 ghost_map;              // G above
    std::vector<Complex> diag;   // A[j][j]
    std::vector<Complex> upper;  // A[j][j+1]
    std::vector<Complex> lower;  // A[j+1][j]
    Complex corner_upper;        // A[0][n-1]
    Complex corner_lower;        // A[n-1][0]

    Complex at(int i, int j) const;
    /// max |A_ij - conj(A_ji)| / max |A_ij|
    double hermiticity_defect() const;
    std::vector<std::vector<Complex>> to_dense() const;
};

/// Throws InvalidParameter for n < 16 and SolverDiagnostic when the ghost
/// system is singular for this U and h.
FdProblem assemble(const Unitary2& u, int n);

/// Lowest k eigenvalues, ascending. Computed by bisection on Sylvester
/// inertia counts of the banded LDL^H factorization, with eigenvectors from
/// inverse iteration used to certify ||A v - lambda v|| <= 1e-8 ||A||.
/// Throws InvalidParameter for k > n and SolverDiagnostic when the residual
/// certificate fails.
std::vector<double> oracle_eigenvalues(const FdProblem& p, int k);

/// Number of eigenvalues strictly below sigma.
int count_below(const FdProblem& p, double sigma);

struct OracleComparison {
    double solver;
    double coarse;
    double fine;
    double abs_dev_coarse;
    double abs_dev_fine;
    double rel_dev_fine; // |dev| / max(1, |eps_hat|)
};

struct OracleReport {
    std::array<int, 2> grids{};
    int k = 0;
    double rel_tol = 1e-3;
    std::vector<double> eigenvalues_coarse;
    std::vector<double> eigenvalues_fine;
    std::vector<OracleComparison> comparison;
    double order = 0.0;
    int negatives_solver = 0;
    int negatives_fd = 0;
    bool passed = false;
    std::vector<std::string> notes;
};

inline constexpr double kOrderMin = 1.7;
inline constexpr double kOrderMax = 2.3;

/// Compares the lowest k levels of solve_spectrum with both FD grids.
/// Failures are reported in the returned record (passed = false), not thrown.
/// Throws InvalidParameter unless grids[1] >= 2 grids[0].
OracleReport cross_validate(const Unitary2& u, std::array<int, 2> grids, int k,
                            double rel_tol = 1e-3);

/// Integrates psi'' = -eps psi with classical RK4 over [-1/2, 1/2] for the
/// two exponential basis solutions and returns the largest entry deviation
/// of the resulting A_pm from boundary_matrices(e). Throws InvalidParameter
/// for eps = 0 or steps < 100.
double ode_check_boundary_matrices(DimlessEnergy e, int steps);

} // namespace bcspec
