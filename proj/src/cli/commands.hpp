#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bcspec/eigensolver.hpp"
#include "bcspec/oracle_fd.hpp"
#include "cli/input.hpp"
#include "cli/output.hpp"

namespace bcspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitVerify = 4;

/// Entry point of bc_spectra; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

Json spectrum_record(const BcInput& in, const Unitary2& u, const Spectrum& s,
                     const std::optional<PhysicalScale>& phys);
std::string spectrum_csv(const Spectrum& s, const std::optional<PhysicalScale>& phys);

Json classify_record(const BcInput& in, const Unitary2& u);

Json family_record(const BcInput& in, const Unitary2& u, int n, double max_x);

enum class Observable { ground_state, zero_mode_residual, gap };

struct SweepCell {
    int i;
    int j;
    double eta;
    double theta;
    double value;
};

/// (eta_i, theta_j) = (i pi / n_eta, 2 pi j / n_theta) in row-major order.
/// Cells are spread over `threads` workers. Throws InvalidParameter for a
/// grid smaller than 2x2.
std::vector<SweepCell> sweep(int n_eta, int n_theta, Observable obs, int threads);

/// BC_SPECTRA_THREADS when set to a positive integer, else the hardware count.
int sweep_threads();

struct VerifyOutcome {
    Json record;
    bool passed;
};

VerifyOutcome verify_record(const BcInput& in, const Unitary2& u, std::array<int, 2> grids, int k,
                            double rel_tol, int ode_steps);

} // namespace bcspec::cli
