#include <gtest/gtest.h>

#include <random>

#include "bcspec/eigensolver.hpp"
#include "bcspec/errors.hpp"
#include "bcspec/oracle_fd.hpp"
#include "bcspec/symmetry.hpp"
#include "support.hpp"

using namespace bcspec;
using bcspec::testing::random_unitary;

namespace {

const Unitary2 kDirichlet{-Mat2::identity()};
const Unitary2 kNeumann = Unitary2::identity();
const Unitary2 kPeriodic{Mat2::sigma_x()};

// plain second-difference stencil, ghosts filled by hand
std::vector<std::vector<Complex>> stencil(int n, Complex g00, Complex g01, Complex g10, Complex g11) {
    const double h = 1.0 / n;
    const double s = 1.0 / (h * h);
    std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        a[j][j] = 2.0 * s;
        if (j > 0) a[j][j - 1] = -s;
        if (j + 1 < n) a[j][j + 1] = -s;
    }
    // psi_{-1} = g00 psi_0 + g01 psi_{n-1}, psi_n = g10 psi_0 + g11 psi_{n-1}
    a[0][0] -= g00 * s;
    a[0][n - 1] -= g01 * s;
    a[n - 1][0] -= g10 * s;
    a[n - 1][n - 1] -= g11 * s;
    return a;
}

void expect_matrix(const FdProblem& p, const std::vector<std::vector<Complex>>& want) {
    const auto got = p.to_dense();
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        for (std::size_t j = 0; j < got.size(); ++j) {
            EXPECT_LT(std::abs(got[i][j] - want[i][j]), 1e-9 * std::abs(want[0][0]) + 1e-12) << i << "," << j;
        }
    }
}

} // namespace

TEST(Assemble, DirichletStencil) {
    const FdProblem p = assemble(kDirichlet, 20);
    EXPECT_EQ(p.n, 20);
    EXPECT_DOUBLE_EQ(p.h, 0.05);
    expect_matrix(p, stencil(20, -1.0, 0.0, 0.0, -1.0));
}

TEST(Assemble, NeumannStencil) {
    expect_matrix(assemble(kNeumann, 24), stencil(24, 1.0, 0.0, 0.0, 1.0));
}

TEST(Assemble, PeriodicStencil) {
    expect_matrix(assemble(kPeriodic, 32), stencil(32, 0.0, 1.0, 1.0, 0.0));
}

TEST(Assemble, GhostMapSolvesTheFaceCondition) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 20; ++i) {
        const Unitary2 u = random_unitary(rng);
        const FdProblem p = assemble(u, 50);
        const Mat2 I2 = Mat2::identity();
        const Mat2 lhs_coeff = (0.5 * p.h) * (I2 - u.matrix()) - Complex{0, 1} * (I2 + u.matrix());
        const Mat2 rhs_coeff = (-0.5 * p.h) * (I2 - u.matrix()) - Complex{0, 1} * (I2 + u.matrix());
        EXPECT_LT(bcspec::testing::max_entry_dev(lhs_coeff * p.ghost_map, rhs_coeff), 1e-12);
    }
}

TEST(Assemble, HermitianForRandomU) {
    std::mt19937_64 rng(62);
    for (int i = 0; i < 100; ++i) {
        EXPECT_LE(assemble(random_unitary(rng), 64).hermiticity_defect(), 1e-12);
    }
}

TEST(Assemble, RejectsSmallGrids) {
    EXPECT_THROW((void)assemble(kDirichlet, 15), InvalidParameter);
    EXPECT_NO_THROW((void)assemble(kDirichlet, 16));
}

TEST(OracleEigenvalues, Dirichlet) {
    const auto ev = oracle_eigenvalues(assemble(kDirichlet, 1000), 3);
    ASSERT_EQ(ev.size(), 3u);
    for (int k = 0; k < 3; ++k) {
        const double exact = (k + 1) * (k + 1) * kPi * kPi;
        EXPECT_LT(std::abs(ev[k] - exact) / exact, 1e-3);
    }
}

TEST(OracleEigenvalues, NeumannClosedFormOnTheGrid) {
    // discrete cosines: 4/h^2 sin^2(pi k h / 2)
    const int n = 200;
    const double h = 1.0 / n;
    const auto ev = oracle_eigenvalues(assemble(kNeumann, n), 6);
    for (int k = 0; k < 6; ++k) {
        const double s = std::sin(kPi * k * h / 2);
        EXPECT_NEAR(ev[k], 4 / (h * h) * s * s, 1e-7 * (1 + ev[k]));
    }
}

TEST(OracleEigenvalues, NeumannZeroAndPeriodicPair) {
    const auto nev = oracle_eigenvalues(assemble(kNeumann, 500), 2);
    EXPECT_LT(std::abs(nev[0]), 1e-6);
    EXPECT_LT(std::abs(nev[1] - kPi * kPi) / (kPi * kPi), 1e-3);

    const auto pev = oracle_eigenvalues(assemble(kPeriodic, 500), 3);
    EXPECT_LT(std::abs(pev[0]), 1e-6);
    const double four_pi2 = 4 * kPi * kPi;
    EXPECT_LT(std::abs(pev[1] - four_pi2) / four_pi2, 1e-3);
    EXPECT_LT(std::abs(pev[2] - four_pi2) / four_pi2, 1e-3);
    EXPECT_LT(std::abs(pev[1] - pev[2]), 1e-8 * four_pi2);
}

TEST(OracleEigenvalues, InvalidK) {
    const FdProblem p = assemble(kDirichlet, 16);
    EXPECT_THROW((void)oracle_eigenvalues(p, 17), InvalidParameter);
    EXPECT_EQ(oracle_eigenvalues(p, 16).size(), 16u);
}

TEST(CountBelow, MatchesEigenvalues) {
    std::mt19937_64 rng(63);
    for (int i = 0; i < 10; ++i) {
        const FdProblem p = assemble(random_unitary(rng), 100);
        const auto ev = oracle_eigenvalues(p, 8);
        for (int k = 0; k < 8; ++k) {
            const double gap_lo = k > 0 ? ev[k] - ev[k - 1] : 1.0;
            if (gap_lo < 1e-6) continue;
            EXPECT_EQ(count_below(p, ev[k] - 1e-7 * (1 + std::abs(ev[k]))), k);
        }
    }
    EXPECT_EQ(count_below(assemble(kDirichlet, 100), 0.0), 0);
}

TEST(CrossValidate, Dirichlet) {
    const OracleReport r = cross_validate(kDirichlet, {500, 1000}, 5);
    EXPECT_TRUE(r.passed);
    EXPECT_GE(r.order, kOrderMin);
    EXPECT_LE(r.order, kOrderMax);
    ASSERT_EQ(r.comparison.size(), 5u);
    for (const OracleComparison& c : r.comparison) {
        EXPECT_LT(c.rel_dev_fine, 1e-3);
        EXPECT_LT(c.abs_dev_fine, c.abs_dev_coarse);
    }
    EXPECT_EQ(r.negatives_solver, 0);
    EXPECT_EQ(r.negatives_fd, 0);
}

TEST(CrossValidate, ParitySymmetric) {
    const OracleReport r = cross_validate(parity_family(0.7, 2.4), {500, 1000}, 5);
    EXPECT_TRUE(r.passed);
}

TEST(CrossValidate, WithBoundStates) {
    std::mt19937_64 rng(64);
    int found = 0;
    for (int i = 0; i < 200 && found < 3; ++i) {
        const Unitary2 u = random_unitary(rng);
        const Spectrum s = solve_spectrum(u, ScanWindow::covering(u));
        const int neg = s.negative_count();
        if (neg == 0 || s.points.front().eps_hat < -200) continue;
        ++found;
        const OracleReport r = cross_validate(u, {500, 1000}, 5);
        EXPECT_TRUE(r.passed);
        EXPECT_EQ(r.negatives_solver, neg);
        EXPECT_EQ(r.negatives_fd, neg);
    }
    EXPECT_EQ(found, 3);
}

TEST(CrossValidate, BadGrids) {
    EXPECT_THROW((void)cross_validate(kDirichlet, {500, 900}, 5), InvalidParameter);
}

TEST(CrossValidate, FailureIsReportedNotThrown) {
    const OracleReport r = cross_validate(kDirichlet, {100, 200}, 5, 1e-12);
    EXPECT_FALSE(r.passed);
}

TEST(OdeCheck, BelowTolerance) {
    for (double e : {kPi * kPi, -4.0, 1e-6, 100.0, -100.0}) {
        EXPECT_LT(ode_check_boundary_matrices(DimlessEnergy{e}, 10000), 1e-8) << e;
    }
}

TEST(OdeCheck, Converges) {
    const DimlessEnergy e{30.0};
    const double coarse = ode_check_boundary_matrices(e, 100);
    const double fine = ode_check_boundary_matrices(e, 200);
    EXPECT_GT(coarse / fine, 12.0);
}

TEST(OdeCheck, InvalidArguments) {
    EXPECT_THROW((void)ode_check_boundary_matrices(DimlessEnergy{0.0}, 10000), InvalidParameter);
    EXPECT_THROW((void)ode_check_boundary_matrices(DimlessEnergy{1.0}, 99), InvalidParameter);
}
