#include <gtest/gtest.h>

#include <random>

#include "bcspec/eigensolver.hpp"
#include "bcspec/errors.hpp"
#include "bcspec/symmetry.hpp"
#include "support.hpp"

using namespace bcspec;
using bcspec::testing::random_unitary;

namespace {

constexpr Complex I{0.0, 1.0};

const Unitary2 kNeumann = Unitary2::identity();
const Unitary2 kDirichlet{-Mat2::identity()};
const Unitary2 kPeriodic{Mat2::sigma_x()};
const Unitary2 kAntiperiodic{-Mat2::sigma_x()};

std::vector<SpectralPoint> positive(const Spectrum& s) {
    std::vector<SpectralPoint> out;
    for (const SpectralPoint& p : s.points) {
        if (p.branch == Branch::positive) out.push_back(p);
    }
    return out;
}

// |(I - U) Psi - i (I + U) Psi'| with Psi' the outward derivatives.
double bc_residual(const Unitary2& u, const Eigenfunction& f) {
    const Complex v0 = f.value(-0.5), v1 = f.value(0.5);
    const Complex d0 = -f.derivative(-0.5), d1 = f.derivative(0.5);
    const Mat2 a = Mat2::identity() - u.matrix();
    const Mat2 b = Mat2::identity() + u.matrix();
    const Complex r0 = a.e11 * v0 + a.e12 * v1 - I * (b.e11 * d0 + b.e12 * d1);
    const Complex r1 = a.e21 * v0 + a.e22 * v1 - I * (b.e21 * d0 + b.e22 * d1);
    const double scale = std::abs(v0) + std::abs(v1) + std::abs(d0) + std::abs(d1);
    return std::hypot(std::abs(r0), std::abs(r1)) / scale;
}

// Composite Simpson for <f, g> on [-1/2, 1/2].
Complex overlap(const Eigenfunction& f, const Eigenfunction& g, int n = 4000) {
    const double h = 1.0 / n;
    Complex s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -0.5 + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::conj(f.value(x)) * g.value(x);
    }
    return s * h / 3.0;
}

} // namespace

TEST(SolveSpectrum, DirichletFixture) {
    const Spectrum s = solve_spectrum(kDirichlet);
    EXPECT_FALSE(s.zero_mode);
    EXPECT_EQ(s.negative_count(), 0);
    const auto pos = positive(s);
    ASSERT_GE(pos.size(), 50u);
    for (int n = 1; n <= 50; ++n) {
        EXPECT_NEAR(pos[n - 1].x, n * kPi, 1e-10);
        EXPECT_EQ(pos[n - 1].multiplicity, 1);
    }
}

TEST(SolveSpectrum, NeumannFixture) {
    const Spectrum s = solve_spectrum(kNeumann);
    ASSERT_TRUE(s.zero_mode);
    EXPECT_EQ(s.points.front().branch, Branch::zero);
    EXPECT_EQ(s.points.front().multiplicity, 1);
    const auto pos = positive(s);
    ASSERT_GE(pos.size(), 50u);
    for (int n = 1; n <= 50; ++n) {
        EXPECT_NEAR(pos[n - 1].x, n * kPi, 1e-10);
        EXPECT_EQ(pos[n - 1].multiplicity, 1);
    }
}

TEST(SolveSpectrum, PeriodicFixture) {
    const Spectrum s = solve_spectrum(kPeriodic);
    ASSERT_TRUE(s.zero_mode);
    const auto pos = positive(s);
    ASSERT_EQ(pos.size(), 25u);
    for (int n = 1; n <= 25; ++n) {
        EXPECT_NEAR(pos[n - 1].x, 2 * n * kPi, 1e-10);
        EXPECT_EQ(pos[n - 1].multiplicity, 2);
    }
}

TEST(SolveSpectrum, AntiperiodicFixture) {
    const Spectrum s = solve_spectrum(kAntiperiodic);
    EXPECT_FALSE(s.zero_mode);
    const auto pos = positive(s);
    ASSERT_EQ(pos.size(), 25u);
    for (int n = 0; n < 25; ++n) {
        EXPECT_NEAR(pos[n].x, (2 * n + 1) * kPi, 1e-10);
        EXPECT_EQ(pos[n].multiplicity, 2);
    }
}

TEST(SolveSpectrum, RejectsBadWindowAndStep) {
    EXPECT_THROW((void)solve_spectrum(kDirichlet, ScanWindow{0.0, 60.0}), InvalidParameter);
    EXPECT_THROW((void)solve_spectrum(kDirichlet, ScanWindow{10.0, -1.0}), InvalidParameter);
    SolverTolerances t;
    t.grid_step = 0.0;
    EXPECT_THROW((void)solve_spectrum(kDirichlet, ScanWindow{}, t), InvalidParameter);
}

TEST(SolveSpectrum, DeepBoundStatesBeyondTheCutoffAreReported) {
    // scalar U close to -I: a tunnelling pair near kappa = 40.7
    const Unitary2 u = parity_family(kPi / 64, kPi);
    EXPECT_THROW((void)solve_spectrum(u, ScanWindow{10 * kPi, 20.0}), SolverDiagnostic);
    const ScanWindow w = ScanWindow::covering(u, ScanWindow{10 * kPi, 20.0});
    EXPECT_GT(w.kappa_max, 40.8);
    const Spectrum s = solve_spectrum(u, w);
    ASSERT_EQ(s.negative_count(), 2);
    EXPECT_EQ(s.points[0].multiplicity, 1);
    EXPECT_EQ(s.points[1].multiplicity, 1);
    EXPECT_NEAR(s.points[0].x, 40.735, 1e-3);
    EXPECT_LT(s.points[0].eps_hat, s.points[1].eps_hat);
}

TEST(SolveSpectrum, ZeroModeWithMultiplicityTwo) {
    const ZeroModeCurves c = zero_mode_curves();
    const Unitary2 u = parity_family(-c.eta0, c.eta0);
    EXPECT_LT(distance(u.matrix(), b_matrix(DimlessEnergy{0.0})), 1e-15);
    const Spectrum s = solve_spectrum(u);
    ASSERT_TRUE(s.zero_mode);
    EXPECT_EQ(s.points.front().branch, Branch::zero);
    EXPECT_EQ(s.points.front().multiplicity, 2);
    EXPECT_EQ(s.negative_count(), 0);
}

TEST(ScanBrackets, Dirichlet) {
    const auto br = scan_brackets(kDirichlet, ScanWindow{10.0, 60.0});
    ASSERT_EQ(br.size(), 3u);
    for (int n = 1; n <= 3; ++n) {
        EXPECT_EQ(br[n - 1].branch, Branch::positive);
        EXPECT_EQ(br[n - 1].kind, Bracket::Kind::sign_change);
        EXPECT_LE(br[n - 1].lo, n * kPi);
        EXPECT_GE(br[n - 1].hi, n * kPi);
    }
}

TEST(ScanBrackets, PeriodicHasOnlyATangentialCandidate) {
    const auto br = scan_brackets(kPeriodic, ScanWindow{7.0, 60.0});
    ASSERT_EQ(br.size(), 1u);
    EXPECT_EQ(br[0].kind, Bracket::Kind::tangential);
    EXPECT_NEAR(br[0].lo, 2 * kPi, 1e-6);
}

TEST(ScanBrackets, NeumannNegativeBranchIsEmpty) {
    for (const Bracket& b : scan_brackets(kNeumann, ScanWindow{5.0, 60.0})) {
        EXPECT_NE(b.branch, Branch::negative);
    }
}

TEST(RefineRoot, SimpleAndDoubleRoots) {
    const auto d = refine_root(kDirichlet, Bracket{Branch::positive, 3.0, 3.3, Bracket::Kind::sign_change});
    ASSERT_TRUE(d.has_value());
    EXPECT_NEAR(d->x, 3.14159265358979, 1e-12);

    const auto br = scan_brackets(kPeriodic, ScanWindow{7.0, 60.0});
    const auto p = refine_root(kPeriodic, br.at(0));
    ASSERT_TRUE(p.has_value());
    EXPECT_NEAR(p->x, 6.28318530717959, 1e-9);
    EXPECT_EQ(p->multiplicity, 2);
}

TEST(RefineRoot, ShallowMinimumIsDiscarded) {
    std::vector<std::string> notes;
    const auto r = refine_root(kPeriodic, Bracket{Branch::positive, 6.3, 6.3, Bracket::Kind::tangential}, {}, &notes);
    EXPECT_FALSE(r.has_value());
    ASSERT_EQ(notes.size(), 1u);
    EXPECT_NE(notes[0].find("rejected"), std::string::npos);
}

TEST(MultiplicityOf, Presets) {
    EXPECT_EQ(multiplicity_of(kPeriodic, SpectralPoint::on_branch(Branch::positive, 2 * kPi)), 2);
    EXPECT_EQ(multiplicity_of(kDirichlet, SpectralPoint::on_branch(Branch::positive, kPi)), 1);
    EXPECT_EQ(multiplicity_of(kNeumann, SpectralPoint::on_branch(Branch::positive, kPi)), 1);
}

TEST(Eigenfunction, DirichletGroundState) {
    const auto f = eigenfunction_at(kDirichlet, SpectralPoint::on_branch(Branch::positive, kPi));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_LT(std::abs(f[0].value(-0.5)), 1e-10);
    EXPECT_LT(std::abs(f[0].value(0.5)), 1e-10);
    // proportional to cos(pi s)
    const Complex ratio = f[0].value(0.2) / std::cos(kPi * 0.2);
    EXPECT_LT(std::abs(f[0].value(0.0) - ratio), 1e-12);
    EXPECT_NEAR(f[0].norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(overlap(f[0], f[0])), 1.0, 1e-9);
}

TEST(Eigenfunction, PeriodicPairIsOrthonormal) {
    const auto f = eigenfunction_at(kPeriodic, SpectralPoint::on_branch(Branch::positive, 2 * kPi, 2));
    ASSERT_EQ(f.size(), 2u);
    EXPECT_NEAR(std::abs(overlap(f[0], f[0])), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(overlap(f[1], f[1])), 1.0, 1e-9);
    EXPECT_LT(std::abs(overlap(f[0], f[1])), 1e-9);
    EXPECT_LT(bc_residual(kPeriodic, f[0]), 1e-12);
    EXPECT_LT(bc_residual(kPeriodic, f[1]), 1e-12);
}

TEST(Eigenfunction, NeumannZeroModeIsConstant) {
    const auto f = eigenfunction_at(kNeumann, SpectralPoint::on_branch(Branch::zero, 0.0));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].basis(), SolutionBasis::affine);
    EXPECT_LT(std::abs(f[0].c2), 1e-15);
    EXPECT_NEAR(std::abs(f[0].value(0.3)), 1.0, 1e-15);
}

TEST(Eigenfunction, InconsistentPointThrows) {
    EXPECT_THROW((void)eigenfunction_at(kDirichlet, SpectralPoint::on_branch(Branch::positive, 2.0)), InconsistentRoot);
}

TEST(Eigenfunction, RandomSpectraSatisfyTheBoundaryCondition) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
        const Unitary2 u = random_unitary(rng);
        const Spectrum s = solve_spectrum(u, ScanWindow::covering(u, ScanWindow{8 * kPi, 60.0}));
        for (const SpectralPoint& p : s.points) {
            const auto fs = eigenfunction_at(u, p);
            ASSERT_EQ(static_cast<int>(fs.size()), p.multiplicity);
            for (const Eigenfunction& f : fs) {
                EXPECT_LT(bc_residual(u, f), 1e-8) << to_string(p.branch) << " " << p.x;
                EXPECT_NEAR(f.norm_squared(), 1.0, 1e-10);
                if (p.x < 20.0) EXPECT_NEAR(std::abs(overlap(f, f)), 1.0, 1e-7);
            }
        }
    }
}

TEST(SolveSpectrum, RandomSpectraRespectTheStructuralBounds) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 200; ++i) {
        const Unitary2 u = random_unitary(rng);
        const Spectrum s = solve_spectrum(u, ScanWindow::covering(u));
        EXPECT_LE(s.negative_count(), 2);
        EXPECT_LE(counting_deviation(s), 2);
        for (std::size_t k = 1; k < s.points.size(); ++k) {
            EXPECT_LT(s.points[k - 1].eps_hat, s.points[k].eps_hat);
        }
        for (const SpectralPoint& p : s.points) {
            const double f = std::abs(spectral_function(u, DimlessEnergy{p.eps_hat}));
            EXPECT_LT(f, 1e-8 * (1.0 + std::abs(p.eps_hat)));
        }
    }
}

TEST(SolveSpectrum, HalvedGridGivesTheSameSpectrum) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
        const Unitary2 u = random_unitary(rng);
        const ScanWindow w = ScanWindow::covering(u, ScanWindow{20 * kPi, 60.0});
        SolverTolerances fine;
        fine.grid_step /= 4.0;
        const Spectrum a = solve_spectrum(u, w);
        const Spectrum b = solve_spectrum(u, w, fine);
        ASSERT_EQ(a.points.size(), b.points.size());
        for (std::size_t k = 0; k < a.points.size(); ++k) {
            EXPECT_NEAR(a.points[k].x, b.points[k].x, 1e-10);
        }
    }
}
