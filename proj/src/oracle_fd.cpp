#include "bcspec/oracle_fd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "bcspec/eigensolver.hpp"
#include "bcspec/errors.hpp"

namespace bcspec {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kHalfBand = 2;

// The natural ordering couples j with j +- 1 and 0 with n-1. Interleaving the
// two ends, 0, n-1, 1, n-2, ..., turns that into a band of half-width 2.
int interleaved_to_natural(int i, int n) { return i % 2 == 0 ? i / 2 : n - 1 - i / 2; }

// Hermitian band matrix of half-width 2 in the interleaved ordering.
// Row i keeps columns i-2..i+2 at offsets 0..4.
struct Band {
    int n = 0;
    std::vector<std::array<Complex, 2 * kHalfBand + 1>> rows;
    double norm_inf = 0.0;

    Complex get(int i, int j) const {
        const int d = j - i;
        if (d < -kHalfBand || d > kHalfBand || j < 0 || j >= n) return {};
        return rows[i][d + kHalfBand];
    }
};

Band interleave(const FdProblem& p) {
    const int n = p.n;
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[interleaved_to_natural(i, n)] = i;
    Band b;
    b.n = n;
    b.rows.assign(n, {});
    const auto put = [&](int i, int j) {
        // Hermitian part; the assembled matrix is Hermitian up to rounding.
        const Complex v = 0.5 * (p.at(i, j) + std::conj(p.at(j, i)));
        b.rows[pos[i]][pos[j] - pos[i] + kHalfBand] = v;
    };
    for (int j = 0; j < n; ++j) {
        put(j, j);
        if (j + 1 < n) {
            put(j, j + 1);
            put(j + 1, j);
        }
    }
    put(0, n - 1);
    put(n - 1, 0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (const Complex& z : b.rows[i]) s += std::abs(z);
        b.norm_inf = std::max(b.norm_inf, s);
    }
    return b;
}

// Sylvester inertia: negative pivots of LDL^H of (A - sigma I).
int inertia_below(const Band& a, double sigma) {
    const int n = a.n;
    std::vector<std::array<Complex, 2 * kHalfBand + 1>> w = a.rows;
    const auto at = [&](int i, int j) -> Complex& { return w[i][j - i + kHalfBand]; };
    const double tiny = std::numeric_limits<double>::epsilon() * a.norm_inf;
    int negatives = 0;
    for (int k = 0; k < n; ++k) {
        at(k, k) -= sigma;
    }
    for (int k = 0; k < n; ++k) {
        double piv = at(k, k).real();
        if (std::abs(piv) < tiny) piv = tiny;
        if (piv < 0.0) ++negatives;
        const int last = std::min(n - 1, k + kHalfBand);
        for (int i = k + 1; i <= last; ++i) {
            const Complex l = at(i, k) / piv;
            for (int j = k + 1; j <= last; ++j) at(i, j) -= l * at(k, j);
        }
    }
    return negatives;
}

// LU with partial pivoting of a band matrix with kl = ku = 2; after row
// interchanges the upper band grows to 4. Row i stores columns i-2..i+4.
class BandLU {
public:
    BandLU(const Band& a, double shift) : n_(a.n), rows_(a.n), mult_(a.n), piv_(a.n) {
        for (int i = 0; i < n_; ++i) {
            rows_[i].fill({});
            for (int d = -kHalfBand; d <= kHalfBand; ++d) {
                const int j = i + d;
                if (j >= 0 && j < n_) at(i, j) = a.get(i, j);
            }
            at(i, i) -= shift;
        }
        const double tiny = std::numeric_limits<double>::epsilon() * a.norm_inf;
        for (int k = 0; k < n_; ++k) {
            const int last_row = std::min(n_ - 1, k + kHalfBand);
            int p = k;
            for (int i = k + 1; i <= last_row; ++i) {
                if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
            }
            piv_[k] = p;
            if (p != k) {
                for (int j = k; j <= std::min(n_ - 1, k + kUpper); ++j) std::swap(at(k, j), at(p, j));
            }
            if (std::abs(at(k, k)) < tiny) at(k, k) = tiny;
            for (int i = k + 1; i <= last_row; ++i) {
                const Complex l = at(i, k) / at(k, k);
                mult_[k][i - k - 1] = l;
                at(i, k) = 0.0;
                for (int j = k + 1; j <= std::min(n_ - 1, k + kUpper); ++j) at(i, j) -= l * at(k, j);
            }
        }
    }

    void solve(std::vector<Complex>& b) const {
        for (int k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            for (int i = k + 1; i <= std::min(n_ - 1, k + kHalfBand); ++i) b[i] -= mult_[k][i - k - 1] * b[k];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            Complex s = b[i];
            for (int j = i + 1; j <= std::min(n_ - 1, i + kUpper); ++j) s -= at(i, j) * b[j];
            b[i] = s / at(i, i);
        }
    }

private:
    static constexpr int kUpper = 2 * kHalfBand;
    static constexpr int kWidth = kHalfBand + kUpper + 1;

    Complex& at(int i, int j) { return rows_[i][j - i + kHalfBand]; }
    const Complex& at(int i, int j) const { return rows_[i][j - i + kHalfBand]; }

    int n_;
    std::vector<std::array<Complex, kWidth>> rows_;
    std::vector<std::array<Complex, kHalfBand>> mult_;
    std::vector<int> piv_;
};

double residual_norm(const Band& a, const std::vector<Complex>& v, double lambda) {
    double r2 = 0.0;
    for (int i = 0; i < a.n; ++i) {
        Complex s = -lambda * v[i];
        for (int d = -kHalfBand; d <= kHalfBand; ++d) {
            const int j = i + d;
            if (j >= 0 && j < a.n) s += a.get(i, j) * v[j];
        }
        r2 += std::norm(s);
    }
    return std::sqrt(r2);
}

void normalize(std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    s = std::sqrt(s);
    for (Complex& z : v) z /= s;
}

double max_abs_dev(const std::vector<OracleComparison>& c, bool fine) {
    double m = 0.0;
    for (const OracleComparison& x : c) m = std::max(m, fine ? x.abs_dev_fine : x.abs_dev_coarse);
    return m;
}

} // namespace

Complex FdProblem::at(int i, int j) const {
    Complex v{};
    if (i == j) v += diag[i];
    if (j == i + 1) v += upper[i];
    if (i == j + 1) v += lower[j];
    if (i == 0 && j == n - 1) v += corner_upper;
    if (i == n - 1 && j == 0) v += corner_lower;
    return v;
}

double FdProblem::hermiticity_defect() const {
    double worst = 0.0;
    double scale = 0.0;
    const auto visit = [&](int i, int j) {
        worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
        scale = std::max(scale, std::abs(at(i, j)));
    };
    for (int j = 0; j < n; ++j) {
        visit(j, j);
        if (j + 1 < n) visit(j, j + 1);
    }
    visit(0, n - 1);
    return scale > 0.0 ? worst / scale : worst;
}

std::vector<std::vector<Complex>> FdProblem::to_dense() const {
    std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) a[i][j] = at(i, j);
    }
    a[0][n - 1] = at(0, n - 1);
    a[n - 1][0] = at(n - 1, 0);
    return a;
}

FdProblem assemble(const Unitary2& u, int n) {
    if (n < 16) throw InvalidParameter("assemble: need at least 16 grid points");
    const double h = 1.0 / n;
    const Mat2& m = u.matrix();
    const Mat2 id = Mat2::identity();
    const Mat2 p = (0.5 * h) * (id - m) - kI * (id + m);
    const Mat2 q = (-0.5 * h) * (id - m) - kI * (id + m);
    const double pn = p.frobenius_norm();
    if (std::abs(p.det()) < 1e-12 * pn * pn) {
        std::ostringstream os;
        os << "assemble: ghost elimination is singular for this U at n = " << n;
        throw SolverDiagnostic(os.str());
    }
    const Mat2 g = p.inverse() * q;

    FdProblem out;
    out.n = n;
    out.h = h;
    out.u = u;
    out.ghost_map = g;
    const double inv_h2 = 1.0 / (h * h);
    out.diag.assign(n, 2.0 * inv_h2);
    out.upper.assign(n - 1, -inv_h2);
    out.lower.assign(n - 1, -inv_h2);
    out.diag[0] -= g.e11 * inv_h2;
    out.diag[n - 1] -= g.e22 * inv_h2;
    out.corner_upper = -g.e12 * inv_h2;
    out.corner_lower = -g.e21 * inv_h2;
    return out;
}

int count_below(const FdProblem& p, double sigma) { return inertia_below(interleave(p), sigma); }

std::vector<double> oracle_eigenvalues(const FdProblem& p, int k) {
    if (k < 0 || k > p.n) throw InvalidParameter("oracle_eigenvalues: k must lie in [0, n]");
    const Band band = interleave(p);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < band.n; ++i) {
        double off = 0.0;
        for (int d = -kHalfBand; d <= kHalfBand; ++d) {
            if (d != 0) off += std::abs(band.get(i, i + d));
        }
        const double c = band.get(i, i).real();
        lo = std::min(lo, c - off);
        hi = std::max(hi, c + off);
    }

    const double floor_tol = 4.0 * std::numeric_limits<double>::epsilon() * band.norm_inf;
    std::vector<double> out;
    out.reserve(k);
    for (int idx = 0; idx < k; ++idx) {
        double a = out.empty() ? lo : std::max(lo, out.back() - floor_tol);
        double b = hi;
        for (int it = 0; it < 200 && b - a > floor_tol; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            if (inertia_below(band, mid) > idx) {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push_back(0.5 * (a + b));
    }

    // Certify every pair by inverse iteration.
    for (double lambda : out) {
        const BandLU lu(band, lambda);
        std::vector<Complex> v(band.n);
        for (int i = 0; i < band.n; ++i) v[i] = Complex{std::sin(0.7 * i + 0.3), std::cos(1.3 * i)};
        normalize(v);
        for (int it = 0; it < 3; ++it) {
            lu.solve(v);
            normalize(v);
        }
        const double r = residual_norm(band, v, lambda);
        if (r > 1e-8 * band.norm_inf) {
            std::ostringstream os;
            os << "oracle eigenpair at " << lambda << " has residual " << r << " > 1e-8 ||A|| = "
               << 1e-8 * band.norm_inf;
            throw SolverDiagnostic(os.str());
        }
    }
    return out;
}

OracleReport cross_validate(const Unitary2& u, std::array<int, 2> grids, int k, double rel_tol) {
    if (grids[1] < 2 * grids[0]) {
        throw InvalidParameter("cross_validate: the fine grid must be at least twice the coarse one");
    }
    OracleReport rep;
    rep.grids = grids;
    rep.k = k;
    rep.rel_tol = rel_tol;

    const Spectrum spec = solve_spectrum(u, ScanWindow::covering(u));
    const std::vector<double> levels = spec.levels();
    rep.eigenvalues_coarse = oracle_eigenvalues(assemble(u, grids[0]), k);
    const FdProblem fine = assemble(u, grids[1]);
    rep.eigenvalues_fine = oracle_eigenvalues(fine, k);

    if (static_cast<int>(levels.size()) < k) {
        rep.notes.push_back("solver returned " + std::to_string(levels.size()) +
                            " levels, fewer than the " + std::to_string(k) + " compared");
        return rep;
    }

    bool ok = true;
    for (int i = 0; i < k; ++i) {
        OracleComparison c{};
        c.solver = levels[i];
        c.coarse = rep.eigenvalues_coarse[i];
        c.fine = rep.eigenvalues_fine[i];
        c.abs_dev_coarse = std::abs(c.coarse - c.solver);
        c.abs_dev_fine = std::abs(c.fine - c.solver);
        c.rel_dev_fine = c.abs_dev_fine / std::max(1.0, std::abs(c.solver));
        if (!(c.rel_dev_fine <= rel_tol)) {
            ok = false;
            std::ostringstream os;
            os << "level " << i << ": relative deviation " << c.rel_dev_fine << " exceeds " << rel_tol;
            rep.notes.push_back(os.str());
        }
        rep.comparison.push_back(c);
    }

    for (const SpectralPoint& pt : spec.points) {
        if (pt.multiplicity == 2 && pt.eps_hat <= levels[k - 1]) {
            std::ostringstream os;
            os.precision(10);
            os << "multiplicity pair at eps_hat = " << pt.eps_hat;
            rep.notes.push_back(os.str());
        }
    }

    constexpr double kNegativeFloor = 1e-6;
    rep.negatives_fd = count_below(fine, -kNegativeFloor);
    rep.negatives_solver = 0;
    for (double l : levels) {
        if (l < -kNegativeFloor) ++rep.negatives_solver;
    }
    if (rep.negatives_fd != rep.negatives_solver) {
        ok = false;
        rep.notes.push_back("negative eigenvalue counts differ: solver " +
                            std::to_string(rep.negatives_solver) + ", finite differences " +
                            std::to_string(rep.negatives_fd));
    }

    const double dev_c = max_abs_dev(rep.comparison, false);
    const double dev_f = max_abs_dev(rep.comparison, true);
    rep.order = std::log(dev_c / dev_f) / std::log(static_cast<double>(grids[1]) / grids[0]);
    if (!(rep.order >= kOrderMin && rep.order <= kOrderMax)) {
        ok = false;
        std::ostringstream os;
        os << "convergence order " << rep.order << " outside [" << kOrderMin << ", " << kOrderMax << "]";
        rep.notes.push_back(os.str());
    }
    rep.passed = ok;
    return rep;
}

double ode_check_boundary_matrices(DimlessEnergy e, int steps) {
    if (e.value == 0.0) throw InvalidParameter("ode_check_boundary_matrices: eps must be nonzero");
    if (steps < 100) throw InvalidParameter("ode_check_boundary_matrices: need at least 100 steps");
    const Complex k = wave_number(e).x;
    const double h = 1.0 / steps;

    // state (psi, psi'), psi'' = -eps psi
    struct State {
        Complex y, dy;
    };
    const auto rhs = [&](const State& s) { return State{s.dy, -e.value * s.y}; };
    const auto step_rk4 = [&](State s, double dt) {
        const State k1 = rhs(s);
        const State k2 = rhs({s.y + 0.5 * dt * k1.y, s.dy + 0.5 * dt * k1.dy});
        const State k3 = rhs({s.y + 0.5 * dt * k2.y, s.dy + 0.5 * dt * k2.dy});
        const State k4 = rhs({s.y + dt * k3.y, s.dy + dt * k3.dy});
        s.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.dy += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
        return s;
    };
    // Only the starting value is exact. Each solution starts from the end
    // where it is smaller, so on the negative branch the growing companion
    // never amplifies the truncation error.
    const auto exact = [&](Complex q, double s) {
        return State{std::exp(kI * q * s), kI * q * std::exp(kI * q * s)};
    };
    const auto endpoints = [&](Complex q) {
        const State a = exact(q, -0.5);
        const State b = exact(q, 0.5);
        const bool forward = std::abs(a.y) <= std::abs(b.y);
        State s = forward ? a : b;
        for (int i = 0; i < steps; ++i) s = step_rk4(s, forward ? h : -h);
        return forward ? std::pair<State, State>{a, s} : std::pair<State, State>{s, b};
    };

    // e^{iks} and e^{-iks}
    const auto [left1, right1] = endpoints(k);
    const auto [left2, right2] = endpoints(-k);

    const auto build = [&](double sign) {
        // row 1: psi(-1/2) -+ i psi'(-1/2); row 2: psi(1/2) +- i psi'(1/2)
        return Mat2{left1.y - sign * kI * left1.dy, left2.y - sign * kI * left2.dy,
                    right1.y + sign * kI * right1.dy, right2.y + sign * kI * right2.dy};
    };
    const BoundaryMatrices closed = boundary_matrices(e);
    const Mat2 dp = build(1.0) - closed.a_plus;
    const Mat2 dm = build(-1.0) - closed.a_minus;
    double worst = 0.0;
    for (const Complex& z : {dp.e11, dp.e12, dp.e21, dp.e22, dm.e11, dm.e12, dm.e21, dm.e22}) {
        worst = std::max(worst, std::abs(z));
    }
    return worst;
}

} // namespace bcspec
