#include "bcspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bcspec/errors.hpp"

namespace bcspec {

namespace {

constexpr double kNoExtremum = std::numeric_limits<double>::quiet_NaN();

// Brent's method on a bracket with f(a) f(b) <= 0. Returns NaN when the
// iteration cap is hit.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, double xtol, int max_iter) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double c = b, fc = fb, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, or secant when a == c
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double local_scale(double t) { return 4.0 * (1.0 + t * t); }

double branch_eps(Branch b, double t) {
    switch (b) {
    case Branch::positive: return t * t;
    case Branch::negative: return -t * t;
    case Branch::zero: return 0.0;
    }
    return 0.0;
}

std::string describe(const Bracket& br) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(br.branch) << " branch bracket [" << br.lo << ", " << br.hi << "]";
    return os.str();
}

struct Sample {
    double t;
    double f;
    double df;
};

void scan_branch(const BoundaryParams& p, Branch branch, double t_end, const SolverTolerances& tol,
                 double step, std::vector<Bracket>& out) {
    const double t0 = tol.zero_exclusion;
    if (t_end <= t0) return;
    const auto eval = [&](double t) {
        const SecularSample s = secular_on_branch(p, branch, t);
        return Sample{t, s.value, s.slope};
    };
    const auto n = static_cast<std::size_t>(std::ceil((t_end - t0) / step));
    std::vector<Sample> grid;
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(eval(t0 + static_cast<double>(i) * step));

    // A sample that lands exactly on a simple root.
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (grid[i].f == 0.0 && grid[i - 1].f * grid[i + 1].f < 0.0) {
            out.push_back({branch, grid[i].t, grid[i].t, Bracket::Kind::sign_change});
        }
    }

    const auto slope = [&](double t) { return secular_on_branch(p, branch, t).slope; };
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const Sample& a = grid[i];
        const Sample& b = grid[i + 1];
        const bool extremum = a.df * b.df <= 0.0 && !(a.df == 0.0 && b.df == 0.0);
        if (!extremum) {
            if (a.f * b.f < 0.0) out.push_back({branch, a.t, b.t, Bracket::Kind::sign_change});
            continue;
        }
        double t_star = kNoExtremum;
        if (a.df == 0.0) {
            t_star = a.t;
        } else if (b.df == 0.0) {
            t_star = b.t;
        } else {
            t_star = brent_root(slope, a.t, b.t, a.df, b.df, tol.root_dx, tol.max_iterations);
        }
        if (std::isnan(t_star)) {
            // The extremum could not be pinned down; fall back to the plain
            // sign test on the whole cell.
            if (a.f * b.f < 0.0) out.push_back({branch, a.t, b.t, Bracket::Kind::sign_change});
            continue;
        }
        // secular is monotone on each side of the extremum
        const double f_star = eval(t_star).f;
        const bool left = a.f * f_star < 0.0;
        const bool right = f_star * b.f < 0.0;
        if (left) out.push_back({branch, a.t, t_star, Bracket::Kind::sign_change});
        if (right) out.push_back({branch, t_star, b.t, Bracket::Kind::sign_change});
        // an extremum in the first cell is the zero mode seen from outside the
        // excluded disc, not a double root
        if (!left && !right && i > 0 && std::abs(f_star) <= tol.tangent * local_scale(t_star)) {
            out.push_back({branch, t_star, t_star, Bracket::Kind::tangential});
        }
    }
}

// Large-kappa form of the rescaled negative-branch secular function:
// (cos eta - m0) - 2 sin eta kappa - (cos eta + m0) kappa^2.
double largest_asymptotic_root(const BoundaryParams& p) {
    const double a = std::cos(p.eta) - p.m0;
    const double b = -2.0 * std::sin(p.eta);
    const double c = -(std::cos(p.eta) + p.m0);
    double best = -std::numeric_limits<double>::infinity();
    // a leading coefficient at rounding level is an exact cancellation
    if (std::abs(c) <= 64.0 * std::numeric_limits<double>::epsilon()) {
        if (b != 0.0) best = -a / b;
        return best;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return best;
    const double sq = std::sqrt(disc);
    // numerically stable pair
    const double q = -0.5 * (b + std::copysign(sq, b));
    if (q == 0.0) return 0.0;
    return std::max(q / c, a / q);
}

void check_negative_tail(const BoundaryParams& p, const ScanWindow& w, const SolverTolerances& tol) {
    const double r = largest_asymptotic_root(p);
    if (r >= w.kappa_max) {
        std::ostringstream os;
        os << "negative branch is not sign-definite past kappa_max = " << w.kappa_max
           << ": asymptotic root near kappa = " << r << "; enlarge the window";
        throw SolverDiagnostic(os.str());
    }
    // Below kappa ~ 20 the asymptotic form is not yet accurate; probe directly.
    constexpr double kAsymptoticFrom = 20.0;
    if (w.kappa_max < kAsymptoticFrom) {
        double prev = secular_on_branch(p, Branch::negative, w.kappa_max).value;
        for (double t = w.kappa_max + tol.grid_step; t <= kAsymptoticFrom + tol.grid_step;
             t += tol.grid_step) {
            const double cur = secular_on_branch(p, Branch::negative, t).value;
            if (prev * cur <= 0.0) {
                std::ostringstream os;
                os << "negative branch changes sign near kappa = " << t << " beyond kappa_max = "
                   << w.kappa_max << "; enlarge the window";
                throw SolverDiagnostic(os.str());
            }
            prev = cur;
        }
    }
}

struct Candidate {
    SpectralPoint point;
    bool tangential;
    int pieces = 1;
};

std::vector<SpectralPoint> collect_roots(const Unitary2& u, const BoundaryParams& p,
                                         const ScanWindow& w, const SolverTolerances& tol,
                                         double step, std::vector<std::string>& discarded) {
    SolverTolerances local = tol;
    local.grid_step = step;
    std::vector<Bracket> brackets;
    scan_branch(p, Branch::negative, w.kappa_max + 2.0 * step, local, step, brackets);
    scan_branch(p, Branch::positive, w.x_max_pos + 2.0 * step, local, step, brackets);

    std::vector<Candidate> found;
    for (const Bracket& br : brackets) {
        if (auto pt = refine_root(u, br, local, &discarded)) {
            found.push_back({*pt, br.kind == Bracket::Kind::tangential, 1});
        }
    }
    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        return a.point.eps_hat < b.point.eps_hat;
    });

    // Noise near a double root can split it into nearby sign changes; merge.
    std::vector<Candidate> merged;
    for (const Candidate& c : found) {
        if (!merged.empty() && merged.back().point.branch == c.point.branch &&
            std::abs(merged.back().point.x - c.point.x) < 1e-7 * (1.0 + c.point.x)) {
            const int pieces = merged.back().pieces + 1;
            if (c.tangential && !merged.back().tangential) merged.back() = c;
            merged.back().pieces = pieces;
            continue;
        }
        merged.push_back(c);
    }

    std::vector<SpectralPoint> roots;
    for (Candidate& c : merged) {
        const double limit = c.point.branch == Branch::positive ? w.x_max_pos : w.kappa_max;
        if (c.point.x > limit + 1e-9) continue;
        // An isolated sign change is a simple root even where B(eps) creeps
        // within tolerance of U, as it does for tunnelling pairs deep on the
        // negative branch.
        c.point.multiplicity =
            c.tangential || c.pieces > 1 ? multiplicity_of(u, c.point, tol.multiplicity) : 1;
        roots.push_back(c.point);
    }
    return roots;
}

} // namespace

ScanWindow ScanWindow::covering(const Unitary2& u) { return covering(u, ScanWindow{}); }

ScanWindow ScanWindow::covering(const Unitary2& u, const ScanWindow& base) {
    ScanWindow w = base;
    const double r = largest_asymptotic_root(to_params(u));
    if (std::isfinite(r) && r > 0.0) w.kappa_max = std::max(w.kappa_max, 1.25 * r + 5.0);
    return w;
}

SpectralPoint SpectralPoint::on_branch(Branch b, double t, int multiplicity) {
    return {b == Branch::zero ? 0.0 : t, b, branch_eps(b, t), multiplicity};
}

std::vector<double> Spectrum::levels() const {
    std::vector<double> out;
    for (const SpectralPoint& p : points) {
        for (int k = 0; k < p.multiplicity; ++k) out.push_back(p.eps_hat);
    }
    return out;
}

int Spectrum::negative_count() const {
    int n = 0;
    for (const SpectralPoint& p : points) {
        if (p.branch == Branch::negative) n += p.multiplicity;
    }
    return n;
}

std::vector<Bracket> scan_brackets(const Unitary2& u, const ScanWindow& window,
                                   const SolverTolerances& tol) {
    if (!(tol.grid_step > 0.0)) throw InvalidParameter("scan_brackets: grid_step must be positive");
    const BoundaryParams p = to_params(u);
    std::vector<Bracket> out;
    scan_branch(p, Branch::negative, window.kappa_max, tol, tol.grid_step, out);
    scan_branch(p, Branch::positive, window.x_max_pos, tol, tol.grid_step, out);
    return out;
}

std::optional<SpectralPoint> refine_root(const Unitary2& u, const Bracket& br,
                                         const SolverTolerances& tol,
                                         std::vector<std::string>* discarded) {
    const BoundaryParams p = to_params(u);
    if (br.kind == Bracket::Kind::tangential) {
        SpectralPoint pt = SpectralPoint::on_branch(br.branch, br.lo, 2);
        const double dist = distance(b_matrix(DimlessEnergy{pt.eps_hat}), u.matrix());
        const double resid = std::abs(spectral_function(p, DimlessEnergy{pt.eps_hat}));
        if (dist < tol.multiplicity && resid < tol.root_residual * (1.0 + std::abs(pt.eps_hat))) {
            return pt;
        }
        if (discarded) {
            std::ostringstream os;
            os.precision(17);
            os << "tangential candidate at " << to_string(br.branch) << " t = " << br.lo
               << " rejected: ||B - U||_F = " << dist << ", |F_U| = " << resid;
            discarded->push_back(os.str());
        }
        return std::nullopt;
    }

    double t = br.lo;
    if (br.hi != br.lo) {
        const auto f = [&](double s) { return secular_on_branch(p, br.branch, s).value; };
        t = brent_root(f, br.lo, br.hi, f(br.lo), f(br.hi), tol.root_dx, tol.max_iterations);
        if (std::isnan(t)) {
            throw SolverDiagnostic("root refinement did not converge on " + describe(br));
        }
    }
    SpectralPoint pt = SpectralPoint::on_branch(br.branch, t, 1);
    const double resid = std::abs(spectral_function(p, DimlessEnergy{pt.eps_hat}));
    if (!(resid < tol.root_residual * (1.0 + std::abs(pt.eps_hat)))) {
        std::ostringstream os;
        os << "root on " << describe(br) << " has residual |F_U| = " << resid;
        throw SolverDiagnostic(os.str());
    }
    return pt;
}

int multiplicity_of(const Unitary2& u, const SpectralPoint& p, double tol) {
    return distance(b_matrix(DimlessEnergy{p.eps_hat}), u.matrix()) < tol ? 2 : 1;
}

int counting_deviation(const Spectrum& s) {
    const std::vector<double> levels = s.levels();
    const double top = s.window.x_max_pos * s.window.x_max_pos;
    std::vector<double> dirichlet;
    for (int n = 1; n * kPi <= s.window.x_max_pos; ++n) dirichlet.push_back(n * kPi * n * kPi);

    std::vector<double> events = levels;
    events.insert(events.end(), dirichlet.begin(), dirichlet.end());
    // probe just below and just above every level so rounding in coincident
    // levels cannot register as a deviation
    const auto count = [](const std::vector<double>& v, double lam) {
        return static_cast<int>(std::upper_bound(v.begin(), v.end(), lam) - v.begin());
    };
    int worst = 0;
    for (double lam : events) {
        if (lam > top) continue;
        const double d = 1e-9 * (1.0 + std::abs(lam));
        for (double probe : {lam - d, lam + d}) {
            worst = std::max(worst, std::abs(count(levels, probe) - count(dirichlet, probe)));
        }
    }
    return worst;
}

Spectrum solve_spectrum(const Unitary2& u, const ScanWindow& window, const SolverTolerances& tol) {
    if (!(window.x_max_pos > 0.0) || !(window.kappa_max > 0.0)) {
        throw InvalidParameter("solve_spectrum: window bounds must be positive");
    }
    if (!(tol.grid_step > 0.0)) throw InvalidParameter("solve_spectrum: grid_step must be positive");

    const BoundaryParams p = to_params(u);
    constexpr double kMaxSamples = 2e7;
    if ((window.x_max_pos + window.kappa_max) / tol.grid_step > kMaxSamples) {
        std::ostringstream os;
        os << "scan window (x_max = " << window.x_max_pos << ", kappa_max = " << window.kappa_max
           << ") needs more than " << kMaxSamples << " grid samples";
        throw SolverDiagnostic(os.str());
    }
    check_negative_tail(p, window, tol);

    Spectrum out;
    out.window = window;
    out.tolerances = tol;
    double step = tol.grid_step;
    for (int attempt = 0; attempt < 2; ++attempt) {
        out.points.clear();
        out.diagnostics.discarded.clear();
        std::vector<SpectralPoint> roots = collect_roots(u, p, window, tol, step, out.diagnostics.discarded);

        out.zero_mode = std::abs(zero_mode_residual(p)) < tol.zero_mode;
        for (const SpectralPoint& r : roots) {
            if (r.branch == Branch::negative) out.points.push_back(r);
        }
        if (out.zero_mode) {
            SpectralPoint z = SpectralPoint::on_branch(Branch::zero, 0.0);
            z.multiplicity = multiplicity_of(u, z, tol.multiplicity);
            out.points.push_back(z);
        }
        for (const SpectralPoint& r : roots) {
            if (r.branch == Branch::positive) out.points.push_back(r);
        }
        out.diagnostics.grid_step_used = step;
        out.diagnostics.rescans = attempt;
        out.diagnostics.counting_deviation = counting_deviation(out);
        if (out.diagnostics.counting_deviation <= 2) return out;
        step *= 0.5;
    }
    std::ostringstream os;
    os << "counting function deviates from Dirichlet by " << out.diagnostics.counting_deviation
       << " after rescanning at grid step " << out.diagnostics.grid_step_used;
    throw SolverDiagnostic(os.str());
}

SolutionBasis Eigenfunction::basis() const {
    return branch == Branch::zero ? SolutionBasis::affine : SolutionBasis::exponential;
}

namespace {

Complex wave_of(const Eigenfunction& f) {
    return f.branch == Branch::negative ? Complex{0.0, f.x} : Complex{f.x, 0.0};
}

// Gram matrix of the two basis functions in L2(-1/2, 1/2):
// (<psi_1, psi_1>, <psi_1, psi_2>, <psi_2, psi_2>), all real here.
struct Gram {
    double g11, g12, g22;
};

Gram gram_for(Branch b, double x) {
    switch (b) {
    case Branch::zero: return {1.0, 0.0, 1.0 / 12.0};
    case Branch::positive: {
        const double sinc = std::sin(x) / x;
        return {1.0, sinc, 1.0};
    }
    case Branch::negative: {
        const double shc = std::sinh(x) / x;
        return {shc, 1.0, shc};
    }
    }
    return {1.0, 0.0, 1.0};
}

Complex inner(const Gram& g, Complex a1, Complex a2, Complex b1, Complex b2) {
    return std::conj(a1) * (g.g11 * b1 + g.g12 * b2) + std::conj(a2) * (g.g12 * b1 + g.g22 * b2);
}

} // namespace

Complex Eigenfunction::value(double s) const {
    if (branch == Branch::zero) return c1 - c2 * s;
    const Complex k = wave_of(*this);
    const Complex i{0.0, 1.0};
    return c1 * std::exp(i * k * s) + c2 * std::exp(-i * k * s);
}

Complex Eigenfunction::derivative(double s) const {
    if (branch == Branch::zero) return -c2;
    const Complex k = wave_of(*this);
    const Complex i{0.0, 1.0};
    return i * k * (c1 * std::exp(i * k * s) - c2 * std::exp(-i * k * s));
}

double Eigenfunction::norm_squared() const {
    return inner(gram_for(branch, x), c1, c2, c1, c2).real();
}

std::vector<Eigenfunction> eigenfunction_at(const Unitary2& u, const SpectralPoint& p) {
    const BoundaryMatrices am = boundary_matrices(DimlessEnergy{p.eps_hat});
    const double scale = am.a_plus.frobenius_norm();
    const Mat2 k = (1.0 / scale) * (am.a_minus - u.matrix() * am.a_plus);

    // Singular values of the normalized 2x2 system through K^dagger K.
    const Mat2 h = k.adjoint() * k;
    const double tr = h.trace().real();
    const double det = std::max(0.0, h.det().real());
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lam_min = std::max(0.0, 0.5 * tr - disc);
    const double lam_max = 0.5 * tr + disc;
    constexpr double kNullTol = 1e-6;
    if (std::sqrt(lam_min) > kNullTol) {
        std::ostringstream os;
        os.precision(17);
        os << "no null space at " << to_string(p.branch) << " x = " << p.x
           << ": smallest singular value " << std::sqrt(lam_min);
        throw InconsistentRoot(os.str());
    }

    const Gram g = gram_for(p.branch, p.x);
    std::vector<std::pair<Complex, Complex>> raw;
    if (p.multiplicity >= 2 || std::sqrt(lam_max) <= kNullTol) {
        raw = {{1.0, 0.0}, {0.0, 1.0}};
    } else {
        // eigenvector of h for lam_min
        const Complex v1a = h.e12;
        const Complex v2a = lam_min - h.e11;
        const Complex v1b = lam_min - h.e22;
        const Complex v2b = h.e21;
        if (std::norm(v1a) + std::norm(v2a) >= std::norm(v1b) + std::norm(v2b)) {
            raw = {{v1a, v2a}};
        } else {
            raw = {{v1b, v2b}};
        }
    }

    // Gram-Schmidt in the L2 metric.
    std::vector<Eigenfunction> out;
    for (auto [a1, a2] : raw) {
        for (const Eigenfunction& prev : out) {
            const Complex proj = inner(g, prev.c1, prev.c2, a1, a2);
            a1 -= proj * prev.c1;
            a2 -= proj * prev.c2;
        }
        const double nrm = std::sqrt(inner(g, a1, a2, a1, a2).real());
        out.push_back({a1 / nrm, a2 / nrm, p.branch, p.x});
    }
    return out;
}

} // namespace bcspec
