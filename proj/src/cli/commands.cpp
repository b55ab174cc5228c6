#include "cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bcspec/errors.hpp"
#include "bcspec/symmetry.hpp"

namespace bcspec::cli {

namespace {

constexpr double kIsospectralTol = 1e-9;
constexpr double kOdeTol = 1e-8;
constexpr double kSweepWindow = 6.0 * kPi;

Json header(const char* command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

Json class_json(const SpectralClass& c) {
    Json j;
    j["eta"] = c.eta;
    j["m0"] = c.m0;
    j["m1"] = c.m1;
    return j;
}

ScanWindow window_for(const Unitary2& u, double max_x, std::optional<double> kappa_max) {
    if (kappa_max) return ScanWindow{max_x, *kappa_max};
    return ScanWindow::covering(u, ScanWindow{max_x, ScanWindow{}.kappa_max});
}

struct BcOptions {
    double alpha = 0.0, eta = 0.0, theta = 0.0, m0 = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
    std::string preset, matrix;
    CLI::Option *o_preset = nullptr, *o_alpha = nullptr, *o_eta = nullptr, *o_theta = nullptr;
    CLI::Option *o_m0 = nullptr, *o_m1 = nullptr, *o_m2 = nullptr, *o_m3 = nullptr, *o_matrix = nullptr;

    void attach(CLI::App* app) {
        o_preset = app->add_option("--preset", preset,
                                   "dirichlet, neumann, periodic, antiperiodic or quasiperiodic");
        o_alpha = app->add_option("--alpha", alpha, "twist angle of the quasiperiodic preset");
        o_eta = app->add_option("--eta", eta, "U(1) phase; combine with --theta or --m0..--m3");
        o_theta = app->add_option("--theta", theta, "parity-family angle, U = e^{i(eta I + theta sigma_x)}");
        o_m0 = app->add_option("--m0", m0);
        o_m1 = app->add_option("--m1", m1);
        o_m2 = app->add_option("--m2", m2);
        o_m3 = app->add_option("--m3", m3);
        o_matrix = app->add_option("--matrix", matrix, "re,im of U11,U12,U21,U22 (8 reals)");
    }

    BcInput parse() const {
        const auto opt = [](CLI::Option* o, double v) { return o->count() ? std::optional<double>(v) : std::nullopt; };
        BcFlags f;
        if (o_preset->count()) f.preset = preset;
        if (o_matrix->count()) f.matrix = matrix;
        f.alpha = opt(o_alpha, alpha);
        f.eta = opt(o_eta, eta);
        f.theta = opt(o_theta, theta);
        f.m0 = opt(o_m0, m0);
        f.m1 = opt(o_m1, m1);
        f.m2 = opt(o_m2, m2);
        f.m3 = opt(o_m3, m3);
        return parse_bc(f);
    }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidParameter("cannot open '" + path + "' for writing");
    f << text;
}

double distinct_gap(const std::vector<double>& levels) {
    if (levels.empty()) return std::nan("");
    const double g = levels.front();
    for (double l : levels) {
        if (l - g > 1e-9 * (1.0 + std::abs(g))) return l - g;
    }
    return std::nan("");
}

double observe(const Unitary2& u, Observable obs) {
    if (obs == Observable::zero_mode_residual) return zero_mode_residual(to_params(u));
    const Spectrum s = solve_spectrum(u, window_for(u, kSweepWindow, std::nullopt));
    const std::vector<double> levels = s.levels();
    if (obs == Observable::ground_state) return levels.empty() ? std::nan("") : levels.front();
    return distinct_gap(levels);
}

} // namespace

Json spectrum_record(const BcInput& in, const Unitary2& u, const Spectrum& s,
                     const std::optional<PhysicalScale>& phys) {
    const BoundaryParams p = to_params(u);
    Json j = header("spectrum");
    j["input"] = in.echo();
    j["matrix"] = matrix_json(u.matrix());
    j["params"] = params_json(p);
    j["spectral_class"] = class_json(spectral_class(u));
    j["zero_mode"] = s.zero_mode;
    if (phys) {
        Json ph;
        ph["length_m"] = phys->length;
        ph["mass_kg"] = phys->mass;
        ph["hbar_Js"] = phys->hbar;
        j["physical"] = ph;
    }
    Json pts = Json::array();
    for (const SpectralPoint& pt : s.points) {
        Json e;
        e["branch"] = to_string(pt.branch);
        e["x"] = pt.x;
        e["eps_hat"] = pt.eps_hat;
        e["multiplicity"] = pt.multiplicity;
        if (phys) e["energy_J"] = phys->energy(pt.eps_hat);
        pts.push_back(e);
    }
    j["points"] = pts;

    Json solver;
    solver["version"] = kToolVersion;
    solver["window"] = {{"x_max", s.window.x_max_pos}, {"kappa_max", s.window.kappa_max}};
    const SolverTolerances& t = s.tolerances;
    solver["tolerances"] = {{"grid_step", t.grid_step},       {"zero_exclusion", t.zero_exclusion},
                            {"root_dx", t.root_dx},           {"tangent", t.tangent},
                            {"root_residual", t.root_residual}, {"multiplicity", t.multiplicity},
                            {"zero_mode", t.zero_mode}};
    solver["grid_step_used"] = s.diagnostics.grid_step_used;
    solver["rescans"] = s.diagnostics.rescans;
    solver["counting_deviation"] = s.diagnostics.counting_deviation;
    solver["discarded"] = s.diagnostics.discarded;
    j["solver"] = solver;
    return j;
}

std::string spectrum_csv(const Spectrum& s, const std::optional<PhysicalScale>& phys) {
    std::vector<std::string> head{"index", "branch", "x", "eps_hat", "multiplicity"};
    if (phys) head.push_back("energy_J");
    std::string out = csv_row(head);
    int idx = 0;
    for (const SpectralPoint& pt : s.points) {
        std::vector<std::string> row{std::to_string(idx++), to_string(pt.branch), format_double(pt.x),
                                     format_double(pt.eps_hat), std::to_string(pt.multiplicity)};
        if (phys) row.push_back(format_double(phys->energy(pt.eps_hat)));
        out += csv_row(row);
    }
    return out;
}

Json classify_record(const BcInput& in, const Unitary2& u) {
    const BoundaryParams p = to_params(u);
    Json j = header("classify");
    j["input"] = in.echo();
    j["matrix"] = matrix_json(u.matrix());
    j["params"] = params_json(p);
    j["spectral_class"] = class_json(SpectralClass::canonical(p.eta, p.m0, p.m1));
    const bool parity = is_parity_symmetric(u);
    j["parity_symmetric"] = parity;
    j["locus"] = to_string(hamiltonian_space_locus(u));
    j["zero_mode"] = zero_mode_condition(u);
    j["zero_mode_residual"] = zero_mode_residual(p);
    j["time_reversal_fixed"] = std::abs(p.m2) < kParityTol;
    return j;
}

Json family_record(const BcInput& in, const Unitary2& u, int n, double max_x) {
    const IsospectralFamily fam = isospectral_family(u, n);
    const std::vector<IsospectralMember> members = fam.distinct();
    Json j = header("family");
    j["input"] = in.echo();
    j["n"] = n;
    j["spectral_class"] = class_json(spectral_class(u));
    j["locus"] = to_string(hamiltonian_space_locus(u));
    if (is_parity_symmetric(u)) j["note"] = "boundary point of the spectral space: the orbit is a single matrix";
    Json arr = Json::array();
    for (const IsospectralMember& m : members) {
        Json e;
        e["delta"] = m.delta;
        e["matrix"] = matrix_json(m.u.matrix());
        e["params"] = params_json(to_params(m.u));
        arr.push_back(e);
    }
    j["members"] = arr;

    const Spectrum base = solve_spectrum(u, window_for(u, max_x, std::nullopt));
    double max_dx = 0.0;
    bool same_mult = true;
    bool same_count = true;
    for (const IsospectralMember& m : members) {
        const Spectrum s = solve_spectrum(m.u, window_for(m.u, max_x, std::nullopt));
        if (s.points.size() != base.points.size() || s.zero_mode != base.zero_mode) {
            same_count = false;
            continue;
        }
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const SpectralPoint& a = base.points[i];
            const SpectralPoint& b = s.points[i];
            max_dx = std::max(max_dx, a.branch == b.branch ? std::abs(a.x - b.x) : std::abs(a.eps_hat - b.eps_hat));
            same_mult = same_mult && a.multiplicity == b.multiplicity && a.branch == b.branch;
        }
    }
    Json v;
    v["compared"] = static_cast<int>(members.size());
    v["levels"] = static_cast<int>(base.levels().size());
    v["max_abs_dx"] = max_dx;
    v["tolerance"] = kIsospectralTol;
    v["multiplicities_agree"] = same_mult;
    v["isospectral"] = same_count && same_mult && max_dx <= kIsospectralTol;
    j["verification"] = v;
    return j;
}

int sweep_threads() {
    if (const char* env = std::getenv("BC_SPECTRA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SweepCell> sweep(int n_eta, int n_theta, Observable obs, int threads) {
    if (n_eta < 2 || n_theta < 2) throw InvalidParameter("sweep: the grid must be at least 2x2");
    const int total = n_eta * n_theta;
    std::vector<SweepCell> cells(total);
    for (int i = 0; i < n_eta; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            cells[i * n_theta + j] = {i, j, kPi * i / n_eta, kTwoPi * j / n_theta, 0.0};
        }
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    const auto work = [&] {
        for (int c = next++; c < total; c = next++) {
            try {
                SweepCell& cell = cells[c];
                cell.value = observe(parity_family(cell.eta, cell.theta), obs);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min(threads, total));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return cells;
}

VerifyOutcome verify_record(const BcInput& in, const Unitary2& u, std::array<int, 2> grids, int k,
                            double rel_tol, int ode_steps) {
    const OracleReport rep = cross_validate(u, grids, k, rel_tol);
    Json j = header("verify");
    j["input"] = in.echo();
    j["grids"] = {grids[0], grids[1]};
    j["k"] = k;
    j["rel_tol"] = rel_tol;
    Json cmp = Json::array();
    for (const OracleComparison& c : rep.comparison) {
        Json e;
        e["solver"] = c.solver;
        e["fd_coarse"] = c.coarse;
        e["fd_fine"] = c.fine;
        e["abs_dev_coarse"] = c.abs_dev_coarse;
        e["abs_dev_fine"] = c.abs_dev_fine;
        e["rel_dev_fine"] = c.rel_dev_fine;
        cmp.push_back(e);
    }
    j["comparison"] = cmp;
    j["order"] = rep.order;
    j["order_range"] = {kOrderMin, kOrderMax};
    j["negatives_solver"] = rep.negatives_solver;
    j["negatives_fd"] = rep.negatives_fd;
    j["fd_passed"] = rep.passed;

    bool ode_ok = true;
    Json ode = Json::array();
    for (double e : {-100.0, -10.0, -1.0, 1.0, 10.0, 100.0}) {
        const double dev = ode_check_boundary_matrices(DimlessEnergy{e}, ode_steps);
        ode_ok = ode_ok && dev < kOdeTol;
        ode.push_back({{"eps_hat", e}, {"deviation", dev}});
    }
    j["ode"] = {{"steps", ode_steps}, {"tolerance", kOdeTol}, {"checks", ode}, {"passed", ode_ok}};
    j["notes"] = rep.notes;
    const bool passed = rep.passed && ode_ok;
    j["passed"] = passed;
    return {j, passed};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of the free particle on an interval under U(2) boundary conditions", "bc_spectra"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string output;
    std::string format = "json";
    std::string physical;
    double hbar = PhysicalScale{}.hbar;
    double max_x = 50.0 * kPi;
    double kappa_max = 0.0;

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of H_U");
    BcOptions bc_spectrum;
    bc_spectrum.attach(spectrum);
    spectrum->add_option("--max-x", max_x, "upper end of the positive branch in x = sqrt(eps_hat)");
    CLI::Option* o_kappa = spectrum->add_option("--kappa-max", kappa_max, "cutoff of the negative branch");
    spectrum->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    spectrum->add_option("--physical", physical, "length_m,mass_kg for energies in joules");
    spectrum->add_option("--hbar", hbar, "J s");
    spectrum->add_option("-o,--output", output);

    CLI::App* family = app.add_subcommand("family", "parity orbit of U and its shared spectrum");
    BcOptions bc_family;
    bc_family.attach(family);
    int n_family = 8;
    family->add_option("-n,--count", n_family, "number of orbit samples");
    family->add_option("--max-x", max_x);
    family->add_option("-o,--output", output);

    CLI::App* classify = app.add_subcommand("classify", "symmetry and spectral-space data of U");
    BcOptions bc_classify;
    bc_classify.attach(classify);
    classify->add_option("-o,--output", output);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "observable over the parity-symmetric family");
    int n_eta = 64;
    int n_theta = 64;
    std::string observable = "zero_mode_residual";
    std::string sweep_format = "csv";
    sweep_cmd->add_option("--n-eta", n_eta);
    sweep_cmd->add_option("--n-theta", n_theta);
    sweep_cmd->add_option("--observable", observable)
        ->check(CLI::IsMember({"ground_state", "zero_mode_residual", "gap"}));
    sweep_cmd->add_option("--format", sweep_format)->check(CLI::IsMember({"json", "csv"}));
    sweep_cmd->add_option("-o,--output", output);

    CLI::App* verify = app.add_subcommand("verify", "cross-check against finite differences and ODE integration");
    BcOptions bc_verify;
    bc_verify.attach(verify);
    std::vector<int> grid_list{500, 1000};
    int k = 5;
    double rel_tol = 1e-3;
    int ode_steps = 10000;
    verify->add_option("--grids", grid_list, "coarse,fine")->delimiter(',')->expected(2);
    verify->add_option("-k", k, "number of levels compared");
    verify->add_option("--rel-tol", rel_tol);
    verify->add_option("--ode-steps", ode_steps);
    verify->add_option("-o,--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (spectrum->parsed()) {
            const BcInput in = bc_spectrum.parse();
            const Unitary2 u = in.resolve();
            std::optional<PhysicalScale> phys;
            if (!physical.empty()) phys = parse_physical(physical, hbar);
            const std::optional<double> km = o_kappa->count() ? std::optional<double>(kappa_max) : std::nullopt;
            const Spectrum s = solve_spectrum(u, window_for(u, max_x, km));
            emit(format == "csv" ? spectrum_csv(s, phys) : dump_json(spectrum_record(in, u, s, phys)), output, out);
        } else if (family->parsed()) {
            const BcInput in = bc_family.parse();
            emit(dump_json(family_record(in, in.resolve(), n_family, max_x)), output, out);
        } else if (classify->parsed()) {
            const BcInput in = bc_classify.parse();
            emit(dump_json(classify_record(in, in.resolve())), output, out);
        } else if (sweep_cmd->parsed()) {
            const Observable obs = observable == "ground_state" ? Observable::ground_state
                                   : observable == "gap"        ? Observable::gap
                                                                : Observable::zero_mode_residual;
            const std::vector<SweepCell> cells = sweep(n_eta, n_theta, obs, sweep_threads());
            if (sweep_format == "csv") {
                std::string text = csv_row({"i", "j", "eta", "theta", observable});
                for (const SweepCell& c : cells) {
                    text += csv_row({std::to_string(c.i), std::to_string(c.j), format_double(c.eta),
                                     format_double(c.theta), format_double(c.value)});
                }
                emit(text, output, out);
            } else {
                Json j = header("sweep");
                j["observable"] = observable;
                j["n_eta"] = n_eta;
                j["n_theta"] = n_theta;
                Json rows = Json::array();
                for (const SweepCell& c : cells) rows.push_back({c.i, c.j, c.eta, c.theta, c.value});
                j["columns"] = {"i", "j", "eta", "theta", observable};
                j["rows"] = rows;
                emit(dump_json(j), output, out);
            }
        } else if (verify->parsed()) {
            const BcInput in = bc_verify.parse();
            const VerifyOutcome v =
                verify_record(in, in.resolve(), {grid_list.at(0), grid_list.at(1)}, k, rel_tol, ode_steps);
            emit(dump_json(v.record), output, out);
            err << "verify: " << (v.passed ? "PASS" : "FAIL") << "  order "
                << format_double(v.record["order"].get<double>()) << "\n";
            for (const Json& note : v.record["notes"]) err << "  " << note.get<std::string>() << "\n";
            return v.passed ? kExitOk : kExitVerify;
        }
    } catch (const SolverDiagnostic& e) {
        err << "solver diagnostic: " << e.what() << "\n";
        return kExitSolver;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace bcspec::cli
