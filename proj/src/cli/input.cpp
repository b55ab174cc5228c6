#include "cli/input.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "bcspec/errors.hpp"
#include "bcspec/symmetry.hpp"
#include "cli/output.hpp"

namespace bcspec::cli {

namespace {

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* begin = item.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        while (end && *end == ' ') ++end;
        if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
            throw InvalidParameter(std::string(what) + ": cannot parse '" + item + "' as a number");
        }
        out.push_back(v);
    }
    return out;
}

} // namespace

Unitary2 quasiperiodic(double alpha) {
    return Unitary2(Mat2{0.0, std::polar(1.0, -alpha), std::polar(1.0, alpha), 0.0});
}

Unitary2 preset_matrix(const std::string& name, double alpha) {
    if (name == "dirichlet") return Unitary2(-1.0 * Mat2::identity());
    if (name == "neumann") return Unitary2::identity();
    if (name == "periodic") return Unitary2(Mat2::sigma_x());
    if (name == "antiperiodic") return Unitary2(-1.0 * Mat2::sigma_x());
    if (name == "quasiperiodic") return quasiperiodic(alpha);
    throw InvalidParameter("unknown preset '" + name +
                           "' (expected dirichlet, neumann, periodic, antiperiodic or quasiperiodic)");
}

Mat2 parse_matrix(const std::string& text) {
    const std::vector<double> v = parse_reals(text, "--matrix");
    if (v.size() != 8) throw InvalidParameter("--matrix: expected 8 reals (re, im of U11, U12, U21, U22)");
    return Mat2{Complex{v[0], v[1]}, Complex{v[2], v[3]}, Complex{v[4], v[5]}, Complex{v[6], v[7]}};
}

PhysicalScale parse_physical(const std::string& text, double hbar) {
    const std::vector<double> v = parse_reals(text, "--physical");
    if (v.size() != 2) throw InvalidParameter("--physical: expected length,mass");
    if (!(v[0] > 0.0) || !(v[1] > 0.0) || !(hbar > 0.0)) {
        throw InvalidParameter("--physical: length, mass and hbar must be positive");
    }
    return {v[0], v[1], hbar};
}

BcInput parse_bc(const BcFlags& f) {
    const bool any_m = f.m0 || f.m1 || f.m2 || f.m3;
    const bool all_m = f.m0 && f.m1 && f.m2 && f.m3;
    const int sources = static_cast<int>(f.preset.has_value()) + static_cast<int>(f.matrix.has_value()) +
                        static_cast<int>(f.eta.has_value());
    if (sources != 1) {
        throw InvalidParameter("give exactly one of --preset, --matrix or --eta");
    }
    if (f.alpha && !(f.preset && *f.preset == "quasiperiodic")) {
        throw InvalidParameter("--alpha only applies to --preset quasiperiodic");
    }
    if ((f.theta || any_m) && !f.eta) throw InvalidParameter("--theta and --m0..--m3 need --eta");

    BcInput in;
    if (f.preset) {
        in.kind = BcInput::Kind::preset;
        in.preset = *f.preset;
        in.alpha = f.alpha.value_or(0.0);
        (void)preset_matrix(in.preset, in.alpha);
    } else if (f.matrix) {
        in.kind = BcInput::Kind::matrix;
        in.matrix = parse_matrix(*f.matrix);
    } else if (f.theta) {
        if (any_m) throw InvalidParameter("--theta cannot be combined with --m0..--m3");
        in.kind = BcInput::Kind::family;
        in.eta = *f.eta;
        in.theta = *f.theta;
        if (!std::isfinite(in.eta) || !std::isfinite(in.theta)) throw InvalidParameter("--eta/--theta must be finite");
    } else {
        if (!all_m) throw InvalidParameter("--eta needs --theta or all of --m0, --m1, --m2, --m3");
        in.kind = BcInput::Kind::params;
        in.params = BoundaryParams::make(*f.eta, *f.m0, *f.m1, *f.m2, *f.m3);
    }
    (void)in.resolve();
    return in;
}

Unitary2 BcInput::resolve() const {
    switch (kind) {
    case Kind::preset: return preset_matrix(preset, alpha);
    case Kind::family: return parity_family(eta, theta);
    case Kind::params: return from_params(params);
    case Kind::matrix: return Unitary2(matrix);
    }
    throw InvalidParameter("unknown input kind");
}

nlohmann::ordered_json BcInput::echo() const {
    nlohmann::ordered_json j;
    switch (kind) {
    case Kind::preset:
        j["kind"] = "preset";
        j["preset"] = preset;
        if (preset == "quasiperiodic") j["alpha"] = alpha;
        break;
    case Kind::family:
        j["kind"] = "family";
        j["eta"] = eta;
        j["theta"] = theta;
        break;
    case Kind::params:
        j["kind"] = "params";
        j["eta"] = params.eta;
        j["m"] = {params.m0, params.m1, params.m2, params.m3};
        break;
    case Kind::matrix:
        j["kind"] = "matrix";
        j["matrix"] = matrix_json(matrix);
        break;
    }
    return j;
}

} // namespace bcspec::cli
