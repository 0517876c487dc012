// JSON job configurations and the cp-phase subcommands. Each command writes
// its report to a stream and returns the process exit code.

#pragma once

#include <cpphase/cpphase.hpp>

#include <json.hpp>

#include <charconv>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpphase::cli {

using json = nlohmann::json;

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_input = 2, exit_domain = 3 };

/// Malformed or incomplete configuration (exit 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Number formatting (locale independent)

inline std::string number_text(double v, int digits) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return {buf, res.ptr};
}

inline std::string csv_number(double v) { return number_text(v, 15); }

inline std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// ---------------------------------------------------------------------------
// Configuration

struct ChiGridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
};

struct PathSpec {
    enum class Type { geodesic_polygon, axis_rotation };
    Type type = Type::geodesic_polygon;
    std::vector<Vec3> vertices;
    std::size_t steps_per_edge = 1000;
    Vec3 axis = Vec3::UnitZ();
    double angle = 0.0;
    std::size_t steps = 1000;
};

struct JobConfig {
    DensityMatrix state;
    KrausChannel channel;
    std::optional<Eigen::Index> mu;
    std::optional<ChiGridSpec> chi_grid;
    std::optional<PathSpec> path;
    Tolerances tol;
    double perturb_dilation = 0.0;
};

namespace detail {

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where + ": expected a number");
    return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw InputError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline void require_object(const json& j, const std::string& where, std::set<std::string> allowed) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw InputError(where + ": unknown field \"" + key + "\"");
}

inline Vec3 vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw InputError(where + ": expected [x, y, z]");
    return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

inline cplx entry(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2) throw InputError(where + ": expected [re, im]");
    return {number(j[0], where), number(j[1], where)};
}

/// Row-major nested array of [re, im] pairs (plain numbers are read as real).
inline ComplexMatrix matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw InputError(where + ": rows must be non-empty arrays");
    ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError(where + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                entry(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

inline DensityMatrix state(const json& j, const Tolerances& tol) {
    require_object(j, "state", {"bloch", "density"});
    if (j.contains("bloch") == j.contains("density"))
        throw InputError("state: give exactly one of \"bloch\" or \"density\"");
    if (j.contains("bloch")) return density_from_bloch(BlochVector(vec3(j["bloch"], "state.bloch"), tol.equality));
    return DensityMatrix(matrix(j["density"], "state.density"), tol.equality);
}

inline KrausChannel channel(const json& j, const Tolerances& tol) {
    require_object(j, "channel", {"preset", "p", "dim", "operators"});
    const json& preset = field(j, "preset", "channel");
    if (!preset.is_string()) throw InputError("channel.preset: expected a string");
    const std::string name = preset.get<std::string>();
    if (name == "identity") {
        const std::size_t n = j.contains("dim") ? count(j["dim"], "channel.dim") : 2;
        if (n == 0) throw std::invalid_argument("channel.dim must be positive");
        return identity_channel(static_cast<Eigen::Index>(n));
    }
    if (name == "depolarizing") return depolarizing(number(field(j, "p", "channel"), "channel.p"));
    if (name == "amplitude_damping") return amplitude_damping(number(field(j, "p", "channel"), "channel.p"));
    if (name == "kraus") {
        const json& ops = field(j, "operators", "channel");
        if (!ops.is_array() || ops.empty()) throw InputError("channel.operators: expected a non-empty array");
        std::vector<ComplexMatrix> ms;
        for (std::size_t k = 0; k < ops.size(); ++k)
            ms.push_back(matrix(ops[k], "channel.operators[" + std::to_string(k) + "]"));
        return KrausChannel(std::move(ms), tol.structural);
    }
    throw std::invalid_argument("channel.preset: unknown preset \"" + name +
                                "\" (expected identity, depolarizing, amplitude_damping or kraus)");
}

inline ChiGridSpec chi_grid(const json& j) {
    require_object(j, "chi_grid", {"start", "stop", "points"});
    return {number(field(j, "start", "chi_grid"), "chi_grid.start"), number(field(j, "stop", "chi_grid"), "chi_grid.stop"),
            count(field(j, "points", "chi_grid"), "chi_grid.points")};
}

inline PathSpec path(const json& j) {
    if (!j.is_object()) throw InputError("path: expected an object");
    const json& type = field(j, "type", "path");
    if (!type.is_string()) throw InputError("path.type: expected a string");
    PathSpec p;
    if (type == "geodesic_polygon") {
        require_object(j, "path", {"type", "vertices", "steps_per_edge"});
        const json& vs = field(j, "vertices", "path");
        if (!vs.is_array()) throw InputError("path.vertices: expected an array of [x, y, z]");
        for (std::size_t k = 0; k < vs.size(); ++k) p.vertices.push_back(vec3(vs[k], "path.vertices[" + std::to_string(k) + "]"));
        if (j.contains("steps_per_edge")) p.steps_per_edge = count(j["steps_per_edge"], "path.steps_per_edge");
    } else if (type == "axis_rotation") {
        require_object(j, "path", {"type", "axis", "angle", "steps"});
        p.type = PathSpec::Type::axis_rotation;
        p.axis = vec3(field(j, "axis", "path"), "path.axis");
        p.angle = number(field(j, "angle", "path"), "path.angle");
        if (j.contains("steps")) p.steps = count(j["steps"], "path.steps");
    } else {
        throw InputError("path.type: expected \"geodesic_polygon\" or \"axis_rotation\"");
    }
    return p;
}

inline Tolerances tolerances(const json& j) {
    require_object(j, "tolerances", {"structural", "equality", "phase", "transport"});
    Tolerances t;
    auto read = [&](const char* key, double& slot) {
        if (!j.contains(key)) return;
        slot = number(j[key], std::string("tolerances.") + key);
        if (!(slot > 0.0)) throw std::invalid_argument(std::string("tolerances.") + key + " must be positive");
    };
    read("structural", t.structural);
    read("equality", t.equality);
    read("phase", t.phase);
    read("transport", t.transport);
    return t;
}

}  // namespace detail

/// Parses config text; syntax errors carry the byte offset.
inline json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline JobConfig job_from_json(const json& j) {
    detail::require_object(j, "config", {"description", "state", "channel", "mu", "chi_grid", "path", "tolerances", "verify"});
    const Tolerances tol = j.contains("tolerances") ? detail::tolerances(j["tolerances"]) : Tolerances{};
    JobConfig job{detail::state(detail::field(j, "state", "config"), tol),
                  detail::channel(detail::field(j, "channel", "config"), tol),
                  std::nullopt,
                  std::nullopt,
                  std::nullopt,
                  tol,
                  0.0};
    if (j.contains("mu")) {
        const json& mu = j["mu"];
        if (!mu.is_number_integer()) throw InputError("mu: expected an integer");
        job.mu = mu.get<Eigen::Index>();
        cpphase::detail::require_env_index(job.channel.env_dim(), *job.mu, "mu");
    }
    if (j.contains("chi_grid")) job.chi_grid = detail::chi_grid(j["chi_grid"]);
    if (j.contains("path")) job.path = detail::path(j["path"]);
    if (j.contains("verify")) {
        detail::require_object(j["verify"], "verify", {"perturb_dilation"});
        if (j["verify"].contains("perturb_dilation"))
            job.perturb_dilation = detail::number(j["verify"]["perturb_dilation"], "verify.perturb_dilation");
    }
    return job;
}

inline JobConfig job_from_text(std::string_view text) { return job_from_json(parse_json(text)); }

// ---------------------------------------------------------------------------
// Reports

inline void write_pattern_table(std::ostream& out, const std::vector<InterferencePattern>& rows) {
    out << pad("mu", 4) << pad("re", 20) << pad("im", 20) << pad("visibility", 20) << pad("phase", 20)
        << pad("phase_defined", 15) << '\n';
    for (const auto& r : rows)
        out << pad(std::to_string(r.mu), 4) << pad(number_text(r.value.real(), 12), 20)
            << pad(number_text(r.value.imag(), 12), 20) << pad(number_text(r.visibility, 12), 20)
            << pad(number_text(r.phase, 12), 20) << pad(r.phase_defined ? "yes" : "no", 15) << '\n';
}

inline void write_pattern_csv(std::ostream& out, const std::vector<InterferencePattern>& rows) {
    out << "mu,re,im,visibility,phase,phase_defined\n";
    for (const auto& r : rows)
        out << r.mu << ',' << csv_number(r.value.real()) << ',' << csv_number(r.value.imag()) << ','
            << csv_number(r.visibility) << ',' << csv_number(r.phase) << ',' << (r.phase_defined ? 1 : 0) << '\n';
}

inline void write_key_value(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << std::string(key.size() < 22 ? 22 - key.size() : 1, ' ') << value << '\n';
}

/// Where each command sends its output. `csv` is null when no --out was given.
struct Streams {
    std::ostream& out;
    std::ostream* csv = nullptr;
};

// ---------------------------------------------------------------------------
// Commands

inline std::vector<InterferencePattern> cmd_pattern(const JobConfig& job, Streams s) {
    const auto rows = pattern_set(job.channel, job.state, job.tol.phase);
    write_pattern_table(s.out, rows);
    if (s.csv) write_pattern_csv(*s.csv, rows);
    return rows;
}

inline std::vector<double> cmd_fringe(const JobConfig& job, Streams s) {
    if (!job.mu) throw InputError("fringe: config needs \"mu\"");
    if (!job.chi_grid) throw InputError("fringe: config needs \"chi_grid\"");
    const auto grid = chi_grid(job.chi_grid->start, job.chi_grid->stop, job.chi_grid->points);
    const auto values = fringe(pattern(job.channel, job.state, *job.mu, job.tol.phase), grid);
    std::ostream& out = s.csv ? *s.csv : s.out;
    out << "chi,intensity\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out << csv_number(grid[i]) << ',' << csv_number(values[i]) << '\n';
    return values;
}

struct VerifyResult {
    double max_deviation = 0.0;
    bool passed = false;
};

/// Kraus, dilation and purification routes for every mu. The optional
/// perturbation adds eps * I to the dilation unitary (negative control).
inline VerifyResult cmd_verify(const JobConfig& job, double threshold, Streams s) {
    Dilation d = dilate(job.channel);
    if (job.perturb_dilation != 0.0) {
        const ComplexMatrix u = d.unitary() + job.perturb_dilation * identity(d.unitary().rows());
        d = Dilation::unchecked(d.sys_dim(), d.env_dim(), u);
    }
    s.out << pad("mu", 4) << pad("kraus-dilation", 20) << pad("kraus-purification", 20)
          << pad("dilation-purif.", 20) << '\n';
    VerifyResult res;
    if (s.csv) *s.csv << "mu,kraus_dilation,kraus_purification,dilation_purification\n";
    for (Eigen::Index mu = 0; mu < job.channel.env_dim(); ++mu) {
        const cplx a = pattern(job.channel, job.state, mu).value;
        const cplx b = pattern_via_dilation(d, job.state, mu).value;
        const cplx c = pattern_via_purification(d, job.state, mu).value;
        const double ab = std::abs(a - b), ac = std::abs(a - c), bc = std::abs(b - c);
        res.max_deviation = std::max({res.max_deviation, ab, ac, bc});
        s.out << pad(std::to_string(mu), 4) << pad(number_text(ab, 6), 20) << pad(number_text(ac, 6), 20)
              << pad(number_text(bc, 6), 20) << '\n';
        if (s.csv) *s.csv << mu << ',' << csv_number(ab) << ',' << csv_number(ac) << ',' << csv_number(bc) << '\n';
    }
    res.passed = res.max_deviation < threshold;
    write_key_value(s.out, "max deviation", number_text(res.max_deviation, 6));
    write_key_value(s.out, "threshold", number_text(threshold, 6));
    write_key_value(s.out, "result", res.passed ? "PASS" : "FAIL");
    return res;
}

struct GeomphaseResult {
    std::vector<InterferencePattern> rows;
    double pt_residual = 0.0;
    bool residual_warning = false;
    std::optional<double> solid_angle;
    bool cyclic = false;
    std::optional<double> cyclic_formula_deviation;
};

inline UnitaryPath build_path(const PathSpec& p) {
    if (p.type == PathSpec::Type::geodesic_polygon) return geodesic_loop_path(p.vertices, p.steps_per_edge);
    const double n = p.axis.norm();
    if (!(n > 0.0)) throw std::invalid_argument("path.axis must be non-zero");
    return axis_rotation_path(p.axis / n, p.angle, p.steps);
}

/// Parallel-transports the path in the eigenbasis of the state, appends the
/// end point to the channel and reports the patterns.
inline GeomphaseResult cmd_geomphase(const JobConfig& job, double residual_threshold, Streams s) {
    if (!job.path) throw InputError("geomphase: config needs \"path\"");
    if (job.state.dim() != 2) throw std::invalid_argument("geomphase: paths are defined for qubits only");
    const StateEigenbasis eb = eigenbasis(job.state, job.tol.structural);
    if (eb.degenerate)
        throw std::domain_error("geomphase: state spectrum is degenerate, parallel-transport basis is not unique");
    const UnitaryPath transported = pt_correct(build_path(*job.path), eb.basis);
    const ComplexMatrix& final_u = transported.back();

    GeomphaseResult res;
    res.pt_residual = pt_residual(transported, eb.basis);
    res.residual_warning = res.pt_residual > residual_threshold;
    if (job.path->type == PathSpec::Type::geodesic_polygon)
        res.solid_angle = solid_angle(BlochLoop{BlochLoop::Kind::geodesic_polygon, job.path->vertices});
    ComplexMatrix in_basis = eb.basis.adjoint() * final_u * eb.basis;
    in_basis.diagonal().setZero();
    res.cyclic = max_abs(in_basis) < 1e-8;

    res.rows = pattern_set(compose_unitary(job.channel, final_u), job.state, job.tol.phase);
    if (res.cyclic) {
        std::vector<ComplexMatrix> hs, vs;
        for (const auto& m : job.channel.kraus()) {
            PolarFactors f = polar_decompose(m);
            hs.push_back(std::move(f.h));
            vs.push_back(std::move(f.u));
        }
        try {
            const auto z = geometric_phase_cyclic(hs, vs, final_u, job.state, eb.basis, job.tol);
            double dev = 0.0;
            for (std::size_t mu = 0; mu < z.size(); ++mu) dev = std::max(dev, std::abs(z[mu].value - res.rows[mu].value));
            res.cyclic_formula_deviation = dev;
        } catch (const std::domain_error&) {
            // h_mu not co-diagonal with rho: the cyclic formula does not apply.
        }
    }

    write_pattern_table(s.out, res.rows);
    if (s.csv) write_pattern_csv(*s.csv, res.rows);
    write_key_value(s.out, "pt residual", number_text(res.pt_residual, 6));
    write_key_value(s.out, "warning", res.residual_warning ? "pt residual above " + number_text(residual_threshold, 6)
                                                           : "none");
    write_key_value(s.out, "solid angle", res.solid_angle ? number_text(*res.solid_angle, 12) : "n/a");
    write_key_value(s.out, "cyclic", res.cyclic ? "yes" : "no");
    write_key_value(s.out, "cyclic formula dev",
                    res.cyclic_formula_deviation ? number_text(*res.cyclic_formula_deviation, 6) : "n/a");
    return res;
}

inline json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json cmd_dilate(const JobConfig& job, Streams s) {
    const Dilation d = dilate(job.channel);
    const KrausChannel back = kraus_from_dilation(d);
    double roundtrip = 0.0;
    for (Eigen::Index mu = 0; mu < job.channel.env_dim(); ++mu)
        roundtrip = std::max(roundtrip, max_abs(back[mu] - job.channel[mu]));
    json out = {{"sys_dim", d.sys_dim()},
                {"env_dim", d.env_dim()},
                {"unitary", matrix_json(d.unitary())},
                {"unitarity_residual", unitarity_residual(d.unitary())},
                {"roundtrip_residual", roundtrip}};
    (s.csv ? *s.csv : s.out) << out.dump(2) << '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch

struct Invocation {
    std::string command;
    std::string config_text;
    std::optional<double> tol;
};

/// Runs one command, mapping exceptions onto exit codes. Diagnostics go to `err`.
inline int run(const Invocation& inv, Streams s, std::ostream& err) {
    try {
        const JobConfig job = job_from_text(inv.config_text);
        if (inv.command == "pattern") {
            cmd_pattern(job, s);
        } else if (inv.command == "fringe") {
            cmd_fringe(job, s);
        } else if (inv.command == "verify") {
            if (!cmd_verify(job, inv.tol.value_or(1e-10), s).passed) return exit_verification;
        } else if (inv.command == "geomphase") {
            cmd_geomphase(job, inv.tol.value_or(job.tol.transport), s);
        } else if (inv.command == "dilate") {
            cmd_dilate(job, s);
        } else {
            throw InputError("unknown command \"" + inv.command + "\"");
        }
        return exit_ok;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

}  // namespace cpphase::cli
