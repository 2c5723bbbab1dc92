#include "inls/experiment.hpp"

#include "inls/diagnostics.hpp"
#include "inls/errors.hpp"
#include "inls/spectral.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#ifndef INLS_VERSION
#define INLS_VERSION "0.0.0"
#endif

namespace inls {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string artifact_version() { return INLS_VERSION; }

namespace {

std::string policy_name(EscapePolicy p) { return p == EscapePolicy::abort ? "abort" : "record"; }

EscapePolicy parse_policy(const std::string& s) {
    if (s == "abort") return EscapePolicy::abort;
    if (s == "record") return EscapePolicy::record;
    throw ValidationError("escape_policy must be 'abort' or 'record', got '" + s + "'");
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError("override '" + key + "' needs a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::round(d)) throw ValidationError("override '" + key + "' needs an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("override '" + key + "' needs true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

json params_json(const std::map<std::string, double>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

std::map<std::string, double> params_from(const json& j, const std::string& where) {
    std::map<std::string, double> m;
    if (j.is_null()) return m;
    if (!j.is_object()) throw ValidationError(where + " params must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ValidationError(where + " parameter '" + k + "' must be numeric");
        m[k] = v.get<double>();
    }
    return m;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, _] : j.items())
        if (!allowed.count(k)) throw ValidationError("unknown key '" + k + "' in " + where);
}

json config_to_json(const RunConfig& c, bool with_output) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["grid"] = {{"n", c.n}, {"length", c.length}};
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["snapshot_stride"] = c.snapshot_stride;
    j["p"] = c.p;
    j["weight"] = {{"family", c.weight.family}, {"params", params_json(c.weight.params)}};
    j["initial"] = {{"family", c.initial.family}, {"params", params_json(c.initial.params)}};
    if (c.perturbation)
        j["perturbation"] = {{"family", c.perturbation->family}, {"params", params_json(c.perturbation->params)}};
    j["monitors"] = {{"escape_policy", policy_name(c.escape_policy)},
                     {"escape_threshold", c.escape_threshold},
                     {"resolution_threshold", c.resolution_threshold},
                     {"blowup_factor", c.blowup_factor}};
    j["waive_admissibility"] = c.waive_admissibility;
    j["diagnostics"] = c.diagnostics;
    j["write_snapshots"] = c.write_snapshots;
    if (with_output) j["output_dir"] = c.output_dir;
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    if (j.contains("config") && j.contains("files")) return config_from_json(j.at("config"));
    check_keys(j,
               {"schema_version", "grid", "dt", "t_end", "snapshot_stride", "p", "weight", "initial", "perturbation",
                "monitors", "waive_admissibility", "diagnostics", "write_snapshots", "output_dir"},
               "config");
    RunConfig c;
    try {
        if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
            throw ValidationError("unsupported config schema_version");
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            check_keys(g, {"n", "length"}, "grid");
            if (g.contains("n")) c.n = g.at("n").get<int>();
            if (g.contains("length")) c.length = g.at("length").get<double>();
        }
        if (j.contains("dt")) c.dt = j.at("dt").get<double>();
        if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
        if (j.contains("snapshot_stride")) c.snapshot_stride = j.at("snapshot_stride").get<int>();
        if (j.contains("p")) {
            const json& p = j.at("p");
            c.p = p.is_string() ? p.get<std::string>() : p.dump();
        }
        auto family_block = [&](const char* key, std::string& family, std::map<std::string, double>& params) {
            const json& b = j.at(key);
            check_keys(b, {"family", "params"}, key);
            family = b.at("family").get<std::string>();
            params = params_from(b.contains("params") ? b.at("params") : json(), key);
        };
        if (j.contains("weight")) family_block("weight", c.weight.family, c.weight.params);
        if (j.contains("initial")) family_block("initial", c.initial.family, c.initial.params);
        if (j.contains("perturbation")) {
            InitialDataSpec d;
            family_block("perturbation", d.family, d.params);
            c.perturbation = d;
        }
        if (j.contains("monitors")) {
            const json& m = j.at("monitors");
            check_keys(m, {"escape_policy", "escape_threshold", "resolution_threshold", "blowup_factor"}, "monitors");
            if (m.contains("escape_policy")) c.escape_policy = parse_policy(m.at("escape_policy").get<std::string>());
            if (m.contains("escape_threshold")) c.escape_threshold = m.at("escape_threshold").get<double>();
            if (m.contains("resolution_threshold")) c.resolution_threshold = m.at("resolution_threshold").get<double>();
            if (m.contains("blowup_factor")) c.blowup_factor = m.at("blowup_factor").get<double>();
        }
        if (j.contains("waive_admissibility")) c.waive_admissibility = j.at("waive_admissibility").get<bool>();
        if (j.contains("diagnostics")) c.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        if (j.contains("write_snapshots")) c.write_snapshots = j.at("write_snapshots").get<bool>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    static const std::set<std::string> known{"conserved", "morawetz", "scattering", "duhamel", "perturbation"};
    for (const auto& d : c.diagnostics)
        if (!known.count(d)) throw ValidationError("unknown diagnostic '" + d + "'");
    return c;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
        os_ << '\n';
    }
    void row(const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? "," : "") << num(v[i]);
        os_ << '\n';
    }
    void raw(const std::string& line) { os_ << line << '\n'; }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

fs::path resolve_output(const RunConfig& cfg) { return fs::path(cfg.output_dir); }

void check_admissibility(const RunConfig& cfg, const Weight& w, const Power& p) {
    if (cfg.waive_admissibility) return;
    const AdmissibilityReport rep = check_admissible(w, p, SamplingConfig{});
    if (rep.overall) return;
    std::string why;
    if (rep.nonnegative.verdict != Verdict::pass) why += " nonnegativity " + to_string(rep.nonnegative.verdict) + ";";
    if (rep.repulsive.verdict != Verdict::pass) why += " repulsivity " + to_string(rep.repulsive.verdict) + ";";
    for (const auto& c : rep.integrability)
        if (c.verdict != Verdict::pass) why += " " + c.target + " in " + c.space + " " + to_string(c.verdict) + ";";
    if (rep.atilde_continuous != Verdict::pass) why += " angular limit " + to_string(rep.atilde_continuous) + ";";
    throw ValidationError("weight '" + w.label + "' is not admissible at p = " + p.str() + ":" + why +
                          " (set waive_admissibility to run anyway)");
}

json monitors_json(const RunMonitors& m) {
    json j = {{"steps", m.steps},
              {"initial_sup", m.initial_sup},
              {"max_sup", m.max_sup},
              {"max_escape_fraction", m.max_escape_fraction},
              {"escape_breached", m.escape_breached},
              {"max_top_octave_fraction", m.max_top_octave_fraction},
              {"resolution_flagged", m.resolution_flagged},
              {"initial_mass", m.initial_mass},
              {"max_mass_drift", m.max_mass_drift}};
    j["first_escape_time"] = m.first_escape_time ? json(*m.first_escape_time) : json(nullptr);
    return j;
}

RunMonitors monitors_from(const json& j) {
    RunMonitors m;
    m.steps = j.value("steps", 0L);
    m.initial_sup = j.value("initial_sup", 0.0);
    m.max_sup = j.value("max_sup", 0.0);
    m.max_escape_fraction = j.value("max_escape_fraction", 0.0);
    m.escape_breached = j.value("escape_breached", false);
    m.max_top_octave_fraction = j.value("max_top_octave_fraction", 0.0);
    m.resolution_flagged = j.value("resolution_flagged", false);
    m.initial_mass = j.value("initial_mass", 0.0);
    m.max_mass_drift = j.value("max_mass_drift", 0.0);
    if (j.contains("first_escape_time") && !j.at("first_escape_time").is_null())
        m.first_escape_time = j.at("first_escape_time").get<double>();
    return m;
}

void add_file(RunManifest& m, const fs::path& dir, const fs::path& file) {
    m.files.push_back({fs::relative(file, dir).generic_string(), sha256_file(file), fs::file_size(file)});
}

void emit(RunManifest& m, const fs::path& dir, const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    add_file(m, dir, dir / name);
}

void finish_manifest(RunManifest& m, const fs::path& dir) {
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["preset"] = m.preset;
    summary["status"] = m.status;
    summary["monitors"] = monitors_json(m.monitors);
    summary["scalars"] = m.scalars;
    summary["labels"] = m.labels;
    emit(m, dir, "summary.json", summary.dump(2) + "\n");
    write_text(dir / "manifest.json", manifest_to_json(m));
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string to_json(const RunConfig& cfg) { return config_to_json(cfg, true).dump(2); }

std::string config_hash(const RunConfig& cfg) { return sha256_hex(config_to_json(cfg, false).dump()); }

void apply_output_env(RunConfig& cfg) {
    if (const char* env = std::getenv("INLS_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
}

SolverConfig to_solver_config(const RunConfig& c) {
    SolverConfig s;
    s.grid = Grid(c.n, c.length);
    s.dt = c.dt;
    s.t_end = c.t_end;
    s.snapshot_stride = c.snapshot_stride;
    s.p = Power::parse(c.p);
    s.weight = make_weight(c.weight);
    s.escape_policy = c.escape_policy;
    s.escape_threshold = c.escape_threshold;
    s.resolution_threshold = c.resolution_threshold;
    s.blowup_factor = c.blowup_factor;
    s.waive_admissibility = c.waive_admissibility;
    return s;
}

void apply_override(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "dt") c.dt = parse_double(key, v);
    else if (key == "t_end") c.t_end = parse_double(key, v);
    else if (key == "stride" || key == "snapshot_stride") c.snapshot_stride = parse_int(key, v);
    else if (key == "n") c.n = parse_int(key, v);
    else if (key == "L" || key == "length") c.length = parse_double(key, v);
    else if (key == "p") c.p = Power::parse(v).str();
    else if (key == "amplitude" || key == "width") c.initial.params[key] = parse_double(key, v);
    else if (key == "weight") c.weight = {v, {}};
    else if (key.rfind("weight.", 0) == 0) c.weight.params[key.substr(7)] = parse_double(key, v);
    else if (key == "initial") c.initial = {v, {}};
    else if (key.rfind("initial.", 0) == 0) c.initial.params[key.substr(8)] = parse_double(key, v);
    else if (key == "escape_policy") c.escape_policy = parse_policy(v);
    else if (key == "escape_threshold") c.escape_threshold = parse_double(key, v);
    else if (key == "resolution_threshold") c.resolution_threshold = parse_double(key, v);
    else if (key == "blowup_factor") c.blowup_factor = parse_double(key, v);
    else if (key == "waive_admissibility") c.waive_admissibility = parse_bool(key, v);
    else if (key == "diagnostics") c.diagnostics = split(v, ',');
    else if (key == "write_snapshots") c.write_snapshots = parse_bool(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else throw ValidationError("unknown override key '" + key + "'");
    // re-validate via a JSON round trip (unknown diagnostics, etc.)
    c = config_from_json(config_to_json(c, true));
}

std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& items) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : items) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("override must look like key=value: '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << text;
    if (!out) throw ValidationError("write failed for " + path.string());
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

std::optional<double> plane_wave_error(const RunConfig& cfg, const Field& u_end) {
    if (cfg.initial.family != "plane_wave") return std::nullopt;
    double c = 0.0;
    if (cfg.weight.family == "constant") c = make_weight(cfg.weight).value({0.0, 0.0});
    else if (cfg.weight.family != "zero") return std::nullopt;
    const Grid& g = u_end.grid();
    auto get = [&](const char* k, double d) {
        auto it = cfg.initial.params.find(k);
        return it == cfg.initial.params.end() ? d : it->second;
    };
    const double a = get("amplitude", 1.0);
    const double kx = g.fundamental() * get("mx", 1.0), ky = g.fundamental() * get("my", 0.0);
    const double omega = kx * kx + ky * ky + c * std::pow(std::abs(a), Power::parse(cfg.p).to_double());
    const double t = cfg.t_end;
    const Field exact = Field::sample(g, [&](Vec2 x) { return std::polar(a, kx * x.x + ky * x.y - omega * t); });
    return lebesgue_norm(u_end - exact, 2.0);
}

RunManifest execute_run(const RunConfig& cfg_in, const std::string& preset) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg = cfg_in;
    const fs::path dir = resolve_output(cfg);
    cfg.output_dir = dir.generic_string();
    fs::create_directories(dir);

    const SolverConfig sc = to_solver_config(cfg);
    check_admissibility(cfg, sc.weight, sc.p);
    const Field u0 = make_initial_data(cfg.initial, sc.grid);

    RunManifest m;
    m.preset = preset;
    m.artifact_version = artifact_version();
    m.config_json = to_json(cfg);
    m.config_hash = config_hash(cfg);
    m.directory = dir;

    const RunResult res = run(sc, u0);
    m.monitors = res.monitors;
    const Trajectory& traj = res.trajectory;
    const double pv = sc.p.to_double();

    if (cfg.write_snapshots) {
        write_trajectory(dir / "trajectory", traj);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir / "trajectory")) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) add_file(m, dir, f);
    }

    if (auto err = plane_wave_error(cfg, traj.snapshots().back())) m.scalars["plane_wave_error"] = *err;

    const auto has = [&](const char* d) {
        return std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(), d) != cfg.diagnostics.end();
    };

    if (has("conserved")) {
        const ConservedReport cr = conserved(traj, sc.weight, pv);
        Csv csv({"t", "mass", "kinetic", "potential", "energy"});
        for (std::size_t k = 0; k < cr.times.size(); ++k)
            csv.row({cr.times[k], cr.mass[k], cr.kinetic[k], cr.potential[k], cr.energy[k]});
        emit(m, dir, "conserved.csv", csv.str());
        m.scalars["mass0"] = cr.mass.front();
        m.scalars["energy0"] = cr.energy.front();
        m.scalars["max_mass_drift"] = cr.max_mass_drift();
        m.scalars["max_energy_drift"] = cr.max_energy_drift();
    }
    if (has("morawetz")) {
        const MorawetzReport mr = morawetz(traj);
        Csv csv({"t", "z_norm_sq", "running_integral"});
        for (std::size_t k = 0; k < mr.times.size(); ++k) csv.row({mr.times[k], mr.z_norm_sq[k], mr.running[k]});
        emit(m, dir, "morawetz.csv", csv.str());
        const double M = mass(traj.snapshots().front());
        const double E = kinetic_energy(traj.snapshots().front()) +
                         potential_energy(traj.snapshots().front(), sample_on_grid(sc.weight, sc.grid), pv);
        const double half = mr.integral_at(0.5 * traj.times().back());
        m.scalars["morawetz_integral"] = mr.integral;
        m.scalars["morawetz_integral_half"] = half;
        m.scalars["morawetz_relative_change"] = mr.integral > 0.0 ? (mr.integral - half) / mr.integral : 0.0;
        m.scalars["morawetz_infimum"] = mr.infimum;
        m.scalars["mass_plus_energy"] = M + E;
        m.scalars["morawetz_ratio"] = (M + E) > 0.0 ? mr.integral / (M + E) : 0.0;
    }
    if (has("scattering")) {
        const ScatteringReport sr = scattering_probe(traj);
        Csv csv({"t", "potential_energy"});
        for (std::size_t k = 0; k < sr.times.size(); ++k) csv.row({sr.times[k], sr.potential_energy[k]});
        emit(m, dir, "scattering.csv", csv.str());
        Csv dy({"t", "next_t", "pullback_drift", "x_norm"});
        for (std::size_t k = 0; k < sr.dyadic_times.size(); ++k) {
            const bool last = k + 1 == sr.dyadic_times.size();
            dy.row({sr.dyadic_times[k], last ? NAN : sr.dyadic_times[k + 1], last ? NAN : sr.pullback_drift[k],
                    sr.x_norm_accumulation[k]});
        }
        emit(m, dir, "scattering_dyadic.csv", dy.str());
        m.scalars["potential_decay"] = sr.potential_decay;
        m.scalars["x_norm_total"] = sr.x_norm_accumulation.back();
        m.labels["scattering_verdict"] = to_string(sr.verdict);
        m.labels["scattering_detail"] = sr.detail;
    }
    if (has("duhamel")) {
        const DuhamelReport dr = duhamel_residual(traj, traj.times().front(), traj.times().back());
        m.scalars["duhamel_residual"] = dr.residual;
        m.scalars["duhamel_ratio"] = dr.ratio;
        m.scalars["duhamel_integral_x"] = dr.integral_x_norm;
        m.scalars["duhamel_forcing_y"] = dr.forcing_y_norm;
    }
    if (has("perturbation")) {
        if (!cfg.perturbation) throw ValidationError("perturbation diagnostic needs a 'perturbation' block");
        const Field delta = make_initial_data(*cfg.perturbation, sc.grid);
        const RunResult other = run(sc, u0 + delta);
        const double xd = x_norm_difference(traj, other.trajectory, exponent_profile(sc.p));
        const double h1 = sobolev_norm(delta, 1.0, false);
        m.scalars["perturbation_delta_h1"] = h1;
        m.scalars["perturbation_x_difference"] = xd;
        m.scalars["perturbation_ratio"] = h1 > 0.0 ? xd / h1 : 0.0;
    }

    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    finish_manifest(m, dir);
    return m;
}

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = m.artifact_version;
    j["preset"] = m.preset;
    j["status"] = m.status;
    j["config"] = json::parse(m.config_json);
    j["config_hash"] = m.config_hash;
    j["monitors"] = monitors_json(m.monitors);
    j["scalars"] = m.scalars;
    j["labels"] = m.labels;
    j["children"] = m.children;
    j["wall_seconds"] = m.wall_seconds;
    json files = json::array();
    for (const auto& f : m.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    j["files"] = files;
    return j.dump(2) + "\n";
}

RunManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read manifest " + path.string());
    json j;
    try {
        in >> j;
        RunManifest m;
        m.artifact_version = j.at("artifact_version").get<std::string>();
        m.preset = j.value("preset", "");
        m.status = j.value("status", "ok");
        m.config_json = j.at("config").dump(2);
        m.config_hash = j.at("config_hash").get<std::string>();
        m.monitors = monitors_from(j.at("monitors"));
        m.scalars = j.value("scalars", std::map<std::string, double>{});
        m.labels = j.value("labels", std::map<std::string, std::string>{});
        m.children = j.value("children", std::vector<std::string>{});
        m.wall_seconds = j.value("wall_seconds", 0.0);
        for (const auto& f : j.at("files"))
            m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                               f.at("bytes").get<std::uintmax_t>()});
        m.directory = path.parent_path();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed manifest: ") + e.what());
    }
}

bool verify_manifest(const fs::path& manifest_path, std::vector<std::string>* problems) {
    const RunManifest m = read_manifest(manifest_path);
    bool ok = true;
    for (const auto& f : m.files) {
        const fs::path p = m.directory / f.path;
        std::string issue;
        if (!fs::exists(p)) issue = "missing " + f.path;
        else if (sha256_file(p) != f.sha256) issue = "checksum mismatch " + f.path;
        if (!issue.empty()) {
            ok = false;
            if (problems) problems->push_back(issue);
        }
    }
    return ok;
}

ReproductionReport reproduce_manifest(const fs::path& manifest_path, const fs::path& out_dir) {
    const RunManifest orig = read_manifest(manifest_path);
    RunConfig cfg = parse_run_config(orig.config_json);
    cfg.output_dir = out_dir.generic_string();
    ReproductionReport rep;
    rep.rerun = execute_run(cfg, orig.preset);
    std::map<std::string, std::string> fresh;
    for (const auto& f : rep.rerun.files) fresh[f.path] = f.sha256;
    rep.identical = true;
    for (const auto& f : orig.files) {
        if (f.path.size() < 4 || f.path.substr(f.path.size() - 4) != ".csv") continue;
        rep.compared.push_back(f.path);
        auto it = fresh.find(f.path);
        if (it == fresh.end() || it->second != f.sha256) {
            rep.mismatched.push_back(f.path);
            rep.identical = false;
        }
    }
    if (rep.compared.empty()) rep.identical = false;
    return rep;
}

// ------------------------------------------------------------------ presets

std::vector<ExperimentPreset> preset_catalog() {
    std::vector<ExperimentPreset> out;
    auto base = [](const std::string& dir) {
        RunConfig c;
        c.output_dir = "out/" + dir;
        return c;
    };

    {
        ExperimentPreset p{"free-gaussian", "Width-4 Gaussian under the free flow (zero weight).", base("free-gaussian"), {}, {}};
        p.config.weight = {"zero", {}};
        p.config.initial = {"gaussian", {{"amplitude", 1.0}, {"width", 4.0}}};
        p.config.dt = 1e-2;
        p.config.t_end = 2.0;
        p.config.snapshot_stride = 10;
        p.config.diagnostics = {"conserved", "duhamel"};
        p.acceptance = "potential energy identically zero; Duhamel residual below 1e-10";
        out.push_back(p);
    }
    {
        ExperimentPreset p{"mass-conservation", "Unit Gaussian, gaussian weight, p = 2, dt = 1e-3 to T = 10.",
                           base("mass-conservation"), {}, {}};
        p.config.dt = 1e-3;
        p.config.t_end = 10.0;
        p.config.snapshot_stride = 100;
        p.config.escape_policy = EscapePolicy::record;
        p.config.write_snapshots = false;
        p.acceptance = "relative mass drift below 1e-11";
        out.push_back(p);
    }
    {
        ExperimentPreset p{"energy-drift", "Unit Gaussian, gaussian weight, p = 2, to T = 2; halve dt to see O(dt^2).",
                           base("energy-drift"), {}, {}};
        p.config.dt = 1e-2;
        p.config.t_end = 2.0;
        p.config.snapshot_stride = 10;
        p.config.escape_policy = EscapePolicy::record;
        p.config.write_snapshots = false;
        p.acceptance = "max energy drift falls about 4x per halving of dt";
        out.push_back(p);
    }
    {
        ExperimentPreset p{"plane-wave", "Lattice plane wave (2, 1) on a 2 pi box, a = 1, p = 3; exact solution known.",
                           base("plane-wave"), {}, {}};
        p.config.n = 32;
        p.config.length = 2.0 * 3.14159265358979323846;
        p.config.p = "3";
        p.config.weight = {"constant", {{"value", 1.0}}};
        p.config.initial = {"plane_wave", {{"amplitude", 1.0}, {"mx", 2.0}, {"my", 1.0}}};
        p.config.dt = 1e-2;
        p.config.t_end = 1.0;
        p.config.snapshot_stride = 5;
        p.config.escape_policy = EscapePolicy::record;
        p.config.diagnostics = {"conserved", "duhamel"};
        out.push_back(p);
    }
    auto scatter = [&](const std::string& name, double amp, const std::string& what) {
        ExperimentPreset p{name, what, base(name), {}, {}};
        p.config.n = 256;
        p.config.length = 128.0;
        p.config.initial = {"gaussian", {{"amplitude", amp}, {"width", 4.0}}};
        p.config.dt = 0.0125;
        p.config.t_end = 32.0;
        p.config.snapshot_stride = 10;
        p.config.escape_policy = EscapePolicy::record;
        p.config.write_snapshots = false;
        p.config.diagnostics = {"conserved", "scattering"};
        p.acceptance = "scattering-consistent";
        return p;
    };
    out.push_back(scatter("small-data-scatter", 0.05, "Amplitude 0.05, width 4 Gaussian, gaussian weight, p = 2, to T = 32."));
    out.push_back(scatter("moderate-scatter", 2.0, "Amplitude 2, width 4 Gaussian, gaussian weight, p = 2, to T = 32."));
    {
        ExperimentPreset p{"morawetz", "Width-8 Gaussian, gaussian weight, to T = 64 on a 384 box; Z-norm integral.",
                           base("morawetz"), {}, {}};
        p.config.n = 512;
        p.config.length = 384.0;
        p.config.initial = {"gaussian", {{"amplitude", 1.0}, {"width", 8.0}}};
        p.config.dt = 0.025;
        p.config.t_end = 64.0;
        p.config.snapshot_stride = 40;
        p.config.escape_policy = EscapePolicy::record;
        p.config.write_snapshots = false;
        p.config.diagnostics = {"conserved", "morawetz"};
        out.push_back(p);

        ExperimentPreset mat = p;
        mat.name = "morawetz-matrix";
        mat.description = "The morawetz preset over amplitude {0.5, 1, 2} x p {1, 2, 3}.";
        mat.config.output_dir = "out/morawetz-matrix";
        for (const char* pp : {"1", "2", "3"})
            for (const char* a : {"0.5", "1", "2"}) mat.matrix.push_back({{"amplitude", a}, {"p", pp}});
        mat.acceptance = "integral changes < 5% from T = 32 to 64; bounded by one constant times (M + E)";
        out.push_back(mat);
    }
    {
        ExperimentPreset p{"stability", "Gaussian plus a small offset bump; X-norm of the difference against ||delta||_{H^1}.",
                           base("stability"), {}, {}};
        p.config.initial = {"gaussian", {{"amplitude", 1.0}, {"width", 2.0}}};
        p.config.perturbation = InitialDataSpec{"gaussian", {{"amplitude", 0.01}, {"width", 2.0}, {"cx", 1.0}}};
        p.config.dt = 1e-2;
        p.config.t_end = 4.0;
        p.config.snapshot_stride = 5;
        p.config.escape_policy = EscapePolicy::record;
        p.config.write_snapshots = false;
        p.config.diagnostics = {"conserved", "perturbation"};
        out.push_back(p);
    }
    return out;
}

const ExperimentPreset& find_preset(const std::string& name) {
    static const std::vector<ExperimentPreset> catalog = preset_catalog();
    for (const auto& p : catalog)
        if (p.name == name) return p;
    throw ValidationError("unknown preset '" + name + "'");
}

RunManifest run_preset(const std::string& name, const std::vector<std::pair<std::string, std::string>>& overrides) {
    const ExperimentPreset& preset = find_preset(name);
    RunConfig cfg = preset.config;
    apply_output_env(cfg);
    for (const auto& [k, v] : overrides) apply_override(cfg, k, v);
    if (preset.matrix.empty()) return execute_run(cfg, name);

    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = resolve_output(cfg);
    fs::create_directories(dir);
    RunManifest top;
    top.preset = name;
    top.artifact_version = artifact_version();
    RunConfig shown = cfg;
    shown.output_dir = dir.generic_string();
    top.config_json = to_json(shown);
    top.config_hash = config_hash(shown);
    top.directory = dir;

    Csv csv({"cell", "amplitude", "p", "mass_plus_energy", "integral_half", "integral", "relative_change", "ratio"});
    double worst_ratio = 0.0, worst_change = 0.0;
    for (std::size_t i = 0; i < preset.matrix.size(); ++i) {
        RunConfig cell = cfg;
        for (const auto& [k, v] : preset.matrix[i]) apply_override(cell, k, v);
        char sub[32];
        std::snprintf(sub, sizeof sub, "cell_%02zu", i);
        cell.output_dir = (dir / sub).generic_string();
        const RunManifest cm = execute_run(cell, name);
        top.children.push_back(sub);
        const double amp = cell.initial.params.count("amplitude") ? cell.initial.params.at("amplitude") : 1.0;
        auto sc = [&](const char* k) { return cm.scalars.count(k) ? cm.scalars.at(k) : NAN; };
        csv.row({static_cast<double>(i), amp, Power::parse(cell.p).to_double(), sc("mass_plus_energy"),
                 sc("morawetz_integral_half"), sc("morawetz_integral"), sc("morawetz_relative_change"),
                 sc("morawetz_ratio")});
        worst_ratio = std::max(worst_ratio, sc("morawetz_ratio"));
        worst_change = std::max(worst_change, std::abs(sc("morawetz_relative_change")));
    }
    emit(top, dir, "matrix.csv", csv.str());
    top.scalars["max_morawetz_ratio"] = worst_ratio;
    top.scalars["max_relative_change"] = worst_change;
    top.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    finish_manifest(top, dir);
    return top;
}

std::vector<SweepEntry> sweep(const std::string& preset, const std::string& axis, const std::vector<double>& values,
                              const std::vector<std::pair<std::string, std::string>>& overrides, unsigned workers) {
    static const std::map<std::string, std::string> axes{
        {"dt", "dt"}, {"amplitude", "amplitude"}, {"p", "p"}, {"L", "L"}, {"n", "n"}};
    const auto ax = axes.find(axis);
    if (ax == axes.end()) throw ValidationError("sweep axis must be one of dt, amplitude, p, L, n");
    const ExperimentPreset& pr = find_preset(preset);
    if (!pr.matrix.empty()) throw ValidationError("cannot sweep a batch preset");
    std::vector<SweepEntry> out(values.size());
    if (values.empty()) return out;

    RunConfig base = pr.config;
    apply_output_env(base);
    for (const auto& [k, v] : overrides) apply_override(base, k, v);
    const fs::path root = resolve_output(base) / ("sweep_" + axis);

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            SweepEntry& e = out[i];
            e.value = values[i];
            try {
                RunConfig c = base;
                apply_override(c, ax->second, num(values[i]));
                char sub[32];
                std::snprintf(sub, sizeof sub, "run_%03zu", i);
                c.output_dir = (root / sub).generic_string();
                e.manifest = execute_run(c, preset);
            } catch (const NumericalAbort& ex) {
                std::lock_guard lk(log_mutex);
                e.error = ex.what();
                e.exit_code = 3;
            } catch (const std::exception& ex) {
                std::lock_guard lk(log_mutex);
                e.error = ex.what();
                e.exit_code = 2;
            }
        }
    };
    const unsigned n = std::max(1u, workers ? workers : std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::min<std::size_t>(n, values.size()); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Csv csv({"value", "status", "exit_code", "max_mass_drift", "max_energy_drift", "plane_wave_error",
             "ratio_to_previous", "error"});
    double prev = NAN;
    for (const auto& e : out) {
        auto sc = [&](const char* k) {
            return e.manifest && e.manifest->scalars.count(k) ? e.manifest->scalars.at(k) : NAN;
        };
        double err = sc("plane_wave_error");
        if (std::isnan(err)) err = sc("max_energy_drift");
        const double ratio = prev / err;
        std::string msg = e.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        csv.raw(num(e.value) + "," + (e.manifest ? "ok" : "failed") + "," + std::to_string(e.exit_code) + "," +
                num(sc("max_mass_drift")) + "," + num(sc("max_energy_drift")) + "," + num(sc("plane_wave_error")) +
                "," + num(ratio) + "," + msg);
        prev = err;
    }
    write_text(root / "sweep.csv", csv.str());
    return out;
}

}  // namespace inls
