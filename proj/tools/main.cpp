// inls: command-line front end for the inhomogeneous NLS toolkit.

#include "svg.hpp"

#include "inls/diagnostics.hpp"
#include "inls/errors.hpp"
#include "inls/experiment.hpp"
#include "inls/field.hpp"
#include "inls/geometry.hpp"
#include "inls/scaling.hpp"
#include "inls/trajectory.hpp"
#include "inls/weights.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAbort = 3;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw inls::ValidationError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        inls::write_text(out, text);
    }
}

std::string ext_str(const inls::ExtRational& x) { return x.is_infinite() ? "inf" : x.str(); }

// ---- exponents -------------------------------------------------------------

int cmd_exponents(const std::string& p_text, const std::string& format) {
    const inls::Power p = inls::Power::parse(p_text);
    const inls::ExponentProfile e = inls::exponent_profile(p);
    const inls::IdentityReport rep = inls::verify_identities(p);

    if (format == "table" || format == "both") {
        std::printf("%-6s %-14s %s\n", "name", "exact", "value");
        auto row = [](const char* n, const std::string& exact, double v) {
            std::printf("%-6s %-14s %.15g\n", n, exact.c_str(), v);
        };
        row("p", p.str(), p.to_double());
        row("rho", ext_str(e.rho), e.rho.to_double());
        row("s", e.s.get_str(), e.s.get_d());
        row("q", e.q.get_str(), e.q.get_d());
        row("r", e.r.get_str(), e.r.get_d());
        row("alpha", e.alpha.get_str(), e.alpha.get_d());
        row("beta", e.beta.get_str(), e.beta.get_d());
        for (const auto& c : rep.checks)
            std::printf("  [%s] %s %s\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
    if (format == "json" || format == "both") {
        json j;
        j["schema_version"] = inls::kSchemaVersion;
        j["p"] = p.str();
        auto entry = [](const std::string& exact, double v) { return json{{"exact", exact}, {"value", finite_or_null(v)}}; };
        j["rho"] = entry(ext_str(e.rho), e.rho.to_double());
        j["s"] = entry(e.s.get_str(), e.s.get_d());
        j["q"] = entry(e.q.get_str(), e.q.get_d());
        j["r"] = entry(e.r.get_str(), e.r.get_d());
        j["alpha"] = entry(e.alpha.get_str(), e.alpha.get_d());
        j["beta"] = entry(e.beta.get_str(), e.beta.get_d());
        json checks = json::array();
        for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        j["identities"] = checks;
        j["all_pass"] = rep.all_pass();
        std::cout << j.dump(2) << "\n";
    }
    return rep.all_pass() ? kExitOk : kExitValidation;
}

// ---- weights ---------------------------------------------------------------

inls::Weight load_weight(const std::string& name_or_file) {
    if (fs::is_regular_file(name_or_file)) {
        json j;
        try {
            j = json::parse(read_file(name_or_file));
        } catch (const json::exception& e) {
            throw inls::ValidationError(name_or_file + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("family")) throw inls::ValidationError(name_or_file + ": missing \"family\"");
        inls::WeightSpec spec;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "family") {
                spec.family = it.value().get<std::string>();
            } else if (it.key() == "params") {
                for (auto pit = it.value().begin(); pit != it.value().end(); ++pit)
                    spec.params[pit.key()] = pit.value().get<double>();
            } else if (it.key() != "schema_version") {
                throw inls::ValidationError(name_or_file + ": unknown key \"" + it.key() + "\"");
            }
        }
        return inls::make_weight(spec);
    }
    return inls::catalog_weight(name_or_file);
}

json sign_json(const inls::SignCheck& s) {
    json j{{"verdict", inls::to_string(s.verdict)}, {"extreme", finite_or_null(s.extreme)}};
    j["witness"] = s.witness ? json{s.witness->x, s.witness->y} : json(nullptr);
    return j;
}

int cmd_weight_check(const std::string& weight, const std::string& p_text, const std::string& out) {
    const inls::Weight w = load_weight(weight);
    const inls::Power p = inls::Power::parse(p_text);
    const inls::AdmissibilityReport rep = inls::check_admissible(w, p, inls::SamplingConfig{});

    json j;
    j["schema_version"] = inls::kSchemaVersion;
    j["weight"] = rep.label;
    j["family"] = w.spec.family;
    j["params"] = w.spec.params;
    j["p"] = rep.p;
    j["nonnegative"] = sign_json(rep.nonnegative);
    j["repulsive"] = sign_json(rep.repulsive);
    json integ = json::array();
    for (const auto& c : rep.integrability) {
        json e{{"space", c.space}, {"target", c.target}, {"verdict", inls::to_string(c.verdict)}, {"detail", c.detail}};
        json est = json::array();
        for (double v : c.estimates) est.push_back(finite_or_null(v));
        e["radii"] = c.radii;
        e["estimates"] = est;
        integ.push_back(e);
    }
    j["integrability"] = integ;
    j["atilde_continuous"] = inls::to_string(rep.atilde_continuous);
    j["modulus_estimate"] = rep.modulus_estimate;
    j["modulus_estimate_fine"] = rep.modulus_estimate_fine;
    j["grid_points_per_side"] = rep.grid_points_per_side;
    j["grid_extent"] = rep.grid_extent;
    j["admissible"] = rep.overall;
    emit(j, out);
    return rep.overall ? kExitOk : kExitValidation;
}

// ---- run / sweep / presets -------------------------------------------------

void set_fast(bool fast) { inls::set_fft_mode(fast ? inls::FftMode::fast : inls::FftMode::deterministic); }

int cmd_run(const std::string& config, const std::string& preset, const std::vector<std::string>& sets,
            const std::string& out, bool fast) {
    if (config.empty() == preset.empty()) throw inls::ValidationError("give exactly one of --config, --preset");
    set_fast(fast);
    auto overrides = inls::parse_overrides(sets);
    if (!out.empty()) overrides.emplace_back("output_dir", out);

    inls::RunManifest m;
    if (!preset.empty()) {
        m = inls::run_preset(preset, overrides);
    } else {
        inls::RunConfig cfg = inls::load_run_config(config);
        for (const auto& [k, v] : overrides) inls::apply_override(cfg, k, v);
        if (out.empty()) inls::apply_output_env(cfg);
        m = inls::execute_run(cfg);
    }
    json summary;
    summary["schema_version"] = inls::kSchemaVersion;
    summary["status"] = m.status;
    summary["directory"] = m.directory.string();
    summary["config_hash"] = m.config_hash;
    json scal = json::object();
    for (const auto& [k, v] : m.scalars) scal[k] = finite_or_null(v);
    summary["scalars"] = scal;
    summary["labels"] = m.labels;
    summary["children"] = m.children;
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        const double x = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') throw inls::ValidationError("bad sweep value \"" + item + "\"");
        v.push_back(x);
    }
    return v;
}

int cmd_sweep(const std::string& preset, const std::string& axis, const std::string& values,
              const std::vector<std::string>& sets, const std::string& out, unsigned workers, bool fast) {
    set_fast(fast);
    auto overrides = inls::parse_overrides(sets);
    if (!out.empty()) overrides.emplace_back("output_dir", out);
    const auto entries = inls::sweep(preset, axis, parse_values(values), overrides, workers);

    json j;
    j["schema_version"] = inls::kSchemaVersion;
    j["preset"] = preset;
    j["axis"] = axis;
    json rows = json::array();
    for (const auto& e : entries) {
        json r{{"value", e.value}, {"exit_code", e.exit_code}};
        if (e.manifest) {
            r["directory"] = e.manifest->directory.string();
            json scal = json::object();
            for (const auto& [k, v] : e.manifest->scalars) scal[k] = finite_or_null(v);
            r["scalars"] = scal;
        } else {
            r["error"] = e.error;
        }
        rows.push_back(r);
    }
    j["runs"] = rows;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_preset_list(bool as_json) {
    const auto& catalog = inls::preset_catalog();
    if (as_json) {
        json j;
        j["schema_version"] = inls::kSchemaVersion;
        json arr = json::array();
        for (const auto& p : catalog) {
            json e{{"name", p.name}, {"description", p.description}, {"cells", p.matrix.size()}};
            e["acceptance"] = p.acceptance ? json(*p.acceptance) : json(nullptr);
            e["config"] = json::parse(inls::to_json(p.config));
            arr.push_back(e);
        }
        j["presets"] = arr;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& p : catalog) std::printf("%-20s %s\n", p.name.c_str(), p.description.c_str());
    }
    return kExitOk;
}

int cmd_verify(const std::string& manifest) {
    std::vector<std::string> problems;
    const bool ok = inls::verify_manifest(manifest, &problems);
    json j{{"schema_version", inls::kSchemaVersion}, {"manifest", manifest}, {"ok", ok}, {"problems", problems}};
    std::cout << j.dump(2) << "\n";
    return ok ? kExitOk : kExitValidation;
}

int cmd_reproduce(const std::string& manifest, const std::string& out) {
    const auto rep = inls::reproduce_manifest(manifest, out);
    json j{{"schema_version", inls::kSchemaVersion}, {"manifest", manifest}, {"identical", rep.identical},
           {"compared", rep.compared}, {"mismatched", rep.mismatched}, {"directory", rep.rerun.directory.string()}};
    std::cout << j.dump(2) << "\n";
    return rep.identical ? kExitOk : kExitValidation;
}

// ---- diagnose --------------------------------------------------------------

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& cols) {
    std::ostringstream o;
    for (std::size_t c = 0; c < header.size(); ++c) o << (c ? "," : "") << header[c];
    o << "\n";
    const std::size_t rows = cols.empty() ? 0 : cols.front().size();
    char buf[40];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", cols[c][r]);
            o << (c ? "," : "") << buf;
        }
        o << "\n";
    }
    inls::write_text(path, o.str());
}

int cmd_diagnose(const std::string& traj_dir, bool want_conserved, bool want_morawetz, bool want_scattering,
                 const std::string& out) {
    if (!want_conserved && !want_morawetz && !want_scattering) want_conserved = true;
    const inls::Trajectory traj = inls::read_trajectory(traj_dir);
    const fs::path dir = out.empty() ? fs::path(traj_dir) / "diagnostics" : fs::path(out);
    fs::create_directories(dir);

    json j;
    j["schema_version"] = inls::kSchemaVersion;
    j["trajectory"] = traj_dir;
    j["snapshots"] = traj.size();
    j["p"] = traj.meta().p;
    j["weight"] = traj.meta().weight_label;
    if (want_conserved) {
        const auto c = inls::conserved(traj);
        write_csv(dir / "conserved.csv", {"t", "mass", "kinetic", "potential", "energy"},
                  {c.times, c.mass, c.kinetic, c.potential, c.energy});
        j["conserved"] = {{"mass0", c.mass.front()},
                          {"energy0", c.energy.front()},
                          {"max_mass_drift", c.max_mass_drift()},
                          {"max_energy_drift", c.max_energy_drift()},
                          {"csv", "conserved.csv"}};
    }
    if (want_morawetz) {
        const auto m = inls::morawetz(traj);
        write_csv(dir / "morawetz.csv", {"t", "z_norm_sq", "running_integral"}, {m.times, m.z_norm_sq, m.running});
        j["morawetz"] = {{"integral", m.integral}, {"infimum", m.infimum}, {"csv", "morawetz.csv"}};
    }
    if (want_scattering) {
        const auto s = inls::scattering_probe(traj);
        write_csv(dir / "scattering.csv", {"t", "potential_energy"}, {s.times, s.potential_energy});
        std::vector<double> drift(s.dyadic_times.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < s.pullback_drift.size() && k + 1 < drift.size(); ++k) drift[k + 1] = s.pullback_drift[k];
        std::vector<double> xacc = s.x_norm_accumulation;
        xacc.resize(s.dyadic_times.size(), std::numeric_limits<double>::quiet_NaN());
        write_csv(dir / "scattering_dyadic.csv", {"t", "pullback_drift", "x_norm"}, {s.dyadic_times, drift, xacc});
        j["scattering"] = {{"verdict", inls::to_string(s.verdict)},
                           {"potential_decay", finite_or_null(s.potential_decay)},
                           {"drift_monotone", s.drift_monotone},
                           {"detail", s.detail},
                           {"csv", {"scattering.csv", "scattering_dyadic.csv"}}};
    }
    const std::string text = j.dump(2) + "\n";
    inls::write_text(dir / "summary.json", text);
    std::cout << text;
    return kExitOk;
}

// ---- plot ------------------------------------------------------------------

int cmd_plot(const std::string& csv, const std::string& x, const std::vector<std::string>& ys, bool logx, bool logy,
             const std::string& title, const std::string& out) {
    const auto [names, cols] = inls::tools::read_csv(csv);
    auto column = [&](const std::string& name) -> const std::vector<double>& {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return cols[i];
        throw inls::ValidationError("no column \"" + name + "\" in " + csv);
    };
    const std::string xname = x.empty() ? names.front() : x;
    std::vector<std::string> ycols = ys;
    if (ycols.empty())
        for (const auto& n : names)
            if (n != xname) ycols.push_back(n);
    std::vector<inls::tools::Series> series;
    for (const auto& y : ycols) series.push_back({y, column(xname), column(y)});
    inls::tools::PlotOptions opt;
    opt.title = title.empty() ? fs::path(csv).filename().string() : title;
    opt.xlabel = xname;
    opt.ylabel = ycols.size() == 1 ? ycols.front() : "";
    opt.logx = logx;
    opt.logy = logy;
    inls::write_text(out, inls::tools::line_chart(series, opt));
    return kExitOk;
}

// ---- cutoffs ---------------------------------------------------------------

struct Schedule {
    inls::TranslationSequence seq{1, {{1.0, 0.0}}, 0.0};
    std::vector<int> n_list;
};

Schedule load_schedule(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw inls::ValidationError(path + ": " + e.what());
    }
    try {
        const double theta_inf = j.value("theta_inf", 0.0);
        Schedule s;
        if (j.contains("centers")) {
            std::vector<inls::PolarPoint> pts;
            for (const auto& c : j.at("centers")) pts.push_back({c.at("r").get<double>(), c.at("theta").get<double>()});
            s.seq = inls::TranslationSequence(j.value("first", 1), pts, theta_inf);
        } else {
            const int first = j.at("first").get<int>(), last = j.at("last").get<int>();
            const auto& rad = j.at("radius");
            const double base = rad.value("base", 1.0), ratio = rad.value("ratio", 2.0);
            const auto& ang = j.at("angle");
            const std::string kind = ang.value("kind", "inverse");
            const double scale = ang.value("scale", 1.0), value = ang.value("value", 0.0);
            if (kind != "inverse" && kind != "constant") throw inls::ValidationError("angle.kind: inverse or constant");
            s.seq = inls::TranslationSequence::generate(
                first, last, [=](int n) { return base * std::pow(ratio, n); },
                [=](int n) { return kind == "inverse" ? theta_inf + scale / n : value; }, theta_inf);
        }
        if (j.contains("n_list")) {
            s.n_list = j.at("n_list").get<std::vector<int>>();
        } else {
            for (int n = s.seq.first_index(); n <= s.seq.last_index(); ++n) s.n_list.push_back(n);
        }
        return s;
    } catch (const json::exception& e) {
        throw inls::ValidationError(path + ": " + e.what());
    }
}

std::string region_plot(const inls::TriangularCutoff& c) {
    const double w = std::sin(c.omega()), tn = std::tan(c.omega());
    const double dt = w / 4.0;
    inls::tools::RegionPlot plot;
    plot.title = "n = " + std::to_string(c.index()) + ", omega = " + std::to_string(c.omega());
    // Scaled, rotated frame: T1 apex at (1/2, 0), T2 apex at (1/4, 0).
    const double far1 = 1.5, far2 = 1.5 + dt;
    plot.polygons.push_back({{{0.25, 0.0}, {far2, (far2 - 0.25) * tn}, {far2, -(far2 - 0.25) * tn}}, "#1f4e9a", "", ""});
    plot.polygons.push_back({{{0.5, 0.0}, {far1, (far1 - 0.5) * tn}, {far1, -(far1 - 0.5) * tn}}, "#b22222", "", ""});
    const double phi = c.theta() - c.theta_inf();
    const double cx = std::cos(phi), cy = std::sin(phi), m = 0.02;
    plot.polygons.push_back({{{cx - m, cy - m}, {cx + m, cy - m}, {cx + m, cy + m}, {cx - m, cy + m}}, "black", "black", ""});
    plot.polygons.push_back({{{-m, -m}, {m, -m}, {m, m}, {-m, m}}, "black", "white", ""});

    const double half = (far2 - 0.25) * tn + 0.1;
    plot.xmin = -0.1;
    plot.xmax = far2 + 0.1;
    plot.ymin = std::min(-half, cy - 0.1);
    plot.ymax = std::max(half, cy + 0.1);
    plot.nx = 240;
    plot.ny = static_cast<int>(std::ceil(plot.nx * (plot.ymax - plot.ymin) / (plot.xmax - plot.xmin)));
    plot.shade.resize(static_cast<std::size_t>(plot.nx) * plot.ny);
    for (int i = 0; i < plot.ny; ++i)
        for (int k = 0; k < plot.nx; ++k) {
            const inls::Vec2 xi{plot.xmin + (k + 0.5) * (plot.xmax - plot.xmin) / plot.nx,
                                plot.ymin + (i + 0.5) * (plot.ymax - plot.ymin) / plot.ny};
            plot.shade[static_cast<std::size_t>(i) * plot.nx + k] = c.eval_scaled(xi).value;
        }
    return inls::tools::region_chart(plot);
}

int cmd_cutoffs(const std::string& p_text, const std::string& weight, const std::string& schedule,
                const std::string& plot_dir, const std::string& out) {
    const inls::Power p = inls::Power::parse(p_text);
    const inls::Weight w = load_weight(weight);
    const Schedule s = load_schedule(schedule);
    const inls::AngularLimit lim = inls::estimate_angular_limit(w, inls::SamplingConfig{});
    const inls::CutoffReport rep = inls::verify_cutoff_properties(s.seq, p, w, lim, s.n_list);

    json j;
    j["schema_version"] = inls::kSchemaVersion;
    j["p"] = rep.p;
    j["weight"] = w.label;
    j["theta_inf"] = rep.theta_inf;
    j["atilde_limit"] = rep.atilde_limit;
    j["lebesgue_exponent"] = rep.lebesgue_exponent;
    j["below_threshold"] = rep.below_threshold;
    j["threshold_index"] = rep.threshold_index;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        entries.push_back({{"n", e.n},
                           {"r", e.r},
                           {"theta", e.theta},
                           {"omega", e.threshold.omega},
                           {"angle_branch", e.threshold.angle_branch},
                           {"gap", e.gap},
                           {"separation", e.separation},
                           {"separation_floor", e.separation_floor},
                           {"c1_min", e.c1_min},
                           {"c1", e.c1},
                           {"c2_sup", e.c2_sup},
                           {"c2", e.c2},
                           {"grad_norm", e.grad_norm},
                           {"lap_norm", e.lap_norm},
                           {"grad_scaled", e.grad_scaled},
                           {"lap_scaled", e.lap_scaled},
                           {"c3", e.c3},
                           {"sup_grad", e.sup_grad},
                           {"sup_lap", e.sup_lap},
                           {"area_exact", e.area_exact},
                           {"area_monte_carlo", e.area_monte_carlo},
                           {"area_constant", e.area_constant}});
    }
    j["entries"] = entries;
    j["grad_slope"] = finite_or_null(rep.grad_slope);
    j["grad_slope_target"] = rep.grad_slope_target;
    j["lap_slope"] = finite_or_null(rep.lap_slope);
    j["c1"] = rep.c1;
    j["c2"] = rep.c2;
    j["c3"] = rep.c3;
    j["slope_ok"] = rep.slope_ok;
    j["all_pass"] = rep.all_pass();

    if (!plot_dir.empty()) {
        fs::create_directories(plot_dir);
        json plots = json::array();
        for (const auto& e : rep.entries) {
            const inls::TriangularCutoff c(e.n, s.seq.polar(e.n), s.seq.limit_angle(), p.to_double());
            const fs::path file = fs::path(plot_dir) / ("cutoff_n" + std::to_string(e.n) + ".svg");
            inls::write_text(file, region_plot(c));
            plots.push_back(file.string());
        }
        j["plots"] = plots;
    }
    emit(j, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inhomogeneous NLS toolkit: exponents, weights, solver runs, diagnostics, cutoffs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", inls::artifact_version());

    std::string p_text, format = "both", weight, out, config, preset, traj, csv, xcol, title, schedule, plot_dir,
                        axis, values, manifest;
    std::vector<std::string> sets, ycols;
    bool fast = false, d_cons = false, d_mora = false, d_scat = false, logx = false, logy = false, as_json = false;
    unsigned workers = 0;

    auto* exps = app.add_subcommand("exponents", "exact exponent profile for a power p");
    exps->add_option("--p", p_text, "power, e.g. 3 or 3/2")->required();
    exps->add_option("--format", format)->check(CLI::IsMember({"table", "json", "both"}));

    auto* wc = app.add_subcommand("weight-check", "admissibility report for a weight");
    wc->add_option("--weight", weight, "catalog name or JSON file {family, params}")->required();
    wc->add_option("--p", p_text)->required();
    wc->add_option("--out", out, "write JSON here instead of stdout");

    auto* run = app.add_subcommand("run", "run a config file or a preset");
    run->add_option("--config", config);
    run->add_option("--preset", preset);
    run->add_option("--set", sets, "override key=value (repeatable)");
    run->add_option("--out", out, "output directory");
    run->add_flag("--fast", fast, "measured FFT plans; results may differ in the last bits");

    auto* diag = app.add_subcommand("diagnose", "diagnostics on a stored trajectory");
    diag->add_option("--traj", traj)->required();
    diag->add_flag("--conserved", d_cons);
    diag->add_flag("--morawetz", d_mora);
    diag->add_flag("--scattering", d_scat);
    diag->add_option("--out", out, "output directory (default <traj>/diagnostics)");

    auto* plot = app.add_subcommand("plot", "render CSV columns to SVG");
    plot->add_option("--csv", csv)->required();
    plot->add_option("--x", xcol);
    plot->add_option("--y", ycols);
    plot->add_flag("--logx", logx);
    plot->add_flag("--logy", logy);
    plot->add_option("--title", title);
    plot->add_option("--out", out)->required();

    auto* cut = app.add_subcommand("cutoffs", "verify triangular cutoffs along a translation schedule");
    cut->add_option("--p", p_text)->required();
    cut->add_option("--weight", weight)->required();
    cut->add_option("--schedule", schedule, "JSON schedule")->required();
    cut->add_option("--plot-dir", plot_dir, "write one region SVG per verified n");
    cut->add_option("--out", out);

    auto* sw = app.add_subcommand("sweep", "independent runs of a preset along one axis");
    sw->add_option("--preset", preset)->required();
    sw->add_option("--axis", axis)->required()->check(CLI::IsMember({"dt", "amplitude", "p", "L", "n"}));
    sw->add_option("--values", values, "comma list")->required();
    sw->add_option("--set", sets);
    sw->add_option("--out", out);
    sw->add_option("--workers", workers);
    sw->add_flag("--fast", fast);

    auto* pre = app.add_subcommand("preset", "preset catalog");
    pre->require_subcommand(1);
    auto* pre_list = pre->add_subcommand("list", "list presets");
    pre_list->add_flag("--json", as_json);

    auto* ver = app.add_subcommand("verify", "check a manifest's file checksums");
    ver->add_option("--manifest", manifest)->required();

    auto* rep = app.add_subcommand("reproduce", "re-run a manifest and compare CSV outputs");
    rep->add_option("--manifest", manifest)->required();
    rep->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*exps) return cmd_exponents(p_text, format);
        if (*wc) return cmd_weight_check(weight, p_text, out);
        if (*run) return cmd_run(config, preset, sets, out, fast);
        if (*diag) return cmd_diagnose(traj, d_cons, d_mora, d_scat, out);
        if (*plot) return cmd_plot(csv, xcol, ycols, logx, logy, title, out);
        if (*cut) return cmd_cutoffs(p_text, weight, schedule, plot_dir, out);
        if (*sw) return cmd_sweep(preset, axis, values, sets, out, workers, fast);
        if (*pre_list) return cmd_preset_list(as_json);
        if (*ver) return cmd_verify(manifest);
        if (*rep) return cmd_reproduce(manifest, out);
    } catch (const inls::NumericalAbort& e) {
        std::cerr << "numerical abort at step " << e.step() << ": " << e.what() << "\n";
        json j{{"schema_version", inls::kSchemaVersion}, {"status", "aborted"}, {"step", e.step()}, {"error", e.what()}};
        std::cout << j.dump(2) << "\n";
        return kExitAbort;
    } catch (const inls::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const inls::ThresholdError& e) {
        std::cerr << "threshold not reached: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
