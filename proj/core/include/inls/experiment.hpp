#pragma once

#include "inls/field.hpp"
#include "inls/initial_data.hpp"
#include "inls/solver.hpp"
#include "inls/weights.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inls {

inline constexpr int kSchemaVersion = 1;
std::string artifact_version();

/// Everything a run needs; round-trips through the JSON config format.
struct RunConfig {
    int n = 256;
    double length = 64.0;
    double dt = 1e-2;
    double t_end = 1.0;
    int snapshot_stride = 10;
    std::string p = "2";
    WeightSpec weight{"gaussian", {}};
    InitialDataSpec initial{"gaussian", {{"amplitude", 1.0}, {"width", 1.0}}};
    std::optional<InitialDataSpec> perturbation;  ///< used by the "perturbation" diagnostic

    EscapePolicy escape_policy = EscapePolicy::abort;
    double escape_threshold = 1e-8;
    double resolution_threshold = 1e-8;
    double blowup_factor = 1e3;
    bool waive_admissibility = false;

    std::vector<std::string> diagnostics{"conserved"};  ///< conserved, morawetz, scattering, duhamel, perturbation
    bool write_snapshots = true;
    std::string output_dir = "out";
};

/// Parses the JSON config text. A run manifest is accepted too (its
/// embedded config is used). Throws ValidationError on unknown keys.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string to_json(const RunConfig& cfg);  ///< canonical form (sorted keys)
std::string config_hash(const RunConfig& cfg);  ///< SHA-256 of the canonical form, output_dir excluded

SolverConfig to_solver_config(const RunConfig& cfg);

/// INLS_OUTPUT_DIR, when set, replaces cfg.output_dir. The only environment
/// variable the library reads.
void apply_output_env(RunConfig& cfg);

/// key=value overrides: dt, t_end, stride, n, L, p, amplitude, width,
/// weight, weight.<param>, initial, initial.<param>, escape_policy,
/// escape_threshold, resolution_threshold, blowup_factor,
/// diagnostics (comma list), write_snapshots, output_dir.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& items);

struct OutputFile {
    std::string path;  ///< relative to the run directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string preset;
    std::string artifact_version;
    std::string config_json;
    std::string config_hash;
    std::string status = "ok";
    RunMonitors monitors;
    std::map<std::string, double> scalars;       ///< diagnostic summary values
    std::map<std::string, std::string> labels;   ///< verdicts and notes
    std::vector<OutputFile> files;
    std::vector<std::string> children;           ///< sub-run directories (matrix presets)
    std::filesystem::path directory;
    double wall_seconds = 0.0;
};

struct ExperimentPreset {
    std::string name;
    std::string description;
    RunConfig config;
    /// Non-empty for batch presets: one override set per cell.
    std::vector<std::vector<std::pair<std::string, std::string>>> matrix;
    std::optional<std::string> acceptance;  ///< expected outcome, free text
};

std::vector<ExperimentPreset> preset_catalog();
const ExperimentPreset& find_preset(const std::string& name);

/// Runs the solver and the selected diagnostics, writes CSV series,
/// summary.json and manifest.json under cfg.output_dir. Throws
/// NumericalAbort / ValidationError.
RunManifest execute_run(const RunConfig& cfg, const std::string& preset = "");

RunManifest run_preset(const std::string& name, const std::vector<std::pair<std::string, std::string>>& overrides);

struct SweepEntry {
    double value = 0.0;
    std::optional<RunManifest> manifest;
    std::string error;
    int exit_code = 0;
};

/// Independent runs along one axis (dt, amplitude, p, L, n), executed on a
/// worker pool; failures are recorded and the sweep continues. Writes
/// sweep.csv in the base output directory when values is non-empty.
std::vector<SweepEntry> sweep(const std::string& preset, const std::string& axis, const std::vector<double>& values,
                              const std::vector<std::pair<std::string, std::string>>& overrides = {},
                              unsigned workers = 0);

std::string manifest_to_json(const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

/// Every listed file exists with the recorded checksum.
bool verify_manifest(const std::filesystem::path& manifest_path, std::vector<std::string>* problems = nullptr);

struct ReproductionReport {
    bool identical = false;
    std::vector<std::string> compared;    ///< CSV files compared
    std::vector<std::string> mismatched;
    RunManifest rerun;
};

/// Re-executes the manifest's config into out_dir and compares CSV checksums.
ReproductionReport reproduce_manifest(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir);

/// Exact plane-wave solution error at t_end when the initial data is a
/// lattice plane wave and the weight is constant or zero.
std::optional<double> plane_wave_error(const RunConfig& cfg, const Field& u_end);

}  // namespace inls
