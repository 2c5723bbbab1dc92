#include "inls/trajectory.hpp"

#include "inls/errors.hpp"
#include "inls/spectral.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace inls {

Trajectory::Trajectory(std::vector<double> times, std::vector<Field> snapshots, TrajectoryMeta meta)
    : times_(std::move(times)), snapshots_(std::move(snapshots)), meta_(std::move(meta)) {
    if (times_.empty() || times_.size() != snapshots_.size())
        throw ValidationError("trajectory needs one time per snapshot and at least one snapshot");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) throw ValidationError("trajectory times must increase strictly");
        if (!(snapshots_[k].grid() == snapshots_[0].grid()))
            throw ValidationError("trajectory snapshots must share one grid");
    }
}

std::vector<std::size_t> Trajectory::window(double t0, double t1) const {
    const double tol = 1e-9 * std::max({1.0, std::abs(t0), std::abs(t1)});
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < times_.size(); ++k)
        if (times_[k] >= t0 - tol && times_[k] <= t1 + tol) idx.push_back(k);
    return idx;
}

std::size_t Trajectory::index_at(double t, double tol) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < times_.size(); ++k)
        if (std::abs(times_[k] - t) < std::abs(times_[best] - t)) best = k;
    if (std::abs(times_[best] - t) > tol)
        throw ValidationError("trajectory has no snapshot near t = " + std::to_string(t));
    return best;
}

double time_lebesgue(const std::vector<double>& times, const std::vector<double>& spatial, double exponent) {
    if (times.size() != spatial.size() || times.size() < 2)
        throw ValidationError("time quadrature needs at least two samples");
    if (std::isinf(exponent)) {
        double m = 0.0;
        for (double v : spatial) m = std::max(m, v);
        return m;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double a = std::pow(spatial[k], exponent);
        const double b = std::pow(spatial[k + 1], exponent);
        acc += 0.5 * (times[k + 1] - times[k]) * (a + b);
    }
    return std::pow(acc, 1.0 / exponent);
}

double spacetime_norm(const Trajectory& traj, const NormSpec& spec, double min_density) {
    if (!(spec.time_exponent >= 1.0) || !(spec.space_exponent >= 1.0))
        throw ValidationError("space-time exponents must be >= 1");
    if (!(spec.t1 > spec.t0)) throw ValidationError("empty time interval");
    const auto idx = traj.window(spec.t0, spec.t1);
    if (idx.size() < 2) throw ValidationError("space-time norm needs at least two snapshots in the interval");
    const double max_gap = (1.0 / min_density) * (1.0 + 1e-9);
    std::vector<double> t, s;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0 && traj.times()[idx[k]] - traj.times()[idx[k - 1]] > max_gap)
            throw ValidationError("snapshot spacing too coarse for space-time quadrature");
        t.push_back(traj.times()[idx[k]]);
        s.push_back(lebesgue_norm(traj.snapshots()[idx[k]], spec.space_exponent));
    }
    return time_lebesgue(t, s, spec.time_exponent);
}

double x_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1, double min_density) {
    return spacetime_norm(traj, {e.q.get_d(), e.r.get_d(), t0, t1}, min_density);
}

double y_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1, double min_density) {
    return spacetime_norm(traj, {e.alpha.get_d(), e.beta.get_d(), t0, t1}, min_density);
}

double xprime_norm(const Trajectory& traj, const ExponentProfile& e, double t0, double t1, double min_density) {
    return spacetime_norm(traj, {e.q.get_d() / 2.0, e.r.get_d() / 2.0, t0, t1}, min_density);
}

namespace {

constexpr char kMagic[8] = {'I', 'N', 'L', 'S', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

class Reader {
public:
    explicit Reader(std::string data) : data_(std::move(data)) {}
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw ValidationError("truncated snapshot file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    std::string data_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SnapshotRecord& rec) {
    const Grid& g = rec.field.grid();
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(g.n()));
    put_f64(out, g.length());
    put_f64(out, rec.time);
    put_str(out, rec.p);
    put_str(out, rec.weight_label);
    auto v = rec.field.values();
    put_u64(out, v.size());
    out.reserve(out.size() + 16 * v.size());
    for (const auto& z : v) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw ValidationError("short write to " + path.string());
}

SnapshotRecord read_snapshot(const std::filesystem::path& path) {
    Reader r(slurp(path));
    if (r.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic))
        throw ValidationError(path.string() + " is not a snapshot file");
    if (r.u32() != kVersion) throw ValidationError("unsupported snapshot version in " + path.string());
    const int n = static_cast<int>(r.u32());
    const double length = r.f64();
    const double time = r.f64();
    std::string p = r.str();
    std::string label = r.str();
    const Grid grid(n, length);
    const std::uint64_t count = r.u64();
    if (count != grid.size()) throw ValidationError("snapshot sample count does not match n");
    std::vector<cplx> v(count);
    for (auto& z : v) {
        const double re = r.f64();
        const double im = r.f64();
        z = {re, im};
    }
    if (!r.done()) throw ValidationError("trailing bytes in " + path.string());
    return {Field(grid, std::move(v)), time, std::move(p), std::move(label)};
}

namespace {

std::string hex_double(double v) {
    std::ostringstream os;
    os << std::hexfloat << v;
    return os.str();
}

double parse_hex_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["n"] = traj.grid().n();
    j["length"] = traj.grid().length();
    j["p"] = traj.meta().p;
    j["weight"] = {{"family", traj.meta().weight.family}, {"params", traj.meta().weight.params}};
    j["weight_label"] = traj.meta().weight_label;
    j["solver"] = traj.meta().solver;
    auto& snaps = j["snapshots"] = nlohmann::json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(6) << std::setfill('0') << k << ".bin";
        write_snapshot(dir / name.str(),
                       {traj.snapshots()[k], traj.times()[k], traj.meta().p, traj.meta().weight_label});
        snaps.push_back({{"file", name.str()}, {"time", traj.times()[k]}, {"time_hex", hex_double(traj.times()[k])}});
    }
    std::ofstream out(dir / "trajectory.json");
    out << j.dump(2) << "\n";
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
    std::ifstream in(dir / "trajectory.json");
    if (!in) throw ValidationError("no trajectory.json in " + dir.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed trajectory.json: ") + e.what());
    }
    TrajectoryMeta meta;
    meta.p = j.at("p").get<std::string>();
    meta.weight.family = j.at("weight").at("family").get<std::string>();
    meta.weight.params = j.at("weight").at("params").get<std::map<std::string, double>>();
    meta.weight_label = j.value("weight_label", meta.weight.family);
    meta.solver = j.value("solver", std::map<std::string, std::string>{});
    std::vector<double> times;
    std::vector<Field> fields;
    for (const auto& s : j.at("snapshots")) {
        SnapshotRecord rec = read_snapshot(dir / s.at("file").get<std::string>());
        const double t = s.contains("time_hex") ? parse_hex_double(s["time_hex"].get<std::string>()) : rec.time;
        times.push_back(t);
        fields.push_back(std::move(rec.field));
    }
    return Trajectory(std::move(times), std::move(fields), std::move(meta));
}

}  // namespace inls
