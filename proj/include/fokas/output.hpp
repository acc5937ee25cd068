#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fokas {

inline constexpr const char* artifact_version = "1.0.0";

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits, so every value parses back to the same double.
inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::invalid_argument("Table::add: row width differs from header");
        rows.push_back(std::move(row));
    }

    std::string csv() const {
        std::string s;
        for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
        s += '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) s += ',';
                if (const double* d = std::get_if<double>(&r[i]))
                    s += fmt_real(*d);
                else if (const long long* n = std::get_if<long long>(&r[i]))
                    s += std::to_string(*n);
                else
                    s += std::get<std::string>(r[i]);
            }
            s += '\n';
        }
        return s;
    }
};

// Writes to a sibling temp file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw OutputError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw OutputError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Hash of the resolved config without the output location and seed, so the
// same physics lands under the same name wherever it is written.
inline std::string config_hash(nlohmann::ordered_json cfg) {
    cfg.erase("output");
    cfg.erase("seed");
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.dump())));
    return buf;
}

// Counter-based generator (SplitMix64): value i depends only on (seed, i).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    std::uint64_t state_;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

// Collects the files of one command run and writes the manifest last.
class RunOutput {
public:
    RunOutput(std::filesystem::path dir, std::string command, const nlohmann::ordered_json& config, std::uint64_t seed)
        : dir_(std::move(dir)), command_(std::move(command)), config_(config), seed_(seed), hash_(config_hash(config)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw OutputError("cannot create " + dir_.string() + ": " + ec.message());
    }

    const std::string& hash() const { return hash_; }
    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path path_for(const std::string& table, const std::string& ext) const {
        const std::string stem = table.empty() ? command_ : command_ + "-" + table;
        return dir_ / (stem + "_" + hash_ + ext);
    }

    std::filesystem::path csv(const Table& t, const std::string& table = "") {
        auto p = path_for(table, ".csv");
        write_atomic(p, t.csv());
        files_.push_back(p.filename().string());
        return p;
    }

    std::filesystem::path json(const nlohmann::ordered_json& j, const std::string& table) {
        auto p = path_for(table, ".json");
        write_atomic(p, j.dump(2) + "\n");
        files_.push_back(p.filename().string());
        return p;
    }

    void check(std::string name, bool pass, std::string detail = "") {
        checks_.push_back({std::move(name), pass, std::move(detail)});
    }
    bool all_pass() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return true;
    }
    const std::vector<CheckResult>& checks() const { return checks_; }

    void stage_time(const std::string& stage, double seconds) { timings_[stage] = seconds; }

    // Manifest holds no wall-clock data; timings go to their own file so
    // reruns stay byte-identical.
    void finish() {
        nlohmann::ordered_json m;
        m["command"] = command_;
        m["version"] = artifact_version;
        m["config_hash"] = hash_;
        m["seed"] = seed_;
        m["config"] = config_;
        m["files"] = files_;
        auto cs = nlohmann::ordered_json::array();
        for (const auto& c : checks_) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        m["checks"] = cs;
        m["pass"] = all_pass();
        write_atomic(dir_ / (command_ + "_" + hash_ + ".json"), m.dump(2) + "\n");
        write_atomic(dir_ / (command_ + "_" + hash_ + ".timing.json"), timings_.dump(2) + "\n");
    }

private:
    std::filesystem::path dir_;
    std::string command_;
    nlohmann::ordered_json config_;
    std::uint64_t seed_;
    std::string hash_;
    std::vector<std::string> files_;
    std::vector<CheckResult> checks_;
    nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
};

}  // namespace fokas
