#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "lensconf/confspaces/pipeline.hpp"

namespace lensconf::cli {

using json = nlohmann::ordered_json;
using confspaces::Claim;
using confspaces::PipelineReport;
using confspaces::Section;

enum ExitCode { exit_ok = 0, exit_mismatch = 1, exit_budget = 2, exit_input = 3 };

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string const& data, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

inline std::string read_file(std::filesystem::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + p.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string utc_timestamp()
{
    std::time_t const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

/// Deterministic part of a report: everything except the "run" block.
inline json report_json(std::string const& command,
                        json const& invocation,
                        PipelineReport const& r,
                        int exit_code,
                        std::string const& message)
{
    json out;
    out["tool"] = "lensconf";
    out["format"] = 1;
    out["command"] = command;
    out["invocation"] = invocation;
    out["seed"] = r.seed;
    out["budget"] = r.budget;
    for (Section s : confspaces::all_sections) {
        json arr = json::array();
        for (auto const& c : r.section(s))
            arr.push_back({{"key", c.key}, {"value", c.value}, {"evidence", c.evidence}});
        out[confspaces::section_name(s)] = arr;
    }
    out["budget_flags"] = r.budget_flags;
    out["outcome"] = {{"passed", exit_code == exit_ok}, {"exit_code", exit_code}, {"message", message}};
    return out;
}

inline json run_block(PipelineReport const& r, std::string const& cache, double seconds)
{
    json t = json::object();
    for (auto const& [name, s] : r.timings)
        t[name] = s;
    t["total"] = seconds;
    return {{"timestamp", utc_timestamp()}, {"cache", cache}, {"timings", t}};
}

inline std::string indent_value(std::string const& v)
{
    std::string out;
    for (char c : v) {
        out += c;
        if (c == '\n')
            out += "      ";
    }
    while (!out.empty() && (out.back() == ' ' || out.back() == '\n'))
        out.pop_back();
    return out;
}

/// Human-readable rendering of a report.
inline std::string render_summary(json const& report)
{
    std::ostringstream s;
    s << "lensconf " << report["command"].get<std::string>() << "  seed=" << report["seed"].get<std::uint64_t>()
      << "  budget=" << report["budget"].get<std::uint64_t>() << "\n";
    for (Section sec : confspaces::all_sections) {
        auto const& arr = report[confspaces::section_name(sec)];
        if (arr.empty())
            continue;
        s << "[" << confspaces::section_name(sec) << "]\n";
        for (auto const& c : arr) {
            std::string const v = c["value"].get<std::string>();
            if (v.find('\n') != std::string::npos)
                s << "  " << c["key"].get<std::string>() << ":  (" << c["evidence"].get<std::string>() << ")\n      "
                  << indent_value(v) << "\n";
            else
                s << "  " << c["key"].get<std::string>() << ": " << v << "  (" << c["evidence"].get<std::string>()
                  << ")\n";
        }
    }
    for (auto const& f : report["budget_flags"])
        s << "budget: " << f.get<std::string>() << "\n";
    auto const& o = report["outcome"];
    s << "outcome: " << (o["passed"].get<bool>() ? "PASS" : "FAIL") << " (exit " << o["exit_code"].get<int>() << ")";
    if (!o["message"].get<std::string>().empty())
        s << " " << o["message"].get<std::string>();
    s << "\n";
    if (report.contains("run")) {
        auto const& run = report["run"];
        s << "run: " << run["timestamp"].get<std::string>() << " cache=" << run["cache"].get<std::string>();
        for (auto const& [k, v] : run["timings"].items()) {
            std::ostringstream t;
            t << std::fixed << std::setprecision(3) << v.get<double>();
            s << " " << k << "=" << t.str() << "s";
        }
        s << "\n";
    }
    return s.str();
}

/// Reports stored by content hash of the invocation and its input files.
class Cache
{
public:
    Cache(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled && !dir_.empty()) {}

    bool enabled() const { return enabled_; }

    static std::string key(std::string const& command, json const& invocation, std::string const& inputs)
    {
        return hex64(fnv1a(inputs, fnv1a("lensconf-cache-1\n" + command + "\n" + invocation.dump() + "\n")));
    }

    std::optional<json> load(std::string const& k) const
    {
        if (!enabled_)
            return std::nullopt;
        std::ifstream in(dir_ / (k + ".json"));
        if (!in)
            return std::nullopt;
        try {
            return json::parse(in);
        } catch (json::exception const&) {
            return std::nullopt; // a corrupt entry is recomputed
        }
    }

    void store(std::string const& k, json const& report) const
    {
        if (!enabled_)
            return;
        std::filesystem::create_directories(dir_);
        auto const tmp = dir_ / (k + ".json.tmp");
        {
            std::ofstream out(tmp);
            out << report.dump(2) << "\n";
        }
        std::filesystem::rename(tmp, dir_ / (k + ".json"));
    }

private:
    std::filesystem::path dir_;
    bool enabled_;
};

} // namespace lensconf::cli
