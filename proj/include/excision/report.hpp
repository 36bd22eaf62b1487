#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "excision/montecarlo.hpp"
#include "excision/path.hpp"
#include "excision/transforms.hpp"

namespace excision {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Shortest round-trip decimal for a double.
inline std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// {version, seed, config_hash}; the hash covers a canonical config string.
inline Json provenance(std::uint64_t seed, std::string_view canonical_config)
{
    Json j;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["config_hash"] = hex64(fnv1a(canonical_config));
    return j;
}

// Worker count is deliberately absent: reports must not depend on it.
inline std::string canonical(const VerifyConfig& c, std::string_view identity = {})
{
    return std::string(identity) + ";seed=" + std::to_string(c.seed) + ";reps=" + std::to_string(c.reps) +
           ";grid=" + std::to_string(c.grid) + ";x=" + fmt17(c.x) + ";eps=" + fmt17(c.refine.epsilon) +
           ";depth=" + std::to_string(c.refine.max_depth) + ";watch=" + std::to_string(c.refine.max_watch_depth) +
           ";refine=" + (c.refine.enabled ? "on" : "off");
}

inline Json to_json(const VerifyConfig& c)
{
    Json j;
    j["seed"] = c.seed;
    j["reps"] = c.reps;
    j["grid"] = c.grid;
    j["x"] = c.x;
    j["refine"] = {{"enabled", c.refine.enabled},
                   {"epsilon", c.refine.epsilon},
                   {"max_depth", c.refine.max_depth},
                   {"max_watch_depth", c.refine.max_watch_depth}};
    return j;
}

inline Json to_json(const SideEstimate& s)
{
    return Json{{"mean", s.mean}, {"se", s.std_error}, {"n", s.n}, {"median_of_means", s.median_of_means}};
}

inline Json to_json(const ZCheck& c)
{
    return Json{{"name", c.name}, {"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}, {"z", c.z}, {"pass", c.pass}};
}

inline Json to_json(const VerifyReport& r)
{
    Json j;
    j["identity"] = r.identity;
    j["config"] = to_json(r.config);
    j["provenance"] = provenance(r.config.seed, canonical(r.config, r.identity));
    if (r.z_checks.size() == 1) {
        j["lhs"] = to_json(r.z_checks[0].lhs);
        j["rhs"] = to_json(r.z_checks[0].rhs);
        j["z"] = r.z_checks[0].z;
    }
    Json checks = Json::array();
    for (const auto& c : r.z_checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    Json ks = Json::object();
    for (const auto& c : r.ks_checks) {
        ks[c.name] = {{"ks", c.ks}, {"n", c.n_a}, {"n_other", c.n_b}, {"threshold", c.threshold}, {"pass", c.pass}};
    }
    j["ks"] = ks;
    j["pass"] = r.pass;
    j["warnings"] = r.warnings;
    return j;
}

/// Path envelope {horizon, n_steps, kind, times, values}.
inline Json path_to_json(const Path& p)
{
    Json j;
    j["horizon"] = p.horizon();
    j["n_steps"] = p.n_steps();
    j["kind"] = to_string(p.kind());
    if (p.kind() == PathKind::first_passage) j["level"] = p.level();
    if (!p.is_uniform()) j["times"] = std::vector<double>(p.times().begin(), p.times().end());
    j["values"] = std::vector<double>(p.values().begin(), p.values().end());
    return j;
}

inline Path path_from_json(const Json& j)
{
    const double horizon = j.at("horizon").get<double>();
    const auto n = j.at("n_steps").get<std::size_t>();
    auto values = j.at("values").get<std::vector<double>>();
    const PathKind kind = path_kind_from_string(j.value("kind", std::string("free")));
    const double level = j.value("level", 0.0);
    if (values.size() != n + 1) throw std::invalid_argument("path envelope: values must have n_steps + 1 entries");
    if (j.contains("times")) {
        return Path(j.at("times").get<std::vector<double>>(), std::move(values), kind, level);
    }
    return Path::uniform(TimeGrid(horizon, n), std::move(values), kind, level);
}

inline Json to_json(const ExcursionRecord& r)
{
    return Json{{"g", r.g},         {"d", r.d},
                {"level", r.level}, {"length", r.length},
                {"height", r.height}, {"excised", r.excised},
                {"phase", to_string(r.phase)}};
}

inline Json to_json(const TransformOutput& o)
{
    Json j;
    j["tau"] = o.tau;
    j["argmax_time"] = o.argmax_time;
    Json recs = Json::array();
    for (const auto& r : o.records) recs.push_back(to_json(r));
    j["records"] = recs;
    j["path"] = path_to_json(o.excised);
    return j;
}

} // namespace excision
