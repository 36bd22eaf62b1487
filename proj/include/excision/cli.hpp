#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "excision/analytics.hpp"
#include "excision/errors.hpp"
#include "excision/functionals.hpp"
#include "excision/montecarlo.hpp"
#include "excision/path_io.hpp"
#include "excision/report.hpp"
#include "excision/rng.hpp"
#include "excision/samplers.hpp"
#include "excision/svg.hpp"
#include "excision/transforms.hpp"

namespace excision::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags, unknown names or unreadable input.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seed precedence: flag, then EXCISE_SEED, then entropy.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag) return *flag;
    if (const char* env = std::getenv("EXCISE_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used, 0);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("EXCISE_SEED is not an unsigned 64-bit integer: ") + env);
        }
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Io {
    std::ostream& out;
    std::ostream& err;
};

// Writes to --output when given, else to stdout.
inline void emit(const Io& io, const std::string& output, const std::string& text)
{
    if (output.empty()) {
        io.out << text;
        return;
    }
    std::ofstream f(output, std::ios::binary);
    if (!f) throw UsageError("cannot open output file: " + output);
    f << text;
    if (!f) throw UsageError("write failed: " + output);
}

inline std::string provenance_line(std::uint64_t seed, const std::string& canonical_config)
{
    const Json p = provenance(seed, canonical_config);
    return "version=" + p["version"].get<std::string>() + " seed=" + std::to_string(seed) +
           " config_hash=" + p["config_hash"].get<std::string>();
}

inline std::string format_path(const Path& p, const std::string& format, std::uint64_t seed,
                               const std::string& canonical_config)
{
    if (format == "json") {
        Json j = path_to_json(p);
        j["provenance"] = provenance(seed, canonical_config);
        return j.dump(2) + "\n";
    }
    return path_csv(p, provenance_line(seed, canonical_config));
}

// ---------------------------------------------------------------------------

struct SampleArgs {
    std::string kind = "bridge";
    std::size_t grid = 1024;
    std::optional<std::uint64_t> seed;
    double x = 1.0;
    bool refine = false;
    std::string format = "csv";
    std::string output;
};

inline const std::vector<std::string>& sample_kinds()
{
    static const std::vector<std::string> k{"bm", "bridge", "meander", "bes3", "excursion", "first_passage"};
    return k;
}

inline Path sample_kind(const SampleArgs& a, RngStream& rng)
{
    const TimeGrid grid(1.0, a.grid);
    const RefineSpec spec{};
    if (a.kind == "bm") return sample_bm(grid, rng);
    if (a.kind == "bridge") return a.refine ? sample_bridge_refined(grid, rng, spec) : sample_bridge(grid, rng);
    if (a.kind == "meander") {
        return a.refine ? t_me(sample_bridge_refined(grid, rng, spec)) : sample_meander_reversed(grid, rng);
    }
    if (a.kind == "bes3") return sample_bes3(grid, rng);
    if (a.kind == "excursion") {
        return a.refine ? sample_excursion_refined(grid, rng, spec) : sample_excursion(grid, rng);
    }
    if (a.kind == "first_passage") {
        return a.refine ? sample_first_passage_bridge_refined(a.x, grid, rng, spec)
                        : sample_first_passage_bridge(a.x, grid, rng);
    }
    throw UsageError("unknown kind: " + a.kind);
}

inline int cmd_sample(const SampleArgs& a, const Io& io)
{
    const std::uint64_t seed = resolve_seed(a.seed);
    const std::string canon = "sample;kind=" + a.kind + ";grid=" + std::to_string(a.grid) + ";seed=" +
                              std::to_string(seed) + ";x=" + fmt17(a.x) + ";refine=" + (a.refine ? "on" : "off");
    RngStream rng(derive_seed(seed, fnv1a("sample")), 0);
    Path p = [&] {
        for (int k = 0; k < kResampleLimit; ++k) {
            try {
                return sample_kind(a, rng);
            } catch (const TieError&) {
            }
        }
        throw NumericalError("sample: resample limit exceeded");
    }();
    emit(io, a.output, format_path(p, a.format, seed, canon));
    return kExitPass;
}

// ---------------------------------------------------------------------------

struct TransformArgs {
    std::string op;
    std::string input;
    double x = 1.0;
    std::string format;  // defaults: json for excise_*, csv for maps
    std::string output;
};

inline const std::vector<std::string>& transform_ops()
{
    static const std::vector<std::string> k{"excise_bridge", "excise_meander", "excise_to_level",
                                            "g_br",          "g_me",           "t_me",
                                            "t_br",          "two_sided_max",  "brownian_scale"};
    return k;
}

inline PathKind input_kind_for(const std::string& op)
{
    if (op == "excise_bridge" || op == "g_br" || op == "t_me" || op == "two_sided_max") return PathKind::bridge;
    if (op == "excise_meander" || op == "g_me" || op == "t_br") return PathKind::meander_type;
    return PathKind::free;
}

inline int cmd_transform(const TransformArgs& a, const Io& io)
{
    Path p = [&] {
        try {
            return read_path_file(a.input, input_kind_for(a.op));
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
    }();
    const std::string canon = "transform;op=" + a.op + ";x=" + fmt17(a.x) + ";input=" + path_csv(p);
    const bool excision = a.op.rfind("excise_", 0) == 0;
    const std::string format = a.format.empty() ? (excision ? "json" : "csv") : a.format;
    if (excision) {
        if (format != "json") throw UsageError("excise_* ops write JSON only");
        TransformOutput o = a.op == "excise_bridge"    ? excise_bridge(p)
                            : a.op == "excise_meander" ? excise_meander(p)
                                                       : excise_to_level(p, a.x);
        Json j = to_json(o);
        j["op"] = a.op;
        j["provenance"] = provenance(0, canon);
        emit(io, a.output, j.dump(2) + "\n");
        return kExitPass;
    }
    Path r = a.op == "g_br"            ? g_br(p)
             : a.op == "g_me"          ? g_me(p)
             : a.op == "t_me"          ? t_me(p)
             : a.op == "t_br"          ? t_br(p)
             : a.op == "two_sided_max" ? two_sided_max(p)
             : a.op == "brownian_scale" ? brownian_scale(p)
                                        : throw UsageError("unknown op: " + a.op);
    emit(io, a.output, format_path(r, format, 0, canon));
    return kExitPass;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string identity;
    std::vector<std::string> g;
    double x = 1.0;
    std::size_t reps = 100000;
    std::size_t grid = 8192;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    double epsilon = RefineSpec{}.epsilon;
    int max_depth = RefineSpec{}.max_depth;
    bool no_refine = false;
    std::string output;
};

inline int cmd_verify(const VerifyArgs& a, const Io& io)
{
    VerifyConfig c;
    c.seed = resolve_seed(a.seed);
    c.reps = a.reps;
    c.grid = a.grid;
    c.x = a.x;
    c.workers = a.workers;
    c.refine.epsilon = a.epsilon;
    c.refine.max_depth = a.max_depth;
    c.refine.enabled = !a.no_refine;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<FunctionalId> gs;
    const std::vector<std::string> names =
        a.g.empty() ? std::vector<std::string>{"const_one", "max", "integral", "value_at_half"} : a.g;
    for (const auto& n : names) {
        try {
            gs.push_back(functional_from_string(n));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (gs.back() == FunctionalId::reciprocal_max_weight) throw UsageError("--g reciprocal_max_weight is not a test functional");
    }
    VerifyReport r = verify(a.identity, c, gs);
    emit(io, a.output, to_json(r).dump(2) + "\n");
    for (const auto& w : r.warnings) io.err << "warning: " << w << "\n";
    return r.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct FigureArgs {
    std::string input;
    std::optional<std::uint64_t> seed;
    std::size_t grid = 512;
    std::string kind = "bridge";  // bridge or meander when sampling
    std::string title;
    std::string output;
};

inline int cmd_figure(const FigureArgs& a, const Io& io)
{
    std::optional<Path> p;
    std::string canon;
    std::uint64_t seed = 0;
    if (!a.input.empty()) {
        try {
            p = read_path_file(a.input);
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
        // A path that starts and ends at 0 is read as a bridge, anything else as meander-type.
        p = p->with_kind(p->front() == 0.0 && p->back() == 0.0 ? PathKind::bridge : PathKind::meander_type);
        canon = "figure;input=" + path_csv(*p);
    } else {
        if (a.kind != "bridge" && a.kind != "meander") throw UsageError("figure --kind must be bridge or meander");
        SampleArgs s;
        s.kind = a.kind;
        s.grid = a.grid;
        seed = resolve_seed(a.seed);
        RngStream rng(derive_seed(seed, fnv1a("figure")), 0);
        p = sample_kind(s, rng);
        canon = "figure;kind=" + a.kind + ";grid=" + std::to_string(a.grid) + ";seed=" + std::to_string(seed);
    }
    TransformOutput o = p->kind() == PathKind::bridge ? excise_bridge(*p) : excise_meander(*p);
    std::string svg = render_svg(*p, o, a.title);
    const Json prov = provenance(seed, canon);
    svg.insert(svg.find('\n') + 1, "<!-- version=" + prov["version"].get<std::string>() +
                                       " config_hash=" + prov["config_hash"].get<std::string>() + " -->\n");
    emit(io, a.output, svg);
    return kExitPass;
}

// ---------------------------------------------------------------------------

struct TableArgs {
    std::string fn;
    double x = 1.0;
    double tmin = 0.0;
    double tmax = 1.0;
    std::size_t steps = 100;
    std::string output;
};

inline const std::map<std::string, std::function<double(double, double)>>& table_functions()
{
    static const std::map<std::string, std::function<double(double, double)>> f{
        {"g", [](double x, double t) { return g_density(x, t); }},
        {"tau_e_density", [](double x, double t) { return tau_e_density(x, t); }},
        {"phi", [](double x, double t) { return phi(x, t); }},
        {"Phi", [](double, double t) { return phi_integral_over_x(t); }},
        {"laplace_tau", [](double x, double l) { return laplace_tau(x, l); }},
        {"laplace_tau_e", [](double x, double l) { return laplace_tau_e(x, l); }},
        {"laplace_T", [](double x, double l) { return laplace_T(x, l); }},
        {"laplace_hitting", [](double x, double l) { return laplace_hitting(x, l); }},
        {"T_density", [](double x, double t) { return T_density(x, t); }},
        {"rayleigh_density", [](double, double m) { return rayleigh_density(m); }},
        {"rayleigh_cdf", [](double, double m) { return rayleigh_cdf(m); }},
    };
    return f;
}

inline int cmd_table(const TableArgs& a, const Io& io)
{
    const auto& fs = table_functions();
    auto it = fs.find(a.fn);
    if (it == fs.end()) throw UsageError("unknown --fn: " + a.fn);
    if (a.steps < 1) throw UsageError("--steps must be at least 1");
    if (!(a.tmax >= a.tmin)) throw UsageError("--tmax must not be below --tmin");
    const std::string canon = "analytics-table;fn=" + a.fn + ";x=" + fmt17(a.x) + ";tmin=" + fmt17(a.tmin) +
                              ";tmax=" + fmt17(a.tmax) + ";steps=" + std::to_string(a.steps);
    std::ostringstream s;
    s << "# " << provenance_line(0, canon) << "\n";
    s << "t," << a.fn << "\n";
    for (std::size_t i = 0; i <= a.steps; ++i) {
        const double t = a.tmin + (a.tmax - a.tmin) * static_cast<double>(i) / static_cast<double>(a.steps);
        double v = 0.0;
        try {
            v = it->second(a.x, t);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        s << fmt17(t) << ',' << fmt17(v) << "\n";
    }
    emit(io, a.output, s.str());
    return kExitPass;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    const Io io{out, err};
    CLI::App app{"Excision of Brownian excursions: sampling, transforms, Monte Carlo checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "sample a path and write it as CSV or JSON");
    sample->add_option("--kind", sa.kind, "bm, bridge, meander, bes3, excursion, first_passage")
        ->check(CLI::IsMember(sample_kinds()));
    sample->add_option("--grid", sa.grid, "number of steps")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));
    sample->add_option("--seed", sa.seed, "master seed (else EXCISE_SEED, else entropy)");
    sample->add_option("--x", sa.x, "level for first_passage")->check(CLI::PositiveNumber);
    sample->add_flag("--refine", sa.refine, "conditional midpoint refinement (adds nodes)");
    sample->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));
    sample->add_option("--output,-o", sa.output);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "apply an excision or path map to a path file");
    transform->add_option("--op", ta.op)->required()->check(CLI::IsMember(transform_ops()));
    transform->add_option("--input,-i", ta.input, "path CSV or JSON envelope")->required();
    transform->add_option("--x", ta.x, "level for excise_to_level")->check(CLI::PositiveNumber);
    transform->add_option("--format", ta.format)->check(CLI::IsMember({"csv", "json"}));
    transform->add_option("--output,-o", ta.output);

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo check of an identity; JSON report");
    verify_cmd->add_option("--identity", va.identity)->required()->check(CLI::IsMember(identity_names()));
    verify_cmd->add_option("--g", va.g, "functional(s): const_one, max, integral, value_at_half");
    verify_cmd->add_option("--x", va.x)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--reps", va.reps);
    verify_cmd->add_option("--grid", va.grid);
    verify_cmd->add_option("--seed", va.seed);
    verify_cmd->add_option("--workers", va.workers, "0 = hardware concurrency");
    verify_cmd->add_option("--epsilon", va.epsilon, "refinement crossing-probability threshold");
    verify_cmd->add_option("--max-depth", va.max_depth, "refinement depth limit");
    verify_cmd->add_flag("--no-refine", va.no_refine);
    verify_cmd->add_option("--output,-o", va.output);

    FigureArgs fa;
    auto* figure = app.add_subcommand("figure", "SVG of a path with its excised and kept excursions");
    figure->add_option("--input,-i", fa.input, "path CSV or JSON envelope (else a sampled path)");
    figure->add_option("--seed", fa.seed);
    figure->add_option("--grid", fa.grid)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    figure->add_option("--kind", fa.kind)->check(CLI::IsMember({"bridge", "meander"}));
    figure->add_option("--title", fa.title);
    figure->add_option("--output,-o", fa.output);

    TableArgs tb;
    auto* table = app.add_subcommand("analytics-table", "CSV table of a closed-form kernel");
    std::vector<std::string> fn_names;
    for (const auto& [k, v] : table_functions()) fn_names.push_back(k);
    table->add_option("--fn", tb.fn)->required()->check(CLI::IsMember(fn_names));
    table->add_option("--x", tb.x)->check(CLI::PositiveNumber);
    table->add_option("--tmin", tb.tmin);
    table->add_option("--tmax", tb.tmax);
    table->add_option("--steps", tb.steps);
    table->add_option("--output,-o", tb.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests carry exit code 0.
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*sample) return cmd_sample(sa, io);
        if (*transform) return cmd_transform(ta, io);
        if (*verify_cmd) return cmd_verify(va, io);
        if (*figure) return cmd_figure(fa, io);
        if (*table) return cmd_table(tb, io);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace excision::cli
