#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "excision/analytics.hpp"
#include "excision/errors.hpp"
#include "excision/excursion_ppp.hpp"
#include "excision/functionals.hpp"
#include "excision/parallel.hpp"
#include "excision/path.hpp"
#include "excision/refine.hpp"
#include "excision/rng.hpp"
#include "excision/samplers.hpp"
#include "excision/stats.hpp"
#include "excision/transforms.hpp"

namespace excision {

inline constexpr double kZThreshold = 3.0;
inline constexpr double kKsThreshold = 0.015;
inline constexpr double kSmallMaxWarning = 1e-3;
inline constexpr std::size_t kMomBlocks = 32;
inline constexpr std::size_t kFunctionalCount = 5;

/// Resolved configuration of one verification run.
struct VerifyConfig {
    std::uint64_t seed = 1729;
    std::size_t reps = 100000;
    std::size_t grid = 8192;
    double x = 1.0;
    unsigned workers = 0;
    RefineSpec refine{};

    void validate() const
    {
        if (reps < 2) throw std::invalid_argument("verify: reps must be at least 2");
        if (grid < 2) throw std::invalid_argument("verify: grid must be at least 2");
        if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("verify: x must be positive");
        if (!(refine.epsilon > 0.0 && refine.epsilon < 1.0)) {
            throw std::invalid_argument("verify: epsilon must lie in (0, 1)");
        }
        if (refine.max_depth < 0 || refine.max_depth > 40) {
            throw std::invalid_argument("verify: max_depth must lie in [0, 40]");
        }
    }
};

/// One side of an identity: plain mean with its SE, plus a block-median
/// cross-check.
struct SideEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double median_of_means = 0.0;
};

struct ZCheck {
    std::string name;
    SideEstimate lhs;
    SideEstimate rhs;
    double z = 0.0;
    bool pass = false;
};

struct KsCheck {
    std::string name;
    double ks = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double threshold = kKsThreshold;
    bool pass = false;
};

struct VerifyReport {
    std::string identity;
    VerifyConfig config;
    std::vector<ZCheck> z_checks;
    std::vector<KsCheck> ks_checks;
    std::vector<std::string> warnings;
    bool pass = true;
};

inline SideEstimate side_estimate(std::span<const double> x)
{
    const EstimatorSummary s = summarize(x);
    return SideEstimate{s.mean, s.std_error, s.n, median_of_means(x, kMomBlocks)};
}

/// A side known in closed form (or identically constant): SE 0.
inline SideEstimate exact_side(double value, std::size_t n)
{
    return SideEstimate{value, 0.0, n, value};
}

inline ZCheck make_z_check(std::string name, const SideEstimate& lhs, const SideEstimate& rhs)
{
    ZCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    const double se = std::hypot(lhs.std_error, rhs.std_error);
    if (se == 0.0) {
        // Both sides exact: agreement to rounding is a pass.
        const double d = std::abs(lhs.mean - rhs.mean);
        c.z = 0.0;
        c.pass = d <= 1e-12 * std::max(1.0, std::abs(rhs.mean));
        if (!c.pass) throw NumericalError("z check '" + c.name + "': zero standard error, differing values");
        return c;
    }
    c.z = std::abs(lhs.mean - rhs.mean) / se;
    c.pass = c.z < kZThreshold;
    return c;
}

inline KsCheck make_ks_check(std::string name, std::span<const double> a, std::span<const double> b,
                             double threshold = kKsThreshold)
{
    KsCheck c;
    c.name = std::move(name);
    c.ks = ks_distance(a, b);
    c.n_a = a.size();
    c.n_b = b.size();
    c.threshold = threshold;
    c.pass = c.ks < threshold;
    return c;
}

inline void finalize(VerifyReport& r)
{
    r.pass = true;
    for (const auto& c : r.z_checks) r.pass = r.pass && c.pass;
    for (const auto& c : r.ks_checks) r.pass = r.pass && c.pass;
}

// Warns when the block-median and the plain mean disagree by more than 3 SE.
inline void heavy_tail_note(VerifyReport& r, const ZCheck& c)
{
    auto check = [&](const char* which, const SideEstimate& s) {
        if (s.std_error > 0.0 && std::abs(s.median_of_means - s.mean) > 3.0 * s.std_error) {
            r.warnings.push_back(c.name + ": " + which + " median-of-means " +
                                 std::to_string(s.median_of_means) + " differs from mean " +
                                 std::to_string(s.mean) + " by more than 3 SE");
        }
    };
    check("lhs", c.lhs);
    check("rhs", c.rhs);
}

/**
 * Mean and SE of f(path) over n replicates, replicate i drawing from
 * RngStream(derive_seed(seed, tag), i).
 */
template <class Sampler>
EstimatorSummary estimate(FunctionalId f, Sampler&& sampler, std::size_t n, std::uint64_t seed,
                          std::size_t grid = 0, unsigned workers = 0, std::uint64_t tag = 0)
{
    if (n < 2) throw std::invalid_argument("estimate: n must be at least 2");
    const std::uint64_t s = derive_seed(seed, tag);
    auto vals = parallel_map(n, workers, [&](std::size_t i) {
        RngStream rng(s, i);
        return evaluate(f, sampler(rng));
    });
    return summarize(vals, seed, grid);
}

// ---------------------------------------------------------------------------
// Replicate batches. Each batch is a pure function of (config, tag); the
// stream of replicate i is RngStream(derive_seed(derive_seed(seed, tag), grid), i).

namespace batch_tag {
inline constexpr std::uint64_t bridge = 0xB1;
inline constexpr std::uint64_t excursion = 0xE1;
inline constexpr std::uint64_t level = 0x71;
inline constexpr std::uint64_t bessel = 0xB3;
inline constexpr std::uint64_t first_passage = 0xF1;
inline constexpr std::uint64_t eq22 = 0x22;
} // namespace batch_tag

inline std::uint64_t batch_seed(const VerifyConfig& c, std::uint64_t tag, double x = 0.0)
{
    std::uint64_t s = derive_seed(derive_seed(c.seed, tag), c.grid);
    if (x != 0.0) s = derive_seed(s, std::bit_cast<std::uint64_t>(x));
    return s;
}

using FunctionalValues = std::array<double, kFunctionalCount>;

inline FunctionalValues evaluate_all(const Path& p)
{
    FunctionalValues v{};
    for (std::size_t k = 0; k < kFunctionalCount; ++k) v[k] = evaluate(static_cast<FunctionalId>(k), p);
    return v;
}

inline std::size_t index_of(FunctionalId f) { return static_cast<std::size_t>(f); }

/// Bridge side: refined bridge, its excision, and its reversed meander t_me.
struct BridgeReplicate {
    double top = 0.0;     // B(mu)
    double tau = 0.0;
    double weight = 0.0;  // tau^{1/2} / B(mu)
    FunctionalValues y{};   // functionals of the normalized excised path
    FunctionalValues me{};  // functionals of t_me(bridge)
    int ties = 0;
};

struct BridgeBatch {
    std::vector<BridgeReplicate> reps;
    std::size_t ties = 0;
    std::size_t small_max = 0;
};

inline BridgeBatch bridge_batch(const VerifyConfig& c)
{
    c.validate();
    const TimeGrid grid(1.0, c.grid);
    const std::uint64_t s = batch_seed(c, batch_tag::bridge);
    BridgeBatch b;
    b.reps = parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        BridgeReplicate r;
        for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
            try {
                Path p = sample_bridge_refined(grid, rng, c.refine);
                TransformOutput o = excise_bridge(p);
                r.top = p.max_value();
                r.tau = o.tau;
                r.weight = std::sqrt(o.tau) / r.top;
                if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
                    throw NumericalError("bridge replicate " + std::to_string(i) + ": invalid weight");
                }
                r.y = evaluate_all(brownian_scale(o.excised));
                r.me = evaluate_all(t_me(p));
                return r;
            } catch (const TieError&) {
                ++r.ties;
            }
        }
        throw NumericalError("bridge replicate " + std::to_string(i) + ": resample limit exceeded");
    });
    for (const auto& r : b.reps) {
        b.ties += static_cast<std::size_t>(r.ties);
        if (r.top < kSmallMaxWarning) ++b.small_max;
    }
    return b;
}

/// Excursion side: refined normalized excursion with its Phi weight.
struct ExcursionReplicate {
    double max = 0.0;
    double phi = 0.0;
    FunctionalValues g{};
};

inline std::vector<ExcursionReplicate> excursion_batch(const VerifyConfig& c)
{
    c.validate();
    const TimeGrid grid(1.0, c.grid);
    const std::uint64_t s = batch_seed(c, batch_tag::excursion);
    const PhiTable& table = PhiTable::shared();
    return parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        Path e = sample_excursion_refined(grid, rng, c.refine);
        ExcursionReplicate r;
        r.max = e.max_value();
        r.phi = table(r.max);
        r.g = evaluate_all(e);
        return r;
    });
}

/// Brownian motion run to level x with the two-phase excision.
struct LevelReplicate {
    double tau = 0.0;
    double tau_e = 0.0;
    double T = 0.0;
    double half_time = 0.0;
    double long_count = 0.0;  // excursions longer than kLongExcursion
    double mid = 0.0;         // X at tau/2
    double area = 0.0;        // integral of X
    FunctionalValues xt{};    // functionals of the normalized bridge built from X
};

inline constexpr double kLongExcursion = 0.04;

inline std::vector<LevelReplicate> level_batch(const VerifyConfig& c, double x)
{
    c.validate();
    const std::uint64_t s = batch_seed(c, batch_tag::level, x);
    ExcisionOptions opt;
    opt.refine = c.refine;
    return parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        ExcisionSummary e = excise_bm_to_x(x, c.grid, rng, opt);
        LevelReplicate r;
        r.tau = e.tau_x;
        r.tau_e = e.tau_e;
        r.T = e.T_x;
        r.half_time = e.half_time;
        for (const auto& rec : e.records) {
            if (rec.length > kLongExcursion) r.long_count += 1.0;
        }
        r.mid = e.X_path.at(0.5 * e.X_path.horizon());
        r.area = integral(e.X_path);
        r.xt = evaluate_all(x_bridge_tilde(e));
        return r;
    });
}

/// Two Bessel(3) legs to x/2.
struct BesselReplicate {
    double H = 0.0;
    double H_hat = 0.0;
    double mid = 0.0;
    double area = 0.0;
};

inline std::vector<BesselReplicate> bessel_batch(const VerifyConfig& c, double x)
{
    c.validate();
    const std::uint64_t s = batch_seed(c, batch_tag::bessel, x);
    return parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        BesselPair b = sample_bessel_pair(x, c.grid, rng, c.refine);
        BesselReplicate r;
        r.H = b.H;
        r.H_hat = b.H_hat;
        r.mid = b.W_path.at(0.5 * b.W_path.horizon());
        r.area = integral(b.W_path);
        return r;
    });
}

/// Rayleigh variate by inversion.
inline double sample_rayleigh(RngStream& rng)
{
    return std::sqrt(-2.0 * std::log(rng.uniform()));
}

/// First-passage bridges at a Rayleigh level (mixture side of the `lemma2` check).
inline std::vector<FunctionalValues> first_passage_batch(const VerifyConfig& c)
{
    c.validate();
    const TimeGrid grid(1.0, c.grid);
    const std::uint64_t s = batch_seed(c, batch_tag::first_passage);
    return parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        const double x = sample_rayleigh(rng);
        return evaluate_all(sample_first_passage_bridge(x, grid, rng));
    });
}

/// t_br(g_me(F)) for F a refined first-passage bridge at a Rayleigh level.
inline std::vector<FunctionalValues> eq22_batch(const VerifyConfig& c)
{
    c.validate();
    const TimeGrid grid(1.0, c.grid);
    const std::uint64_t s = batch_seed(c, batch_tag::eq22);
    return parallel_map(c.reps, c.workers, [&](std::size_t i) {
        RngStream rng(s, i);
        const double x = sample_rayleigh(rng);
        Path f = sample_first_passage_bridge_refined(x, grid, rng, c.refine);
        return evaluate_all(brownian_scale(t_br(g_me(f.with_kind(PathKind::meander_type)))));
    });
}

// ---------------------------------------------------------------------------
// Reports.

template <class R, class F>
std::vector<double> column(const std::vector<R>& reps, F&& f)
{
    std::vector<double> out;
    out.reserve(reps.size());
    for (const auto& r : reps) out.push_back(f(r));
    return out;
}

inline void require_functional(FunctionalId g, const char* who)
{
    if (g == FunctionalId::reciprocal_max_weight) {
        throw std::invalid_argument(std::string(who) + ": reciprocal_max_weight is an internal weight, not a test functional");
    }
}

/// Bridge/excursion identity: E[G(Y~) tau^{1/2} / B(mu)] against E[G(e) Phi(max e)].
inline VerifyReport theorem1_report(const VerifyConfig& c, const BridgeBatch& br,
                                    const std::vector<ExcursionReplicate>& ex,
                                    const std::vector<FunctionalId>& gs)
{
    VerifyReport r;
    r.identity = "theorem1";
    r.config = c;
    for (FunctionalId g : gs) {
        require_functional(g, "theorem1");
        const std::size_t k = index_of(g);
        auto lhs = column(br.reps, [&](const BridgeReplicate& b) { return b.y[k] * b.weight; });
        auto rhs = column(ex, [&](const ExcursionReplicate& e) { return e.g[k] * e.phi; });
        r.z_checks.push_back(make_z_check(to_string(g), side_estimate(lhs), side_estimate(rhs)));
        heavy_tail_note(r, r.z_checks.back());
    }
    if (br.small_max > 0) {
        r.warnings.push_back(std::to_string(br.small_max) + " bridge replicates with B(mu) < 1e-3");
    }
    if (br.ties > 0) {
        r.warnings.push_back(std::to_string(br.ties) + " bridge resamples after argmax ties");
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_theorem1(const VerifyConfig& c, const std::vector<FunctionalId>& gs)
{
    return theorem1_report(c, bridge_batch(c), excursion_batch(c), gs);
}

/**
 * Normalization checks with G(m) = m (LHS identically 1), G(m) = 1, and G(m) = 1{m > 1},
 * m the maximum of the normalized excised path, B(mu) tau^{-1/2}.
 */
inline VerifyReport corollary2_report(const VerifyConfig& c, const BridgeBatch& br,
                                      const std::vector<ExcursionReplicate>& ex)
{
    VerifyReport r;
    r.identity = "corollary2";
    r.config = c;
    auto rhs_m = column(ex, [](const ExcursionReplicate& e) { return e.max * e.phi; });
    r.z_checks.push_back(make_z_check("identity_m", exact_side(1.0, ex.size()), side_estimate(rhs_m)));
    auto lhs_1 = column(br.reps, [](const BridgeReplicate& b) { return b.weight; });
    auto rhs_1 = column(ex, [](const ExcursionReplicate& e) { return e.phi; });
    r.z_checks.push_back(make_z_check("const_one", side_estimate(lhs_1), side_estimate(rhs_1)));
    auto lhs_i = column(br.reps, [](const BridgeReplicate& b) {
        return b.top / std::sqrt(b.tau) > 1.0 ? b.weight : 0.0;
    });
    auto rhs_i = column(ex, [](const ExcursionReplicate& e) { return e.max > 1.0 ? e.phi : 0.0; });
    r.z_checks.push_back(make_z_check("indicator_m_gt_1", side_estimate(lhs_i), side_estimate(rhs_i)));
    for (const auto& z : r.z_checks) heavy_tail_note(r, z);
    if (br.small_max > 0) {
        r.warnings.push_back(std::to_string(br.small_max) + " bridge replicates with B(mu) < 1e-3");
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_corollary2(const VerifyConfig& c)
{
    return corollary2_report(c, bridge_batch(c), excursion_batch(c));
}

/// Rayleigh mixture of first-passage bridges against t_me(bridge).
inline VerifyReport lemma2_report(const VerifyConfig& c, const std::vector<FunctionalValues>& fp,
                                  const BridgeBatch& br, const std::vector<FunctionalId>& gs)
{
    VerifyReport r;
    r.identity = "lemma2";
    r.config = c;
    for (FunctionalId g : gs) {
        require_functional(g, "lemma2");
        const std::size_t k = index_of(g);
        auto lhs = column(fp, [&](const FunctionalValues& v) { return v[k]; });
        auto rhs = column(br.reps, [&](const BridgeReplicate& b) { return b.me[k]; });
        r.z_checks.push_back(make_z_check(to_string(g), side_estimate(lhs), side_estimate(rhs)));
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_lemma2(const VerifyConfig& c, const std::vector<FunctionalId>& gs)
{
    return lemma2_report(c, first_passage_batch(c), bridge_batch(c), gs);
}

/// Moments of tau_x and its law against H + H_hat.
inline VerifyReport lemma3_report(const VerifyConfig& c, const std::vector<LevelReplicate>& lv,
                                  const std::vector<BesselReplicate>& bs)
{
    VerifyReport r;
    r.identity = "lemma3";
    r.config = c;
    const double x2 = c.x * c.x;
    auto tau = column(lv, [](const LevelReplicate& l) { return l.tau; });
    auto hh = column(bs, [](const BesselReplicate& b) { return b.H + b.H_hat; });
    r.z_checks.push_back(make_z_check("mean_tau", side_estimate(tau), exact_side(x2 / 6.0, tau.size())));
    const VarianceEstimate v = variance_estimate(tau);
    SideEstimate vs{v.variance, v.std_error, tau.size(), v.variance};
    r.z_checks.push_back(make_z_check("variance_tau", vs, exact_side(x2 * x2 / 180.0, tau.size())));
    r.ks_checks.push_back(make_ks_check("tau_vs_bessel_pair", tau, hh));
    finalize(r);
    return r;
}

inline VerifyReport verify_lemma3(const VerifyConfig& c)
{
    return lemma3_report(c, level_batch(c, c.x), bessel_batch(c, c.x));
}

/**
 * Two-sample comparison of the kept path X and the Bessel pair W,
 * plus the x^2 scaling of tau (level 2x against 4 times level x).
 */
inline VerifyReport lemma1_report(const VerifyConfig& c, const std::vector<LevelReplicate>& lv,
                                  const std::vector<BesselReplicate>& bs,
                                  const std::vector<LevelReplicate>* lv_double = nullptr)
{
    VerifyReport r;
    r.identity = "lemma1";
    r.config = c;
    auto a_tau = column(lv, [](const LevelReplicate& l) { return l.tau; });
    auto b_tau = column(bs, [](const BesselReplicate& b) { return b.H + b.H_hat; });
    r.ks_checks.push_back(make_ks_check("duration", a_tau, b_tau));
    auto a_half = column(lv, [](const LevelReplicate& l) { return l.half_time; });
    auto b_half = column(bs, [](const BesselReplicate& b) { return b.H; });
    r.ks_checks.push_back(make_ks_check("first_phase_duration", a_half, b_half));
    auto a_mid = column(lv, [](const LevelReplicate& l) { return l.mid; });
    auto b_mid = column(bs, [](const BesselReplicate& b) { return b.mid; });
    r.ks_checks.push_back(make_ks_check("value_at_mid_time", a_mid, b_mid));
    auto a_area = column(lv, [](const LevelReplicate& l) { return l.area; });
    auto b_area = column(bs, [](const BesselReplicate& b) { return b.area; });
    r.ks_checks.push_back(make_ks_check("area", a_area, b_area));
    if (lv_double != nullptr) {
        auto d = column(*lv_double, [](const LevelReplicate& l) { return 0.25 * l.tau; });
        r.ks_checks.push_back(make_ks_check("scaling_2x_over_4", d, a_tau));
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_lemma1(const VerifyConfig& c)
{
    auto lv = level_batch(c, c.x);
    auto bs = bessel_batch(c, c.x);
    auto lv2 = level_batch(c, 2.0 * c.x);
    return lemma1_report(c, lv, bs, &lv2);
}

/// E[G(e)] against sqrt(2 pi)/x E[G(X~) tau_x^{1/2}].
inline VerifyReport lemma4_report(const VerifyConfig& c, double x, const std::vector<ExcursionReplicate>& ex,
                                  const std::vector<LevelReplicate>& lv, const std::vector<FunctionalId>& gs)
{
    VerifyReport r;
    r.identity = "lemma4";
    r.config = c;
    r.config.x = x;
    const double scale = std::sqrt(2.0 * std::numbers::pi) / x;
    for (FunctionalId g : gs) {
        require_functional(g, "lemma4");
        const std::size_t k = index_of(g);
        SideEstimate lhs = g == FunctionalId::const_one
                               ? exact_side(1.0, ex.size())
                               : side_estimate(column(ex, [&](const ExcursionReplicate& e) { return e.g[k]; }));
        auto rhs = column(lv, [&](const LevelReplicate& l) { return scale * l.xt[k] * std::sqrt(l.tau); });
        r.z_checks.push_back(make_z_check(std::string(to_string(g)) + "_x" + std::to_string(x).substr(0, 4), lhs,
                                          side_estimate(rhs)));
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_lemma4(const VerifyConfig& c, const std::vector<FunctionalId>& gs)
{
    return lemma4_report(c, c.x, excursion_batch(c), level_batch(c, c.x), gs);
}

/// Rayleigh mixture of t_br(g_me(F_x)) against g_br of bridges.
inline VerifyReport eq22_report(const VerifyConfig& c, const std::vector<FunctionalValues>& mix,
                                const BridgeBatch& br, const std::vector<FunctionalId>& gs)
{
    VerifyReport r;
    r.identity = "eq22";
    r.config = c;
    for (FunctionalId g : gs) {
        const std::size_t k = index_of(g);
        auto lhs = column(mix, [&](const FunctionalValues& v) { return v[k]; });
        auto rhs = column(br.reps, [&](const BridgeReplicate& b) { return b.y[k]; });
        r.z_checks.push_back(make_z_check(to_string(g), side_estimate(lhs), side_estimate(rhs)));
    }
    finalize(r);
    return r;
}

inline VerifyReport verify_eq22(const VerifyConfig& c, const std::vector<FunctionalId>& gs)
{
    return eq22_report(c, eq22_batch(c), bridge_batch(c), gs);
}

/// Empirical Laplace transforms of tau_x, tau_x^e and T_x against closed forms.
inline VerifyReport laplace_report(const VerifyConfig& c, const std::vector<LevelReplicate>& lv,
                                   const std::vector<double>& lambdas = {0.5, 1.0, 2.0})
{
    VerifyReport r;
    r.identity = "laplace";
    r.config = c;
    const double x = c.x;
    for (double lam : lambdas) {
        const std::string tag = std::to_string(lam).substr(0, 4);
        auto a = column(lv, [&](const LevelReplicate& l) { return std::exp(-lam * l.tau); });
        r.z_checks.push_back(make_z_check("tau_lambda_" + tag, side_estimate(a),
                                          exact_side(laplace_tau(x, lam), a.size())));
        auto b = column(lv, [&](const LevelReplicate& l) { return std::exp(-lam * l.tau_e); });
        r.z_checks.push_back(make_z_check("tau_e_lambda_" + tag, side_estimate(b),
                                          exact_side(laplace_tau_e(x, lam), b.size())));
        auto t = column(lv, [&](const LevelReplicate& l) { return std::exp(-lam * l.T); });
        r.z_checks.push_back(make_z_check("T_lambda_" + tag, side_estimate(t),
                                          exact_side(laplace_T(x, lam), t.size())));
    }
    finalize(r);
    return r;
}

/**
 * Excursion intensity: mean number of excursions longer than 0.04 before T_x,
 * x sqrt(2/pi)/sqrt(0.04) from the Ito measure, and the independence proxy
 * corr(tau_x, tau_x^e) = 0.
 */
inline VerifyReport intensity_report(const VerifyConfig& c, const std::vector<LevelReplicate>& lv)
{
    VerifyReport r;
    r.identity = "intensity";
    r.config = c;
    auto n = column(lv, [](const LevelReplicate& l) { return l.long_count; });
    const double expected = c.x * std::sqrt(2.0 / std::numbers::pi) / std::sqrt(kLongExcursion);
    r.z_checks.push_back(make_z_check("count_longer_than_0.04", side_estimate(n), exact_side(expected, n.size())));
    auto a = column(lv, [](const LevelReplicate& l) { return l.tau; });
    auto b = column(lv, [](const LevelReplicate& l) { return l.tau_e; });
    const CorrelationEstimate ce = correlation(a, b);
    SideEstimate cs{ce.r, ce.std_error, a.size(), ce.r};
    r.z_checks.push_back(make_z_check("corr_tau_tau_e", cs, exact_side(0.0, a.size())));
    finalize(r);
    return r;
}

inline VerifyReport verify_laplace(const VerifyConfig& c) { return laplace_report(c, level_batch(c, c.x)); }

inline VerifyReport verify_intensity(const VerifyConfig& c)
{
    return intensity_report(c, level_batch(c, c.x));
}

/// Identity names accepted by verify().
inline const std::vector<std::string>& identity_names()
{
    static const std::vector<std::string> names{"theorem1", "corollary2", "lemma1", "lemma2", "lemma3",
                                                "lemma4",   "eq22",       "laplace", "intensity"};
    return names;
}

/// Runs the named identity check; `gs` selects functionals where relevant.
inline VerifyReport verify(const std::string& identity, const VerifyConfig& c, const std::vector<FunctionalId>& gs)
{
    c.validate();
    if (identity == "theorem1") return verify_theorem1(c, gs);
    if (identity == "corollary2") return verify_corollary2(c);
    if (identity == "lemma1") return verify_lemma1(c);
    if (identity == "lemma2") return verify_lemma2(c, gs);
    if (identity == "lemma3") return verify_lemma3(c);
    if (identity == "lemma4") return verify_lemma4(c, gs);
    if (identity == "eq22") return verify_eq22(c, gs);
    if (identity == "laplace") return verify_laplace(c);
    if (identity == "intensity") return verify_intensity(c);
    throw std::invalid_argument("unknown identity: " + identity);
}

} // namespace excision
