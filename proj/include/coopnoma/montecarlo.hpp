// Trial-level simulation of the two-slot protocol.
//
// Each trial draws every link gain, forms the decoding set, runs the relay
// selection rule and checks both users' secrecy capacities against the
// worst-case eavesdropper. Trials are grouped into fixed-size chunks, each
// with its own generator seeded from (seed, chunk index), so the estimate
// does not depend on how chunks are spread over worker threads.

#ifndef COOPNOMA_MONTECARLO_HPP
#define COOPNOMA_MONTECARLO_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "system.hpp"

namespace coopnoma {

struct TrialConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t chunk = 65'536;
    unsigned workers = 1;

    void validate() const {
        detail::require(trials >= 1, "trials must be >= 1");
        detail::require(chunk >= 1, "chunk must be >= 1");
    }
};

struct OutageBreakdown {
    std::uint64_t u1_only = 0;
    std::uint64_t u2_only = 0;
    std::uint64_t both = 0;
    std::uint64_t no_relay = 0;

    std::uint64_t total() const { return u1_only + u2_only + both + no_relay; }
};

struct SetSizeCounts {
    std::uint64_t trials = 0;
    std::uint64_t outages = 0;
};

struct SopEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t outages = 0;
    OutageBreakdown breakdown;
    std::vector<SetSizeCounts> by_set_size;  // index n = |Phi|

    /// Conditional frequency of outage given |Phi| = n.
    double conditional(int n) const {
        const auto& c = by_set_size.at(static_cast<std::size_t>(n));
        return c.trials == 0 ? 0.0 : static_cast<double>(c.outages) / c.trials;
    }
    double conditional_std_error(int n) const {
        const auto& c = by_set_size.at(static_cast<std::size_t>(n));
        if (c.trials == 0) return 0.0;
        const double p = static_cast<double>(c.outages) / c.trials;
        return std::sqrt(p * (1.0 - p) / c.trials);
    }
};

struct TrialDraw {
    std::vector<double> g_sr;
    std::vector<double> g_1;
    std::vector<double> g_2;
    std::vector<double> g_e;
};

using Stream = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates neighbouring chunk seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Stream chunk_stream(std::uint64_t seed, std::uint64_t chunk_index) {
    return Stream(splitmix64(splitmix64(seed) ^ splitmix64(chunk_index + 0x632be59bd9b4e019ULL)));
}

inline void draw_trial(const SystemParams& params, Stream& stream, TrialDraw& out) {
    const auto k = static_cast<std::size_t>(params.relays);
    out.g_sr.resize(k);
    out.g_1.resize(k);
    out.g_2.resize(k);
    out.g_e.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.g_sr[i] = sample_gain(params.links.source_relay, stream);
        out.g_1[i] = sample_gain(params.links.relay_user1, stream);
        out.g_2[i] = sample_gain(params.links.relay_user2, stream);
        out.g_e[i] = sample_gain(params.links.relay_eaves, stream);
    }
}

inline TrialDraw draw_trial(const SystemParams& params, Stream& stream) {
    TrialDraw d;
    draw_trial(params, stream, d);
    return d;
}

/// Indices of relays that decode both messages in the first slot.
inline std::vector<int> decoding_set(const SystemParams& params, const TrialDraw& draw) {
    const double rate = params.r1_th + params.r2_th;
    const double rho = params.rho_source();
    std::vector<int> out;
    for (int k = 0; k < params.relays; ++k) {
        if (0.5 * std::log1p(rho * draw.g_sr[k]) >= rate) {
            out.push_back(k);
        }
    }
    return out;
}

struct SecrecyCapacities {
    double cs1 = 0.0;
    double cs2 = 0.0;
};

/// Secrecy capacities (nats) of both users; the eavesdropper needs no SIC.
inline SecrecyCapacities secrecy_capacities(double alpha1, double rho, double g1, double g2,
                                            double ge_eff) {
    const double alpha2 = 1.0 - alpha1;
    SecrecyCapacities c;
    c.cs1 = 0.5 * (std::log1p(alpha1 * rho * g1) - std::log1p(alpha1 * rho * ge_eff));
    c.cs2 = 0.5 * (std::log1p(alpha2 * rho * g2 / (alpha1 * rho * g2 + 1.0)) -
                   std::log1p(alpha2 * rho * ge_eff));
    return c;
}

/// min{ G1 / delta1(GE), G2 / delta2(GE) }, zero once U2 cannot be secure.
inline double osrs_metric(const LinkConstants& kc, double alpha2, double theta1, double g1,
                          double g2, double ge) {
    if (!(ge < kc.a)) {
        return 0.0;
    }
    const double d1 = kc.b + theta1 * ge;
    const double d2 = kc.u2_threshold(alpha2, ge);
    return std::min(g1 / d1, g2 / d2);
}

enum class OutageKind { None, U1, U2, Both, NoRelay };

struct TrialOutcome {
    OutageKind kind = OutageKind::NoRelay;
    int selected = -1;  // relay carrying data, -1 for TMRC / no relay
    int jammer = -1;
    int set_size = 0;

    bool secure() const { return kind == OutageKind::None; }
};

namespace detail {

inline OutageKind classify(const SystemParams& params, const SecrecyCapacities& c) {
    const bool f1 = !(c.cs1 >= params.r1_s);
    const bool f2 = !(c.cs2 >= params.r2_s);
    if (f1 && f2) return OutageKind::Both;
    if (f1) return OutageKind::U1;
    if (f2) return OutageKind::U2;
    return OutageKind::None;
}

// Single data relay chosen from `candidates`; the eavesdropper sees
// ge[k] * ge_scale at signal SNR rho.
inline TrialOutcome select_single(const SystemParams& params, const PowerSplit& split, double rho,
                                  const std::vector<int>& candidates, const TrialDraw& draw,
                                  double ge_scale) {
    const LinkConstants kc = link_constants(split, params.theta1(), params.theta2(), rho);
    TrialOutcome best;
    best.kind = OutageKind::NoRelay;
    double best_metric = -1.0;
    bool any_secure = false;
    for (int k : candidates) {
        const double ge = draw.g_e[k] * ge_scale;
        const auto caps = secrecy_capacities(split.alpha1, rho, draw.g_1[k], draw.g_2[k], ge);
        const OutageKind kind = classify(params, caps);
        const double metric =
            kc.feasible() ? osrs_metric(kc, split.alpha2, params.theta1(), draw.g_1[k], draw.g_2[k], ge)
                          : 0.0;
        const bool secure = kind == OutageKind::None;
        // Secure relays always beat insecure ones; within a class, larger metric wins.
        const bool better = (secure && !any_secure) ||
                            (secure == any_secure && metric > best_metric);
        if (better) {
            best.kind = kind;
            best.selected = k;
            best_metric = metric;
            any_secure = any_secure || secure;
        }
    }
    return best;
}

}  // namespace detail

/// Runs one scheme on one draw.
inline TrialOutcome run_trial(const SystemParams& params, const PowerPolicy& policy,
                              SchemeKind scheme, const TrialDraw& draw) {
    const std::vector<int> phi = decoding_set(params, draw);
    TrialOutcome out;
    out.set_size = static_cast<int>(phi.size());
    if (phi.empty()) {
        out.kind = OutageKind::NoRelay;
        return out;
    }
    const PowerSplit split = policy.resolve(params);
    const int n = out.set_size;

    switch (scheme) {
        case SchemeKind::TMRC: {
            double g1 = 0.0;
            double g2 = 0.0;
            double ge = 0.0;
            for (int k : phi) {
                g1 += draw.g_1[k];
                g2 += draw.g_2[k];
                ge += draw.g_e[k];
            }
            const double rho1 = params.p_relay / (n * params.sigma2);
            out.kind = detail::classify(params, secrecy_capacities(split.alpha1, rho1, g1, g2, ge));
            return out;
        }
        case SchemeKind::OSRS: {
            const auto r = detail::select_single(params, split, params.rho_relay(), phi, draw, 1.0);
            out.kind = r.kind;
            out.selected = r.selected;
            return out;
        }
        case SchemeKind::TSRS: {
            const double rho = params.rho_relay();
            int chosen = -1;
            double best_cs2 = 0.0;
            int fallback = -1;
            double best_cs1 = 0.0;
            for (int k : phi) {
                const auto c =
                    secrecy_capacities(split.alpha1, rho, draw.g_1[k], draw.g_2[k], draw.g_e[k]);
                if (c.cs1 >= params.r1_s) {
                    if (chosen < 0 || c.cs2 > best_cs2) {
                        chosen = k;
                        best_cs2 = c.cs2;
                    }
                }
                if (fallback < 0 || c.cs1 > best_cs1) {
                    fallback = k;
                    best_cs1 = c.cs1;
                }
            }
            // Empty first-step set: U1 fails on every relay; report the relay closest to passing.
            const int k = chosen >= 0 ? chosen : fallback;
            out.selected = k;
            out.kind = detail::classify(
                params, secrecy_capacities(split.alpha1, rho, draw.g_1[k], draw.g_2[k], draw.g_e[k]));
            return out;
        }
        case SchemeKind::ODRS: {
            if (n == params.relays) {
                const auto r =
                    detail::select_single(params, split, params.rho_relay(), phi, draw, 1.0);
                out.kind = r.kind;
                out.selected = r.selected;
                return out;
            }
            std::vector<bool> decoded(static_cast<std::size_t>(params.relays), false);
            for (int k : phi) decoded[k] = true;
            int jammer = -1;
            for (int k = 0; k < params.relays; ++k) {
                if (decoded[k]) continue;
                if (jammer < 0 || draw.g_e[k] > draw.g_e[jammer]) jammer = k;
            }
            const double rho3 = (1.0 - policy.alpha_j) * params.p_relay / params.sigma2;
            const double rho4 = policy.alpha_j * params.p_relay / params.sigma2;
            const double scale = 1.0 / (1.0 + rho4 * draw.g_e[jammer]);
            const auto r = detail::select_single(params, split, rho3, phi, draw, scale);
            out.kind = r.kind;
            out.selected = r.selected;
            out.jammer = jammer;
            return out;
        }
    }
    return out;
}

namespace detail {

struct Tally {
    std::uint64_t trials = 0;
    OutageBreakdown breakdown;
    std::vector<SetSizeCounts> by_set_size;

    explicit Tally(int relays) : by_set_size(static_cast<std::size_t>(relays) + 1) {}

    void add(const TrialOutcome& o) {
        ++trials;
        auto& bucket = by_set_size[static_cast<std::size_t>(o.set_size)];
        ++bucket.trials;
        switch (o.kind) {
            case OutageKind::None: return;
            case OutageKind::U1: ++breakdown.u1_only; break;
            case OutageKind::U2: ++breakdown.u2_only; break;
            case OutageKind::Both: ++breakdown.both; break;
            case OutageKind::NoRelay: ++breakdown.no_relay; break;
        }
        ++bucket.outages;
    }

    void merge(const Tally& other) {
        trials += other.trials;
        breakdown.u1_only += other.breakdown.u1_only;
        breakdown.u2_only += other.breakdown.u2_only;
        breakdown.both += other.breakdown.both;
        breakdown.no_relay += other.breakdown.no_relay;
        for (std::size_t n = 0; n < by_set_size.size(); ++n) {
            by_set_size[n].trials += other.by_set_size[n].trials;
            by_set_size[n].outages += other.by_set_size[n].outages;
        }
    }

    SopEstimate finish() const {
        SopEstimate e;
        e.trials = trials;
        e.outages = breakdown.total();
        e.breakdown = breakdown;
        e.by_set_size = by_set_size;
        e.p_hat = trials == 0 ? 0.0 : static_cast<double>(e.outages) / trials;
        e.std_error = trials == 0 ? 0.0 : std::sqrt(e.p_hat * (1.0 - e.p_hat) / trials);
        return e;
    }
};

// Runs `body(chunk_index, first_trial, count)` for every chunk, spreading
// chunks over workers. Results are reduced by the caller in chunk order.
template <class Body>
void for_each_chunk(const TrialConfig& config, Body&& body) {
    const std::uint64_t chunks = (config.trials + config.chunk - 1) / config.chunk;
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(chunks)));
    auto run = [&](std::uint64_t c) {
        const std::uint64_t first = c * config.chunk;
        body(c, std::min(config.chunk, config.trials - first));
    };
    if (workers == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < chunks; c = next++) run(c);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Estimates the SOP of several schemes on shared draws (paired comparison).
inline std::vector<SopEstimate> estimate_sop_paired(const SystemParams& params,
                                                    const PowerPolicy& policy,
                                                    const std::vector<SchemeKind>& schemes,
                                                    const TrialConfig& config) {
    params.validate();
    policy.validate();
    config.validate();
    const std::uint64_t chunks = (config.trials + config.chunk - 1) / config.chunk;
    std::vector<std::vector<detail::Tally>> per_chunk(
        chunks, std::vector<detail::Tally>(schemes.size(), detail::Tally(params.relays)));
    detail::for_each_chunk(config, [&](std::uint64_t c, std::uint64_t count) {
        Stream stream = chunk_stream(config.seed, c);
        TrialDraw draw;
        auto& tallies = per_chunk[c];
        for (std::uint64_t t = 0; t < count; ++t) {
            draw_trial(params, stream, draw);
            for (std::size_t s = 0; s < schemes.size(); ++s) {
                tallies[s].add(run_trial(params, policy, schemes[s], draw));
            }
        }
    });
    std::vector<SopEstimate> out;
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        detail::Tally total(params.relays);
        for (const auto& chunk : per_chunk) total.merge(chunk[s]);
        out.push_back(total.finish());
    }
    return out;
}

inline SopEstimate estimate_sop(const SystemParams& params, const PowerPolicy& policy,
                                SchemeKind scheme, const TrialConfig& config) {
    return estimate_sop_paired(params, policy, {scheme}, config).front();
}

/// Number of shared draws on which two policies/schemes reach the same verdict.
inline std::uint64_t paired_verdict_agreement(const SystemParams& params,
                                              const PowerPolicy& policy_a, SchemeKind scheme_a,
                                              const PowerPolicy& policy_b, SchemeKind scheme_b,
                                              const TrialConfig& config) {
    config.validate();
    const std::uint64_t chunks = (config.trials + config.chunk - 1) / config.chunk;
    std::vector<std::uint64_t> agree(chunks, 0);
    detail::for_each_chunk(config, [&](std::uint64_t c, std::uint64_t count) {
        Stream stream = chunk_stream(config.seed, c);
        TrialDraw draw;
        for (std::uint64_t t = 0; t < count; ++t) {
            draw_trial(params, stream, draw);
            const bool a = run_trial(params, policy_a, scheme_a, draw).secure();
            const bool b = run_trial(params, policy_b, scheme_b, draw).secure();
            agree[c] += a == b ? 1 : 0;
        }
    });
    std::uint64_t total = 0;
    for (auto v : agree) total += v;
    return total;
}

}  // namespace coopnoma

#endif  // COOPNOMA_MONTECARLO_HPP
