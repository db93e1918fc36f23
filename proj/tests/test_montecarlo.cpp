#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include <coopnoma/analytic.hpp>
#include <coopnoma/montecarlo.hpp>

#include "oracles.hpp"

using namespace coopnoma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracle::db;
using oracle::reference_params;

namespace {

SystemParams spread_params(int relays) {
    SystemParams s = reference_params(relays, 10.0);
    s.links.source_relay = NakagamiParams(2, db(-10));
    return s;
}

TrialConfig config(std::uint64_t trials, std::uint64_t seed = 42) {
    TrialConfig c;
    c.trials = trials;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("draws have the configured means and are independent") {
    const auto s = reference_params(3, 10.0);
    Stream stream = chunk_stream(1, 0);
    const int n = 200'000;
    double m[4] = {0, 0, 0, 0};
    double cross = 0.0;
    for (int t = 0; t < n; ++t) {
        const auto d = draw_trial(s, stream);
        REQUIRE(d.g_sr.size() == 3);
        m[0] += d.g_sr[0];
        m[1] += d.g_1[1];
        m[2] += d.g_2[2];
        m[3] += d.g_e[0];
        cross += d.g_1[0] * d.g_2[0];
    }
    for (auto& v : m) v /= n;
    CHECK_THAT(m[0], WithinRel(db(10), 0.01));
    CHECK_THAT(m[1], WithinRel(db(12), 0.01));
    CHECK_THAT(m[2], WithinRel(db(10), 0.01));
    CHECK_THAT(m[3], WithinRel(db(-5), 0.01));
    // E[G1 G2] = Omega1 Omega2 when independent
    CHECK_THAT(cross / n, WithinRel(db(12) * db(10), 0.02));
}

TEST_CASE("streams are deterministic and distinct") {
    const auto s = reference_params(2, 10.0);
    Stream a = chunk_stream(42, 3);
    Stream b = chunk_stream(42, 3);
    Stream c = chunk_stream(42, 4);
    const auto da = draw_trial(s, a);
    const auto db_ = draw_trial(s, b);
    const auto dc = draw_trial(s, c);
    CHECK(da.g_1 == db_.g_1);
    CHECK(da.g_e == db_.g_e);
    CHECK(da.g_1 != dc.g_1);
    CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("decoding-set size follows the binomial law") {
    const auto s = spread_params(4);
    const auto pmf = decoding_set_pmf(s);
    Stream stream = chunk_stream(5, 0);
    const int n = 200'000;
    std::vector<double> counts(5, 0.0);
    for (int t = 0; t < n; ++t) counts[decoding_set(s, draw_trial(s, stream)).size()] += 1.0;
    double stat = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const double e = pmf[k] * n;
        stat += (counts[k] - e) * (counts[k] - e) / e;
    }
    const boost::math::chi_squared_distribution<double> chi(4);
    CHECK(boost::math::cdf(boost::math::complement(chi, stat)) > 0.01);
}

TEST_CASE("secrecy capacities") {
    const double rho = 10.0;
    const auto c = secrecy_capacities(0.2, rho, 3.0, 4.0, 0.5);
    CHECK_THAT(c.cs1, WithinRel(0.5 * std::log((1 + 0.2 * 10 * 3) / (1 + 0.2 * 10 * 0.5)), 1e-14));
    const double sinr2 = 0.8 * 10 * 4 / (0.2 * 10 * 4 + 1);
    CHECK_THAT(c.cs2, WithinRel(0.5 * std::log((1 + sinr2) / (1 + 0.8 * 10 * 0.5)), 1e-14));
    const auto z = secrecy_capacities(0.2, rho, 1.0, 1.0, 0.0);
    CHECK(z.cs1 > 0.0);
    CHECK(z.cs2 > 0.0);
}

TEST_CASE("threshold form of the secure event agrees with capacities") {
    // U1 secure <=> G1 > b + theta1 GE ; U2 secure <=> GE < a and G2 > c + alpha2/(d - e GE)
    const auto s = reference_params(1, 10.0);
    const PowerSplit split{0.2, 0.8};
    const double rho = s.rho_relay();
    const auto kc = link_constants(split, s.theta1(), s.theta2(), rho);
    Stream stream = chunk_stream(9, 0);
    int disagreements = 0;
    for (int t = 0; t < 100'000; ++t) {
        const auto d = draw_trial(s, stream);
        const double g1 = d.g_1[0], g2 = d.g_2[0], ge = d.g_e[0];
        const auto c = secrecy_capacities(split.alpha1, rho, g1, g2, ge);
        const bool cap = c.cs1 >= s.r1_s && c.cs2 >= s.r2_s;
        const bool thr = g1 > kc.b + s.theta1() * ge && ge < kc.a &&
                         g2 > kc.u2_threshold(split.alpha2, ge);
        // Ties have probability zero; allow rounding at the boundary only.
        disagreements += cap != thr ? 1 : 0;
        if (cap) CHECK(osrs_metric(kc, split.alpha2, s.theta1(), g1, g2, ge) >= 1.0 - 1e-9);
    }
    CHECK(disagreements == 0);
}

TEST_CASE("trial verdict invariants") {
    const auto s = spread_params(3);
    const auto pol = PowerPolicy::fixed(0.2, 0.5);
    Stream stream = chunk_stream(3, 0);
    int empty = 0;
    for (int t = 0; t < 50'000; ++t) {
        const auto d = draw_trial(s, stream);
        const auto phi = decoding_set(s, d);
        for (auto scheme : {SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::TSRS, SchemeKind::ODRS}) {
            const auto o = run_trial(s, pol, scheme, d);
            CHECK(o.set_size == static_cast<int>(phi.size()));
            if (phi.empty()) {
                CHECK(o.kind == OutageKind::NoRelay);
            } else if (scheme == SchemeKind::ODRS && o.set_size < 3) {
                REQUIRE(o.jammer >= 0);
                CHECK(std::find(phi.begin(), phi.end(), o.jammer) == phi.end());
            }
        }
        empty += phi.empty() ? 1 : 0;
    }
    CHECK(empty > 0);
}

TEST_CASE("two-step and optimal single selection reach the same verdict") {
    for (int k : {2, 3, 4}) {
        for (double p_db : {0.0, 15.0, 30.0}) {
            const auto s = reference_params(k, p_db);
            const auto pol = PowerPolicy::fixed(0.2, 0.5);
            const auto tc = config(100'000, 100 + k);
            CHECK(paired_verdict_agreement(s, pol, SchemeKind::TSRS, pol, SchemeKind::OSRS, tc) ==
                  tc.trials);
        }
    }
}

TEST_CASE("dual selection without jamming power is single selection") {
    const auto s = spread_params(3);
    const auto tc = config(100'000, 77);
    const auto off = PowerPolicy::fixed(0.2, 0.0);
    CHECK(paired_verdict_agreement(s, off, SchemeKind::ODRS, off, SchemeKind::OSRS, tc) ==
          tc.trials);
}

TEST_CASE("infeasible split is always in outage") {
    const auto s = reference_params(2, 20.0);
    const auto e = estimate_sop(s, PowerPolicy::fixed(0.7, 0.5), SchemeKind::OSRS, config(20'000));
    CHECK(e.p_hat == 1.0);
    CHECK(e.breakdown.total() == e.outages);
}

TEST_CASE("estimate agrees with the closed form at the reference point") {
    const auto s = reference_params(2, 10.0);
    const auto pol = PowerPolicy::fixed(0.2, 0.5);
    const QuadratureSpec q(300);
    const auto est = estimate_sop_paired(
        s, pol, {SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::ODRS}, config(200'000));
    int i = 0;
    for (auto scheme : {SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::ODRS}) {
        const double an = sop_total(s, pol, scheme, q).value;
        INFO(to_string(scheme) << " analytic=" << an << " mc=" << est[i].p_hat);
        CHECK(std::abs(an - est[i].p_hat) <= 3.0 * est[i].std_error);
        CHECK(est[i].breakdown.total() == est[i].outages);
        ++i;
    }
}

TEST_CASE("standard error scales as 1/sqrt(trials)") {
    const auto s = reference_params(2, 5.0);
    const auto pol = PowerPolicy::fixed(0.2, 0.5);
    const auto small = estimate_sop(s, pol, SchemeKind::OSRS, config(50'000));
    const auto large = estimate_sop(s, pol, SchemeKind::OSRS, config(200'000));
    CHECK_THAT(large.std_error / small.std_error, WithinAbs(0.5, 0.03));
    CHECK_THAT(small.std_error,
               WithinRel(std::sqrt(small.p_hat * (1 - small.p_hat) / small.trials), 1e-12));
}

TEST_CASE("results do not depend on the worker count") {
    const auto s = spread_params(3);
    const auto pol = PowerPolicy::fixed(0.2, 0.5);
    auto tc = config(150'000, 5);
    tc.chunk = 10'000;
    const auto one = estimate_sop_paired(s, pol, {SchemeKind::TMRC, SchemeKind::ODRS}, tc);
    tc.workers = 4;
    const auto four = estimate_sop_paired(s, pol, {SchemeKind::TMRC, SchemeKind::ODRS}, tc);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].outages == four[i].outages);
        CHECK(one[i].p_hat == four[i].p_hat);
        CHECK(one[i].breakdown.u1_only == four[i].breakdown.u1_only);
    }
    tc.seed = 6;
    const auto other = estimate_sop_paired(s, pol, {SchemeKind::TMRC}, tc);
    CHECK(other[0].outages != one[0].outages);
}

TEST_CASE("invalid trial configs are rejected") {
    const auto s = reference_params(2, 10.0);
    auto tc = config(0);
    CHECK_THROWS_AS(estimate_sop(s, PowerPolicy::fixed(0.2), SchemeKind::OSRS, tc),
                    std::invalid_argument);
    tc = config(10);
    tc.chunk = 0;
    CHECK_THROWS_AS(estimate_sop(s, PowerPolicy::fixed(0.2), SchemeKind::OSRS, tc),
                    std::invalid_argument);
}
