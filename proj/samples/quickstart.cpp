// Closed-form vs simulated SOP for one operating point.
//
//   ./quickstart [P_dB]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <coopnoma/analytic.hpp>
#include <coopnoma/montecarlo.hpp>

int main(int argc, char** argv) {
    using namespace coopnoma;
    const double p_db = argc > 1 ? std::atof(argv[1]) : 10.0;
    auto lin = [](double db) { return std::pow(10.0, db / 10.0); };

    SystemParams params;
    params.relays = 2;
    params.links = LinkSet{NakagamiParams(2, lin(10.0)), NakagamiParams(2, lin(12.0)),
                           NakagamiParams(2, lin(10.0)), NakagamiParams(2, lin(-5.0))};
    params.p_source = params.p_relay = lin(p_db);
    params.r1_th = 0.2;
    params.r2_th = 0.1;
    params.r1_s = 0.1;
    params.r2_s = 0.2;
    const auto policy = PowerPolicy::fixed(0.2, 0.5);

    const QuadratureSpec quad;
    TrialConfig mc;
    mc.trials = 200'000;
    const std::vector<SchemeKind> schemes{SchemeKind::TMRC, SchemeKind::OSRS, SchemeKind::ODRS};
    const auto sim = estimate_sop_paired(params, policy, schemes, mc);

    std::printf("P = %.1f dB\n%-6s %12s %12s %10s\n", p_db, "scheme", "analytic", "simulated",
                "stderr");
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const double exact = sop_total(params, policy, schemes[i], quad).value;
        std::printf("%-6s %12.6g %12.6g %10.2g\n", std::string(to_string(schemes[i])).c_str(),
                    exact, sim[i].p_hat, sim[i].std_error);
    }
}
