#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include <coopnoma/experiment.hpp>

using namespace coopnoma;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
        "K": 2, "mR": 2, "mU": 2, "mE": 2,
        "omegaR_dB": 10, "omega1_dB": 12, "omega2_dB": 10, "omegaE_dB": -5,
        "P_dB": 10, "R1_th": 0.2, "R2_th": 0.1, "R1_s": 0.1, "R2_s": 0.2,
        "alpha1": 0.2, "alphaJ": 0.5, "scheme": ["TMRC", "OSRS", "ODRS"]
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string csv(const std::vector<CsvRow>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

}  // namespace

TEST_CASE("defaults") {
    const auto c = parse_config(base_config());
    CHECK(c.quad_n == 300);
    CHECK(c.mc.trials == 1'000'000);
    CHECK(c.mc.seed == 42);
    CHECK(c.engines == std::vector<Engine>{Engine::Analytic});
    CHECK(c.scenario.sigma2 == 1.0);
    CHECK(c.sweep_var == SweepVar::None);
    CHECK(c.sweep_values == std::vector<double>{0.0});
}

TEST_CASE("dB conversion and derived parameters") {
    const auto c = parse_config(base_config());
    const auto p = c.scenario.params();
    CHECK_THAT(p.links.relay_user1.omega(), WithinRel(std::pow(10.0, 1.2), 1e-14));
    CHECK_THAT(p.links.relay_eaves.omega(), WithinRel(std::pow(10.0, -0.5), 1e-14));
    CHECK_THAT(p.p_source, WithinRel(10.0, 1e-14));
    CHECK_THAT(db_to_linear(-3.0), WithinRel(0.5011872336272722, 1e-14));
    auto j = base_config();
    j["epsilon1"] = 1.5;
    j["epsilon2"] = 2.0;
    const auto s = parse_config(j).scenario;
    const auto a = s.scaling();
    CHECK_THAT(a.epsilon1, WithinRel(1.5, 1e-12));
    CHECK_THAT(a.epsilon2, WithinRel(2.0, 1e-12));
    CHECK_THAT(a.omega2, WithinRel(10.0, 1e-12));
}

TEST_CASE("omega2 sweep moves Omega1 and Omega_R with it") {
    const auto s = parse_config(base_config()).scenario.with(SweepVar::Omega2, 30.0);
    CHECK(s.omega2_db == 30.0);
    CHECK(s.omega1_db == 32.0);
    CHECK(s.omega_r_db == 30.0);
    CHECK(s.omega_e_db == -5.0);
}

TEST_CASE("config errors name the key") {
    auto j = base_config();
    j["alphaJ"] = 1.0;
    CHECK_THAT(error_of(j), ContainsSubstring("alphaJ must be in [0,1)"));
    j = base_config();
    j.erase("mR");
    CHECK_THAT(error_of(j), ContainsSubstring("mR"));
    j = base_config();
    j["K"] = 0;
    CHECK_THAT(error_of(j), ContainsSubstring("K"));
    j = base_config();
    j["mU"] = 1.5;
    CHECK_THAT(error_of(j), ContainsSubstring("mU"));
    j = base_config();
    j["scheme"] = json::array({"XYZ"});
    CHECK_THAT(error_of(j), ContainsSubstring("scheme"));
    j = base_config();
    j["sweep"] = {{"var", "nope"}, {"values", {1}}};
    CHECK_THAT(error_of(j), ContainsSubstring("sweep.var"));
    j = base_config();
    j.erase("alpha1");
    CHECK_THAT(error_of(j), ContainsSubstring("alpha1"));
    j = base_config();
    j.erase("alpha1");
    j["dpa"] = {{"mu", 5}, {"varpi", 0.1}};
    j["sweep"] = {{"var", "alpha1"}, {"values", {0.1}}};
    CHECK_THAT(error_of(j), ContainsSubstring("alpha1"));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("scheme list accepts a single name") {
    auto j = base_config();
    j["scheme"] = "TSRS";
    CHECK(parse_config(j).schemes == std::vector<SchemeKind>{SchemeKind::TSRS});
}

TEST_CASE("empty sweep gives a header-only CSV") {
    auto j = base_config();
    j["sweep"] = {{"var", "rho"}, {"values", json::array()}};
    const auto rows = run_sweep(parse_config(j));
    CHECK(rows.empty());
    CHECK(csv(rows) == "sweep_var,sweep_value,scheme,engine,sop,stderr,trials,sdo,error\n");
}

TEST_CASE("sweep rows are sorted and complete") {
    auto j = base_config();
    j["sweep"] = {{"var", "rho"}, {"values", {20, 0, 10}}};
    j["engine"] = {"analytic", "asymptotic"};
    const auto rows = run_sweep(parse_config(j));
    REQUIRE(rows.size() == 3 * 3 * 2);
    CHECK(rows.front().sweep_value == 0.0);
    CHECK(rows.back().sweep_value == 20.0);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.sop >= 0.0);
        CHECK(r.sop <= 1.0);
        CHECK_FALSE(r.sdo.has_value());  // fixed split
    }
}

TEST_CASE("infeasible points are reported per row") {
    auto j = base_config();
    j["sweep"] = {{"var", "alpha1"}, {"values", {0.2, 0.8}}};
    const auto rows = run_sweep(parse_config(j));
    for (const auto& r : rows) {
        if (r.sweep_value == 0.8) CHECK(r.sop == 1.0);
    }
}

TEST_CASE("alpha1 ordering on a moderate-eavesdropper grid") {
    // Larger alpha1 starves U2, so the SOP rises towards the security limit; OSRS
    // stays below TMRC throughout.
    auto j = base_config();
    j["omegaE_dB"] = -10;
    j["sweep"] = {{"var", "alpha1"}, {"values", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}}};
    const auto rows = run_sweep(parse_config(j));
    REQUIRE(rows.size() == 18);
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        CHECK(rows[i + 1].sop <= rows[i].sop);
    }
    for (std::size_t i = 3; i < rows.size(); ++i) {
        CHECK(rows[i].sop >= rows[i - 3].sop - 1e-12);
    }
}

TEST_CASE("dynamic allocation rows carry the diversity order") {
    auto j = base_config();
    j.erase("alpha1");
    j["dpa"] = {{"mu", 5}, {"varpi", 0.1}};
    j["engine"] = {"asymptotic"};
    j["sweep"] = {{"var", "omega2"}, {"values", {30}}};
    const auto rows = run_sweep(parse_config(j));
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].sdo.has_value());
    CHECK_THAT(*rows[0].sdo, WithinRel(3.6, 1e-12));
    CHECK_THAT(csv(rows), ContainsSubstring(",3.6,"));
}

TEST_CASE("validation z-score") {
    SopEstimate e;
    e.p_hat = 0.5;
    e.std_error = 0.01;
    e.trials = 1000;
    CHECK_THAT(validation_z(0.52, e), WithinRel(2.0, 1e-12));
    e.p_hat = 0.0;
    e.std_error = 0.0;
    CHECK_THAT(validation_z(1e-3, e), WithinRel(1.0, 1e-12));
}

TEST_CASE("validate passes on the reference point and is seed-stable") {
    auto j = base_config();
    j["trials"] = 50'000;
    j["sweep"] = {{"var", "rho"}, {"values", {0, 10, 20}}};
    const auto c = parse_config(j);
    const auto rep = validate(c);
    CHECK(rep.pass);
    CHECK(rep.points.size() == 9);
    CHECK(rep.errors.empty());
    const auto again = validate(c);
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        CHECK(rep.points[i].p_hat == again.points[i].p_hat);
    }
}

TEST_CASE("number formatting is locale-free and round-trips") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(3.6) == "3.6");
    CHECK(std::stod(format_number(1.0 / 3.0)) == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("plain") == "plain");
}
