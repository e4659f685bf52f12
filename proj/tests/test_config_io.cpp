#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pulsefront/config.hpp"
#include "pulsefront/experiments.hpp"
#include "pulsefront/io.hpp"

using namespace pulsefront;

TEST_CASE("config parsing: sections, comments, lists, errors") {
    const std::string text = R"(
# comment
[medium]
kind = cubic
a = 1.0
b = 0.25
b_sin = 0.1   # inline comment

[experiment]
kind = speed-sweep
L = 12, 24, 48
)";
    const ConfigDoc doc = parse_config(text);
    REQUIRE(doc.get("medium", "kind") == "cubic");
    REQUIRE(doc.get_double("medium", "b_sin") == 0.1);
    const auto Ls = doc.get_list("experiment", "L");
    REQUIRE(Ls == std::vector<double>{12.0, 24.0, 48.0});
    REQUIRE(doc.get_or("output", "dir", "out") == "out");

    REQUIRE_THROWS_AS(doc.get("medium", "missing"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_config("key = 1\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_config("[medium\nk = v\n"), std::invalid_argument);
}

TEST_CASE("medium round trip is lossless for the built-ins") {
    auto check_roundtrip = [](const PeriodicMedium& med) {
        ConfigDoc doc;
        medium_to_config(med, doc);
        const std::string text = doc.serialize();
        const PeriodicMedium back = medium_from_config(parse_config(text));

        REQUIRE(back.spec.kind == med.spec.kind);
        REQUIRE(back.gamma0 == med.gamma0);
        REQUIRE(back.delta0 == med.delta0);
        for (int i = 0; i <= 64; ++i) {
            const double y = i / 64.0;
            REQUIRE(back.a(y) == med.a(y));
            REQUIRE(back.b(y) == med.b(y));
            for (const double u : {0.13, 0.5, 0.92})
                REQUIRE(back.f(y, u) == med.f(y, u));
        }
        // serialization is a fixed point
        ConfigDoc doc2;
        medium_to_config(back, doc2);
        REQUIRE(doc2.serialize() == text);
    };

    check_roundtrip(make_cubic_medium(1.0, 0.25, 0.1));
    check_roundtrip(make_cubic_medium(0.5, 1.0 / 3.0, 0.07, 0.2));
    check_roundtrip(make_a4_medium(0.25, 0.02, 0.1));
    check_roundtrip(make_table_medium({1.0, 1.2, 0.9, 1.05}, {0.25, 0.3, 0.2, 0.27}));
}

TEST_CASE("unknown medium kind is rejected") {
    ConfigDoc doc;
    doc.set("medium", "kind", "pentic");
    REQUIRE_THROWS_AS(medium_from_config(doc), std::invalid_argument);
}

TEST_CASE("experiment config defaults and validation") {
    const std::string text = R"(
[medium]
kind = cubic
a = 1.0
b = 0.25
[experiment]
kind = speed-sweep
)";
    const ExperimentConfig cfg = experiment_from_doc(parse_config(text), text);
    REQUIRE(cfg.experiment == "speed-sweep");
    REQUIRE(cfg.Ls == std::vector<double>{12.0, 24.0, 48.0});
    REQUIRE(cfg.h == 0.05);
    REQUIRE(cfg.jobs == 1);
    REQUIRE(cfg.hash.size() == 16);

    const std::string bad = R"(
[medium]
kind = cubic
a = 1.0
b = 0.25
[experiment]
kind = speed-sweep
L = 2
)";
    REQUIRE_THROWS_AS(experiment_from_doc(parse_config(bad), bad), std::invalid_argument);
}

TEST_CASE("config hash is stable and content-sensitive") {
    REQUIRE(config_hash("abc") == config_hash("abc"));
    REQUIRE(config_hash("abc") != config_hash("abd"));
    REQUIRE(config_hash("abc").size() == 16);
}

TEST_CASE("table writers produce deterministic text") {
    Table t;
    t.name = "demo";
    t.meta = {{"config_hash", "00ff"}, {"h", "0.05"}};
    t.columns = {"L", "value", "pass"};
    t.add_row({"12", "0.3", "1"});
    t.add_row({"24", "0.31", "1"});
    REQUIRE(t.all_passed());
    const std::string a = csv_text(t);
    const std::string b = csv_text(t);
    REQUIRE(a == b);
    REQUIRE(a.find("# config_hash = 00ff\n") != std::string::npos);
    REQUIRE(a.find("L,value,pass\n") != std::string::npos);

    t.add_row({"48", "0.4", "0"});
    REQUIRE_FALSE(t.all_passed());
    REQUIRE_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("unknown experiment kind is rejected") {
    const std::string text = R"(
[medium]
kind = cubic
a = 1.0
b = 0.25
[experiment]
kind = nonsense
)";
    const ExperimentConfig cfg = experiment_from_doc(parse_config(text), text);
    REQUIRE_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}
