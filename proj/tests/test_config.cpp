#include "atomarray/config.hpp"

#include "doctest.h"

using namespace atomarray::config;

namespace {
const char* kSample = R"(
# sample run
schema_version = 1
lattice.a = 0.6
lattice.n_side = 30
beam.waist = 0.25
beam.waist_unit = L_a
disorder.sigmas = 0.02, 0.05, 0.1
disorder.realizations = 50
disorder.base_seed = 7
scan.min = -4
scan.max = 4
scan.steps = 41
)";
}

TEST_CASE("parse and typed fields") {
    const RunConfig cfg = parse_text(kSample);
    CHECK(cfg.lattice_a == doctest::Approx(0.6));
    CHECK(cfg.lattice_n_side == 30);
    CHECK(cfg.disorder_sigmas.size() == 3);
    CHECK(cfg.disorder_sigmas[1] == doctest::Approx(0.05));
    CHECK(cfg.disorder_base_seed == 7);
    CHECK(cfg.waist_lambda() == doctest::Approx(0.25 * 0.6 * 30));
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_text("schema_version = 1\nlattice.spacing = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("schema_version = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("schema_version = 1\nlattice.a = 0.6\nlattice.a = 0.7\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_text("schema_version = 1\nlattice.e_d = z\n"), ConfigError);
}

TEST_CASE("hash is stable under reordering and comments") {
    const RunConfig a = parse_text("schema_version = 1\nlattice.a = 0.7\nscan.steps = 11\n");
    const RunConfig b =
        parse_text("# comment\nscan.steps = 11\n\nschema_version = 1\nlattice.a = 0.7\n");
    CHECK(a.hash() == b.hash());
    const RunConfig c = parse_text("schema_version = 1\nlattice.a = 0.71\nscan.steps = 11\n");
    CHECK(a.hash() != c.hash());
}
