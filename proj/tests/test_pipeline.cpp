#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qprep/pipeline.hpp"
#include "support.hpp"

using namespace qprep;

namespace {

RunConfig direct_config() {
    RunConfig cfg;
    cfg.mode = RunMode::Direct;
    return cfg;
}

RunConfig dct_config(std::vector<std::int32_t> q = {8, 16, 32, 64, 70}) {
    RunConfig cfg;
    cfg.mode = RunMode::Dct;
    cfg.q_factors = std::move(q);
    return cfg;
}

const RatePoint& find_point(const std::vector<RatePoint>& points, const std::string& channel,
                            Scheme scheme, std::int32_t q_factor) {
    for (const RatePoint& p : points)
        if (p.channel == channel && p.scheme == scheme && p.q_factor == q_factor) return p;
    FAIL("rate point not found");
    return points.front();
}

}  // namespace

TEST_CASE("direct mode on an all-zero image reports zero bits", "[pipeline]") {
    const Image zero(8, 8, 1, std::vector<std::uint8_t>(64, 0));
    for (const RatePoint& p : run_direct(zero, direct_config())) {
        CHECK(p.cost.br == 0);
        CHECK(std::isinf(p.psnr_db));
    }
}

TEST_CASE("direct mode reproduces the worked 16x16 example", "[pipeline]") {
    const std::vector<RatePoint> points =
        run_direct(testsupport::single_pixel_16x16(), direct_config());
    CHECK(find_point(points, "gray", Scheme::Scmfrqi, 0).cost.br == 14);
    CHECK(find_point(points, "gray", Scheme::Efrqi, 0).cost.br == 19);
}

TEST_CASE("direct mode favors SCMFRQI whenever pixels exist", "[pipeline]") {
    const Image img = testsupport::rgb_texture(32, 24, 3);  // non-square, non-pow2 height
    const std::vector<RatePoint> points = run_direct(img, direct_config());
    REQUIRE(points.size() == 6);
    for (const std::string channel : {"R", "G", "B"}) {
        const RatePoint& scm = find_point(points, channel, Scheme::Scmfrqi, 0);
        const RatePoint& efr = find_point(points, channel, Scheme::Efrqi, 0);
        REQUIRE(scm.cost.n_tcn >= 1);
        CHECK(scm.cost.br < efr.cost.br);
        CHECK(scm.cost.br ==
              scm.cost.q_ones + scm.cost.s_bit + scm.cost.t_bit + scm.cost.a_bit + scm.cost.b_e);
    }
}

TEST_CASE("dct mode on a constant-128 image is lossless and free", "[pipeline]") {
    const Image flat(32, 32, 1, std::vector<std::uint8_t>(32 * 32, 128));
    for (const RatePoint& p : run_dct(flat, dct_config())) {
        CHECK(p.cost.br == 0);  // level shift zeroes the whole spectrum
        CHECK(std::isinf(p.psnr_db));
    }
}

TEST_CASE("dct mode trends on a textured image", "[pipeline]") {
    const Image img = testsupport::gradient_texture(64, 64, 11);
    const std::vector<RatePoint> points = run_dct(img, dct_config());
    const std::vector<std::int32_t> steps = {8, 16, 32, 64, 70};
    for (std::size_t i = 1; i < steps.size(); ++i) {
        const RatePoint& coarse = find_point(points, "gray", Scheme::Scmfrqi, steps[i]);
        const RatePoint& fine = find_point(points, "gray", Scheme::Scmfrqi, steps[i - 1]);
        CHECK(coarse.cost.br <= fine.cost.br);
        CHECK(coarse.psnr_db <= fine.psnr_db);
    }
    for (const std::int32_t q : steps) {
        CHECK(find_point(points, "gray", Scheme::Scmfrqi, q).cost.br <
              find_point(points, "gray", Scheme::Efrqi, q).cost.br);
    }
}

TEST_CASE("dct mode requires quantization factors", "[pipeline]") {
    const Image img = testsupport::gradient_texture(16, 16, 5);
    CHECK_THROWS_AS(run_dct(img, dct_config({})), ArgumentError);
    RunConfig no_scheme = dct_config();
    no_scheme.schemes.clear();
    CHECK_THROWS_AS(run_dct(img, no_scheme), ArgumentError);
}

TEST_CASE("non-multiple-of-block image dimensions are padded", "[pipeline]") {
    const Image img = testsupport::gradient_texture(12, 10, 19);
    const std::vector<RatePoint> direct = run_direct(img, direct_config());
    CHECK(find_point(direct, "gray", Scheme::Scmfrqi, 0).cost.br <
          find_point(direct, "gray", Scheme::Efrqi, 0).cost.br);
    const std::vector<RatePoint> dct = run_dct(img, dct_config({8}));
    const RatePoint& p = find_point(dct, "gray", Scheme::Scmfrqi, 8);
    CHECK(p.psnr_db > 20.0);  // reconstruction compares against the unpadded image
}

TEST_CASE("verify_by_simulation round-trips blocks through the simulator", "[pipeline]") {
    const std::vector<std::int32_t> region = {5, 0, 0, 0, 0, 0, 0, 0,
                                              0, 0, 0, 0, 0, 0, 0, 0};
    const VerifyResult scm = verify_by_simulation(region, 4, Scheme::Scmfrqi);
    CHECK(scm.pass);
    CHECK(scm.fidelity < 1.0);
    CHECK(scm.branches >= 2);

    const VerifyResult efr = verify_by_simulation(region, 4, Scheme::Efrqi);
    CHECK(efr.pass);
    CHECK(efr.fidelity == Catch::Approx(1.0).margin(1e-12));  // no resets to measure
    CHECK(efr.branches == 1);

    const std::vector<std::int32_t> zeros(16, 0);
    const VerifyResult trivial = verify_by_simulation(zeros, 4, Scheme::Scmfrqi);
    CHECK(trivial.pass);
    CHECK(trivial.fidelity == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(verify_by_simulation({1, 2, 3}, 4, Scheme::Scmfrqi), ArgumentError);
}

TEST_CASE("verify_run samples blocks across channels and factors", "[pipeline]") {
    const Image img = testsupport::sparse_dots(32, 32, 13, 0.05);
    RunConfig cfg = direct_config();
    cfg.verify_blocks = 4;
    const std::vector<VerifyRecord> records = verify_run(img, cfg);
    REQUIRE(!records.empty());
    for (const VerifyRecord& rec : records) {
        INFO(rec.result.message);
        CHECK(rec.result.pass);
    }

    RunConfig dct_cfg = dct_config({16});
    dct_cfg.verify_blocks = 3;
    const std::vector<VerifyRecord> dct_records = verify_run(img, dct_cfg);
    REQUIRE(!dct_records.empty());
    for (const VerifyRecord& rec : dct_records) {
        INFO(rec.result.message);
        CHECK(rec.result.pass);
    }
}

TEST_CASE("representative_circuit dumps the first nonzero block", "[pipeline]") {
    const auto circuit =
        representative_circuit(testsupport::single_pixel_16x16(), direct_config());
    REQUIRE(circuit.has_value());
    const Circuit reparsed = parse_circuit(dump_circuit(*circuit));
    CHECK(reparsed == *circuit);
    const ExtractedMap extracted =
        extract_map(run_circuit(reparsed, ResetMode::Idealized));
    REQUIRE(extracted.entries.size() == 1);
    CHECK(extracted.entries.front() == MapEntry{0, 0, 5});

    const Image zero(8, 8, 1, std::vector<std::uint8_t>(64, 0));
    CHECK_FALSE(representative_circuit(zero, direct_config()).has_value());
}

TEST_CASE("coefficient grids round-trip through JSON", "[pipeline]") {
    const Image img = testsupport::gradient_texture(16, 16, 23);
    const CoefficientGrid grid = compute_quantized_coefficients(img, 8, 4);
    const CoefficientGrid back = coefficients_from_json(coefficients_to_json(grid));
    CHECK(back == grid);
}
