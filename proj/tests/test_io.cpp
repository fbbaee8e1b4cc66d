#include <doctest.h>

#include <filesystem>

#include "fpt/error.hpp"
#include "fpt/io.hpp"
#include "helpers.hpp"

using namespace fpt;
using nlohmann::json;

TEST_SUITE("io") {

TEST_CASE("boundary documents round-trip") {
    const Boundary q = io::boundary_from_json(json::parse(R"({"kind":"quadratic","a":1,"coefficients":[0,0.5]})"));
    CHECK(q.f(2.0) == doctest::Approx(3.0));
    CHECK(io::boundary_from_json(io::boundary_to_json(q)).f(1.3) == q.f(1.3));
    CHECK(boundary_digest(io::boundary_from_json(io::boundary_to_json(q))) == boundary_digest(q));

    const Boundary tab = io::boundary_from_json(json::parse(R"({"kind":"tabulated","a":1,"knots":[[0,1],[1,1.5],[2,3]]})"));
    CHECK(tab.horizon() == 2.0);
    CHECK(boundary_digest(io::boundary_from_json(io::boundary_to_json(tab))) == boundary_digest(tab));
}

TEST_CASE("malformed boundary documents") {
    CHECK_THROWS_AS(io::boundary_from_json(json::parse("[1,2]")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"a":1,"coefficients":[1]})")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"kind":"cubic","a":1,"coefficients":[1]})")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"kind":"linear","a":"1","coefficients":[1]})")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"kind":"linear","a":1,"coefficients":["x"]})")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"kind":"tabulated","a":1,"knots":[[0]]})")), InvalidBoundary);
    CHECK_THROWS_AS(io::boundary_from_json(json::parse(R"({"kind":"quadratic","a":1,"coefficients":[0,-1]})")),
                    NonConvexBoundary);
    const std::string path = testing::scratch_path("broken.json");
    io::write_atomic(path, "{not json");
    CHECK_THROWS_AS(io::read_boundary_file(path), InvalidBoundary);
    CHECK_THROWS_AS(io::read_boundary_file(testing::scratch_path("missing.json")), InvalidArgument);
}

TEST_CASE("density CSV") {
    DensityCurve c;
    c.s_grid = {0.5, 1.0};
    c.phi = {0.123456789012, 0.0539909665};
    c.method = DensityMethod::fk_pde;
    const std::string csv = io::density_csv(c);
    CHECK(csv == "s,phi,ci_low,ci_high,method\n0.5,0.123456789,,,fk_pde\n1,0.0539909665,,,fk_pde\n");
    const DensityCurve back = io::parse_density_csv(csv);
    CHECK(back.phi[0] == doctest::Approx(0.123456789).epsilon(1e-12));
    CHECK_FALSE(back.ci_low.has_value());

    c.ci_low = std::vector<double>{0.1, 0.05};
    c.ci_high = std::vector<double>{0.2, 0.06};
    const DensityCurve banded = io::parse_density_csv(io::density_csv(c));
    CHECK(banded.ci_high->at(1) == doctest::Approx(0.06));
    CHECK(io::density_json(c)["schema_version"] == io::kSchemaVersion);
    CHECK_THROWS_AS(io::parse_density_csv("s,phi\n1,2\n"), InvalidArgument);
    CHECK_THROWS_AS(io::parse_density_csv("s,phi,ci_low,ci_high,method\n1,abc,,,fk_pde\n"), InvalidArgument);
}

TEST_CASE("other CSV layouts") {
    const BoundsEnvelope env{{1.0}, {0.1}, {0.2}};
    CHECK(io::envelope_csv(env) == "s,lower,upper\n1,0.1,0.2\n");
    const FieldGrid f = make_field(uniform_grid(0.0, 1.0, 1), uniform_grid(0.0, 1.0, 1),
                                   [](double t, double x) { return t + 2 * x; }, FieldMeaning::w_field);
    CHECK(io::field_csv(f) == "t,x,value\n0,0,0\n0,1,2\n1,0,1\n1,1,3\n");
    const PathBatch batch = sample_bridge({1.0, 1.0}, 10, 2, 0, BridgeScheme::three_bridge);
    const std::string paths = io::paths_csv(batch);
    CHECK(paths.rfind("path_id,t,x\n0,0,1\n", 0) == 0);
    CHECK(std::count(paths.begin(), paths.end(), '\n') == 1 + 2 * 11);
}

TEST_CASE("atomic writes") {
    const std::string path = testing::scratch_path("out.txt");
    io::write_atomic(path, "first");
    io::write_atomic(path, "second");
    CHECK(io::read_text(path) == "second");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333");
}

}
