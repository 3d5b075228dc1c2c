#include "doctest.h"
#include "slicebound/bodies.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/io.hpp"

using namespace slicebound;

TEST_CASE("decomposition round trip") {
    JohnDecomposition d = hadamard_decomposition(2, 3);
    Json j = to_json(d);
    JohnDecomposition e = decomposition_from_json(parse_json(j.dump(), "test"));
    CHECK((e.vectors() - d.vectors()).norm() == 0.0);
    CHECK((e.weights() - d.weights()).norm() == 0.0);
    CHECK(e.centered() == d.centered());
    CHECK(digest(to_json(e)) == digest(j));
    CHECK(digest(j).size() == 16);
}

TEST_CASE("field errors name the field") {
    Json j = to_json(cube_decomposition(2));
    j["weights"] = "x";
    try {
        decomposition_from_json(j);
        FAIL("expected StructuralError");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).find("weights") != std::string::npos);
    }
    j = to_json(cube_decomposition(2));
    j.erase("vectors");
    CHECK_THROWS_AS(decomposition_from_json(j), StructuralError);
    CHECK_THROWS_AS(parse_json("{not json", "inline"), StructuralError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), StructuralError);
}

TEST_CASE("subspace forms") {
    CHECK(subspace_from_json(Json::parse(R"({"coordinate":[0,2]})"), 3).dim() == 2);
    CHECK(subspace_from_json(Json::parse(R"({"basis":[[1,1,0]]})"), 3).dim() == 1);
    CHECK(subspace_from_json(Json::parse(R"([[0,0,1]])"), 3).dim() == 1);
    CHECK(subspace_from_json(Json::parse(R"({"orthogonal_to":[[1,1,1]]})"), 3).dim() == 2);
    CHECK(subspace_from_json(Json("full"), 3).dim() == 3);
    CHECK_THROWS_AS(subspace_from_json(Json::parse(R"({"basis":[[1,1]]})"), 3), StructuralError);
    Subspace h = Subspace::coordinate(4, {1, 3});
    Subspace g = subspace_from_json(to_json(h), 4);
    CHECK((g.basis() - h.basis()).norm() <= 1e-15);
}

TEST_CASE("problem input with optional fields") {
    Json j{{"decomposition", to_json(cube_decomposition(2))}, {"p", 1.5}, {"lambda", 2.0}};
    j["alphas"] = {1.0, 2.0, 1.0, 2.0};
    j["subspace"] = Json{{"coordinate", {0}}};
    ProblemInput in = problem_from_json(j);
    CHECK(in.p == 1.5);
    CHECK(in.lambda == 2.0);
    REQUIRE(in.alphas);
    CHECK(in.alphas->size() == 4);
    REQUIRE(in.subspace);
    CHECK(in.subspace->dim() == 1);
    ProblemInput top = problem_from_json(to_json(cube_decomposition(2)));
    CHECK_FALSE(top.subspace);
    CHECK(top.p == 1.0);
}
