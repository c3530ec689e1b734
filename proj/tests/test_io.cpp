#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cascade/io.hpp"
#include "test_support.hpp"

using namespace cascade;

namespace {
const char* kBinaryDoc = R"({
  "u_size": 2, "v_size": 2,
  "prior": [0.6, 0.4],
  "cost1": [[9, 0], [4, 10]],
  "cost2": [[1, 0], [1, 0]],
  "cost3": [[9, 0], [4, 10]],
  "r1": 1.0, "r2": 1.0
})";
}

TEST_CASE("binary example document loads") {
    GameSpec s = load_spec(kBinaryDoc);
    CHECK(s.u_size == 2);
    CHECK(s.w1_size == 2); // defaults to u_size
    CHECK(s.w2_size == 2);
    CHECK(s.prior == std::vector<double>{0.6, 0.4});
    CHECK(s.cost1 == Matrix::from_rows({{9, 0}, {4, 10}}));
    CHECK(s.r1 == 1.0);
    CHECK(s.r2 == 1.0);
}

TEST_CASE("prior that does not sum to one is rejected by name") {
    std::string doc = kBinaryDoc;
    auto pos = doc.find("[0.6, 0.4]");
    doc.replace(pos, 10, "[0.6, 0.39]");
    try {
        load_spec(doc);
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("prior") != std::string::npos);
    }
}

TEST_CASE("negative rate is rejected by name") {
    std::string doc = kBinaryDoc;
    auto pos = doc.find("\"r1\": 1.0");
    doc.replace(pos, 9, "\"r1\": -0.5");
    try {
        load_spec(doc);
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("r1") != std::string::npos);
    }
}

TEST_CASE("missing and malformed fields name their path") {
    CHECK_THROWS_WITH(load_spec("{}"), Catch::Matchers::ContainsSubstring("u_size"));
    std::string doc = kBinaryDoc;
    auto pos = doc.find("[[1, 0], [1, 0]]");
    doc.replace(pos, 16, "[[1, 0], [1]]");
    CHECK_THROWS_WITH(load_spec(doc), Catch::Matchers::ContainsSubstring("cost2[1]"));
}

TEST_CASE("save then load round-trips field for field") {
    std::mt19937 rng(99);
    for (int i = 0; i < 10; ++i) {
        GameSpec s = test_support::random_binary_game(rng);
        GameSpec t = load_spec(save_spec(s));
        CHECK(t.u_size == s.u_size);
        CHECK(t.v_size == s.v_size);
        CHECK(t.w1_size == s.w1_size);
        CHECK(t.w2_size == s.w2_size);
        CHECK(t.prior == s.prior);
        CHECK(t.cost1 == s.cost1);
        CHECK(t.cost2 == s.cost2);
        CHECK(t.cost3 == s.cost3);
        CHECK(t.r1 == s.r1);
        CHECK(t.r2 == s.r2);
    }
}
