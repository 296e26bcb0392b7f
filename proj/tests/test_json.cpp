#include <doctest.h>

#include <fstream>
#include <sstream>

#include <rokhlin/json_io.hpp>

using namespace rokhlin;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal spec parses") {
    auto spec = parse_spec_text(
        R"({"group":{"kind":"cyclic","n":2},"levels":[{"dim":2,"body":{"type":"mults","mults":[1,1]}}],"tail":null})");
    CHECK(spec.group.order() == 2);
    CHECK(spec.prefix.size() == 1);
    CHECK(spec.prefix[0].dim == 2);
    CHECK(!spec.has_tail());
}

TEST_CASE("diagnostics carry field paths") {
    CHECK_THROWS_WITH_AS(
        parse_spec_text(
            R"({"group":{"kind":"cyclic","n":2},"levels":[{"dim":3,"body":{"type":"mults","mults":[1,1]}}],"tail":null})"),
        doctest::Contains("levels[0]"), input_error);
    CHECK_THROWS_WITH_AS(
        parse_spec_text(R"({"group":{"kind":"frobnicate"},"levels":[],"tail":null})"),
        doctest::Contains("group.kind"), input_error);
    CHECK_THROWS_AS(parse_spec_text("not json at all"), input_error);
}

TEST_CASE("serialize then parse is the identity on the bundled corpus") {
    const char* files[] = {"z2_regular.json",   "z2_21_periodic.json", "z2_neither.json",
                           "z3_regular.json",   "z2_prefix_only.json", "z4_mixed.json",
                           "z2z2_regular.json", "z2_model_11.json",    "s3_table.json"};
    for (const char* f : files) {
        CAPTURE(f);
        auto spec = parse_spec_text(slurp(std::string(ROKHLIN_DATA_DIR) + "/" + f));
        std::string once = canonical_dump(spec_json(spec));
        auto again = parse_spec_text(once);
        CHECK(canonical_dump(spec_json(again)) == once);
        CHECK(report_digest(spec) == report_digest(again));
    }
}

TEST_CASE("digest is canonical but content sensitive") {
    std::string compact =
        R"({"group":{"kind":"cyclic","n":2},"levels":[{"dim":2,"body":{"type":"mults","mults":[1,1]}}],"tail":null})";
    std::string spaced =
        "{ \"group\": {\"kind\": \"cyclic\", \"n\": 2},\n \"levels\": [ {\"dim\": 2, "
        "\"body\": {\"type\": \"mults\", \"mults\": [1, 1]}} ],\n \"tail\": null }";
    CHECK(report_digest(parse_spec_text(compact)) == report_digest(parse_spec_text(spaced)));

    std::string changed =
        R"({"group":{"kind":"cyclic","n":2},"levels":[{"dim":3,"body":{"type":"mults","mults":[2,1]}}],"tail":null})";
    CHECK(report_digest(parse_spec_text(compact)) != report_digest(parse_spec_text(changed)));
}

TEST_CASE("cyclotomic values round-trip through JSON") {
    auto z = Cyclotomic::root_of_unity(12, 5) + Cyclotomic(Rational(-3, 7));
    auto back = parse_cyclotomic(cyclotomic_json(z), "x");
    CHECK(back == z);
    CHECK(parse_cyclotomic(json("2/3"), "x") == Cyclotomic(Rational(2, 3)));
    CHECK(parse_cyclotomic(json(-4), "x") == Cyclotomic(-4));
}

TEST_CASE("matrices round-trip through JSON") {
    ComplexMatrix m(2, 2);
    m << std::complex<double>(1, -2), std::complex<double>(0, 0.5),
        std::complex<double>(-0.25, 0), std::complex<double>(3, 4);
    auto back = parse_matrix(matrix_json(m), "m");
    CHECK((back - m).norm() == 0.0);
}

TEST_CASE("canonical dump is stable and sorted") {
    json j{{"zebra", 1}, {"alpha", json::array({1.5, json{{"b", 2}, {"a", 1}}})}};
    CHECK(canonical_dump(j) == R"({"alpha":[1.5,{"a":1,"b":2}],"zebra":1})");
    // 17-significant-digit floats round-trip exactly.
    double x = 0.1 + 0.2;
    json jf = json::array({x});
    std::string text = canonical_dump(jf);
    CHECK(json::parse(text)[0].get<double>() == x);
}

TEST_CASE("table group round-trips") {
    auto spec = parse_spec_text(slurp(std::string(ROKHLIN_DATA_DIR) + "/s3_table.json"));
    CHECK(spec.group.kind() == GroupKind::Table);
    CHECK(spec.group.order() == 6);
    auto j = spec_json(spec);
    auto again = parse_spec(j);
    CHECK(again.group == spec.group);
}
