#include <doctest.h>

#include <sstream>

#include "buffon/errors.hpp"
#include "buffon/io.hpp"

using namespace buffon;

TEST_CASE("csv quoting")
{
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(io::csv_field("two\nlines") == "\"two\nlines\"");
    std::ostringstream out;
    io::CsvWriter csv(out);
    csv.row({"x", "1,2"});
    csv.row({"", "3"});
    CHECK(out.str() == "x,\"1,2\"\r\n,3\r\n");
}

TEST_CASE("doubles round-trip")
{
    for (double x : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5})
        CHECK(std::stod(io::format_double(x)) == x);
    CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("spec serialization round-trips")
{
    for (const char* name : {"fourcorner", "fig4", "slv25", "baker25"}) {
        const auto spec = sets::named_spec(name);
        const auto back = io::spec_from_json(io::spec_to_json(spec));
        CHECK(std::get<sets::ProductSpec>(back) == std::get<sets::ProductSpec>(spec));
    }
    const auto gasket = sets::named_spec("gasket");
    const auto back = std::get<sets::SelfSimilarSpec>(io::spec_from_json(io::spec_to_json(gasket)));
    const auto& orig = std::get<sets::SelfSimilarSpec>(gasket);
    CHECK(back.L == orig.L);
    CHECK(back.centers == orig.centers);
    CHECK(back.base == orig.base);

    const auto inline_spec = io::resolve_spec(R"({"L": 4, "A": [0, 3], "B": [0, 3]})");
    CHECK(std::get<sets::ProductSpec>(inline_spec) == std::get<sets::ProductSpec>(sets::named_spec("fourcorner")));
    CHECK_THROWS_AS(io::resolve_spec("{\"L\": 4"), InvalidArgument);
    CHECK_THROWS_AS(io::resolve_spec(R"({"A": [0]})"), InvalidArgument);
    CHECK_THROWS_AS(io::resolve_spec("/no/such/file.json"), InvalidArgument);
}

TEST_CASE("integer lists")
{
    CHECK(io::parse_int_list("0,3,4,8,9") == std::vector<int>{0, 3, 4, 8, 9});
    CHECK(io::parse_int_list("0, 3") == std::vector<int>{0, 3});
    CHECK_THROWS_AS(io::parse_int_list("0,x"), InvalidArgument);
}

TEST_CASE("json key order is stable")
{
    io::Json a{{"b", 1}, {"a", 2}};
    io::Json b;
    b["a"] = 2;
    b["b"] = 1;
    CHECK(a.dump() == b.dump());
    CHECK(a.dump() == R"({"a":2,"b":1})");
}
