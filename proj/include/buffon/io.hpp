#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "buffon/interval_union.hpp"
#include "buffon/rational.hpp"
#include "buffon/sets.hpp"

namespace buffon::io {

using Json = nlohmann::json;

/// {"L": int, "A": [...], "B": [...]} or {"L": int, "centers": [[re, im], ...], "base": [...]}
Json spec_to_json(const sets::SetSpec& spec);
sets::SetSpec spec_from_json(const Json& j);

/// A built-in name, inline JSON (leading '{') or a path to a JSON file.
sets::SetSpec resolve_spec(const std::string& source);

/// Shortest decimal that round-trips.
std::string format_double(double x);

std::string csv_field(std::string_view s);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

Json intervals_to_json(const IntervalUnion<double>& u);
Json intervals_to_json(const IntervalUnion<Rational>& u);

/// Parses "0,3,4" into integers.
std::vector<int> parse_int_list(std::string_view s);

} // namespace buffon::io
