#include "buffon/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "buffon/errors.hpp"

namespace buffon::io {

Json spec_to_json(const sets::SetSpec& spec)
{
    if (const auto* p = std::get_if<sets::ProductSpec>(&spec))
        return {{"L", p->L}, {"A", p->A}, {"B", p->B}};
    const auto& s = std::get<sets::SelfSimilarSpec>(spec);
    auto points = [](const std::vector<sets::Complex>& zs) {
        Json out = Json::array();
        for (const auto& z : zs)
            out.push_back({z.real(), z.imag()});
        return out;
    };
    return {{"L", s.L}, {"centers", points(s.centers)}, {"base", points(s.base)}};
}

sets::SetSpec spec_from_json(const Json& j)
{
    try {
        require(j.is_object() && j.contains("L"), "spec needs an object with \"L\"");
        const int L = j.at("L").get<int>();
        if (j.contains("A") || j.contains("B"))
            return sets::make_product_spec(L, j.at("A").get<std::vector<int>>(), j.at("B").get<std::vector<int>>());
        require(j.contains("centers"), "spec needs \"A\"/\"B\" or \"centers\"");
        auto points = [](const Json& arr) {
            std::vector<sets::Complex> out;
            for (const auto& p : arr) {
                require(p.is_array() && p.size() == 2, "points are [re, im] pairs");
                out.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
            return out;
        };
        return sets::make_self_similar_spec(L, points(j.at("centers")),
                                            j.contains("base") ? points(j.at("base")) : std::vector<sets::Complex>{});
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("bad spec JSON: ") + e.what());
    }
}

sets::SetSpec resolve_spec(const std::string& source)
{
    require(!source.empty(), "empty spec");
    auto parse = [](const std::string& text) {
        try {
            return Json::parse(text);
        } catch (const Json::exception& e) {
            throw InvalidArgument(std::string("bad spec JSON: ") + e.what());
        }
    };
    if (source.front() == '{')
        return spec_from_json(parse(source));
    for (const char* name : {"fourcorner", "gasket", "fig4", "slv25", "baker25"})
        if (source == name)
            return sets::named_spec(source);
    std::ifstream in(source);
    require(in.good(), "spec '" + source + "' is neither a built-in name nor a readable file");
    std::stringstream ss;
    ss << in.rdbuf();
    return spec_from_json(parse(ss.str()));
}

std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
        out_ << (i ? "," : "") << csv_field(fields[i]);
    out_ << "\r\n";
}

Json intervals_to_json(const IntervalUnion<double>& u)
{
    Json out = Json::array();
    for (const auto& p : u.pieces())
        out.push_back({p.left, p.right});
    return out;
}

Json intervals_to_json(const IntervalUnion<Rational>& u)
{
    Json out = Json::array();
    for (const auto& p : u.pieces())
        out.push_back({to_string(p.left), to_string(p.right)});
    return out;
}

std::vector<int> parse_int_list(std::string_view s)
{
    std::vector<int> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        auto item = s.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        int v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        require(res.ec == std::errc() && res.ptr == item.data() + item.size(), "bad integer list '" + std::string(s) + "'");
        out.push_back(v);
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace buffon::io
