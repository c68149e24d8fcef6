#ifndef TSOST_JSON_IO_HPP
#define TSOST_JSON_IO_HPP

#include <optional>
#include <string>

#include "json.hpp"

#include "tsost/ostrowski.hpp"
#include "tsost/timescale.hpp"
#include "tsost/verify.hpp"

namespace tsost::json {

using Json = nlohmann::ordered_json;

/// {"kind":"continuous","a":0,"b":1} | {"kind":"integers","a":0,"b":3} |
/// {"kind":"hgrid","a":0,"b":2,"h":0.5} | {"kind":"qlattice","q":2,"m":0,"n":3} |
/// {"kind":"segments","segments":[[0,1],[2,2]]}
TimeScale parse_scale(const Json& spec);
TimeScale parse_scale(const std::string& text);
inline TimeScale parse_scale(const char* text) { return parse_scale(std::string(text)); }

/// {"rule":"trapezoid"}, {"rule":"rectangle","alpha":0.5}, {"rule":"custom",
/// "xs":[...],"alphas":[...]}, ... Optional "a"/"b" restrict the range.
struct ParsedRule {
    RuleSpec spec;
    std::optional<double> a;
    std::optional<double> b;
};
ParsedRule parse_rule(const Json& spec);
ParsedRule parse_rule(const std::string& text);
inline ParsedRule parse_rule(const char* text) { return parse_rule(std::string(text)); }

Json to_json(const QuadReport& r);
Json to_json(const Partition& p);
Json to_json(const MontgomeryTerms& m);
Json to_json(const SharpnessResult& s);
Json to_json(const VerifyReport& r);
Json to_json(const std::vector<Relocation>& relocations);

/// Serialise with keys in insertion order and every floating value printed
/// with 17 significant digits.
std::string dump(const Json& value);

/// 17-significant-digit rendering used by dump.
std::string format_number(double x);

} // namespace tsost::json

#endif // TSOST_JSON_IO_HPP
