#include "tsost/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace tsost::json {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorKind::MalformedSpec, what);
}

Json parse_text(const std::string& text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(std::string("invalid ") + what + " JSON: " + e.what());
    }
}

double number(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        malformed(std::string("expected numeric field '") + key + "'");
    }
    return it->get<double>();
}

std::optional<double> optional_number(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_number()) {
        malformed(std::string("field '") + key + "' must be a number");
    }
    return it->get<double>();
}

int integer(const Json& obj, const char* key) {
    const double v = number(obj, key);
    if (v != std::floor(v) || std::abs(v) > 1e6) {
        malformed(std::string("field '") + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

std::vector<double> number_list(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) {
        malformed(std::string("expected array field '") + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) {
            malformed(std::string("array '") + key + "' must hold numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

void render(const Json& v, std::string& out) {
    switch (v.type()) {
    case Json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += Json(it.key()).dump();
            out += ':';
            render(it.value(), out);
        }
        out += '}';
        return;
    }
    case Json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& e : v) {
            if (!first) {
                out += ',';
            }
            first = false;
            render(e, out);
        }
        out += ']';
        return;
    }
    case Json::value_t::number_float:
        out += format_number(v.get<double>());
        return;
    default:
        out += v.dump();
        return;
    }
}

} // namespace

TimeScale parse_scale(const Json& spec) {
    if (!spec.is_object()) {
        malformed("scale spec must be a JSON object");
    }
    auto kind_it = spec.find("kind");
    if (kind_it == spec.end() || !kind_it->is_string()) {
        malformed("scale spec needs a string field 'kind'");
    }
    const auto kind = kind_it->get<std::string>();
    if (kind == "continuous") {
        return TimeScale::continuous(number(spec, "a"), number(spec, "b"));
    }
    if (kind == "integers") {
        return TimeScale::integers(number(spec, "a"), number(spec, "b"));
    }
    if (kind == "hgrid") {
        return TimeScale::hgrid(number(spec, "a"), number(spec, "b"), number(spec, "h"));
    }
    if (kind == "qlattice") {
        return TimeScale::qlattice(number(spec, "q"), integer(spec, "m"), integer(spec, "n"));
    }
    if (kind == "segments") {
        auto it = spec.find("segments");
        if (it == spec.end() || !it->is_array()) {
            malformed("segments scale needs an array field 'segments'");
        }
        std::vector<Segment> segs;
        for (const auto& s : *it) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
                malformed("each segment must be a [left, right] pair of numbers");
            }
            segs.push_back({s[0].get<double>(), s[1].get<double>()});
        }
        return TimeScale::from_segments(std::move(segs));
    }
    malformed("unknown scale kind '" + kind + "'");
}

TimeScale parse_scale(const std::string& text) { return parse_scale(parse_text(text, "scale")); }

ParsedRule parse_rule(const Json& spec) {
    if (!spec.is_object()) {
        malformed("rule spec must be a JSON object");
    }
    auto it = spec.find("rule");
    if (it == spec.end() || !it->is_string()) {
        malformed("rule spec needs a string field 'rule'");
    }
    const auto name = it->get<std::string>();
    const auto kind = rule_kind_from_string(name);
    if (!kind) {
        malformed("unknown rule '" + name + "'");
    }
    ParsedRule out;
    out.spec.kind = *kind;
    out.spec.alpha = optional_number(spec, "alpha");
    out.spec.x = optional_number(spec, "x");
    out.spec.alpha1 = optional_number(spec, "alpha1");
    out.spec.alpha2 = optional_number(spec, "alpha2");
    if (*kind == RuleKind::Custom) {
        out.spec.xs = number_list(spec, "xs");
        out.spec.alphas = number_list(spec, "alphas");
    }
    out.a = optional_number(spec, "a");
    out.b = optional_number(spec, "b");
    return out;
}

ParsedRule parse_rule(const std::string& text) { return parse_rule(parse_text(text, "rule")); }

Json to_json(const QuadReport& r) {
    Json j;
    j["q_value"] = r.q_value;
    j["integral_sigma"] = r.integral_sigma;
    j["abs_error"] = r.abs_error;
    j["bound"] = r.bound;
    j["m_used"] = r.m_used;
    j["tightness"] = r.tightness;
    return j;
}

Json to_json(const Partition& p) {
    Json j;
    j["k"] = p.k();
    j["xs"] = p.xs();
    j["alphas"] = p.alphas();
    j["weights"] = p.weights();
    return j;
}

Json to_json(const MontgomeryTerms& m) {
    Json j;
    j["quadrature"] = m.quadrature;
    j["integral_sigma"] = m.integral_sigma;
    j["kernel_integral"] = m.kernel_integral;
    j["residual"] = m.residual;
    return j;
}

Json to_json(const SharpnessResult& s) {
    Json j;
    j["scale"] = s.scale;
    j["abs_error"] = s.abs_error;
    j["bound"] = s.bound;
    j["gap"] = s.gap;
    j["relative_gap"] = s.relative_gap;
    j["predicted"] = s.predicted;
    return j;
}

Json to_json(const VerifyReport& r) {
    Json cfg;
    cfg["trials"] = r.config.trials;
    cfg["max_segments"] = r.config.max_segments;
    cfg["max_k"] = r.config.max_k;
    cfg["max_poly_degree"] = r.config.max_poly_degree;
    cfg["identity_tol"] = r.config.identity_tol;
    cfg["discrete_identity_tol"] = r.config.discrete_identity_tol;
    cfg["inequality_tol"] = r.config.inequality_tol;
    cfg["closed_form_tol"] = r.config.closed_form_tol;
    cfg["transcendental"] = r.config.transcendental;

    Json j;
    j["seed"] = r.seed;
    j["generator"] = r.generator;
    j["config"] = cfg;
    j["trials_run"] = r.trials_run;
    j["discrete_trials"] = r.discrete_trials;
    j["identity_failures"] = r.identity_failures;
    j["inequality_failures"] = r.inequality_failures;
    j["closed_form_checks"] = r.closed_form_checks;
    j["closed_form_failures"] = r.closed_form_failures;
    j["trial_errors"] = r.trial_errors;
    j["max_identity_residual"] = r.max_identity_residual;
    j["max_identity_residual_discrete"] = r.max_identity_residual_discrete;
    j["max_excess"] = r.max_excess;
    j["max_closed_form_diff"] = r.max_closed_form_diff;
    Json sharp = Json::array();
    for (const auto& s : r.sharpness_results) {
        sharp.push_back(to_json(s));
    }
    j["sharpness_results"] = sharp;
    j["errors"] = r.error_messages;
    return j;
}

Json to_json(const std::vector<Relocation>& relocations) {
    Json arr = Json::array();
    for (const auto& r : relocations) {
        Json j;
        j["role"] = r.role;
        j["requested"] = r.requested;
        j["used"] = r.used;
        arr.push_back(j);
    }
    return arr;
}

std::string format_number(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump(const Json& value) {
    std::string out;
    render(value, out);
    return out;
}

} // namespace tsost::json
