// tsost: command-line front end for time-scale quadrature and Ostrowski bounds.

#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "tsost/calculus.hpp"
#include "tsost/expr.hpp"
#include "tsost/json_io.hpp"
#include "tsost/ostrowski.hpp"
#include "tsost/verify.hpp"

namespace {

using tsost::json::Json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const std::string& kind, const std::string& detail) {
    Json j;
    j["error"] = kind;
    j["detail"] = detail;
    std::cerr << tsost::json::dump(j) << '\n';
}

/// Flag values, optionally backfilled from a JSON object on stdin.
class Inputs {
public:
    void load_stdin() {
        std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
        try {
            stdin_ = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(std::string("invalid JSON on stdin: ") + e.what());
        }
        if (!stdin_.is_object()) {
            throw UsageError("stdin must hold a JSON object");
        }
    }

    /// JSON-valued input: flag text wins, then the stdin object.
    Json object(const std::string& flag_text, const char* key) const {
        if (!flag_text.empty()) {
            try {
                return Json::parse(flag_text);
            } catch (const nlohmann::json::parse_error& e) {
                throw tsost::Error(tsost::ErrorKind::MalformedSpec,
                                   std::string("invalid --") + key + " JSON: " + e.what());
            }
        }
        if (stdin_.contains(key)) {
            return stdin_[key];
        }
        throw UsageError(std::string("missing --") + key);
    }

    std::string text(const std::string& flag_text, const char* key) const {
        if (!flag_text.empty()) {
            return flag_text;
        }
        if (stdin_.contains(key) && stdin_[key].is_string()) {
            return stdin_[key].get<std::string>();
        }
        throw UsageError(std::string("missing --") + key);
    }

    template <class T>
    std::optional<T> value(const std::optional<T>& flag, const char* key) const {
        if (flag) {
            return flag;
        }
        if (stdin_.contains(key) && stdin_[key].is_number()) {
            return stdin_[key].get<T>();
        }
        return std::nullopt;
    }

private:
    Json stdin_ = Json::object();
};

struct RuleInputs {
    std::string scale;
    std::string rule;
    std::string f;
    std::optional<double> a;
    std::optional<double> b;
    bool snap = false;
};

struct SettingsInputs {
    tsost::QuadratureSettings quad;
    tsost::SupSettings sup;
};

void add_settings(CLI::App* cmd, SettingsInputs& s) {
    cmd->add_option("--abs-tol", s.quad.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
    cmd->add_option("--rel-tol", s.quad.rel_tol, "Relative quadrature tolerance")->capture_default_str();
    cmd->add_option("--max-subdivisions", s.quad.max_subdivisions, "Adaptive subdivision limit")
        ->capture_default_str();
}

void add_rule_options(CLI::App* cmd, RuleInputs& in) {
    cmd->add_option("--scale", in.scale, "Scale spec JSON");
    cmd->add_option("--rule", in.rule, "Rule spec JSON");
    cmd->add_option("--a", in.a, "Left end of the range (default: scale minimum)");
    cmd->add_option("--b", in.b, "Right end of the range (default: scale maximum)");
    cmd->add_flag("--snap", in.snap, "Move required points to the nearest scale point");
}

struct BuiltRule {
    tsost::TimeScale scale;
    tsost::RuleBuild build;
    std::string rule_name;
};

BuiltRule build(const Inputs& io, const RuleInputs& in) {
    auto scale = tsost::json::parse_scale(io.object(in.scale, "scale"));
    auto rule = tsost::json::parse_rule(io.object(in.rule, "rule"));
    const double a = io.value(in.a, "a").value_or(rule.a.value_or(scale.min()));
    const double b = io.value(in.b, "b").value_or(rule.b.value_or(scale.max()));
    auto built = tsost::build_rule(scale, a, b, rule.spec, in.snap);
    return {std::move(scale), std::move(built), std::string(tsost::to_string(rule.spec.kind))};
}

void attach_rule(Json& j, const BuiltRule& r, bool snap) {
    j["scale"] = r.scale.describe();
    j["rule"] = r.rule_name;
    j["partition"] = tsost::json::to_json(r.build.partition);
    if (snap) {
        j["relocations"] = tsost::json::to_json(r.build.relocations);
    }
}

std::string cmd_quad(const Inputs& io, const RuleInputs& in, const SettingsInputs& s) {
    const auto r = build(io, in);
    const auto f = tsost::parse_expr(io.text(in.f, "f"));
    const auto report = tsost::evaluate_rule(r.build.partition, f, s.quad, s.sup);
    Json j = tsost::json::to_json(report);
    j["f"] = f.to_string();
    attach_rule(j, r, in.snap);
    return tsost::json::dump(j);
}

std::string cmd_bound(const Inputs& io, const RuleInputs& in, std::optional<double> m_flag,
                      const SettingsInputs& s) {
    const auto r = build(io, in);
    const auto& p = r.build.partition;
    double m = 0.0;
    Json j;
    if (auto given = io.value(m_flag, "M")) {
        m = *given;
    } else {
        const auto f = tsost::parse_expr(io.text(in.f, "f"));
        m = tsost::sup_delta_derivative(p.scale(), f, p.a(), p.b(), s.sup);
        j["f"] = f.to_string();
    }
    j["m_used"] = m;
    j["bound"] = tsost::error_bound(p, m, s.quad);
    if (p.scale().single_interval() || p.scale().unit_integer_grid()) {
        j["closed_form_bound"] = tsost::closed_form_bound(p, m);
    } else {
        j["closed_form_bound"] = nullptr;
    }
    attach_rule(j, r, in.snap);
    return tsost::json::dump(j);
}

std::string cmd_identity(const Inputs& io, const RuleInputs& in, const SettingsInputs& s) {
    const auto r = build(io, in);
    const auto f = tsost::parse_expr(io.text(in.f, "f"));
    Json j = tsost::json::to_json(tsost::montgomery_terms(r.build.partition, f, s.quad));
    j["f"] = f.to_string();
    attach_rule(j, r, in.snap);
    return tsost::json::dump(j);
}

struct MonomialInputs {
    std::string scale;
    std::optional<int> k;
    std::optional<double> t;
    std::optional<double> s;
};

std::string cmd_monomial(const Inputs& io, const MonomialInputs& in, const SettingsInputs& s) {
    const auto scale = tsost::json::parse_scale(io.object(in.scale, "scale"));
    const auto k = io.value(in.k, "k");
    const auto t = io.value(in.t, "t");
    const auto sv = io.value(in.s, "s");
    if (!k || !t || !sv) {
        throw UsageError("monomial needs --k, --t and --s");
    }
    Json j;
    j["scale"] = scale.describe();
    j["k"] = *k;
    j["t"] = *t;
    j["s"] = *sv;
    j["value"] = tsost::monomial_h(scale, *k, *t, *sv, s.quad);
    j["generic"] = tsost::monomial_h_generic(scale, *k, *t, *sv, s.quad);
    if (auto c = tsost::monomial_h_closed_form(scale, *k, *t, *sv)) {
        j["closed_form"] = *c;
    } else {
        j["closed_form"] = nullptr;
    }
    return tsost::json::dump(j);
}

struct RulesInputs {
    std::string scale;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> alpha;
    std::optional<double> x;
    std::optional<double> alpha1;
    std::optional<double> alpha2;
};

std::string cmd_rules(const Inputs& io, const RulesInputs& in) {
    const auto scale = tsost::json::parse_scale(io.object(in.scale, "scale"));
    const double a = io.value(in.a, "a").value_or(scale.min());
    const double b = io.value(in.b, "b").value_or(scale.max());
    using tsost::RuleKind;
    Json list = Json::array();
    for (auto kind : {RuleKind::Rectangle, RuleKind::LeftRectangle, RuleKind::RightRectangle,
                      RuleKind::Trapezoid, RuleKind::ThreePoint, RuleKind::OstrowskiPoint,
                      RuleKind::Midpoint, RuleKind::Simpson, RuleKind::AvgMidTrap}) {
        tsost::RuleSpec spec;
        spec.kind = kind;
        spec.alpha = in.alpha;
        spec.x = in.x;
        spec.alpha1 = in.alpha1;
        spec.alpha2 = in.alpha2;
        Json entry;
        entry["rule"] = std::string(tsost::to_string(kind));
        try {
            entry["partition"] = tsost::json::to_json(tsost::make_rule(scale, a, b, spec));
        } catch (const tsost::Error& e) {
            Json err;
            err["error"] = std::string(tsost::to_string(e.kind()));
            err["detail"] = e.what();
            entry["unavailable"] = err;
        }
        list.push_back(entry);
    }
    Json j;
    j["scale"] = scale.describe();
    j["a"] = a;
    j["b"] = b;
    j["rules"] = list;
    return tsost::json::dump(j);
}

struct VerifyInputs {
    std::optional<std::uint64_t> seed;
    tsost::VerifyConfig config;
    std::string out;
    bool trials_given = false;
};

std::string cmd_verify(const Inputs& io, VerifyInputs& in) {
    const auto seed = io.value(in.seed, "seed");
    if (!seed) {
        throw UsageError("verify needs --seed");
    }
    in.config.seed = *seed;
    if (!in.trials_given) {
        if (auto t = io.value(std::optional<int>{}, "trials")) {
            in.config.trials = *t;
        }
    }
    if (in.config.trials < 1) {
        throw UsageError("--trials must be >= 1");
    }
    return tsost::json::dump(tsost::json::to_json(tsost::run_verification(in.config)));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadrature, Montgomery identity and Ostrowski bounds on time scales"};
    app.require_subcommand(1);
    bool use_stdin = false;
    app.add_flag("--stdin", use_stdin, "Read inputs as a JSON object from standard input");

    SettingsInputs settings;
    RuleInputs rule_in;

    auto* quad = app.add_subcommand("quad", "Evaluate a rule: value, Δ-integral, error and bound");
    add_rule_options(quad, rule_in);
    quad->add_option("--f", rule_in.f, "Integrand expression in t");
    add_settings(quad, settings);

    std::optional<double> m_flag;
    auto* bound = app.add_subcommand("bound", "Ostrowski error bound for a rule");
    add_rule_options(bound, rule_in);
    bound->add_option("--f", rule_in.f, "Integrand expression (used to estimate M)");
    bound->add_option("--M", m_flag, "Use this sup |f^Δ| instead of estimating it");
    add_settings(bound, settings);

    auto* identity = app.add_subcommand("identity", "Montgomery identity terms and residual");
    add_rule_options(identity, rule_in);
    identity->add_option("--f", rule_in.f, "Integrand expression in t");
    add_settings(identity, settings);

    MonomialInputs mono_in;
    auto* monomial = app.add_subcommand("monomial", "Generalized monomial h_k(t, s)");
    monomial->add_option("--scale", mono_in.scale, "Scale spec JSON");
    monomial->add_option("--k", mono_in.k, "Degree (0..4)");
    monomial->add_option("--t", mono_in.t, "First argument");
    monomial->add_option("--s", mono_in.s, "Second argument");
    add_settings(monomial, settings);

    VerifyInputs verify_in;
    auto* verify = app.add_subcommand("verify", "Seeded randomized verification run");
    verify->add_option("--seed", verify_in.seed, "Seed (required)");
    verify->add_option("--trials", verify_in.config.trials, "Number of random trials")
        ->capture_default_str()
        ->check(CLI::Range(1, std::numeric_limits<int>::max()));
    verify->add_option("--max-segments", verify_in.config.max_segments)->capture_default_str();
    verify->add_option("--max-k", verify_in.config.max_k)->capture_default_str();
    verify->add_option("--max-degree", verify_in.config.max_poly_degree)->capture_default_str();
    verify->add_option("--identity-tol", verify_in.config.identity_tol)->capture_default_str();
    verify->add_option("--discrete-identity-tol", verify_in.config.discrete_identity_tol)
        ->capture_default_str();
    verify->add_option("--inequality-tol", verify_in.config.inequality_tol)->capture_default_str();
    verify->add_flag("--transcendental", verify_in.config.transcendental,
                     "Add sin/exp terms to the random integrands");
    verify->add_option("--threads", verify_in.config.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    verify->add_option("--out", verify_in.out, "Write the report to this file");

    RulesInputs rules_in;
    auto* rules = app.add_subcommand("rules", "List every named rule expanded on a scale");
    rules->add_option("--scale", rules_in.scale, "Scale spec JSON");
    rules->add_option("--a", rules_in.a);
    rules->add_option("--b", rules_in.b);
    rules->add_option("--alpha", rules_in.alpha, "Parameter for rectangle");
    rules->add_option("--x", rules_in.x, "Interior node for three_point/ostrowski_point/simpson");
    rules->add_option("--alpha1", rules_in.alpha1);
    rules->add_option("--alpha2", rules_in.alpha2);

    for (auto* sub : {quad, bound, identity, monomial, verify, rules}) {
        sub->add_flag("--stdin", use_stdin, "Read inputs as a JSON object from standard input");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return kExitUsage;
    }

    try {
        Inputs io;
        if (use_stdin) {
            io.load_stdin();
        }
        std::string output;
        if (*quad) {
            output = cmd_quad(io, rule_in, settings);
        } else if (*bound) {
            output = cmd_bound(io, rule_in, m_flag, settings);
        } else if (*identity) {
            output = cmd_identity(io, rule_in, settings);
        } else if (*monomial) {
            output = cmd_monomial(io, mono_in, settings);
        } else if (*verify) {
            verify_in.trials_given = verify->count("--trials") > 0;
            output = cmd_verify(io, verify_in);
            if (!verify_in.out.empty()) {
                std::ofstream file(verify_in.out);
                if (!file) {
                    throw UsageError("cannot open " + verify_in.out);
                }
                file << output << '\n';
                return 0;
            }
        } else {
            output = cmd_rules(io, rules_in);
        }
        std::cout << output << '\n';
        return 0;
    } catch (const UsageError& e) {
        print_error("UsageError", e.what());
        return kExitUsage;
    } catch (const tsost::Error& e) {
        print_error(std::string(tsost::to_string(e.kind())), e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
        return kExitDomain;
    }
}
