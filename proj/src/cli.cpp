#include "spencer/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <optional>
#include <ostream>

#include "spencer/characteristics.hpp"
#include "spencer/cohomology.hpp"
#include "spencer/dsl.hpp"
#include "spencer/restriction.hpp"
#include "spencer/symbolic_system.hpp"

namespace spencer {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::string command;
    std::string which;  // verify target
    std::string file;
    int cap = 8;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string field = "q";
    std::string vstar;
    std::string w;
    int order = 2;
    std::optional<int> m;
};

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Σ c·x^α[u] for an element of slot (k, 0).
std::string element_string(const std::vector<Rational>& v, const EquationSet& eqs, int k) {
    const int n = eqs.n();
    const auto& mons = monomials(n, k);
    const std::size_t ds = mons.size();
    std::string s;
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        if (is_zero(v[idx])) continue;
        std::size_t mu = idx / ds;
        const auto& alpha = mons[idx % ds];
        Rational a = abs(v[idx]);
        bool neg = sgn(v[idx]) < 0;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        std::string mono;
        for (int i = 0; i < n; ++i) {
            if (alpha[static_cast<std::size_t>(i)] == 0) continue;
            mono += eqs.vars[static_cast<std::size_t>(i)];
            if (alpha[static_cast<std::size_t>(i)] > 1) mono += "^" + std::to_string(alpha[static_cast<std::size_t>(i)]);
        }
        if (a != 1 || mono.empty()) s += to_string(a) + (mono.empty() ? "" : " ");
        s += mono + "[" + eqs.unknowns[mu] + "]";
    }
    return s.empty() ? "0" : s;
}

std::string gvector_string(const GVector& v, const std::vector<std::string>& vars) { return covector_string(v, vars); }

bool is_real(const GVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Gaussian& x) { return x.is_real(); });
}

json cohomology_json(const CohomologyTable& t) {
    json a = json::array();
    for (const auto& c : t.nonzero()) a.push_back({{"i", c.i}, {"j", c.j}, {"dim", c.dim}});
    return a;
}

json dims_json(const SymbolicSystem& g) {
    json a = json::array();
    for (int k = 0; k <= g.cap(); ++k) a.push_back(g.dim(k));
    return a;
}

void profile_into(json& r, const OrderProfile& ord) {
    r["orders"] = ord.orders;
    json mult = json::array();
    for (const auto& [order, m] : ord.multiplicity) mult.push_back({{"order", order}, {"multiplicity", m}});
    r["multiplicities"] = mult;
    r["orders_certified"] = ord.certified;
}

json involutivity_json(const InvolutivityResult& inv) {
    json per = json::array();
    for (const auto& oc : inv.per_order) {
        per.push_back({{"order", oc.k},
                       {"cartan", to_string(oc.cartan.verdict)},
                       {"cartan_seed", oc.cartan.seed},
                       {"cartan_attempts", oc.cartan.attempts},
                       {"cohomology_vanishes", oc.cohomology_vanishes},
                       {"window", oc.window}});
    }
    return {{"involutive", inv.involutive}, {"decided", inv.decided}, {"certified", inv.certified}, {"per_order", per}};
}

json acyclicity_json(const AcyclicityResult& a, int m) {
    json v = json::array();
    for (const auto& c : a.violations) v.push_back({{"i", c.i}, {"j", c.j}, {"dim", c.dim}});
    return {{"m", m}, {"holds", a.holds}, {"violations", v}};
}

json subspace_json(const RSubspace& s, const std::vector<std::string>& vars, bool vectors) {
    json a = json::array();
    for (std::size_t r = 0; r < s.dim(); ++r)
        a.push_back(vectors ? vector_string(s.basis().row_vector(r), vars) : covector_string(s.basis().row_vector(r), vars));
    return a;
}

json hypotheses_json(const HypothesisStatus& h) {
    return {{"strongly_nonchar", h.strongly_nonchar},
            {"involutive", h.involutive},
            {"involutivity_decided", h.involutivity_decided},
            {"met", h.met()},
            {"failing", h.failing()}};
}

json pencil_json(const PencilResult& p, const Options& o, const std::vector<std::string>& vars) {
    json cov = json::array();
    for (const auto& v : p.covectors)
        if (o.field == "qi" || is_real(v)) cov.push_back(gvector_string(v, vars));
    return {{"k", p.k},
            {"dim", p.dim},
            {"exists", p.exists},
            {"all_characteristic", p.all_characteristic},
            {"gcd", to_string(p.gcd, "t")},
            {"gcd_degree", p.gcd_degree},
            {"infinity_multiplicity", p.infinity_multiplicity},
            {"minors", p.minors},
            {"covectors", cov},
            {"explicit_complete", p.explicit_complete}};
}

json char_json(const SymbolicSystem& g, const RSubspace& vstar, const EquationSet& eqs, const Options& o) {
    auto c = char_report(g, vstar);
    auto wit = [&](const std::optional<std::vector<Rational>>& v, int k) -> json {
        if (!v) return nullptr;
        return element_string(*v, eqs, k);
    };
    json r = {{"vstar", subspace_json(vstar, eqs.vars, false)},
              {"k_char", c.k_char},
              {"k_nonchar", c.k_nonchar},
              {"weakly_char", c.weakly_char},
              {"strongly_char", c.strongly_char},
              {"weakly_nonchar", c.weakly_nonchar},
              {"strongly_nonchar", c.strongly_nonchar},
              {"weak_char_witness", wit(c.weak_char_witness, c.k_char)},
              {"strong_char_witness", wit(c.strong_char_witness, c.k_char)},
              {"weak_nonchar_obstruction", wit(c.weak_nonchar_obstruction, c.k_nonchar)},
              {"strong_nonchar_obstruction", wit(c.strong_nonchar_obstruction, c.k_nonchar)},
              {"restriction_injective", c.restriction_injective},
              {"isomorphism_consistent", c.isomorphism_consistent},
              {"pencil", nullptr},
              {"appendix_b", nullptr}};
    if (vstar.dim() == 1 || vstar.dim() == 2) r["pencil"] = pencil_json(pencil_char_search(g, vstar), o, eqs.vars);
    auto ord = order_profile(g);
    if (ord.orders == std::vector<int>{1} && c.strongly_char) {
        auto b = guillemin_b_search(g, vstar, o.seed);
        json v0 = json::array();
        for (std::size_t q = 0; q < b.v0_basis.rows(); ++q) v0.push_back(covector_string(b.v0_basis.row_vector(q), eqs.vars));
        bool shown = b.found && (o.field == "qi" || is_real(b.covector));
        r["appendix_b"] = {{"found", b.found},
                           {"covector", shown ? json(gvector_string(b.covector, eqs.vars)) : json(nullptr)},
                           {"omega", covector_string(b.omega, eqs.vars)},
                           {"omega_characteristic", b.omega_characteristic},
                           {"v0", v0},
                           {"n_prime_dim", b.n_prime_dim},
                           {"failure", b.failure},
                           {"minimal_poly", b.minimal_poly}};
    }
    return r;
}

std::optional<RSubspace> resolve_vstar(const Options& o, const EquationSet& eqs) {
    if (!o.vstar.empty() && !o.w.empty()) throw ArgumentError("give either --vstar or --w, not both");
    if (!o.vstar.empty()) return vstar_from(parse_subspace(o.vstar, eqs.vars, SubspaceMode::Covectors), eqs.n());
    if (!o.w.empty()) return vstar_from(parse_subspace(o.w, eqs.vars, SubspaceMode::Vectors), eqs.n());
    return std::nullopt;
}

RSubspace require_vstar(const Options& o, const EquationSet& eqs) {
    auto v = resolve_vstar(o, eqs);
    if (!v) throw ArgumentError("'" + o.command + "' needs --vstar or --w");
    return *v;
}

json base_report(const Options& o, const EquationSet& eqs, const SymbolicSystem& g) {
    json r;
    r["command"] = o.command == "verify" ? "verify " + o.which : o.command;
    json eq = json::array();
    for (const auto& e : eqs.equations) eq.push_back(equation_string(eqs, e));
    r["input"] = {{"file", o.file}, {"vars", eqs.vars}, {"unknowns", eqs.unknowns}, {"equations", eq}};
    r["seed"] = o.seed;
    r["cap"] = o.cap;
    r["dims"] = dims_json(g);
    profile_into(r, order_profile(g));
    r["cohomology"] = nullptr;
    r["involutive"] = nullptr;
    r["char"] = nullptr;
    r["thm1"] = nullptr;
    r["thm2"] = nullptr;
    r["e1"] = nullptr;
    return r;
}

json system_json(const SymbolicSystem& s, int i_max) {
    json r;
    r["dims"] = dims_json(s);
    profile_into(r, order_profile(s));
    r["cohomology"] = cohomology_json(cohomology_table(s, i_max));
    return r;
}

int run_command(const Options& o, json& r) {
    EquationSet eqs = parse_file(o.file);
    if (eqs.max_order() > o.cap)
        throw CapExceeded("equation order " + std::to_string(eqs.max_order()) + " exceeds --max-degree " +
                          std::to_string(o.cap));
    auto g = SymbolicSystem::from_equations(eqs, o.cap);
    r = base_report(o, eqs, g);
    const int i_max = std::max(0, o.cap - 1);
    int code = kExitOk;

    if (o.command == "analyze" || o.command == "cohomology") {
        auto table = cohomology_table(g, i_max);
        r["cohomology"] = cohomology_json(table);
        r["cohomology_i_max"] = i_max;
        if (o.command == "analyze") {
            auto inv = is_involutive(g, o.seed);
            r["involutive"] = inv.involutive;
            r["involutivity"] = involutivity_json(inv);
            auto i2 = property_I2(g, o.seed);
            r["properties"] = {{"I1", property_I1(table)}, {"I2", i2.holds}, {"I2_failing_levels", i2.failing_levels}};
            if (o.m) r["acyclicity"] = acyclicity_json(acyclicity(table, order_profile(g), *o.m, false), *o.m);
            if (auto v = resolve_vstar(o, eqs)) r["char"] = json::array({char_json(g, *v, eqs, o)});
            if (!inv.decided) code = kExitCap;
        }
    } else if (o.command == "involutive") {
        auto inv = is_involutive(g, o.seed);
        r["involutive"] = inv.involutive;
        r["involutivity"] = involutivity_json(inv);
        if (!inv.decided) code = kExitCap;
    } else if (o.command == "restrict") {
        auto vstar = require_vstar(o, eqs);
        RMatrix wb = o.w.empty() ? annihilating_vectors(vstar)
                                 : to_subspace(parse_subspace(o.w, eqs.vars, SubspaceMode::Vectors), eqs.n()).basis();
        if (wb.rows() == 0) throw ArgumentError("W must be nonzero");
        auto gt = restrict_system(g, wb);
        json w = json::array();
        for (std::size_t q = 0; q < wb.rows(); ++q) w.push_back(vector_string(wb.row_vector(q), eqs.vars));
        json res = {{"w", w}, {"vstar", subspace_json(vstar, eqs.vars, false)}};
        res.update(system_json(gt, i_max));
        r["restriction"] = res;
        r["char"] = json::array({char_json(g, vstar, eqs, o)});
        if (o.m) {
            auto t = acyclicity_transfer(g, vstar, *o.m);
            r["acyclicity_transfer"] = {{"m", t.m},
                                        {"strongly_nonchar", t.strongly_nonchar},
                                        {"pure_order", t.pure_order},
                                        {"original", acyclicity_json(t.original, t.m)},
                                        {"restricted", acyclicity_json(t.restricted, t.m)},
                                        {"restricted_fixed_orders", acyclicity_json(t.restricted_fixed, t.m)}};
        }
    } else if (o.command == "reduce") {
        if (o.order < 1) throw ArgumentError("--order must be at least 1");
        if (o.order > o.cap) throw CapExceeded("--order exceeds --max-degree");
        auto gh = equivalence_reduce(g, o.order);
        json red = {{"k", o.order}, {"nu", gh.nu()}};
        red.update(system_json(gh, std::max(0, gh.cap() - 1)));
        auto inv = is_involutive(gh, o.seed);
        red["involutive"] = inv.involutive;
        red["involutivity_decided"] = inv.decided;
        r["reduction"] = red;
    } else if (o.command == "descend") {
        auto d1 = descend(g);
        auto fix = descend_fixpoint(g);
        bool proper = false;
        for (int k = 0; k <= d1.cap(); ++k) proper = proper || d1.level(k) != g.level(k);
        r["descent"] = {{"dims", dims_json(d1)},
                        {"proper", proper},
                        {"fixpoint_dims", dims_json(fix.system)},
                        {"fixpoint_steps", fix.steps},
                        {"fixpoint_converged", fix.converged}};
        if (!fix.converged) code = kExitCap;
    } else if (o.command == "char") {
        r["char"] = json::array({char_json(g, require_vstar(o, eqs), eqs, o)});
    } else if (o.command == "e1table") {
        auto vstar = require_vstar(o, eqs);
        auto st = setup_restriction(g, vstar, o.cap, o.seed == 0 ? std::nullopt : std::optional(o.seed));
        json e1 = json::array();
        const int n = eqs.n();
        for (int l = 0; l < o.cap; ++l)
            for (int p = 0; p <= st.frame.t; ++p)
                for (int q = 0; p + q <= n; ++q) {
                    auto e0 = spectral_term(st, l, 0, p, q);
                    if (e0 == 0) continue;
                    e1.push_back({{"l", l},
                                  {"p", p},
                                  {"q", q},
                                  {"e0", e0},
                                  {"e1", spectral_term(st, l, 1, p, q)},
                                  {"d1_rank", spectral_differential_rank(st, l, 1, p, q)},
                                  {"e2", spectral_term(st, l, 2, p, q)}});
                }
        r["e1"] = e1;
        r["dprime_cohomology"] = cohomology_json(dprime_cohomology_table(st, i_max));
        r["frame"] = {{"s", st.frame.s}, {"t", st.frame.t}};
    } else if (o.command == "verify") {
        auto vstar = require_vstar(o, eqs);
        if (o.which == "thm1") {
            auto t = verify_thm1(g, vstar, o.seed);
            json cells = json::array();
            for (const auto& c : t.cells)
                cells.push_back({{"i", c.i}, {"j", c.j}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"match", c.match()}});
            r["thm1"] = {{"hypotheses", hypotheses_json(t.hypotheses)},
                         {"restricted_involutive", t.restricted_involutive},
                         {"s", t.s},
                         {"t", t.t},
                         {"r_min", t.r_min},
                         {"i_max", t.i_max},
                         {"mismatches", t.mismatches},
                         {"cells", cells}};
            if (!t.hypotheses.involutivity_decided) code = kExitCap;
        } else if (o.which == "thm2") {
            auto t = verify_thm2(g, vstar, o.seed);
            bool shown = t.covector && (o.field == "qi" || is_real(*t.covector));
            r["thm2"] = {{"dim", t.dim},
                         {"involutive", t.involutive},
                         {"involutivity_decided", t.involutivity_decided},
                         {"strongly_char", t.strongly_char},
                         {"exists_char_covector", t.exists_char_covector},
                         {"partial", t.partial},
                         {"subpencils_sampled", t.subpencils_sampled},
                         {"equivalence_holds", t.equivalence_holds},
                         {"hypothesis_met", t.involutive},
                         {"covector", shown ? json(gvector_string(*t.covector, eqs.vars)) : json(nullptr)},
                         {"pencil", t.pencil ? pencil_json(*t.pencil, o, eqs.vars) : json(nullptr)}};
            if (!t.involutivity_decided || (t.pencil && !t.pencil->explicit_complete)) code = kExitCap;
        } else if (o.which == "corollary") {
            auto c = corollary_euler_check(g, vstar, o.seed);
            json checks = json::array();
            for (const auto& e : c.checks)
                checks.push_back({{"i", e.i}, {"j", e.j}, {"terms", e.terms}, {"sum", e.alternating_sum}});
            r["corollary"] = {{"hypotheses", hypotheses_json(c.hypotheses)}, {"failures", c.failures}, {"checks", checks}};
            if (!c.hypotheses.involutivity_decided) code = kExitCap;
        } else {
            throw ArgumentError("verify expects thm1, thm2 or corollary");
        }
    }
    return code;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

bool flat(const json& v) {
    if (v.is_array()) return std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
    return v.is_primitive();
}

std::string flat_text(const json& v) {
    if (!v.is_array()) return scalar_text(v);
    if (v.empty()) return "(none)";
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + scalar_text(x);
    return s;
}

void render_text(const json& j, std::ostream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        if (v.is_null()) continue;
        if (flat(v)) {
            os << pad << it.key() << ": " << flat_text(v) << "\n";
        } else if (v.is_object()) {
            os << pad << it.key() << ":\n";
            render_text(v, os, indent + 2);
        } else {
            os << pad << it.key() << ":\n";
            for (const auto& e : v) {
                if (!e.is_object()) {
                    os << pad << "  - " << (flat(e) ? flat_text(e) : e.dump()) << "\n";
                    continue;
                }
                bool inline_row = std::all_of(e.begin(), e.end(), [](const json& x) { return flat(x); });
                if (inline_row) {
                    std::string line;
                    for (auto f = e.begin(); f != e.end(); ++f) {
                        if (f.value().is_null()) continue;
                        line += (line.empty() ? "" : "  ") + f.key() + "=" +
                                (f.value().is_array() ? "[" + flat_text(f.value()) + "]" : scalar_text(f.value()));
                    }
                    os << pad << "  - " << line << "\n";
                } else {
                    os << pad << "  -\n";
                    render_text(e, os, indent + 4);
                }
            }
        }
    }
}

void emit(const json& r, const std::string& format, std::ostream& out) {
    if (format == "json")
        out << r.dump(2) << "\n";
    else
        render_text(r, out, 0);
}

int fail(const std::string& format, int code, const std::string& kind, const std::string& message, std::ostream& out,
         std::ostream& err, const ParseError* pe = nullptr) {
    if (format == "json") {
        json e = {{"kind", kind}, {"message", pe ? pe->message() : message}};
        if (pe) {
            e["line"] = pe->line();
            e["column"] = pe->column();
            e["token"] = pe->token();
        }
        out << json{{"error", e}, {"exit_code", code}}.dump(2) << "\n";
    } else {
        err << "error (" << kind << "): " << message << "\n";
    }
    return code;
}

std::string sniff_format(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--format=json") return "json";
        if (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json") return "json";
    }
    return "text";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Spencer cohomology and characteristics of linear constant-coefficient PDE symbols", "spencer"};
    app.require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", o.file, ".spd input")->required();
        sub->add_option("--max-degree", o.cap, "highest level computed")->check(CLI::Range(1, 64));
        sub->add_option("--seed", o.seed, "seed for generic choices");
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--field", o.field, "q or qi")->check(CLI::IsMember({"q", "qi"}));
        sub->add_option("--vstar", o.vstar, "covectors spanning V*, e.g. \"dx, dy+dz\"");
        sub->add_option("--w", o.w, "vectors spanning W, e.g. \"@y\"");
        sub->add_option("--order", o.order, "k for reduce");
        sub->add_option("--m", o.m, "acyclicity degree")->check(CLI::NonNegativeNumber);
    };
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"analyze", "orders, cohomology, involutivity and properties"},
        {"cohomology", "Spencer cohomology table"},
        {"involutive", "involutivity verdict with per-order details"},
        {"restrict", "restriction to W = ann(V*)"},
        {"reduce", "equivalence reduction er_k"},
        {"descend", "descended system"},
        {"char", "characteristicity of V*"},
        {"e1table", "E_0, E_1, E_2 terms of the filtration by V*"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        sub->callback([&o, name = name] { o.command = name; });
    }
    auto* verify = app.add_subcommand("verify", "check Theorem 1, Theorem 2 or the Euler sums");
    verify->add_option("which", o.which, "thm1, thm2 or corollary")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "corollary"}));
    add_common(verify);
    verify->callback([&o] { o.command = "verify"; });

    const std::string sniffed = sniff_format(args);
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(sniffed, kExitArgs, "arguments", e.what(), out, err);
    }

    json report;
    try {
        int code = run_command(o, report);
        emit(report, o.format, out);
        return code;
    } catch (const ParseError& e) {
        return fail(o.format, kExitParse, "parse", e.what(), out, err, &e);
    } catch (const CapExceeded& e) {
        return fail(o.format, kExitCap, "cap", e.what(), out, err);
    } catch (const std::invalid_argument& e) {
        return fail(o.format, kExitArgs, "arguments", e.what(), out, err);
    } catch (const std::exception& e) {
        return fail(o.format, kExitArgs, "arguments", e.what(), out, err);
    }
}

}  // namespace spencer
