#include "tka/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tka/autnf.hpp"
#include "tka/braket.hpp"
#include "tka/cfg.hpp"
#include "tka/expr.hpp"
#include "tka/rewrite.hpp"
#include "tka/semantics.hpp"

namespace tka::cli {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_json(const Matrix<ExprRef>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(print_expr(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vec_json(const std::vector<std::uint8_t>& v) {
    Json a = Json::array();
    for (auto x : v) a.push_back(static_cast<int>(x));
    return a;
}

Json grammar_json(const cfg::Grammar& g) {
    Json a = Json::array();
    std::istringstream lines(cfg::print_grammar(g));
    std::string line;
    while (std::getline(lines, line)) a.push_back(line);
    return a;
}

Json automaton_json(const SplitAutomaton& aut) {
    Json j;
    j["n"] = aut.size();
    j["S"] = vec_json(aut.start);
    j["F"] = vec_json(aut.accept);
    j["U"] = matrix_json(aut.U);
    j["X"] = matrix_json(aut.X);
    j["V"] = matrix_json(aut.V);
    j["W"] = matrix_json(aut.W);
    return j;
}

Json normal_form_json(const MatrixNormalForm& nf) {
    Json j;
    j["kind"] = nf.kind == NfKind::First ? "first"
                : nf.kind == NfKind::Reduced ? "reduced"
                                             : "second";
    j["n"] = nf.size();
    j["S"] = vec_json(nf.S);
    j["F"] = vec_json(nf.F);
    j["U"] = matrix_json(nf.U);
    j["V"] = matrix_json(nf.V);
    j["W"] = matrix_json(nf.W);
    j["N_expr"] = matrix_json(nf.N.expr);
    j["denotes"] = print_expr(nf.denote());
    j["grammar"] = grammar_json(nf.N.grammar);
    return j;
}

std::string read_stream(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_input(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") return read_stream(in);
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    return read_stream(f);
}

// image printed one word per line, lexicographically by printed form
std::vector<std::string> image_lines(const NfImage& img) {
    std::vector<std::string> lines;
    lines.reserve(img.words.size());
    for (const auto& w : img.words) lines.push_back(print_nf(w));
    std::sort(lines.begin(), lines.end());
    return lines;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"bracket Kleene algebra toolkit"};
    app.require_subcommand(1);

    int m = 2;
    int bound = 8;
    int trunc = 24;
    bool json = false;
    std::uint64_t seed = 0;  // reserved for property tooling
    app.add_option("--m", m, "number of bracket pairs")->capture_default_str();
    app.add_option("--bound", bound, "source-word length bound")->capture_default_str();
    app.add_option("--trunc", trunc, "model truncation")->capture_default_str();
    app.add_flag("--json", json, "JSON output");
    app.add_option("--seed", seed, "seed for randomized tooling");

    std::string arg1, arg2, arg3;

    auto* c_nf = app.add_subcommand("nf", "normal form of words");
    c_nf->add_option("word", arg1, "word; reads stdin lines when omitted");

    auto* c_enum = app.add_subcommand("enum", "bounded normal-form image");
    c_enum->add_option("expr", arg1)->required();

    auto* c_eq = app.add_subcommand("eq", "bounded equality");
    c_eq->add_option("expr1", arg1)->required();
    c_eq->add_option("expr2", arg2)->required();

    auto* c_member = app.add_subcommand("member", "stack-machine recognition");
    c_member->add_option("expr", arg1)->required();
    c_member->add_option("word", arg2);

    auto* c_centr = app.add_subcommand("centralizer", "bounded centralizer test");
    c_centr->add_option("expr", arg1)->required();

    auto* c_compile = app.add_subcommand("compile", "compile to a split automaton");
    c_compile->add_option("expr", arg1)->required();

    auto* c_nf1 = app.add_subcommand("nf1", "first normal form");
    c_nf1->add_option("expr", arg1)->required();

    auto* c_nfr = app.add_subcommand("nf-reduced", "reduced normal form");
    c_nfr->add_option("expr", arg1)->required();

    auto* c_nf2 = app.add_subcommand("nf2", "second normal form of p0 r q0");
    c_nf2->add_option("expr", arg1)->required();

    auto* c_comb = app.add_subcommand("combine", "combine normal forms");
    c_comb->add_option("op", arg1, "plus|concat|plusclosure|star")->required();
    c_comb->add_option("expr1", arg2)->required();
    c_comb->add_option("expr2", arg3);

    auto* c_braket = app.add_subcommand("braket", "evaluate brackets in the index model");
    c_braket->add_option("expr", arg1)->required();

    auto* c_relcomp = app.add_subcommand("relcomp", "relative completeness check");
    c_relcomp->add_option("expr", arg1, "expression with free letter x")->required();

    auto* c_cfg2expr = app.add_subcommand("cfg2expr", "grammar to scoped expression");
    c_cfg2expr->add_option("file", arg1, "grammar file, - for stdin");

    auto* c_expr2cfg = app.add_subcommand("expr2cfg", "scoped expression to grammar");
    c_expr2cfg->add_option("expr", arg1)->required();

    auto* c_cyk = app.add_subcommand("cyk", "CYK membership");
    c_cyk->add_option("file", arg1, "grammar file, - for stdin")->required();
    c_cyk->add_option("word", arg2);

    auto* c_cfgenum = app.add_subcommand("cfgenum", "bounded grammar enumeration");
    c_cfgenum->add_option("file", arg1, "grammar file, - for stdin");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << Json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
        return 2;
    }

    try {
        if (c_nf->parsed()) {
            auto emit = [&](const std::string& line) {
                out << print_nf(nf_reduce(parse_word(line, m))) << "\n";
            };
            if (!arg1.empty()) {
                emit(arg1);
            } else {
                std::string line;
                while (std::getline(in, line))
                    if (!line.empty()) emit(line);
            }
            return 0;
        }
        if (c_enum->parsed()) {
            NfImage img = enumerate_nf_image(parse_expr(arg1, m), bound);
            if (json) {
                Json j;
                j["bound"] = bound;
                j["words"] = image_lines(img);
                out << j.dump() << "\n";
            } else {
                for (const auto& line : image_lines(img)) out << line << "\n";
            }
            return 0;
        }
        if (c_eq->parsed()) {
            EqVerdict v = equal_bounded(parse_expr(arg1, m), parse_expr(arg2, m), bound);
            if (json) {
                Json j;
                j["verdict"] = v.equal ? "equal-up-to-bound" : "distinct";
                j["bound"] = bound;
                if (v.witness) j["witness"] = print_nf(*v.witness);
                out << j.dump() << "\n";
            } else if (v.equal) {
                out << "equal-up-to-bound " << bound << "\n";
            } else {
                out << "distinct " << print_nf(*v.witness) << "\n";
            }
            return 0;
        }
        if (c_member->parsed()) {
            RecognizeResult r = stack_recognize(parse_expr(arg1, m), arg2);
            if (r == RecognizeResult::BudgetExceeded)
                throw std::runtime_error("search budget exceeded");
            out << (r == RecognizeResult::Accepted ? "true" : "false") << "\n";
            return 0;
        }
        if (c_centr->parsed()) {
            out << (centralizer_check_bounded(parse_expr(arg1, m), bound) ? "true" : "false")
                << "\n";
            return 0;
        }
        if (c_compile->parsed()) {
            out << automaton_json(compile_expr(parse_expr(arg1, m))).dump(2) << "\n";
            return 0;
        }
        if (c_nf1->parsed()) {
            out << normal_form_json(first_normal_form(compile_expr(parse_expr(arg1, m)))).dump(2)
                << "\n";
            return 0;
        }
        if (c_nfr->parsed()) {
            auto nf = reduced_normal_form(compile_expr(parse_expr(arg1, m)), bound);
            if (!nf) {
                out << Json{{"kind", "not-applicable"}, {"bound", bound}}.dump(2) << "\n";
            } else {
                out << normal_form_json(*nf).dump(2) << "\n";
            }
            return 0;
        }
        if (c_nf2->parsed()) {
            ExprRef e = parse_expr(arg1, m);
            if (!is_scoped_shape(e))
                throw std::runtime_error("nf2: expression is not of shape p0 r q0");
            std::vector<ExprRef> innerKids(e->kids.begin() + 1, e->kids.end() - 1);
            ExprRef r = ex_prod(std::move(innerKids));
            out << normal_form_json(project_centralizer(compile_expr(r, true))).dump(2) << "\n";
            return 0;
        }
        if (c_comb->parsed()) {
            NfOp op;
            if (arg1 == "plus")
                op = NfOp::Plus;
            else if (arg1 == "concat")
                op = NfOp::Concat;
            else if (arg1 == "plusclosure")
                op = NfOp::PlusClosure;
            else if (arg1 == "star")
                op = NfOp::Star;
            else
                throw std::runtime_error("combine: op must be plus|concat|plusclosure|star");
            MatrixNormalForm lhs = nf_build(parse_expr(arg2, m), m);
            MatrixNormalForm result = [&] {
                if (op == NfOp::Plus || op == NfOp::Concat) {
                    if (arg3.empty()) throw std::runtime_error("combine: missing second operand");
                    MatrixNormalForm rhs = nf_build(parse_expr(arg3, m), m);
                    return nf_combine(op, lhs, &rhs);
                }
                return nf_combine(op, lhs, nullptr);
            }();
            out << normal_form_json(result).dump(2) << "\n";
            return 0;
        }
        if (c_braket->parsed()) {
            IndexRelation r = omega_model_eval(parse_expr(arg1, m), m, trunc);
            if (json) {
                Json pairs = Json::array();
                for (const auto& [a, b] : r.pairs) pairs.push_back(Json::array({a, b}));
                out << Json{{"trunc", trunc}, {"pairs", pairs}}.dump() << "\n";
            } else {
                for (const auto& [a, b] : r.pairs) out << "(" << a << "," << b << ")\n";
            }
            return 0;
        }
        if (c_relcomp->parsed()) {
            RelCompVerdict v = relative_completeness_check(parse_expr(arg1, m), m, bound);
            if (json) {
                Json j;
                j["verdict"] = v.equal ? "equal-up-to-bound" : "distinct";
                j["bound"] = v.bound;
                j["centralizer_ok"] = v.centralizer_ok;
                if (v.witness) j["witness"] = print_nf(*v.witness);
                out << j.dump() << "\n";
            } else {
                out << (v.equal ? "equal-up-to-bound " + std::to_string(v.bound)
                                : "distinct " + print_nf(*v.witness))
                    << (v.centralizer_ok ? " centralizer-ok" : " centralizer-failed") << "\n";
            }
            return 0;
        }
        if (c_cfg2expr->parsed()) {
            cfg::Grammar g = cfg::parse_grammar(read_input(arg1, in));
            out << print_expr(cfg::cfg_to_expr(g)) << "\n";
            return 0;
        }
        if (c_expr2cfg->parsed()) {
            out << cfg::print_grammar(cfg::expr_to_cfg(parse_expr(arg1, m)));
            return 0;
        }
        if (c_cyk->parsed()) {
            cfg::Grammar g = cfg::parse_grammar(read_input(arg1, in));
            out << (cfg::cyk_member(g, arg2) ? "true" : "false") << "\n";
            return 0;
        }
        if (c_cfgenum->parsed()) {
            cfg::Grammar g = cfg::parse_grammar(read_input(arg1, in));
            for (const auto& w : cfg_enumerate(g, bound)) out << (w.empty() ? ";" : w) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << Json{{"error", e.what()}, {"kind", "domain"}}.dump() << "\n";
        return 1;
    }
    err << Json{{"error", "no subcommand"}, {"kind", "usage"}}.dump() << "\n";
    return 2;
}

}  // namespace tka::cli
