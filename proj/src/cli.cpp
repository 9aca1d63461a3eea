#include "cxrpq/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cxrpq/eval.hpp"
#include "cxrpq/normalform.hpp"
#include "cxrpq/queryio.hpp"
#include "cxrpq/reductions.hpp"

namespace cxrpq {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << content;
}

SemanticsMode parse_mode(const std::string& m) {
    if (m == "unrestricted") return SemanticsMode::Unrestricted;
    if (m == "simple") return SemanticsMode::Simple;
    if (m == "vsf") return SemanticsMode::Vsf;
    if (m == "bounded") return SemanticsMode::Bounded;
    if (m == "log") return SemanticsMode::LogBounded;
    if (m == "oracle") return SemanticsMode::Oracle;
    throw error("unknown mode '" + m + "'");
}

int print_answers(const Query& q, const AnswerSet& answers, std::ostream& out) {
    if (q.boolean()) {
        out << (answers.empty() ? "NO MATCH" : "MATCH") << "\n";
    } else {
        for (const AnswerTuple& t : answers) {
            for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
            out << "\n";
        }
    }
    return answers.empty() ? 1 : 0;
}

// --- eval ------------------------------------------------------------------

int cmd_eval(const std::string& graph_path, const std::string& query_path, const std::string& mode,
             long long k, long long ref_len, long long path_len, const std::string& log_measure,
             std::ostream& out) {
    GraphDb db = load_graphdb(slurp(graph_path));
    QueryBlock block = parse_query_block(slurp(query_path));
    Query q = block.query;
    if (!mode.empty()) q.mode = parse_mode(mode);
    if (k >= 0) {
        q.bound_k = static_cast<std::size_t>(k);
        if (mode.empty()) q.mode = SemanticsMode::Bounded;
    }
    if (ref_len >= 0) q.oracle_ref = static_cast<std::size_t>(ref_len);
    if (path_len >= 0) q.oracle_path = static_cast<std::size_t>(path_len);

    AnswerSet answers;
    if (q.mode == SemanticsMode::LogBounded && log_measure != "size") {
        std::size_t measure = log_measure == "nodes" ? db.num_nodes() : db.arcs().size();
        measure = std::max<std::size_t>(measure, 1);
        std::size_t kk = 0;
        while ((static_cast<std::size_t>(1) << (kk + 1)) <= measure) ++kk;
        answers = eval_bounded(q, kk, db);
    } else if (block.is_equality_fragment()) {
        answers = eval_ecrpq_eq(block.to_ecrpq_eq(), db);
    } else {
        answers = evaluate(q, db);
    }
    return print_answers(q, answers, out);
}

// --- classify ---------------------------------------------------------------

int cmd_classify(const std::string& query_path, std::ostream& out) {
    QueryBlock block = parse_query_block(slurp(query_path));
    ConjunctiveXregex cx = block.query.cx();
    FragmentClassification fc = classify(cx);
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    out << "dimension      " << cx.dimension() << "\n";
    out << "vstar-free     " << flag(fc.vstar_free) << "\n";
    out << "valt-free      " << flag(fc.valt_free) << "\n";
    out << "variable-simple " << flag(fc.variable_simple) << "\n";
    out << "simple         " << flag(fc.simple) << "\n";
    out << "normal-form    " << flag(fc.normal_form) << "\n";
    out << "all-flat       " << flag(fc.all_flat) << "\n";
    out << "flat-vars     ";
    for (const VarId& x : fc.flat_vars) out << " " << x;
    out << "\n";
    out << "precedence    ";
    for (const VarId& x : precedence_graph(cx).topological_order()) out << " " << x;
    out << "\n";
    return 0;
}

// --- normalize ----------------------------------------------------------------

int cmd_normalize(const std::string& query_path, const std::string& out_path, std::size_t node_limit,
                  std::ostream& out) {
    QueryBlock block = parse_query_block(slurp(query_path));
    Query q = block.query;
    ConjunctiveXregex cx = q.cx();
    NormalizeOptions opts{node_limit};

    ConjunctiveXregex s1 = step1_multiply_out(cx, opts);
    ConjunctiveXregex s2 = step2_unique_definitions(s1);
    ConjunctiveXregex s3 = step3_remove_nonbasic(s2, opts);
    for (std::size_t i = 0; i < q.pattern.edges.size(); ++i) q.pattern.edges[i].label = s3.components[i];

    std::string report = "% input nodes " + std::to_string(cx.size()) + "\n" +
                         "% step1 nodes " + std::to_string(s1.size()) + "\n" +
                         "% step2 nodes " + std::to_string(s2.size()) + "\n" +
                         "% step3 nodes " + std::to_string(s3.size()) + "\n";
    spill(out_path, report + save_query(q), out);
    return 0;
}

// --- translate -----------------------------------------------------------------

int cmd_translate(const std::string& query_path, const std::string& target, long long k,
                  const std::string& out_path, std::ostream& out) {
    QueryBlock block = parse_query_block(slurp(query_path));
    if (target == "cxrpq") {
        Query q = ecrpq_eq_to_cxrpq(block.to_ecrpq_eq());
        spill(out_path, save_query(q), out);
        return 0;
    }
    if (target == "union-ecrpq-eq") {
        UnionQuery u = vsf_to_union_ecrpq_eq(block.query);
        spill(out_path, save_union(u), out);
        return 0;
    }
    if (target == "union-crpq") {
        if (k < 0) throw error("--k is required for target union-crpq");
        UnionQuery u = bounded_to_union_crpq(block.query, static_cast<std::size_t>(k));
        spill(out_path, save_union(u), out);
        return 0;
    }
    throw error("unknown target '" + target + "'");
}

// --- gen --------------------------------------------------------------------

Nfa parse_automata_block(const std::string& text, std::vector<Nfa>& out) {
    // Format: `automaton` starts a block; then `start <s>`, `final <s>`,
    // `trans <src> <sym> <dst>` with free-form state names.
    std::istringstream in(text);
    std::string line;
    Nfa* cur = nullptr;
    std::map<std::string, int> states;
    auto state = [&](const std::string& id) {
        auto it = states.find(id);
        if (it != states.end()) return it->second;
        int s = cur->add_state();
        states.emplace(id, s);
        return s;
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t c = line.find('%');
        if (c != std::string::npos) line.resize(c);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "automaton") {
            out.emplace_back();
            cur = &out.back();
            states.clear();
        } else if (!cur) {
            throw parse_error("directive before 'automaton'", lineno);
        } else if (head == "start") {
            std::string s;
            ls >> s;
            cur->start = state(s);
        } else if (head == "final") {
            std::string s;
            ls >> s;
            cur->set_final(state(s));
        } else if (head == "trans") {
            std::string src, sym, dst;
            if (!(ls >> src >> sym >> dst) || sym.size() != 1)
                throw parse_error("expected 'trans <src> <sym> <dst>'", lineno);
            cur->add_transition(state(src), cur->intern_symbol(RefSymbol::terminal(sym[0])), state(dst));
        } else {
            throw parse_error("unknown directive '" + head + "'", lineno);
        }
    }
    if (out.empty()) throw error("no automata in input");
    return out.back();
}

std::vector<std::set<std::size_t>> parse_sets(const std::vector<std::string>& specs) {
    std::vector<std::set<std::size_t>> sets;
    for (const std::string& spec : specs) {
        std::set<std::size_t> s;
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) s.insert(std::stoul(item));
        sets.push_back(std::move(s));
    }
    return sets;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"conjunctive xregex path query toolkit"};
    app.require_subcommand(1);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a query against a graph database");
    std::string graph_path, query_path, mode, log_measure = "size";
    long long k = -1, ref_len = -1, path_len = -1;
    eval_cmd->add_option("-g,--graph", graph_path, "graph file")->required();
    eval_cmd->add_option("-q,--query", query_path, "query file")->required();
    eval_cmd->add_option("--mode", mode, "unrestricted|simple|vsf|bounded|log|oracle");
    eval_cmd->add_option("--k", k, "image bound for bounded mode");
    eval_cmd->add_option("--ref-len", ref_len, "ref-word length bound for oracle mode");
    eval_cmd->add_option("--path-len", path_len, "path length bound for oracle mode");
    eval_cmd->add_option("--log-measure", log_measure, "database size measure for log mode")
        ->check(CLI::IsMember({"size", "nodes", "arcs"}));

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "report fragment membership of a query");
    std::string classify_path;
    classify_cmd->add_option("-q,--query", classify_path, "query file")->required();

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "rewrite a vstar-free query into normal form");
    std::string norm_path, norm_out;
    std::size_t node_limit = 1'000'000;
    norm_cmd->add_option("-q,--query", norm_path, "query file")->required();
    norm_cmd->add_option("-o,--output", norm_out, "output file (default stdout)");
    norm_cmd->add_option("--node-limit", node_limit, "expansion guard");

    // translate
    auto* tr_cmd = app.add_subcommand("translate", "translate between query classes");
    std::string tr_path, tr_target, tr_out;
    long long tr_k = -1;
    tr_cmd->add_option("-q,--query", tr_path, "query file")->required();
    tr_cmd->add_option("--target", tr_target, "cxrpq|union-ecrpq-eq|union-crpq")->required();
    tr_cmd->add_option("--k", tr_k, "image bound for union-crpq");
    tr_cmd->add_option("-o,--output", tr_out, "output file (default stdout)");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate reduction instances");
    auto* gen_nfa = gen_cmd->add_subcommand("nfa-intersection", "automata intersection instance");
    std::string aut_path, variant = "unrolled", og, oq;
    gen_nfa->add_option("--automata", aut_path, "automata file")->required();
    gen_nfa->add_option("--variant", variant, "starred|unrolled")
        ->check(CLI::IsMember({"starred", "unrolled"}));
    gen_nfa->add_option("-g,--out-graph", og, "graph output file")->required();
    gen_nfa->add_option("-q,--out-query", oq, "query output file")->required();

    auto* gen_hs = gen_cmd->add_subcommand("hitting-set", "hitting set instance");
    std::size_t universe = 0, budget = 0;
    std::vector<std::string> set_specs;
    std::string hs_og, hs_oq;
    gen_hs->add_option("--universe", universe, "universe size n; elements are 1..n")->required();
    gen_hs->add_option("--set", set_specs, "comma separated set, repeatable")->required();
    gen_hs->add_option("--budget", budget, "hitting set budget")->required();
    gen_hs->add_option("-g,--out-graph", hs_og, "graph output file")->required();
    gen_hs->add_option("-q,--out-query", hs_oq, "query output file")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (eval_cmd->parsed())
            return cmd_eval(graph_path, query_path, mode, k, ref_len, path_len, log_measure, out);
        if (classify_cmd->parsed()) return cmd_classify(classify_path, out);
        if (norm_cmd->parsed()) return cmd_normalize(norm_path, norm_out, node_limit, out);
        if (tr_cmd->parsed()) return cmd_translate(tr_path, tr_target, tr_k, tr_out, out);
        if (gen_cmd->parsed()) {
            if (gen_nfa->parsed()) {
                std::vector<Nfa> automata;
                parse_automata_block(slurp(aut_path), automata);
                ReductionInstance inst = gen_nfa_intersection_instance(
                    automata, variant == "starred" ? NfaIntersectionVariant::Starred
                                                   : NfaIntersectionVariant::Unrolled);
                spill(og, save_graphdb(inst.db), out);
                spill(oq, save_query(inst.query), out);
                return 0;
            }
            if (gen_hs->parsed()) {
                ReductionInstance inst =
                    gen_hitting_set_instance(universe, parse_sets(set_specs), budget);
                spill(hs_og, save_graphdb(inst.db), out);
                spill(hs_oq, save_query(inst.query), out);
                return 0;
            }
            err << "error: gen needs a subcommand\n";
            return 2;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace cxrpq
