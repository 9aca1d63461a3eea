#include "cxrpq/translate.hpp"

#include <algorithm>
#include <functional>

#include "cxrpq/nfa.hpp"
#include "cxrpq/normalform.hpp"

namespace cxrpq {

void validate_ecrpq_eq(const EcrpqEq& q) {
    std::vector<bool> covered(q.pattern.edges.size(), false);
    for (const auto& block : q.equality_blocks) {
        if (block.empty()) throw validation_error("equality blocks must be nonempty");
        for (std::size_t e : block) {
            if (e >= q.pattern.edges.size()) throw validation_error("equality block names an unknown edge");
            if (covered[e]) throw validation_error("equality blocks must be disjoint");
            covered[e] = true;
        }
    }
    for (bool c : covered)
        if (!c) throw validation_error("equality blocks must cover every edge");
    for (const PatternEdge& e : q.pattern.edges)
        if (!is_classical(e.label))
            throw validation_error("equality-fragment queries use classical regular expressions");
}

Query ecrpq_eq_to_cxrpq(const EcrpqEq& q) {
    validate_ecrpq_eq(q);
    Query out;
    out.pattern = q.pattern;
    out.output = q.output;
    out.alphabet = q.alphabet;
    std::size_t counter = 1;
    for (const auto& block : q.equality_blocks) {
        if (block.size() < 2) continue;  // unary equality is vacuous
        std::vector<Nfa> nfas;
        nfas.reserve(block.size());
        for (std::size_t e : block) nfas.push_back(regex_to_nfa(q.pattern.edges[e].label, q.alphabet));
        std::vector<const Nfa*> ptrs;
        for (const Nfa& n : nfas) ptrs.push_back(&n);
        AstPtr beta = nfa_to_regex(nfa_product(ptrs));
        VarId z = "z" + std::to_string(counter++);
        out.pattern.edges[block[0]].label = Ast::def(z, beta);
        for (std::size_t i = 1; i < block.size(); ++i)
            out.pattern.edges[block[i]].label = Ast::ref(z);
    }
    return out;
}

namespace {

AstPtr sigma_star_ast(const Alphabet& alphabet) {
    AstPtr any;
    for (char c : alphabet.symbols()) {
        AstPtr t = Ast::terminal(c);
        any = any ? Ast::alt(any, t) : t;
    }
    return Ast::star(any);
}

} // namespace

UnionQuery vsf_to_union_ecrpq_eq(const Query& q, const EvalOptions& opts) {
    ConjunctiveXregex cx = q.cx();
    if (!classify(cx).vstar_free) throw fragment_error("translation requires a vstar-free query");
    ConjunctiveXregex norm = normalize(cx, opts.normalize);

    UnionQuery out;
    for (const ConjunctiveXregex& raw : expand_to_simple_queries(norm, opts.normalize)) {
        ConjunctiveXregex simple = eliminate_single_reference_definitions(raw);

        EcrpqEq d;
        d.output = q.output;
        d.alphabet = q.alphabet;
        std::map<VarId, std::vector<std::size_t>> var_block;
        for (std::size_t i = 0; i < q.pattern.edges.size(); ++i) {
            std::vector<AstPtr> factors = concat_factors(simple.components[i]);
            std::string prev = q.pattern.edges[i].src;
            for (std::size_t j = 0; j < factors.size(); ++j) {
                std::string next = j + 1 == factors.size()
                                       ? q.pattern.edges[i].dst
                                       : "\x01z" + std::to_string(i) + "_" + std::to_string(j);
                const AstPtr& f = factors[j];
                std::size_t edge_idx = d.pattern.edges.size();
                if (f->kind == Ast::Kind::VarDef) {
                    d.pattern.edges.push_back({prev, next, f->children[0]});
                    var_block[f->var].push_back(edge_idx);
                } else if (f->kind == Ast::Kind::VarRef) {
                    d.pattern.edges.push_back({prev, next, sigma_star_ast(q.alphabet)});
                    var_block[f->var].push_back(edge_idx);
                } else {
                    d.pattern.edges.push_back({prev, next, f});
                    d.equality_blocks.push_back({edge_idx});
                }
                prev = next;
            }
        }
        for (auto& [x, block] : var_block) d.equality_blocks.push_back(block);
        std::set<std::string> vars;
        for (const PatternEdge& e : d.pattern.edges) {
            vars.insert(e.src);
            vars.insert(e.dst);
        }
        d.pattern.node_vars.assign(vars.begin(), vars.end());
        validate_ecrpq_eq(d);
        out.disjuncts.push_back(std::move(d));
    }
    return out;
}

UnionQuery bounded_to_union_crpq(const Query& q, std::size_t k, const EvalOptions& opts) {
    ConjunctiveXregex cx = q.cx();
    std::vector<VarId> vars(cx.all_vars().begin(), cx.all_vars().end());

    std::vector<std::string> images{""};
    {
        std::size_t level_begin = 0;
        for (std::size_t len = 1; len <= k; ++len) {
            std::size_t level_end = images.size();
            for (std::size_t i = level_begin; i < level_end; ++i)
                for (char c : q.alphabet.symbols()) images.push_back(images[i] + c);
            level_begin = level_end;
        }
    }
    double space = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) space *= static_cast<double>(images.size());
    if (space > static_cast<double>(opts.mapping_space_limit))
        throw limit_error("bounded_to_union_crpq: mapping space exceeds the limit");

    UnionQuery out;
    VariableMapping v;
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (i == vars.size()) {
            std::vector<AstPtr> fixed = fix_mapping(cx, v);
            for (const AstPtr& comp : fixed)
                if (comp->kind == Ast::Kind::EmptySet) return;
            Query d = q;
            d.mode = SemanticsMode::Unrestricted;
            for (std::size_t e = 0; e < d.pattern.edges.size(); ++e)
                d.pattern.edges[e].label = fixed[e];
            out.disjuncts.push_back(std::move(d));
            return;
        }
        for (const std::string& img : images) {
            v.set(vars[i], img);
            dfs(i + 1);
        }
        v.set(vars[i], "");
    };
    dfs(0);
    return out;
}

AnswerSet eval_ecrpq_eq(const EcrpqEq& q, const GraphDb& db, const EvalOptions& opts) {
    return eval_simple(ecrpq_eq_to_cxrpq(q), db, opts);
}

AnswerSet eval_union(const UnionQuery& u, const GraphDb& db, const EvalOptions& opts) {
    if (u.disjuncts.empty()) throw validation_error("a union query needs at least one disjunct");
    std::optional<std::size_t> arity;
    AnswerSet answers;
    for (const auto& d : u.disjuncts) {
        std::size_t a =
            std::holds_alternative<Query>(d) ? std::get<Query>(d).output.size() : std::get<EcrpqEq>(d).output.size();
        if (arity && *arity != a) throw validation_error("disjuncts disagree on output arity");
        arity = a;
        AnswerSet part;
        if (std::holds_alternative<EcrpqEq>(d)) {
            part = eval_ecrpq_eq(std::get<EcrpqEq>(d), db, opts);
        } else {
            const Query& dq = std::get<Query>(d);
            bool classical = true;
            for (const PatternEdge& e : dq.pattern.edges) classical = classical && is_classical(e.label);
            part = classical ? crpq_eval(dq, db) : evaluate(dq, db, opts);
        }
        answers.insert(part.begin(), part.end());
    }
    return answers;
}

} // namespace cxrpq
