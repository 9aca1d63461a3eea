#ifndef CXRPQ_TESTUTIL_HPP
#define CXRPQ_TESTUTIL_HPP

// Test-only reference implementations, deliberately independent of the
// library's automata machinery: direct syntax-tree language enumeration, a
// derivative-based membership matcher, and brute-force query evaluation by
// morphism enumeration. Plus seeded random generators.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cxrpq/graphdb.hpp"
#include "cxrpq/refwords.hpp"
#include "cxrpq/xregex.hpp"

namespace cxrpq::testutil {

// --- bounded language by AST recursion --------------------------------------

inline std::set<std::string> ast_lang(const AstPtr& a, std::size_t max_len) {
    using Set = std::set<std::string>;
    std::function<Set(const AstPtr&)> go = [&](const AstPtr& n) -> Set {
        switch (n->kind) {
            case Ast::Kind::Terminal:
                if (n->sym.kind != RefSymbol::Kind::Terminal) throw error("ast_lang: extended symbol");
                return max_len >= 1 ? Set{std::string(1, n->sym.ch)} : Set{};
            case Ast::Kind::Epsilon: return {""};
            case Ast::Kind::EmptySet: return {};
            case Ast::Kind::Alt: {
                Set out = go(n->children[0]);
                for (auto& w : go(n->children[1])) out.insert(w);
                return out;
            }
            case Ast::Kind::Concat: {
                Set acc{""};
                for (const auto& c : n->children) {
                    Set nxt;
                    Set part = go(c);
                    for (const auto& l : acc)
                        for (const auto& r : part)
                            if (l.size() + r.size() <= max_len) nxt.insert(l + r);
                    acc = std::move(nxt);
                    if (acc.empty()) break;
                }
                return acc;
            }
            case Ast::Kind::Plus: {
                Set base = go(n->children[0]);
                Set acc = base, frontier = base;
                for (;;) {
                    Set nxt;
                    for (const auto& l : frontier)
                        for (const auto& r : base)
                            if (l.size() + r.size() <= max_len && !acc.count(l + r)) nxt.insert(l + r);
                    if (nxt.empty()) break;
                    acc.insert(nxt.begin(), nxt.end());
                    frontier = std::move(nxt);
                }
                return acc;
            }
            default: throw error("ast_lang: classical expressions only");
        }
    };
    return go(a);
}

// --- bounded ref-language by AST recursion -----------------------------------

using RefVec = std::vector<RefSymbol>;

inline std::set<RefVec> ast_reflang(const AstPtr& a, std::size_t max_len) {
    using Set = std::set<RefVec>;
    auto cat = [&](const Set& l, const Set& r) {
        Set out;
        for (const auto& x : l)
            for (const auto& y : r)
                if (x.size() + y.size() <= max_len) {
                    RefVec w = x;
                    w.insert(w.end(), y.begin(), y.end());
                    out.insert(std::move(w));
                }
        return out;
    };
    std::function<Set(const AstPtr&)> go = [&](const AstPtr& n) -> Set {
        switch (n->kind) {
            case Ast::Kind::Terminal: return max_len >= 1 ? Set{RefVec{n->sym}} : Set{};
            case Ast::Kind::Epsilon: return {RefVec{}};
            case Ast::Kind::EmptySet: return {};
            case Ast::Kind::VarRef:
                return max_len >= 1 ? Set{RefVec{RefSymbol::ref(n->var)}} : Set{};
            case Ast::Kind::VarDef: {
                Set inner = go(n->children[0]);
                Set out;
                for (const auto& w : inner)
                    if (w.size() + 2 <= max_len) {
                        RefVec v{RefSymbol::open(n->var)};
                        v.insert(v.end(), w.begin(), w.end());
                        v.push_back(RefSymbol::close(n->var));
                        out.insert(std::move(v));
                    }
                return out;
            }
            case Ast::Kind::Alt: {
                Set out = go(n->children[0]);
                for (auto& w : go(n->children[1])) out.insert(w);
                return out;
            }
            case Ast::Kind::Concat: {
                Set acc{RefVec{}};
                for (const auto& c : n->children) {
                    acc = cat(acc, go(c));
                    if (acc.empty()) break;
                }
                return acc;
            }
            case Ast::Kind::Plus: {
                Set base = go(n->children[0]);
                Set acc = base, frontier = base;
                for (;;) {
                    Set nxt;
                    for (const auto& w : cat(frontier, base))
                        if (!acc.count(w)) nxt.insert(w);
                    if (nxt.empty()) break;
                    acc.insert(nxt.begin(), nxt.end());
                    frontier = std::move(nxt);
                }
                return acc;
            }
        }
        return {};
    };
    return go(a);
}

// --- derivative-based membership ---------------------------------------------

inline bool deriv_nullable(const AstPtr& a) {
    switch (a->kind) {
        case Ast::Kind::Epsilon: return true;
        case Ast::Kind::Terminal:
        case Ast::Kind::EmptySet: return false;
        case Ast::Kind::Alt: return deriv_nullable(a->children[0]) || deriv_nullable(a->children[1]);
        case Ast::Kind::Plus: return deriv_nullable(a->children[0]);
        case Ast::Kind::Concat: {
            for (const auto& c : a->children)
                if (!deriv_nullable(c)) return false;
            return true;
        }
        default: throw error("derivative: classical expressions only");
    }
}

inline AstPtr deriv(const AstPtr& a, char c) {
    auto alt = [](AstPtr l, AstPtr r) -> AstPtr {
        if (l->kind == Ast::Kind::EmptySet) return r;
        if (r->kind == Ast::Kind::EmptySet) return l;
        return Ast::alt(std::move(l), std::move(r));
    };
    auto cat = [](AstPtr l, AstPtr r) -> AstPtr {
        if (l->kind == Ast::Kind::EmptySet || r->kind == Ast::Kind::EmptySet) return Ast::empty_set();
        if (l->kind == Ast::Kind::Epsilon) return r;
        if (r->kind == Ast::Kind::Epsilon) return l;
        return Ast::concat({std::move(l), std::move(r)});
    };
    switch (a->kind) {
        case Ast::Kind::Terminal:
            return a->sym.kind == RefSymbol::Kind::Terminal && a->sym.ch == c ? Ast::epsilon()
                                                                              : Ast::empty_set();
        case Ast::Kind::Epsilon:
        case Ast::Kind::EmptySet: return Ast::empty_set();
        case Ast::Kind::Alt: return alt(deriv(a->children[0], c), deriv(a->children[1], c));
        case Ast::Kind::Plus:
            return cat(deriv(a->children[0], c), Ast::star(a->children[0]));
        case Ast::Kind::Concat: {
            AstPtr rest = a->children.size() == 2
                              ? a->children[1]
                              : Ast::concat(std::vector<AstPtr>(a->children.begin() + 1, a->children.end()));
            AstPtr first = cat(deriv(a->children[0], c), rest);
            if (deriv_nullable(a->children[0])) return alt(first, deriv(rest, c));
            return first;
        }
        default: throw error("derivative: classical expressions only");
    }
}

inline bool deriv_matches(const AstPtr& a, const std::string& w) {
    AstPtr cur = a;
    for (char c : w) {
        cur = deriv(cur, c);
        if (cur->kind == Ast::Kind::EmptySet) return false;
    }
    return deriv_nullable(cur);
}

// --- derivative-driven reachability -------------------------------------------
// Complete without a path bound: BFS over (node, partial-derivative term)
// pairs. Partial derivatives keep the term population linear in the label.

inline std::vector<AstPtr> partial_deriv(const AstPtr& a, char c) {
    auto cat = [](const AstPtr& l, const AstPtr& r) -> AstPtr {
        if (l->kind == Ast::Kind::Epsilon) return r;
        if (r->kind == Ast::Kind::Epsilon) return l;
        return Ast::concat({l, r});
    };
    switch (a->kind) {
        case Ast::Kind::Terminal:
            if (a->sym.kind == RefSymbol::Kind::Terminal && a->sym.ch == c) return {Ast::epsilon()};
            return {};
        case Ast::Kind::Epsilon:
        case Ast::Kind::EmptySet: return {};
        case Ast::Kind::Alt: {
            std::vector<AstPtr> out = partial_deriv(a->children[0], c);
            for (AstPtr& t : partial_deriv(a->children[1], c)) out.push_back(t);
            return out;
        }
        case Ast::Kind::Plus: {
            std::vector<AstPtr> out;
            for (AstPtr& t : partial_deriv(a->children[0], c))
                out.push_back(cat(t, Ast::star(a->children[0])));
            return out;
        }
        case Ast::Kind::Concat: {
            AstPtr rest = a->children.size() == 2
                              ? a->children[1]
                              : Ast::concat(std::vector<AstPtr>(a->children.begin() + 1, a->children.end()));
            std::vector<AstPtr> out;
            for (AstPtr& t : partial_deriv(a->children[0], c)) out.push_back(cat(t, rest));
            if (deriv_nullable(a->children[0]))
                for (AstPtr& t : partial_deriv(rest, c)) out.push_back(t);
            return out;
        }
        default: throw error("partial derivatives: classical expressions only");
    }
}

inline bool deriv_edge_reach(const GraphDb& db, const AstPtr& label, int u, int v) {
    std::set<std::pair<int, std::string>> seen;
    std::vector<std::pair<int, AstPtr>> frontier{{u, label}};
    seen.insert({u, render_xregex(label)});
    std::size_t guard = 0;
    while (!frontier.empty()) {
        if (++guard > 200000) throw error("derivative reachability exceeded its guard");
        auto [node, r] = frontier.back();
        frontier.pop_back();
        if (node == v && deriv_nullable(r)) return true;
        for (char c : db.alphabet().symbols()) {
            if (db.out(node, c).empty()) continue;
            for (const AstPtr& d : partial_deriv(r, c)) {
                for (int nxt : db.out(node, c)) {
                    auto key = std::make_pair(nxt, render_xregex(d));
                    if (seen.insert(key).second) frontier.push_back({nxt, d});
                }
            }
        }
    }
    return false;
}

inline AnswerSet brute_crpq_exact(const Query& q, const GraphDb& db) {
    std::vector<std::string> vars = q.pattern.node_vars;
    AnswerSet answers;
    std::map<std::string, int> h;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == vars.size()) {
            for (const PatternEdge& e : q.pattern.edges)
                if (!deriv_edge_reach(db, e.label, h.at(e.src), h.at(e.dst))) return;
            AnswerTuple t;
            for (const std::string& z : q.output) t.push_back(db.node_id(h.at(z)));
            answers.insert(std::move(t));
            return;
        }
        for (int n = 0; n < db.num_nodes(); ++n) {
            h[vars[i]] = n;
            go(i + 1);
        }
        h.erase(vars[i]);
    };
    go(0);
    return answers;
}

// --- brute-force CRPQ evaluation by morphism enumeration ----------------------

inline AnswerSet brute_crpq(const Query& q, const GraphDb& db, std::size_t path_len) {
    // All words labelling u -> v paths of bounded length.
    std::map<std::pair<int, int>, std::set<std::string>> words;
    for (int u = 0; u < db.num_nodes(); ++u)
        for (const auto& [target, w] : enumerate_paths(db, db.node_id(u), path_len))
            words[{u, *db.node_index(target)}].insert(w);

    std::vector<std::string> vars = q.pattern.node_vars;
    AnswerSet answers;
    std::map<std::string, int> h;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == vars.size()) {
            for (const PatternEdge& e : q.pattern.edges) {
                const auto& ws = words[{h.at(e.src), h.at(e.dst)}];
                bool ok = false;
                for (const std::string& w : ws)
                    if (deriv_matches(e.label, w)) { ok = true; break; }
                if (!ok) return;
            }
            AnswerTuple t;
            for (const std::string& z : q.output) t.push_back(db.node_id(h.at(z)));
            answers.insert(std::move(t));
            return;
        }
        for (int n = 0; n < db.num_nodes(); ++n) {
            h[vars[i]] = n;
            go(i + 1);
        }
        h.erase(vars[i]);
    };
    go(0);
    return answers;
}

// --- random generators ---------------------------------------------------------

struct Gen {
    std::mt19937 rng;
    explicit Gen(unsigned seed) : rng(seed) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    bool coin(double p = 0.5) { return std::uniform_real_distribution<>(0, 1)(rng) < p; }

    char symbol(const Alphabet& sigma) {
        return sigma.symbols()[pick(0, static_cast<int>(sigma.size()) - 1)];
    }

    AstPtr classical(const Alphabet& sigma, int budget) {
        if (budget <= 1) {
            int r = pick(0, 5);
            if (r == 0) return Ast::epsilon();
            return Ast::terminal(symbol(sigma));
        }
        switch (pick(0, 5)) {
            case 0: return Ast::terminal(symbol(sigma));
            case 1: {
                int left = pick(1, budget - 1);
                return Ast::alt(classical(sigma, left), classical(sigma, budget - left));
            }
            case 2: return Ast::plus(classical(sigma, budget - 1));
            case 3: return Ast::star(classical(sigma, budget - 2 > 0 ? budget - 2 : 1));
            default: {
                int parts = pick(2, 3);
                std::vector<AstPtr> kids;
                int rem = budget;
                for (int i = 0; i < parts; ++i) {
                    int b = i + 1 == parts ? rem : std::max(1, rem / (parts - i));
                    kids.push_back(classical(sigma, std::max(1, b)));
                    rem -= b;
                }
                return Ast::concat(std::move(kids));
            }
        }
    }

    // A sequential, acyclic xregex over the variable pool. Retries on
    // validation failure.
    AstPtr xregex(const Alphabet& sigma, const std::vector<VarId>& pool, int budget,
                  bool vstar_free) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            AstPtr a = xregex_raw(sigma, pool, budget, vstar_free, false);
            try {
                if (is_sequential(a) && precedence_graph_of(a).is_acyclic()) return a;
            } catch (const error&) {
            }
        }
        return classical(sigma, budget);
    }

    AstPtr xregex_raw(const Alphabet& sigma, const std::vector<VarId>& pool, int budget,
                      bool vstar_free, bool under_rep) {
        if (budget <= 1) {
            int r = pick(0, 7);
            if (r == 0) return Ast::epsilon();
            if (r <= 2 && !pool.empty() && !(vstar_free && under_rep))
                return Ast::ref(pool[pick(0, static_cast<int>(pool.size()) - 1)]);
            return Ast::terminal(symbol(sigma));
        }
        switch (pick(0, 7)) {
            case 0: return Ast::terminal(symbol(sigma));
            case 1: {
                int left = pick(1, budget - 1);
                return Ast::alt(xregex_raw(sigma, pool, left, vstar_free, under_rep),
                                xregex_raw(sigma, pool, budget - left, vstar_free, under_rep));
            }
            case 2: {
                if (vstar_free) return Ast::plus(classical(sigma, budget - 1));
                return Ast::plus(xregex_raw(sigma, pool, budget - 1, vstar_free, true));
            }
            case 3: {
                if (!pool.empty() && !(vstar_free && under_rep)) {
                    VarId x = pool[pick(0, static_cast<int>(pool.size()) - 1)];
                    AstPtr body = xregex_raw(sigma, pool, budget - 2, vstar_free, under_rep);
                    if (!vars_of(body).count(x)) return Ast::def(x, body);
                }
                return classical(sigma, budget);
            }
            default: {
                int parts = pick(2, 3);
                std::vector<AstPtr> kids;
                int rem = budget;
                for (int i = 0; i < parts; ++i) {
                    int b = i + 1 == parts ? rem : std::max(1, rem / (parts - i));
                    kids.push_back(xregex_raw(sigma, pool, std::max(1, b), vstar_free, under_rep));
                    rem -= b;
                }
                return Ast::concat(std::move(kids));
            }
        }
    }

    ConjunctiveXregex conjunctive(const Alphabet& sigma, int dims, int vars, int budget,
                                  bool vstar_free) {
        std::vector<VarId> pool;
        for (int i = 0; i < vars; ++i) pool.push_back(std::string(1, static_cast<char>('x' + i)));
        for (int attempt = 0;; ++attempt) {
            std::vector<AstPtr> comps;
            for (int i = 0; i < dims; ++i)
                comps.push_back(xregex_raw(sigma, pool, std::max(1, budget / dims), vstar_free, false));
            try {
                return validate_conjunctive(comps, sigma);
            } catch (const error&) {
                if (attempt > 200) {
                    std::vector<AstPtr> fallback;
                    for (int i = 0; i < dims; ++i) fallback.push_back(classical(sigma, budget / dims));
                    return validate_conjunctive(fallback, sigma);
                }
            }
        }
    }

    GraphDb db(const Alphabet& sigma, int max_nodes, int max_arcs) {
        GraphDb out(sigma);
        int nodes = pick(1, max_nodes);
        for (int i = 0; i < nodes; ++i) out.add_node("v" + std::to_string(i));
        int arcs = pick(0, max_arcs);
        for (int i = 0; i < arcs; ++i)
            out.add_arc("v" + std::to_string(pick(0, nodes - 1)), symbol(sigma),
                        "v" + std::to_string(pick(0, nodes - 1)));
        return out;
    }

    Query query(const ConjunctiveXregex& cx, int node_var_count, int output_arity) {
        Query q;
        q.alphabet = cx.alphabet;
        std::vector<std::string> vars;
        for (int i = 0; i < node_var_count; ++i) vars.push_back("n" + std::to_string(i));
        q.pattern.node_vars = vars;
        for (const AstPtr& comp : cx.components) {
            std::string s = vars[pick(0, node_var_count - 1)];
            std::string t = vars[pick(0, node_var_count - 1)];
            q.pattern.edges.push_back({s, t, comp});
        }
        for (int i = 0; i < output_arity; ++i) q.output.push_back(vars[pick(0, node_var_count - 1)]);
        return q;
    }
};

} // namespace cxrpq::testutil

#endif
