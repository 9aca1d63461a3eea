#include "cxrpq/normalform.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cxrpq {

namespace {

// Structural substitution helpers (immutable trees, rebuilt on change).

AstPtr replace_refs(const AstPtr& a, const VarId& x, const AstPtr& replacement) {
    if (a->kind == Ast::Kind::VarRef) return a->var == x ? replacement : a;
    if (a->children.empty()) return a;
    std::vector<AstPtr> kids;
    kids.reserve(a->children.size());
    bool changed = false;
    for (const auto& c : a->children) {
        AstPtr nc = replace_refs(c, x, replacement);
        changed = changed || nc != c;
        kids.push_back(std::move(nc));
    }
    if (!changed) return a;
    auto n = std::make_shared<Ast>(*a);
    n->children = std::move(kids);
    return n;
}

std::size_t count_defs(const AstPtr& a, const VarId& x) {
    std::size_t n = a->kind == Ast::Kind::VarDef && a->var == x ? 1 : 0;
    for (const auto& c : a->children) n += count_defs(c, x);
    return n;
}

AstPtr rename_def(const AstPtr& a, const VarId& from, const VarId& to) {
    if (a->kind == Ast::Kind::VarDef && a->var == from) {
        auto n = std::make_shared<Ast>(*a);
        n->var = to;
        return n;
    }
    if (a->children.empty()) return a;
    std::vector<AstPtr> kids;
    bool changed = false;
    for (const auto& c : a->children) {
        AstPtr nc = rename_def(c, from, to);
        changed = changed || nc != c;
        kids.push_back(std::move(nc));
    }
    if (!changed) return a;
    auto n = std::make_shared<Ast>(*a);
    n->children = std::move(kids);
    return n;
}

void check_size(const ConjunctiveXregex& cx, const NormalizeOptions& opts, const char* where) {
    if (cx.size() > opts.node_limit)
        throw limit_error(std::string(where) + ": expansion exceeded the node limit");
}

std::vector<AstPtr> multiply_out(const AstPtr& a, std::size_t limit) {
    if (!contains_variables(a)) return {a};
    switch (a->kind) {
        case Ast::Kind::VarRef: return {a};
        case Ast::Kind::VarDef: {
            std::vector<AstPtr> out;
            for (const AstPtr& b : multiply_out(a->children[0], limit)) out.push_back(Ast::def(a->var, b));
            return out;
        }
        case Ast::Kind::Alt: {
            std::vector<AstPtr> out = multiply_out(a->children[0], limit);
            std::vector<AstPtr> right = multiply_out(a->children[1], limit);
            out.insert(out.end(), right.begin(), right.end());
            if (out.size() > limit) throw limit_error("step1: alternative count exceeded the node limit");
            return out;
        }
        case Ast::Kind::Concat: {
            std::vector<std::vector<AstPtr>> parts;
            for (const auto& c : a->children) parts.push_back(multiply_out(c, limit));
            std::vector<AstPtr> out;
            std::vector<AstPtr> combo(parts.size());
            std::function<void(std::size_t)> cross = [&](std::size_t i) {
                if (i == parts.size()) {
                    out.push_back(Ast::concat(combo));
                    if (out.size() > limit) throw limit_error("step1: alternative count exceeded the node limit");
                    return;
                }
                for (const AstPtr& p : parts[i]) {
                    combo[i] = p;
                    cross(i + 1);
                }
            };
            cross(0);
            return out;
        }
        case Ast::Kind::Plus:
            throw fragment_error("step1 requires a vstar-free conjunctive xregex");
        default: return {a};
    }
}

AstPtr alternation_of(const std::vector<AstPtr>& alts) {
    AstPtr out = alts.back();
    for (std::size_t i = alts.size() - 1; i-- > 0;) out = Ast::alt(alts[i], out);
    return out;
}

VarId fresh_name(VarId base, std::set<VarId>& used) {
    while (used.count(base)) base += "_";
    used.insert(base);
    return base;
}

std::size_t next_u_index(const std::set<VarId>& vars) {
    std::size_t next = 1;
    for (const VarId& v : vars) {
        if (v.rfind("u_", 0) == 0) {
            std::size_t idx = 0;
            bool numeric = v.size() > 2;
            for (std::size_t i = 2; i < v.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(v[i]))) { numeric = false; break; }
                idx = idx * 10 + (v[i] - '0');
            }
            if (numeric) next = std::max(next, idx + 1);
        }
    }
    return next;
}

AstPtr find_unique_def(const ConjunctiveXregex& cx, const VarId& z) {
    AstPtr def;
    for (const auto& comp : cx.components) {
        std::function<void(const AstPtr&)> find = [&](const AstPtr& a) {
            if (a->kind == Ast::Kind::VarDef && a->var == z) {
                if (def) throw validation_error("variable '" + z + "' has more than one definition");
                def = a;
            }
            for (const auto& c : a->children) find(c);
        };
        find(comp);
    }
    return def;
}

ConjunctiveXregex modification_step(const ConjunctiveXregex& cx, const VarId& z, std::size_t& counter,
                                    std::set<VarId>& used) {
    AstPtr def = find_unique_def(cx, z);
    if (!def) throw validation_error("variable '" + z + "' has no definition");

    const AstPtr& body = def->children[0];
    if (is_classical(body) || body->kind == Ast::Kind::VarRef) return cx;  // basic already

    std::vector<AstPtr> factors = concat_factors(body);
    std::vector<AstPtr> defs;
    std::vector<AstPtr> refs;
    for (const AstPtr& f : factors) {
        if (f->kind == Ast::Kind::VarDef) {
            defs.push_back(f);
            refs.push_back(Ast::ref(f->var));
        } else if (f->kind == Ast::Kind::VarRef || is_classical(f)) {
            VarId u = fresh_name("u_" + std::to_string(counter++), used);
            defs.push_back(Ast::def(u, f));
            refs.push_back(Ast::ref(u));
        } else {
            throw validation_error("definition body of '" + z + "' is not variable-simple");
        }
    }
    AstPtr def_seq = Ast::concat(defs);
    AstPtr ref_seq = Ast::concat(refs);

    std::function<AstPtr(const AstPtr&)> rewrite = [&](const AstPtr& a) -> AstPtr {
        if (a.get() == def.get()) return def_seq;
        if (a->kind == Ast::Kind::VarRef && a->var == z) return ref_seq;
        if (a->children.empty()) return a;
        std::vector<AstPtr> kids;
        bool changed = false;
        for (const auto& c : a->children) {
            AstPtr nc = rewrite(c);
            changed = changed || nc != c;
            kids.push_back(std::move(nc));
        }
        if (!changed) return a;
        auto n = std::make_shared<Ast>(*a);
        n->children = std::move(kids);
        return n;
    };
    ConjunctiveXregex out{{}, cx.alphabet};
    for (const auto& comp : cx.components) out.components.push_back(rewrite(comp));
    return out;
}

} // namespace

ConjunctiveXregex step1_multiply_out(const ConjunctiveXregex& cx, const NormalizeOptions& opts) {
    ConjunctiveXregex out{{}, cx.alphabet};
    for (const auto& comp : cx.components) {
        if (!is_vstar_free(comp)) throw fragment_error("step1 requires a vstar-free conjunctive xregex");
        out.components.push_back(alternation_of(multiply_out(comp, opts.node_limit)));
        check_size(out, opts, "step1");
    }
    return out;
}

ConjunctiveXregex step2_unique_definitions(const ConjunctiveXregex& cx) {
    for (const auto& comp : cx.components)
        for (const AstPtr& alt : top_alternatives(comp))
            if (!is_variable_simple(alt))
                throw validation_error("step2 requires components that are alternations of variable-simple xregex");

    ConjunctiveXregex out = cx;
    std::set<VarId> used = cx.all_vars();
    for (const VarId& x : cx.all_vars()) {
        // Locate the defining alternatives: (component, alternative index).
        std::vector<std::pair<std::size_t, std::size_t>> where;
        for (std::size_t i = 0; i < out.components.size(); ++i) {
            std::vector<AstPtr> alts = top_alternatives(out.components[i]);
            for (std::size_t j = 0; j < alts.size(); ++j) {
                std::size_t c = count_defs(alts[j], x);
                if (c > 1)
                    throw validation_error("variable '" + x + "' defined twice within one alternative");
                if (c == 1) where.push_back({i, j});
            }
        }
        if (where.empty()) continue;
        for (std::size_t k = 1; k < where.size(); ++k)
            if (where[k].first != where[0].first)
                throw validation_error("variable '" + x + "' defined in two components");

        std::vector<VarId> names;
        for (std::size_t k = 0; k < where.size(); ++k)
            names.push_back(fresh_name(x + "_" + std::to_string(k + 1), used));

        std::size_t comp_idx = where[0].first;
        std::vector<AstPtr> alts = top_alternatives(out.components[comp_idx]);
        for (std::size_t k = 0; k < where.size(); ++k)
            alts[where[k].second] = rename_def(alts[where[k].second], x, names[k]);
        out.components[comp_idx] = alternation_of(alts);

        std::vector<AstPtr> ref_seq;
        for (const VarId& n : names) ref_seq.push_back(Ast::ref(n));
        AstPtr widened = Ast::concat(ref_seq);
        for (auto& comp : out.components) comp = replace_refs(comp, x, widened);
    }
    return out;
}

ConjunctiveXregex main_modification_step(const ConjunctiveXregex& cx, const VarId& z) {
    std::set<VarId> used = cx.all_vars();
    std::size_t counter = next_u_index(used);
    return modification_step(cx, z, counter, used);
}

ConjunctiveXregex step3_remove_nonbasic(const ConjunctiveXregex& cx, const NormalizeOptions& opts) {
    for (const auto& comp : cx.components)
        for (const AstPtr& alt : top_alternatives(comp))
            if (!is_variable_simple(alt))
                throw validation_error("step3 requires components that are alternations of variable-simple xregex");

    ConjunctiveXregex out = cx;
    std::set<VarId> used = cx.all_vars();
    std::size_t counter = next_u_index(used);

    PrecedenceGraph g = precedence_graph(cx);
    std::set<VarId> remaining = g.nodes;
    while (!remaining.empty()) {
        // Lexicographically least root of the residual DAG.
        VarId root;
        bool found = false;
        for (const VarId& v : remaining) {
            bool has_pred = false;
            for (const auto& [x, y] : g.arcs)
                if (y == v && remaining.count(x)) { has_pred = true; break; }
            if (!has_pred) { root = v; found = true; break; }
        }
        if (!found) throw validation_error("precedence relation is cyclic");
        if (find_unique_def(out, root)) {
            out = modification_step(out, root, counter, used);
            check_size(out, opts, "step3");
        }
        remaining.erase(root);
    }
    return out;
}

ConjunctiveXregex normalize(const ConjunctiveXregex& cx, const NormalizeOptions& opts) {
    for (const auto& comp : cx.components)
        if (!is_vstar_free(comp)) throw fragment_error("normalize requires a vstar-free conjunctive xregex");
    ConjunctiveXregex s1 = step1_multiply_out(cx, opts);
    ConjunctiveXregex s2 = step2_unique_definitions(s1);
    return step3_remove_nonbasic(s2, opts);
}

ConjunctiveXregex eliminate_single_reference_definitions(const ConjunctiveXregex& cx) {
    ConjunctiveXregex out = cx;
    for (;;) {
        AstPtr target;
        VarId from, to;
        std::function<void(const AstPtr&)> find = [&](const AstPtr& a) {
            if (target) return;
            if (a->kind == Ast::Kind::VarDef && a->children[0]->kind == Ast::Kind::VarRef) {
                target = a;
                from = a->var;
                to = a->children[0]->var;
                return;
            }
            for (const auto& c : a->children) find(c);
        };
        for (const AstPtr& c : out.components) find(c);
        if (!target) break;
        std::function<AstPtr(const AstPtr&)> rewrite = [&](const AstPtr& a) -> AstPtr {
            if (a.get() == target.get()) return Ast::ref(to);
            if (a->kind == Ast::Kind::VarRef && a->var == from) return Ast::ref(to);
            if (a->children.empty()) return a;
            std::vector<AstPtr> kids;
            for (const auto& c : a->children) kids.push_back(rewrite(c));
            auto n = std::make_shared<Ast>(*a);
            n->children = std::move(kids);
            return n;
        };
        for (AstPtr& c : out.components) c = rewrite(c);
    }
    return out;
}

std::vector<ConjunctiveXregex> expand_to_simple_queries(const ConjunctiveXregex& cx,
                                                        const NormalizeOptions& opts) {
    std::vector<std::vector<AstPtr>> alts;
    std::size_t combos = 1;
    for (const auto& comp : cx.components) {
        alts.push_back(top_alternatives(comp));
        for (const AstPtr& a : alts.back())
            if (!is_simple(a)) throw validation_error("expand_to_simple_queries requires a normal form");
        combos *= alts.back().size();
        if (combos > opts.node_limit) throw limit_error("expansion produces too many simple tuples");
    }

    std::set<VarId> defined_somewhere;
    for (const auto& comp : cx.components) {
        std::function<void(const AstPtr&)> walk = [&](const AstPtr& a) {
            if (a->kind == Ast::Kind::VarDef) defined_somewhere.insert(a->var);
            for (const auto& c : a->children) walk(c);
        };
        walk(comp);
    }

    std::vector<ConjunctiveXregex> out;
    std::vector<std::size_t> pick(cx.dimension(), 0);
    for (;;) {
        std::vector<AstPtr> tuple;
        std::set<VarId> selected_defs;
        for (std::size_t i = 0; i < cx.dimension(); ++i) {
            const AstPtr& a = alts[i][pick[i]];
            tuple.push_back(a);
            std::function<void(const AstPtr&)> walk = [&](const AstPtr& n) {
                if (n->kind == Ast::Kind::VarDef) selected_defs.insert(n->var);
                for (const auto& c : n->children) walk(c);
            };
            walk(a);
        }
        // A reference of a variable whose defining alternative was dropped can
        // only resolve to the empty word.
        for (const VarId& x : defined_somewhere)
            if (!selected_defs.count(x))
                for (auto& comp : tuple) comp = replace_refs(comp, x, Ast::epsilon());
        out.push_back(ConjunctiveXregex{std::move(tuple), cx.alphabet});

        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == alts[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

} // namespace cxrpq
