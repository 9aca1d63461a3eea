#include "cxrpq/eval.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "cxrpq/conjunctive.hpp"
#include "cxrpq/nfa.hpp"

namespace cxrpq {

namespace {

AstPtr word_ast(const std::string& w) { return Ast::word(w); }

// Classical expression with every reference and definition replaced by the
// image the mapping assigns to its variable.
AstPtr imaged_classical(const AstPtr& a, const VariableMapping& v) {
    switch (a->kind) {
        case Ast::Kind::VarRef:
        case Ast::Kind::VarDef: return word_ast(v.get(a->var));
        case Ast::Kind::Terminal:
        case Ast::Kind::Epsilon:
        case Ast::Kind::EmptySet: return a;
        default: {
            std::vector<AstPtr> kids;
            for (const auto& c : a->children) kids.push_back(imaged_classical(c, v));
            auto n = std::make_shared<Ast>(*a);
            n->children = std::move(kids);
            return n;
        }
    }
}

std::set<VarId> syntactically_defined(const AstPtr& a) {
    std::set<VarId> out;
    std::function<void(const AstPtr&)> walk = [&](const AstPtr& n) {
        if (n->kind == Ast::Kind::VarDef) out.insert(n->var);
        for (const auto& c : n->children) walk(c);
    };
    walk(a);
    return out;
}

// ---------------------------------------------------------------------------
// eval_simple

// After splitting the pattern into factor edges, factors carrying the same
// string variable must realize one common word; everything else is
// independent. Each class is solved by a product of the database (one copy
// per member) with the class automaton, and the classes are joined over the
// node variables.
struct FactorClass {
    std::vector<std::pair<std::string, std::string>> endpoints;  // (src, dst) per member
    AstPtr language;                                             // classical; Sigma* for pure references
};

// Relation over 2f node indices: tuples (u_1..u_f, v_1..v_f) such that one
// word of the class language labels a path u_j -> v_j for every member.
std::set<std::vector<int>> class_relation(const FactorClass& cls, const GraphDb& db,
                                          const Alphabet& alphabet, std::size_t product_limit) {
    Nfa nfa = regex_to_nfa(cls.language, alphabet);
    std::size_t f = cls.endpoints.size();
    int nv = db.num_nodes(), nq = nfa.num_states();

    double states = nq;
    for (std::size_t j = 0; j < f; ++j) states *= nv;
    double searches = states;
    for (std::size_t j = 0; j < f; ++j) searches *= nv;
    if (searches > static_cast<double>(product_limit))
        throw limit_error("eval_simple: synchronized product exceeds the state limit");

    auto pack = [&](const std::vector<int>& nodes, int q) {
        std::size_t key = q;
        for (int n : nodes) key = key * nv + n;
        return key;
    };

    std::set<std::vector<int>> rel;
    std::vector<int> start_nodes(f, 0);
    for (;;) {
        // BFS over (nodes, nfa state).
        std::vector<bool> seen(static_cast<std::size_t>(nq) * [&] {
            std::size_t p = 1;
            for (std::size_t j = 0; j < f; ++j) p *= nv;
            return p;
        }(), false);
        std::queue<std::pair<std::vector<int>, int>> q;
        auto push = [&](const std::vector<int>& nodes, int state) {
            std::size_t key = pack(nodes, state);
            if (!seen[key]) {
                seen[key] = true;
                q.push({nodes, state});
            }
        };
        for (int s : nfa.epsilon_closure({nfa.start})) push(start_nodes, s);
        while (!q.empty()) {
            auto [nodes, state] = q.front();
            q.pop();
            if (nfa.is_final(state)) {
                std::vector<int> tup = start_nodes;
                tup.insert(tup.end(), nodes.begin(), nodes.end());
                rel.insert(std::move(tup));
            }
            for (const auto& t : nfa.out(state)) {
                if (t.sym == Nfa::kEpsilon) {
                    push(nodes, t.dst);
                    continue;
                }
                char c = nfa.symbols()[t.sym].ch;
                // All members advance on the same symbol.
                std::vector<std::vector<int>> succ;
                bool dead = false;
                for (std::size_t j = 0; j < f; ++j) {
                    const auto& nxt = db.out(nodes[j], c);
                    if (nxt.empty()) { dead = true; break; }
                    succ.push_back(nxt);
                }
                if (dead) continue;
                std::vector<std::size_t> idx(f, 0);
                for (;;) {
                    std::vector<int> nn(f);
                    for (std::size_t j = 0; j < f; ++j) nn[j] = succ[j][idx[j]];
                    push(nn, t.dst);
                    std::size_t j = 0;
                    while (j < f && ++idx[j] == succ[j].size()) idx[j++] = 0;
                    if (j == f) break;
                }
            }
        }
        // next start tuple
        std::size_t j = 0;
        while (j < f && ++start_nodes[j] == nv) start_nodes[j++] = 0;
        if (j == f) break;
    }
    return rel;
}

AnswerSet join_classes(const Query& q, const GraphDb& db,
                       const std::vector<FactorClass>& classes,
                       const std::vector<std::set<std::vector<int>>>& relations) {
    std::vector<std::size_t> order(classes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return relations[a].size() < relations[b].size(); });

    AnswerSet answers;
    std::map<std::string, int> assign;
    std::function<void(std::size_t)> go = [&](std::size_t oi) {
        if (oi == order.size()) {
            if (q.boolean()) {
                answers.insert(AnswerTuple{});
                return;
            }
            std::vector<std::string> free;
            for (const std::string& z : q.output)
                if (!assign.count(z) && std::find(free.begin(), free.end(), z) == free.end())
                    free.push_back(z);
            std::function<void(std::size_t)> emit = [&](std::size_t fi) {
                if (fi == free.size()) {
                    AnswerTuple t;
                    for (const std::string& z : q.output) t.push_back(db.node_id(assign.at(z)));
                    answers.insert(std::move(t));
                    return;
                }
                for (int n = 0; n < db.num_nodes(); ++n) {
                    assign[free[fi]] = n;
                    emit(fi + 1);
                }
                assign.erase(free[fi]);
            };
            emit(0);
            return;
        }
        const FactorClass& cls = classes[order[oi]];
        std::size_t f = cls.endpoints.size();
        for (const std::vector<int>& tup : relations[order[oi]]) {
            std::vector<std::pair<std::string, bool>> added;  // (var, was new)
            bool ok = true;
            for (std::size_t j = 0; j < 2 * f && ok; ++j) {
                const std::string& var = j < f ? cls.endpoints[j].first : cls.endpoints[j - f].second;
                int node = tup[j];
                auto it = assign.find(var);
                if (it == assign.end()) {
                    assign[var] = node;
                    added.push_back({var, true});
                } else if (it->second != node) {
                    ok = false;
                }
            }
            if (ok) go(oi + 1);
            for (auto it = added.rbegin(); it != added.rend(); ++it) assign.erase(it->first);
        }
    };
    go(0);
    return answers;
}

} // namespace

AnswerSet eval_simple(const Query& q, const GraphDb& db, const EvalOptions& opts) {
    ConjunctiveXregex cx = q.cx();
    if (!classify(cx).simple) throw fragment_error("eval_simple requires a simple query");

    std::vector<AstPtr> labels = eliminate_single_reference_definitions(cx).components;

    // Split every edge into factor edges over fresh inner node variables.
    struct Factor {
        std::string src, dst;
        AstPtr ast;
    };
    std::vector<Factor> factors;
    for (std::size_t i = 0; i < q.pattern.edges.size(); ++i) {
        std::vector<AstPtr> fs = concat_factors(labels[i]);
        std::string prev = q.pattern.edges[i].src;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            std::string next = j + 1 == fs.size()
                                   ? q.pattern.edges[i].dst
                                   : "\x01z" + std::to_string(i) + "_" + std::to_string(j);
            factors.push_back({prev, next, fs[j]});
            prev = next;
        }
    }

    // Group factors into synchronization classes.
    std::map<VarId, std::size_t> class_of_var;
    std::vector<FactorClass> classes;
    AstPtr sigma_star = nullptr;
    {
        AstPtr any;
        for (char c : q.alphabet.symbols()) {
            AstPtr t = Ast::terminal(c);
            any = any ? Ast::alt(any, t) : t;
        }
        sigma_star = Ast::star(any);
    }
    for (const Factor& f : factors) {
        if (f.ast->kind == Ast::Kind::VarDef || f.ast->kind == Ast::Kind::VarRef) {
            VarId x = f.ast->var;
            auto it = class_of_var.find(x);
            if (it == class_of_var.end()) {
                class_of_var[x] = classes.size();
                classes.push_back(FactorClass{{}, sigma_star});
                it = class_of_var.find(x);
            }
            FactorClass& cls = classes[it->second];
            cls.endpoints.push_back({f.src, f.dst});
            if (f.ast->kind == Ast::Kind::VarDef) cls.language = f.ast->children[0];
        } else {
            classes.push_back(FactorClass{{{f.src, f.dst}}, f.ast});
        }
    }

    std::vector<std::set<std::vector<int>>> relations;
    for (const FactorClass& cls : classes)
        relations.push_back(class_relation(cls, db, q.alphabet, opts.product_limit));
    return join_classes(q, db, classes, relations);
}

AnswerSet eval_vsf(const Query& q, const GraphDb& db, const EvalOptions& opts) {
    ConjunctiveXregex cx = q.cx();
    if (!classify(cx).vstar_free) throw fragment_error("eval_vsf requires a vstar-free query");
    ConjunctiveXregex norm = normalize(cx, opts.normalize);
    AnswerSet answers;
    for (const ConjunctiveXregex& simple : expand_to_simple_queries(norm, opts.normalize)) {
        Query qs = q;
        for (std::size_t i = 0; i < qs.pattern.edges.size(); ++i)
            qs.pattern.edges[i].label = simple.components[i];
        AnswerSet part = eval_simple(qs, db, opts);
        answers.insert(part.begin(), part.end());
    }
    return answers;
}

// ---------------------------------------------------------------------------
// fix_mapping

namespace {

struct MNode {
    Ast::Kind kind;
    RefSymbol sym;
    VarId var;
    std::vector<std::unique_ptr<MNode>> kids;
    MNode* parent = nullptr;
    bool marked = false;  // step 1 mark

    std::unique_ptr<MNode> clone() const {
        auto n = std::make_unique<MNode>();
        n->kind = kind;
        n->sym = sym;
        n->var = var;
        for (const auto& k : kids) {
            n->kids.push_back(k->clone());
            n->kids.back()->parent = n.get();
        }
        return n;
    }
};

std::unique_ptr<MNode> to_mutable(const AstPtr& a) {
    auto n = std::make_unique<MNode>();
    n->kind = a->kind;
    n->sym = a->sym;
    n->var = a->var;
    for (const auto& c : a->children) {
        n->kids.push_back(to_mutable(c));
        n->kids.back()->parent = n.get();
    }
    return n;
}

AstPtr to_ast(const MNode* n) {
    switch (n->kind) {
        case Ast::Kind::Terminal: return Ast::symbol(n->sym);
        case Ast::Kind::Epsilon: return Ast::epsilon();
        case Ast::Kind::EmptySet: return Ast::empty_set();
        case Ast::Kind::VarRef: return Ast::ref(n->var);
        case Ast::Kind::VarDef: return Ast::def(n->var, to_ast(n->kids[0].get()));
        case Ast::Kind::Plus: return Ast::plus(to_ast(n->kids[0].get()));
        case Ast::Kind::Alt: return Ast::alt(to_ast(n->kids[0].get()), to_ast(n->kids[1].get()));
        case Ast::Kind::Concat: {
            std::vector<AstPtr> kids;
            for (const auto& k : n->kids) kids.push_back(to_ast(k.get()));
            return Ast::concat(std::move(kids));
        }
    }
    return Ast::empty_set();
}

void collect_defs(MNode* n, std::vector<MNode*>& out) {
    if (n->kind == Ast::Kind::VarDef) out.push_back(n);
    for (auto& k : n->kids) collect_defs(k.get(), out);
}

bool contains_unmarked_def(const MNode* n) {
    for (const auto& k : n->kids) {
        if (k->kind == Ast::Kind::VarDef && !k->marked) return true;
        if (contains_unmarked_def(k.get())) return true;
    }
    return false;
}

// Classical expression with every reference and (marked) definition replaced
// by its intended image.
AstPtr imaged(const MNode* n, const VariableMapping& v) {
    switch (n->kind) {
        case Ast::Kind::VarRef: return word_ast(v.get(n->var));
        case Ast::Kind::VarDef: return word_ast(v.get(n->var));
        case Ast::Kind::Terminal: return Ast::symbol(n->sym);
        case Ast::Kind::Epsilon: return Ast::epsilon();
        case Ast::Kind::EmptySet: return Ast::empty_set();
        case Ast::Kind::Plus: return Ast::plus(imaged(n->kids[0].get(), v));
        case Ast::Kind::Alt: return Ast::alt(imaged(n->kids[0].get(), v), imaged(n->kids[1].get(), v));
        case Ast::Kind::Concat: {
            std::vector<AstPtr> kids;
            for (const auto& k : n->kids) kids.push_back(imaged(k.get(), v));
            return Ast::concat(std::move(kids));
        }
    }
    return Ast::empty_set();
}

void make_empty(std::unique_ptr<MNode>& root) {
    auto n = std::make_unique<MNode>();
    n->kind = Ast::Kind::EmptySet;
    root = std::move(n);
}

// Removes the subtree at `node` together with everything up to the nearest
// alternation, which is replaced by its other branch; without an enclosing
// alternation the whole component collapses to the empty set.
void delete_upward(std::unique_ptr<MNode>& root, MNode* node) {
    while (node->parent && node->parent->kind != Ast::Kind::Alt) node = node->parent;
    MNode* alt = node->parent;
    if (!alt) {
        make_empty(root);
        return;
    }
    std::unique_ptr<MNode> sibling =
        std::move(alt->kids[alt->kids[0].get() == node ? 1 : 0]);
    MNode* host = alt->parent;
    if (!host) {
        sibling->parent = nullptr;
        root = std::move(sibling);
        return;
    }
    for (auto& k : host->kids)
        if (k.get() == alt) {
            sibling->parent = host;
            k = std::move(sibling);
            return;
        }
}

} // namespace

std::vector<AstPtr> fix_mapping(const ConjunctiveXregex& cx, const VariableMapping& v) {
    for (const auto& [x, w] : v.images)
        for (char c : w)
            if (!cx.alphabet.contains(c))
                throw validation_error(std::string("image symbol '") + c + "' is not in the alphabet");

    std::set<VarId> originally_defined;
    for (const auto& comp : cx.components) {
        std::function<void(const AstPtr&)> walk = [&](const AstPtr& a) {
            if (a->kind == Ast::Kind::VarDef) originally_defined.insert(a->var);
            for (const auto& c : a->children) walk(c);
        };
        walk(comp);
    }

    std::vector<std::unique_ptr<MNode>> roots;
    for (const auto& comp : cx.components) roots.push_back(to_mutable(comp));

    // Step 1: test each definition innermost-first; failures prune the
    // enclosing alternation branch (or the whole component).
    for (;;) {
        MNode* pick = nullptr;
        std::unique_ptr<MNode>* pick_root = nullptr;
        for (auto& root : roots) {
            std::vector<MNode*> defs;
            collect_defs(root.get(), defs);
            for (MNode* d : defs)
                if (!d->marked && !contains_unmarked_def(d)) {
                    pick = d;
                    pick_root = &root;
                    break;
                }
            if (pick) break;
        }
        if (!pick) break;
        AstPtr gamma = imaged(pick->kids[0].get(), v);
        Nfa nfa = regex_to_nfa(gamma, cx.alphabet);
        if (nfa.accepts_text(v.get(pick->var)))
            pick->marked = true;
        else
            delete_upward(*pick_root, pick);
    }

    // Step 2: nonempty images force instantiation; prune alternation branches
    // that avoid every definition of the variable.
    for (const VarId& x : cx.all_vars()) {
        if (v.get(x).empty()) continue;
        for (auto& root : roots) {
            std::vector<MNode*> defs;
            collect_defs(root.get(), defs);
            std::set<MNode*> keep;
            for (MNode* d : defs)
                if (d->var == x)
                    for (MNode* n = d; n; n = n->parent) keep.insert(n);
            if (keep.empty()) continue;
            std::function<void(MNode*)> prune = [&](MNode* n) {
                if (n->kind == Ast::Kind::Alt && keep.count(n)) {
                    bool left = keep.count(n->kids[0].get()), right = keep.count(n->kids[1].get());
                    if (left != right) {
                        std::unique_ptr<MNode> kept = std::move(n->kids[left ? 0 : 1]);
                        // Splice the kept branch into this node.
                        MNode* parent = n->parent;
                        *n = std::move(*kept);
                        n->parent = parent;
                        for (auto& k : n->kids) k->parent = n;
                        prune(n);
                        return;
                    }
                }
                for (auto& k : n->kids) prune(k.get());
            };
            prune(root.get());
        }
    }

    // Variables with nonempty images whose definitions did not survive can
    // never be matched consistently.
    for (const VarId& x : cx.all_vars()) {
        if (v.get(x).empty() || !originally_defined.count(x)) continue;
        bool surviving = false;
        for (auto& root : roots) {
            std::vector<MNode*> defs;
            collect_defs(root.get(), defs);
            for (MNode* d : defs) surviving = surviving || d->var == x;
        }
        if (!surviving) {
            for (auto& root : roots) make_empty(root);
            break;
        }
    }

    // Substitute the images for all remaining definitions and references.
    std::vector<AstPtr> out;
    for (auto& root : roots) {
        std::function<AstPtr(const MNode*)> subst = [&](const MNode* n) -> AstPtr {
            switch (n->kind) {
                case Ast::Kind::VarDef: return word_ast(v.get(n->var));
                case Ast::Kind::VarRef: return word_ast(v.get(n->var));
                case Ast::Kind::Terminal: return Ast::symbol(n->sym);
                case Ast::Kind::Epsilon: return Ast::epsilon();
                case Ast::Kind::EmptySet: return Ast::empty_set();
                case Ast::Kind::Plus: return Ast::plus(subst(n->kids[0].get()));
                case Ast::Kind::Alt: return Ast::alt(subst(n->kids[0].get()), subst(n->kids[1].get()));
                case Ast::Kind::Concat: {
                    std::vector<AstPtr> kids;
                    for (const auto& k : n->kids) kids.push_back(subst(k.get()));
                    return Ast::concat(std::move(kids));
                }
            }
            return Ast::empty_set();
        };
        out.push_back(subst(root.get()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// eval_bounded / eval_log_bounded

namespace {

std::vector<std::string> images_up_to(const Alphabet& alphabet, std::size_t k) {
    std::vector<std::string> out{""};
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= k; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (char c : alphabet.symbols()) out.push_back(out[i] + c);
        level_begin = level_end;
    }
    return out;
}

} // namespace

AnswerSet eval_bounded(const Query& q, std::size_t k, const GraphDb& db, const EvalOptions& opts) {
    ConjunctiveXregex cx = q.cx();
    std::vector<VarId> vars;
    {
        PrecedenceGraph g = precedence_graph(cx);
        vars = g.topological_order();
        for (const VarId& x : cx.all_vars())
            if (std::find(vars.begin(), vars.end(), x) == vars.end()) vars.push_back(x);
    }
    std::vector<std::string> images = images_up_to(q.alphabet, k);

    double space = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) space *= static_cast<double>(images.size());
    if (space > static_cast<double>(opts.mapping_space_limit))
        throw limit_error("eval_bounded: mapping space exceeds the limit");

    // A variable whose unique definition sits outside every alternation
    // forces its image: a failed membership test empties the component, so
    // the whole mapping branch can be pruned.
    std::map<VarId, AstPtr> unique_def;
    std::set<VarId> prunable;
    {
        std::map<VarId, std::size_t> def_count;
        std::set<VarId> under_alt;
        for (const auto& comp : cx.components) {
            std::function<void(const AstPtr&, bool)> walk = [&](const AstPtr& a, bool alt_above) {
                if (a->kind == Ast::Kind::VarDef) {
                    ++def_count[a->var];
                    unique_def[a->var] = a->children[0];
                    if (alt_above) under_alt.insert(a->var);
                }
                bool next = alt_above || a->kind == Ast::Kind::Alt;
                for (const auto& c : a->children) walk(c, next);
            };
            walk(comp, false);
        }
        for (const auto& [x, c] : def_count)
            if (c == 1 && !under_alt.count(x)) prunable.insert(x);
    }

    AnswerSet answers;
    std::set<std::string> seen_fixed;
    VariableMapping v;
    std::set<VarId> passed;
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (i == vars.size()) {
            std::vector<AstPtr> fixed = fix_mapping(cx, v);
            for (const AstPtr& comp : fixed)
                if (comp->kind == Ast::Kind::EmptySet) return;
            std::string key;
            for (const AstPtr& comp : fixed) key += render_xregex(comp) + "\n";
            if (!seen_fixed.insert(key).second) return;
            Query fq = q;
            for (std::size_t e = 0; e < fq.pattern.edges.size(); ++e)
                fq.pattern.edges[e].label = fixed[e];
            AnswerSet part = crpq_eval(fq, db);
            answers.insert(part.begin(), part.end());
            return;
        }
        const VarId& x = vars[i];
        bool can_prune = prunable.count(x) > 0;
        if (can_prune) {
            for (const VarId& y : vars_of(unique_def[x]))
                if (!passed.count(y) && unique_def.count(y)) can_prune = false;
        }
        for (const std::string& img : images) {
            v.set(x, img);
            bool ok = true;
            if (can_prune) {
                AstPtr gamma = imaged_classical(unique_def[x], v);
                ok = regex_to_nfa(gamma, q.alphabet).accepts_text(img);
            }
            if (ok) {
                if (can_prune) passed.insert(x);
                dfs(i + 1);
                passed.erase(x);
            }
        }
        v.set(x, "");
    };
    dfs(0);
    return answers;
}

AnswerSet eval_log_bounded(const Query& q, const GraphDb& db, const EvalOptions& opts) {
    std::size_t size = std::max<std::size_t>(db.size_measure(), 1);
    std::size_t k = 0;
    while ((static_cast<std::size_t>(1) << (k + 1)) <= size) ++k;
    return eval_bounded(q, k, db, opts);
}

// ---------------------------------------------------------------------------
// eval_oracle

AnswerSet eval_oracle(const Query& q, const GraphDb& db, std::size_t ref_len_bound,
                      std::size_t path_len_bound, std::size_t image_bound) {
    ConjunctiveXregex cx = q.cx();
    std::set<VarId> all = cx.all_vars();

    // Every word labelling some path, with its endpoint relation.
    std::map<std::string, std::set<std::pair<int, int>>> words;
    for (int u = 0; u < db.num_nodes(); ++u) {
        std::function<void(int, std::string&)> walk = [&](int node, std::string& label) {
            words[label].insert({u, node});
            if (label.size() == path_len_bound) return;
            for (char c : db.alphabet().symbols())
                for (int nxt : db.out(node, c)) {
                    label.push_back(c);
                    walk(nxt, label);
                    label.pop_back();
                }
        };
        std::string label;
        walk(u, label);
    }

    struct Option {
        std::map<VarId, std::string> partial;
        std::set<std::string> words;
    };
    std::vector<std::vector<Option>> options(cx.dimension());
    for (std::size_t i = 0; i < cx.dimension(); ++i) {
        ComponentAnalysis an = analyze_component(cx.components[i], all, ref_len_bound, path_len_bound);
        std::map<std::map<VarId, std::string>, Option> merged;
        for (const SuffixCandidate& c : an.candidates) {
            for (auto& [w, rel] : words) {
                (void)rel;
                for (auto& partial : match_candidate(c, w)) {
                    Option& o = merged[partial];
                    o.partial = partial;
                    o.words.insert(w);
                }
            }
        }
        for (auto& [_, o] : merged) options[i].push_back(std::move(o));
        if (options[i].empty()) return {};
    }

    std::vector<std::size_t> order(cx.dimension());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return options[a].size() < options[b].size(); });

    AnswerSet answers;
    std::map<VarId, std::string> acc;
    std::vector<const Option*> chosen(cx.dimension(), nullptr);
    std::function<void(std::size_t)> dfs = [&](std::size_t oi) {
        if (oi == order.size()) {
            std::vector<std::set<std::pair<int, int>>> relations(cx.dimension());
            for (std::size_t i = 0; i < cx.dimension(); ++i) {
                for (const std::string& w : chosen[i]->words) {
                    const auto& rel = words.at(w);
                    relations[i].insert(rel.begin(), rel.end());
                }
                if (relations[i].empty()) return;
            }
            AnswerSet part = join_relations(q, db, relations);
            answers.insert(part.begin(), part.end());
            return;
        }
        std::size_t i = order[oi];
        for (const Option& o : options[i]) {
            std::map<VarId, std::string> saved = acc;
            bool ok = true;
            for (const auto& [x, w] : o.partial) {
                if (w.size() > image_bound) { ok = false; break; }
                auto it = acc.find(x);
                if (it == acc.end())
                    acc.emplace(x, w);
                else if (it->second != w) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                chosen[i] = &o;
                dfs(oi + 1);
            }
            acc = std::move(saved);
        }
    };
    dfs(0);
    return answers;
}

// ---------------------------------------------------------------------------

AnswerSet evaluate(const Query& q, const GraphDb& db, const EvalOptions& opts) {
    switch (q.mode) {
        case SemanticsMode::Simple: return eval_simple(q, db, opts);
        case SemanticsMode::Vsf: return eval_vsf(q, db, opts);
        case SemanticsMode::Bounded: return eval_bounded(q, q.bound_k, db, opts);
        case SemanticsMode::LogBounded: return eval_log_bounded(q, db, opts);
        case SemanticsMode::Oracle: return eval_oracle(q, db, q.oracle_ref, q.oracle_path);
        case SemanticsMode::Unrestricted: {
            FragmentClassification fc = classify(q.cx());
            if (fc.simple) return eval_simple(q, db, opts);
            if (fc.vstar_free) return eval_vsf(q, db, opts);
            throw fragment_error(
                "query is not vstar-free; evaluate it with bounded, log, or oracle semantics");
        }
    }
    throw error("unknown semantics mode");
}

bool check_answer(const Query& q, const GraphDb& db, const AnswerTuple& tuple,
                  const EvalOptions& opts) {
    if (tuple.size() != q.output.size()) throw validation_error("answer arity mismatch");
    AnswerSet all = evaluate(q, db, opts);
    return all.count(tuple) > 0;
}

} // namespace cxrpq
