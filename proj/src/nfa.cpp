#include "cxrpq/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>

namespace cxrpq {

int Nfa::add_state() {
    out_.emplace_back();
    final_states.push_back(false);
    return num_states() - 1;
}

void Nfa::add_transition(int src, int sym, int dst) { out_[src].push_back({sym, dst}); }

int Nfa::intern_symbol(const RefSymbol& s) {
    auto it = symids_.find(s);
    if (it != symids_.end()) return it->second;
    int id = static_cast<int>(symtab_.size());
    symtab_.push_back(s);
    symids_.emplace(s, id);
    return id;
}

void Nfa::set_final(int s, bool v) { final_states[s] = v; }

std::vector<int> Nfa::finals() const {
    std::vector<int> out;
    for (int s = 0; s < num_states(); ++s)
        if (final_states[s]) out.push_back(s);
    return out;
}

std::vector<int> Nfa::epsilon_closure(const std::vector<int>& states) const {
    std::vector<bool> seen(num_states(), false);
    std::vector<int> stack = states, out;
    for (int s : states) seen[s] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        out.push_back(s);
        for (const auto& t : out_[s])
            if (t.sym == kEpsilon && !seen[t.dst]) {
                seen[t.dst] = true;
                stack.push_back(t.dst);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Nfa::step(const std::vector<int>& states, int sym) const {
    std::vector<int> next;
    for (int s : states)
        for (const auto& t : out_[s])
            if (t.sym == sym) next.push_back(t.dst);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return epsilon_closure(next);
}

bool Nfa::accepts(const std::vector<RefSymbol>& word) const {
    std::vector<int> cur = epsilon_closure({start});
    for (const RefSymbol& s : word) {
        auto it = symids_.find(s);
        if (it == symids_.end()) return false;
        cur = step(cur, it->second);
        if (cur.empty()) return false;
    }
    for (int s : cur)
        if (final_states[s]) return true;
    return false;
}

bool Nfa::accepts_text(const std::string& word) const {
    std::vector<RefSymbol> w;
    w.reserve(word.size());
    for (char c : word) w.push_back(RefSymbol::terminal(c));
    return accepts(w);
}

std::vector<int> Nfa::distance_to_final() const {
    // 0-1 BFS on the reversed automaton: epsilon arcs cost 0, symbols cost 1.
    std::vector<std::vector<std::pair<int, int>>> rev(num_states());  // (src, cost)
    for (int s = 0; s < num_states(); ++s)
        for (const auto& t : out_[s]) rev[t.dst].push_back({s, t.sym == kEpsilon ? 0 : 1});
    std::vector<int> dist(num_states(), -1);
    std::deque<int> dq;
    for (int s = 0; s < num_states(); ++s)
        if (final_states[s]) {
            dist[s] = 0;
            dq.push_back(s);
        }
    while (!dq.empty()) {
        int s = dq.front();
        dq.pop_front();
        for (auto [p, c] : rev[s]) {
            int nd = dist[s] + c;
            if (dist[p] == -1 || nd < dist[p]) {
                dist[p] = nd;
                if (c == 0)
                    dq.push_front(p);
                else
                    dq.push_back(p);
            }
        }
    }
    return dist;
}

bool Nfa::language_empty() const { return distance_to_final()[start] < 0; }

// ---------------------------------------------------------------------------
// Construction from syntax trees

namespace {

struct Frag {
    int in;
    int out;
};

Frag build(const AstPtr& a, Nfa& n) {
    switch (a->kind) {
        case Ast::Kind::Terminal: {
            int i = n.add_state(), o = n.add_state();
            n.add_transition(i, n.intern_symbol(a->sym), o);
            return {i, o};
        }
        case Ast::Kind::Epsilon: {
            int i = n.add_state(), o = n.add_state();
            n.add_epsilon(i, o);
            return {i, o};
        }
        case Ast::Kind::EmptySet: {
            int i = n.add_state(), o = n.add_state();
            return {i, o};
        }
        case Ast::Kind::Concat: {
            Frag f = build(a->children[0], n);
            for (std::size_t i = 1; i < a->children.size(); ++i) {
                Frag g = build(a->children[i], n);
                n.add_epsilon(f.out, g.in);
                f.out = g.out;
            }
            return f;
        }
        case Ast::Kind::Alt: {
            int i = n.add_state(), o = n.add_state();
            Frag l = build(a->children[0], n);
            Frag r = build(a->children[1], n);
            n.add_epsilon(i, l.in);
            n.add_epsilon(i, r.in);
            n.add_epsilon(l.out, o);
            n.add_epsilon(r.out, o);
            return {i, o};
        }
        case Ast::Kind::Plus: {
            Frag f = build(a->children[0], n);
            int i = n.add_state(), o = n.add_state();
            n.add_epsilon(i, f.in);
            n.add_epsilon(f.out, o);
            n.add_epsilon(f.out, f.in);
            return {i, o};
        }
        default:
            throw fragment_error("regex_to_nfa requires a classical regular expression");
    }
}

} // namespace

Nfa regex_to_nfa(const AstPtr& a, const Alphabet& alphabet) {
    if (!is_classical(a)) throw fragment_error("regex_to_nfa: expression contains variables");
    Nfa n;
    for (char c : alphabet.symbols()) n.intern_symbol(RefSymbol::terminal(c));
    Frag f = build(a, n);
    n.start = f.in;
    n.set_final(f.out);
    return n;
}

Nfa ref_regex_nfa(const AstPtr& a) {
    AstPtr r = to_ref_regex(a);
    Nfa n;
    Frag f = build(r, n);
    n.start = f.in;
    n.set_final(f.out);
    return n;
}

Nfa sigma_star_nfa(const Alphabet& alphabet) {
    Nfa n;
    int s = n.add_state();
    n.start = s;
    n.set_final(s);
    for (char c : alphabet.symbols()) n.add_transition(s, n.intern_symbol(RefSymbol::terminal(c)), s);
    return n;
}

// ---------------------------------------------------------------------------
// Intersection emptiness

namespace {

// Epsilon-free view: closed symbol step and closed finals.
struct ClosedNfa {
    const Nfa* n;
    std::vector<bool> accepting;  // reaches a final via epsilon arcs
    std::map<RefSymbol, std::vector<std::vector<int>>> move;  // symbol -> per-state closed step

    explicit ClosedNfa(const Nfa* nfa) : n(nfa) {
        int ns = n->num_states();
        accepting.assign(ns, false);
        for (int s = 0; s < ns; ++s)
            for (int t : n->epsilon_closure({s}))
                if (n->is_final(t)) accepting[s] = true;
        for (std::size_t id = 0; id < n->symbols().size(); ++id) {
            auto& per = move[n->symbols()[id]];
            per.assign(ns, {});
            for (int s = 0; s < ns; ++s) {
                std::set<int> nxt;
                for (int c : n->epsilon_closure({s}))
                    for (const auto& t : n->out(c))
                        if (t.sym == static_cast<int>(id)) nxt.insert(t.dst);
                per[s].assign(nxt.begin(), nxt.end());
            }
        }
    }
};

} // namespace

std::optional<std::vector<RefSymbol>> nfa_intersection_nonempty(const std::vector<const Nfa*>& automata) {
    if (automata.empty()) throw validation_error("intersection of zero automata");
    std::vector<ClosedNfa> closed;
    closed.reserve(automata.size());
    for (const Nfa* n : automata) closed.emplace_back(n);

    std::set<RefSymbol> common;
    for (const RefSymbol& s : automata[0]->symbols()) common.insert(s);
    for (std::size_t i = 1; i < automata.size(); ++i) {
        std::set<RefSymbol> next;
        for (const RefSymbol& s : automata[i]->symbols())
            if (common.count(s)) next.insert(s);
        common = std::move(next);
    }
    std::vector<RefSymbol> syms(common.begin(), common.end());

    std::vector<int> init;
    for (const Nfa* n : automata) init.push_back(n->start);
    std::map<std::vector<int>, std::pair<std::vector<int>, RefSymbol>> parent;
    std::queue<std::vector<int>> q;
    q.push(init);
    parent.emplace(init, std::make_pair(std::vector<int>{}, RefSymbol{}));
    auto all_accepting = [&](const std::vector<int>& tup) {
        for (std::size_t i = 0; i < tup.size(); ++i)
            if (!closed[i].accepting[tup[i]]) return false;
        return true;
    };
    while (!q.empty()) {
        std::vector<int> cur = q.front();
        q.pop();
        if (all_accepting(cur)) {
            std::vector<RefSymbol> word;
            std::vector<int> at = cur;
            while (at != init) {
                auto& [prev, sym] = parent.at(at);
                word.push_back(sym);
                at = prev;
            }
            std::reverse(word.begin(), word.end());
            return word;
        }
        for (const RefSymbol& s : syms) {
            // Cartesian expansion of per-component successor sets.
            std::vector<const std::vector<int>*> succ;
            bool dead = false;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const auto& v = closed[i].move.at(s)[cur[i]];
                if (v.empty()) { dead = true; break; }
                succ.push_back(&v);
            }
            if (dead) continue;
            std::vector<std::size_t> idx(cur.size(), 0);
            for (;;) {
                std::vector<int> nxt(cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) nxt[i] = (*succ[i])[idx[i]];
                if (!parent.count(nxt)) {
                    parent.emplace(nxt, std::make_pair(cur, s));
                    q.push(nxt);
                }
                std::size_t i = 0;
                while (i < idx.size() && ++idx[i] == succ[i]->size()) idx[i++] = 0;
                if (i == idx.size()) break;
            }
        }
    }
    return std::nullopt;
}

Nfa nfa_product(const std::vector<const Nfa*>& automata) {
    if (automata.empty()) throw validation_error("product of zero automata");
    std::vector<ClosedNfa> closed;
    closed.reserve(automata.size());
    for (const Nfa* n : automata) closed.emplace_back(n);

    std::set<RefSymbol> common;
    for (const RefSymbol& s : automata[0]->symbols()) common.insert(s);
    for (std::size_t i = 1; i < automata.size(); ++i) {
        std::set<RefSymbol> next;
        for (const RefSymbol& s : automata[i]->symbols())
            if (common.count(s)) next.insert(s);
        common = std::move(next);
    }

    Nfa out;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> todo;
    auto state_of = [&](const std::vector<int>& tup) {
        auto it = ids.find(tup);
        if (it != ids.end()) return it->second;
        int s = out.add_state();
        ids.emplace(tup, s);
        todo.push_back(tup);
        bool fin = true;
        for (std::size_t i = 0; i < tup.size(); ++i) fin = fin && closed[i].accepting[tup[i]];
        out.set_final(s, fin);
        return s;
    };
    std::vector<int> init;
    for (const Nfa* n : automata) init.push_back(n->start);
    out.start = state_of(init);
    while (!todo.empty()) {
        std::vector<int> cur = todo.back();
        todo.pop_back();
        int src = ids.at(cur);
        for (const RefSymbol& s : common) {
            std::vector<const std::vector<int>*> succ;
            bool dead = false;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const auto& v = closed[i].move.at(s)[cur[i]];
                if (v.empty()) { dead = true; break; }
                succ.push_back(&v);
            }
            if (dead) continue;
            int sym = out.intern_symbol(s);
            std::vector<std::size_t> idx(cur.size(), 0);
            for (;;) {
                std::vector<int> nxt(cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) nxt[i] = (*succ[i])[idx[i]];
                out.add_transition(src, sym, state_of(nxt));
                std::size_t i = 0;
                while (i < idx.size() && ++idx[i] == succ[i]->size()) idx[i++] = 0;
                if (i == idx.size()) break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// State elimination

namespace {

AstPtr simplify_alt(const AstPtr& a, const AstPtr& b) {
    if (a->kind == Ast::Kind::EmptySet) return b;
    if (b->kind == Ast::Kind::EmptySet) return a;
    if (structurally_equal(a, b)) return a;
    return Ast::alt(a, b);
}

AstPtr simplify_cat(const AstPtr& a, const AstPtr& b) {
    if (a->kind == Ast::Kind::EmptySet || b->kind == Ast::Kind::EmptySet) return Ast::empty_set();
    if (a->kind == Ast::Kind::Epsilon) return b;
    if (b->kind == Ast::Kind::Epsilon) return a;
    return Ast::concat({a, b});
}

AstPtr simplify_star(const AstPtr& a) {
    if (a->kind == Ast::Kind::EmptySet || a->kind == Ast::Kind::Epsilon) return Ast::epsilon();
    return Ast::star(a);
}

} // namespace

AstPtr nfa_to_regex(const Nfa& n) {
    int ns = n.num_states();
    int init = ns, final = ns + 1;
    std::map<std::pair<int, int>, AstPtr> edge;
    auto get = [&](int p, int q) -> AstPtr {
        auto it = edge.find({p, q});
        return it == edge.end() ? Ast::empty_set() : it->second;
    };
    auto put = [&](int p, int q, const AstPtr& r) {
        if (r->kind == Ast::Kind::EmptySet) return;
        auto it = edge.find({p, q});
        if (it == edge.end())
            edge[{p, q}] = r;
        else
            it->second = simplify_alt(it->second, r);
    };
    // Only states on some start-to-final route matter.
    std::vector<int> dist = n.distance_to_final();
    std::vector<bool> reachable(ns, false);
    {
        std::vector<int> stack{n.start};
        reachable[n.start] = true;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (const auto& t : n.out(s))
                if (!reachable[t.dst]) {
                    reachable[t.dst] = true;
                    stack.push_back(t.dst);
                }
        }
    }
    std::vector<int> alive;
    for (int s = 0; s < ns; ++s)
        if (reachable[s] && dist[s] >= 0) alive.push_back(s);
    if (alive.empty()) return Ast::empty_set();

    for (int s : alive)
        for (const auto& t : n.out(s)) {
            if (!reachable[t.dst] || dist[t.dst] < 0) continue;
            put(s, t.dst, t.sym == Nfa::kEpsilon ? Ast::epsilon() : Ast::symbol(n.symbols()[t.sym]));
        }
    put(init, n.start, Ast::epsilon());
    for (int s : alive)
        if (n.is_final(s)) put(s, final, Ast::epsilon());

    std::set<int> remaining(alive.begin(), alive.end());
    while (!remaining.empty()) {
        // Greedy order: cheapest fan-in times fan-out first.
        int kill = -1;
        long best = -1;
        for (int s : remaining) {
            long ins = 0, outs = 0;
            for (const auto& [pq, r] : edge) {
                if (pq.second == s && pq.first != s) ++ins;
                if (pq.first == s && pq.second != s) ++outs;
            }
            long cost = ins * outs;
            if (kill < 0 || cost < best) {
                kill = s;
                best = cost;
            }
        }
        remaining.erase(kill);
        AstPtr self = get(kill, kill);
        AstPtr loop = self->kind == Ast::Kind::EmptySet ? Ast::epsilon() : simplify_star(self);
        std::vector<std::pair<int, AstPtr>> in, out;
        for (const auto& [pq, r] : edge) {
            if (pq.second == kill && pq.first != kill) in.push_back({pq.first, r});
            if (pq.first == kill && pq.second != kill) out.push_back({pq.second, r});
        }
        for (auto& [p, rin] : in)
            for (auto& [q, rout] : out) put(p, q, simplify_cat(simplify_cat(rin, loop), rout));
        for (auto it = edge.begin(); it != edge.end();) {
            if (it->first.first == kill || it->first.second == kill)
                it = edge.erase(it);
            else
                ++it;
        }
    }
    return get(init, final);
}

// ---------------------------------------------------------------------------
// Bounded word enumeration

std::vector<std::vector<RefSymbol>> enumerate_nfa_words(const Nfa& n, std::size_t max_len,
                                                        std::size_t max_count,
                                                        std::size_t max_terminals) {
    std::vector<int> dist = n.distance_to_final();
    std::vector<int> order(n.symbols().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return n.symbols()[a] < n.symbols()[b]; });

    std::vector<std::vector<RefSymbol>> out;
    std::vector<RefSymbol> word;
    std::size_t terminals = 0;
    std::function<void(const std::vector<int>&)> dfs = [&](const std::vector<int>& states) {
        for (int s : states)
            if (n.is_final(s)) {
                out.push_back(word);
                if (out.size() > max_count) throw limit_error("word enumeration exceeded limit");
                break;
            }
        if (word.size() == max_len) return;
        std::size_t remaining = max_len - word.size();
        for (int sym : order) {
            bool is_terminal = n.symbols()[sym].kind == RefSymbol::Kind::Terminal;
            if (is_terminal && terminals == max_terminals) continue;
            std::vector<int> nxt = n.step(states, sym);
            if (nxt.empty()) continue;
            bool reachable = false;
            for (int s : nxt)
                if (dist[s] >= 0 && static_cast<std::size_t>(dist[s]) <= remaining - 1) {
                    reachable = true;
                    break;
                }
            if (!reachable) continue;
            word.push_back(n.symbols()[sym]);
            terminals += is_terminal;
            dfs(nxt);
            terminals -= is_terminal;
            word.pop_back();
        }
    };
    dfs(n.epsilon_closure({n.start}));
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

} // namespace cxrpq
