#include "cxrpq/graphdb.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "cxrpq/nfa.hpp"

namespace cxrpq {

int GraphDb::add_node(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(ids_.size());
    ids_.push_back(id);
    index_.emplace(id, idx);
    adj_dirty_ = true;
    return idx;
}

std::optional<int> GraphDb::node_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void GraphDb::add_arc(const std::string& src, char sym, const std::string& dst) {
    int s = add_node(src), d = add_node(dst);
    arcs_.push_back({s, sym, d});
    adj_dirty_ = true;
}

void GraphDb::rebuild_adj() const {
    adj_.clear();
    for (const Arc& a : arcs_) adj_[{a.src, a.sym}].push_back(a.dst);
    adj_dirty_ = false;
}

const std::vector<int>& GraphDb::out(int node, char sym) const {
    if (adj_dirty_) rebuild_adj();
    static const std::vector<int> kEmpty;
    auto it = adj_.find({node, sym});
    return it == adj_.end() ? kEmpty : it->second;
}

GraphDb load_graphdb(const std::string& text) {
    GraphDb db;
    std::optional<Alphabet> declared;
    std::set<char> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t comment = line.find('%');
        if (comment != std::string::npos) line.resize(comment);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "alphabet") {
            std::string syms;
            if (!(ls >> syms)) throw parse_error("alphabet line without symbols", lineno);
            declared = Alphabet(syms);
            continue;
        }
        if (first == "node") {
            std::string id;
            if (!(ls >> id)) throw parse_error("node line without id", lineno);
            db.add_node(id);
            continue;
        }
        std::string sym, dst, extra;
        if (!(ls >> sym >> dst) || (ls >> extra))
            throw parse_error("expected '<src> <symbol> <dst>'", lineno);
        if (sym.size() != 1) throw parse_error("arc symbols are single characters", lineno);
        if (!Alphabet::valid_symbol(sym[0]))
            throw parse_error("invalid arc symbol '" + sym + "'", lineno);
        if (declared && !declared->contains(sym[0]))
            throw parse_error("arc symbol '" + sym + "' is not in the declared alphabet", lineno);
        db.add_arc(first, sym[0], dst);
        seen.insert(sym[0]);
    }
    if (declared) {
        db.set_alphabet(*declared);
    } else {
        std::string syms(seen.begin(), seen.end());
        db.set_alphabet(Alphabet(syms.empty() ? "a" : syms));
    }
    return db;
}

std::string save_graphdb(const GraphDb& db) {
    std::string out = "alphabet " + db.alphabet().str() + "\n";
    for (int i = 0; i < db.num_nodes(); ++i) out += "node " + db.node_id(i) + "\n";
    std::vector<std::string> lines;
    for (const GraphDb::Arc& a : db.arcs())
        lines.push_back(db.node_id(a.src) + " " + std::string(1, a.sym) + " " + db.node_id(a.dst));
    std::sort(lines.begin(), lines.end());
    for (const std::string& l : lines) out += l + "\n";
    return out;
}

// ---------------------------------------------------------------------------

ConjunctiveXregex Query::cx() const {
    return validate_conjunctive(labels(), alphabet);
}

std::vector<AstPtr> Query::labels() const {
    std::vector<AstPtr> out;
    out.reserve(pattern.edges.size());
    for (const PatternEdge& e : pattern.edges) out.push_back(e.label);
    return out;
}

std::vector<std::pair<std::string, std::string>> enumerate_paths(const GraphDb& db,
                                                                 const std::string& source,
                                                                 std::size_t max_len) {
    auto src = db.node_index(source);
    if (!src) throw validation_error("unknown node '" + source + "'");
    std::set<std::pair<std::string, std::string>> out;
    std::function<void(int, std::string&)> walk = [&](int node, std::string& label) {
        out.insert({db.node_id(node), label});
        if (label.size() == max_len) return;
        for (char c : db.alphabet().symbols()) {
            for (int nxt : db.out(node, c)) {
                label.push_back(c);
                walk(nxt, label);
                label.pop_back();
            }
        }
    };
    std::string label;
    walk(*src, label);
    return {out.begin(), out.end()};
}

std::set<std::pair<int, int>> edge_relation(const GraphDb& db, const AstPtr& classical_label) {
    Nfa nfa = regex_to_nfa(classical_label, db.alphabet());
    std::set<std::pair<int, int>> rel;
    int nq = nfa.num_states();
    for (int u = 0; u < db.num_nodes(); ++u) {
        // BFS over (node, state) from (u, closure(start)).
        std::vector<bool> seen(static_cast<std::size_t>(db.num_nodes()) * nq, false);
        std::queue<std::pair<int, int>> q;
        auto push = [&](int node, int state) {
            std::size_t key = static_cast<std::size_t>(node) * nq + state;
            if (!seen[key]) {
                seen[key] = true;
                q.push({node, state});
            }
        };
        for (int s : nfa.epsilon_closure({nfa.start})) push(u, s);
        while (!q.empty()) {
            auto [node, state] = q.front();
            q.pop();
            if (nfa.is_final(state)) rel.insert({u, node});
            for (const auto& t : nfa.out(state)) {
                if (t.sym == Nfa::kEpsilon) {
                    push(node, t.dst);
                    continue;
                }
                const RefSymbol& sym = nfa.symbols()[t.sym];
                if (sym.kind != RefSymbol::Kind::Terminal) continue;
                for (int nxt : db.out(node, sym.ch)) push(nxt, t.dst);
            }
        }
    }
    return rel;
}

std::set<std::pair<int, int>> word_relation(const GraphDb& db, const std::string& word) {
    std::set<std::pair<int, int>> rel;
    for (int u = 0; u < db.num_nodes(); ++u) {
        std::set<int> cur{u};
        for (char c : word) {
            std::set<int> nxt;
            for (int n : cur)
                for (int m : db.out(n, c)) nxt.insert(m);
            cur = std::move(nxt);
            if (cur.empty()) break;
        }
        for (int v : cur) rel.insert({u, v});
    }
    return rel;
}

AnswerSet join_relations(const Query& q, const GraphDb& db,
                         const std::vector<std::set<std::pair<int, int>>>& relations) {
    for (const std::string& z : q.output) {
        bool known = false;
        for (const std::string& v : q.pattern.node_vars) known = known || v == z;
        if (!known) throw validation_error("output variable '" + z + "' is not a pattern variable");
    }
    std::vector<std::size_t> order(relations.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return relations[a].size() < relations[b].size(); });

    AnswerSet answers;
    std::map<std::string, int> assign;
    std::function<void(std::size_t)> go = [&](std::size_t oi) {
        if (oi == order.size()) {
            // Variables constrained by no edge range over every node.
            std::vector<std::string> free;
            for (const std::string& z : q.output)
                if (!assign.count(z) &&
                    std::find(free.begin(), free.end(), z) == free.end())
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
            if (q.boolean())
                answers.insert(AnswerTuple{});
            else
                emit(0);
            return;
        }
        const PatternEdge& e = q.pattern.edges[order[oi]];
        for (const auto& [u, v] : relations[order[oi]]) {
            if (e.src == e.dst && u != v) continue;
            auto su = assign.find(e.src);
            if (su != assign.end() && su->second != u) continue;
            auto sv = assign.find(e.dst);
            if (sv != assign.end() && sv->second != v) continue;
            bool had_u = su != assign.end(), had_v = sv != assign.end();
            assign[e.src] = u;
            assign[e.dst] = v;
            go(oi + 1);
            if (!had_u) assign.erase(e.src);
            if (!had_v && e.src != e.dst) assign.erase(e.dst);
        }
    };
    go(0);
    return answers;
}

AnswerSet crpq_eval(const Query& q, const GraphDb& db) {
    std::vector<std::set<std::pair<int, int>>> relations;
    for (const PatternEdge& e : q.pattern.edges) {
        if (!is_classical(e.label))
            throw fragment_error("crpq_eval requires classical regular expression labels");
        relations.push_back(edge_relation(db, e.label));
    }
    return join_relations(q, db, relations);
}

} // namespace cxrpq
