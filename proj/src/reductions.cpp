#include "cxrpq/reductions.hpp"

#include <algorithm>
#include <functional>

namespace cxrpq {

namespace {

// Adds a path labelled `word` between two nodes, with fresh inner nodes.
void add_word_arc(GraphDb& db, const std::string& src, const std::string& word,
                  const std::string& dst, std::size_t& fresh) {
    std::string prev = src;
    for (std::size_t i = 0; i < word.size(); ++i) {
        std::string next = i + 1 == word.size() ? dst : "m" + std::to_string(fresh++);
        db.add_arc(prev, word[i], next);
        prev = next;
    }
}

Query single_edge_query(AstPtr label, const Alphabet& alphabet) {
    Query q;
    q.pattern.node_vars = {"x", "y"};
    q.pattern.edges.push_back({"x", "y", std::move(label)});
    q.alphabet = alphabet;
    return q;
}

} // namespace

ReductionInstance gen_nfa_intersection_instance(const std::vector<Nfa>& automata,
                                                NfaIntersectionVariant variant) {
    if (automata.empty()) throw validation_error("at least one automaton is required");
    for (const Nfa& m : automata) {
        if (m.finals().size() != 1)
            throw validation_error("each automaton needs exactly one final state");
        for (int s = 0; s < m.num_states(); ++s)
            for (const auto& t : m.out(s)) {
                if (t.sym == Nfa::kEpsilon)
                    throw validation_error("epsilon transitions are not allowed here");
                const RefSymbol& sym = m.symbols()[t.sym];
                if (sym.kind != RefSymbol::Kind::Terminal || (sym.ch != 'a' && sym.ch != 'b'))
                    throw validation_error("automata must be over the alphabet {a, b}");
            }
    }

    Alphabet sigma("ab#");
    GraphDb db(sigma);
    std::size_t fresh = 0;
    auto node = [&](std::size_t i, int s) { return "q" + std::to_string(i) + "_" + std::to_string(s); };
    for (std::size_t i = 0; i < automata.size(); ++i) {
        const Nfa& m = automata[i];
        for (int s = 0; s < m.num_states(); ++s) db.add_node(node(i, s));
        for (int s = 0; s < m.num_states(); ++s)
            for (const auto& t : m.out(s)) db.add_arc(node(i, s), m.symbols()[t.sym].ch, node(i, t.dst));
    }
    db.add_node("s");
    db.add_node("t");
    db.add_arc("s", '#', node(0, automata[0].start));
    for (std::size_t i = 0; i + 1 < automata.size(); ++i)
        add_word_arc(db, node(i, automata[i].finals()[0]), "##", node(i + 1, automata[i + 1].start), fresh);
    add_word_arc(db, node(automata.size() - 1, automata.back().finals()[0]), "###", "t", fresh);

    std::string text = "#$z{(a|b)*}";
    if (variant == NfaIntersectionVariant::Starred) {
        text += "(##$z)*";
    } else {
        for (std::size_t i = 1; i < automata.size(); ++i) text += "##$z";
    }
    text += "###";
    return {std::move(db), single_edge_query(parse_xregex(text, sigma), sigma)};
}

ReductionInstance gen_hitting_set_instance(std::size_t universe_size,
                                           const std::vector<std::set<std::size_t>>& sets,
                                           std::size_t budget) {
    if (universe_size == 0) throw validation_error("the universe must be nonempty");
    if (sets.empty()) throw validation_error("at least one set is required");
    for (const auto& a : sets) {
        if (a.empty()) throw validation_error("sets must be nonempty");
        for (std::size_t z : a)
            if (z < 1 || z > universe_size) throw validation_error("set element outside the universe");
    }

    auto encode = [&](std::size_t z) { return "b" + std::string(z, 'a') + "b"; };

    Alphabet sigma("ab#");
    GraphDb db(sigma);
    std::size_t fresh = 0;
    db.add_arc("s", '#', "u0");
    for (std::size_t i = 1; i <= budget; ++i)
        for (std::size_t z = 1; z <= universe_size; ++z)
            add_word_arc(db, "u" + std::to_string(i - 1), encode(z), "u" + std::to_string(i), fresh);
    db.add_node("u" + std::to_string(budget));
    db.add_arc("u" + std::to_string(budget), '#', "v0");
    for (std::size_t i = 1; i <= sets.size(); ++i)
        for (std::size_t z : sets[i - 1])
            add_word_arc(db, "v" + std::to_string(i - 1), encode(z), "v" + std::to_string(i), fresh);
    for (std::size_t i = 0; i <= sets.size(); ++i)
        for (std::size_t z = 1; z <= universe_size; ++z) {
            std::string v = "v" + std::to_string(i);
            add_word_arc(db, v, encode(z), v, fresh);
        }
    db.add_arc("v" + std::to_string(sets.size()), '#', "t");

    std::size_t n_vars = (universe_size + 2) * budget;
    AstPtr abe = Ast::alt(Ast::terminal('a'), Ast::alt(Ast::terminal('b'), Ast::epsilon()));
    std::vector<AstPtr> parts{Ast::terminal('#')};
    for (std::size_t i = 1; i <= n_vars; ++i) parts.push_back(Ast::def("x" + std::to_string(i), abe));
    parts.push_back(Ast::terminal('#'));
    for (std::size_t rep = 0; rep < sets.size(); ++rep)
        for (std::size_t i = 1; i <= n_vars; ++i) parts.push_back(Ast::ref("x" + std::to_string(i)));
    parts.push_back(Ast::terminal('#'));
    return {std::move(db), single_edge_query(Ast::concat(std::move(parts)), sigma)};
}

std::optional<std::set<std::size_t>> brute_hitting_set(const std::vector<std::set<std::size_t>>& sets,
                                                       std::size_t budget) {
    std::set<std::size_t> universe;
    for (const auto& a : sets) universe.insert(a.begin(), a.end());
    std::vector<std::size_t> elems(universe.begin(), universe.end());

    std::optional<std::set<std::size_t>> found;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, std::size_t)> pick = [&](std::size_t start, std::size_t want) {
        if (found) return;
        if (chosen.size() == want) {
            for (const auto& a : sets) {
                bool hit = false;
                for (std::size_t z : chosen) hit = hit || a.count(z);
                if (!hit) return;
            }
            found = std::set<std::size_t>(chosen.begin(), chosen.end());
            return;
        }
        for (std::size_t i = start; i < elems.size(); ++i) {
            chosen.push_back(elems[i]);
            pick(i + 1, want);
            chosen.pop_back();
        }
    };
    for (std::size_t size = 0; size <= std::min(budget, elems.size()) && !found; ++size) pick(0, size);
    return found;
}

} // namespace cxrpq
