#include "cxrpq/conjunctive.hpp"

#include <algorithm>
#include <functional>

#include "cxrpq/nfa.hpp"

namespace cxrpq {

RefSymbol separator_symbol() { return RefSymbol::terminal(kSeparatorChar); }

namespace {

AstPtr sigma_star_ast(const Alphabet& alphabet) {
    AstPtr any;
    for (char c : alphabet.symbols()) {
        AstPtr t = Ast::terminal(c);
        any = any ? Ast::alt(any, t) : t;
    }
    return Ast::star(any);
}

std::set<VarId> defined_vars(const AstPtr& a) {
    std::set<VarId> out;
    std::function<void(const AstPtr&)> walk = [&](const AstPtr& n) {
        if (n->kind == Ast::Kind::VarDef) out.insert(n->var);
        for (const auto& c : n->children) walk(c);
    };
    walk(a);
    return out;
}

} // namespace

AstPtr var_prefix(const AstPtr& component, const std::set<VarId>& all_vars, const Alphabet& alphabet) {
    std::set<VarId> defined = defined_vars(component);
    std::vector<AstPtr> defs;
    for (const VarId& x : all_vars)
        if (!defined.count(x)) defs.push_back(Ast::def(x, sigma_star_ast(alphabet)));
    if (defs.empty()) return Ast::epsilon();
    return Ast::concat(std::move(defs));
}

AstPtr inter_xregex(const AstPtr& component, const std::set<VarId>& all_vars, const Alphabet& alphabet) {
    if (alphabet.contains(kSeparatorChar))
        throw validation_error("alphabet contains the reserved separator");
    return Ast::concat({var_prefix(component, all_vars, alphabet), Ast::symbol(separator_symbol()),
                        component});
}

// ---------------------------------------------------------------------------
// Symbolic suffix analysis

ComponentAnalysis analyze_component(const AstPtr& component, const std::set<VarId>& all_vars,
                                    std::size_t max_suffix_len, std::size_t max_terminals,
                                    std::size_t max_count) {
    ComponentAnalysis an;
    an.syntactic_defs = defined_vars(component);
    for (const VarId& x : all_vars)
        if (!an.syntactic_defs.count(x)) an.prefix_vars.insert(x);

    std::map<std::pair<SymWord, std::map<VarId, SymWord>>, std::size_t> dedup;
    for (const RefWord& u : enumerate_refwords(component, max_suffix_len, max_count, max_terminals)) {
        // Nesting tree of the instantiated definitions.
        std::map<VarId, std::vector<RefSymbol>> content;
        std::vector<std::pair<VarId, std::vector<RefSymbol>>> stack;
        std::vector<RefSymbol> top;
        auto sink = [&]() -> std::vector<RefSymbol>& { return stack.empty() ? top : stack.back().second; };
        for (const RefSymbol& s : u.symbols) {
            if (s.kind == RefSymbol::Kind::Open) {
                stack.push_back({s.var, {}});
            } else if (s.kind == RefSymbol::Kind::Close) {
                auto [v, body] = std::move(stack.back());
                stack.pop_back();
                content[v] = body;
                sink().push_back(RefSymbol::ref(v));
            } else {
                sink().push_back(s);
            }
        }

        std::map<VarId, SymWord> simg;
        std::function<SymWord(const VarId&)> image = [&](const VarId& x) -> SymWord {
            auto done = simg.find(x);
            if (done != simg.end()) return done->second;
            SymWord out;
            auto def = content.find(x);
            if (def != content.end()) {
                for (const RefSymbol& s : def->second) {
                    if (s.kind == RefSymbol::Kind::Terminal) {
                        out.push_back(SymItem{false, s.ch, {}});
                    } else if (content.count(s.var) || an.syntactic_defs.count(s.var)) {
                        SymWord sub = image(s.var);
                        out.insert(out.end(), sub.begin(), sub.end());
                    } else {
                        out.push_back(SymItem{true, 0, s.var});
                    }
                }
            } else if (!an.syntactic_defs.count(x)) {
                out.push_back(SymItem{true, 0, x});
            }
            // defined in the component but not instantiated: empty image
            simg[x] = out;
            return out;
        };

        SymWord word;
        for (const RefSymbol& s : top) {
            if (s.kind == RefSymbol::Kind::Terminal) {
                word.push_back(SymItem{false, s.ch, {}});
            } else if (content.count(s.var) || an.syntactic_defs.count(s.var)) {
                SymWord sub = image(s.var);
                word.insert(word.end(), sub.begin(), sub.end());
            } else {
                word.push_back(SymItem{true, 0, s.var});
            }
        }

        std::map<VarId, SymWord> images;
        for (const VarId& x : an.syntactic_defs) images[x] = image(x);

        auto key = std::make_pair(word, images);
        auto it = dedup.find(key);
        if (it == dedup.end())
            dedup.emplace(std::move(key), u.size());
        else
            it->second = std::min(it->second, u.size());
    }

    for (auto& [key, ulen] : dedup)
        an.candidates.push_back(SuffixCandidate{key.first, key.second, ulen});
    return an;
}

std::vector<std::map<VarId, std::string>> match_candidate(const SuffixCandidate& cand,
                                                          const std::string& word) {
    std::vector<std::map<VarId, std::string>> results;
    std::map<VarId, std::string> slots;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t p) {
        if (i == cand.word.size()) {
            if (p != word.size()) return;
            std::map<VarId, std::string> partial = slots;
            for (const auto& [x, img] : cand.images) {
                std::string w;
                for (const SymItem& it : img) w += it.is_slot ? slots.at(it.var) : std::string(1, it.ch);
                partial[x] = w;
            }
            results.push_back(std::move(partial));
            return;
        }
        const SymItem& it = cand.word[i];
        if (!it.is_slot) {
            if (p < word.size() && word[p] == it.ch) go(i + 1, p + 1);
            return;
        }
        auto bound = slots.find(it.var);
        if (bound != slots.end()) {
            const std::string& v = bound->second;
            if (word.compare(p, v.size(), v) == 0 && p + v.size() <= word.size()) go(i + 1, p + v.size());
            return;
        }
        for (std::size_t len = 0; p + len <= word.size(); ++len) {
            slots[it.var] = word.substr(p, len);
            go(i + 1, p + len);
        }
        slots.erase(it.var);
    };
    go(0, 0);
    std::sort(results.begin(), results.end());
    results.erase(std::unique(results.begin(), results.end()), results.end());
    return results;
}

// ---------------------------------------------------------------------------
// Bounded match decision

namespace {

struct PartialCandidates {
    // constrained partial mapping -> minimal suffix token count
    std::map<std::map<VarId, std::string>, std::size_t> options;
};

bool merge_into(std::map<VarId, std::string>& acc, const std::map<VarId, std::string>& add) {
    for (const auto& [x, w] : add) {
        auto it = acc.find(x);
        if (it == acc.end())
            acc.emplace(x, w);
        else if (it->second != w)
            return false;
    }
    return true;
}

} // namespace

std::optional<VariableMapping> is_conjunctive_match_bounded(const ConjunctiveXregex& cx,
                                                            const std::vector<std::string>& words,
                                                            std::size_t max_ref_len) {
    if (words.size() != cx.dimension())
        throw validation_error("word tuple arity does not match the conjunctive xregex dimension");
    std::set<VarId> all = cx.all_vars();

    std::vector<PartialCandidates> cands(cx.dimension());
    for (std::size_t i = 0; i < cx.dimension(); ++i) {
        ComponentAnalysis an = analyze_component(cx.components[i], all, max_ref_len, words[i].size());
        for (const SuffixCandidate& c : an.candidates) {
            for (auto& partial : match_candidate(c, words[i])) {
                auto it = cands[i].options.find(partial);
                if (it == cands[i].options.end())
                    cands[i].options.emplace(std::move(partial), c.u_len);
                else
                    it->second = std::min(it->second, c.u_len);
            }
        }
        if (cands[i].options.empty()) return std::nullopt;
    }

    // Process the most constrained components first.
    std::vector<std::size_t> order(cx.dimension());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cands[a].options.size() < cands[b].options.size(); });

    std::map<VarId, std::string> acc;
    std::optional<VariableMapping> found;
    std::function<bool(std::size_t)> dfs = [&](std::size_t oi) -> bool {
        if (oi == order.size()) {
            VariableMapping m;
            for (const auto& [x, w] : acc) m.set(x, w);
            found = m;
            return true;
        }
        std::size_t i = order[oi];
        for (const auto& [partial, ulen] : cands[i].options) {
            (void)ulen;
            std::map<VarId, std::string> saved = acc;
            if (merge_into(acc, partial)) {
                if (dfs(oi + 1)) return true;
            }
            acc = std::move(saved);
        }
        return false;
    };
    dfs(0);
    return found;
}

// ---------------------------------------------------------------------------
// Bounded match enumeration

namespace {

// Words a candidate can take with every slot value drawn from the alphabet
// (or a previously established value set) and the whole word capped; yields
// (word, constrained partial) pairs.
void concretize_candidate(const SuffixCandidate& cand, const Alphabet& alphabet,
                          std::size_t max_word_len,
                          const std::map<VarId, std::set<std::string>>& allowed,
                          const std::function<void(const std::string&, std::map<VarId, std::string>&)>& emit) {
    std::map<VarId, std::string> slots;
    std::string word;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (word.size() > max_word_len) return;
        if (i == cand.word.size()) {
            std::map<VarId, std::string> partial = slots;
            for (const auto& [x, img] : cand.images) {
                std::string w;
                for (const SymItem& it : img) w += it.is_slot ? slots.at(it.var) : std::string(1, it.ch);
                partial[x] = w;
            }
            emit(word, partial);
            return;
        }
        const SymItem& it = cand.word[i];
        if (!it.is_slot) {
            word.push_back(it.ch);
            go(i + 1);
            word.pop_back();
            return;
        }
        auto bound = slots.find(it.var);
        if (bound != slots.end()) {
            word += bound->second;
            go(i + 1);
            word.resize(word.size() - bound->second.size());
            return;
        }
        auto restricted = allowed.find(it.var);
        if (restricted != allowed.end()) {
            for (const std::string& val : restricted->second) {
                if (word.size() + val.size() > max_word_len) continue;
                slots[it.var] = val;
                word += val;
                go(i + 1);
                word.resize(word.size() - val.size());
                slots.erase(it.var);
            }
            return;
        }
        // fresh unrestricted slot: all values that still fit
        std::function<void(std::string&)> values = [&](std::string& val) {
            slots[it.var] = val;
            word += val;
            go(i + 1);
            word.resize(word.size() - val.size());
            slots.erase(it.var);
            if (word.size() + val.size() < max_word_len) {
                for (char c : alphabet.symbols()) {
                    val.push_back(c);
                    values(val);
                    val.pop_back();
                }
            }
        };
        std::string val;
        values(val);
    };
    go(0);
}

} // namespace

std::vector<ConjunctiveMatch> enumerate_conjunctive_matches(const ConjunctiveXregex& cx,
                                                            std::size_t max_ref_len,
                                                            std::size_t max_word_len,
                                                            std::size_t max_count) {
    std::set<VarId> all = cx.all_vars();

    std::vector<ComponentAnalysis> analyses;
    for (std::size_t i = 0; i < cx.dimension(); ++i)
        analyses.push_back(analyze_component(cx.components[i], all, max_ref_len, max_word_len));

    // Components with few unconstrained slots first; every component after
    // the first concretizes under the images fixed so far.
    std::vector<std::size_t> comp_order(cx.dimension());
    for (std::size_t i = 0; i < comp_order.size(); ++i) comp_order[i] = i;
    auto slot_count = [&](std::size_t i) {
        std::set<VarId> slots;
        for (const SuffixCandidate& c : analyses[i].candidates)
            for (const SymItem& it : c.word)
                if (it.is_slot) slots.insert(it.var);
        return slots.size();
    };
    std::sort(comp_order.begin(), comp_order.end(),
              [&](std::size_t a, std::size_t b) { return slot_count(a) < slot_count(b); });

    std::set<ConjunctiveMatch> out;
    std::map<VarId, std::string> acc;
    std::vector<std::string> tuple(cx.dimension());
    std::size_t work = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t oi) {
        if (oi == cx.dimension()) {
            VariableMapping m;
            for (const auto& [x, w] : acc) m.set(x, w);
            out.insert(ConjunctiveMatch{tuple, m});
            return;
        }
        std::size_t i = comp_order[oi];
        std::map<VarId, std::set<std::string>> forced;
        for (const auto& [x, w] : acc) forced[x] = {w};
        for (const SuffixCandidate& c : analyses[i].candidates) {
            concretize_candidate(c, cx.alphabet, max_word_len, forced,
                                 [&](const std::string& w, std::map<VarId, std::string>& partial) {
                                     if (++work > max_count)
                                         throw limit_error(
                                             "conjunctive match enumeration exceeded limit");
                                     std::map<VarId, std::string> saved = acc;
                                     if (merge_into(acc, partial)) {
                                         tuple[i] = w;
                                         dfs(oi + 1);
                                     }
                                     acc = std::move(saved);
                                 });
        }
    };
    dfs(0);
    return {out.begin(), out.end()};
}

} // namespace cxrpq
