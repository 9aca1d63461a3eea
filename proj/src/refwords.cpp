#include "cxrpq/refwords.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "cxrpq/nfa.hpp"

namespace cxrpq {

std::string VariableMapping::str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [x, w] : images) {
        if (!first) s += ", ";
        first = false;
        s += x + "=" + w;
    }
    return s + "}";
}

std::string RefWord::str() const {
    std::string s;
    std::string pending;  // coalesce terminal runs
    auto flush = [&] {
        if (!pending.empty()) {
            if (!s.empty()) s += ' ';
            s += pending;
            pending.clear();
        }
    };
    for (const RefSymbol& sym : symbols) {
        if (sym.kind == RefSymbol::Kind::Terminal) {
            pending += sym.ch;
        } else {
            flush();
            if (!s.empty()) s += ' ';
            s += sym.str();
        }
    }
    flush();
    return s;
}

namespace {

// Arcs x -> y of the relation "a definition of y contains a reference or a
// definition of x", together with the nesting validity checks.
struct RefWordShape {
    std::map<VarId, std::pair<std::size_t, std::size_t>> spans;  // open/close positions
    PrecedenceGraph precedence;
};

RefWordShape analyze(const std::vector<RefSymbol>& symbols) {
    RefWordShape shape;
    std::map<VarId, int> opens, closes;
    std::vector<std::pair<VarId, std::size_t>> stack;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const RefSymbol& s = symbols[i];
        switch (s.kind) {
            case RefSymbol::Kind::Open: {
                if (++opens[s.var] > 1)
                    throw validation_error("duplicate parenthesis: <" + s.var + " occurs twice");
                for (auto& [enclosing, _] : stack) {
                    shape.precedence.nodes.insert(enclosing);
                    shape.precedence.arcs.insert({s.var, enclosing});
                }
                shape.precedence.nodes.insert(s.var);
                stack.push_back({s.var, i});
                break;
            }
            case RefSymbol::Kind::Close: {
                if (++closes[s.var] > 1)
                    throw validation_error("duplicate parenthesis: >" + s.var + " occurs twice");
                if (stack.empty() || stack.back().first != s.var)
                    throw validation_error("malformed nesting at >" + s.var);
                shape.spans[s.var] = {stack.back().second, i};
                stack.pop_back();
                break;
            }
            case RefSymbol::Kind::Ref: {
                shape.precedence.nodes.insert(s.var);
                for (auto& [enclosing, _] : stack) {
                    shape.precedence.nodes.insert(enclosing);
                    shape.precedence.arcs.insert({s.var, enclosing});
                }
                break;
            }
            case RefSymbol::Kind::Terminal: break;
        }
    }
    if (!stack.empty()) throw validation_error("malformed nesting: <" + stack.back().first + " is never closed");
    for (auto& [x, c] : closes)
        if (!opens.count(x)) throw validation_error("malformed nesting at >" + x);
    return shape;
}

} // namespace

bool is_valid_refword(const std::vector<RefSymbol>& symbols) {
    try {
        RefWordShape shape = analyze(symbols);
        return !shape.precedence.find_cycle().has_value();
    } catch (const validation_error&) {
        return false;
    }
}

RefWord validate_refword(std::vector<RefSymbol> symbols, const Alphabet& alphabet) {
    for (const RefSymbol& s : symbols)
        if (s.kind == RefSymbol::Kind::Terminal && !alphabet.contains(s.ch))
            throw validation_error(std::string("terminal '") + s.ch + "' is not in the alphabet");
    RefWordShape shape = analyze(symbols);
    if (auto cyc = shape.precedence.find_cycle()) {
        std::vector<std::string> witness(cyc->begin(), cyc->end());
        throw cyclic_error(std::move(witness));
    }
    return RefWord{std::move(symbols)};
}

RefWord parse_refword_text(const std::string& text) {
    RefWord w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() >= 2 && (tok[0] == '<' || tok[0] == '>' || tok[0] == '$')) {
            VarId v = tok.substr(1);
            if (tok[0] == '<')
                w.symbols.push_back(RefSymbol::open(v));
            else if (tok[0] == '>')
                w.symbols.push_back(RefSymbol::close(v));
            else
                w.symbols.push_back(RefSymbol::ref(v));
        } else {
            for (char c : tok) w.symbols.push_back(RefSymbol::terminal(c));
        }
    }
    return w;
}

DerefResult deref(const RefWord& w) {
    // Resolve definition brackets into a nesting tree, then substitute
    // bottom-up. Well-definedness of the result follows from ref-word
    // validity; the order of substitutions cannot change it.
    std::map<VarId, std::vector<RefSymbol>> content;
    std::vector<std::pair<VarId, std::vector<RefSymbol>>> stack;
    std::vector<RefSymbol> top;
    auto sink = [&]() -> std::vector<RefSymbol>& { return stack.empty() ? top : stack.back().second; };
    for (const RefSymbol& s : w.symbols) {
        switch (s.kind) {
            case RefSymbol::Kind::Open: stack.push_back({s.var, {}}); break;
            case RefSymbol::Kind::Close: {
                auto [v, body] = std::move(stack.back());
                stack.pop_back();
                content[v] = body;
                sink().push_back(RefSymbol::ref(v));  // definitions contribute in place
                break;
            }
            default: sink().push_back(s); break;
        }
    }

    std::map<VarId, std::string> resolved;
    std::function<std::string(const VarId&)> image = [&](const VarId& x) -> std::string {
        auto done = resolved.find(x);
        if (done != resolved.end()) return done->second;
        auto def = content.find(x);
        std::string out;
        if (def != content.end()) {
            for (const RefSymbol& s : def->second)
                out += s.kind == RefSymbol::Kind::Terminal ? std::string(1, s.ch) : image(s.var);
        }
        resolved[x] = out;
        return out;
    };

    DerefResult r;
    for (const RefSymbol& s : top)
        r.word += s.kind == RefSymbol::Kind::Terminal ? std::string(1, s.ch) : image(s.var);
    for (const auto& [x, _] : content) r.mapping.set(x, image(x));
    return r;
}

std::vector<RefWord> enumerate_refwords(const AstPtr& x, std::size_t max_ref_len, std::size_t max_count,
                                        std::size_t max_terminals) {
    Nfa n = ref_regex_nfa(x);
    std::vector<RefWord> out;
    for (auto& w : enumerate_nfa_words(n, max_ref_len, max_count, max_terminals)) {
        // Component-wise sequential expressions can still emit duplicate or
        // ill-nested parentheses; those words are not ref-words.
        if (is_valid_refword(w)) out.push_back(RefWord{std::move(w)});
    }
    return out;
}

bool refword_member(const AstPtr& x, const RefWord& w) {
    if (!is_valid_refword(w.symbols)) return false;
    return ref_regex_nfa(x).accepts(w.symbols);
}

std::set<std::string> enumerate_lang_bounded(const AstPtr& x, std::size_t max_ref_len,
                                             std::size_t max_word_len) {
    std::set<std::string> out;
    for (const RefWord& w : enumerate_refwords(x, max_ref_len)) {
        DerefResult r = deref(w);
        if (r.word.size() <= max_word_len) out.insert(std::move(r.word));
    }
    return out;
}

std::vector<RefWord> refwords_with_mapping(const AstPtr& x, const VariableMapping& v,
                                           std::size_t max_ref_len) {
    std::vector<RefWord> out;
    for (RefWord& w : enumerate_refwords(x, max_ref_len)) {
        if (deref(w).mapping == v) out.push_back(std::move(w));
    }
    return out;
}

} // namespace cxrpq
