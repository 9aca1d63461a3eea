#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cxrpq/conjunctive.hpp"
#include "testutil.hpp"

using namespace cxrpq;
using testutil::Gen;

namespace {
const Alphabet kAb("ab");
const Alphabet kAbc("abc");

AstPtr P(const std::string& text, const Alphabet& sigma = kAbc) { return parse_xregex(text, sigma); }

std::string words_key(const std::vector<std::string>& ws) {
    std::string k;
    for (const auto& w : ws) k += w + "\x02";
    return k;
}

std::set<std::string> match_words(const std::vector<ConjunctiveMatch>& ms) {
    std::set<std::string> out;
    for (const auto& m : ms) out.insert(words_key(m.words));
    return out;
}
} // namespace

TEST_CASE("var_prefix") {
    AstPtr g1 = P("($x{a*}|b*)$y", kAb);
    AstPtr prefix = var_prefix(g1, {"x", "y"}, kAb);
    REQUIRE(prefix->kind == Ast::Kind::VarDef);
    CHECK(prefix->var == "y");
    CHECK(is_classical(prefix->children[0]));

    // a component defining every variable contributes no dummy definitions
    CHECK(var_prefix(P("$x{a}b"), {"x"}, kAbc)->kind == Ast::Kind::Epsilon);

    // undefined variables are listed in lexicographic order
    AstPtr a3 = P("$x2*a*$x1");
    AstPtr p3 = var_prefix(a3, {"x1", "x2", "x3"}, kAbc);
    REQUIRE(p3->kind == Ast::Kind::Concat);
    REQUIRE(p3->children.size() == 3);
    CHECK(p3->children[0]->var == "x1");
    CHECK(p3->children[1]->var == "x2");
    CHECK(p3->children[2]->var == "x3");
}

TEST_CASE("inter_xregex carries the reserved separator") {
    AstPtr hat = inter_xregex(P("$x{a}"), {"x", "y"}, kAbc);
    REQUIRE(hat->kind == Ast::Kind::Concat);
    REQUIRE(hat->children.size() == 3);
    CHECK(hat->children[1]->sym == separator_symbol());
    // the separator can never be an alphabet symbol
    CHECK_THROWS_AS(Alphabet(std::string(1, kSeparatorChar)), validation_error);
}

TEST_CASE("conjunctive match of the three-component example") {
    std::vector<AstPtr> comps{P("$x2{$x1|a*}b"), P("$x1{(a|b)*}$x3{c*}b$x3"), P("$x2*a*$x1")};
    ConjunctiveXregex cx = validate_conjunctive(comps, kAbc);

    auto psi = is_conjunctive_match_bounded(cx, {"abb", "abccbcc", "ababaaab"}, 18);
    REQUIRE(psi.has_value());
    CHECK(psi->get("x1") == "ab");
    CHECK(psi->get("x2") == "ab");
    CHECK(psi->get("x3") == "cc");

    CHECK_FALSE(is_conjunctive_match_bounded(cx, {"aab", "bbacbc", "aa"}, 18).has_value());

    ConjunctiveXregex classic = validate_conjunctive({P("a*", kAb)}, kAb);
    auto all_eps = is_conjunctive_match_bounded(classic, {"aa"}, 8);
    REQUIRE(all_eps.has_value());
    CHECK(all_eps->images.empty());
}

TEST_CASE("dimension mismatch is rejected") {
    ConjunctiveXregex cx = validate_conjunctive({P("a")}, kAbc);
    CHECK_THROWS_AS(is_conjunctive_match_bounded(cx, {"a", "a"}, 8), validation_error);
}

TEST_CASE("enumerate_conjunctive_matches forced image") {
    ConjunctiveXregex cx = validate_conjunctive({P("$x{a}", kAb), P("$x b", kAb)}, kAb);
    auto ms = enumerate_conjunctive_matches(cx, 10, 6);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].words == std::vector<std::string>{"a", "ab"});
    CHECK(ms[0].mapping.get("x") == "a");
}

TEST_CASE("enumerate_conjunctive_matches contains the documented pair witness") {
    ConjunctiveXregex cx =
        validate_conjunctive({P("($x{a*}|b*)$y", kAb), P("$y{$x a$x b}b$y*", kAb)}, kAb);
    auto ms = enumerate_conjunctive_matches(cx, 14, 19);
    bool found = false;
    for (const auto& m : ms)
        if (m.words == std::vector<std::string>{"aaaaaaab", "aaaaabbaaaaabaaaaab"}) {
            found = true;
            CHECK(m.mapping.get("x") == "aa");
            CHECK(m.mapping.get("y") == "aaaaab");
        }
    CHECK(found);
    // the decision route agrees on the same pair
    auto psi = is_conjunctive_match_bounded(cx, {"aaaaaaab", "aaaaabbaaaaabaaaaab"}, 14);
    REQUIRE(psi.has_value());
    CHECK(psi->get("x") == "aa");
    CHECK(psi->get("y") == "aaaaab");
}

TEST_CASE("variable-free tuples denote cartesian products") {
    ConjunctiveXregex cx = validate_conjunctive({P("a|b", kAb), P("ab*", kAb)}, kAb);
    auto ms = enumerate_conjunctive_matches(cx, 8, 3);
    std::set<std::string> expect;
    for (const std::string& l : testutil::ast_lang(P("a|b", kAb), 3))
        for (const std::string& r : testutil::ast_lang(P("ab*", kAb), 3))
            expect.insert(words_key({l, r}));
    CHECK(match_words(ms) == expect);
}

TEST_CASE("property: matches re-verify through refwords_with_mapping") {
    Gen gen(41);
    int verified = 0;
    for (int i = 0; i < 40; ++i) {
        ConjunctiveXregex cx = gen.conjunctive(kAb, gen.pick(1, 2), gen.pick(0, 2), 8, gen.coin());
        std::set<VarId> all = cx.all_vars();
        for (const ConjunctiveMatch& m : enumerate_conjunctive_matches(cx, 10, 6)) {
            // token budget: component part plus the dummy prefix at the
            // mapping's image sizes
            std::size_t budget = 10 + 1;
            for (const VarId& x : all) budget += 2 + m.mapping.get(x).size();
            for (std::size_t c = 0; c < cx.dimension(); ++c) {
                AstPtr hat = inter_xregex(cx.components[c], all, kAb);
                bool ok = false;
                for (const RefWord& u : refwords_with_mapping(hat, m.mapping, budget)) {
                    DerefResult r = deref(u);
                    std::size_t sep = r.word.find(kSeparatorChar);
                    ok = ok || r.word.substr(sep + 1) == m.words[c];
                }
                CHECK(ok);
                ++verified;
            }
            // mappings are total with empty default: images only for used vars
            for (const auto& [x, w] : m.mapping.images) {
                CHECK(all.count(x));
                CHECK(!w.empty());
            }
            if (verified > 400) return;
        }
    }
    CHECK(verified > 50);
}

TEST_CASE("property: the two match routes agree") {
    Gen gen(43);
    for (int i = 0; i < 50; ++i) {
        ConjunctiveXregex cx = gen.conjunctive(kAb, gen.pick(1, 2), gen.pick(0, 2), 7, gen.coin());
        auto ms = enumerate_conjunctive_matches(cx, 9, 5);
        std::set<std::string> inside = match_words(ms);
        // every enumerated tuple is accepted by the decision route
        for (const auto& m : ms) {
            CAPTURE(render_xregex(cx.components[0]));
            CHECK(is_conjunctive_match_bounded(cx, m.words, 9).has_value());
        }
        // random tuples outside the enumeration are rejected at equal bounds
        for (int t = 0; t < 10; ++t) {
            std::vector<std::string> tuple;
            for (std::size_t c = 0; c < cx.dimension(); ++c) {
                std::string w;
                int len = gen.pick(0, 4);
                for (int j = 0; j < len; ++j) w += gen.symbol(kAb);
                tuple.push_back(w);
            }
            bool listed = inside.count(words_key(tuple)) > 0;
            bool decided = is_conjunctive_match_bounded(cx, tuple, 9).has_value();
            CAPTURE(render_xregex(cx.components[0]));
            CAPTURE(words_key(tuple));
            CHECK(decided == listed);
        }
    }
}

TEST_CASE("property: ref-language stable changes preserve bounded matches") {
    Gen gen(47);
    for (int i = 0; i < 40; ++i) {
        ConjunctiveXregex cx = gen.conjunctive(kAb, gen.pick(1, 2), gen.pick(0, 2), 7, true);
        // Swap the branches of one alternation; the ref-language is a set, so
        // bounded ref-languages and bounded matches must both be unchanged.
        std::function<AstPtr(const AstPtr&, bool&)> swap_one = [&](const AstPtr& a,
                                                                   bool& done) -> AstPtr {
            if (!done && a->kind == Ast::Kind::Alt && !is_star_sugar(a)) {
                done = true;
                return Ast::alt(a->children[1], a->children[0]);
            }
            if (a->children.empty()) return a;
            std::vector<AstPtr> kids;
            for (const auto& c : a->children) kids.push_back(swap_one(c, done));
            auto n = std::make_shared<Ast>(*a);
            n->children = std::move(kids);
            return n;
        };
        ConjunctiveXregex cy = cx;
        bool changed = false;
        for (AstPtr& comp : cy.components) {
            bool done = false;
            comp = swap_one(comp, done);
            changed = changed || done;
            if (changed) break;
        }
        if (!changed) continue;
        for (std::size_t c = 0; c < cx.dimension(); ++c) {
            auto ra = enumerate_refwords(cx.components[c], 7);
            auto rb = enumerate_refwords(cy.components[c], 7);
            CHECK(std::set<RefWord>(ra.begin(), ra.end()) == std::set<RefWord>(rb.begin(), rb.end()));
        }
        auto ma = enumerate_conjunctive_matches(cx, 9, 5);
        auto mb = enumerate_conjunctive_matches(cy, 9, 5);
        CHECK(match_words(ma) == match_words(mb));
    }
}
