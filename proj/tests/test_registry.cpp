#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "linkc/registry.hpp"

using namespace linkc;
using namespace linkc::testgen;

namespace {

// a heap-effect spec whose projection forgets reference structure
ExtensionSpec broken_ref_spec() {
    ExtensionSpec s;
    s.id = Ext::HeapEffect;
    s.name = "broken-heap-effect";
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    s.embed = [](const SourceTypePtr& t, LanguageId l) { return kappa_plus(t, l, Ext::HeapEffect); };
    s.project = [](const LinkTypePtr& t, LanguageId l) -> SourceTypePtr {
        if (t->kind == LinkType::Kind::Ref) return src_int();
        return kappa_minus(t, l, Ext::HeapEffect);
    };
    return s;
}

ExtensionSpec identity_spec() {
    ExtensionSpec s;
    s.id = Ext::Terminating;  // reuses the plain-arrow grammar
    s.name = "identity";
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    auto embed = [](const SourceTypePtr& t, LanguageId l) -> LinkTypePtr {
        auto self = [&](auto&& rec, const SourceTypePtr& u) -> LinkTypePtr {
            switch (u->kind) {
            case SourceType::Kind::Unit: return lt_unit();
            case SourceType::Kind::Int: return lt_int();
            case SourceType::Kind::Ref: return lt_ref(rec(rec, u->a));
            case SourceType::Kind::Arrow: return lt_arrow(rec(rec, u->a), rec(rec, u->b));
            }
            return lt_unit();
        };
        (void)l;
        return self(self, t);
    };
    auto project = [](const LinkTypePtr& t, LanguageId l) -> SourceTypePtr {
        auto self = [&](auto&& rec, const LinkTypePtr& u) -> SourceTypePtr {
            switch (u->kind) {
            case LinkType::Kind::Unit: return src_unit();
            case LinkType::Kind::Int: return src_int();
            case LinkType::Kind::Ref: return src_ref(rec(rec, u->a));
            case LinkType::Kind::Arrow: return src_arrow(rec(rec, u->a), rec(rec, u->b));
            default: return src_unit();
            }
        };
        (void)l;
        return self(self, t);
    };
    s.embed = embed;
    s.project = project;
    return s;
}

}  // namespace

TEST_CASE("all four shipped extensions pass registration") {
    for (const ExtensionSpec& spec : builtin_extension_specs()) {
        RegistrationResult r = register_extension(spec);
        INFO(spec.name, ": ", r.message);
        CHECK(r.ok);
        CHECK(r.seed == kDefaultRegistrySeed);
    }
    CHECK(builtin_extension_specs().size() == 4);
}

TEST_CASE("a projection that forgets refs is rejected with a minimal witness") {
    RegistrationResult r = register_extension(broken_ref_spec());
    REQUIRE_FALSE(r.ok);
    CHECK(r.property == "round-trip");
    CHECK(r.witness_lang == Lang::LamRef);
    REQUIRE(r.counterexample);
    CHECK(equal(r.counterexample, src_ref(src_unit())));
}

TEST_CASE("the identity extension registers cleanly") {
    RegistrationResult r = register_extension(identity_spec());
    INFO(r.message);
    CHECK(r.ok);
}

TEST_CASE("registration is deterministic for a fixed seed") {
    RegistrationResult a = register_extension(broken_ref_spec(), 7777);
    RegistrationResult b = register_extension(broken_ref_spec(), 7777);
    REQUIRE_FALSE(a.ok);
    REQUIRE_FALSE(b.ok);
    CHECK(a.property == b.property);
    CHECK(a.witness_lang == b.witness_lang);
    CHECK(equal(a.counterexample, b.counterexample));
    CHECK(a.seed == 7777);
}

TEST_CASE("reasoning-only terms must lie outside the programmer grammar") {
    ExtensionSpec bad = identity_spec();
    bad.reasoning_terms = [](Lang) -> std::vector<TermKind> { return {TermKind::App}; };
    RegistrationResult r = register_extension(bad);
    REQUIRE_FALSE(r.ok);
    CHECK(r.property == "reasoning-terms");

    ExtensionSpec fine = identity_spec();
    fine.reasoning_terms = [](Lang base) -> std::vector<TermKind> {
        if (base == Lang::Stlc) return {TermKind::RefNew};
        return {};
    };
    CHECK(register_extension(fine).ok);
}

TEST_CASE("an embedding that leaves the declared grammar is rejected") {
    ExtensionSpec bad = identity_spec();
    // claims the heap-effect grammar but produces plain arrows
    bad.grammar_check = [](const LinkTypePtr& t) { return link_type_legal(t, Ext::HeapEffect); };
    RegistrationResult r = register_extension(bad);
    REQUIRE_FALSE(r.ok);
    CHECK(r.property == "embedding");
    REQUIRE(r.counterexample);
    // the witness shrank to a bare arrow over base types
    CHECK(r.counterexample->kind == SourceType::Kind::Arrow);
    CHECK(type_depth(r.counterexample) == 2);
}

TEST_CASE("the programmer grammar table matches the language definitions") {
    CHECK(in_programmer_grammar(TermKind::App, Lang::Stlc));
    CHECK_FALSE(in_programmer_grammar(TermKind::RefNew, Lang::Stlc));
    CHECK(in_programmer_grammar(TermKind::RefNew, Lang::LamRef));
    CHECK_FALSE(in_programmer_grammar(TermKind::Throw, Lang::LamRef));
    CHECK_FALSE(in_programmer_grammar(TermKind::Loc, Lang::LamRef));
}
