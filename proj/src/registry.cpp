#include "linkc/registry.hpp"

#include "linkc/linking_ext.hpp"
#include "linkc/syntax.hpp"

namespace linkc {

SourceTypePtr random_source_type(std::mt19937_64& rng, Lang base, int max_depth) {
    std::uniform_int_distribution<int> pick(0, 99);
    int roll = pick(rng);
    if (max_depth <= 1) return roll < 50 ? src_unit() : src_int();
    if (roll < 20) return src_unit();
    if (roll < 45) return src_int();
    if (roll < 60 && base == Lang::LamRef) return src_ref(random_source_type(rng, base, max_depth - 1));
    return src_arrow(random_source_type(rng, base, max_depth - 1),
                     random_source_type(rng, base, max_depth - 1));
}

bool in_programmer_grammar(TermKind kind, Lang base) {
    switch (kind) {
    case TermKind::UnitVal:
    case TermKind::IntLit:
    case TermKind::Var:
    case TermKind::Lam:
    case TermKind::App:
    case TermKind::Add:
    case TermKind::Mul:
    case TermKind::Sub: return true;
    case TermKind::RefNew:
    case TermKind::Assign:
    case TermKind::Deref: return base == Lang::LamRef;
    case TermKind::Loc:
    case TermKind::Throw:
    case TermKind::Catch: return false;
    }
    return false;
}

namespace {

// Greedy structural shrink: repeatedly replace the witness with its smallest
// still-failing candidate.
SourceTypePtr shrink(SourceTypePtr t, const std::function<bool(const SourceTypePtr&)>& fails) {
    bool progressed = true;
    while (progressed) {
        progressed = false;
        std::vector<SourceTypePtr> candidates;
        switch (t->kind) {
        case SourceType::Kind::Ref:
            candidates = {t->a, src_ref(src_unit())};
            break;
        case SourceType::Kind::Arrow:
            candidates = {t->a, t->b, src_arrow(src_unit(), t->b), src_arrow(t->a, src_unit())};
            break;
        default: break;
        }
        for (const auto& c : candidates) {
            if (equal(c, t)) continue;
            if (fails(c)) {
                t = c;
                progressed = true;
                break;
            }
        }
    }
    return t;
}

RegistrationResult fail(const ExtensionSpec&, const std::string& property,
                        const std::string& message, SourceTypePtr witness, Lang lang,
                        std::uint64_t seed) {
    RegistrationResult r;
    r.ok = false;
    r.property = property;
    r.message = message;
    r.counterexample = std::move(witness);
    r.witness_lang = lang;
    r.seed = seed;
    return r;
}

}  // namespace

RegistrationResult register_extension(const ExtensionSpec& spec, std::uint64_t seed,
                                      int corpus_size) {
    for (Lang base : spec.base_languages) {
        LanguageId lang{base, std::nullopt};

        auto embeds_cleanly = [&](const SourceTypePtr& t) -> bool {
            try {
                LinkTypePtr k = spec.embed(t, lang);
                return k && (!spec.grammar_check || spec.grammar_check(k));
            } catch (...) {
                return false;
            }
        };
        auto round_trips = [&](const SourceTypePtr& t) -> bool {
            try {
                return equal(spec.project(spec.embed(t, lang), lang), t);
            } catch (...) {
                return false;
            }
        };

        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (static_cast<unsigned>(base) + 1)));
        for (int i = 0; i < corpus_size; ++i) {
            SourceTypePtr t = random_source_type(rng, base, 6);
            if (!embeds_cleanly(t)) {
                auto pred = [&](const SourceTypePtr& c) { return !embeds_cleanly(c); };
                return fail(spec, "embedding",
                            "kappa+ is not total on " + lang_name(base) +
                                " types or leaves the extension grammar",
                            shrink(t, pred), base, seed);
            }
            if (!round_trips(t)) {
                auto pred = [&](const SourceTypePtr& c) {
                    return embeds_cleanly(c) && !round_trips(c);
                };
                return fail(spec, "round-trip",
                            "kappa-(kappa+(t)) differs from t on a " + lang_name(base) + " type",
                            shrink(t, pred), base, seed);
            }
        }

        if (spec.reasoning_terms) {
            for (TermKind k : spec.reasoning_terms(base)) {
                if (in_programmer_grammar(k, base))
                    return fail(spec, "reasoning-terms",
                                "a reasoning-only construct already belongs to the " +
                                    lang_name(base) + " programmer grammar",
                                nullptr, base, seed);
            }
        }
    }
    RegistrationResult ok;
    ok.seed = seed;
    return ok;
}

namespace {

ExtensionSpec heap_effect_spec() {
    ExtensionSpec s;
    s.id = Ext::HeapEffect;
    s.name = ext_name(Ext::HeapEffect);
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    s.embed = [](const SourceTypePtr& t, LanguageId l) { return kappa_plus(t, l, Ext::HeapEffect); };
    s.project = [](const LinkTypePtr& t, LanguageId l) { return kappa_minus(t, l, Ext::HeapEffect); };
    s.grammar_check = [](const LinkTypePtr& t) { return link_type_legal(t, Ext::HeapEffect); };
    s.reasoning_terms = [](Lang base) -> std::vector<TermKind> {
        if (base == Lang::Stlc) return {TermKind::RefNew, TermKind::Assign, TermKind::Deref};
        return {};
    };
    s.supports_translation = true;
    s.kappa_plus_table = {
        "k+(unit) = unit",
        "k+(int) = int",
        "k+(ref t) = ref k+(t)            [impure calculus only]",
        "k+(t1 -> t2) = k+(t1) -> R^pure k+(t2)     [pure calculus]",
        "k+(t1 -> t2) = k+(t1) -> R^impure k+(t2)   [impure calculus]",
    };
    s.kappa_minus_table = {
        "k-(unit) = unit",
        "k-(int) = int",
        "k-(ref t) = k-(t)                [pure calculus]",
        "k-(ref t) = ref k-(t)            [impure calculus]",
        "k-(t1 -> R^e t2) = k-(t1) -> k-(t2)",
    };
    s.obligations = "effects joined at applications; store operations force impure";
    return s;
}

ExtensionSpec linear_spec() {
    ExtensionSpec s;
    s.id = Ext::Linear;
    s.name = ext_name(Ext::Linear);
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    s.embed = [](const SourceTypePtr& t, LanguageId l) { return kappa_plus(t, l, Ext::Linear); };
    s.project = [](const LinkTypePtr& t, LanguageId l) { return kappa_minus(t, l, Ext::Linear); };
    s.grammar_check = [](const LinkTypePtr& t) { return link_type_legal(t, Ext::Linear); };
    s.kappa_plus_table = {
        "k+(unit) = unit",
        "k+(int) = int",
        "k+(ref t) = ref k+(t)",
        "k+(t1 -> t2) = k+(t1) -> k+(t2)",
    };
    s.kappa_minus_table = {
        "k-(phi) = kL-(phi)",
        "k-(phi^L) = kL-(phi)",
        "kL-(unit) = unit, kL-(int) = int",
        "kL-(ref t) = ref k-(t)",
        "kL-(t1 -> t2) = k-(t1) -> k-(t2)",
    };
    s.obligations = "each linear-typed variable is used exactly once";
    return s;
}

ExtensionSpec terminating_spec() {
    ExtensionSpec s;
    s.id = Ext::Terminating;
    s.name = ext_name(Ext::Terminating);
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    s.embed = [](const SourceTypePtr& t, LanguageId l) { return kappa_plus(t, l, Ext::Terminating); };
    s.project = [](const LinkTypePtr& t, LanguageId l) { return kappa_minus(t, l, Ext::Terminating); };
    s.grammar_check = [](const LinkTypePtr& t) { return link_type_legal(t, Ext::Terminating); };
    s.kappa_plus_table = {
        "k+(unit) = unit",
        "k+(int) = int",
        "k+(ref t) = ref k+(t)",
        "k+(t1 -> t2) = k+(t1) -> k+(t2)    [no termination claim]",
    };
    s.kappa_minus_table = {
        "k-(t1 -> t2|) = k-(t1) -> k-(t2)",
        "k-(t1 -> t2) = k-(t1) -> k-(t2)",
    };
    s.obligations = "terminating arrows require the syntactic termination check";
    return s;
}

ExtensionSpec cost_spec() {
    ExtensionSpec s;
    s.id = Ext::Cost;
    s.name = ext_name(Ext::Cost);
    s.base_languages = {Lang::Stlc, Lang::LamRef};
    s.embed = [](const SourceTypePtr& t, LanguageId l) { return kappa_plus(t, l, Ext::Cost); };
    s.project = [](const LinkTypePtr& t, LanguageId l) { return kappa_minus(t, l, Ext::Cost); };
    s.grammar_check = [](const LinkTypePtr& t) { return link_type_legal(t, Ext::Cost); };
    s.kappa_plus_table = {
        "k+(unit) = unit",
        "k+(int) = int",
        "k+(ref t) = ref k+(t)",
        "k+(t1 -> t2) = k+(t1) -> C^unknown k+(t2)",
    };
    s.kappa_minus_table = {
        "k-(t1 -> C^unknown t2) = k-(t1) -> k-(t2)",
        "k-(t1 -> C^N t2) = k-(t1) -> k-(t2)",
    };
    s.obligations = "known-cost arrows must match the straight-line cost analysis exactly";
    return s;
}

}  // namespace

const std::vector<ExtensionSpec>& builtin_extension_specs() {
    static const std::vector<ExtensionSpec> specs = {heap_effect_spec(), linear_spec(),
                                                     terminating_spec(), cost_spec()};
    return specs;
}

}  // namespace linkc
