#include "linkc/equiv.hpp"

#include "linkc/compiler.hpp"
#include "linkc/syntax.hpp"
#include "linkc/target.hpp"

namespace linkc {

namespace {

Ext ext_of_link_type(const LinkTypePtr& t) {
    if (!t) return Ext::HeapEffect;
    switch (t->kind) {
    case LinkType::Kind::Linear: return Ext::Linear;
    case LinkType::Kind::ArrowTerm: return Ext::Terminating;
    case LinkType::Kind::ArrowCost: return Ext::Cost;
    case LinkType::Kind::Arrow: {
        Ext inner = ext_of_link_type(t->a);
        if (inner != Ext::HeapEffect) return inner;
        return ext_of_link_type(t->b);
    }
    case LinkType::Kind::Ref: return ext_of_link_type(t->a);
    default: return Ext::HeapEffect;
    }
}

LanguageId checking_language(const TermPtr& t, Ext ext) {
    LanguageId lang = t->lang;
    if (lang.is_extended()) return lang;
    return lang.tag == Lang::Stlc ? LanguageId::stlck(ext) : LanguageId::lamrefk(ext);
}

}  // namespace

EquivVerdict probe(const TermPtr& e1, const TermPtr& e2, const LinkTypePtr& hole_type,
                   const std::vector<ProbeContext>& suite, std::int64_t fuel) {
    EquivVerdict verdict;
    Ext ext = ext_of_link_type(hole_type);

    TermPtr compiled[2];
    const TermPtr* candidates[2] = {&e1, &e2};
    for (int i = 0; i < 2; ++i) {
        try {
            LanguageId lang = checking_language(*candidates[i], ext);
            LinkJudgment j = typecheck_linked(*candidates[i], lang, ext, hole_type);
            compiled[i] = compile(*candidates[i], lang, j);
        } catch (const TypeError& e) {
            verdict.kind = EquivVerdict::Kind::IllTyped;
            verdict.ill_typed_component = i + 1;
            verdict.detail = e.what();
            return verdict;
        }
    }

    for (const ProbeContext& ctx : suite) {
        LinkJudgment cj = typecheck_linked(ctx.context, ctx.lang,
                                           ctx.lang.extension.value_or(ext));
        LinkTypePtr arrow = cj.type;
        if (arrow->kind == LinkType::Kind::Linear) arrow = arrow->a;
        bool shaped = arrow->kind == LinkType::Kind::ArrowR ||
                      arrow->kind == LinkType::Kind::Arrow ||
                      arrow->kind == LinkType::Kind::ArrowTerm ||
                      arrow->kind == LinkType::Kind::ArrowCost;
        if (!shaped || !equal(arrow->a, hole_type))
            throw TypeError(ctx.context->pos, "context " + ctx.name + " has hole type " +
                                                  (shaped ? print_type(arrow->a) : print_type(arrow)) +
                                                  ", expected " + print_type(hole_type));
        TermPtr ctx_compiled = compile(ctx.context, ctx.lang, cj);

        // fresh store per application; leakage across runs would fabricate
        // distinctions
        Outcome o1 = eval_target(t_app(LanguageId::target(), ctx_compiled, compiled[0]), Store{},
                                 fuel);
        Outcome o2 = eval_target(t_app(LanguageId::target(), ctx_compiled, compiled[1]), Store{},
                                 fuel);
        verdict.contexts_tried.push_back(ctx.name);
        if (o1.kind == Outcome::Kind::OutOfFuel || o2.kind == Outcome::Kind::OutOfFuel) {
            verdict.fuel_exhausted.push_back(ctx.name);
            continue;
        }
        if (o1.is_value() && o2.is_value() && !equal(o1.term, o2.term)) {
            verdict.kind = EquivVerdict::Kind::Distinguished;
            verdict.witness = ctx.name;
            verdict.outcome1 = o1.term;
            verdict.outcome2 = o2.term;
            return verdict;
        }
    }
    verdict.kind = EquivVerdict::Kind::NotDistinguished;
    return verdict;
}

namespace {

ProbeContext ctx(const std::string& name, const std::string& text) {
    return {name, parse(text, LanguageId::lamrefk()), LanguageId::lamrefk()};
}

std::vector<BuiltinSuite> make_builtin_suites() {
    std::vector<BuiltinSuite> suites;

    const std::string pp = "(-> (-> int (R pure int)) (R pure int))";
    const std::string ii = "(-> (-> int (R impure int)) (R impure int))";
    const std::string pi = "(-> (-> int (R pure int)) (R impure int))";
    const std::string ip = "(-> (-> int (R impure int)) (R pure int))";
    const std::string cref_hole = "(-> (-> unit (R impure int)) (R impure int))";

    auto counter_observer = [](const std::string& hole) {
        // allocate a counter, pass an incrementing function, return the final
        // count: sees how many times the component called its argument
        return "(lam h " + hole +
               " (let r (ref 0)"
               " (seq (app h (lam x int (seq (assign r (+ (deref r) 1)) (deref r))))"
               " (deref r))))";
    };
    auto pure_identity = [](const std::string& hole) {
        return "(lam h " + hole + " (app h (lam x int x)))";
    };
    auto pure_affine = [](const std::string& hole) {
        return "(lam h " + hole + " (+ (* 3 (app h (lam x int (+ x 1)))) (app h (lam x int 0))))";
    };

    suites.push_back(
        {parse_link_type(pp, Ext::HeapEffect),
         {ctx("pure-identity", pure_identity(pp)), ctx("pure-affine", pure_affine(pp))}});

    suites.push_back({parse_link_type(ii, Ext::HeapEffect),
                      {ctx("counter-observer", counter_observer(ii)),
                       ctx("pure-identity", pure_identity(ii))}});

    // the argument must be pure here, so no context can observe call counts
    suites.push_back(
        {parse_link_type(pi, Ext::HeapEffect),
         {ctx("pure-identity", pure_identity(pi)), ctx("pure-affine", pure_affine(pi)),
          ctx("store-then-report", "(lam h " + pi +
                                       " (let r (ref 0)"
                                       " (seq (assign r (app h (lam x int (+ x 1))))"
                                       " (deref r))))")}});

    suites.push_back({parse_link_type(ip, Ext::HeapEffect),
                      {ctx("counter-observer", counter_observer(ip)),
                       ctx("pure-identity", pure_identity(ip))}});

    // the section-2 counter context: let x = ref 0 in let c' () = x := !x+1; !x in [.] c'
    suites.push_back({parse_link_type(cref_hole, Ext::HeapEffect),
                      {ctx("c-ref", "(lam h " + cref_hole +
                                        " (let x (ref 0)"
                                        " (let cp (lam u unit (seq (assign x (+ (deref x) 1))"
                                        " (deref x)))"
                                        " (app h cp))))")}});
    return suites;
}

}  // namespace

const std::vector<BuiltinSuite>& builtin_suites() {
    static const std::vector<BuiltinSuite> suites = make_builtin_suites();
    return suites;
}

std::vector<ProbeContext> suite_for(const LinkTypePtr& hole_type) {
    for (const BuiltinSuite& s : builtin_suites())
        if (equal(s.hole_type, hole_type)) return s.contexts;
    return {};
}

}  // namespace linkc
