// Shared test infrastructure: deterministic generators of well-typed terms
// (type-directed, so generated programs check by construction) and the
// canonical programs from the golden scenarios.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "linkc/linking_ext.hpp"
#include "linkc/registry.hpp"
#include "linkc/source_core.hpp"
#include "linkc/syntax.hpp"
#include "linkc/target.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc::testgen {

// --- canonical programs -------------------------------------------------------

inline const char* kE1 = "(lam c (-> unit int) (app c unit))";
inline const char* kE2 = "(lam c (-> unit int) (seq (app c unit) (app c unit)))";
inline const char* kE1Annot = "(-> (-> unit (R impure int)) (R impure int))";

// the counter context as a function of the hole, in the impure source language
inline const char* kCRefLambda =
    "(lam h (-> (-> unit int) int)"
    " (let x (ref 0)"
    " (let cp (lam u unit (seq (assign x (+ (deref x) 1)) (deref x)))"
    " (app h cp))))";

inline const char* kProgA = "(lam f (-> int int) 1)";
inline const char* kProgB = "(lam f (-> int int) (seq (app f 0) 1))";
inline const char* kProgC = "(lam f (-> int int) (seq (app f 0) (app f 0) 1))";

// divergence through higher-order store
inline const char* kLandinKnot =
    "(let r (ref (lam x int x))"
    " (seq (assign r (lam x int (app (deref r) x)))"
    " (app (deref r) 0)))";

inline TermPtr P(const std::string& text, LanguageId lang) { return parse(text, lang); }
inline SourceTypePtr ST(const std::string& text, Lang base = Lang::LamRef) {
    return parse_source_type(text, base);
}
inline LinkTypePtr LT(const std::string& text, Ext ext = Ext::HeapEffect) {
    return parse_link_type(text, ext);
}
inline TargetTypePtr TT(const std::string& text) { return parse_target_type(text); }

// --- rng ----------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    int range(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(eng_);
    }
    bool chance(int pct) { return range(1, 100) <= pct; }
    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

// --- well-typed source terms -----------------------------------------------------

struct SourceGen {
    Rng& rng;
    LanguageId lang;
    std::vector<std::pair<std::string, SourceTypePtr>> env;
    int fresh = 0;

    Lang base() const { return lang.base(); }

    std::string fresh_name() { return "v" + std::to_string(fresh++); }

    std::vector<std::size_t> vars_of(const SourceTypePtr& want) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < env.size(); ++i)
            if (equal(env[i].second, want)) out.push_back(i);
        return out;
    }

    SourceTypePtr small_type(int depth) { return random_source_type(rng.engine(), base(), depth); }

    TermPtr leaf(const SourceTypePtr& want) {
        auto vars = vars_of(want);
        if (!vars.empty() && rng.chance(50))
            return t_var(lang, env[vars[rng.range(0, int(vars.size()) - 1)]].first);
        switch (want->kind) {
        case SourceType::Kind::Unit: return t_unit(lang);
        case SourceType::Kind::Int: return t_int(lang, rng.range(-9, 9));
        case SourceType::Kind::Ref: return t_ref(lang, leaf(want->a));
        case SourceType::Kind::Arrow: {
            std::string x = fresh_name();
            env.emplace_back(x, want->a);
            TermPtr body = leaf(want->b);
            env.pop_back();
            return t_lam(lang, x, ParamAnnot{want->a}, body);
        }
        }
        return t_unit(lang);
    }

    TermPtr gen(const SourceTypePtr& want, int size) {
        if (size <= 1) return leaf(want);
        for (int attempt = 0; attempt < 8; ++attempt) {
            switch (rng.range(0, 9)) {
            case 0: return leaf(want);
            case 1:
                if (want->kind == SourceType::Kind::Int) {
                    TermKind op = rng.chance(40)   ? TermKind::Add
                                  : rng.chance(50) ? TermKind::Sub
                                                   : TermKind::Mul;
                    return t_arith(lang, op, gen(src_int(), size / 2), gen(src_int(), size / 2));
                }
                break;
            case 2: {  // let
                SourceTypePtr bound = small_type(2);
                TermPtr rhs = gen(bound, size / 3);
                std::string x = fresh_name();
                env.emplace_back(x, bound);
                TermPtr body = gen(want, size / 2);
                env.pop_back();
                return t_let(lang, x, rhs, body);
            }
            case 3: {  // immediate application of an annotated lambda
                SourceTypePtr dom = small_type(2);
                TermPtr arg = gen(dom, size / 3);
                std::string x = fresh_name();
                env.emplace_back(x, dom);
                TermPtr body = gen(want, size / 2);
                env.pop_back();
                return t_app(lang, t_lam(lang, x, ParamAnnot{dom}, body), arg);
            }
            case 4: {  // call a function from the environment
                std::vector<std::size_t> funs;
                for (std::size_t i = 0; i < env.size(); ++i)
                    if (env[i].second->kind == SourceType::Kind::Arrow &&
                        equal(env[i].second->b, want))
                        funs.push_back(i);
                if (!funs.empty()) {
                    // copy out: recursion below may grow env and move it
                    auto [fname, fty] = env[funs[rng.range(0, int(funs.size()) - 1)]];
                    return t_app(lang, t_var(lang, fname), gen(fty->a, size - 1));
                }
                break;
            }
            case 5:
                if (want->kind == SourceType::Kind::Arrow) {
                    std::string x = fresh_name();
                    env.emplace_back(x, want->a);
                    TermPtr body = gen(want->b, size - 1);
                    env.pop_back();
                    return t_lam(lang, x, ParamAnnot{want->a}, body);
                }
                break;
            case 6:
                if (want->kind == SourceType::Kind::Ref && base() == Lang::LamRef)
                    return t_ref(lang, gen(want->a, size - 1));
                break;
            case 7:
                if (want->kind == SourceType::Kind::Unit && base() == Lang::LamRef) {
                    std::vector<std::size_t> cells;
                    for (std::size_t i = 0; i < env.size(); ++i)
                        if (env[i].second->kind == SourceType::Kind::Ref) cells.push_back(i);
                    if (!cells.empty()) {
                        auto [rname, rty] = env[cells[rng.range(0, int(cells.size()) - 1)]];
                        return t_assign(lang, t_var(lang, rname), gen(rty->a, size - 1));
                    }
                }
                break;
            case 8:
                if (base() == Lang::LamRef) {
                    std::vector<std::size_t> cells;
                    for (std::size_t i = 0; i < env.size(); ++i)
                        if (env[i].second->kind == SourceType::Kind::Ref &&
                            equal(env[i].second->a, want))
                            cells.push_back(i);
                    if (!cells.empty())
                        return t_deref(
                            lang, t_var(lang, env[cells[rng.range(0, int(cells.size()) - 1)]].first));
                }
                break;
            case 9: {  // sequencing
                TermPtr first = gen(small_type(2), size / 3);
                return t_seq(lang, first, gen(want, size / 2));
            }
            }
        }
        return leaf(want);
    }
};

inline TermPtr gen_source_term(Rng& rng, LanguageId lang, const SourceTypePtr& want, int size) {
    SourceGen g{rng, lang, {}, 0};
    return g.gen(want, size);
}

inline TermPtr gen_closed_int_program(Rng& rng, LanguageId lang, int size) {
    return gen_source_term(rng, lang, src_int(), size);
}

// --- heap-effect linking types and extended terms ----------------------------------

// pure_result: the type must be producible by a heap-pure computation, so no
// refs at this level (allocation is impure).
inline LinkTypePtr gen_heap_link_type(Rng& rng, int depth, bool pure_result) {
    int roll = rng.range(0, 99);
    if (depth <= 1) return roll < 50 ? lt_unit() : lt_int();
    if (roll < 18) return lt_unit();
    if (roll < 40) return lt_int();
    if (roll < 55 && !pure_result) return lt_ref(gen_heap_link_type(rng, depth - 1, false));
    Effect eff = rng.chance(50) ? Effect::Pure : Effect::Impure;
    return lt_arrow_r(gen_heap_link_type(rng, depth - 1, false), eff,
                      gen_heap_link_type(rng, depth - 1, eff == Effect::Pure));
}

struct LinkedGen {
    Rng& rng;
    LanguageId lang;  // StlcK or LamRefK, heap-effect
    std::vector<std::pair<std::string, LinkTypePtr>> env;
    int fresh = 0;

    bool store_legal() const { return lang.base() == Lang::LamRef; }
    std::string fresh_name() { return "w" + std::to_string(fresh++); }

    static bool contains_ref(const LinkTypePtr& t) {
        if (!t) return false;
        if (t->kind == LinkType::Kind::Ref) return true;
        return contains_ref(t->a) || contains_ref(t->b);
    }

    LinkTypePtr small_type(int depth, bool pure_result) {
        LinkTypePtr t = gen_heap_link_type(rng, depth, pure_result || !store_legal());
        return t;
    }

    TermPtr leaf(const LinkTypePtr& want, bool allow_impure) {
        for (std::size_t i = 0; i < env.size(); ++i)
            if (equal(env[i].second, want) && rng.chance(40)) return t_var(lang, env[i].first);
        switch (want->kind) {
        case LinkType::Kind::Unit: return t_unit(lang);
        case LinkType::Kind::Int: return t_int(lang, rng.range(-9, 9));
        case LinkType::Kind::Ref: {
            for (std::size_t i = 0; i < env.size(); ++i)
                if (equal(env[i].second, want)) return t_var(lang, env[i].first);
            // allocation is the only remaining way to produce a ref
            return t_ref(lang, leaf(want->a, allow_impure));
        }
        case LinkType::Kind::ArrowR: {
            std::string x = fresh_name();
            env.emplace_back(x, want->a);
            TermPtr body = leaf(want->b, want->eff == Effect::Impure);
            env.pop_back();
            return t_lam(lang, x, ParamAnnot{want->a}, body);
        }
        default: return t_unit(lang);
        }
    }

    TermPtr gen(const LinkTypePtr& want, int size, bool allow_impure) {
        if (size <= 1) return leaf(want, allow_impure);
        for (int attempt = 0; attempt < 8; ++attempt) {
            switch (rng.range(0, 8)) {
            case 0: return leaf(want, allow_impure);
            case 1:
                if (want->kind == LinkType::Kind::Int) {
                    TermKind op = rng.chance(40)   ? TermKind::Add
                                  : rng.chance(50) ? TermKind::Sub
                                                   : TermKind::Mul;
                    return t_arith(lang, op, gen(lt_int(), size / 2, allow_impure),
                                   gen(lt_int(), size / 2, allow_impure));
                }
                break;
            case 2: {  // binding; refs are invariant, so an annotated redex
                       // pins the declared type whenever one is involved
                LinkTypePtr bound = small_type(2, !allow_impure);
                TermPtr rhs = gen(bound, size / 3, allow_impure);
                std::string x = fresh_name();
                env.emplace_back(x, bound);
                TermPtr body = gen(want, size / 2, allow_impure);
                env.pop_back();
                if (!contains_ref(bound) && rng.chance(50)) return t_let(lang, x, rhs, body);
                return t_app(lang, t_lam(lang, x, ParamAnnot{bound}, body), rhs);
            }
            case 3: {  // call a function from the environment
                std::vector<std::size_t> funs;
                for (std::size_t i = 0; i < env.size(); ++i) {
                    if (env[i].second->kind != LinkType::Kind::ArrowR) continue;
                    if (!equal(env[i].second->b, want)) continue;
                    if (!allow_impure && env[i].second->eff == Effect::Impure) continue;
                    // a heap-pure caller cannot conjure a ref-typed argument
                    if (!allow_impure && contains_ref(env[i].second->a)) {
                        bool have = false;
                        for (const auto& [n, ty] : env)
                            if (equal(ty, env[i].second->a)) have = true;
                        if (!have) continue;
                    }
                    funs.push_back(i);
                }
                if (!funs.empty()) {
                    auto [fname, fty] = env[funs[rng.range(0, int(funs.size()) - 1)]];
                    return t_app(lang, t_var(lang, fname),
                                 gen(fty->a, size - 1, allow_impure));
                }
                break;
            }
            case 4:
                if (want->kind == LinkType::Kind::ArrowR) {
                    std::string x = fresh_name();
                    env.emplace_back(x, want->a);
                    TermPtr body = gen(want->b, size - 1, want->eff == Effect::Impure);
                    env.pop_back();
                    return t_lam(lang, x, ParamAnnot{want->a}, body);
                }
                break;
            case 5:
                if (want->kind == LinkType::Kind::Ref && allow_impure && store_legal())
                    return t_ref(lang, gen(want->a, size - 1, allow_impure));
                break;
            case 6:
                if (want->kind == LinkType::Kind::Unit && allow_impure && store_legal()) {
                    std::vector<std::size_t> cells;
                    for (std::size_t i = 0; i < env.size(); ++i)
                        if (env[i].second->kind == LinkType::Kind::Ref) cells.push_back(i);
                    if (!cells.empty()) {
                        auto [rname, rty] = env[cells[rng.range(0, int(cells.size()) - 1)]];
                        return t_assign(lang, t_var(lang, rname),
                                        gen(rty->a, size - 1, allow_impure));
                    }
                }
                break;
            case 7:
                if (allow_impure && store_legal()) {
                    std::vector<std::size_t> cells;
                    for (std::size_t i = 0; i < env.size(); ++i)
                        if (env[i].second->kind == LinkType::Kind::Ref &&
                            equal(env[i].second->a, want))
                            cells.push_back(i);
                    if (!cells.empty())
                        return t_deref(
                            lang, t_var(lang, env[cells[rng.range(0, int(cells.size()) - 1)]].first));
                }
                break;
            case 8: {
                TermPtr first = gen(small_type(2, !allow_impure), size / 3, allow_impure);
                return t_seq(lang, first, gen(want, size / 2, allow_impure));
            }
            }
        }
        return leaf(want, allow_impure);
    }
};

inline TermPtr gen_linked_term(Rng& rng, LanguageId lang, const LinkTypePtr& want, int size) {
    LinkedGen g{rng, lang, {}, 0};
    return g.gen(want, size, true);
}

// --- target terms with discharged exceptions ----------------------------------------

// Generates closed target terms whose synthesized exception type is void:
// throws appear only as immediately caught scrutinees.  With allow_impure
// false the terms are also heap-pure.
struct TargetGen {
    Rng& rng;
    std::vector<std::pair<std::string, TargetTypePtr>> env;
    int fresh = 0;
    LanguageId lang = LanguageId::target();

    std::string fresh_name() { return "t" + std::to_string(fresh++); }

    TargetTypePtr small_type(int depth, bool allow_impure) {
        int roll = rng.range(0, 99);
        if (depth <= 1) return roll < 50 ? tt_unit() : tt_int();
        if (roll < 20) return tt_unit();
        if (roll < 45) return tt_int();
        if (roll < 60 && allow_impure) return tt_ref(small_type(depth - 1, allow_impure));
        Effect eff = allow_impure && rng.chance(40) ? Effect::Impure : Effect::Pure;
        return tt_arrow(small_type(depth - 1, allow_impure),
                        comp_of(eff, tt_void(), small_type(depth - 1, eff == Effect::Impure)));
    }

    TermPtr leaf(const TargetTypePtr& want) {
        for (std::size_t i = 0; i < env.size(); ++i)
            if (equal(env[i].second, want) && rng.chance(40)) return t_var(lang, env[i].first);
        switch (want->kind) {
        case TargetType::Kind::Unit: return t_unit(lang);
        case TargetType::Kind::Int: return t_int(lang, rng.range(-9, 9));
        case TargetType::Kind::Ref: {
            for (std::size_t i = 0; i < env.size(); ++i)
                if (equal(env[i].second, want)) return t_var(lang, env[i].first);
            return t_ref(lang, leaf(want->a));
        }
        case TargetType::Kind::Arrow: {
            std::string x = fresh_name();
            env.emplace_back(x, want->a);
            TermPtr body = leaf(want->comp->result);
            env.pop_back();
            return t_lam(lang, x, ParamAnnot{want->a}, body);
        }
        default: return t_unit(lang);
        }
    }

    TermPtr gen(const TargetTypePtr& want, int size, bool allow_impure) {
        if (size <= 1) return leaf(want);
        switch (rng.range(0, 6)) {
        case 0: return leaf(want);
        case 1:
            if (want->kind == TargetType::Kind::Int)
                return t_arith(lang, rng.chance(50) ? TermKind::Add : TermKind::Sub,
                               gen(tt_int(), size / 2, allow_impure),
                               gen(tt_int(), size / 2, allow_impure));
            [[fallthrough]];
        case 2: {  // let
            TargetTypePtr bound = small_type(2, allow_impure);
            TermPtr rhs = gen(bound, size / 3, allow_impure);
            std::string x = fresh_name();
            env.emplace_back(x, bound);
            TermPtr body = gen(want, size / 2, allow_impure);
            env.pop_back();
            return t_let(lang, x, rhs, body);
        }
        case 3: {  // discharged throw: catch (throw payload) val/exc
            TargetTypePtr payload_ty = rng.chance(50) ? tt_int() : tt_unit();
            TermPtr payload = gen(payload_ty, size / 4, allow_impure);
            std::string x = fresh_name(), y = fresh_name();
            // the val branch binds void (the throw result); it never runs
            env.emplace_back(x, tt_void());
            TermPtr val_body = gen(want, size / 3, allow_impure);
            env.pop_back();
            env.emplace_back(y, payload_ty);
            TermPtr exc_body = gen(want, size / 3, allow_impure);
            env.pop_back();
            return t_catch(lang, t_throw(lang, payload), x, val_body, y, exc_body);
        }
        case 4: {  // catch over a non-throwing scrutinee
            TermPtr scrut = gen(want, size / 2, allow_impure);
            std::string x = fresh_name(), y = fresh_name();
            env.emplace_back(x, want);
            TermPtr val_body = rng.chance(60) ? t_var(lang, x)
                                              : gen(want, size / 3, allow_impure);
            env.pop_back();
            env.emplace_back(y, tt_void());
            TermPtr exc_body = gen(want, size / 3, allow_impure);
            env.pop_back();
            return t_catch(lang, scrut, x, val_body, y, exc_body);
        }
        case 5:
            if (want->kind == TargetType::Kind::Arrow) {
                std::string x = fresh_name();
                env.emplace_back(x, want->a);
                TermPtr body =
                    gen(want->comp->result, size - 1, want->comp->eff == Effect::Impure);
                env.pop_back();
                return t_lam(lang, x, ParamAnnot{want->a}, body);
            }
            [[fallthrough]];
        case 6:
            if (want->kind == TargetType::Kind::Ref && allow_impure)
                return t_ref(lang, gen(want->a, size - 1, allow_impure));
            if (allow_impure) {  // read or write a live cell
                std::vector<std::size_t> cells;
                for (std::size_t i = 0; i < env.size(); ++i)
                    if (env[i].second->kind == TargetType::Kind::Ref) cells.push_back(i);
                if (!cells.empty()) {
                    auto [rname, rty] = env[cells[rng.range(0, int(cells.size()) - 1)]];
                    if (want->kind == TargetType::Kind::Unit && rng.chance(50))
                        return t_assign(lang, t_var(lang, rname),
                                        gen(rty->a, size - 1, allow_impure));
                    if (equal(rty->a, want)) return t_deref(lang, t_var(lang, rname));
                }
            }
            break;
        }
        return leaf(want);
    }
};

inline TermPtr gen_target_exn0_term(Rng& rng, const TargetTypePtr& want, int size,
                                    bool allow_impure) {
    TargetGen g{rng};
    return g.gen(want, size, allow_impure);
}

// --- straight-line bodies for the cost and terminating extensions --------------------

// A lambda over int whose body always performs exactly n arithmetic steps.
inline TermPtr known_cost_lambda(std::int64_t n, LanguageId lang = LanguageId::lamrefk(Ext::Cost)) {
    TermPtr body = t_var(lang, "x");
    for (std::int64_t i = 0; i < n; ++i)
        body = t_arith(lang, TermKind::Add, body, t_int(lang, 1));
    return t_lam(lang, "x", ParamAnnot{src_int()}, body);
}

// Parameters available to a generated straight-line body: ints and known-cost
// (or terminating) int->int functions.
struct BodyParam {
    std::string name;
    LinkTypePtr type;
    TermPtr sample_value;  // a concrete value inhabiting the type
};

inline std::vector<BodyParam> gen_cost_params(Rng& rng) {
    LanguageId lang = LanguageId::lamrefk(Ext::Cost);
    std::vector<BodyParam> params;
    int n_ints = rng.range(1, 3), n_funs = rng.range(0, 2);
    for (int i = 0; i < n_ints; ++i)
        params.push_back({"a" + std::to_string(i), lt_int(), t_int(lang, rng.range(-9, 9))});
    for (int i = 0; i < n_funs; ++i) {
        std::int64_t cost = rng.range(0, 5);
        params.push_back({"f" + std::to_string(i),
                          lt_arrow_cost(lt_int(), CostBound::known(cost), lt_int()),
                          known_cost_lambda(cost, lang)});
    }
    return params;
}

// Straight-line int-typed body over the given parameters; never touches the
// store, so its inferred cost is a known bound by construction.
inline TermPtr gen_straight_line_body(Rng& rng, const std::vector<BodyParam>& params, int size,
                                      LanguageId lang, bool terminating_calls) {
    auto gen = [&](auto&& self, int budget) -> TermPtr {
        if (budget <= 1) {
            std::vector<const BodyParam*> ints;
            for (const auto& p : params)
                if (p.type->kind == LinkType::Kind::Int) ints.push_back(&p);
            if (!ints.empty() && rng.chance(60))
                return t_var(lang, ints[rng.range(0, int(ints.size()) - 1)]->name);
            return t_int(lang, rng.range(-9, 9));
        }
        switch (rng.range(0, 3)) {
        case 0: return self(self, 1);
        case 1:
            return t_arith(lang, rng.chance(50) ? TermKind::Add : TermKind::Mul,
                           self(self, budget / 2), self(self, budget / 2));
        case 2: {  // let over an int
            TermPtr rhs = self(self, budget / 3);
            // the bound name shadows nothing the generator uses afterwards
            return t_let(lang, "tmp" + std::to_string(rng.range(0, 999)), rhs,
                         self(self, budget / 2));
        }
        default: {  // call a function parameter
            std::vector<const BodyParam*> funs;
            for (const auto& p : params) {
                bool callable = terminating_calls ? p.type->kind == LinkType::Kind::ArrowTerm
                                                  : (p.type->kind == LinkType::Kind::ArrowCost &&
                                                     p.type->cost.is_known());
                if (callable) funs.push_back(&p);
            }
            if (funs.empty()) return self(self, budget / 2);
            const BodyParam* f = funs[rng.range(0, int(funs.size()) - 1)];
            return t_app(lang, t_var(lang, f->name), self(self, budget / 2));
        }
        }
    };
    return gen(gen, size);
}

inline std::vector<BodyParam> gen_terminating_params(Rng& rng) {
    LanguageId lang = LanguageId::lamrefk(Ext::Terminating);
    std::vector<BodyParam> params;
    int n_ints = rng.range(1, 3), n_funs = rng.range(0, 2);
    for (int i = 0; i < n_ints; ++i)
        params.push_back({"a" + std::to_string(i), lt_int(), t_int(lang, rng.range(-9, 9))});
    for (int i = 0; i < n_funs; ++i) {
        std::int64_t steps = rng.range(0, 4);
        params.push_back({"g" + std::to_string(i), lt_arrow_term(lt_int(), lt_int()),
                          known_cost_lambda(steps, lang)});
    }
    return params;
}

// let-free substitution of all parameters by their sample values
inline TermPtr instantiate(const TermPtr& body, const std::vector<BodyParam>& params) {
    TermPtr t = body;
    for (const auto& p : params) t = subst(t, p.name, p.sample_value);
    return t;
}

}  // namespace linkc::testgen
