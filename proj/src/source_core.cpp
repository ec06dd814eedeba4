#include "linkc/source_core.hpp"

#include <vector>

#include "linkc/syntax.hpp"

namespace linkc {

// --- type checker ------------------------------------------------------------

namespace {

[[noreturn]] void type_fail(const TermPtr& t, const std::string& msg) {
    throw TypeError(t->pos, msg);
}

SourceTypePtr check(TypeEnv<SourceTypePtr>& env, const TermPtr& t, Lang base) {
    switch (t->kind) {
    case TermKind::UnitVal: return src_unit();
    case TermKind::IntLit: return src_int();
    case TermKind::Var: {
        const SourceTypePtr* ty = env.lookup(t->var);
        if (!ty) type_fail(t, "unbound variable " + t->var);
        return *ty;
    }
    case TermKind::Lam: {
        if (!t->annot) type_fail(t, "cannot synthesize the type of an unannotated lambda");
        auto* src = std::get_if<SourceTypePtr>(&*t->annot);
        if (!src) type_fail(t, "lambda parameter must carry a source type in this language");
        if (!source_type_legal(*src, base))
            type_fail(t, "parameter type " + print_type(*src) + " not in this language");
        Scoped<SourceTypePtr> bind(env, t->var, *src);
        return src_arrow(*src, check(env, t->a, base));
    }
    case TermKind::App: {
        // let sugar: the bound variable's type is synthesized from the rhs.
        if (t->a->kind == TermKind::Lam && !t->a->annot) {
            SourceTypePtr rhs = check(env, t->b, base);
            Scoped<SourceTypePtr> bind(env, t->a->var, rhs);
            return check(env, t->a->a, base);
        }
        SourceTypePtr fun = check(env, t->a, base);
        SourceTypePtr arg = check(env, t->b, base);
        if (fun->kind != SourceType::Kind::Arrow)
            type_fail(t, "expected a function, found " + print_type(fun));
        if (!equal(fun->a, arg))
            type_fail(t, "expected argument of type " + print_type(fun->a) + ", found " +
                             print_type(arg));
        return fun->b;
    }
    case TermKind::Add:
    case TermKind::Mul:
    case TermKind::Sub: {
        SourceTypePtr l = check(env, t->a, base);
        SourceTypePtr r = check(env, t->b, base);
        if (l->kind != SourceType::Kind::Int)
            type_fail(t->a, "expected int, found " + print_type(l));
        if (r->kind != SourceType::Kind::Int)
            type_fail(t->b, "expected int, found " + print_type(r));
        return src_int();
    }
    case TermKind::RefNew: {
        if (base == Lang::Stlc) type_fail(t, "ref is not in this language");
        return src_ref(check(env, t->a, base));
    }
    case TermKind::Assign: {
        if (base == Lang::Stlc) type_fail(t, "assignment is not in this language");
        SourceTypePtr cell = check(env, t->a, base);
        SourceTypePtr val = check(env, t->b, base);
        if (cell->kind != SourceType::Kind::Ref)
            type_fail(t->a, "expected a reference, found " + print_type(cell));
        if (!equal(cell->a, val))
            type_fail(t->b, "expected " + print_type(cell->a) + ", found " + print_type(val));
        return src_unit();
    }
    case TermKind::Deref: {
        if (base == Lang::Stlc) type_fail(t, "dereference is not in this language");
        SourceTypePtr cell = check(env, t->a, base);
        if (cell->kind != SourceType::Kind::Ref)
            type_fail(t->a, "expected a reference, found " + print_type(cell));
        return cell->a;
    }
    default: type_fail(t, "construct outside the source grammar");
    }
}

}  // namespace

SourceTypePtr typecheck_source(TypeEnv<SourceTypePtr>& env, const TermPtr& t, LanguageId lang) {
    if (lang.tag != Lang::Stlc && lang.tag != Lang::LamRef)
        throw TypeError(t->pos, "typecheck_source expects an unextended source language");
    return check(env, t, lang.tag);
}

SourceTypePtr typecheck_source(const TermPtr& t, LanguageId lang) {
    TypeEnv<SourceTypePtr> env;
    return typecheck_source(env, t, lang);
}

// --- evaluator ---------------------------------------------------------------
//
// Small-step machine with an explicit continuation stack, so deep recursion
// (e.g. Landin's knot burning 1e5 fuel) cannot overflow the native stack.

namespace {

struct Frame {
    enum class Kind { AppFun, AppArg, ArithL, ArithR, RefNew, AssignL, AssignR, Deref };
    Kind kind;
    TermKind op = TermKind::Add;  // Arith*
    TermPtr pending;              // expression still to evaluate
    TermPtr value;                // value already computed
};

Outcome stuck(const std::string& reason) {
    Outcome o;
    o.kind = Outcome::Kind::Stuck;
    o.reason = reason;
    return o;
}

Outcome out_of_fuel() {
    Outcome o;
    o.kind = Outcome::Kind::OutOfFuel;
    return o;
}

std::int64_t apply_arith(TermKind op, std::int64_t a, std::int64_t b) {
    // 64-bit two's-complement wrap-around.
    auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
    std::uint64_t r = op == TermKind::Add ? ua + ub : op == TermKind::Mul ? ua * ub : ua - ub;
    return static_cast<std::int64_t>(r);
}

}  // namespace

Outcome eval_source(const TermPtr& t, LanguageId lang, std::int64_t fuel, EvalStats* stats) {
    EvalStats local;
    EvalStats& st = stats ? *stats : local;
    Store store;
    std::vector<Frame> stack;
    TermPtr control = t;
    bool control_is_value = false;

    auto charge = [&]() -> bool { return --fuel >= 0; };

    while (true) {
        if (!control_is_value) {
            switch (control->kind) {
            case TermKind::UnitVal:
            case TermKind::IntLit:
            case TermKind::Lam:
            case TermKind::Loc: control_is_value = true; continue;
            case TermKind::Var: return stuck("free variable " + control->var);
            case TermKind::App:
                stack.push_back({Frame::Kind::AppFun, {}, control->b, nullptr});
                control = control->a;
                continue;
            case TermKind::Add:
            case TermKind::Mul:
            case TermKind::Sub:
                stack.push_back({Frame::Kind::ArithL, control->kind, control->b, nullptr});
                control = control->a;
                continue;
            case TermKind::RefNew:
                stack.push_back({Frame::Kind::RefNew, {}, nullptr, nullptr});
                control = control->a;
                continue;
            case TermKind::Assign:
                stack.push_back({Frame::Kind::AssignL, {}, control->b, nullptr});
                control = control->a;
                continue;
            case TermKind::Deref:
                stack.push_back({Frame::Kind::Deref, {}, nullptr, nullptr});
                control = control->a;
                continue;
            default: return stuck("construct outside the source grammar");
            }
        }

        // control holds a value
        if (stack.empty()) {
            Outcome o;
            o.kind = Outcome::Kind::Value;
            o.term = control;
            o.store = std::move(store);
            return o;
        }
        Frame f = std::move(stack.back());
        stack.pop_back();
        switch (f.kind) {
        case Frame::Kind::AppFun:
            stack.push_back({Frame::Kind::AppArg, {}, nullptr, control});
            control = f.pending;
            control_is_value = false;
            break;
        case Frame::Kind::AppArg: {
            const TermPtr& fun = f.value;
            if (fun->kind != TermKind::Lam) return stuck("application of a non-function");
            if (!charge()) return out_of_fuel();
            ++st.beta_steps;
            control = subst(fun->a, fun->var, control);
            control_is_value = false;
            break;
        }
        case Frame::Kind::ArithL:
            stack.push_back({Frame::Kind::ArithR, f.op, nullptr, control});
            control = f.pending;
            control_is_value = false;
            break;
        case Frame::Kind::ArithR: {
            if (f.value->kind != TermKind::IntLit || control->kind != TermKind::IntLit)
                return stuck("arithmetic on a non-integer");
            if (!charge()) return out_of_fuel();
            ++st.arith_ops;
            control = t_int(lang, apply_arith(f.op, f.value->num, control->num));
            break;
        }
        case Frame::Kind::RefNew: {
            if (!charge()) return out_of_fuel();
            ++st.store_ops;
            control = t_loc(lang, store.alloc(control));
            break;
        }
        case Frame::Kind::AssignL:
            stack.push_back({Frame::Kind::AssignR, {}, nullptr, control});
            control = f.pending;
            control_is_value = false;
            break;
        case Frame::Kind::AssignR: {
            if (f.value->kind != TermKind::Loc) return stuck("assignment to a non-location");
            if (!charge()) return out_of_fuel();
            ++st.store_ops;
            if (!store.write(f.value->num, control)) return stuck("dangling location");
            control = t_unit(lang);
            break;
        }
        case Frame::Kind::Deref: {
            if (control->kind != TermKind::Loc) return stuck("dereference of a non-location");
            if (!charge()) return out_of_fuel();
            ++st.store_ops;
            const TermPtr* v = store.read(control->num);
            if (!v) return stuck("dangling location");
            control = *v;
            break;
        }
        }
    }
}

}  // namespace linkc
