#include "linkc/target.hpp"

#include <vector>

#include "linkc/syntax.hpp"

namespace linkc {

namespace {

[[noreturn]] void type_fail(const TermPtr& t, const std::string& msg) {
    throw TypeError(t->pos, msg);
}

// All non-void exception types occurring in one computation must agree.
TargetTypePtr merge_exn(const TermPtr& at, const TargetTypePtr& a, const TargetTypePtr& b) {
    if (a->kind == TargetType::Kind::Void0) return b;
    if (b->kind == TargetType::Kind::Void0) return a;
    if (!equal(a, b))
        type_fail(at, "exception types disagree: " + print_type(a) + " vs " + print_type(b));
    return a;
}

struct Checker {
    TypeEnv<TargetTypePtr>& env;
    TargetTypePtr declared_exn;  // may be null: infer
    const StoreTyping* store_ty;

    TargetTypePtr value(const TermPtr& v) {
        switch (v->kind) {
        case TermKind::UnitVal: return tt_unit();
        case TermKind::IntLit: return tt_int();
        case TermKind::Var: {
            const TargetTypePtr* ty = env.lookup(v->var);
            if (!ty) type_fail(v, "unbound variable " + v->var);
            return *ty;
        }
        case TermKind::Loc: {
            if (store_ty) {
                auto it = store_ty->find(v->num);
                if (it != store_ty->end()) return tt_ref(it->second);
            }
            type_fail(v, "location without a store typing");
        }
        case TermKind::Lam: {
            if (!v->annot) type_fail(v, "cannot synthesize the type of an unannotated lambda");
            auto* ty = std::get_if<TargetTypePtr>(&*v->annot);
            if (!ty) type_fail(v, "lambda parameter must carry a target type");
            Scoped<TargetTypePtr> bind(env, v->var, *ty);
            return tt_arrow(*ty, comp(v->a));
        }
        default: type_fail(v, "not a value");
        }
    }

    // checking mode: pushes expected types through binders, arguments, and
    // allocations (refs are invariant, so minimal synthesis is not enough)
    void check(const TermPtr& e, const CompType& expected) {
        auto fit = [&](const CompType& got) {
            if (!comp_le(got, expected))
                type_fail(e, "expected " + print_comp(expected) + ", found " + print_comp(got));
        };
        switch (e->kind) {
        case TermKind::Lam: {
            if (expected.result->kind != TargetType::Kind::Arrow) return fit(comp(e));
            if (!e->annot) {
                Scoped<TargetTypePtr> bind(env, e->var, expected.result->a);
                check(e->a, *expected.result->comp);
                return;
            }
            auto* ty = std::get_if<TargetTypePtr>(&*e->annot);
            if (!ty) type_fail(e, "lambda parameter must carry a target type");
            if (!equal(*ty, expected.result->a))
                type_fail(e, "parameter annotated " + print_type(*ty) +
                                 " but the expected domain is " + print_type(expected.result->a));
            Scoped<TargetTypePtr> bind(env, e->var, *ty);
            check(e->a, *expected.result->comp);
            return;
        }
        case TermKind::App: {
            if (e->a->kind == TermKind::Lam && !e->a->annot) {  // let sugar
                CompType rhs = comp(e->b);
                if (!effect_le(rhs.eff, expected.eff))
                    type_fail(e->b, "binding computation is too effectful here");
                if (rhs.exn->kind != TargetType::Kind::Void0 && !equal(rhs.exn, expected.exn))
                    type_fail(e->b, "binding computation throws " + print_type(rhs.exn));
                Scoped<TargetTypePtr> bind(env, e->a->var, rhs.result);
                check(e->a->a, expected);
                return;
            }
            CompType fun = comp(e->a);
            if (fun.result->kind != TargetType::Kind::Arrow)
                type_fail(e, "expected a function, found " + print_type(fun.result));
            const CompType& latent = *fun.result->comp;
            check(e->b, comp_of(expected.eff, expected.exn, fun.result->a));
            CompType out = comp_of(join(fun.eff, latent.eff),
                                   merge_exn(e, fun.exn, latent.exn), latent.result);
            fit(out);
            return;
        }
        case TermKind::RefNew: {
            if (expected.result->kind != TargetType::Kind::Ref) return fit(comp(e));
            if (!effect_le(Effect::Impure, expected.eff))
                type_fail(e, "allocation in a pure position");
            check(e->a, comp_of(expected.eff, expected.exn, expected.result->a));
            return;
        }
        case TermKind::Add:
        case TermKind::Mul:
        case TermKind::Sub: {
            if (expected.result->kind != TargetType::Kind::Int) return fit(comp(e));
            check(e->a, comp_of(expected.eff, expected.exn, tt_int()));
            check(e->b, comp_of(expected.eff, expected.exn, tt_int()));
            return;
        }
        case TermKind::Assign: {
            CompType cell = comp(e->a);
            if (cell.result->kind != TargetType::Kind::Ref)
                type_fail(e->a, "expected a reference, found " + print_type(cell.result));
            check(e->b, comp_of(expected.eff, expected.exn, cell.result->a));
            fit(comp_of(Effect::Impure, cell.exn, tt_unit()));
            return;
        }
        default: fit(comp(e)); return;
        }
    }

    CompType comp(const TermPtr& e) {
        switch (e->kind) {
        case TermKind::UnitVal:
        case TermKind::IntLit:
        case TermKind::Var:
        case TermKind::Loc:
        case TermKind::Lam:
            // value inclusion: v : E^o_0 tau
            return comp_of(Effect::Pure, tt_void(), value(e));
        case TermKind::App: {
            if (e->a->kind == TermKind::Lam && !e->a->annot) {  // let sugar
                CompType rhs = comp(e->b);
                Scoped<TargetTypePtr> bind(env, e->a->var, rhs.result);
                CompType body = comp(e->a->a);
                return comp_of(join(rhs.eff, body.eff), merge_exn(e, rhs.exn, body.exn),
                               body.result);
            }
            CompType fun = comp(e->a);
            CompType arg = comp(e->b);
            if (fun.result->kind != TargetType::Kind::Arrow)
                type_fail(e, "expected a function, found " + print_type(fun.result));
            const TargetTypePtr& dom = fun.result->a;
            const CompType& latent = *fun.result->comp;
            if (!target_le(arg.result, dom))
                type_fail(e->b, "expected argument of type " + print_type(dom) + ", found " +
                                    print_type(arg.result));
            TargetTypePtr exn = merge_exn(e, merge_exn(e, fun.exn, arg.exn), latent.exn);
            return comp_of(join(fun.eff, arg.eff, latent.eff), exn, latent.result);
        }
        case TermKind::Add:
        case TermKind::Mul:
        case TermKind::Sub: {
            CompType l = comp(e->a);
            CompType r = comp(e->b);
            if (l.result->kind != TargetType::Kind::Int)
                type_fail(e->a, "expected int, found " + print_type(l.result));
            if (r.result->kind != TargetType::Kind::Int)
                type_fail(e->b, "expected int, found " + print_type(r.result));
            return comp_of(join(l.eff, r.eff), merge_exn(e, l.exn, r.exn), tt_int());
        }
        case TermKind::RefNew: {
            CompType init = comp(e->a);
            return comp_of(Effect::Impure, init.exn, tt_ref(init.result));
        }
        case TermKind::Assign: {
            CompType cell = comp(e->a);
            CompType val = comp(e->b);
            if (cell.result->kind != TargetType::Kind::Ref)
                type_fail(e->a, "expected a reference, found " + print_type(cell.result));
            if (!target_le(val.result, cell.result->a))
                type_fail(e->b, "expected " + print_type(cell.result->a) + ", found " +
                                    print_type(val.result));
            return comp_of(Effect::Impure, merge_exn(e, cell.exn, val.exn), tt_unit());
        }
        case TermKind::Deref: {
            CompType cell = comp(e->a);
            if (cell.result->kind != TargetType::Kind::Ref)
                type_fail(e->a, "expected a reference, found " + print_type(cell.result));
            return comp_of(Effect::Impure, cell.exn, cell.result->a);
        }
        case TermKind::Throw: {
            CompType payload = comp(e->a);
            if (declared_exn) {
                if (declared_exn->kind == TargetType::Kind::Void0)
                    type_fail(e, "throw is impossible at exception type void");
                if (!equal(payload.result, declared_exn))
                    type_fail(e, "thrown value has type " + print_type(payload.result) +
                                     " but the declared exception type is " +
                                     print_type(declared_exn));
            }
            // throw e : E^o_texn tau for any tau; void is as good as any.
            return comp_of(payload.eff, merge_exn(e, payload.exn, payload.result), tt_void());
        }
        case TermKind::Catch: {
            CompType scrut = comp(e->a);
            CompType val_branch, exc_branch;
            {
                Scoped<TargetTypePtr> bind(env, e->var, scrut.result);
                val_branch = comp(e->b);
            }
            {
                Scoped<TargetTypePtr> bind(env, e->var2, scrut.exn);
                exc_branch = comp(e->c);
            }
            TargetTypePtr result;
            if (target_le(val_branch.result, exc_branch.result)) result = exc_branch.result;
            else if (target_le(exc_branch.result, val_branch.result)) result = val_branch.result;
            else
                type_fail(e, "catch branches disagree: " + print_type(val_branch.result) +
                                 " vs " + print_type(exc_branch.result));
            // The scrutinee's exception is discharged; its heap effect is not.
            return comp_of(join(scrut.eff, val_branch.eff, exc_branch.eff),
                           merge_exn(e, val_branch.exn, exc_branch.exn), result);
        }
        }
        type_fail(e, "construct outside the target grammar");
    }
};

}  // namespace

TargetTypePtr typecheck_target_value(TypeEnv<TargetTypePtr>& env, const TermPtr& v,
                                     const StoreTyping* store_ty) {
    Checker c{env, nullptr, store_ty};
    return c.value(v);
}

CompType typecheck_target_comp(TypeEnv<TargetTypePtr>& env, const TermPtr& e,
                               TargetTypePtr declared_exn, const StoreTyping* store_ty) {
    Checker c{env, std::move(declared_exn), store_ty};
    return c.comp(e);
}

CompType typecheck_target_comp(const TermPtr& e, TargetTypePtr declared_exn) {
    TypeEnv<TargetTypePtr> env;
    return typecheck_target_comp(env, e, std::move(declared_exn));
}

bool target_checks_at(const TermPtr& e, const CompType& expected) {
    try {
        TypeEnv<TargetTypePtr> env;
        Checker c{env, expected.exn, nullptr};
        c.check(e, expected);
        return true;
    } catch (const TypeError&) {
        return false;
    }
}

// --- evaluator -----------------------------------------------------------------

namespace {

struct Frame {
    enum class Kind {
        AppFun, AppArg, ArithL, ArithR, RefNew, AssignL, AssignR, Deref, Throw, Catch
    };
    Kind kind;
    TermKind op = TermKind::Add;
    TermPtr pending;
    TermPtr value;
    // Catch frame payload
    std::string val_binder, exc_binder;
    TermPtr val_body, exc_body;

    Frame(Kind k, TermKind o = TermKind::Add, TermPtr p = nullptr, TermPtr v = nullptr)
        : kind(k), op(o), pending(std::move(p)), value(std::move(v)) {}
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
    auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
    std::uint64_t r = op == TermKind::Add ? ua + ub : op == TermKind::Mul ? ua * ub : ua - ub;
    return static_cast<std::int64_t>(r);
}

}  // namespace

Outcome eval_target(const TermPtr& t, Store store, std::int64_t fuel, EvalStats* stats) {
    EvalStats local;
    EvalStats& st = stats ? *stats : local;
    std::vector<Frame> stack;
    TermPtr control = t;
    bool control_is_value = false;
    LanguageId lang = LanguageId::target();

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
            case TermKind::Throw:
                stack.push_back({Frame::Kind::Throw, {}, nullptr, nullptr});
                control = control->a;
                continue;
            case TermKind::Catch: {
                Frame f{Frame::Kind::Catch, {}, nullptr, nullptr};
                f.val_binder = control->var;
                f.val_body = control->b;
                f.exc_binder = control->var2;
                f.exc_body = control->c;
                stack.push_back(std::move(f));
                control = control->a;
                continue;
            }
            }
        }

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
        case Frame::Kind::Throw: {
            // unwind to the nearest catch, discarding frames
            TermPtr payload = control;
            bool handled = false;
            while (!stack.empty()) {
                Frame g = std::move(stack.back());
                stack.pop_back();
                if (g.kind == Frame::Kind::Catch) {
                    control = subst(g.exc_body, g.exc_binder, payload);
                    control_is_value = false;
                    handled = true;
                    break;
                }
            }
            if (!handled) {
                Outcome o;
                o.kind = Outcome::Kind::Exception;
                o.term = payload;
                o.store = std::move(store);
                return o;
            }
            break;
        }
        case Frame::Kind::Catch:
            control = subst(f.val_body, f.val_binder, control);
            control_is_value = false;
            break;
        }
    }
}

}  // namespace linkc
