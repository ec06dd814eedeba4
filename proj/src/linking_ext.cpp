#include "linkc/linking_ext.hpp"

#include "linkc/syntax.hpp"

namespace linkc {

namespace {
std::string cost_str(const CostBound& c) {
    return c.is_known() ? std::to_string(*c.n) : std::string("unknown");
}
}  // namespace

CostMismatch::CostMismatch(SrcPos p, CostBound want, CostBound got)
    : TypeError(p, "cost mismatch: annotated " + cost_str(want) + ", inferred " + cost_str(got)),
      expected(want), inferred(got) {}

// --- kappa+ / kappa- -----------------------------------------------------------

LinkTypePtr kappa_plus(const SourceTypePtr& t, LanguageId lang, Ext ext) {
    Lang base = lang.base();
    switch (t->kind) {
    case SourceType::Kind::Unit: return lt_unit();
    case SourceType::Kind::Int: return lt_int();
    case SourceType::Kind::Ref:
        if (base == Lang::Stlc)
            throw IllegalType({}, "ref " + print_type(t->a) + " is not a type of the pure calculus");
        return lt_ref(kappa_plus(t->a, lang, ext));
    case SourceType::Kind::Arrow: {
        LinkTypePtr d = kappa_plus(t->a, lang, ext);
        LinkTypePtr r = kappa_plus(t->b, lang, ext);
        switch (ext) {
        case Ext::HeapEffect:
            return lt_arrow_r(d, base == Lang::Stlc ? Effect::Pure : Effect::Impure, r);
        case Ext::Linear: return lt_arrow(d, r);
        case Ext::Terminating: return lt_arrow(d, r);  // default arrow makes no termination claim
        case Ext::Cost: return lt_arrow_cost(d, CostBound::unknown(), r);
        }
    }
    }
    throw IllegalType({}, "malformed source type");
}

SourceTypePtr kappa_minus(const LinkTypePtr& t, LanguageId lang, Ext ext) {
    Lang base = lang.base();
    switch (t->kind) {
    case LinkType::Kind::Unit: return src_unit();
    case LinkType::Kind::Int: return src_int();
    case LinkType::Kind::Ref:
        // The pure calculus has no refs: the figure projects ref t to the
        // projection of t.
        if (base == Lang::Stlc) return kappa_minus(t->a, lang, ext);
        return src_ref(kappa_minus(t->a, lang, ext));
    case LinkType::Kind::Linear: return kappa_minus(t->a, lang, ext);
    case LinkType::Kind::ArrowR:
    case LinkType::Kind::Arrow:
    case LinkType::Kind::ArrowTerm:
    case LinkType::Kind::ArrowCost:
        return src_arrow(kappa_minus(t->a, lang, ext), kappa_minus(t->b, lang, ext));
    }
    throw IllegalType({}, "malformed linking type");
}

// --- subtyping -----------------------------------------------------------------

namespace {
bool is_arrow_kind(LinkType::Kind k) {
    return k == LinkType::Kind::ArrowR || k == LinkType::Kind::Arrow ||
           k == LinkType::Kind::ArrowTerm || k == LinkType::Kind::ArrowCost;
}
}  // namespace

bool link_le(const LinkTypePtr& s, const LinkTypePtr& t) {
    if (equal(s, t)) return true;
    if (!is_arrow_kind(s->kind) || !is_arrow_kind(t->kind)) return false;
    if (!equal(s->a, t->a)) return false;
    // terminating arrows may stand in for plain ones, known costs for unknown
    if (s->kind == LinkType::Kind::ArrowR && t->kind == LinkType::Kind::ArrowR)
        return effect_le(s->eff, t->eff) && link_le(s->b, t->b);
    if ((s->kind == LinkType::Kind::ArrowTerm || s->kind == LinkType::Kind::Arrow) &&
        t->kind == LinkType::Kind::Arrow)
        return link_le(s->b, t->b);
    if (s->kind == LinkType::Kind::ArrowTerm && t->kind == LinkType::Kind::ArrowTerm)
        return link_le(s->b, t->b);
    if (s->kind == LinkType::Kind::ArrowCost && t->kind == LinkType::Kind::ArrowCost)
        return (!t->cost.is_known() || s->cost == t->cost) && link_le(s->b, t->b);
    return false;
}

// --- extended checker ------------------------------------------------------------

namespace {

[[noreturn]] void type_fail(const TermPtr& t, const std::string& msg) {
    throw TypeError(t->pos, msg);
}

struct Synth {
    LinkTypePtr type;
    Effect eff = Effect::Pure;
    TermPtr elab;
};

struct Checked {
    Effect eff = Effect::Pure;
    TermPtr elab;
};

struct LinkedChecker {
    TypeEnv<LinkTypePtr>& env;
    LanguageId lang;
    Ext ext;

    bool store_ops_legal() const {
        return lang.base() == Lang::LamRef || ext == Ext::HeapEffect;
    }

    // Latent effect a call through this arrow contributes to the caller.
    static Effect latent_effect(const LinkTypePtr& arrow) {
        switch (arrow->kind) {
        case LinkType::Kind::ArrowR: return arrow->eff;
        case LinkType::Kind::ArrowTerm: return Effect::Pure;  // store-free fragment
        case LinkType::Kind::ArrowCost:
            return arrow->cost.is_known() ? Effect::Pure : Effect::Impure;
        default: return Effect::Impure;  // effect-less arrows make no purity claim
        }
    }

    LinkTypePtr resolve_annot(const TermPtr& lam) {
        if (auto* src = std::get_if<SourceTypePtr>(&*lam->annot)) {
            if (!source_type_legal(*src, lang.base()))
                type_fail(lam, "parameter type " + print_type(*src) + " not in this language");
            return kappa_plus(*src, lang, ext);
        }
        if (auto* lt = std::get_if<LinkTypePtr>(&*lam->annot)) {
            if (!link_type_legal(*lt, ext))
                throw ExtensionConflict(lam->pos, "linking type " + print_type(*lt) +
                                                      " does not belong to the " + ext_name(ext) +
                                                      " extension");
            return *lt;
        }
        type_fail(lam, "target-type annotation outside the target language");
    }

    void enforce_linear_use(const TermPtr& at, const std::string& binder,
                            const LinkTypePtr& binder_ty, const TermPtr& body) {
        if (ext != Ext::Linear || binder_ty->kind != LinkType::Kind::Linear) return;
        int uses = count_free_occurrences(body, binder);
        if (uses != 1) throw LinearityViolation(at->pos, binder, uses);
    }

    Synth synth(const TermPtr& t) {
        switch (t->kind) {
        case TermKind::UnitVal: return {lt_unit(), Effect::Pure, t};
        case TermKind::IntLit: return {lt_int(), Effect::Pure, t};
        case TermKind::Var: {
            const LinkTypePtr* ty = env.lookup(t->var);
            if (!ty) type_fail(t, "unbound variable " + t->var);
            return {*ty, Effect::Pure, t};
        }
        case TermKind::Lam: {
            if (!t->annot) type_fail(t, "cannot synthesize the type of an unannotated lambda");
            LinkTypePtr param = resolve_annot(t);
            Synth body;
            {
                Scoped<LinkTypePtr> bind(env, t->var, param);
                body = synth(t->a);
            }
            enforce_linear_use(t, t->var, param, t->a);
            TermPtr elab = t_lam(t->lang, t->var, ParamAnnot{param}, body.elab, t->pos);
            switch (ext) {
            case Ext::HeapEffect:
                return {lt_arrow_r(param, body.eff, body.type), Effect::Pure, elab};
            case Ext::Linear: return {lt_arrow(param, body.type), Effect::Pure, elab};
            case Ext::Terminating: {
                Scoped<LinkTypePtr> bind(env, t->var, param);
                bool terminates = check_termination_in(t->a);
                return {terminates ? lt_arrow_term(param, body.type)
                                   : lt_arrow(param, body.type),
                        Effect::Pure, elab};
            }
            case Ext::Cost: {
                Scoped<LinkTypePtr> bind(env, t->var, param);
                CostBound c = infer_cost_in(t->a);
                return {lt_arrow_cost(param, c, body.type), Effect::Pure, elab};
            }
            }
            type_fail(t, "unreachable");
        }
        case TermKind::App: {
            if (t->a->kind == TermKind::Lam && !t->a->annot) {  // let sugar
                Synth rhs = synth(t->b);
                Synth body;
                {
                    Scoped<LinkTypePtr> bind(env, t->a->var, rhs.type);
                    body = synth(t->a->a);
                }
                enforce_linear_use(t, t->a->var, rhs.type, t->a->a);
                TermPtr lam = t_lam(t->a->lang, t->a->var, std::nullopt, body.elab, t->a->pos);
                return {body.type, join(rhs.eff, body.eff),
                        t_app(t->lang, lam, rhs.elab, t->pos)};
            }
            Synth fun = synth(t->a);
            LinkTypePtr callee = fun.type;
            if (callee->kind == LinkType::Kind::Linear) callee = callee->a;
            if (!is_arrow_kind(callee->kind))
                type_fail(t, "expected a function, found " + print_type(fun.type));
            Checked arg = check(t->b, callee->a);
            return {callee->b, join(fun.eff, arg.eff, latent_effect(callee)),
                    t_app(t->lang, fun.elab, arg.elab, t->pos)};
        }
        case TermKind::Add:
        case TermKind::Mul:
        case TermKind::Sub: {
            Checked l = check(t->a, lt_int());
            Checked r = check(t->b, lt_int());
            return {lt_int(), join(l.eff, r.eff),
                    t_arith(t->lang, t->kind, l.elab, r.elab, t->pos)};
        }
        case TermKind::RefNew: {
            if (!store_ops_legal()) type_fail(t, "ref is not in this language");
            Synth init = synth(t->a);
            return {lt_ref(init.type), Effect::Impure, t_ref(t->lang, init.elab, t->pos)};
        }
        case TermKind::Assign: {
            if (!store_ops_legal()) type_fail(t, "assignment is not in this language");
            Synth cell = synth(t->a);
            if (cell.type->kind != LinkType::Kind::Ref)
                type_fail(t->a, "expected a reference, found " + print_type(cell.type));
            Checked val = check(t->b, cell.type->a);
            return {lt_unit(), Effect::Impure, t_assign(t->lang, cell.elab, val.elab, t->pos)};
        }
        case TermKind::Deref: {
            if (!store_ops_legal()) type_fail(t, "dereference is not in this language");
            Synth cell = synth(t->a);
            if (cell.type->kind != LinkType::Kind::Ref)
                type_fail(t->a, "expected a reference, found " + print_type(cell.type));
            return {cell.type->a, Effect::Impure, t_deref(t->lang, cell.elab, t->pos)};
        }
        default: type_fail(t, "construct outside the extended grammar");
        }
    }

    Checked check(const TermPtr& t, const LinkTypePtr& expected) {
        // lambdas checked against arrow types take their domains from the
        // expected type; a written source annotation must project to match.
        LinkTypePtr shape = expected;
        if (shape->kind == LinkType::Kind::Linear) shape = shape->a;
        if (t->kind == TermKind::Lam && is_arrow_kind(shape->kind)) {
            const LinkTypePtr& dom = shape->a;
            if (t->annot) {
                if (auto* src = std::get_if<SourceTypePtr>(&*t->annot)) {
                    SourceTypePtr view = kappa_minus(dom, lang, ext);
                    if (!equal(view, *src))
                        type_fail(t, "parameter annotated " + print_type(*src) +
                                         " but the expected domain is " + print_type(dom) +
                                         " (source view " + print_type(view) + ")");
                } else if (auto* lt = std::get_if<LinkTypePtr>(&*t->annot)) {
                    if (!equal(*lt, dom))
                        type_fail(t, "parameter annotated " + print_type(*lt) +
                                         " but the expected domain is " + print_type(dom));
                } else {
                    type_fail(t, "target-type annotation outside the target language");
                }
            }
            Checked body;
            {
                Scoped<LinkTypePtr> bind(env, t->var, dom);
                body = check(t->a, shape->b);
                switch (shape->kind) {
                case LinkType::Kind::ArrowR:
                    if (!effect_le(body.eff, shape->eff))
                        type_fail(t->a, "body is impure but the arrow promises a pure computation");
                    break;
                case LinkType::Kind::ArrowTerm:
                    if (!check_termination_in(t->a))
                        throw TerminationCheckFailed(
                            t->pos, "body fails the syntactic termination check");
                    break;
                case LinkType::Kind::ArrowCost:
                    if (shape->cost.is_known()) {
                        CostBound got = infer_cost_in(t->a);
                        if (!(got == shape->cost)) throw CostMismatch(t->pos, shape->cost, got);
                    }
                    break;
                default: break;
                }
            }
            enforce_linear_use(t, t->var, dom, t->a);
            return {Effect::Pure, t_lam(t->lang, t->var, ParamAnnot{dom}, body.elab, t->pos)};
        }
        if (t->kind == TermKind::App && t->a->kind == TermKind::Lam && !t->a->annot) {
            Synth rhs = synth(t->b);
            Checked body;
            {
                Scoped<LinkTypePtr> bind(env, t->a->var, rhs.type);
                body = check(t->a->a, expected);
            }
            enforce_linear_use(t, t->a->var, rhs.type, t->a->a);
            TermPtr lam = t_lam(t->a->lang, t->a->var, std::nullopt, body.elab, t->a->pos);
            return {join(rhs.eff, body.eff), t_app(t->lang, lam, rhs.elab, t->pos)};
        }
        if (t->kind == TermKind::App && t->a->kind == TermKind::Lam && t->a->annot) {
            // annotated redex: bind at the declared type, push the expectation
            // into the body
            LinkTypePtr dom = resolve_annot(t->a);
            Checked arg = check(t->b, dom);
            Checked body;
            {
                Scoped<LinkTypePtr> bind(env, t->a->var, dom);
                body = check(t->a->a, expected);
            }
            enforce_linear_use(t, t->a->var, dom, t->a->a);
            TermPtr lam = t_lam(t->a->lang, t->a->var, ParamAnnot{dom}, body.elab, t->a->pos);
            return {join(arg.eff, body.eff), t_app(t->lang, lam, arg.elab, t->pos)};
        }
        // refs are invariant, so the expected content type must flow into the
        // allocation rather than being synthesized minimally
        if (t->kind == TermKind::RefNew && expected->kind == LinkType::Kind::Ref) {
            if (!store_ops_legal()) type_fail(t, "ref is not in this language");
            Checked init = check(t->a, expected->a);
            return {Effect::Impure, t_ref(t->lang, init.elab, t->pos)};
        }
        Synth got = synth(t);
        if (!link_le(got.type, expected))
            type_fail(t, "expected " + print_type(expected) + ", found " + print_type(got.type));
        return {got.eff, got.elab};
    }

    // --- termination fragment ----------------------------------------------

    bool check_termination_in(const TermPtr& t) {
        switch (t->kind) {
        case TermKind::UnitVal:
        case TermKind::IntLit:
        case TermKind::Var: return true;
        case TermKind::RefNew:
        case TermKind::Assign:
        case TermKind::Deref:
        case TermKind::Loc:
        case TermKind::Throw:
        case TermKind::Catch: return false;
        case TermKind::Add:
        case TermKind::Mul:
        case TermKind::Sub: return check_termination_in(t->a) && check_termination_in(t->b);
        case TermKind::Lam: {
            LinkTypePtr param;
            try {
                param = t->annot ? resolve_annot(t) : nullptr;
            } catch (const TypeError&) {
                return false;
            }
            if (!param) return false;  // bare unannotated lambda: only let-bound forms are known
            Scoped<LinkTypePtr> bind(env, t->var, param);
            return check_termination_in(t->a);
        }
        case TermKind::App: {
            if (t->a->kind == TermKind::Lam && !t->a->annot) {  // let sugar
                if (!check_termination_in(t->b)) return false;
                try {
                    Synth rhs = synth(t->b);
                    Scoped<LinkTypePtr> bind(env, t->a->var, rhs.type);
                    return check_termination_in(t->a->a);
                } catch (const TypeError&) {
                    return false;
                }
            }
            if (!check_termination_in(t->a) || !check_termination_in(t->b)) return false;
            try {
                Synth fun = synth(t->a);
                LinkTypePtr callee = fun.type;
                if (callee->kind == LinkType::Kind::Linear) callee = callee->a;
                return callee->kind == LinkType::Kind::ArrowTerm;
            } catch (const TypeError&) {
                return false;
            }
        }
        }
        return false;
    }

    // --- straight-line cost ---------------------------------------------------

    CostBound infer_cost_in(const TermPtr& t) {
        switch (t->kind) {
        case TermKind::UnitVal:
        case TermKind::IntLit:
        case TermKind::Var:
        case TermKind::Lam: return CostBound::known(0);  // values cost nothing to form
        case TermKind::Add:
        case TermKind::Mul:
        case TermKind::Sub: {
            CostBound l = infer_cost_in(t->a);
            CostBound r = infer_cost_in(t->b);
            if (!l.is_known() || !r.is_known()) return CostBound::unknown();
            return CostBound::known(*l.n + *r.n + 1);
        }
        case TermKind::App: {
            if (t->a->kind == TermKind::Lam && !t->a->annot) {  // let: one beta
                CostBound rhs = infer_cost_in(t->b);
                if (!rhs.is_known()) return CostBound::unknown();
                try {
                    Synth bound = synth(t->b);
                    Scoped<LinkTypePtr> bind(env, t->a->var, bound.type);
                    CostBound body = infer_cost_in(t->a->a);
                    if (!body.is_known()) return CostBound::unknown();
                    return CostBound::known(*rhs.n + *body.n + 1);
                } catch (const TypeError&) {
                    return CostBound::unknown();
                }
            }
            CostBound fun = infer_cost_in(t->a);
            CostBound arg = infer_cost_in(t->b);
            if (!fun.is_known() || !arg.is_known()) return CostBound::unknown();
            try {
                Synth callee = synth(t->a);
                LinkTypePtr arrow = callee.type;
                if (arrow->kind == LinkType::Kind::Linear) arrow = arrow->a;
                if (arrow->kind != LinkType::Kind::ArrowCost || !arrow->cost.is_known())
                    return CostBound::unknown();
                return CostBound::known(*fun.n + *arg.n + *arrow->cost.n + 1);
            } catch (const TypeError&) {
                return CostBound::unknown();
            }
        }
        default: return CostBound::unknown();  // store ops and control effects
        }
    }
};

}  // namespace

LinkJudgment typecheck_linked(TypeEnv<LinkTypePtr>& env, const TermPtr& t, LanguageId lang,
                              Ext ext, std::optional<LinkTypePtr> annotation) {
    if (lang.extension && *lang.extension != ext)
        throw ExtensionConflict(t->pos, "term language carries the " + ext_name(*lang.extension) +
                                            " extension but was checked under " + ext_name(ext));
    LinkedChecker checker{env, lang, ext};
    if (annotation) {
        if (!link_type_legal(*annotation, ext))
            throw ExtensionConflict(t->pos, "annotation " + print_type(*annotation) +
                                                " does not belong to the " + ext_name(ext) +
                                                " extension");
        Checked c = checker.check(t, *annotation);
        return {c.elab, *annotation, c.eff};
    }
    Synth s = checker.synth(t);
    return {s.elab, s.type, s.eff};
}

LinkJudgment typecheck_linked(const TermPtr& t, LanguageId lang, Ext ext,
                              std::optional<LinkTypePtr> annotation) {
    TypeEnv<LinkTypePtr> env;
    return typecheck_linked(env, t, lang, ext, std::move(annotation));
}

SourceAudit check_programmer_source(const TermPtr& t, LanguageId lang, Ext) {
    SourceAudit audit;
    bool refs_ok = lang.base() == Lang::LamRef;
    auto walk = [&](auto&& self, const TermPtr& node) -> void {
        if (!node) return;
        switch (node->kind) {
        case TermKind::RefNew:
        case TermKind::Assign:
        case TermKind::Deref:
            if (!refs_ok) audit.violations.push_back(node);
            break;
        case TermKind::Loc:
        case TermKind::Throw:
        case TermKind::Catch: audit.violations.push_back(node); break;
        default: break;
        }
        self(self, node->a);
        self(self, node->b);
        self(self, node->c);
    };
    walk(walk, t);
    audit.ok = audit.violations.empty();
    return audit;
}

bool check_termination(TypeEnv<LinkTypePtr>& env, const TermPtr& body) {
    LinkedChecker checker{env, LanguageId::lamrefk(Ext::Terminating), Ext::Terminating};
    return checker.check_termination_in(body);
}

bool check_termination(const TermPtr& body) {
    TypeEnv<LinkTypePtr> env;
    return check_termination(env, body);
}

CostBound infer_cost(TypeEnv<LinkTypePtr>& env, const TermPtr& body) {
    LinkedChecker checker{env, LanguageId::lamrefk(Ext::Cost), Ext::Cost};
    return checker.infer_cost_in(body);
}

CostBound infer_cost(const TermPtr& body) {
    TypeEnv<LinkTypePtr> env;
    return infer_cost(env, body);
}

}  // namespace linkc
