#include "linkc/term.hpp"

namespace linkc {

namespace {
std::shared_ptr<Term> mk(TermKind k, LanguageId lang, SrcPos pos) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->lang = lang;
    t->pos = pos;
    return t;
}
}  // namespace

TermPtr t_unit(LanguageId lang, SrcPos pos) { return mk(TermKind::UnitVal, lang, pos); }

TermPtr t_int(LanguageId lang, std::int64_t n, SrcPos pos) {
    auto t = mk(TermKind::IntLit, lang, pos);
    t->num = n;
    return t;
}

TermPtr t_var(LanguageId lang, std::string name, SrcPos pos) {
    auto t = mk(TermKind::Var, lang, pos);
    t->var = std::move(name);
    return t;
}

TermPtr t_lam(LanguageId lang, std::string binder, std::optional<ParamAnnot> annot, TermPtr body,
              SrcPos pos) {
    auto t = mk(TermKind::Lam, lang, pos);
    t->var = std::move(binder);
    t->annot = std::move(annot);
    t->a = std::move(body);
    return t;
}

TermPtr t_app(LanguageId lang, TermPtr fun, TermPtr arg, SrcPos pos) {
    auto t = mk(TermKind::App, lang, pos);
    t->a = std::move(fun);
    t->b = std::move(arg);
    return t;
}

TermPtr t_arith(LanguageId lang, TermKind op, TermPtr lhs, TermPtr rhs, SrcPos pos) {
    auto t = mk(op, lang, pos);
    t->a = std::move(lhs);
    t->b = std::move(rhs);
    return t;
}

TermPtr t_ref(LanguageId lang, TermPtr init, SrcPos pos) {
    auto t = mk(TermKind::RefNew, lang, pos);
    t->a = std::move(init);
    return t;
}

TermPtr t_assign(LanguageId lang, TermPtr loc, TermPtr value, SrcPos pos) {
    auto t = mk(TermKind::Assign, lang, pos);
    t->a = std::move(loc);
    t->b = std::move(value);
    return t;
}

TermPtr t_deref(LanguageId lang, TermPtr loc, SrcPos pos) {
    auto t = mk(TermKind::Deref, lang, pos);
    t->a = std::move(loc);
    return t;
}

TermPtr t_loc(LanguageId lang, std::int64_t index) {
    auto t = mk(TermKind::Loc, lang, {});
    t->num = index;
    return t;
}

TermPtr t_throw(LanguageId lang, TermPtr value, SrcPos pos) {
    auto t = mk(TermKind::Throw, lang, pos);
    t->a = std::move(value);
    return t;
}

TermPtr t_catch(LanguageId lang, TermPtr scrutinee, std::string val_binder, TermPtr val_body,
                std::string exc_binder, TermPtr exc_body, SrcPos pos) {
    auto t = mk(TermKind::Catch, lang, pos);
    t->a = std::move(scrutinee);
    t->var = std::move(val_binder);
    t->b = std::move(val_body);
    t->var2 = std::move(exc_binder);
    t->c = std::move(exc_body);
    return t;
}

TermPtr t_let(LanguageId lang, std::string binder, TermPtr rhs, TermPtr body, SrcPos pos) {
    return t_app(lang, t_lam(lang, std::move(binder), std::nullopt, std::move(body), pos),
                 std::move(rhs), pos);
}

TermPtr t_seq(LanguageId lang, TermPtr first, TermPtr rest, SrcPos pos) {
    return t_let(lang, kSeqBinder, std::move(first), std::move(rest), pos);
}

bool is_value(const Term& t) {
    switch (t.kind) {
    case TermKind::UnitVal:
    case TermKind::IntLit:
    case TermKind::Lam:
    case TermKind::Loc: return true;
    default: return false;
    }
}

namespace {
bool annot_equal(const std::optional<ParamAnnot>& x, const std::optional<ParamAnnot>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    if (x->index() != y->index()) return false;
    if (auto* s = std::get_if<SourceTypePtr>(&*x)) return equal(*s, std::get<SourceTypePtr>(*y));
    if (auto* l = std::get_if<LinkTypePtr>(&*x)) return equal(*l, std::get<LinkTypePtr>(*y));
    return equal(std::get<TargetTypePtr>(*x), std::get<TargetTypePtr>(*y));
}
}  // namespace

bool equal(const TermPtr& x, const TermPtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->num != y->num || x->var != y->var || x->var2 != y->var2)
        return false;
    if (!annot_equal(x->annot, y->annot)) return false;
    return equal(x->a, y->a) && equal(x->b, y->b) && equal(x->c, y->c);
}

TermPtr subst(const TermPtr& t, const std::string& name, const TermPtr& value) {
    if (!t) return t;
    switch (t->kind) {
    case TermKind::Var: return t->var == name ? value : t;
    case TermKind::UnitVal:
    case TermKind::IntLit:
    case TermKind::Loc: return t;
    case TermKind::Lam: {
        if (t->var == name) return t;  // shadowed
        auto body = subst(t->a, name, value);
        if (body == t->a) return t;
        return t_lam(t->lang, t->var, t->annot, body, t->pos);
    }
    case TermKind::Catch: {
        auto scrut = subst(t->a, name, value);
        auto vb = t->var == name ? t->b : subst(t->b, name, value);
        auto eb = t->var2 == name ? t->c : subst(t->c, name, value);
        if (scrut == t->a && vb == t->b && eb == t->c) return t;
        return t_catch(t->lang, scrut, t->var, vb, t->var2, eb, t->pos);
    }
    default: {
        auto a = subst(t->a, name, value);
        auto b = subst(t->b, name, value);
        if (a == t->a && b == t->b) return t;
        auto n = std::make_shared<Term>(*t);
        n->a = a;
        n->b = b;
        return n;
    }
    }
}

int count_free_occurrences(const TermPtr& t, const std::string& name) {
    if (!t) return 0;
    switch (t->kind) {
    case TermKind::Var: return t->var == name ? 1 : 0;
    case TermKind::Lam: return t->var == name ? 0 : count_free_occurrences(t->a, name);
    case TermKind::Catch: {
        int n = count_free_occurrences(t->a, name);
        if (t->var != name) n += count_free_occurrences(t->b, name);
        if (t->var2 != name) n += count_free_occurrences(t->c, name);
        return n;
    }
    default:
        return count_free_occurrences(t->a, name) + count_free_occurrences(t->b, name) +
               count_free_occurrences(t->c, name);
    }
}

namespace {
bool closed_under(const TermPtr& t, std::vector<std::string>& bound) {
    if (!t) return true;
    switch (t->kind) {
    case TermKind::Var:
        for (auto it = bound.rbegin(); it != bound.rend(); ++it)
            if (*it == t->var) return true;
        return false;
    case TermKind::Lam: {
        bound.push_back(t->var);
        bool ok = closed_under(t->a, bound);
        bound.pop_back();
        return ok;
    }
    case TermKind::Catch: {
        if (!closed_under(t->a, bound)) return false;
        bound.push_back(t->var);
        bool ok = closed_under(t->b, bound);
        bound.pop_back();
        if (!ok) return false;
        bound.push_back(t->var2);
        ok = closed_under(t->c, bound);
        bound.pop_back();
        return ok;
    }
    default:
        return closed_under(t->a, bound) && closed_under(t->b, bound) && closed_under(t->c, bound);
    }
}
}  // namespace

bool is_closed(const TermPtr& t) {
    std::vector<std::string> bound;
    return closed_under(t, bound);
}

int term_size(const TermPtr& t) {
    if (!t) return 0;
    return 1 + term_size(t->a) + term_size(t->b) + term_size(t->c);
}

}  // namespace linkc
