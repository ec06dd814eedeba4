#include "linkc/types.hpp"

#include <algorithm>

namespace linkc {

std::string lang_name(Lang l) {
    switch (l) {
    case Lang::Stlc: return "stlc";
    case Lang::LamRef: return "lamref";
    case Lang::StlcK: return "stlck";
    case Lang::LamRefK: return "lrefk";
    case Lang::Target: return "target";
    }
    return "?";
}

std::string ext_name(Ext e) {
    switch (e) {
    case Ext::HeapEffect: return "heap-effect";
    case Ext::Linear: return "linear";
    case Ext::Terminating: return "terminating";
    case Ext::Cost: return "cost";
    }
    return "?";
}

std::optional<Lang> lang_from_name(const std::string& s) {
    if (s == "stlc") return Lang::Stlc;
    if (s == "lamref" || s == "lref") return Lang::LamRef;
    if (s == "stlck") return Lang::StlcK;
    if (s == "lrefk" || s == "lamrefk") return Lang::LamRefK;
    if (s == "target" || s == "tgt") return Lang::Target;
    return std::nullopt;
}

std::optional<Ext> ext_from_name(const std::string& s) {
    if (s == "heap-effect" || s == "heap") return Ext::HeapEffect;
    if (s == "linear") return Ext::Linear;
    if (s == "terminating" || s == "term") return Ext::Terminating;
    if (s == "cost") return Ext::Cost;
    return std::nullopt;
}

// --- source types ----------------------------------------------------------

namespace {
SourceTypePtr mk_src(SourceType::Kind k, SourceTypePtr a = nullptr, SourceTypePtr b = nullptr) {
    auto t = std::make_shared<SourceType>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}
}  // namespace

SourceTypePtr src_unit() {
    static const SourceTypePtr t = mk_src(SourceType::Kind::Unit);
    return t;
}
SourceTypePtr src_int() {
    static const SourceTypePtr t = mk_src(SourceType::Kind::Int);
    return t;
}
SourceTypePtr src_ref(SourceTypePtr t) { return mk_src(SourceType::Kind::Ref, std::move(t)); }
SourceTypePtr src_arrow(SourceTypePtr a, SourceTypePtr b) {
    return mk_src(SourceType::Kind::Arrow, std::move(a), std::move(b));
}

bool equal(const SourceTypePtr& x, const SourceTypePtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case SourceType::Kind::Unit:
    case SourceType::Kind::Int: return true;
    case SourceType::Kind::Ref: return equal(x->a, y->a);
    case SourceType::Kind::Arrow: return equal(x->a, y->a) && equal(x->b, y->b);
    }
    return false;
}

bool source_type_legal(const SourceTypePtr& t, Lang base) {
    if (!t) return false;
    switch (t->kind) {
    case SourceType::Kind::Unit:
    case SourceType::Kind::Int: return true;
    case SourceType::Kind::Ref:
        return base != Lang::Stlc && source_type_legal(t->a, base);
    case SourceType::Kind::Arrow:
        return source_type_legal(t->a, base) && source_type_legal(t->b, base);
    }
    return false;
}

int type_depth(const SourceTypePtr& t) {
    if (!t) return 0;
    switch (t->kind) {
    case SourceType::Kind::Unit:
    case SourceType::Kind::Int: return 1;
    case SourceType::Kind::Ref: return 1 + type_depth(t->a);
    case SourceType::Kind::Arrow: return 1 + std::max(type_depth(t->a), type_depth(t->b));
    }
    return 1;
}

// --- linking types ---------------------------------------------------------

namespace {
LinkTypePtr mk_lt(LinkType::Kind k, LinkTypePtr a = nullptr, LinkTypePtr b = nullptr,
                  Effect e = Effect::Pure, CostBound c = CostBound::unknown()) {
    auto t = std::make_shared<LinkType>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    t->eff = e;
    t->cost = c;
    return t;
}
}  // namespace

LinkTypePtr lt_unit() {
    static const LinkTypePtr t = mk_lt(LinkType::Kind::Unit);
    return t;
}
LinkTypePtr lt_int() {
    static const LinkTypePtr t = mk_lt(LinkType::Kind::Int);
    return t;
}
LinkTypePtr lt_ref(LinkTypePtr t) { return mk_lt(LinkType::Kind::Ref, std::move(t)); }
LinkTypePtr lt_arrow_r(LinkTypePtr a, Effect e, LinkTypePtr b) {
    return mk_lt(LinkType::Kind::ArrowR, std::move(a), std::move(b), e);
}
LinkTypePtr lt_arrow(LinkTypePtr a, LinkTypePtr b) {
    return mk_lt(LinkType::Kind::Arrow, std::move(a), std::move(b));
}
LinkTypePtr lt_arrow_term(LinkTypePtr a, LinkTypePtr b) {
    return mk_lt(LinkType::Kind::ArrowTerm, std::move(a), std::move(b));
}
LinkTypePtr lt_arrow_cost(LinkTypePtr a, CostBound c, LinkTypePtr b) {
    if (c.is_known() && *c.n < 0) throw std::invalid_argument("negative cost bound");
    return mk_lt(LinkType::Kind::ArrowCost, std::move(a), std::move(b), Effect::Pure, c);
}
LinkTypePtr lt_linear(LinkTypePtr shape) {
    if (shape && shape->kind == LinkType::Kind::Linear)
        throw std::invalid_argument("linear marker applied twice");
    return mk_lt(LinkType::Kind::Linear, std::move(shape));
}

bool equal(const LinkTypePtr& x, const LinkTypePtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case LinkType::Kind::Unit:
    case LinkType::Kind::Int: return true;
    case LinkType::Kind::Ref:
    case LinkType::Kind::Linear: return equal(x->a, y->a);
    case LinkType::Kind::Arrow:
    case LinkType::Kind::ArrowTerm: return equal(x->a, y->a) && equal(x->b, y->b);
    case LinkType::Kind::ArrowR:
        return x->eff == y->eff && equal(x->a, y->a) && equal(x->b, y->b);
    case LinkType::Kind::ArrowCost:
        return x->cost == y->cost && equal(x->a, y->a) && equal(x->b, y->b);
    }
    return false;
}

bool link_type_legal(const LinkTypePtr& t, Ext ext) {
    if (!t) return false;
    switch (t->kind) {
    case LinkType::Kind::Unit:
    case LinkType::Kind::Int: return true;
    case LinkType::Kind::Ref: return link_type_legal(t->a, ext);
    case LinkType::Kind::ArrowR:
        return ext == Ext::HeapEffect && link_type_legal(t->a, ext) && link_type_legal(t->b, ext);
    case LinkType::Kind::Arrow:
        return (ext == Ext::Linear || ext == Ext::Terminating) && link_type_legal(t->a, ext) &&
               link_type_legal(t->b, ext);
    case LinkType::Kind::ArrowTerm:
        return ext == Ext::Terminating && link_type_legal(t->a, ext) && link_type_legal(t->b, ext);
    case LinkType::Kind::ArrowCost:
        return ext == Ext::Cost && (!t->cost.is_known() || *t->cost.n >= 0) &&
               link_type_legal(t->a, ext) && link_type_legal(t->b, ext);
    case LinkType::Kind::Linear:
        // phi^L: the marked shape itself must not be another marker.
        return ext == Ext::Linear && t->a && t->a->kind != LinkType::Kind::Linear &&
               link_type_legal(t->a, ext);
    }
    return false;
}

int type_depth(const LinkTypePtr& t) {
    if (!t) return 0;
    switch (t->kind) {
    case LinkType::Kind::Unit:
    case LinkType::Kind::Int: return 1;
    case LinkType::Kind::Ref:
    case LinkType::Kind::Linear: return 1 + type_depth(t->a);
    default: return 1 + std::max(type_depth(t->a), type_depth(t->b));
    }
}

// --- target types ----------------------------------------------------------

namespace {
TargetTypePtr mk_tt(TargetType::Kind k, TargetTypePtr a = nullptr,
                    std::shared_ptr<const CompType> c = nullptr) {
    auto t = std::make_shared<TargetType>();
    t->kind = k;
    t->a = std::move(a);
    t->comp = std::move(c);
    return t;
}
}  // namespace

TargetTypePtr tt_void() {
    static const TargetTypePtr t = mk_tt(TargetType::Kind::Void0);
    return t;
}
TargetTypePtr tt_unit() {
    static const TargetTypePtr t = mk_tt(TargetType::Kind::Unit);
    return t;
}
TargetTypePtr tt_int() {
    static const TargetTypePtr t = mk_tt(TargetType::Kind::Int);
    return t;
}
TargetTypePtr tt_ref(TargetTypePtr t) { return mk_tt(TargetType::Kind::Ref, std::move(t)); }
TargetTypePtr tt_arrow(TargetTypePtr dom, CompType c) {
    return mk_tt(TargetType::Kind::Arrow, std::move(dom),
                 std::make_shared<const CompType>(std::move(c)));
}
CompType comp_of(Effect e, TargetTypePtr exn, TargetTypePtr result) {
    return CompType{e, std::move(exn), std::move(result)};
}

bool equal(const CompType& x, const CompType& y) {
    return x.eff == y.eff && equal(x.exn, y.exn) && equal(x.result, y.result);
}

bool equal(const TargetTypePtr& x, const TargetTypePtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case TargetType::Kind::Void0:
    case TargetType::Kind::Unit:
    case TargetType::Kind::Int: return true;
    case TargetType::Kind::Ref: return equal(x->a, y->a);
    case TargetType::Kind::Arrow: return equal(x->a, y->a) && equal(*x->comp, *y->comp);
    }
    return false;
}

int type_depth(const TargetTypePtr& t) {
    if (!t) return 0;
    switch (t->kind) {
    case TargetType::Kind::Ref: return 1 + type_depth(t->a);
    case TargetType::Kind::Arrow:
        return 1 + std::max({type_depth(t->a), type_depth(t->comp->exn),
                             type_depth(t->comp->result)});
    default: return 1;
    }
}

bool comp_le(const CompType& c, const CompType& d) {
    if (!effect_le(c.eff, d.eff)) return false;
    bool exn_ok = c.exn->kind == TargetType::Kind::Void0 || equal(c.exn, d.exn);
    return exn_ok && target_le(c.result, d.result);
}

bool target_le(const TargetTypePtr& s, const TargetTypePtr& t) {
    if (equal(s, t)) return true;
    if (s->kind == TargetType::Kind::Arrow && t->kind == TargetType::Kind::Arrow)
        return equal(s->a, t->a) && comp_le(*s->comp, *t->comp);
    return false;
}

}  // namespace linkc
