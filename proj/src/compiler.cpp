#include "linkc/compiler.hpp"

#include <nlohmann/json.hpp>

#include "linkc/syntax.hpp"

namespace linkc {

NotExpressible::NotExpressible(std::string reason_, TargetTypePtr offending_)
    : std::runtime_error("not expressible: " + reason_ + " (at " + print_type(offending_) + ")"),
      reason(std::move(reason_)), offending(std::move(offending_)) {}

TargetTypePtr translate_type(const LinkTypePtr& t) {
    switch (t->kind) {
    case LinkType::Kind::Unit: return tt_unit();
    case LinkType::Kind::Int: return tt_int();
    case LinkType::Kind::Ref: return tt_ref(translate_type(t->a));
    case LinkType::Kind::ArrowR:
        return tt_arrow(translate_type(t->a), comp_of(t->eff, tt_void(), translate_type(t->b)));
    case LinkType::Kind::Arrow:
    case LinkType::Kind::ArrowTerm:
    case LinkType::Kind::ArrowCost:
    case LinkType::Kind::Linear:
        throw UnsupportedExtension(
            {}, "no target translation for " + print_type(t) +
                    " (only the heap-effect extension compiles; the others are type-level)");
    }
    throw UnsupportedExtension({}, "malformed linking type");
}

LinkTypePtr backtranslate_type(const TargetTypePtr& t, LanguageId) {
    switch (t->kind) {
    case TargetType::Kind::Void0: throw NotExpressible("the void type has no source counterpart", t);
    case TargetType::Kind::Unit: return lt_unit();
    case TargetType::Kind::Int: return lt_int();
    case TargetType::Kind::Ref: return lt_ref(backtranslate_type(t->a, {}));
    case TargetType::Kind::Arrow: {
        if (t->comp->exn->kind != TargetType::Kind::Void0)
            throw NotExpressible("exception type is not 0", t);
        return lt_arrow_r(backtranslate_type(t->a, {}), t->comp->eff,
                          backtranslate_type(t->comp->result, {}));
    }
    }
    throw NotExpressible("malformed target type", t);
}

namespace {

TermPtr elaborate(const TermPtr& t) {
    LanguageId tgt = LanguageId::target();
    switch (t->kind) {
    case TermKind::UnitVal: return t_unit(tgt, t->pos);
    case TermKind::IntLit: return t_int(tgt, t->num, t->pos);
    case TermKind::Var: return t_var(tgt, t->var, t->pos);
    case TermKind::Lam: {
        std::optional<ParamAnnot> annot;
        if (t->annot) {
            auto* lt = std::get_if<LinkTypePtr>(&*t->annot);
            if (!lt)
                throw TypeError(t->pos,
                                "compile expects the elaborated term of a linking judgment");
            annot = ParamAnnot{translate_type(*lt)};
        }
        return t_lam(tgt, t->var, std::move(annot), elaborate(t->a), t->pos);
    }
    case TermKind::App: return t_app(tgt, elaborate(t->a), elaborate(t->b), t->pos);
    case TermKind::Add:
    case TermKind::Mul:
    case TermKind::Sub: return t_arith(tgt, t->kind, elaborate(t->a), elaborate(t->b), t->pos);
    case TermKind::RefNew: return t_ref(tgt, elaborate(t->a), t->pos);
    case TermKind::Assign: return t_assign(tgt, elaborate(t->a), elaborate(t->b), t->pos);
    case TermKind::Deref: return t_deref(tgt, elaborate(t->a), t->pos);
    default:
        throw TypeError(t->pos, "construct outside the compilable source grammar");
    }
}

}  // namespace

TermPtr compile(const TermPtr&, LanguageId, const LinkJudgment& judgment) {
    return elaborate(judgment.subject);
}

std::string interface_to_json(const InterfaceRecord& rec) {
    nlohmann::json j;
    j["linkc-interface-v1"] = 1;
    j["name"] = rec.name;
    j["language"] = lang_name(rec.lang.tag);
    if (rec.lang.extension) j["extension"] = ext_name(*rec.lang.extension);
    j["link-type"] = print_type(rec.link_type);
    if (rec.target_type) j["target-type"] = print_type(rec.target_type);
    return j.dump(2);
}

InterfaceRecord interface_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.contains("linkc-interface-v1"))
        throw std::runtime_error("not a linkc interface record (missing version field)");
    InterfaceRecord rec;
    rec.name = j.at("name").get<std::string>();
    auto lang = lang_from_name(j.at("language").get<std::string>());
    if (!lang) throw std::runtime_error("unknown language in interface record");
    rec.lang.tag = *lang;
    if (j.contains("extension")) {
        auto e = ext_from_name(j.at("extension").get<std::string>());
        if (!e) throw std::runtime_error("unknown extension in interface record");
        rec.lang.extension = e;
    }
    Ext ext = rec.lang.extension.value_or(Ext::HeapEffect);
    rec.link_type = parse_link_type(j.at("link-type").get<std::string>(), ext);
    if (j.contains("target-type"))
        rec.target_type = parse_target_type(j.at("target-type").get<std::string>());
    return rec;
}

}  // namespace linkc
