#include "linkc/linker.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "linkc/syntax.hpp"
#include "linkc/target.hpp"

namespace linkc {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LinkError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Ext ext_of(LanguageId lang) { return lang.extension.value_or(Ext::HeapEffect); }

TranslationChain resolve_side(const std::string& role, const InterfaceType& type,
                              LanguageId lang) {
    TranslationChain chain;
    chain.role = role;
    chain.lang = lang;
    Ext ext = ext_of(lang);
    if (auto* src = std::get_if<SourceTypePtr>(&type)) {
        chain.source = *src;
        chain.link = kappa_plus(*src, lang, ext);
    } else {
        chain.link = std::get<LinkTypePtr>(type);
        if (!link_type_legal(chain.link, ext))
            throw ExtensionConflict({}, "interface type " + print_type(chain.link) +
                                            " does not belong to the " + ext_name(ext) +
                                            " extension");
    }
    if (ext == Ext::HeapEffect) chain.target = translate_type(chain.link);
    return chain;
}

std::string source_view(const TranslationChain& chain) {
    if (chain.source) return print_type(*chain.source);
    return print_type(kappa_minus(chain.link, chain.lang, ext_of(chain.lang)));
}

}  // namespace

std::string chain_to_string(const TranslationChain& chain) {
    std::ostringstream os;
    os << chain.role << " (" << lang_name(chain.lang.tag) << "): ";
    if (chain.source) os << print_type(*chain.source) << " --kappa+--> ";
    os << print_type(chain.link);
    if (chain.target) os << " --translate--> " << print_type(*chain.target);
    return os.str();
}

CompatVerdict check_compat(const InterfaceType& client, LanguageId client_lang,
                           const InterfaceType& provider, LanguageId provider_lang) {
    CompatVerdict v;
    v.client_chain = resolve_side("client", client, client_lang);
    v.provider_chain = resolve_side("provider", provider, provider_lang);
    v.client_link = v.client_chain.link;

    Ext ce = ext_of(client_lang), pe = ext_of(provider_lang);
    if (v.client_chain.target && v.provider_chain.target) {
        v.compatible = equal(*v.client_chain.target, *v.provider_chain.target);
        if (v.compatible) v.shared_target = *v.client_chain.target;
    } else if (ce == pe) {
        // type-level-only extensions: compatibility is equality of the
        // linking types themselves
        v.compatible = equal(v.client_chain.link, v.provider_chain.link);
    } else {
        v.compatible = false;
        v.explanation = "interfaces use different linking-type extensions (" + ext_name(ce) +
                        " vs " + ext_name(pe) + ")";
        return v;
    }
    if (!v.compatible)
        v.explanation = source_view(v.client_chain) + " is not compatible with " +
                        source_view(v.provider_chain);
    return v;
}

// --- manifests ---------------------------------------------------------------

LinkManifest manifest_from_json(const std::string& json_text, const std::string& base_dir) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.contains("linkc-manifest-v1"))
        throw LinkError("not a linkc manifest (missing linkc-manifest-v1 field)");
    LinkManifest m;
    m.base_dir = base_dir;
    std::set<std::string> names;
    for (const auto& c : j.at("components")) {
        ManifestComponent mc;
        mc.name = c.at("name").get<std::string>();
        if (!names.insert(mc.name).second)
            throw LinkError("duplicate component name " + mc.name);
        mc.path = c.at("path").get<std::string>();
        if (c.contains("language")) {
            auto lang = lang_from_name(c.at("language").get<std::string>());
            if (!lang) throw LinkError("unknown language for component " + mc.name);
            mc.lang.tag = *lang;
        } else {
            auto lang = language_for_path(mc.path);
            if (!lang) throw LinkError("cannot infer language for component " + mc.name);
            mc.lang = *lang;
        }
        if (c.contains("extension")) {
            auto e = ext_from_name(c.at("extension").get<std::string>());
            if (!e) throw LinkError("unknown extension for component " + mc.name);
            mc.lang.extension = e;
        } else if (mc.lang.is_extended()) {
            mc.lang.extension = Ext::HeapEffect;
        }
        mc.export_name = c.contains("export") ? c.at("export").get<std::string>() : mc.name;
        if (c.contains("annotation")) {
            mc.annotation =
                parse_link_type(c.at("annotation").get<std::string>(), ext_of(mc.lang));
        }
        m.components.push_back(std::move(mc));
    }
    const auto& main = j.at("main");
    if (main.contains("expression")) m.main_expression = main.at("expression").get<std::string>();
    else if (main.contains("component")) m.main_expression = main.at("component").get<std::string>();
    else throw LinkError("manifest main must give an expression or a component name");
    return m;
}

LinkManifest load_manifest(const std::string& path) {
    std::filesystem::path p(path);
    return manifest_from_json(read_file(path), p.parent_path().string());
}

std::string manifest_to_json(const LinkManifest& m) {
    nlohmann::json j;
    j["linkc-manifest-v1"] = 1;
    j["components"] = nlohmann::json::array();
    for (const auto& c : m.components) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["path"] = c.path;
        cj["language"] = lang_name(c.lang.tag);
        if (c.lang.extension) cj["extension"] = ext_name(*c.lang.extension);
        if (c.export_name != c.name) cj["export"] = c.export_name;
        if (c.annotation) cj["annotation"] = print_type(*c.annotation);
        j["components"].push_back(std::move(cj));
    }
    j["main"]["expression"] = m.main_expression;
    return j.dump(2);
}

// --- component compilation ------------------------------------------------------

CompiledComponent compile_component_text(const std::string& name, const std::string& text,
                                         LanguageId lang, std::optional<LinkTypePtr> annotation) {
    CompiledComponent out;
    out.name = name;
    out.lang = lang;

    if (lang.tag == Lang::Target) {
        out.compiled = parse(text, lang);
        CompType c = typecheck_target_comp(out.compiled);
        out.target_type = c.result;
        out.top_effect = c.eff;
        if (c.exn->kind != TargetType::Kind::Void0)
            throw LinkError("component " + name + " may raise an uncaught exception of type " +
                            print_type(c.exn));
        return out;
    }

    // Source and kappa-extended components share one pipeline: unextended
    // programs are checked in the kappa-extension of their own language at the
    // default embedding of their source type (Day 2's lifting).
    LanguageId check_lang = lang;
    if (!lang.is_extended())
        check_lang = lang.tag == Lang::Stlc ? LanguageId::stlck() : LanguageId::lamrefk();
    Ext ext = ext_of(check_lang);

    ParsedComponent parsed = lang.is_extended() ? parse_component(text, lang)
                                                : ParsedComponent{parse(text, lang), std::nullopt};
    if (parsed.annotation && annotation)
        throw LinkError("component " + name + " is annotated both in-file and in the manifest");
    std::optional<LinkTypePtr> annot = annotation ? annotation : parsed.annotation;

    if (!lang.is_extended() && !annot) {
        SourceTypePtr src = typecheck_source(parsed.term, lang);
        annot = kappa_plus(src, check_lang, ext);
    }

    SourceAudit audit = check_programmer_source(parsed.term, check_lang, ext);
    if (!audit.ok)
        throw LinkError("component " + name + " uses " +
                        std::to_string(audit.violations.size()) +
                        " reasoning-only construct(s) that programmers may not write");

    LinkJudgment judgment = typecheck_linked(parsed.term, check_lang, ext, annot);
    out.link_type = judgment.type;
    out.top_effect = judgment.effect;
    out.compiled = compile(parsed.term, check_lang, judgment);
    out.target_type = translate_type(judgment.type);
    return out;
}

CompiledComponent compile_component_file(const std::string& path,
                                         std::optional<LanguageId> lang_override,
                                         std::optional<LinkTypePtr> annotation) {
    std::optional<LanguageId> lang = lang_override ? lang_override : language_for_path(path);
    if (!lang) throw LinkError("cannot infer the language of " + path + "; pass one explicitly");
    std::string name = std::filesystem::path(path).stem().string();
    return compile_component_text(name, read_file(path), *lang, std::move(annotation));
}

// --- linking -----------------------------------------------------------------------

namespace {

// The documented cross-component use: one component applied to another inside
// main.  Checked up front so mismatches surface as compatibility verdicts
// with full translation chains rather than bare target type errors.
void precheck_applications(const TermPtr& main, const std::vector<CompiledComponent>& comps,
                           const std::vector<std::string>& exports) {
    auto find = [&](const std::string& name) -> const CompiledComponent* {
        for (std::size_t i = 0; i < exports.size(); ++i)
            if (exports[i] == name) return &comps[i];
        return nullptr;
    };
    auto walk = [&](auto&& self, const TermPtr& t) -> void {
        if (!t) return;
        if (t->kind == TermKind::App && t->a->kind == TermKind::Var &&
            t->b->kind == TermKind::Var) {
            const CompiledComponent* fun = find(t->a->var);
            const CompiledComponent* arg = find(t->b->var);
            if (fun && arg && fun->link_type && arg->link_type) {
                LinkTypePtr callee = fun->link_type;
                if (callee->kind == LinkType::Kind::Linear) callee = callee->a;
                bool arrow = callee->kind == LinkType::Kind::ArrowR ||
                             callee->kind == LinkType::Kind::Arrow ||
                             callee->kind == LinkType::Kind::ArrowTerm ||
                             callee->kind == LinkType::Kind::ArrowCost;
                if (arrow) {
                    CompatVerdict v = check_compat(InterfaceType{callee->a}, fun->lang,
                                                   InterfaceType{arg->link_type}, arg->lang);
                    if (!v.compatible)
                        throw LinkError("cannot link " + t->b->var + " into " + t->a->var + ": " +
                                            v.explanation,
                                        v);
                }
            }
        }
        self(self, t->a);
        self(self, t->b);
        self(self, t->c);
    };
    walk(walk, main);
}

}  // namespace

TermPtr link(const LinkManifest& manifest) {
    std::vector<CompiledComponent> comps;
    std::vector<std::string> exports;
    for (const auto& mc : manifest.components) {
        std::filesystem::path p(mc.path);
        std::string full = p.is_absolute() || manifest.base_dir.empty()
                               ? mc.path
                               : (std::filesystem::path(manifest.base_dir) / p).string();
        CompiledComponent cc = compile_component_text(mc.name, read_file(full), mc.lang,
                                                      mc.annotation);
        comps.push_back(std::move(cc));
        exports.push_back(mc.export_name);
    }

    TermPtr main = parse(manifest.main_expression, LanguageId::target());
    precheck_applications(main, comps, exports);

    TermPtr program = main;
    for (std::size_t i = 0; i < comps.size(); ++i)
        program = subst(program, exports[i], comps[i].compiled);
    if (!is_closed(program)) throw LinkError("main references a component that is not declared");

    try {
        typecheck_target_comp(program);
    } catch (const TypeError& e) {
        throw LinkError(std::string("linked program does not typecheck: ") + e.what());
    }
    return program;
}

Outcome run(const LinkManifest& manifest, std::int64_t fuel) {
    TermPtr program = link(manifest);
    return eval_target(program, Store{}, fuel);
}

}  // namespace linkc
