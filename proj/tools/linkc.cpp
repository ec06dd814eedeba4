// linkc: check, compile, link, run, and probe programs across the toolchain's
// languages.
//
// Exit codes: 0 ok, 1 type error, 2 link error, 3 out of fuel, 4 usage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "linkc/compiler.hpp"
#include "linkc/equiv.hpp"
#include "linkc/linker.hpp"
#include "linkc/linking_ext.hpp"
#include "linkc/registry.hpp"
#include "linkc/source_core.hpp"
#include "linkc/syntax.hpp"
#include "linkc/target.hpp"

using namespace linkc;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTypeError = 1;
constexpr int kExitLinkError = 2;
constexpr int kExitOutOfFuel = 3;
constexpr int kExitUsage = 4;

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(kExitUsage);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::int64_t default_fuel() {
    if (const char* env = std::getenv("LINKC_FUEL")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        std::cerr << "warning: ignoring malformed LINKC_FUEL\n";
    }
    return kDefaultFuel;
}

LanguageId language_or_die(const std::string& path, const std::string& lang_flag,
                           const std::string& ext_flag) {
    std::optional<LanguageId> lang;
    if (!lang_flag.empty()) {
        auto l = lang_from_name(lang_flag);
        if (!l) {
            std::cerr << "error: unknown language " << lang_flag << "\n";
            std::exit(kExitUsage);
        }
        lang = LanguageId{*l, std::nullopt};
    } else {
        lang = language_for_path(path);
        if (!lang) {
            std::cerr << "error: cannot infer a language from " << path
                      << "; pass --lang\n";
            std::exit(kExitUsage);
        }
    }
    if (!ext_flag.empty()) {
        auto e = ext_from_name(ext_flag);
        if (!e) {
            std::cerr << "error: unknown extension " << ext_flag << "\n";
            std::exit(kExitUsage);
        }
        lang->extension = *e;
    } else if (lang->is_extended()) {
        lang->extension = Ext::HeapEffect;
    }
    return *lang;
}

std::string effect_name(Effect e) { return e == Effect::Pure ? "pure" : "impure"; }

void print_verdict_chains(std::ostream& os, const CompatVerdict& v) {
    os << chain_to_string(v.client_chain) << "\n" << chain_to_string(v.provider_chain) << "\n";
}

// --- check ------------------------------------------------------------------

struct CheckOpts {
    std::string file, lang, ext;
    bool json = false;
};

int cmd_check(const CheckOpts& o) {
    LanguageId lang = language_or_die(o.file, o.lang, o.ext);
    std::string text = read_file_or_die(o.file);
    json out;
    out["file"] = o.file;
    try {
        if (lang.tag == Lang::Target) {
            TermPtr t = parse(text, lang);
            CompType c = typecheck_target_comp(t);
            out["ok"] = true;
            out["comp"] = print_comp(c);
            if (o.json) std::cout << out.dump(2) << "\n";
            else std::cout << o.file << ": " << print_comp(c) << "\n";
            return kExitOk;
        }
        if (!lang.is_extended()) {
            TermPtr t = parse(text, lang);
            SourceTypePtr ty = typecheck_source(t, lang);
            out["ok"] = true;
            out["type"] = print_type(ty);
            if (o.json) std::cout << out.dump(2) << "\n";
            else std::cout << o.file << ": " << print_type(ty) << "\n";
            return kExitOk;
        }
        ParsedComponent pc = parse_component(text, lang);
        SourceAudit audit = check_programmer_source(pc.term, lang, *lang.extension);
        if (!audit.ok) {
            for (const TermPtr& node : audit.violations)
                std::cerr << o.file << ":" << node->pos.line << ":" << node->pos.col
                          << ": reasoning-only construct in programmer source\n";
            out["ok"] = false;
            out["violations"] = audit.violations.size();
            if (o.json) std::cout << out.dump(2) << "\n";
            return kExitTypeError;
        }
        LinkJudgment j = typecheck_linked(pc.term, lang, *lang.extension, pc.annotation);
        out["ok"] = true;
        out["type"] = print_type(j.type);
        out["effect"] = effect_name(j.effect);
        if (o.json) std::cout << out.dump(2) << "\n";
        else
            std::cout << o.file << ": " << print_type(j.type) << " [" << effect_name(j.effect)
                      << "]\n";
        return kExitOk;
    } catch (const ParseError& e) {
        std::cerr << o.file << ":" << e.what() << "\n";
    } catch (const TypeError& e) {
        std::cerr << o.file << ":" << e.what() << "\n";
    }
    if (o.json) {
        out["ok"] = false;
        std::cout << out.dump(2) << "\n";
    }
    return kExitTypeError;
}

// --- compile -----------------------------------------------------------------

struct CompileOpts {
    std::string file, emit, lang, ext;
    bool json = false;
};

int cmd_compile(const CompileOpts& o) {
    LanguageId lang = language_or_die(o.file, o.lang, o.ext);
    try {
        CompiledComponent cc = compile_component_file(o.file, lang);
        std::ofstream out(o.emit);
        if (!out) {
            std::cerr << "error: cannot write " << o.emit << "\n";
            return kExitUsage;
        }
        out << print_term(cc.compiled) << "\n";

        InterfaceRecord rec{cc.name, cc.lang, cc.link_type, cc.target_type};
        std::string sidecar = o.emit + ".json";
        std::ofstream side(sidecar);
        side << interface_to_json(rec) << "\n";

        if (o.json) {
            json j;
            j["ok"] = true;
            j["emit"] = o.emit;
            j["interface"] = sidecar;
            j["target-type"] = print_type(cc.target_type);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << o.emit << ": " << print_type(cc.target_type) << "\n";
        }
        return kExitOk;
    } catch (const LinkError& e) {
        std::cerr << o.file << ": " << e.what() << "\n";
        return kExitLinkError;
    } catch (const ParseError& e) {
        std::cerr << o.file << ":" << e.what() << "\n";
    } catch (const TypeError& e) {
        std::cerr << o.file << ":" << e.what() << "\n";
    }
    return kExitTypeError;
}

// --- compat ------------------------------------------------------------------

struct CompatOpts {
    std::string client_file, provider_file;
    std::string client_type, client_lang, client_ext;
    std::string provider_type, provider_lang, provider_ext;
    bool explain = false, json = false;
};

struct Side {
    InterfaceType type;
    LanguageId lang;
};

// A file side is either a compiled interface sidecar (.json) or a source
// component whose interface is derived by checking it.  The client's linking
// point is the domain of its (arrow) type.
Side load_side(const std::string& file, bool is_client) {
    if (file.size() > 5 && file.substr(file.size() - 5) == ".json") {
        InterfaceRecord rec = interface_from_json(read_file_or_die(file));
        LinkTypePtr ty = rec.link_type;
        if (is_client) {
            if (ty->kind != LinkType::Kind::ArrowR && ty->kind != LinkType::Kind::Arrow &&
                ty->kind != LinkType::Kind::ArrowTerm && ty->kind != LinkType::Kind::ArrowCost) {
                std::cerr << "error: client interface " << print_type(ty)
                          << " is not a function, so it has no linking point\n";
                std::exit(kExitUsage);
            }
            ty = ty->a;
        }
        return {InterfaceType{ty}, rec.lang};
    }
    auto lang = language_for_path(file);
    if (!lang) {
        std::cerr << "error: cannot infer a language from " << file << "\n";
        std::exit(kExitUsage);
    }
    if (lang->is_extended() && !lang->extension) lang->extension = Ext::HeapEffect;
    CompiledComponent cc = compile_component_file(file, lang);
    LinkTypePtr ty = cc.link_type;
    if (is_client) {
        if (ty->kind == LinkType::Kind::Linear) ty = ty->a;
        if (ty->kind != LinkType::Kind::ArrowR && ty->kind != LinkType::Kind::Arrow &&
            ty->kind != LinkType::Kind::ArrowTerm && ty->kind != LinkType::Kind::ArrowCost) {
            std::cerr << "error: client component type " << print_type(ty)
                      << " is not a function, so it has no linking point\n";
            std::exit(kExitUsage);
        }
        ty = ty->a;
    }
    return {InterfaceType{ty}, cc.lang};
}

Side inline_side(const std::string& type_text, const std::string& lang_flag,
                 const std::string& ext_flag) {
    auto l = lang_from_name(lang_flag);
    if (!l) {
        std::cerr << "error: an inline type needs a valid --*-lang\n";
        std::exit(kExitUsage);
    }
    LanguageId lang{*l, std::nullopt};
    if (!ext_flag.empty()) {
        auto e = ext_from_name(ext_flag);
        if (!e) {
            std::cerr << "error: unknown extension " << ext_flag << "\n";
            std::exit(kExitUsage);
        }
        lang.extension = *e;
    } else if (lang.is_extended()) {
        lang.extension = Ext::HeapEffect;
    }
    // try the source grammar first; fall back to the extension's linking types
    try {
        return {InterfaceType{parse_source_type(type_text, lang.base())}, lang};
    } catch (const ParseError&) {
        return {InterfaceType{parse_link_type(type_text, lang.extension.value_or(Ext::HeapEffect))},
                lang};
    }
}

int cmd_compat(const CompatOpts& o) {
    try {
        Side client = o.client_type.empty() ? load_side(o.client_file, true)
                                            : inline_side(o.client_type, o.client_lang, o.client_ext);
        Side provider = o.provider_type.empty()
                            ? load_side(o.provider_file, false)
                            : inline_side(o.provider_type, o.provider_lang, o.provider_ext);
        CompatVerdict v = check_compat(client.type, client.lang, provider.type, provider.lang);
        if (o.json) {
            json j;
            j["compatible"] = v.compatible;
            j["client-chain"] = chain_to_string(v.client_chain);
            j["provider-chain"] = chain_to_string(v.provider_chain);
            if (v.compatible && v.shared_target) j["shared-target"] = print_type(v.shared_target);
            if (!v.compatible) j["explanation"] = v.explanation;
            std::cout << j.dump(2) << "\n";
            return v.compatible ? kExitOk : kExitTypeError;
        }
        if (v.compatible) {
            std::cout << "compatible";
            if (v.shared_target) std::cout << " at " << print_type(v.shared_target);
            std::cout << "\n";
            if (o.explain) print_verdict_chains(std::cout, v);
            return kExitOk;
        }
        std::cout << "incompatible: " << v.explanation << "\n";
        if (v.client_chain.target && v.provider_chain.target)
            std::cout << "  client translates to   " << print_type(*v.client_chain.target)
                      << "\n  provider translates to " << print_type(*v.provider_chain.target)
                      << "\n";
        if (o.explain) print_verdict_chains(std::cout, v);
        return kExitTypeError;
    } catch (const LinkError& e) {
        std::cerr << e.what() << "\n";
        return kExitLinkError;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    } catch (const TypeError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    } catch (const NotExpressible& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    }
}

// --- link / run -----------------------------------------------------------------

int report_link_error(const LinkError& e, bool as_json) {
    if (as_json) {
        json j;
        j["ok"] = false;
        j["error"] = e.what();
        if (e.verdict) {
            j["client-chain"] = chain_to_string(e.verdict->client_chain);
            j["provider-chain"] = chain_to_string(e.verdict->provider_chain);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cerr << "link error: " << e.what() << "\n";
        if (e.verdict) print_verdict_chains(std::cerr, *e.verdict);
    }
    return kExitLinkError;
}

struct LinkOpts {
    std::string manifest, emit;
    bool json = false;
};

int cmd_link(const LinkOpts& o) {
    try {
        LinkManifest m = load_manifest(o.manifest);
        TermPtr program = link(m);
        if (!o.emit.empty()) {
            std::ofstream out(o.emit);
            out << print_term(program) << "\n";
        }
        if (o.json) {
            json j;
            j["ok"] = true;
            j["components"] = m.components.size();
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "linked " << m.components.size() << " component(s)\n";
        }
        return kExitOk;
    } catch (const LinkError& e) {
        return report_link_error(e, o.json);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    } catch (const TypeError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    }
}

struct RunOpts {
    std::string manifest;
    std::int64_t fuel = 0;
    bool json = false;
};

int cmd_run(const RunOpts& o) {
    try {
        LinkManifest m = load_manifest(o.manifest);
        Outcome out = run(m, o.fuel);
        switch (out.kind) {
        case Outcome::Kind::Value:
            if (o.json) {
                json j;
                j["outcome"] = "value";
                j["value"] = print_term(out.term);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << print_term(out.term) << "\n";
            }
            return kExitOk;
        case Outcome::Kind::Exception:
            if (o.json) {
                json j;
                j["outcome"] = "exception";
                j["value"] = print_term(out.term);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "uncaught exception: " << print_term(out.term) << "\n";
            }
            return kExitTypeError;
        case Outcome::Kind::OutOfFuel:
            std::cerr << "out of fuel (try --fuel or LINKC_FUEL)\n";
            return kExitOutOfFuel;
        case Outcome::Kind::Stuck:
            std::cerr << "internal error: evaluation got stuck: " << out.reason << "\n";
            return kExitTypeError;
        }
        return kExitTypeError;
    } catch (const LinkError& e) {
        return report_link_error(e, o.json);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    } catch (const TypeError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    }
}

// --- equiv ------------------------------------------------------------------------

struct EquivOpts {
    std::string e1, e2, at, suite = "builtin", ext;
    std::int64_t fuel = 0;
    bool json = false;
};

TermPtr load_probe_term(const std::string& file) {
    auto lang = language_for_path(file);
    if (!lang) {
        std::cerr << "error: cannot infer a language from " << file << "\n";
        std::exit(kExitUsage);
    }
    if (lang->is_extended() && !lang->extension) lang->extension = Ext::HeapEffect;
    ParsedComponent pc = parse_component(read_file_or_die(file), *lang);
    return pc.term;
}

int cmd_equiv(const EquivOpts& o) {
    Ext ext = Ext::HeapEffect;
    if (!o.ext.empty()) {
        auto e = ext_from_name(o.ext);
        if (!e) {
            std::cerr << "error: unknown extension " << o.ext << "\n";
            std::exit(kExitUsage);
        }
        ext = *e;
    }
    try {
        LinkTypePtr at = parse_link_type(o.at, ext);
        TermPtr e1 = load_probe_term(o.e1);
        TermPtr e2 = load_probe_term(o.e2);

        std::vector<ProbeContext> suite;
        if (o.suite == "builtin") {
            suite = suite_for(at);
        } else {
            for (const auto& entry : std::filesystem::directory_iterator(o.suite)) {
                if (!entry.is_regular_file()) continue;
                auto lang = language_for_path(entry.path().string());
                if (!lang) continue;
                if (lang->is_extended() && !lang->extension) lang->extension = ext;
                ParsedComponent pc =
                    parse_component(read_file_or_die(entry.path().string()), *lang);
                suite.push_back({entry.path().stem().string(), pc.term, *lang});
            }
        }

        EquivVerdict v = probe(e1, e2, at, suite, o.fuel);
        if (o.json) {
            json j;
            switch (v.kind) {
            case EquivVerdict::Kind::Distinguished:
                j["verdict"] = "distinguished";
                j["witness"] = v.witness;
                j["outcome1"] = print_term(v.outcome1);
                j["outcome2"] = print_term(v.outcome2);
                break;
            case EquivVerdict::Kind::NotDistinguished:
                j["verdict"] = "not-distinguished";
                j["contexts-tried"] = v.contexts_tried;
                break;
            case EquivVerdict::Kind::IllTyped:
                j["verdict"] = "ill-typed";
                j["component"] = v.ill_typed_component;
                j["detail"] = v.detail;
                break;
            }
            j["fuel-exhausted"] = v.fuel_exhausted;
            std::cout << j.dump(2) << "\n";
        } else {
            switch (v.kind) {
            case EquivVerdict::Kind::Distinguished:
                std::cout << "distinguished by " << v.witness << ": " << print_term(v.outcome1)
                          << " vs " << print_term(v.outcome2) << "\n";
                break;
            case EquivVerdict::Kind::NotDistinguished:
                std::cout << "not distinguished (relative to a suite of "
                          << v.contexts_tried.size() << " context(s))\n";
                break;
            case EquivVerdict::Kind::IllTyped:
                std::cout << "component " << v.ill_typed_component << " is ill-typed at "
                          << o.at << ": " << v.detail << "\n";
                break;
            }
            for (const std::string& name : v.fuel_exhausted)
                std::cout << "note: context " << name << " ran out of fuel\n";
        }
        return v.kind == EquivVerdict::Kind::IllTyped ? kExitTypeError : kExitOk;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    } catch (const TypeError& e) {
        std::cerr << e.what() << "\n";
        return kExitTypeError;
    }
}

// --- extensions -----------------------------------------------------------------------

int cmd_extensions_list(bool as_json) {
    if (as_json) {
        json out = json::array();
        for (const ExtensionSpec& s : builtin_extension_specs()) {
            RegistrationResult r = register_extension(s);
            json j;
            j["name"] = s.name;
            j["kappa-plus"] = s.kappa_plus_table;
            j["kappa-minus"] = s.kappa_minus_table;
            j["obligations"] = s.obligations;
            j["compiles"] = s.supports_translation;
            j["registered"] = r.ok;
            j["seed"] = r.seed;
            out.push_back(std::move(j));
        }
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    for (const ExtensionSpec& s : builtin_extension_specs()) {
        RegistrationResult r = register_extension(s);
        std::cout << s.name << (r.ok ? "  [registered, seed " + std::to_string(r.seed) + "]"
                                     : "  [REJECTED: " + r.message + "]")
                  << "\n";
        std::cout << "  kappa+:\n";
        for (const auto& row : s.kappa_plus_table) std::cout << "    " << row << "\n";
        std::cout << "  kappa-:\n";
        for (const auto& row : s.kappa_minus_table) std::cout << "    " << row << "\n";
        std::cout << "  obligations: " << s.obligations << "\n";
        std::cout << "  compiles to target: " << (s.supports_translation ? "yes" : "type-level only")
                  << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkc: a multi-language toolchain with linking types"};
    app.require_subcommand(1);

    CheckOpts check_opts;
    auto* check = app.add_subcommand("check", "typecheck one component");
    check->add_option("file", check_opts.file, "source file")->required();
    check->add_option("--lang", check_opts.lang, "language (stlc|lamref|stlck|lrefk|target)");
    check->add_option("--ext", check_opts.ext, "extension (heap-effect|linear|terminating|cost)");
    check->add_flag("--json", check_opts.json, "machine-readable output");

    CompileOpts compile_opts;
    auto* compile = app.add_subcommand("compile", "compile a component to the target");
    compile->add_option("file", compile_opts.file, "source file")->required();
    compile->add_option("--emit", compile_opts.emit, "output path (.tgt)")->required();
    compile->add_option("--lang", compile_opts.lang, "language override");
    compile->add_option("--ext", compile_opts.ext, "extension override");
    compile->add_flag("--json", compile_opts.json, "machine-readable output");

    CompatOpts compat_opts;
    auto* compat = app.add_subcommand("compat", "check interface compatibility of two components");
    compat->add_option("client", compat_opts.client_file, "client component or interface sidecar");
    compat->add_option("provider", compat_opts.provider_file,
                       "provider component or interface sidecar");
    compat->add_option("--client-type", compat_opts.client_type, "inline client linking point");
    compat->add_option("--client-lang", compat_opts.client_lang, "language of the inline client");
    compat->add_option("--client-ext", compat_opts.client_ext, "extension of the inline client");
    compat->add_option("--provider-type", compat_opts.provider_type, "inline provider type");
    compat->add_option("--provider-lang", compat_opts.provider_lang,
                       "language of the inline provider");
    compat->add_option("--provider-ext", compat_opts.provider_ext,
                       "extension of the inline provider");
    compat->add_flag("--explain", compat_opts.explain, "print the full translation chains");
    compat->add_flag("--json", compat_opts.json, "machine-readable output");

    LinkOpts link_opts;
    auto* link_cmd = app.add_subcommand("link", "link a manifest into one target program");
    link_cmd->add_option("manifest", link_opts.manifest, "manifest (json)")->required();
    link_cmd->add_option("--emit", link_opts.emit, "write the linked program here");
    link_cmd->add_flag("--json", link_opts.json, "machine-readable output");

    RunOpts run_opts;
    auto* run_cmd = app.add_subcommand("run", "link a manifest and evaluate it");
    run_cmd->add_option("manifest", run_opts.manifest, "manifest (json)")->required();
    run_cmd->add_option("--fuel", run_opts.fuel, "evaluation fuel");
    run_cmd->add_flag("--json", run_opts.json, "machine-readable output");

    EquivOpts equiv_opts;
    auto* equiv_cmd =
        app.add_subcommand("equiv", "probe two components with distinguishing contexts");
    equiv_cmd->add_option("e1", equiv_opts.e1, "first component")->required();
    equiv_cmd->add_option("e2", equiv_opts.e2, "second component")->required();
    equiv_cmd->add_option("--at", equiv_opts.at, "linking type of both components")->required();
    equiv_cmd->add_option("--suite", equiv_opts.suite, "builtin or a directory of context files");
    equiv_cmd->add_option("--ext", equiv_opts.ext, "extension of the --at type");
    equiv_cmd->add_option("--fuel", equiv_opts.fuel, "evaluation fuel per probe");
    equiv_cmd->add_flag("--json", equiv_opts.json, "machine-readable output");

    bool ext_json = false;
    auto* extensions = app.add_subcommand("extensions", "inspect linking-type extensions");
    auto* ext_list = extensions->add_subcommand("list", "list registered extensions");
    ext_list->add_flag("--json", ext_json, "machine-readable output");
    extensions->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (run_opts.fuel <= 0) run_opts.fuel = default_fuel();
    if (equiv_opts.fuel <= 0) equiv_opts.fuel = default_fuel();

    if (check->parsed()) return cmd_check(check_opts);
    if (compile->parsed()) return cmd_compile(compile_opts);
    if (compat->parsed()) {
        bool have_client = !compat_opts.client_file.empty() || !compat_opts.client_type.empty();
        bool have_provider =
            !compat_opts.provider_file.empty() || !compat_opts.provider_type.empty();
        if (!have_client || !have_provider) {
            std::cerr << "error: compat needs a client and a provider (file or --*-type)\n";
            return kExitUsage;
        }
        return cmd_compat(compat_opts);
    }
    if (link_cmd->parsed()) return cmd_link(link_opts);
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (equiv_cmd->parsed()) return cmd_equiv(equiv_opts);
    if (extensions->parsed() && ext_list->parsed()) return cmd_extensions_list(ext_json);
    return kExitUsage;
}
