// Cross-language compatibility checking, whole-program assembly, and
// execution.  Linking is substitution of closed compiled terms into the
// manifest's main expression; compatibility is decided by translating both
// interface types to the target and comparing structurally.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linkc/compiler.hpp"
#include "linkc/source_core.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

// A component interface as written: an unannotated source type (lifted by
// the default kappa+ embedding) or an explicit linking type.
using InterfaceType = std::variant<SourceTypePtr, LinkTypePtr>;

// One side of a compatibility check, kept replayable: source view (when
// lifted), linking type, and target translation (heap-effect only).
struct TranslationChain {
    std::string role;
    LanguageId lang;
    std::optional<SourceTypePtr> source;
    LinkTypePtr link;
    std::optional<TargetTypePtr> target;
};

struct CompatVerdict {
    bool compatible = false;
    TargetTypePtr shared_target;  // set when compatible via translation
    LinkTypePtr client_link;
    TranslationChain client_chain, provider_chain;
    std::string explanation;  // source-level message
};

CompatVerdict check_compat(const InterfaceType& client, LanguageId client_lang,
                           const InterfaceType& provider, LanguageId provider_lang);

std::string chain_to_string(const TranslationChain& chain);

struct LinkError : std::runtime_error {
    std::optional<CompatVerdict> verdict;
    explicit LinkError(const std::string& msg) : std::runtime_error(msg) {}
    LinkError(const std::string& msg, CompatVerdict v)
        : std::runtime_error(msg), verdict(std::move(v)) {}
};

struct ManifestComponent {
    std::string name;
    std::string path;
    LanguageId lang;
    std::string export_name;  // defaults to name
    std::optional<LinkTypePtr> annotation;
};

struct LinkManifest {
    std::vector<ManifestComponent> components;
    std::string main_expression;  // target-level glue over component names
    std::string base_dir;
};

LinkManifest load_manifest(const std::string& path);
LinkManifest manifest_from_json(const std::string& json_text, const std::string& base_dir);
std::string manifest_to_json(const LinkManifest& m);

// A checked and compiled component ready for linking.
struct CompiledComponent {
    std::string name;
    LanguageId lang;
    TermPtr compiled;           // closed target term
    LinkTypePtr link_type;      // null for target-native components
    TargetTypePtr target_type;  // interface type seen by other components
    Effect top_effect = Effect::Pure;  // effect of the component's own computation
};

CompiledComponent compile_component_text(const std::string& name, const std::string& text,
                                         LanguageId lang,
                                         std::optional<LinkTypePtr> annotation = std::nullopt);
CompiledComponent compile_component_file(const std::string& path,
                                         std::optional<LanguageId> lang_override = std::nullopt,
                                         std::optional<LinkTypePtr> annotation = std::nullopt);

TermPtr link(const LinkManifest& manifest);
Outcome run(const LinkManifest& manifest, std::int64_t fuel);

}  // namespace linkc
