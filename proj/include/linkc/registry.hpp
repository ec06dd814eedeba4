// Uniform registration of linking-type extensions.  A spec is accepted only
// after its checkable properties hold over a generated type corpus:
// projection inverts embedding exactly, embedded types stay inside the
// extension grammar, and reasoning-only terms are disjoint from the
// programmer grammar.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "linkc/types.hpp"
#include "linkc/term.hpp"

namespace linkc {

struct ExtensionSpec {
    Ext id = Ext::HeapEffect;
    std::string name;
    std::vector<Lang> base_languages;

    std::function<LinkTypePtr(const SourceTypePtr&, LanguageId)> embed;    // kappa+
    std::function<SourceTypePtr(const LinkTypePtr&, LanguageId)> project;  // kappa-
    std::function<bool(const LinkTypePtr&)> grammar_check;                 // optional
    std::function<std::vector<TermKind>(Lang)> reasoning_terms;            // optional

    bool supports_translation = false;
    std::vector<std::string> kappa_plus_table, kappa_minus_table;  // printable rows
    std::string obligations;  // extra typing checks, human readable
};

struct RegistrationResult {
    bool ok = true;
    std::string property;        // violated property, when !ok
    std::string message;
    SourceTypePtr counterexample;  // size-shrunk witness
    Lang witness_lang = Lang::Stlc;
    std::uint64_t seed = 0;
};

constexpr std::uint64_t kDefaultRegistrySeed = 20250810;

RegistrationResult register_extension(const ExtensionSpec& spec,
                                      std::uint64_t seed = kDefaultRegistrySeed,
                                      int corpus_size = 1000);

// The four shipped extensions (heap-effect, linear, terminating, cost).
const std::vector<ExtensionSpec>& builtin_extension_specs();

bool in_programmer_grammar(TermKind kind, Lang base);

// Random well-formed source type of bounded depth; shared by registration
// and the test corpora.
SourceTypePtr random_source_type(std::mt19937_64& rng, Lang base, int max_depth);

}  // namespace linkc
