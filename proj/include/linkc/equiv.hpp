// Desk-scale contextual-equivalence probing: run suites of typed contexts
// over two candidate components and classify the pair.  Sound for
// distinction; NotDistinguished is always relative to the suite tried.
#pragma once

#include <string>
#include <vector>

#include "linkc/linking_ext.hpp"
#include "linkc/source_core.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

// A context is a lambda of the hole: applying it to a component yields the
// whole program.  It must typecheck in its extended language with the hole
// type as parameter and a base-typed result.
struct ProbeContext {
    std::string name;
    TermPtr context;
    LanguageId lang;
};

struct EquivVerdict {
    enum class Kind { Distinguished, NotDistinguished, IllTyped };
    Kind kind = Kind::NotDistinguished;
    std::string witness;              // Distinguished: the context's name
    TermPtr outcome1, outcome2;       // the differing values
    std::vector<std::string> contexts_tried;
    int ill_typed_component = 0;      // 1 or 2
    std::string detail;
    std::vector<std::string> fuel_exhausted;  // reported separately, never a distinction
};

EquivVerdict probe(const TermPtr& e1, const TermPtr& e2, const LinkTypePtr& hole_type,
                   const std::vector<ProbeContext>& suite, std::int64_t fuel);

// Contexts shipped with the tool, keyed by hole type.
struct BuiltinSuite {
    LinkTypePtr hole_type;
    std::vector<ProbeContext> contexts;
};
const std::vector<BuiltinSuite>& builtin_suites();
std::vector<ProbeContext> suite_for(const LinkTypePtr& hole_type);

}  // namespace linkc
