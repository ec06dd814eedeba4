// Type-directed compilation of the kappa-extended languages into the target:
// the type translation, its inverse (deciding expressibility of target
// interfaces), and the homomorphic term elaboration.
#pragma once

#include "linkc/linking_ext.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

struct UnsupportedExtension : TypeError {
    using TypeError::TypeError;
};

struct NotExpressible : std::runtime_error {
    std::string reason;
    TargetTypePtr offending;
    NotExpressible(std::string reason_, TargetTypePtr offending_);
};

// [[t1 -> R^eps t2]] = [[t1]] -> E^eps_0 [[t2]]; base types and ref are
// structural.  Only the heap-effect grammar compiles.
TargetTypePtr translate_type(const LinkTypePtr& t);

// Exact inverse of translate_type on its image; throws NotExpressible outside
// it (non-void exception types, or the void type itself).
LinkTypePtr backtranslate_type(const TargetTypePtr& t, LanguageId lang);

// Homomorphic elaboration of a checked term.  The judgment must come from
// typecheck_linked on t; its subject carries the fully resolved parameter
// types that the output's annotations are translated from.
TermPtr compile(const TermPtr& t, LanguageId lang, const LinkJudgment& judgment);

// Interface sidecar written next to compiled components.
struct InterfaceRecord {
    std::string name;
    LanguageId lang;
    LinkTypePtr link_type;
    TargetTypePtr target_type;
};

std::string interface_to_json(const InterfaceRecord& rec);
InterfaceRecord interface_from_json(const std::string& json_text);

}  // namespace linkc
