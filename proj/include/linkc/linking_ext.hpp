// The linking-types-extended type systems: kappa+/kappa- maps between source
// and linking types, the extended checker with its effect discipline, and the
// per-extension obligations (programmer-source audit, termination check,
// cost inference, linear usage).
#pragma once

#include <optional>
#include <vector>

#include "linkc/source_core.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

struct IllegalType : TypeError {
    using TypeError::TypeError;
};
struct ExtensionConflict : TypeError {
    using TypeError::TypeError;
};
struct LinearityViolation : TypeError {
    std::string var;
    int uses;
    LinearityViolation(SrcPos p, std::string v, int n)
        : TypeError(p, "linear variable " + v + " used " + std::to_string(n) +
                           " times (must be exactly once)"),
          var(std::move(v)), uses(n) {}
};
struct TerminationCheckFailed : TypeError {
    using TypeError::TypeError;
};
struct CostMismatch : TypeError {
    CostBound expected, inferred;
    CostMismatch(SrcPos p, CostBound want, CostBound got);
};

// Embed a source type into ext's linking types.  Throws IllegalType when the
// type is outside lang's grammar (ref under the pure calculus).
LinkTypePtr kappa_plus(const SourceTypePtr& t, LanguageId lang, Ext ext);

// Project a linking type back; total by construction (annotations erased,
// and for the pure calculus `ref t` projects to the projection of t).
SourceTypePtr kappa_minus(const LinkTypePtr& t, LanguageId lang, Ext ext);

// Subtyping: covariant in results and effects (o <= *, t| <= t, C^N <= C^*),
// invariant domains, refs, and linear markers.
bool link_le(const LinkTypePtr& s, const LinkTypePtr& t);

struct LinkJudgment {
    TermPtr subject;   // annotation-elaborated term: every parameter carries a LinkType
    LinkTypePtr type;
    Effect effect;     // the R^eps of the subject's top-level computation
};

LinkJudgment typecheck_linked(TypeEnv<LinkTypePtr>& env, const TermPtr& t, LanguageId lang,
                              Ext ext, std::optional<LinkTypePtr> annotation = std::nullopt);
LinkJudgment typecheck_linked(const TermPtr& t, LanguageId lang, Ext ext,
                              std::optional<LinkTypePtr> annotation = std::nullopt);

// Reasoning-only constructs must not show up in code written by the
// programmer; annotations are always permitted.
struct SourceAudit {
    bool ok = true;
    std::vector<TermPtr> violations;
};
SourceAudit check_programmer_source(const TermPtr& t, LanguageId lang, Ext ext);

// True iff the body lies in the strongly normalizing fragment: no store
// operations and every applied function position is a terminating arrow.
bool check_termination(const TermPtr& body);
bool check_termination(TypeEnv<LinkTypePtr>& env, const TermPtr& body);

// Straight-line cost analysis: one unit per arithmetic op and per beta step;
// calls through known-cost arrows add their bound plus one.  Store operations
// and unknown-cost calls make the bound unknown.
CostBound infer_cost(const TermPtr& body);
CostBound infer_cost(TypeEnv<LinkTypePtr>& env, const TermPtr& body);

}  // namespace linkc
