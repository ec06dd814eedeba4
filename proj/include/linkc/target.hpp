// The target language: modal type checker separating pure computations from
// heap-effecting or exception-raising ones, and a fuel-based evaluator with a
// store and exception unwinding.
#pragma once

#include <map>

#include "linkc/source_core.hpp"
#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

// Store typing: only needed to check mid-evaluation terms in tests; source
// files cannot mention locations.
using StoreTyping = std::map<std::int64_t, TargetTypePtr>;

TargetTypePtr typecheck_target_value(TypeEnv<TargetTypePtr>& env, const TermPtr& v,
                                     const StoreTyping* store_ty = nullptr);

// declared_exn = nullptr lets every throw's payload type determine the
// exception type; otherwise each throw must match it (Void0 forbids throwing).
CompType typecheck_target_comp(TypeEnv<TargetTypePtr>& env, const TermPtr& e,
                               TargetTypePtr declared_exn = nullptr,
                               const StoreTyping* store_ty = nullptr);
CompType typecheck_target_comp(const TermPtr& e, TargetTypePtr declared_exn = nullptr);

// Synthesize-and-subsume: true iff e checks at a subtype of `expected`.
bool target_checks_at(const TermPtr& e, const CompType& expected);

Outcome eval_target(const TermPtr& e, Store store, std::int64_t fuel,
                    EvalStats* stats = nullptr);

}  // namespace linkc
