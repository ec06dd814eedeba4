// Type checkers and call-by-value evaluators for the unextended source
// languages.  The store and outcome types here are shared with the target
// evaluator.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

struct TypeError : std::runtime_error {
    SrcPos pos;
    TypeError(SrcPos p, const std::string& msg)
        : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg),
          pos(p) {}
};

// Locations are never reused within one evaluation.
class Store {
  public:
    std::int64_t alloc(TermPtr value) {
        std::int64_t loc = next_++;
        cells_.emplace(loc, std::move(value));
        return loc;
    }
    const TermPtr* read(std::int64_t loc) const {
        auto it = cells_.find(loc);
        return it == cells_.end() ? nullptr : &it->second;
    }
    bool write(std::int64_t loc, TermPtr value) {
        auto it = cells_.find(loc);
        if (it == cells_.end()) return false;
        it->second = std::move(value);
        return true;
    }
    std::size_t size() const { return cells_.size(); }

  private:
    std::map<std::int64_t, TermPtr> cells_;
    std::int64_t next_ = 0;
};

struct Outcome {
    enum class Kind { Value, Exception, OutOfFuel, Stuck };
    Kind kind = Kind::Stuck;
    TermPtr term;        // Value / Exception payload
    Store store;         // final store for Value / Exception
    std::string reason;  // Stuck

    bool is_value() const { return kind == Kind::Value; }
};

// Work counters filled during evaluation; cost of a run is
// beta_steps + arith_ops (the model the cost extension types against).
struct EvalStats {
    std::int64_t beta_steps = 0;
    std::int64_t arith_ops = 0;
    std::int64_t store_ops = 0;
    std::int64_t cost() const { return beta_steps + arith_ops; }
};

constexpr std::int64_t kDefaultFuel = 100000;

SourceTypePtr typecheck_source(TypeEnv<SourceTypePtr>& env, const TermPtr& t, LanguageId lang);
SourceTypePtr typecheck_source(const TermPtr& t, LanguageId lang);

// Deterministic left-to-right CBV; one fuel unit per beta step, primitive op,
// or store op.  Evaluation owns a private store.
Outcome eval_source(const TermPtr& t, LanguageId lang, std::int64_t fuel,
                    EvalStats* stats = nullptr);

}  // namespace linkc
