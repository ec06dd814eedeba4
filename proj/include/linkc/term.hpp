// Term AST shared by every language, tagged with the language it was written
// in.  Extension-only and run-time-only constructors are members of the same
// AST; the grammars decide where they may appear.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "linkc/types.hpp"

namespace linkc {

struct SrcPos {
    int line = 0;  // 1-based; 0 = synthesized node
    int col = 0;
};

// A lambda parameter is annotated with a type from the language the lambda
// was written in.  In the kappa-extended languages the annotation may be a
// plain source type (lifted by kappa+ during checking) or an explicit linking
// type.  Desugared let/seq binders carry no annotation at all.
using ParamAnnot = std::variant<SourceTypePtr, LinkTypePtr, TargetTypePtr>;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind {
    UnitVal, IntLit, Var, Lam, App,
    Add, Mul, Sub,
    RefNew, Assign, Deref, Loc,
    Throw, Catch,
};

struct Term {
    TermKind kind = TermKind::UnitVal;
    LanguageId lang;
    SrcPos pos;

    std::int64_t num = 0;             // IntLit value / Loc index
    std::string var;                  // Var name / Lam binder / Catch val binder
    std::string var2;                 // Catch exc binder
    std::optional<ParamAnnot> annot;  // Lam only
    TermPtr a, b, c;                  // children (see builders)
};

// fresh binder used by the seq desugaring; not expressible as an identifier,
// so nested shadowing can never capture a programmer variable.
inline const std::string kSeqBinder = "%seq";

TermPtr t_unit(LanguageId lang, SrcPos pos = {});
TermPtr t_int(LanguageId lang, std::int64_t n, SrcPos pos = {});
TermPtr t_var(LanguageId lang, std::string name, SrcPos pos = {});
TermPtr t_lam(LanguageId lang, std::string binder, std::optional<ParamAnnot> annot, TermPtr body,
              SrcPos pos = {});
TermPtr t_app(LanguageId lang, TermPtr fun, TermPtr arg, SrcPos pos = {});
TermPtr t_arith(LanguageId lang, TermKind op, TermPtr lhs, TermPtr rhs, SrcPos pos = {});
TermPtr t_ref(LanguageId lang, TermPtr init, SrcPos pos = {});
TermPtr t_assign(LanguageId lang, TermPtr loc, TermPtr value, SrcPos pos = {});
TermPtr t_deref(LanguageId lang, TermPtr loc, SrcPos pos = {});
TermPtr t_loc(LanguageId lang, std::int64_t index);
TermPtr t_throw(LanguageId lang, TermPtr value, SrcPos pos = {});
TermPtr t_catch(LanguageId lang, TermPtr scrutinee, std::string val_binder, TermPtr val_body,
                std::string exc_binder, TermPtr exc_body, SrcPos pos = {});

// let/seq are sugar for application, kept as the spec's core grammar.
TermPtr t_let(LanguageId lang, std::string binder, TermPtr rhs, TermPtr body, SrcPos pos = {});
TermPtr t_seq(LanguageId lang, TermPtr first, TermPtr rest, SrcPos pos = {});

bool is_value(const Term& t);
bool equal(const TermPtr& x, const TermPtr& y);  // structural; ignores lang tags and positions

// Capture-avoiding substitution of a closed value for a free variable.
TermPtr subst(const TermPtr& body, const std::string& name, const TermPtr& value);

// Free occurrence count of `name` in `t` (stops under shadowing binders).
int count_free_occurrences(const TermPtr& t, const std::string& name);
bool is_closed(const TermPtr& t);

int term_size(const TermPtr& t);

// ---------------------------------------------------------------------------
// Ordered type environment with lexical shadowing.

template <class T>
class TypeEnv {
  public:
    void bind(std::string name, T type) { entries_.emplace_back(std::move(name), std::move(type)); }
    void pop() { entries_.pop_back(); }

    const T* lookup(const std::string& name) const {
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }
    std::size_t size() const { return entries_.size(); }
    const std::pair<std::string, T>& at(std::size_t i) const { return entries_[i]; }

  private:
    std::vector<std::pair<std::string, T>> entries_;
};

// RAII scope for a single binding.
template <class T>
class Scoped {
  public:
    Scoped(TypeEnv<T>& env, std::string name, T type) : env_(env) {
        env_.bind(std::move(name), std::move(type));
    }
    ~Scoped() { env_.pop(); }
    Scoped(const Scoped&) = delete;
    Scoped& operator=(const Scoped&) = delete;

  private:
    TypeEnv<T>& env_;
};

}  // namespace linkc
