// Type ASTs for every language in the toolchain: the two source calculi,
// their linking-type extensions, and the effect-typed target.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace linkc {

// ---------------------------------------------------------------------------
// Languages and extensions

enum class Lang { Stlc, LamRef, StlcK, LamRefK, Target };

enum class Ext { HeapEffect, Linear, Terminating, Cost };

struct LanguageId {
    Lang tag = Lang::Stlc;
    std::optional<Ext> extension;  // present only on StlcK / LamRefK

    static LanguageId stlc() { return {Lang::Stlc, std::nullopt}; }
    static LanguageId lamref() { return {Lang::LamRef, std::nullopt}; }
    static LanguageId stlck(Ext e = Ext::HeapEffect) { return {Lang::StlcK, e}; }
    static LanguageId lamrefk(Ext e = Ext::HeapEffect) { return {Lang::LamRefK, e}; }
    static LanguageId target() { return {Lang::Target, std::nullopt}; }

    bool is_extended() const { return tag == Lang::StlcK || tag == Lang::LamRefK; }
    // The unextended calculus this language's programs are written in.
    Lang base() const {
        switch (tag) {
        case Lang::StlcK: return Lang::Stlc;
        case Lang::LamRefK: return Lang::LamRef;
        default: return tag;
        }
    }
    bool operator==(const LanguageId&) const = default;
};

std::string lang_name(Lang l);
std::string ext_name(Ext e);
std::optional<Lang> lang_from_name(const std::string& s);
std::optional<Ext> ext_from_name(const std::string& s);

// ---------------------------------------------------------------------------
// Effect modality: pure (o) / impure (*), ordered o <= *.

enum class Effect { Pure, Impure };

inline Effect join(Effect a, Effect b) {
    return (a == Effect::Pure && b == Effect::Pure) ? Effect::Pure : Effect::Impure;
}
inline Effect join(Effect a, Effect b, Effect c) { return join(join(a, b), c); }
// o <= *, never the reverse.
inline bool effect_le(Effect a, Effect b) {
    return a == Effect::Pure || b == Effect::Impure;
}

// ---------------------------------------------------------------------------
// Cost bounds for the cost extension: known N or unknown.

struct CostBound {
    std::optional<std::int64_t> n;  // engaged = Known(n), n >= 0

    static CostBound known(std::int64_t k) { return {k}; }
    static CostBound unknown() { return {std::nullopt}; }
    bool is_known() const { return n.has_value(); }
    bool operator==(const CostBound&) const = default;
};

// ---------------------------------------------------------------------------
// Source types: unit | int | ref t | t -> t.  Ref is legal only in LamRef.

struct SourceType;
using SourceTypePtr = std::shared_ptr<const SourceType>;

struct SourceType {
    enum class Kind { Unit, Int, Ref, Arrow };
    Kind kind = Kind::Unit;
    SourceTypePtr a, b;  // Ref: a;  Arrow: a -> b
};

SourceTypePtr src_unit();
SourceTypePtr src_int();
SourceTypePtr src_ref(SourceTypePtr t);
SourceTypePtr src_arrow(SourceTypePtr a, SourceTypePtr b);
bool equal(const SourceTypePtr& x, const SourceTypePtr& y);
bool source_type_legal(const SourceTypePtr& t, Lang base);  // no ref under Stlc
int type_depth(const SourceTypePtr& t);

// ---------------------------------------------------------------------------
// Linking types.  One AST covers all four extensions; each constructor is
// legal only under its extension:
//   HeapEffect:  unit | int | ref t | t -> R^eps t          (ArrowR)
//   Linear:      phi | phi^L, phi ::= unit|int|ref t|t->t   (Arrow, Linear)
//   Terminating: unit | int | ref t | t -> t| | t -> t      (ArrowTerm, Arrow)
//   Cost:        unit | int | ref t | t -> C^* t | t -> C^N t   (ArrowCost)

struct LinkType;
using LinkTypePtr = std::shared_ptr<const LinkType>;

struct LinkType {
    enum class Kind { Unit, Int, Ref, ArrowR, Arrow, ArrowTerm, ArrowCost, Linear };
    Kind kind = Kind::Unit;
    LinkTypePtr a, b;          // Ref/Linear: a;  arrows: a -> b
    Effect eff = Effect::Pure; // ArrowR latent effect
    CostBound cost;            // ArrowCost
};

LinkTypePtr lt_unit();
LinkTypePtr lt_int();
LinkTypePtr lt_ref(LinkTypePtr t);
LinkTypePtr lt_arrow_r(LinkTypePtr a, Effect e, LinkTypePtr b);
LinkTypePtr lt_arrow(LinkTypePtr a, LinkTypePtr b);
LinkTypePtr lt_arrow_term(LinkTypePtr a, LinkTypePtr b);
LinkTypePtr lt_arrow_cost(LinkTypePtr a, CostBound c, LinkTypePtr b);
LinkTypePtr lt_linear(LinkTypePtr shape);
bool equal(const LinkTypePtr& x, const LinkTypePtr& y);
// True iff every constructor in t belongs to ext's grammar.
bool link_type_legal(const LinkTypePtr& t, Ext ext);
int type_depth(const LinkTypePtr& t);

// ---------------------------------------------------------------------------
// Target types: 0 | unit | int | ref t | t -> E^eps_texc t.
// An arrow's codomain is always a computation type.

struct TargetType;
using TargetTypePtr = std::shared_ptr<const TargetType>;

struct CompType {
    Effect eff = Effect::Pure;
    TargetTypePtr exn;     // Void0 = cannot raise
    TargetTypePtr result;
};

struct TargetType {
    enum class Kind { Void0, Unit, Int, Ref, Arrow };
    Kind kind = Kind::Unit;
    TargetTypePtr a;                // Ref: a;  Arrow: domain
    std::shared_ptr<const CompType> comp;  // Arrow codomain
};

TargetTypePtr tt_void();
TargetTypePtr tt_unit();
TargetTypePtr tt_int();
TargetTypePtr tt_ref(TargetTypePtr t);
TargetTypePtr tt_arrow(TargetTypePtr dom, CompType c);
CompType comp_of(Effect e, TargetTypePtr exn, TargetTypePtr result);
bool equal(const TargetTypePtr& x, const TargetTypePtr& y);
bool equal(const CompType& x, const CompType& y);
int type_depth(const TargetTypePtr& t);

// Subtyping used by the target checker:
//   E^r_x t <= E^r'_x' t  when r <= r' and (x = 0 or x = x'); result fixed.
bool comp_le(const CompType& c, const CompType& d);
bool target_le(const TargetTypePtr& s, const TargetTypePtr& t);

}  // namespace linkc
