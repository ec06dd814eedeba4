#include <sstream>

#include "linkc/syntax.hpp"

namespace linkc {

namespace {

void put(std::ostream& os, const SourceTypePtr& t) {
    switch (t->kind) {
    case SourceType::Kind::Unit: os << "unit"; return;
    case SourceType::Kind::Int: os << "int"; return;
    case SourceType::Kind::Ref:
        os << "(ref ";
        put(os, t->a);
        os << ")";
        return;
    case SourceType::Kind::Arrow:
        os << "(-> ";
        put(os, t->a);
        os << " ";
        put(os, t->b);
        os << ")";
        return;
    }
}

void put(std::ostream& os, const LinkTypePtr& t) {
    switch (t->kind) {
    case LinkType::Kind::Unit: os << "unit"; return;
    case LinkType::Kind::Int: os << "int"; return;
    case LinkType::Kind::Ref:
        os << "(ref ";
        put(os, t->a);
        os << ")";
        return;
    case LinkType::Kind::Linear:
        os << "(lin ";
        put(os, t->a);
        os << ")";
        return;
    case LinkType::Kind::ArrowR:
        os << "(-> ";
        put(os, t->a);
        os << " (R " << (t->eff == Effect::Pure ? "pure" : "impure") << " ";
        put(os, t->b);
        os << "))";
        return;
    case LinkType::Kind::Arrow:
        os << "(-> ";
        put(os, t->a);
        os << " ";
        put(os, t->b);
        os << ")";
        return;
    case LinkType::Kind::ArrowTerm:
        os << "(-> ";
        put(os, t->a);
        os << " (term ";
        put(os, t->b);
        os << "))";
        return;
    case LinkType::Kind::ArrowCost:
        os << "(-> ";
        put(os, t->a);
        os << " (C ";
        if (t->cost.is_known()) os << *t->cost.n;
        else os << "unknown";
        os << " ";
        put(os, t->b);
        os << "))";
        return;
    }
}

void put(std::ostream& os, const TargetTypePtr& t) {
    switch (t->kind) {
    case TargetType::Kind::Void0: os << "void"; return;
    case TargetType::Kind::Unit: os << "unit"; return;
    case TargetType::Kind::Int: os << "int"; return;
    case TargetType::Kind::Ref:
        os << "(ref ";
        put(os, t->a);
        os << ")";
        return;
    case TargetType::Kind::Arrow:
        os << "(-> ";
        put(os, t->a);
        os << " (E " << (t->comp->eff == Effect::Pure ? "pure" : "impure") << " ";
        put(os, t->comp->exn);
        os << " ";
        put(os, t->comp->result);
        os << "))";
        return;
    }
}

void put_annot(std::ostream& os, const ParamAnnot& a) {
    if (auto* s = std::get_if<SourceTypePtr>(&a)) put(os, *s);
    else if (auto* l = std::get_if<LinkTypePtr>(&a)) put(os, *l);
    else put(os, std::get<TargetTypePtr>(a));
}

void put(std::ostream& os, const TermPtr& t) {
    switch (t->kind) {
    case TermKind::UnitVal: os << "unit"; return;
    case TermKind::IntLit: os << t->num; return;
    case TermKind::Var: os << t->var; return;
    case TermKind::Loc: os << "(loc " << t->num << ")"; return;  // run-time only, unparseable
    case TermKind::Lam:
        os << "(lam " << t->var << " ";
        if (t->annot) put_annot(os, *t->annot);
        else os << "_";  // desugared binder; printable only through let/seq below
        os << " ";
        put(os, t->a);
        os << ")";
        return;
    case TermKind::App:
        // let/seq are sugar for applying an unannotated lambda.
        if (t->a->kind == TermKind::Lam && !t->a->annot) {
            if (t->a->var == kSeqBinder) {
                os << "(seq ";
                put(os, t->b);
                os << " ";
                put(os, t->a->a);
                os << ")";
            } else {
                os << "(let " << t->a->var << " ";
                put(os, t->b);
                os << " ";
                put(os, t->a->a);
                os << ")";
            }
            return;
        }
        os << "(app ";
        put(os, t->a);
        os << " ";
        put(os, t->b);
        os << ")";
        return;
    case TermKind::Add:
    case TermKind::Mul:
    case TermKind::Sub:
        os << "(" << (t->kind == TermKind::Add ? "+" : t->kind == TermKind::Mul ? "*" : "-")
           << " ";
        put(os, t->a);
        os << " ";
        put(os, t->b);
        os << ")";
        return;
    case TermKind::RefNew:
        os << "(ref ";
        put(os, t->a);
        os << ")";
        return;
    case TermKind::Assign:
        os << "(assign ";
        put(os, t->a);
        os << " ";
        put(os, t->b);
        os << ")";
        return;
    case TermKind::Deref:
        os << "(deref ";
        put(os, t->a);
        os << ")";
        return;
    case TermKind::Throw:
        os << "(throw ";
        put(os, t->a);
        os << ")";
        return;
    case TermKind::Catch:
        os << "(catch ";
        put(os, t->a);
        os << " (val " << t->var << " ";
        put(os, t->b);
        os << ") (exc " << t->var2 << " ";
        put(os, t->c);
        os << "))";
        return;
    }
}

}  // namespace

std::string print_term(const TermPtr& t) {
    std::ostringstream os;
    put(os, t);
    return os.str();
}

std::string print_type(const SourceTypePtr& t) {
    std::ostringstream os;
    put(os, t);
    return os.str();
}

std::string print_type(const LinkTypePtr& t) {
    std::ostringstream os;
    put(os, t);
    return os.str();
}

std::string print_type(const TargetTypePtr& t) {
    std::ostringstream os;
    put(os, t);
    return os.str();
}

std::string print_comp(const CompType& c) {
    std::ostringstream os;
    os << "(E " << (c.eff == Effect::Pure ? "pure" : "impure") << " ";
    put(os, c.exn);
    os << " ";
    put(os, c.result);
    os << ")";
    return os.str();
}

}  // namespace linkc
