#include <cctype>
#include <unordered_set>
#include <vector>

#include "linkc/syntax.hpp"

namespace linkc {

namespace {

// --- s-expression reader ---------------------------------------------------

struct Sexp {
    bool is_list = false;
    std::string atom;         // valid when !is_list
    std::vector<Sexp> items;  // valid when is_list
    SrcPos pos;
};

class Reader {
  public:
    explicit Reader(const std::string& text) : text_(text) {}

    Sexp read_all() {
        skip_ws();
        if (eof()) throw ParseError(line_, col_, "a term");
        Sexp s = read();
        skip_ws();
        if (!eof()) throw ParseError(line_, col_, "end of input");
        return s;
    }

  private:
    bool eof() const { return i_ >= text_.size(); }
    char peek() const { return text_[i_]; }
    void advance() {
        if (text_[i_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++i_;
    }
    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    static bool atom_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
    }

    Sexp read() {
        skip_ws();
        if (eof()) throw ParseError(line_, col_, "a term");
        SrcPos pos{line_, col_};
        if (peek() == '(') {
            advance();
            Sexp s;
            s.is_list = true;
            s.pos = pos;
            while (true) {
                skip_ws();
                if (eof()) throw ParseError(line_, col_, "')'");
                if (peek() == ')') { advance(); break; }
                s.items.push_back(read());
            }
            return s;
        }
        if (peek() == ')') throw ParseError(line_, col_, "a term");
        Sexp s;
        s.pos = pos;
        while (!eof() && atom_char(peek())) {
            s.atom.push_back(peek());
            advance();
        }
        return s;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

// --- atom classification ----------------------------------------------------

const std::unordered_set<std::string> kReserved = {
    "unit",  "lam",  "app",  "let",  "seq",    "ref",  "assign", "deref", "throw",
    "catch", "val",  "exc",  "int",  "void",   "lin",  "term",   "pure",  "impure",
    "R",     "E",    "C",    "->",   ":",      "+",    "*",      "-",     "loc",
    "unknown",
};

bool is_integer(const std::string& a) {
    std::size_t i = (a.size() > 1 && (a[0] == '-' || a[0] == '+')) ? 1 : 0;
    if (i >= a.size()) return false;
    for (; i < a.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(a[i]))) return false;
    return true;
}

bool is_identifier(const std::string& a) {
    if (a.empty() || kReserved.count(a)) return false;
    if (!std::isalpha(static_cast<unsigned char>(a[0])) && a[0] != '_') return false;
    for (char c : a)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
    return true;
}

// Literals of any length are accepted; the value wraps to 64 bits, matching
// the wrap-around evaluation arithmetic.
std::int64_t integer_value(const std::string& a) {
    bool neg = a[0] == '-';
    std::size_t i = (a[0] == '-' || a[0] == '+') ? 1 : 0;
    std::uint64_t v = 0;
    for (; i < a.size(); ++i) v = v * 10u + static_cast<std::uint64_t>(a[i] - '0');
    if (neg) v = ~v + 1u;
    return static_cast<std::int64_t>(v);
}

// --- type grammars -----------------------------------------------------------

[[noreturn]] void fail(const Sexp& s, const std::string& expected) {
    throw ParseError(s.pos.line, s.pos.col, expected);
}

const Sexp& arg(const Sexp& s, std::size_t n, std::size_t arity, const std::string& what) {
    if (s.items.size() != arity + 1) fail(s, what);
    return s.items[n + 1];
}

bool head_is(const Sexp& s, const std::string& sym) {
    return s.is_list && !s.items.empty() && !s.items[0].is_list && s.items[0].atom == sym;
}

SourceTypePtr source_type(const Sexp& s, Lang base) {
    if (!s.is_list) {
        if (s.atom == "unit") return src_unit();
        if (s.atom == "int") return src_int();
        fail(s, "a type");
    }
    if (head_is(s, "ref")) {
        if (base == Lang::Stlc) fail(s, "a type without ref (not in this language)");
        return src_ref(source_type(arg(s, 0, 1, "(ref type)"), base));
    }
    if (head_is(s, "->"))
        return src_arrow(source_type(arg(s, 0, 2, "(-> type type)"), base),
                         source_type(arg(s, 1, 2, "(-> type type)"), base));
    fail(s, "a type");
}

LinkTypePtr link_type(const Sexp& s, Ext ext) {
    if (!s.is_list) {
        if (s.atom == "unit") return lt_unit();
        if (s.atom == "int") return lt_int();
        fail(s, "a linking type");
    }
    if (head_is(s, "ref")) return lt_ref(link_type(arg(s, 0, 1, "(ref type)"), ext));
    if (head_is(s, "lin")) {
        if (ext != Ext::Linear) fail(s, "a linking type (lin requires the linear extension)");
        auto inner = link_type(arg(s, 0, 1, "(lin shape)"), ext);
        if (inner->kind == LinkType::Kind::Linear) fail(s, "a non-linear shape under lin");
        return lt_linear(inner);
    }
    if (head_is(s, "->")) {
        const Sexp& dom = arg(s, 0, 2, "(-> type codomain)");
        const Sexp& cod = arg(s, 1, 2, "(-> type codomain)");
        LinkTypePtr d = link_type(dom, ext);
        switch (ext) {
        case Ext::HeapEffect: {
            if (!head_is(cod, "R")) fail(cod, "(R pure|impure type)");
            const Sexp& e = arg(cod, 0, 2, "(R pure|impure type)");
            const Sexp& r = arg(cod, 1, 2, "(R pure|impure type)");
            Effect eff;
            if (!e.is_list && e.atom == "pure") eff = Effect::Pure;
            else if (!e.is_list && e.atom == "impure") eff = Effect::Impure;
            else fail(e, "pure or impure");
            return lt_arrow_r(d, eff, link_type(r, ext));
        }
        case Ext::Linear: return lt_arrow(d, link_type(cod, ext));
        case Ext::Terminating:
            if (head_is(cod, "term"))
                return lt_arrow_term(d, link_type(arg(cod, 0, 1, "(term type)"), ext));
            return lt_arrow(d, link_type(cod, ext));
        case Ext::Cost: {
            if (!head_is(cod, "C")) fail(cod, "(C unknown|N type)");
            const Sexp& n = arg(cod, 0, 2, "(C unknown|N type)");
            const Sexp& r = arg(cod, 1, 2, "(C unknown|N type)");
            CostBound cb = CostBound::unknown();
            if (!n.is_list && n.atom != "unknown") {
                if (!is_integer(n.atom) || n.atom[0] == '-') fail(n, "unknown or a nonnegative cost");
                cb = CostBound::known(integer_value(n.atom));
            }
            return lt_arrow_cost(d, cb, link_type(r, ext));
        }
        }
    }
    fail(s, "a linking type");
}

TargetTypePtr target_type(const Sexp& s) {
    if (!s.is_list) {
        if (s.atom == "void") return tt_void();
        if (s.atom == "unit") return tt_unit();
        if (s.atom == "int") return tt_int();
        fail(s, "a target type");
    }
    if (head_is(s, "ref")) return tt_ref(target_type(arg(s, 0, 1, "(ref type)")));
    if (head_is(s, "->")) {
        const Sexp& dom = arg(s, 0, 2, "(-> type (E eff exn type))");
        const Sexp& cod = arg(s, 1, 2, "(-> type (E eff exn type))");
        if (!head_is(cod, "E")) fail(cod, "(E pure|impure exntype type)");
        if (cod.items.size() != 4) fail(cod, "(E pure|impure exntype type)");
        const Sexp& e = cod.items[1];
        Effect eff;
        if (!e.is_list && e.atom == "pure") eff = Effect::Pure;
        else if (!e.is_list && e.atom == "impure") eff = Effect::Impure;
        else fail(e, "pure or impure");
        return tt_arrow(target_type(dom), comp_of(eff, target_type(cod.items[2]),
                                                  target_type(cod.items[3])));
    }
    fail(s, "a target type");
}

// A lambda annotation in a kappa-language is either a plain source type
// (lifted by kappa+ later) or an explicit linking type. A form parses as a
// source annotation only when it lies entirely in the base-language grammar.
bool shape_is_source_type(const Sexp& s, Lang base) {
    if (!s.is_list) return s.atom == "unit" || s.atom == "int";
    if (head_is(s, "ref"))
        return base != Lang::Stlc && s.items.size() == 2 && shape_is_source_type(s.items[1], base);
    if (head_is(s, "->"))
        return s.items.size() == 3 && shape_is_source_type(s.items[1], base) &&
               shape_is_source_type(s.items[2], base);
    return false;
}

ParamAnnot annot_for(const Sexp& s, LanguageId lang) {
    switch (lang.tag) {
    case Lang::Stlc:
    case Lang::LamRef: return source_type(s, lang.tag);
    case Lang::Target: return target_type(s);
    case Lang::StlcK:
    case Lang::LamRefK:
        if (shape_is_source_type(s, lang.base())) return source_type(s, lang.base());
        return link_type(s, *lang.extension);
    }
    fail(s, "a type");
}

// --- term grammar -------------------------------------------------------------

bool store_ops_in_grammar(LanguageId lang) {
    switch (lang.tag) {
    case Lang::Stlc: return false;
    case Lang::LamRef:
    case Lang::LamRefK:
    case Lang::Target: return true;
    case Lang::StlcK: return lang.extension == Ext::HeapEffect;  // reasoning-only terms
    }
    return false;
}

TermPtr term(const Sexp& s, LanguageId lang) {
    if (!s.is_list) {
        if (s.atom == "unit") return t_unit(lang, s.pos);
        if (is_integer(s.atom)) return t_int(lang, integer_value(s.atom), s.pos);
        if (is_identifier(s.atom)) return t_var(lang, s.atom, s.pos);
        fail(s, "a term");
    }
    if (s.items.empty() || s.items[0].is_list) fail(s, "an operator");
    const std::string& head = s.items[0].atom;

    if (head == "lam") {
        if (s.items.size() != 4) fail(s, "(lam x type body)");
        const Sexp& binder = s.items[1];
        if (binder.is_list || !is_identifier(binder.atom)) fail(binder, "a binder name");
        return t_lam(lang, binder.atom, annot_for(s.items[2], lang), term(s.items[3], lang), s.pos);
    }
    if (head == "app")
        return t_app(lang, term(arg(s, 0, 2, "(app fun arg)"), lang),
                     term(arg(s, 1, 2, "(app fun arg)"), lang), s.pos);
    if (head == "+" || head == "*" || head == "-") {
        TermKind k = head == "+" ? TermKind::Add : head == "*" ? TermKind::Mul : TermKind::Sub;
        return t_arith(lang, k, term(arg(s, 0, 2, "(op lhs rhs)"), lang),
                       term(arg(s, 1, 2, "(op lhs rhs)"), lang), s.pos);
    }
    if (head == "let") {
        if (s.items.size() != 4) fail(s, "(let x rhs body)");
        const Sexp& binder = s.items[1];
        if (binder.is_list || !is_identifier(binder.atom)) fail(binder, "a binder name");
        return t_let(lang, binder.atom, term(s.items[2], lang), term(s.items[3], lang), s.pos);
    }
    if (head == "seq") {
        if (s.items.size() < 3) fail(s, "(seq e1 e2 ...)");
        TermPtr t = term(s.items.back(), lang);
        for (std::size_t i = s.items.size() - 2; i >= 1; --i)
            t = t_seq(lang, term(s.items[i], lang), t, s.items[i].pos);
        return t;
    }
    if (head == "ref" || head == "assign" || head == "deref") {
        if (!store_ops_in_grammar(lang))
            fail(s, "a term without store operations (not in this language)");
        if (head == "ref") return t_ref(lang, term(arg(s, 0, 1, "(ref e)"), lang), s.pos);
        if (head == "deref") return t_deref(lang, term(arg(s, 0, 1, "(deref e)"), lang), s.pos);
        return t_assign(lang, term(arg(s, 0, 2, "(assign e e)"), lang),
                        term(arg(s, 1, 2, "(assign e e)"), lang), s.pos);
    }
    if (head == "throw") {
        if (lang.tag != Lang::Target) fail(s, "a term without throw (target only)");
        return t_throw(lang, term(arg(s, 0, 1, "(throw e)"), lang), s.pos);
    }
    if (head == "catch") {
        if (lang.tag != Lang::Target) fail(s, "a term without catch (target only)");
        if (s.items.size() != 4) fail(s, "(catch e (val x e1) (exc y e2))");
        const Sexp& vb = s.items[2];
        const Sexp& eb = s.items[3];
        if (!head_is(vb, "val") || vb.items.size() != 3 || vb.items[1].is_list ||
            !is_identifier(vb.items[1].atom))
            fail(vb, "(val x e)");
        if (!head_is(eb, "exc") || eb.items.size() != 3 || eb.items[1].is_list ||
            !is_identifier(eb.items[1].atom))
            fail(eb, "(exc y e)");
        return t_catch(lang, term(s.items[1], lang), vb.items[1].atom, term(vb.items[2], lang),
                       eb.items[1].atom, term(eb.items[2], lang), s.pos);
    }
    if (head == ":") fail(s, "a term ((: e type) is only legal at top level)");
    fail(s, "a known form");
}

}  // namespace

TermPtr parse(const std::string& text, LanguageId lang) {
    Reader reader(text);
    return term(reader.read_all(), lang);
}

ParsedComponent parse_component(const std::string& text, LanguageId lang) {
    Reader reader(text);
    Sexp top = reader.read_all();
    if (head_is(top, ":")) {
        if (!lang.is_extended())
            fail(top, "a plain term (linking-type ascription requires an extended language)");
        if (top.items.size() != 3) fail(top, "(: e linktype)");
        return {term(top.items[1], lang), link_type(top.items[2], *lang.extension)};
    }
    return {term(top, lang), std::nullopt};
}

SourceTypePtr parse_source_type(const std::string& text, Lang base) {
    Reader reader(text);
    return source_type(reader.read_all(), base);
}

LinkTypePtr parse_link_type(const std::string& text, Ext ext) {
    Reader reader(text);
    return link_type(reader.read_all(), ext);
}

TargetTypePtr parse_target_type(const std::string& text) {
    Reader reader(text);
    return target_type(reader.read_all());
}

std::optional<LanguageId> language_for_path(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return std::nullopt;
    std::string ext = path.substr(dot + 1);
    if (ext == "stlc") return LanguageId::stlc();
    if (ext == "lref") return LanguageId::lamref();
    if (ext == "stlck") return LanguageId::stlck();
    if (ext == "lrefk") return LanguageId::lamrefk();
    if (ext == "tgt") return LanguageId::target();
    return std::nullopt;
}

}  // namespace linkc
