// Concrete syntax: fully parenthesized s-expressions, one term per file.
// Each language admits only its own grammar; violations are parse errors
// with position info.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "linkc/term.hpp"
#include "linkc/types.hpp"

namespace linkc {

struct ParseError : std::runtime_error {
    int line, col;
    std::string expected;
    ParseError(int line_, int col_, const std::string& expected_)
        : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": expected " +
                             expected_),
          line(line_), col(col_), expected(expected_) {}
};

TermPtr parse(const std::string& text, LanguageId lang);

// A component file may ascribe a linking type to its term: (: e linktype).
// Ascription is legal only at top level and only in the extended languages.
struct ParsedComponent {
    TermPtr term;
    std::optional<LinkTypePtr> annotation;
};
ParsedComponent parse_component(const std::string& text, LanguageId lang);

SourceTypePtr parse_source_type(const std::string& text, Lang base);
LinkTypePtr parse_link_type(const std::string& text, Ext ext);
TargetTypePtr parse_target_type(const std::string& text);

std::string print_term(const TermPtr& t);
std::string print_type(const SourceTypePtr& t);
std::string print_type(const LinkTypePtr& t);
std::string print_type(const TargetTypePtr& t);
std::string print_comp(const CompType& c);

// Maps .stlc/.lref/.stlck/.lrefk/.tgt to a language; nullopt otherwise.
std::optional<LanguageId> language_for_path(const std::string& path);

}  // namespace linkc
