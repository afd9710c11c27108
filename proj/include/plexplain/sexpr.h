#ifndef PLEXPLAIN_SEXPR_H
#define PLEXPLAIN_SEXPR_H

#include <string>
#include <string_view>
#include <vector>

namespace plexplain {
// S-expression node with source position. Symbols are lower-cased.
struct SExpr {
    bool is_list = false;
    std::string symbol;
    std::vector<SExpr> items;
    int line = 1;
    int column = 1;

    bool is_symbol() const {return !is_list;}
    bool is_symbol(std::string_view s) const {return !is_list && symbol == s;}
    // True if this is a list whose first element is the given symbol.
    bool is_form(std::string_view head) const {
        return is_list && !items.empty() && items[0].is_symbol(head);
    }
    std::string to_string() const;
};

// Parses every top-level expression; ';' starts a comment.
std::vector<SExpr> parse_sexprs(std::string_view text);
SExpr parse_single_sexpr(std::string_view text);

[[noreturn]] void fail_at(const SExpr &where, const std::string &message);
}

#endif
