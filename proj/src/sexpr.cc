#include "plexplain/sexpr.h"

#include "plexplain/errors.h"

#include <cctype>

using namespace std;

namespace plexplain {
string SExpr::to_string() const {
    if (!is_list)
        return symbol;
    string result = "(";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i)
            result += " ";
        result += items[i].to_string();
    }
    return result + ")";
}

void fail_at(const SExpr &where, const string &message) {
    throw ParseError(message, where.line, where.column);
}

namespace {
class Reader {
    string_view text;
    size_t pos = 0;
    int line = 1;
    int column = 1;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_space() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n')
                    advance();
            } else if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

public:
    explicit Reader(string_view text) : text(text) {}

    bool at_end() {
        skip_space();
        return pos >= text.size();
    }

    SExpr read() {
        skip_space();
        if (pos >= text.size())
            throw ParseError("unexpected end of input", line, column);
        SExpr node;
        node.line = line;
        node.column = column;
        char c = text[pos];
        if (c == '(') {
            node.is_list = true;
            advance();
            while (true) {
                skip_space();
                if (pos >= text.size())
                    throw ParseError("unbalanced parenthesis opened here",
                                     node.line, node.column);
                if (text[pos] == ')') {
                    advance();
                    break;
                }
                node.items.push_back(read());
            }
            return node;
        }
        if (c == ')')
            throw ParseError("unexpected ')'", line, column);
        while (pos < text.size()) {
            char ch = text[pos];
            if (isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ';')
                break;
            node.symbol += static_cast<char>(tolower(static_cast<unsigned char>(ch)));
            advance();
        }
        return node;
    }
};
}

vector<SExpr> parse_sexprs(string_view text) {
    Reader reader(text);
    vector<SExpr> result;
    while (!reader.at_end())
        result.push_back(reader.read());
    return result;
}

SExpr parse_single_sexpr(string_view text) {
    vector<SExpr> all = parse_sexprs(text);
    if (all.size() != 1)
        throw ParseError("expected exactly one expression, found " +
                         std::to_string(all.size()), 1, 1);
    return all[0];
}
}
