#ifndef PLEXPLAIN_ERRORS_H
#define PLEXPLAIN_ERRORS_H

#include <stdexcept>
#include <string>

namespace plexplain {
// Malformed or inconsistent user input (files, names, arguments).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
    int line_;
    int column_;
public:
    ParseError(const std::string &message, int line, int column)
        : InputError(message + " at line " + std::to_string(line) +
                     ", column " + std::to_string(column)),
          line_(line), column_(column) {
    }
    int line() const {return line_;}
    int column() const {return column_;}
};

// An operation was called outside its documented precondition.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A search or enumeration budget ran out before a decision was reached.
class ResourceExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
}

#endif
