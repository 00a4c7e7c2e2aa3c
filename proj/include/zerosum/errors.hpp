#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zerosum {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGroup : public Error {
public:
    using Error::Error;
};

class GroupMismatch : public Error {
public:
    GroupMismatch() : Error("sequences live over different groups") {}
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string & message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column)
    {
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class NotASubsequence : public Error {
public:
    explicit NotASubsequence(const std::string & element)
        : Error("not a subsequence: element " + element + " has insufficient multiplicity"), element_(element)
    {
    }

    const std::string & element() const { return element_; }

private:
    std::string element_;
};

/// A search exhausted its state budget. Never silently truncated.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::uint64_t states)
        : Error("state budget exceeded after " + std::to_string(states) + " states"), states_(states)
    {
    }

    std::uint64_t states() const { return states_; }

private:
    std::uint64_t states_;
};

/// Enumeration refused up front because the estimated work is too large.
class InfeasibleSize : public Error {
public:
    InfeasibleSize(double estimate, const std::string & what)
        : Error(what + " (estimated " + std::to_string(static_cast<long double>(estimate)) + ")"), estimate_(estimate)
    {
    }

    double estimate() const { return estimate_; }

private:
    double estimate_;
};

} // namespace zerosum
