#pragma once

#include <stdexcept>
#include <string>

namespace bpn
{

// Malformed text input; carries the 1-based line number when known.
class parse_error : public std::runtime_error
{
    std::size_t _line;

public:
    explicit parse_error( const std::string& what, std::size_t line = 0 )
            : std::runtime_error( line ? "line " + std::to_string( line ) + ": " + what : what ), _line{ line }
    {
    }

    [[nodiscard]] std::size_t line() const { return _line; }
};

// An argument violates an operation's precondition.
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A name or index does not belong to the object it was looked up in.
class domain_mismatch : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

} // namespace bpn
