#pragma once

#include <stdexcept>
#include <string>

namespace bernstein
{

/// Failure categories. The CLI maps each to an exit code.
enum class error_kind {
    validation,           // malformed input or violated precondition
    incomplete_truncation, // query reaches beyond the declared truncation radius
    construction,         // an explicit construction could not be completed
    missing_generator,    // no admissible generating function for the nodes
    numerical             // overflow or a quadrature that did not settle
};

class error : public std::runtime_error
{
public:
    error(error_kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    error_kind kind() const noexcept
    {
        return kind_;
    }

private:
    error_kind kind_;
};

namespace detail
{

[[noreturn]] inline void fail(error_kind kind, const std::string &what)
{
    throw error(kind, what);
}

inline void require(bool cond, const std::string &what)
{
    if (!cond) {
        fail(error_kind::validation, what);
    }
}

} // namespace detail

} // namespace bernstein
