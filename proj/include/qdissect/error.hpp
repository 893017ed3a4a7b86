#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdissect
{

// Base class for every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class invalid_order_error : public error
{
public:
    using error::error;
};

// Requested a coefficient at or beyond the truncation order.
class out_of_order_error : public error
{
public:
    using error::error;
};

class not_invertible_error : public error
{
public:
    using error::error;
};

class invalid_modulus_error : public error
{
public:
    using error::error;
};

// Argument outside an operation's mathematical domain (alpha < 0, m < 2, ...).
class domain_error : public error
{
public:
    using error::error;
};

class unknown_name_error : public error
{
public:
    using error::error;
};

class insufficient_order_error : public error
{
public:
    using error::error;
};

// The symbolic regrouping met a monomial it could not pair.
class derivation_error : public error
{
public:
    using error::error;
};

class parse_error : public error
{
public:
    parse_error(std::size_t offset, const std::string& message)
        : error("parse error at byte " + std::to_string(offset) + ": " + message), offset_(offset), message_(message)
    {
    }

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t offset_;
    std::string message_;
};

} // namespace qdissect
