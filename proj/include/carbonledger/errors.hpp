// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace carbonledger {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was given an input outside its numeric domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A registry lookup failed to resolve an id.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A file or document could not be parsed into a valid structure.
class LoadError : public Error {
public:
    using Error::Error;
};

/// A search problem has no feasible candidate.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Bad command-line usage (unknown format, missing option, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

namespace detail {

template <typename... Args>
std::string cat(Args&&... args) {
    std::ostringstream out;
    (out << ... << args);
    return out.str();
}

} // namespace detail

} // namespace carbonledger
