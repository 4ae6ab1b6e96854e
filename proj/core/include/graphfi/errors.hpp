// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace graphfi {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An index (element, bit, axis) outside its valid range.
struct BoundsError : Error {
    using Error::Error;
};

/// A graph failed structural or shape validation.
struct ValidationError : Error {
    using Error::Error;
};

/// A file or text document could not be parsed.
struct ParseError : Error {
    using Error::Error;
};

/// An API was called outside its contract (wrong mode, wrong shape, ...).
struct ContractError : Error {
    using Error::Error;
};

/// A fault type cannot be applied to the tensor's dtype (e.g. Rand on I64).
struct UnsupportedDtypeError : Error {
    using Error::Error;
};

/// Filesystem-level failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace graphfi
