// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/error.hpp"

namespace progedit {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::dimension_mismatch:
        return "dimension-mismatch";
    case ErrorKind::out_of_range:
        return "out-of-range";
    case ErrorKind::invalid_argument:
        return "invalid-argument";
    case ErrorKind::input_missing:
        return "input-missing";
    case ErrorKind::parse:
        return "parse-error";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace progedit
