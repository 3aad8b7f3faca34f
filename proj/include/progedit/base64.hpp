// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace progedit {

std::string base64_encode(std::string_view bytes);
// nullopt on malformed input; whitespace is ignored.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace progedit
