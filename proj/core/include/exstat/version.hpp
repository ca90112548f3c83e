// Copyright 2026 The exstat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace exstat {

// Keep in sync with the project() version in the top-level CMakeLists.txt.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace exstat
