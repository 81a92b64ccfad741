/* Copyright 2026 The angiopipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "angio/core/error.hpp"

namespace angio {

/// Specialise with a names array listing every enumerator in declaration
/// order; enumerators must be 0..N-1.
template <typename E>
struct EnumNames;

template <typename E>
inline constexpr std::size_t enum_count = EnumNames<E>::names.size();

template <typename E>
constexpr std::size_t ordinal(E e) noexcept {
  return static_cast<std::size_t>(e);
}

template <typename E>
constexpr E from_ordinal(std::size_t i) noexcept {
  return static_cast<E>(i);
}

template <typename E>
constexpr std::string_view name_of(E e) {
  return EnumNames<E>::names[ordinal(e)];
}

template <typename E>
std::string to_string(E e) {
  return std::string(name_of(e));
}

template <typename E>
std::optional<E> parse_enum(std::string_view s) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return from_ordinal<E>(i);
  return std::nullopt;
}

template <typename E>
E parse_enum_or_throw(std::string_view s, const char* what) {
  auto v = parse_enum<E>(s);
  require(v.has_value(), std::string("unknown ") + what + " '" +
                             std::string(s) + "'",
          ErrorKind::kMalformed);
  return *v;
}

template <typename E>
constexpr std::array<E, enum_count<E>> all_values() {
  std::array<E, enum_count<E>> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = from_ordinal<E>(i);
  return out;
}

}  // namespace angio
