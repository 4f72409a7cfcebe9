#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace chernoff {

std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t x);

}  // namespace chernoff
