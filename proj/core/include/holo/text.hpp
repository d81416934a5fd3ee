#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace holo {

/// Decodes UTF-8; invalid bytes decode to U+FFFD.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);

/// First `n` code points of `text`.
std::string utf8_prefix(std::string_view text, std::size_t n);

/// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace holo
