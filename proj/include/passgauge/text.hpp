#pragma once

#include <string>
#include <string_view>

namespace passgauge {

// Passwords are handled as codepoint sequences. Bytes that are not valid
// UTF-8 decode to U+DC80..U+DCFF (one per byte) and encode back to the same
// byte, so arbitrary input round-trips.
using PasswordText = std::u32string;

PasswordText decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);

// ASCII A-Z only; every other codepoint is left unchanged.
PasswordText ascii_lower(std::u32string_view text);

}  // namespace passgauge
