#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by every stage. Strings are UTF-8 throughout; code
// point decoding and case folding are delegated to ICU.
namespace tdcorpus::text {

bool is_valid_utf8(std::string_view s);

/// Reinterprets every byte as a Latin-1 code point.
std::string latin1_to_utf8(std::string_view s);

/// Decodes `s`; malformed sequences become U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

std::size_t code_point_count(std::string_view s);

/// Number of code points that are not ASCII whitespace. This is the length
/// unit of the sentence-length model.
std::size_t non_space_length(std::string_view s);

bool is_space(char c);
bool is_letter(char32_t cp);
bool is_alnum(char32_t cp);

/// Locale-independent full Unicode case folding ("Ç" -> "ç", "ß" -> "ss").
std::string fold_case(std::string_view s);

/// Control characters become spaces, whitespace runs collapse to a single
/// space, and the result is trimmed.
std::string clean_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

/// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Splits on every occurrence of `sep`, keeping empty pieces.
std::vector<std::string> split(std::string_view s, char sep);

/// Strips leading and trailing code points that are neither letters nor
/// digits ("(2011)." -> "2011").
std::string strip_punctuation(std::string_view word);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace tdcorpus::text
