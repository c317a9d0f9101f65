#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace masar::text {

std::string trim(const std::string& s);
std::string lower_ascii(const std::string& s);
// Collapse runs of whitespace to single spaces and trim the ends.
std::string collapse_whitespace(const std::string& s);

// Decode one UTF-8 codepoint starting at i; advances i. Invalid bytes decode
// as U+FFFD and advance one byte, so the scan always terminates.
std::uint32_t utf8_next(const std::string& s, size_t& i);
void utf8_append(std::string& out, std::uint32_t cp);
std::vector<std::uint32_t> utf8_decode(const std::string& s);

// Matching-side normalization used by the index, the rule tables and the
// sequence matcher. Originals are kept for display; this form never reaches
// the user.
//   - Arabic diacritics/tatweel and Quranic annotation marks stripped
//   - alef variants (أ إ آ ٱ) folded to ا, ؤ→و, ئ→ي, ى→ي, ة→ه
//   - Arabic-Indic digits mapped to ASCII digits
//   - ASCII letters lowercased
// Idempotent: normalize(normalize(x)) == normalize(x).
std::string normalize_arabic(const std::string& s);

// Tokens are maximal runs of letters/digits (ASCII or Arabic block) over the
// normalized form.
std::vector<std::string> tokenize(const std::string& s);
std::vector<std::string> normalize_and_tokenize(const std::string& s);

bool contains_normalized(const std::string& haystack, const std::string& needle);

}  // namespace masar::text
