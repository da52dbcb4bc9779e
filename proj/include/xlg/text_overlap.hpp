#pragma once

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xlg/error.hpp"

namespace xlg {

enum class OverlapUnit { character, token };

/// NFC-normalized copy of a UTF-8 string.
inline std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) detail::fail_numeric("ICU NFC normalizer unavailable");
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(),
                                                                               static_cast<int32_t>(utf8.size())));
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) detail::fail_input("NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

/// Multiset of non-whitespace Unicode scalar values after NFC.
inline std::map<std::string, std::size_t> character_multiset(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) detail::fail_numeric("ICU NFC normalizer unavailable");
  const icu::UnicodeString text = norm->normalize(
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))), status);
  if (U_FAILURE(status)) detail::fail_input("NFC normalization failed");
  std::map<std::string, std::size_t> counts;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) continue;
    std::string key;
    icu::UnicodeString(c).toUTF8String(key);
    ++counts[key];
  }
  return counts;
}

/// Multiset of whitespace-delimited tokens (input is expected to be pre-tokenized).
inline std::map<std::string, std::size_t> token_multiset(std::string_view utf8) {
  const icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::map<std::string, std::size_t> counts;
  icu::UnicodeString token;
  auto flush = [&] {
    if (token.isEmpty()) return;
    std::string key;
    token.toUTF8String(key);
    ++counts[key];
    token.remove();
  };
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c))
      flush();
    else
      token.append(c);
  }
  flush();
  return counts;
}

/// Weighted Jaccard: sum of per-element min counts over sum of max counts.
inline double multiset_jaccard(const std::map<std::string, std::size_t>& a,
                               const std::map<std::string, std::size_t>& b) {
  if (a.empty() || b.empty()) detail::fail_input("multiset_jaccard: empty segmented text");
  std::size_t inter = 0;
  std::size_t uni = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      uni += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      uni += ib->second;
      ++ib;
    } else {
      inter += std::min(ia->second, ib->second);
      uni += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double multiset_jaccard(std::string_view a, std::string_view b, OverlapUnit unit) {
  if (unit == OverlapUnit::character) return multiset_jaccard(character_multiset(a), character_multiset(b));
  return multiset_jaccard(token_multiset(a), token_multiset(b));
}

}  // namespace xlg
