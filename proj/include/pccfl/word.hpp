#pragma once

// Words over a finite alphabet. Letters are kept as strings so that
// multi-character tokens (abar, cbar, quoted symbols) work uniformly.

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pccfl {

using Word = std::vector<std::string>;

inline bool length_lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline Word concat_words(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Word repeat_word(const Word& s, int m) {
  Word out;
  out.reserve(s.size() * static_cast<std::size_t>(m > 0 ? m : 0));
  for (int i = 0; i < m; ++i) out.insert(out.end(), s.begin(), s.end());
  return out;
}

inline bool all_single_char(const std::vector<std::string>& tokens) {
  return std::all_of(tokens.begin(), tokens.end(),
                     [](const std::string& t) { return t.size() == 1; });
}

// Compact form ("absccab") when every token is a single character,
// space-separated otherwise.
inline std::string format_word(const Word& w) {
  if (all_single_char(w)) {
    std::string out;
    for (const auto& t : w) out += t;
    return out;
  }
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out;
}

// Splits on whitespace. A single token that is not itself a letter is split
// into characters when each character is a single-character alphabet letter,
// so "absccab" works whenever the letters it uses are one character long.
inline Word parse_word(const std::string& text,
                       const std::vector<std::string>& alphabet) {
  std::istringstream in(text);
  Word tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.size() == 1) {
    const std::string& t = tokens[0];
    bool is_letter =
        std::find(alphabet.begin(), alphabet.end(), t) != alphabet.end();
    bool splittable =
        !is_letter && t.size() > 1 &&
        std::all_of(t.begin(), t.end(), [&](char c) {
          return std::find(alphabet.begin(), alphabet.end(),
                           std::string(1, c)) != alphabet.end();
        });
    if (splittable) {
      Word split;
      for (char c : t) split.push_back(std::string(1, c));
      return split;
    }
  }
  return tokens;
}

namespace detail {

// FNV-1a over an int sequence; used for memoization keys.
struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      for (int b = 0; b < 4; ++b) {
        h ^= static_cast<std::uint64_t>((x >> (8 * b)) & 0xff);
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::string word_key(const Word& w) {
  std::string k;
  for (const auto& t : w) {
    k += t;
    k += '\x01';
  }
  return k;
}

}  // namespace detail

}  // namespace pccfl
