#pragma once

// The substitution on the gap alphabet {d_0, ..., d_m}:
//
//   d_0 -> d_1 d_0,   d_i -> d_1 d_{i+1} (1 <= i < m),   d_m -> d_1.
//
// Restricted to d_1..d_m it is the substitution of the β-numeration system.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bonacci/errors.hpp"

namespace bonacci {

/// Letter d_index of the gap alphabet.
struct Letter {
  std::uint8_t index = 0;

  friend constexpr auto operator<=>(Letter, Letter) = default;
};

constexpr Letter letter(int i) {
  if (i < 0 || i > 255) throw InvalidLetter("letter index out of range: " + std::to_string(i));
  return Letter{static_cast<std::uint8_t>(i)};
}

using LabelWord = std::vector<Letter>;

inline constexpr std::size_t kDefaultWordCap = 100'000'000;

inline void check_letter(Letter l, int m) {
  if (static_cast<int>(l.index) > m)
    throw InvalidLetter("letter d" + std::to_string(l.index) + " is not in the alphabet for m=" + std::to_string(m));
}

inline LabelWord sigma_image(Letter l, int m) {
  check_letter(l, m);
  if (l.index == 0) return {letter(1), letter(0)};
  if (l.index == m) return {letter(1)};
  return {letter(1), letter(l.index + 1)};
}

/// One application of σ to a whole word.
inline LabelWord apply_sigma(const LabelWord& word, int m) {
  LabelWord out;
  out.reserve(word.size() * 2);
  for (Letter l : word) {
    check_letter(l, m);
    out.push_back(letter(1));
    if (l.index == 0) out.push_back(letter(0));
    else if (l.index < m) out.push_back(letter(l.index + 1));
  }
  return out;
}

/// Exact length of σ^n(d_0) from the letter-count recurrence.
inline std::uint64_t word_length_forecast(int n, int m) {
  if (n < 0) throw Error("word_length_forecast: negative n");
  std::vector<std::uint64_t> count(static_cast<std::size_t>(m) + 1, 0);
  count[0] = 1;
  for (int step = 0; step < n; ++step) {
    std::vector<std::uint64_t> next(count.size(), 0);
    std::uint64_t total = 0;
    for (auto c : count)
      if (__builtin_add_overflow(total, c, &total)) throw ResourceCapExceeded("word length overflows 64 bits");
    next[1] = total;  // every image starts with d_1
    next[0] += count[0];
    for (int i = 1; i < m; ++i) next[static_cast<std::size_t>(i) + 1] += count[static_cast<std::size_t>(i)];
    count = std::move(next);
  }
  std::uint64_t len = 0;
  for (auto c : count)
    if (__builtin_add_overflow(len, c, &len)) throw ResourceCapExceeded("word length overflows 64 bits");
  return len;
}

/// σ^n(d_0), generated level by level.
inline LabelWord iterate(int n, int m, std::size_t cap = kDefaultWordCap) {
  if (n < 0) throw Error("iterate: n must be non-negative");
  if (m < 2) throw InvalidDegree("degree m must be at least 2");
  if (word_length_forecast(n, m) > cap)
    throw ResourceCapExceeded("σ^" + std::to_string(n) + "(d0) exceeds the word cap of " + std::to_string(cap));
  LabelWord w{letter(0)};
  for (int i = 0; i < n; ++i) w = apply_sigma(w, m);
  return w;
}

inline std::string to_string(const LabelWord& w) {
  std::string s;
  for (Letter l : w) s += "d" + std::to_string(l.index);
  return s;
}

}  // namespace bonacci
