#include <gtest/gtest.h>

#include "bonacci/substitution.hpp"

using namespace bonacci;

namespace {

LabelWord word(std::initializer_list<int> xs) {
  LabelWord w;
  for (int x : xs) w.push_back(letter(x));
  return w;
}

}  // namespace

TEST(Sigma, Rules) {
  EXPECT_EQ(sigma_image(letter(0), 3), word({1, 0}));
  EXPECT_EQ(sigma_image(letter(3), 3), word({1}));
  EXPECT_EQ(sigma_image(letter(2), 3), word({1, 3}));
  EXPECT_EQ(sigma_image(letter(1), 2), word({1, 2}));
  EXPECT_EQ(sigma_image(letter(2), 2), word({1}));
}

TEST(Sigma, RejectsLettersOutsideAlphabet) {
  EXPECT_THROW(sigma_image(letter(4), 3), InvalidLetter);
  EXPECT_THROW(apply_sigma(word({1, 3}), 2), InvalidLetter);
  EXPECT_THROW(letter(-1), InvalidLetter);
}

TEST(Iterate, SmallWords) {
  for (int m = 2; m <= 6; ++m) EXPECT_EQ(iterate(1, m), word({1, 0}));
  EXPECT_EQ(iterate(2, 3), word({1, 2, 1, 0}));
  EXPECT_EQ(iterate(2, 2), word({1, 2, 1, 0}));
  EXPECT_EQ(iterate(3, 2), word({1, 2, 1, 1, 2, 1, 0}));
  EXPECT_EQ(to_string(iterate(2, 3)), "d1d2d1d0");
  EXPECT_EQ(iterate(0, 3), word({0}));
}

TEST(Iterate, LengthForecast) {
  EXPECT_EQ(word_length_forecast(1, 2), 2u);
  EXPECT_EQ(word_length_forecast(2, 2), 4u);
  EXPECT_EQ(word_length_forecast(3, 2), 7u);
  for (int m = 2; m <= 5; ++m)
    for (int n = 0; n <= 14; ++n) EXPECT_EQ(word_length_forecast(n, m), iterate(n, m).size()) << m << " " << n;
}

TEST(Iterate, GoldenLengthsAreFibonacci) {
  // |σ^n(d_0)| = F_{n+3} - 1 for m = 2.
  std::uint64_t a = 1, b = 2;  // F_2, F_3
  for (int n = 0; n <= 40; ++n) {
    EXPECT_EQ(word_length_forecast(n, 2), b - 1) << n;
    const std::uint64_t c = a + b;
    a = b;
    b = c;
  }
}

TEST(Iterate, CapIsEnforced) {
  EXPECT_THROW(iterate(30, 3, 1000), ResourceCapExceeded);
  EXPECT_THROW(word_length_forecast(200, 2), ResourceCapExceeded);
}

TEST(Iterate, LastLetterIsD0AndDmIsFollowedByD1) {
  for (int m = 2; m <= 5; ++m)
    for (int n = 1; n <= 12; ++n) {
      const auto w = iterate(n, m);
      ASSERT_EQ(w.back(), letter(0));
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        EXPECT_NE(w[i], letter(0)) << "d0 only at the end";
        if (w[i] == letter(m)) EXPECT_EQ(w[i + 1], letter(1)) << m << " " << n << " " << i;
      }
    }
}
