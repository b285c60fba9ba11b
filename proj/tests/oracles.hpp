// Independent reference computations the unit and acceptance tests compare
// the library against. Nothing here calls into the code under test except
// for plain data accessors.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "her2/image.hpp"
#include "her2/labels.hpp"
#include "her2/metrics.hpp"
#include "her2/slide_grid.hpp"

namespace oracle {

inline std::array<std::uint64_t, 5> TallyPixels(const her2::LabelMap& labels) {
  std::map<int, std::uint64_t> seen;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) ++seen[labels.at(x, y)];
  }
  std::array<std::uint64_t, 5> out{};
  for (auto [label, n] : seen) out.at(label) = n;
  return out;
}

// Per-pixel stain label in integer arithmetic: the band bounds 0.05, 0.35
// and 0.65 of (R-B)/255 become 12.75, 89.25 and 165.75 on the raw
// difference, so comparing 4*(R-B) against 51, 357 and 663 is exact.
inline std::uint8_t StainLabel(her2::Rgb c) {
  const int mn = std::min({c.r, c.g, c.b});
  if (mn > 230) return 0;
  if (!(c.r > c.g && c.g > c.b)) return 0;
  const int d4 = 4 * (c.r - c.b);
  if (d4 < 51) return 1;
  if (d4 < 357) return 2;
  if (d4 < 663) return 3;
  return 4;
}

inline int RoundHalfAway(double v) {
  return v >= 0 ? static_cast<int>(std::floor(v + 0.5)) : -static_cast<int>(std::floor(-v + 0.5));
}

struct SetBijection {
  bool injective;
  bool surjective;
};

// Exhaustive image/codomain comparison for the affine grid map
// (r, c) -> (round(s_r r + o_r), round(s_c c + o_c)).
inline SetBijection BruteForceBijection(double sr, double sc, double orow, double ocol,
                                        int he_rows, int he_cols, int ihc_rows,
                                        int ihc_cols) {
  std::multiset<std::pair<int, int>> image;
  bool escaped = false;
  for (int r = 0; r < he_rows; ++r) {
    for (int c = 0; c < he_cols; ++c) {
      const int tr = RoundHalfAway(sr * r + orow);
      const int tc = RoundHalfAway(sc * c + ocol);
      if (tr < 0 || tr >= ihc_rows || tc < 0 || tc >= ihc_cols) {
        escaped = true;
        continue;
      }
      image.insert({tr, tc});
    }
  }
  const std::set<std::pair<int, int>> distinct(image.begin(), image.end());
  std::set<std::pair<int, int>> codomain;
  for (int r = 0; r < ihc_rows; ++r)
    for (int c = 0; c < ihc_cols; ++c) codomain.insert({r, c});
  return {!escaped && distinct.size() == image.size(), distinct == codomain};
}

// Probability that a random positive outranks a random negative, ties 1/2.
inline double MannWhitneyAuc(const std::vector<her2::metrics::ScoredSample>& s) {
  double wins = 0;
  std::uint64_t pos = 0, neg = 0;
  for (const auto& a : s) (a.positive ? pos : neg)++;
  for (const auto& a : s) {
    if (!a.positive) continue;
    for (const auto& b : s) {
      if (b.positive) continue;
      if (a.probability > b.probability) wins += 1;
      else if (a.probability == b.probability) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

inline double NetBenefit(const std::vector<her2::metrics::ScoredSample>& s, double t,
                         bool treat_all) {
  double tp = 0, fp = 0;
  for (const auto& x : s) {
    const bool called = treat_all || x.probability >= t;
    if (called && x.positive) tp += 1;
    if (called && !x.positive) fp += 1;
  }
  const double n = static_cast<double>(s.size());
  return tp / n - fp / n * (t / (1 - t));
}

inline std::map<int, double> PixelIou(const her2::LabelMap& a, const her2::LabelMap& b) {
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> iu;  // label -> (inter, union)
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const int p = a.at(x, y), q = b.at(x, y);
      if (p == q) {
        iu[p].first++;
        iu[p].second++;
      } else {
        iu[p].second++;
        iu[q].second++;
      }
    }
  }
  std::map<int, double> out;
  for (auto [label, v] : iu) out[label] = static_cast<double>(v.first) / v.second;
  return out;
}

inline her2::LabelMap RandomLabelMap(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 4);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = static_cast<std::uint8_t>(d(rng));
  return her2::LabelMap(w, h, std::move(v));
}

inline her2::RgbImage RandomImage(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h * 3);
  for (auto& x : v) x = static_cast<std::uint8_t>(d(rng));
  return her2::RgbImage(w, h, std::move(v));
}

}  // namespace oracle
