#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "oracle/brute_force.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/rule_list.hpp"
#include "rashomon/vocabulary.hpp"

namespace testing_support {

struct RandomInstance {
  rashomon::BinaryDataset dataset;
  rashomon::Vocabulary vocabulary;
  oracle::Instance oracle;
};

// Small random problem: N <= 64, J <= 6, at most 6 mined terms of up to two
// features. Labels follow a noisy rule over the first features so the
// searches have structure to find.
inline RandomInstance make_instance(std::uint64_t seed, std::size_t max_terms = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> n_dist(8, 64);
  std::uniform_int_distribution<std::size_t> j_dist(2, 6);
  std::bernoulli_distribution noise(0.2);
  const std::size_t n = n_dist(rng);
  const std::size_t j = j_dist(rng);
  std::uniform_real_distribution<double> dens(0.25, 0.75);

  std::vector<double> p(j);
  for (auto& v : p) v = dens(rng);

  RandomInstance out;
  out.oracle.rows.assign(n, std::vector<std::uint8_t>(j, 0));
  out.oracle.labels.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < j; ++c) {
      out.oracle.rows[r][c] = std::bernoulli_distribution(p[c])(rng);
    }
    bool y = out.oracle.rows[r][0] && (j < 2 || out.oracle.rows[r][1] || !noise(rng));
    if (noise(rng)) y = !y;
    out.oracle.labels[r] = y;
  }

  std::vector<rashomon::BitVector> cols(j, rashomon::BitVector(n));
  rashomon::BitVector labels(n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < j; ++c) names.push_back("f" + std::to_string(c));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < j; ++c) cols[c].set(r, out.oracle.rows[r][c]);
    labels.set(r, out.oracle.labels[r]);
  }
  out.dataset = rashomon::BinaryDataset(std::move(cols), labels, names);

  const double coverage = std::vector<double>{0.0, 0.25, 0.5}[seed % 3];
  rashomon::Vocabulary mined;
  if (out.dataset.labels().count() == 0) {
    mined = rashomon::mine_terms(out.dataset, 2, 0.0);
  } else {
    mined = rashomon::mine_terms(out.dataset, 2, coverage);
    if (mined.empty()) mined = rashomon::mine_terms(out.dataset, 2, 0.0);
  }
  std::vector<rashomon::Term> terms = mined.terms();
  std::shuffle(terms.begin(), terms.end(), rng);
  if (terms.size() > max_terms) terms.resize(max_terms);
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  for (const auto& t : terms) out.oracle.terms.push_back(*t.feature_indices);
  out.vocabulary = rashomon::Vocabulary(std::move(terms), n);
  return out;
}

inline oracle::List to_oracle(const rashomon::RuleList& list) {
  oracle::List l;
  for (const auto& r : list.rules) l.rules.emplace_back(r.term_id, r.label);
  l.default_label = list.default_label;
  return l;
}

}  // namespace testing_support
