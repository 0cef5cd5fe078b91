#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rashomon/bitvector.hpp"
#include "rashomon/dataset.hpp"

namespace rashomon {

using TermId = std::uint32_t;

struct Term {
  TermId id = 0;
  std::string name;
  // Sorted feature columns of the conjunction. Unknown (nullopt) for terms
  // read from a capture file, where only the capture is available.
  std::optional<std::vector<std::size_t>> feature_indices;
  BitVector capture;
};

// Ordered candidate terms with dense ids 0..size()-1. The constant-true term
// is never stored; the default rule supplies it.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Assigns ids in the given order; throws on duplicate names or captures
  // whose length differs from n_examples.
  Vocabulary(std::vector<Term> terms, std::size_t n_examples);

  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t n_examples() const noexcept { return n_examples_; }

  const Term& operator[](TermId id) const { return terms_[id]; }
  const Term& at(TermId id) const { return terms_.at(id); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  std::optional<TermId> find(const std::string& name) const;

 private:
  std::vector<Term> terms_;
  std::size_t n_examples_ = 0;
};

// AND of the referenced columns; the empty set yields all ones.
BitVector term_capture(const std::vector<std::size_t>& feature_indices,
                       const BinaryDataset& dataset);

// Every conjunction of 1..max_conjunction_len features whose capture covers
// at least min_pos_coverage of the positive examples, in lexicographic order
// of the sorted feature index sequence.
Vocabulary mine_terms(const BinaryDataset& dataset,
                      std::size_t max_conjunction_len, double min_pos_coverage);

// Keeps the terms meeting the positive-coverage threshold, re-numbering ids.
Vocabulary filter_by_positive_coverage(const Vocabulary& vocabulary,
                                       const BitVector& labels,
                                       double min_pos_coverage);

// Capture file: one line per term, "{NAME} b1 b2 ... bN".
Vocabulary load_terms_file(const std::filesystem::path& path,
                           std::size_t n_examples);
Vocabulary parse_terms(const std::string& text, std::size_t n_examples,
                       const std::string& source = "<memory>");
void write_terms_file(const std::filesystem::path& path,
                      const Vocabulary& vocabulary);

}  // namespace rashomon
