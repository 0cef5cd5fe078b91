#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rashomon/bitvector.hpp"

namespace rashomon {

// N examples over J binary features, stored column-major: features[j] holds
// feature j for every example. Immutable after construction.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  // Validates lengths and names; throws Error on violation.
  BinaryDataset(std::vector<BitVector> features, BitVector labels,
                std::vector<std::string> feature_names);

  std::size_t n_examples() const noexcept { return labels_.size(); }
  std::size_t n_features() const noexcept { return features_.size(); }

  const BitVector& feature(std::size_t j) const { return features_.at(j); }
  const std::vector<BitVector>& features() const noexcept { return features_; }
  const BitVector& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept {
    return feature_names_;
  }

  // Row view for scalar evaluation; O(J).
  std::vector<std::uint8_t> row(std::size_t n) const;

  std::uint64_t fingerprint() const noexcept;

  // Copy restricted to the given example indices, in the given order.
  BinaryDataset select(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<BitVector> features_;
  BitVector labels_;
  std::vector<std::string> feature_names_;
};

struct SensitiveVector {
  BitVector values;
  std::string name;

  SensitiveVector select(const std::vector<std::size_t>& rows) const;
};

struct LoadedData {
  BinaryDataset dataset;
  std::optional<SensitiveVector> sensitive;
};

// Reads a header-first CSV whose cells are literal 0/1. Every column other
// than the label and sensitive columns becomes a feature.
LoadedData load_csv(const std::filesystem::path& path,
                    const std::string& label_column,
                    const std::optional<std::string>& sensitive_column = {});

// Same parser over in-memory text; `source` names the input in errors.
LoadedData parse_csv(const std::string& text, const std::string& label_column,
                     const std::optional<std::string>& sensitive_column = {},
                     const std::string& source = "<memory>");

void write_csv(const std::filesystem::path& path, const BinaryDataset& dataset,
               const std::string& label_column,
               const SensitiveVector* sensitive = nullptr);

std::size_t positive_count(const BinaryDataset& dataset) noexcept;

struct Split {
  BinaryDataset train;
  BinaryDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  bool test_empty = false;
};

// Deterministic shuffle split with |train| = floor(train_fraction * N).
Split split(const BinaryDataset& dataset, double train_fraction,
            std::uint64_t seed);

}  // namespace rashomon
