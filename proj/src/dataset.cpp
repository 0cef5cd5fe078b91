#include "rashomon/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "rashomon/error.hpp"

namespace rashomon {

BinaryDataset::BinaryDataset(std::vector<BitVector> features, BitVector labels,
                             std::vector<std::string> feature_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (features_.size() != feature_names_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "feature count differs from feature name count");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t j = 0; j < features_.size(); ++j) {
    if (features_[j].size() != labels_.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "feature '" + feature_names_[j] + "' has " +
                      std::to_string(features_[j].size()) + " bits, expected " +
                      std::to_string(labels_.size()));
    }
    if (feature_names_[j].empty()) {
      throw Error(ErrorCode::kMalformedInput, "empty feature name");
    }
    if (!seen.insert(feature_names_[j]).second) {
      throw Error(ErrorCode::kDuplicateName,
                  "feature name '" + feature_names_[j] + "' repeated");
    }
  }
}

std::vector<std::uint8_t> BinaryDataset::row(std::size_t n) const {
  std::vector<std::uint8_t> x(features_.size());
  for (std::size_t j = 0; j < features_.size(); ++j) x[j] = features_[j].test(n);
  return x;
}

std::uint64_t BinaryDataset::fingerprint() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(labels_, h);
  for (const auto& f : features_) h = fnv1a(f, h);
  return h;
}

namespace {

BitVector select_bits(const BitVector& v, const std::vector<std::size_t>& rows) {
  BitVector out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.set(i, v.test(rows[i]));
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

BinaryDataset BinaryDataset::select(const std::vector<std::size_t>& rows) const {
  std::vector<BitVector> cols;
  cols.reserve(features_.size());
  for (const auto& f : features_) cols.push_back(select_bits(f, rows));
  return BinaryDataset(std::move(cols), select_bits(labels_, rows),
                       feature_names_);
}

SensitiveVector SensitiveVector::select(const std::vector<std::size_t>& rows) const {
  return {select_bits(values, rows), name};
}

LoadedData parse_csv(const std::string& text, const std::string& label_column,
                     const std::optional<std::string>& sensitive_column,
                     const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
      }
      header = split_line(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  if (!have_header || header.empty() || (header.size() == 1 && header[0].empty())) {
    throw Error(ErrorCode::kMalformedInput, source + ": missing header row");
  }

  auto find_column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kMissingColumn,
                  source + ": column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_idx = find_column(label_column);
  std::optional<std::size_t> sens_idx;
  if (sensitive_column) sens_idx = find_column(*sensitive_column);

  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, source + ": no data rows");
  }

  const std::size_t n = rows.size();
  std::vector<BitVector> columns(header.size(), BitVector(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& cells = rows[r];
    // Row numbers in messages are 1-based data rows (header excluded).
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kMalformedInput,
                  source + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == "1") {
        columns[c].set(r);
      } else if (cells[c] != "0") {
        throw Error(ErrorCode::kNonBinaryValue,
                    source + ": row " + std::to_string(r + 1) + ", column '" +
                        header[c] + "': value '" + cells[c] + "' is not 0/1");
      }
    }
  }

  std::vector<BitVector> features;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_idx || (sens_idx && c == *sens_idx)) continue;
    features.push_back(std::move(columns[c]));
    names.push_back(header[c]);
  }
  LoadedData out{BinaryDataset(std::move(features), columns[label_idx],
                               std::move(names)),
                 std::nullopt};
  if (sens_idx) out.sensitive = SensitiveVector{columns[*sens_idx], header[*sens_idx]};
  return out;
}

LoadedData load_csv(const std::filesystem::path& path,
                    const std::string& label_column,
                    const std::optional<std::string>& sensitive_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column, sensitive_column, path.string());
}

void write_csv(const std::filesystem::path& path, const BinaryDataset& dataset,
               const std::string& label_column, const SensitiveVector* sensitive) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& name : dataset.feature_names()) out << name << ',';
  if (sensitive) out << sensitive->name << ',';
  out << label_column << '\n';
  for (std::size_t n = 0; n < dataset.n_examples(); ++n) {
    for (const auto& f : dataset.features()) out << (f.test(n) ? '1' : '0') << ',';
    if (sensitive) out << (sensitive->values.test(n) ? '1' : '0') << ',';
    out << (dataset.labels().test(n) ? '1' : '0') << '\n';
  }
}

std::size_t positive_count(const BinaryDataset& dataset) noexcept {
  return dataset.labels().count();
}

Split split(const BinaryDataset& dataset, double train_fraction,
            std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidFraction,
                "train fraction must lie in (0, 1], got " +
                    std::to_string(train_fraction));
  }
  const std::size_t n = dataset.n_examples();
  if (n == 0) throw Error(ErrorCode::kEmptyDataset, "cannot split an empty dataset");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  // The guard keeps e.g. 0.7 * 10 from flooring to 6.
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  Split s;
  s.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  s.train = dataset.select(s.train_rows);
  s.test = dataset.select(s.test_rows);
  s.test_empty = s.test_rows.empty();
  return s;
}

}  // namespace rashomon
