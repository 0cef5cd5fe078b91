#include "rashomon/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "rashomon/error.hpp"
#include "support/toy.hpp"

namespace rashomon {
namespace {

using testing_support::bits;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

TEST(LoadCsvTest, SingleRow) {
  auto loaded = parse_csv("a,b,y\n1,0,1\n", "y");
  EXPECT_EQ(loaded.dataset.n_examples(), 1u);
  EXPECT_EQ(loaded.dataset.n_features(), 2u);
  EXPECT_EQ(loaded.dataset.labels(), bits({1}));
  EXPECT_FALSE(loaded.sensitive.has_value());
}

TEST(LoadCsvTest, ToyColumnsMatchHandBuiltMatrix) {
  auto loaded = parse_csv("a,b,y\r\n1,0,1\r\n1,1,1\r\n0,1,0\r\n0,0,0\r\n", "y");
  const auto toy = testing_support::toy_dataset();
  EXPECT_EQ(loaded.dataset.feature(0), toy.feature(0));
  EXPECT_EQ(loaded.dataset.feature(1), toy.feature(1));
  EXPECT_EQ(loaded.dataset.labels(), toy.labels());
  EXPECT_EQ(loaded.dataset.feature_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCsvTest, SensitiveColumnIsNotAFeature) {
  auto loaded = parse_csv("a,race,b,y\n1,1,0,1\n0,0,1,0\n", "y", std::string("race"));
  ASSERT_TRUE(loaded.sensitive.has_value());
  EXPECT_EQ(loaded.sensitive->name, "race");
  EXPECT_EQ(loaded.sensitive->values, bits({1, 0}));
  EXPECT_EQ(loaded.dataset.feature_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCsvTest, NonBinaryCellNamesRowAndColumn) {
  try {
    parse_csv("a,b,y\n1,0,1\n0,2,0\n", "y");
    FAIL() << "expected NonBinaryValue";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonBinaryValue);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
}

TEST(LoadCsvTest, ErrorCases) {
  EXPECT_EQ(code_of([] { parse_csv("a,b,y\n1,0,1\n", "label"); }), ErrorCode::kMissingColumn);
  EXPECT_EQ(code_of([] { parse_csv("a,b,y\n1,0,1\n", "y", std::string("z")); }),
            ErrorCode::kMissingColumn);
  EXPECT_EQ(code_of([] { parse_csv("a,b,y\n", "y"); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([] { parse_csv("a,b,y\n1,0\n", "y"); }), ErrorCode::kMalformedInput);
  EXPECT_EQ(code_of([] { parse_csv("a,a,y\n1,0,1\n", "y"); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(code_of([] { load_csv("/nonexistent/file.csv", "y"); }), ErrorCode::kIo);
}

TEST(DatasetTest, PositiveCount) {
  EXPECT_EQ(positive_count(testing_support::toy_dataset()), 2u);
  EXPECT_EQ(positive_count(BinaryDataset({}, bits({0, 0, 0}), {})), 0u);
  EXPECT_EQ(positive_count(BinaryDataset({}, bits({1, 1, 1, 1, 1}), {})), 5u);
}

BinaryDataset random_dataset(std::size_t n, std::size_t j, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BitVector> cols(j, BitVector(n));
  BitVector labels(n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < j; ++c) names.push_back("x" + std::to_string(c));
  for (std::size_t r = 0; r < n; ++r) {
    for (auto& col : cols) col.set(r, rng() & 1);
    labels.set(r, rng() & 1);
  }
  return BinaryDataset(std::move(cols), labels, names);
}

TEST(SplitTest, SizesFollowFloor) {
  const auto data = random_dataset(10, 3, 1);
  const auto s = split(data, 0.9, 0);
  EXPECT_EQ(s.train.n_examples(), 9u);
  EXPECT_EQ(s.test.n_examples(), 1u);
  EXPECT_EQ(split(data, 0.7, 0).train.n_examples(), 7u);
}

TEST(SplitTest, FullFractionFlagsEmptyTest) {
  const auto data = random_dataset(10, 3, 1);
  const auto s = split(data, 1.0, 3);
  EXPECT_EQ(s.train.n_examples(), 10u);
  EXPECT_EQ(s.test.n_examples(), 0u);
  EXPECT_TRUE(s.test_empty);
}

TEST(SplitTest, DeterministicExhaustiveAndDisjoint) {
  const auto data = random_dataset(57, 4, 2);
  const auto s1 = split(data, 0.6, 42);
  const auto s2 = split(data, 0.6, 42);
  EXPECT_EQ(s1.train_rows, s2.train_rows);
  EXPECT_EQ(s1.test_rows, s2.test_rows);
  std::set<std::size_t> all(s1.train_rows.begin(), s1.train_rows.end());
  all.insert(s1.test_rows.begin(), s1.test_rows.end());
  EXPECT_EQ(all.size(), 57u);
  EXPECT_EQ(s1.train_rows.size() + s1.test_rows.size(), 57u);
  for (std::size_t i = 0; i < s1.train_rows.size(); ++i) {
    EXPECT_EQ(s1.train.labels().test(i), data.labels().test(s1.train_rows[i]));
  }
}

TEST(SplitTest, RejectsBadFraction) {
  const auto data = random_dataset(10, 3, 1);
  EXPECT_EQ(code_of([&] { split(data, 0.0, 0); }), ErrorCode::kInvalidFraction);
  EXPECT_EQ(code_of([&] { split(data, 1.5, 0); }), ErrorCode::kInvalidFraction);
}

TEST(DatasetPropertyTest, CsvRoundTripAndOnesCount) {
  const auto dir = std::filesystem::temp_directory_path() / "rashomon_dataset_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = random_dataset(1 + seed * 7, 1 + seed % 5, seed);
    SensitiveVector z{random_dataset(data.n_examples(), 1, seed + 100).feature(0), "z"};
    const auto path = dir / ("rt" + std::to_string(seed) + ".csv");
    write_csv(path, data, "y", &z);
    const auto back = load_csv(path, "y", std::string("z"));
    ASSERT_EQ(back.dataset.features(), data.features());
    ASSERT_EQ(back.dataset.labels(), data.labels());
    ASSERT_EQ(back.sensitive->values, z.values);
    EXPECT_EQ(back.dataset.fingerprint(), data.fingerprint());

    // Feature popcounts add up to the 1-cells of the feature columns in the file.
    std::size_t ones_in_features = 0;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      // All columns but the last two (sensitive, label) are features.
      std::size_t col = 0;
      const std::size_t n_cols = data.n_features() + 2;
      for (char c : line) {
        if (c == ',') {
          ++col;
        } else if (c == '1' && col < n_cols - 2) {
          ++ones_in_features;
        }
      }
    }
    std::size_t popcounts = 0;
    for (const auto& f : data.features()) popcounts += f.count();
    EXPECT_EQ(popcounts, ones_in_features);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rashomon
