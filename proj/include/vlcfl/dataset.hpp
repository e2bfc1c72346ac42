#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlcfl/federated.hpp"
#include "vlcfl/mlp.hpp"

namespace vlcfl {

struct Dataset {
  std::string name;
  std::vector<Features> features;
  std::vector<double> targets;

  std::size_t size() const noexcept { return targets.size(); }
};

/// CSV with 14 numeric columns (13 features, then the target). A first line
/// whose leading cell is not a number is taken as a header. Blank lines are
/// skipped. Wrong column counts and files without data rows raise
/// SchemaError; non-numeric or non-finite cells raise ParseError with the
/// 1-based line number.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(std::istream& in, const std::string& name);

/// Housing-shaped regression data for runs without an external file:
/// 13 correlated features from a 4-factor model, a target that is linear in
/// the features plus a mild interaction and noise, rescaled to mean 22.5 and
/// sd 9.2.
Dataset synthetic_dataset(std::size_t rows, std::uint64_t seed);

// Row indices; every list sorted ascending.
struct Partition {
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> shards;
  std::vector<std::size_t> unused;
};

/// Shuffles the rows, takes the first `test_size` as the test set and deals
/// floor((rows - test_size) / n_users) rows to each user. Leftovers stay
/// unused. Throws InvalidArgument unless 1 <= n_users and
/// test_size + n_users <= rows.
Partition partition_rows(std::size_t rows, std::size_t n_users, std::size_t test_size,
                         std::uint64_t seed);

struct FederatedData {
  std::vector<DataShard> shards;  // shard k belongs to user k
  DataShard test;
  TargetScale scale;
  Partition partition;
};

/// partition_rows plus standardization. Means and standard deviations come
/// from all non-test rows (shards and leftovers), never from the test set.
FederatedData split_and_partition(const Dataset& data, std::size_t n_users, std::size_t test_size,
                                  std::uint64_t seed);

}  // namespace vlcfl
