#include "vlcfl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <string_view>

#include "numfmt.hpp"
#include "vlcfl/error.hpp"
#include "vlcfl/random.hpp"

namespace vlcfl {
namespace {

constexpr std::size_t kColumns = kInputs + 1;

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

struct Moments {
  double mean = 0.0;
  double sd = 1.0;
};

template <typename Get>
Moments moments(const std::vector<std::size_t>& rows, Get get) {
  Moments m;
  double sum = 0.0;
  for (auto r : rows) sum += get(r);
  m.mean = sum / static_cast<double>(rows.size());
  double ss = 0.0;
  for (auto r : rows) ss += (get(r) - m.mean) * (get(r) - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(rows.size()));
  if (!(m.sd > 0.0)) m.sd = 1.0;  // constant column: centre only
  return m;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& name) {
  Dataset data;
  data.name = name;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (!seen_content) {
      seen_content = true;
      if (!detail::parse_double(cells.front())) continue;  // header
    }
    if (cells.size() != kColumns) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kColumns) + " columns, found " + std::to_string(cells.size()));
    }
    Features x;
    double y = 0.0;
    for (std::size_t c = 0; c < kColumns; ++c) {
      const auto v = detail::parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(line_no, "column " + std::to_string(c + 1) + " is not a finite number: '" +
                                      std::string(detail::trim(cells[c])) + "'");
      }
      if (c < kInputs) {
        x[c] = *v;
      } else {
        y = *v;
      }
    }
    data.features.push_back(x);
    data.targets.push_back(y);
  }
  if (data.size() == 0) throw SchemaError(name + ": no data rows");
  return data;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dataset '" + path + "'");
  return parse_dataset(in, path);
}

Dataset synthetic_dataset(std::size_t rows, std::uint64_t seed) {
  if (rows < 2) throw InvalidArgument("synthetic dataset needs at least two rows");
  constexpr std::size_t kFactors = 4;
  Rng rng(seed);

  std::array<std::array<double, kInputs>, kFactors> loading;
  for (auto& row : loading) {
    for (auto& a : row) a = rng.normal();
  }
  Features w;
  for (auto& v : w) v = rng.normal();

  Dataset data;
  data.name = "synthetic-" + std::to_string(rows) + "-" + std::to_string(seed);
  data.features.resize(rows);
  std::vector<double> linear(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::array<double, kFactors> z;
    for (auto& v : z) v = rng.normal();
    Features& x = data.features[r];
    for (std::size_t i = 0; i < kInputs; ++i) {
      double v = 0.5 * rng.normal();
      for (std::size_t f = 0; f < kFactors; ++f) v += z[f] * loading[f][i];
      x[i] = v;
    }
    linear[r] = std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
  }

  const auto all = [&] {
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
  }();
  const auto lin = moments(all, [&](std::size_t r) { return linear[r]; });
  std::vector<double> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& x = data.features[r];
    y[r] = linear[r] / lin.sd + 0.6 * std::tanh(x[0] * x[1] / 4.0) + 0.4 * rng.normal();
  }
  const auto ym = moments(all, [&](std::size_t r) { return y[r]; });
  data.targets.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) data.targets[r] = 22.5 + 9.2 * (y[r] - ym.mean) / ym.sd;
  return data;
}

Partition partition_rows(std::size_t rows, std::size_t n_users, std::size_t test_size,
                         std::uint64_t seed) {
  if (n_users == 0) throw InvalidArgument("need at least one user");
  if (test_size + n_users > rows) {
    throw InvalidArgument("cannot hold out " + std::to_string(test_size) + " rows and give " +
                          std::to_string(n_users) + " users a row each from " +
                          std::to_string(rows) + " rows");
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const std::size_t per_user = (rows - test_size) / n_users;
  Partition p;
  auto it = order.begin();
  p.test.assign(it, it + static_cast<std::ptrdiff_t>(test_size));
  it += static_cast<std::ptrdiff_t>(test_size);
  p.shards.resize(n_users);
  for (auto& shard : p.shards) {
    shard.assign(it, it + static_cast<std::ptrdiff_t>(per_user));
    it += static_cast<std::ptrdiff_t>(per_user);
    std::sort(shard.begin(), shard.end());
  }
  p.unused.assign(it, order.end());
  std::sort(p.test.begin(), p.test.end());
  std::sort(p.unused.begin(), p.unused.end());
  return p;
}

FederatedData split_and_partition(const Dataset& data, std::size_t n_users, std::size_t test_size,
                                  std::uint64_t seed) {
  FederatedData fd;
  fd.partition = partition_rows(data.size(), n_users, test_size, seed);
  const auto& part = fd.partition;

  std::vector<std::size_t> train_rows = part.unused;
  for (const auto& s : part.shards) train_rows.insert(train_rows.end(), s.begin(), s.end());
  std::sort(train_rows.begin(), train_rows.end());

  std::array<Moments, kInputs> fx;
  for (std::size_t i = 0; i < kInputs; ++i) {
    fx[i] = moments(train_rows, [&](std::size_t r) { return data.features[r][i]; });
  }
  const auto ty = moments(train_rows, [&](std::size_t r) { return data.targets[r]; });
  fd.scale = {ty.mean, ty.sd};

  const auto fill = [&](DataShard& out, const std::vector<std::size_t>& rows) {
    out.inputs.reserve(rows.size());
    out.targets.reserve(rows.size());
    for (auto r : rows) {
      Features x;
      for (std::size_t i = 0; i < kInputs; ++i) x[i] = (data.features[r][i] - fx[i].mean) / fx[i].sd;
      out.inputs.push_back(x);
      out.targets.push_back((data.targets[r] - ty.mean) / ty.sd);
    }
  };
  fd.shards.resize(n_users);
  for (std::size_t k = 0; k < n_users; ++k) {
    fd.shards[k].owner = static_cast<UserId>(k);
    fill(fd.shards[k], part.shards[k]);
  }
  fd.test.owner = -1;
  fill(fd.test, part.test);
  return fd;
}

}  // namespace vlcfl
