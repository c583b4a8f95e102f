#include "nps/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nps {

namespace {

bool tpmd_close(const Tpmd& a, const Tpmd& b) {
  return std::fabs(a.det - b.det) <= 1e-9 && std::fabs(a.pas - b.pas) <= 1e-9 &&
         std::fabs(a.pro - b.pro) <= 1e-9;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

} // namespace

MaeTable build_mae_table(std::span<const CoverageRecord> records,
                         const WeightsFile* weights, Weighting weighting,
                         bool rank_order) {
  if (records.empty())
    throw std::invalid_argument("build_mae_table: no coverage records");
  if (weighting == Weighting::Observed && weights == nullptr)
    throw std::invalid_argument("build_mae_table: observed weighting needs a weights file");

  double level = records.front().level.level;
  for (const CoverageRecord& r : records)
    if (std::fabs(r.level.level - level) > 1e-12)
      throw std::invalid_argument("build_mae_table: records mix confidence levels");

  // group rows by (method, n), preserving first-appearance order
  std::vector<std::string> method_order;
  std::map<std::string, MethodSpec> method_specs;
  std::vector<long long> n_order;
  std::map<std::pair<std::string, long long>, std::vector<const CoverageRecord*>> groups;
  for (const CoverageRecord& r : records) {
    std::string key = r.method.canonical();
    if (!method_specs.count(key)) {
      method_order.push_back(key);
      method_specs.emplace(key, r.method);
    }
    if (std::find(n_order.begin(), n_order.end(), r.n) == n_order.end())
      n_order.push_back(r.n);
    groups[{key, r.n}].push_back(&r);
  }
  std::sort(n_order.begin(), n_order.end());

  std::size_t group_size = groups.begin()->second.size();
  for (const auto& [key, group] : groups) {
    if (group.size() != group_size)
      throw std::invalid_argument("build_mae_table: (method, n) groups differ in size");
    for (std::size_t j = 0; j < group.size(); ++j)
      if (!tpmd_close(group[j]->tpmd, groups.begin()->second[j]->tpmd))
        throw std::invalid_argument(
            "build_mae_table: groups disagree on the tpmd sample or its order");
  }

  std::vector<double> w;
  if (weighting == Weighting::Observed) {
    if (weights->tpmds.size() != group_size)
      throw std::invalid_argument("build_mae_table: weights file size does not match the tpmd sample");
    const auto& ref = groups.begin()->second;
    for (std::size_t j = 0; j < group_size; ++j)
      if (!tpmd_close(weights->tpmds[j], ref[j]->tpmd))
        throw std::invalid_argument(
            "build_mae_table: weights file tpmds do not match the coverage sample");
    w = weights->weights;
  } else {
    w.assign(group_size, 1.0 / static_cast<double>(group_size));
  }

  MaeTable table;
  table.weighting = weighting;
  table.level = ConfidenceLevel(level);
  table.n_values = n_order;
  for (const std::string& key : method_order) {
    MaeTableRow row;
    row.method = method_specs.at(key);
    for (long long n : n_order) {
      auto it = groups.find({key, n});
      if (it == groups.end())
        throw std::invalid_argument("build_mae_table: method '" + key +
                                    "' is missing n=" + std::to_string(n));
      std::vector<CoverageRecord> cell;
      cell.reserve(it->second.size());
      for (const CoverageRecord* r : it->second) cell.push_back(*r);
      MaeSummary s = mae(cell, w, weighting);
      row.mae_by_n.push_back(s.mae);
      if (n <= 100) row.total_le_100 += s.mae;
    }
    table.rows.push_back(std::move(row));
  }

  // average per-n rank
  for (std::size_t ni = 0; ni < n_order.size(); ++ni) {
    std::vector<double> col;
    col.reserve(table.rows.size());
    for (const MaeTableRow& row : table.rows) col.push_back(row.mae_by_n[ni]);
    std::vector<double> ranks = min_ranks(col);
    for (std::size_t mi = 0; mi < table.rows.size(); ++mi)
      table.rows[mi].avg_rank += ranks[mi];
  }
  for (MaeTableRow& row : table.rows)
    row.avg_rank /= static_cast<double>(n_order.size());

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [&](const MaeTableRow& a, const MaeTableRow& b) {
                     return rank_order ? a.avg_rank < b.avg_rank
                                       : a.total_le_100 < b.total_le_100;
                   });
  return table;
}

void write_mae_csv(std::ostream& os, std::span<const MaeTable> tables) {
  os << "method,n,level,weighting,mae\n";
  for (const MaeTable& table : tables) {
    const char* tag = table.weighting == Weighting::Uniform ? "uniform" : "observed";
    for (const MaeTableRow& row : table.rows)
      for (std::size_t ni = 0; ni < table.n_values.size(); ++ni)
        os << row.method.canonical() << ',' << table.n_values[ni] << ','
           << format_real(table.level.level) << ',' << tag << ','
           << format_real(row.mae_by_n[ni]) << '\n';
  }
}

std::string render_markdown_report(std::span<const MaeTable> tables,
                                   bool raw_scale) {
  std::ostringstream os;
  os << "# Coverage MAE report\n";
  for (const MaeTable& table : tables) {
    double scale = raw_scale ? 1.0 : 100.0;
    os << "\n## "
       << (table.weighting == Weighting::Uniform ? "Uniform weighting"
                                                 : "Observed weighting")
       << "\n\nLevel " << format_real(table.level.level) << "; MAE values "
       << (raw_scale ? "unscaled" : "multiplied by 100") << ".\n\n";
    os << "| method |";
    for (long long n : table.n_values) os << " n=" << n << " |";
    os << " total (n<=100) | avg rank |\n";
    os << "|---|";
    for (std::size_t i = 0; i < table.n_values.size(); ++i) os << "---:|";
    os << "---:|---:|\n";
    for (const MaeTableRow& row : table.rows) {
      os << "| " << row.method.canonical() << " |";
      for (double v : row.mae_by_n) os << ' ' << fixed4(v * scale) << " |";
      os << ' ' << fixed4(row.total_le_100 * scale) << " | " << fixed2(row.avg_rank)
         << " |\n";
    }
  }
  return os.str();
}

} // namespace nps
