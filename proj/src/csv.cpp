#include "nps/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace nps {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void fail(const std::string& what, std::size_t line_no) {
  throw std::runtime_error("CSV line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& tok, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail("expected a number, got '" + tok + "'", line_no);
  return v;
}

long long parse_int(const std::string& tok, std::size_t line_no) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail("expected an integer, got '" + tok + "'", line_no);
  return v;
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail("expected an unsigned integer, got '" + tok + "'", line_no);
  return v;
}

// getline tolerant of a trailing \r (files may round-trip through Windows)
bool read_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& is, const std::string& expected,
                   const char* what) {
  std::string line;
  if (!read_line(is, line) || line != expected)
    throw std::runtime_error(std::string(what) + ": expected header '" + expected +
                             "', got '" + line + "'");
}

} // namespace

void write_coverage_csv(std::ostream& os, std::span<const CoverageRecord> records) {
  os << kCoverageCsvHeader << '\n';
  for (const CoverageRecord& r : records) {
    os << r.method.canonical() << ',' << r.n << ',' << format_real(r.level.level)
       << ',' << format_real(r.tpmd.det) << ',' << format_real(r.tpmd.pas) << ','
       << format_real(r.tpmd.pro) << ',' << format_real(r.true_nps) << ','
       << format_real(r.true_var) << ',';
    if (r.mode == CoverageMode::Exact)
      os << "exact,,";
    else
      os << "monte_carlo," << r.sims << ',' << r.seed;
    os << ',' << format_real(r.coverage) << ',' << format_real(r.mean_width)
       << '\n';
  }
}

std::vector<CoverageRecord> read_coverage_csv(std::istream& is) {
  expect_header(is, kCoverageCsvHeader, "coverage CSV");
  std::vector<CoverageRecord> out;
  std::string line;
  std::size_t line_no = 1;
  while (read_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() != 13) fail("expected 13 fields, got " + std::to_string(f.size()), line_no);
    CoverageRecord r;
    try {
      r.method = MethodSpec::parse(f[0]);
    } catch (const std::exception& e) {
      fail(e.what(), line_no);
    }
    r.n = parse_int(f[1], line_no);
    r.level = ConfidenceLevel(parse_double(f[2], line_no));
    try {
      r.tpmd = Tpmd(parse_double(f[3], line_no), parse_double(f[4], line_no),
                    parse_double(f[5], line_no));
    } catch (const std::exception& e) {
      fail(e.what(), line_no);
    }
    r.true_nps = parse_double(f[6], line_no);
    r.true_var = parse_double(f[7], line_no);
    if (f[8] == "exact") {
      r.mode = CoverageMode::Exact;
      if (!f[9].empty() || !f[10].empty())
        fail("exact rows must leave sims and seed empty", line_no);
    } else if (f[8] == "monte_carlo") {
      r.mode = CoverageMode::MonteCarlo;
      r.sims = parse_int(f[9], line_no);
      r.seed = parse_u64(f[10], line_no);
    } else {
      fail("unknown mode '" + f[8] + "'", line_no);
    }
    r.coverage = parse_double(f[11], line_no);
    r.mean_width = parse_double(f[12], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

void write_weights_csv(std::ostream& os, std::span<const Tpmd> tpmds,
                       std::span<const double> weights) {
  if (tpmds.size() != weights.size())
    throw std::invalid_argument("write_weights_csv: tpmds and weights differ in length");
  os << "index,p_det,p_pas,p_pro,weight\n";
  for (std::size_t i = 0; i < tpmds.size(); ++i)
    os << i << ',' << format_real(tpmds[i].det) << ',' << format_real(tpmds[i].pas)
       << ',' << format_real(tpmds[i].pro) << ',' << format_real(weights[i]) << '\n';
}

WeightsFile read_weights_csv(std::istream& is) {
  expect_header(is, "index,p_det,p_pas,p_pro,weight", "weights CSV");
  WeightsFile out;
  std::string line;
  std::size_t line_no = 1;
  while (read_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() != 5) fail("expected 5 fields, got " + std::to_string(f.size()), line_no);
    if (parse_int(f[0], line_no) != static_cast<long long>(out.tpmds.size()))
      fail("index column out of sequence", line_no);
    try {
      out.tpmds.emplace_back(parse_double(f[1], line_no), parse_double(f[2], line_no),
                             parse_double(f[3], line_no));
    } catch (const std::exception& e) {
      fail(e.what(), line_no);
    }
    out.weights.push_back(parse_double(f[4], line_no));
  }
  return out;
}

void write_observations_csv(std::ostream& os, std::span<const NpsVarPoint> points) {
  os << "nps,variance\n";
  for (const NpsVarPoint& p : points)
    os << format_real(p.nps) << ',' << format_real(p.variance) << '\n';
}

std::vector<NpsVarPoint> read_observations_csv(std::istream& is) {
  expect_header(is, "nps,variance", "observations CSV");
  std::vector<NpsVarPoint> out;
  std::string line;
  std::size_t line_no = 1;
  while (read_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() != 2) fail("expected 2 fields, got " + std::to_string(f.size()), line_no);
    out.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no)});
  }
  return out;
}

} // namespace nps
