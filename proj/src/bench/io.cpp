#include "lra/bench/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lra::bench {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("not a number: '" + s + "'");
  return v;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

void write_lram(const std::string& path, const MatrixXd& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write("LRAM", 4);
  out.put(1);
  put_u64(out, static_cast<std::uint64_t>(M.rows()));
  put_u64(out, static_cast<std::uint64_t>(M.cols()));
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      std::uint64_t bits;
      const double v = M(i, j);
      std::memcpy(&bits, &v, 8);
      put_u64(out, bits);
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

MatrixXd read_lram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LRAM", 4) != 0) throw IoError("bad LRAM magic: " + path);
  const int version = in.get();
  if (version != 1) throw IoError("unsupported LRAM version " + std::to_string(version));
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (!in || rows > (1u << 30) || cols > (1u << 30)) throw IoError("bad LRAM header: " + path);
  MatrixXd M(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      const std::uint64_t bits = get_u64(in);
      std::memcpy(&M(i, j), &bits, 8);
    }
  }
  if (!in) throw IoError("truncated LRAM file: " + path);
  return M;
}

void write_matrix_csv(const std::string& path, const MatrixXd& M) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << fmt(M(i, j));
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(to_double(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw IoError("ragged CSV matrix: " + path);
    rows.push_back(std::move(row));
  }
  MatrixXd M(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return M;
}

MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in && std::memcmp(magic, "LRAM", 4) == 0) return read_lram(path);
  return read_matrix_csv(path);
}

void write_matrix(const std::string& path, const MatrixXd& M) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    write_matrix_csv(path, M);
  } else {
    write_lram(path, M);
  }
}

bool SummaryRow::operator==(const SummaryRow& o) const {
  return input_class == o.input_class && family == o.family && algorithm == o.algorithm && r == o.r && l == o.l &&
         k == o.k && trials == o.trials && same_double(mean, o.mean) && same_double(std, o.std) &&
         degenerate_count == o.degenerate_count && same_double(mean_entry_accesses, o.mean_entry_accesses);
}

const char* const kCsvHeader =
    "input_class,family,algorithm,r,l,k,trials,mean,std,degenerate_count,mean_entry_accesses";

SummaryRow summarize(const ErrorReport& rep) {
  SummaryRow row;
  row.input_class = rep.input_class;
  row.family = rep.family;
  row.algorithm = rep.algorithm;
  row.r = rep.r;
  row.l = rep.l_rule;
  row.k = rep.k_rule;
  row.trials = rep.trials;
  row.mean = rep.mean;
  row.std = rep.std;
  row.degenerate_count = rep.degenerate_count;
  row.mean_entry_accesses = rep.mean_entry_accesses;
  return row;
}

void write_csv(std::ostream& out, const std::vector<ErrorReport>& reports) {
  out << kCsvHeader << '\n';
  for (const auto& rep : reports) {
    const SummaryRow s = summarize(rep);
    out << s.input_class << ',' << s.family << ',' << s.algorithm << ',' << s.r << ',' << s.l << ',' << s.k << ','
        << s.trials << ',' << fmt(s.mean) << ',' << fmt(s.std) << ',' << s.degenerate_count << ','
        << fmt(s.mean_entry_accesses) << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ErrorReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_csv(out, reports);
  if (!out) throw IoError("write failed: " + path);
}

std::vector<SummaryRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("missing or unexpected CSV header");
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 11) throw IoError("expected 11 CSV fields, got " + std::to_string(c.size()));
    SummaryRow s;
    s.input_class = c[0];
    s.family = std::stoi(c[1]);
    s.algorithm = c[2];
    s.r = std::stoll(c[3]);
    s.l = c[4];
    s.k = c[5];
    s.trials = std::stoi(c[6]);
    s.mean = to_double(c[7]);
    s.std = to_double(c[8]);
    s.degenerate_count = std::stoi(c[9]);
    s.mean_entry_accesses = to_double(c[10]);
    rows.push_back(std::move(s));
  }
  return rows;
}

std::string text_table(const std::string& title, const std::vector<std::string>& column_labels,
                       const std::vector<std::vector<ErrorReport>>& reports) {
  if (column_labels.size() != reports.size()) throw std::invalid_argument("text_table: label count mismatch");
  std::size_t rows = 0;
  for (const auto& col : reports) rows = std::max(rows, col.size());
  std::ostringstream out;
  char buf[64];
  out << title << '\n';
  std::snprintf(buf, sizeof buf, "%-8s", "Family");
  out << buf;
  for (const auto& label : column_labels) {
    std::snprintf(buf, sizeof buf, " | %-21s", label.c_str());
    out << buf;
  }
  out << "\n        ";
  for (std::size_t c = 0; c < column_labels.size(); ++c) {
    std::snprintf(buf, sizeof buf, " | %-10s %-10s", "Mean", "Std");
    out << buf;
  }
  out << '\n';
  for (std::size_t f = 0; f < rows; ++f) {
    bool have = false;
    int family = 0;
    for (const auto& col : reports) {
      if (f < col.size()) {
        family = col[f].family;
        have = true;
        break;
      }
    }
    if (!have) continue;
    std::snprintf(buf, sizeof buf, "%-8d", family);
    out << buf;
    for (const auto& col : reports) {
      if (f < col.size()) {
        std::snprintf(buf, sizeof buf, " | %-10.2e %-10.2e", col[f].mean, col[f].std);
      } else {
        std::snprintf(buf, sizeof buf, " | %-10s %-10s", "---", "---");
      }
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace lra::bench
