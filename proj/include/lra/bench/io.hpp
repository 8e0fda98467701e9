#pragma once

// Matrix files (LRAM binary and CSV) and report emission (CSV and text tables).

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lra/bench/experiment.hpp"

namespace lra::bench {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "LRAM", version byte 1, u64 LE rows, u64 LE cols, row-major f64 LE.
void write_lram(const std::string& path, const MatrixXd& M);
MatrixXd read_lram(const std::string& path);
void write_matrix_csv(const std::string& path, const MatrixXd& M);
MatrixXd read_matrix_csv(const std::string& path);
/// Dispatches on the magic bytes: LRAM files are binary, anything else is CSV.
MatrixXd read_matrix(const std::string& path);
/// Dispatches on the extension: ".csv" writes CSV, anything else LRAM.
void write_matrix(const std::string& path, const MatrixXd& M);

/// One CSV line of a report.
struct SummaryRow {
  std::string input_class;
  int family = 0;
  std::string algorithm;
  Index r = 0;
  std::string l;
  std::string k;
  int trials = 0;
  double mean = 0;
  double std = 0;
  int degenerate_count = 0;
  double mean_entry_accesses = 0;

  bool operator==(const SummaryRow& o) const;
};

extern const char* const kCsvHeader;

SummaryRow summarize(const ErrorReport& report);
void write_csv(std::ostream& out, const std::vector<ErrorReport>& reports);
void write_csv(const std::string& path, const std::vector<ErrorReport>& reports);
std::vector<SummaryRow> parse_csv(std::istream& in);

/// A text table with one row per family and a (Mean, Std) column pair per
/// labelled column of reports. reports[c][f] is column c, family row f.
std::string text_table(const std::string& title, const std::vector<std::string>& column_labels,
                       const std::vector<std::vector<ErrorReport>>& reports);

}  // namespace lra::bench
