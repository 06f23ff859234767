#include "isildpc/protomatrix.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace isildpc {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

Protomatrix::Protomatrix(int rows, int cols, std::vector<int> entries,
                         std::set<int> punctured, int max_entry)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), punctured_(std::move(punctured)) {
  if (rows_ <= 0 || cols_ <= 0) fail("protomatrix: dimensions must be positive");
  if (entries_.size() != static_cast<std::size_t>(rows_) * cols_)
    fail("protomatrix: entry count does not match dimensions");
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      int v = at(r, c);
      if (v < 0) fail("protomatrix: negative entry at row " + std::to_string(r + 1) +
                      ", column " + std::to_string(c + 1));
      if (v > max_entry)
        fail("protomatrix: entry " + std::to_string(v) + " at row " + std::to_string(r + 1) +
             ", column " + std::to_string(c + 1) + " exceeds the multiplicity bound " +
             std::to_string(max_entry));
    }
  }
  for (int r = 0; r < rows_; ++r)
    if (row_sum(r) == 0) fail("protomatrix: all-zero row " + std::to_string(r + 1));
  for (int c = 0; c < cols_; ++c)
    if (col_sum(c) == 0) fail("protomatrix: all-zero column " + std::to_string(c + 1));
  for (int c : punctured_)
    if (c < 0 || c >= cols_)
      fail("protomatrix: punctured column " + std::to_string(c + 1) + " out of range");
}

Protomatrix Protomatrix::parse(const std::string& text, int max_entry) {
  std::istringstream in(text);
  auto next_int = [&](const char* what) {
    long long v;
    if (!(in >> v)) fail(std::string("protomatrix parse: expected ") + what);
    return v;
  };
  long long rows = next_int("check count");
  long long cols = next_int("variable count");
  if (rows <= 0 || cols <= 0 || rows > 4096 || cols > 4096)
    fail("protomatrix parse: malformed header dimensions");
  long long np = next_int("punctured count");
  if (np < 0 || np > cols) fail("protomatrix parse: malformed punctured count");
  std::set<int> punctured;
  for (long long i = 0; i < np; ++i) {
    long long idx = next_int("punctured index");
    if (idx < 1 || idx > cols)
      fail("protomatrix parse: punctured index " + std::to_string(idx) + " out of range");
    punctured.insert(static_cast<int>(idx - 1));
  }
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (long long i = 0; i < rows * cols; ++i) {
    long long v = next_int("matrix entry");
    entries.push_back(static_cast<int>(v));
  }
  std::string trailing;
  if (in >> trailing) fail("protomatrix parse: trailing content '" + trailing + "'");
  return Protomatrix(static_cast<int>(rows), static_cast<int>(cols), std::move(entries),
                     std::move(punctured), max_entry);
}

std::string Protomatrix::serialize() const {
  std::ostringstream out;
  out << rows_ << ' ' << cols_ << '\n';
  out << punctured_.size();
  for (int c : punctured_) out << ' ' << (c + 1);
  out << '\n';
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (c) out << ' ';
      out << at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

int Protomatrix::row_sum(int r) const {
  int s = 0;
  for (int c = 0; c < cols_; ++c) s += at(r, c);
  return s;
}

int Protomatrix::col_sum(int c) const {
  int s = 0;
  for (int r = 0; r < rows_; ++r) s += at(r, c);
  return s;
}

int Protomatrix::total_edges() const {
  int s = 0;
  for (int v : entries_) s += v;
  return s;
}

int Protomatrix::max_entry() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

Rational Protomatrix::rate() const {
  int p = static_cast<int>(punctured_.size());
  long long num = cols_ - rows_ - p;
  long long den = cols_ - p;
  if (num <= 0 || den <= 0)
    fail("protomatrix: non-positive design rate " + std::to_string(num) + "/" +
         std::to_string(den));
  return Rational(num, den);
}

std::string LinearGrowthReport::str() const {
  if (pass) return "pass";
  std::ostringstream out;
  out << "fail: columns";
  for (int c : violating_cols) out << ' ' << (c + 1);
  out << " have protected-row sum < 3";
  return out.str();
}

LinearGrowthReport validate_linear_growth(const Protomatrix& p,
                                          const std::vector<int>& protected_rows,
                                          const std::vector<int>& candidate_cols) {
  if (protected_rows.empty() || candidate_cols.empty())
    fail("validate_linear_growth: empty index set");
  for (int r : protected_rows)
    if (r < 0 || r >= p.rows())
      fail("validate_linear_growth: protected row " + std::to_string(r + 1) + " out of range");
  for (int c : candidate_cols)
    if (c < 0 || c >= p.cols())
      fail("validate_linear_growth: candidate column " + std::to_string(c + 1) + " out of range");
  LinearGrowthReport report;
  report.pass = true;
  for (int c : candidate_cols) {
    int s = 0;
    for (int r : protected_rows) s += p.at(r, c);
    report.sums.push_back(s);
    if (s < 3) {
      report.pass = false;
      report.violating_cols.push_back(c);
    }
  }
  return report;
}

Protomatrix nest_extend(const Protomatrix& parent, const ExtensionColumns& ext) {
  if (ext.parent_rows != parent.rows())
    fail("nest_extend: extension row count " + std::to_string(ext.parent_rows) +
         " does not match parent rows " + std::to_string(parent.rows()));
  if (ext.cols.empty()) fail("nest_extend: no extension columns");
  for (const auto& col : ext.cols) {
    if (static_cast<int>(col.size()) != parent.rows())
      fail("nest_extend: extension column length mismatch");
    int s = 0;
    for (int v : col) s += v;
    if (s == 0) fail("nest_extend: all-zero extension column");
  }
  int rows = parent.rows();
  int cols = parent.cols() + static_cast<int>(ext.cols.size());
  std::vector<int> entries(static_cast<std::size_t>(rows) * cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < parent.cols(); ++c)
      entries[static_cast<std::size_t>(r) * cols + c] = parent.at(r, c);
    for (std::size_t e = 0; e < ext.cols.size(); ++e)
      entries[static_cast<std::size_t>(r) * cols + parent.cols() + e] = ext.cols[e][r];
  }
  return Protomatrix(rows, cols, std::move(entries), parent.punctured());
}

Protomatrix rc_extend(const Protomatrix& parent, const RcExtension& ext) {
  int m = ext.added();
  if (m == 0) fail("rc_extend: no extension rows");
  for (const auto& row : ext.a_rows) {
    if (static_cast<int>(row.size()) != parent.cols())
      fail("rc_extend: A row length " + std::to_string(row.size()) +
           " does not match parent columns " + std::to_string(parent.cols()));
    int s = 0;
    for (int v : row) s += v;
    if (s == 0) fail("rc_extend: all-zero A row (disconnected check)");
  }
  int rows = parent.rows() + m;
  int cols = parent.cols() + m;
  std::vector<int> entries(static_cast<std::size_t>(rows) * cols, 0);
  for (int r = 0; r < parent.rows(); ++r)
    for (int c = 0; c < parent.cols(); ++c)
      entries[static_cast<std::size_t>(r) * cols + c] = parent.at(r, c);
  for (int e = 0; e < m; ++e) {
    int r = parent.rows() + e;
    for (int c = 0; c < parent.cols(); ++c)
      entries[static_cast<std::size_t>(r) * cols + c] = ext.a_rows[e][c];
    entries[static_cast<std::size_t>(r) * cols + parent.cols() + e] = 1;  // B = identity
  }
  return Protomatrix(rows, cols, std::move(entries), parent.punctured());
}

namespace {

// Rate-9/10 nested-family protomatrix; every nested member is a column
// prefix of it (3 columns per rate step, base code in the first 6).
constexpr std::array<std::array<int, 30>, 3> kNested910 = {{
    {1, 0, 0, 1, 0, 4, 2, 0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1},
    {0, 1, 2, 1, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 1, 2, 1, 1, 1, 1, 2, 2, 1},
    {0, 1, 1, 2, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 2, 2, 1, 1, 2, 1, 2, 2, 2, 2, 2, 1, 2},
}};

// Lowest-rate rate-compatible protomatrix (rate 27/41); its leading blocks
// are the other rc members and its top-left 3x30 block is the rate-9/10 code.
constexpr std::array<std::array<int, 41>, 14> kRc2741 = {{
    {1, 0, 0, 1, 0, 4, 2, 0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 2, 1, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 1, 2, 1, 1, 1, 1, 2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 1, 2, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 2, 2, 1, 1, 2, 1, 2, 2, 2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 1, 1, 2, 0, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 2, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 2, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
    {0, 0, 0, 0, 0, 2, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
    {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
    {0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
}};

Protomatrix nested_prefix(int v_cols) {
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(3) * v_cols);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < v_cols; ++c) entries.push_back(kNested910[r][c]);
  return Protomatrix(3, v_cols, std::move(entries));
}

Protomatrix rc_prefix(int m) {
  int rows = 3 + m;
  int cols = 30 + m;
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) entries.push_back(kRc2741[r][c]);
  return Protomatrix(rows, cols, std::move(entries));
}

}  // namespace

Protomatrix builtin_code(std::string_view name) {
  if (name == "isi-1/2") return nested_prefix(6);
  for (int n = 2; n <= 9; ++n) {
    std::string key = "nested-" + std::to_string(n) + "/" + std::to_string(n + 1);
    if (name == key) return nested_prefix(3 * (n + 1));
  }
  for (int m = 1; m <= 11; ++m) {
    std::string key = "rc-27/" + std::to_string(30 + m);
    if (name == key) return rc_prefix(m);
  }
  fail("unknown builtin code '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    v.emplace_back("isi-1/2");
    for (int n = 2; n <= 9; ++n)
      v.push_back("nested-" + std::to_string(n) + "/" + std::to_string(n + 1));
    for (int m = 1; m <= 11; ++m) v.push_back("rc-27/" + std::to_string(30 + m));
    return v;
  }();
  return names;
}

bool is_builtin(std::string_view name) {
  for (const auto& n : builtin_names())
    if (n == name) return true;
  return false;
}

}  // namespace isildpc
