#pragma once

#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isildpc {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Integer protomatrix: entries count parallel edges between a check row and a
// variable column. Punctured columns are variable nodes that are never
// transmitted. Indexing is 0-based here; file formats and error messages use
// 1-based indices.
class Protomatrix {
 public:
  static constexpr int kDefaultMaxEntry = 8;

  Protomatrix(int rows, int cols, std::vector<int> entries,
              std::set<int> punctured = {}, int max_entry = kDefaultMaxEntry);

  // `.pm` text format: "C V\n", "P i1 ... iP\n" (count then 1-based indices,
  // just "0" when none), then C rows of V integers.
  static Protomatrix parse(const std::string& text, int max_entry = kDefaultMaxEntry);
  std::string serialize() const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
  const std::set<int>& punctured() const { return punctured_; }
  bool is_punctured(int c) const { return punctured_.count(c) != 0; }
  int transmitted_cols() const { return cols_ - static_cast<int>(punctured_.size()); }

  int row_sum(int r) const;
  int col_sum(int c) const;
  int total_edges() const;
  int max_entry() const;

  // Design rate (V - C - P) / (V - P) as an exact rational; throws when the
  // rate is not in (0,1).
  Rational rate() const;

  friend bool operator==(const Protomatrix&, const Protomatrix&) = default;

 private:
  int rows_;
  int cols_;
  std::vector<int> entries_;
  std::set<int> punctured_;
};

struct LinearGrowthReport {
  bool pass = false;
  std::vector<int> violating_cols;  // 0-based
  std::vector<int> sums;            // protected-row sum per candidate column
  std::string str() const;
};

// Pass iff every candidate column has entry sum >= 3 over the protected rows.
LinearGrowthReport validate_linear_growth(const Protomatrix& p,
                                          const std::vector<int>& protected_rows,
                                          const std::vector<int>& candidate_cols);

// Columns appended on the right by nested lengthening; one multiplicity
// vector of length parent_rows per new variable node.
struct ExtensionColumns {
  int parent_rows = 0;
  std::vector<std::vector<int>> cols;
};

// Rows appended at the bottom by rate-compatible extension. Each A row spans
// the parent's columns; the new-column block is implicitly the identity.
struct RcExtension {
  std::vector<std::vector<int>> a_rows;
  int added() const { return static_cast<int>(a_rows.size()); }
};

Protomatrix nest_extend(const Protomatrix& parent, const ExtensionColumns& ext);
Protomatrix rc_extend(const Protomatrix& parent, const RcExtension& ext);

// Built-in code family: "isi-1/2", "nested-2/3" .. "nested-9/10",
// "rc-27/31" .. "rc-27/41". Nested members are column prefixes of
// nested-9/10; rc members are leading blocks of rc-27/41.
Protomatrix builtin_code(std::string_view name);
const std::vector<std::string>& builtin_names();
bool is_builtin(std::string_view name);

}  // namespace isildpc
