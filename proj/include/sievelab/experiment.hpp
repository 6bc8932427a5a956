#pragma once

// Desk-scale census of short windows in residue classes: exact exceptional
// measures by breakpoint sweep, trend scans in A, coverage scans for the
// corollary, the prime variant and the squarefull exceptional set.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sievelab/arith.hpp"

namespace sievelab {

enum class Qualifier {
  almost_prime,    // z-rough with Omega(n) <= 2
  prime,
  square_above_z,  // p^2 | n for some prime p > z
};

std::string_view to_string(Qualifier k) noexcept;

// n = 1 never qualifies.
bool qualifies(const FactoredInteger& n, Qualifier kind, double z);

struct APWindow {
  u64 q = 1;
  u64 a = 1;
  u64 L = 1;
  double x = 0.0;  // window is (x - L, x]

  void validate() const;
};

// #{n in (x - L, x] : n = a (q), n qualifies}. Throws RangeError past the table.
u64 window_count(const APWindow& w, double z, const SpfTable& table,
                 Qualifier kind = Qualifier::almost_prime);

struct CensusResult {
  u64 q = 1;
  u64 L = 1;
  double X = 0.0;
  double z = 0.0;
  double threshold = 0.0;
  std::optional<double> c;  // threshold coefficient when threshold = c A
  Qualifier kind = Qualifier::almost_prime;
  std::map<u64, double> measure;  // a -> measure of {x in [X, 2X] : count <= threshold}
  double total = 0.0;
  double A = 0.0;  // L / (phi(q) log X)

  double normalized() const;  // total * A / (phi(q) X)
  void write_csv(std::ostream& out) const;
  std::string summary_json() const;
};

// Per reduced class a: the measure of x in [X, 2X] whose window count is at
// most threshold. The table must cover 2X.
CensusResult exceptional_measure(u64 q, double X, u64 L, double z, double threshold,
                                 const SpfTable& table,
                                 Qualifier kind = Qualifier::almost_prime);

// Same quantity from window_count evaluated once per unit interval [t, t + 1).
CensusResult exceptional_measure_scan(u64 q, double X, u64 L, double z, double threshold,
                                      const SpfTable& table,
                                      Qualifier kind = Qualifier::almost_prime);

struct TrendRow {
  double A = 0.0;
  u64 L = 0;
  double threshold = 0.0;
  double total = 0.0;
  double normalized = 0.0;
  bool degenerate = false;  // threshold >= L
};

// L = round(A phi(q) log X) (at least 1), threshold = c A.
std::vector<TrendRow> theorem_trend_scan(u64 q, double X, double z, double c,
                                         const std::vector<double>& A_grid,
                                         const SpfTable& table);
void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows);

struct CorollaryScan {
  u64 q = 0;
  double psi = 0.0;
  double bound = 0.0;  // psi phi(q) log q
  double z = 0.0;      // q^(1/8)
  u64 covered = 0;
  u64 total = 0;       // phi(q)
  std::map<u64, std::optional<u64>> witnesses;

  double coverage() const { return total == 0 ? 0.0 : static_cast<double>(covered) / total; }
  std::string to_json() const;
};

CorollaryScan corollary_scan(u64 q, double psi);

// Exceptional measure of the prime version (threshold 0).
CensusResult prime_variant_scan(u64 q, double X, u64 L, const SpfTable& table);

struct SquarefullMeasure {
  double measure = 0.0;  // x in [X, 2X] (summed over classes) with some p^2 | n, p > z
  double envelope = 0.0; // 3 L X / z
  bool ok = false;
};

SquarefullMeasure squarefull_measure(u64 q, double X, u64 L, double z, const SpfTable& table);

}  // namespace sievelab
