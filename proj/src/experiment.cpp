#include "sievelab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "sievelab/error.hpp"

namespace sievelab {

namespace {

u64 phi_of(u64 q) { return multiplicative(factorize_trial(q)).phi; }

std::vector<u64> reduced_classes(u64 q) {
  std::vector<u64> out;
  for (u64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) out.push_back(q == 1 ? 0 : a);
  }
  return out;
}

void require_table(const SpfTable& table, u64 top) {
  if (top > table.limit()) {
    throw RangeError("census needs factor tables up to " + std::to_string(top) +
                     ", table limit is " + std::to_string(table.limit()));
  }
}

// Length of [lo, hi) inside [X, 2X].
double clipped(double lo, double hi, double X) {
  return std::max(0.0, std::min(hi, 2.0 * X) - std::max(lo, X));
}

// Qualifying n in (X - L, 2X], bucketed by residue mod q (ascending in each bucket).
std::vector<std::vector<u64>> qualifying_by_class(u64 q, double X, u64 L, double z,
                                                  const SpfTable& table, Qualifier kind) {
  const auto top = static_cast<u64>(std::floor(2.0 * X));
  require_table(table, top);
  const double start = std::floor(X - static_cast<double>(L)) + 1.0;
  const u64 lo = start < 2.0 ? 2 : static_cast<u64>(start);
  std::vector<std::vector<u64>> buckets(q);
  for (u64 n = lo; n <= top; ++n) {
    if (q > 1 && std::gcd(n, q) != 1) continue;
    if (qualifies(table.factorize(n), kind, z)) buckets[n % q].push_back(n);
  }
  return buckets;
}

// Each n contributes +1 on [n, n + L). Measure of [X, 2X] where the running
// count stays <= threshold.
double sweep(const std::vector<u64>& ns, u64 L, double X, double threshold) {
  const double end = 2.0 * X;
  std::size_t arr = 0;
  std::size_t dep = 0;
  double pos = X;
  long count = 0;
  // Events at or before X set the initial count.
  while (arr < ns.size() && static_cast<double>(ns[arr]) <= X) ++arr, ++count;
  while (dep < ns.size() && static_cast<double>(ns[dep] + L) <= X) ++dep, --count;
  double measure = 0.0;
  while (pos < end) {
    double next = end;
    if (arr < ns.size()) next = std::min(next, static_cast<double>(ns[arr]));
    if (dep < ns.size()) next = std::min(next, static_cast<double>(ns[dep] + L));
    if (static_cast<double>(count) <= threshold) measure += next - pos;
    pos = next;
    while (arr < ns.size() && static_cast<double>(ns[arr]) == pos) ++arr, ++count;
    while (dep < ns.size() && static_cast<double>(ns[dep] + L) == pos) ++dep, --count;
  }
  return measure;
}

CensusResult census_shell(u64 q, double X, u64 L, double z, double threshold, Qualifier kind) {
  if (q == 0) throw DomainError("q must be positive");
  if (L == 0) throw DomainError("L must be a positive integer");
  if (!(X >= 2.0)) throw DomainError("X must be at least 2");
  CensusResult r;
  r.q = q;
  r.L = L;
  r.X = X;
  r.z = z;
  r.threshold = threshold;
  r.kind = kind;
  r.A = static_cast<double>(L) / (static_cast<double>(phi_of(q)) * std::log(X));
  return r;
}

}  // namespace

std::string_view to_string(Qualifier k) noexcept {
  switch (k) {
    case Qualifier::almost_prime: return "almost_prime";
    case Qualifier::prime: return "prime";
    case Qualifier::square_above_z: return "square_above_z";
  }
  return "unknown";
}

bool qualifies(const FactoredInteger& n, Qualifier kind, double z) {
  if (n.is_one()) return false;
  switch (kind) {
    case Qualifier::almost_prime: return is_rough(n, z) && n.big_omega() <= 2;
    case Qualifier::prime: return n.big_omega() == 1;
    case Qualifier::square_above_z:
      for (const auto& f : n.factors()) {
        if (f.exponent >= 2 && static_cast<double>(f.prime) > z) return true;
      }
      return false;
  }
  return false;
}

void APWindow::validate() const {
  if (q == 0) throw DomainError("window modulus must be positive");
  if (q > 1 && std::gcd(a % q, q) != 1) throw DomainError("window needs (a, q) = 1");
  if (L == 0) throw DomainError("window length must be positive");
}

u64 window_count(const APWindow& w, double z, const SpfTable& table, Qualifier kind) {
  w.validate();
  const auto hi = static_cast<i64>(std::floor(w.x));
  const i64 lo = static_cast<i64>(std::floor(w.x - static_cast<double>(w.L))) + 1;
  if (hi < 1) return 0;
  require_table(table, static_cast<u64>(hi));
  u64 count = 0;
  const u64 res = w.a % w.q;
  i64 n = std::max<i64>(lo, 1);
  const auto qi = static_cast<i64>(w.q);
  n += ((static_cast<i64>(res) - n) % qi + qi) % qi;
  for (; n <= hi; n += qi) {
    if (qualifies(table.factorize(static_cast<u64>(n)), kind, z)) ++count;
  }
  return count;
}

double CensusResult::normalized() const {
  return total * A / (static_cast<double>(phi_of(q)) * X);
}

void CensusResult::write_csv(std::ostream& out) const {
  out << "a,measure\n";
  for (const auto& [a, m] : measure) out << a << ',' << m << '\n';
}

std::string CensusResult::summary_json() const {
  nlohmann::json j;
  j["q"] = q;
  j["X"] = X;
  j["L"] = L;
  j["z"] = z;
  j["threshold"] = threshold;
  j["c"] = c ? nlohmann::json(*c) : nlohmann::json(nullptr);
  j["A"] = A;
  j["total"] = total;
  j["normalized"] = normalized();
  j["qualifier"] = std::string(to_string(kind));
  return j.dump();
}

CensusResult exceptional_measure(u64 q, double X, u64 L, double z, double threshold,
                                 const SpfTable& table, Qualifier kind) {
  auto r = census_shell(q, X, L, z, threshold, kind);
  const auto buckets = qualifying_by_class(q, X, L, z, table, kind);
  for (u64 a : reduced_classes(q)) {
    const double m = threshold < 0.0 ? 0.0 : sweep(buckets[a], L, X, threshold);
    r.measure[a] = m;
    r.total += m;
  }
  return r;
}

CensusResult exceptional_measure_scan(u64 q, double X, u64 L, double z, double threshold,
                                      const SpfTable& table, Qualifier kind) {
  auto r = census_shell(q, X, L, z, threshold, kind);
  const auto t0 = static_cast<i64>(std::floor(X));
  const auto t1 = static_cast<i64>(std::ceil(2.0 * X));
  for (u64 a : reduced_classes(q)) {
    double m = 0.0;
    for (i64 t = t0; t < t1; ++t) {
      const auto td = static_cast<double>(t);
      const double len = clipped(td, td + 1.0, X);
      if (len <= 0.0) continue;
      const APWindow w{q, q == 1 ? 1 : a, L, td + 0.5};
      if (static_cast<double>(window_count(w, z, table, kind)) <= threshold) m += len;
    }
    r.measure[a] = m;
    r.total += m;
  }
  return r;
}

std::vector<TrendRow> theorem_trend_scan(u64 q, double X, double z, double c,
                                         const std::vector<double>& A_grid,
                                         const SpfTable& table) {
  std::vector<TrendRow> rows;
  const auto phi = static_cast<double>(phi_of(q));
  for (double A : A_grid) {
    if (!(A > 0.0)) throw DomainError("A grid entries must be positive");
    TrendRow row;
    row.A = A;
    row.L = std::max<u64>(1, static_cast<u64>(std::llround(A * phi * std::log(X))));
    row.threshold = c * A;
    const auto census = exceptional_measure(q, X, row.L, z, row.threshold, table);
    row.total = census.total;
    row.normalized = census.total * A / (phi * X);
    row.degenerate = row.threshold >= static_cast<double>(row.L);
    rows.push_back(row);
  }
  return rows;
}

void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows) {
  out << "A,L,threshold,total,normalized,degenerate\n";
  for (const auto& r : rows) {
    out << r.A << ',' << r.L << ',' << r.threshold << ',' << r.total << ',' << r.normalized << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
}

std::string CorollaryScan::to_json() const {
  nlohmann::json j;
  j["q"] = q;
  j["psi"] = psi;
  j["bound"] = bound;
  j["z"] = z;
  j["covered"] = covered;
  j["total"] = total;
  j["coverage"] = coverage();
  nlohmann::json w = nlohmann::json::object();
  for (const auto& [a, n] : witnesses) w[std::to_string(a)] = n ? nlohmann::json(*n) : nullptr;
  j["witnesses"] = w;
  return j.dump();
}

CorollaryScan corollary_scan(u64 q, double psi) {
  if (q < 2) throw DomainError("corollary_scan needs q >= 2");
  CorollaryScan s;
  s.q = q;
  s.psi = psi;
  const auto phi = phi_of(q);
  s.bound = psi * static_cast<double>(phi) * std::log(static_cast<double>(q));
  s.z = std::pow(static_cast<double>(q), 0.125);
  s.total = phi;
  const u64 top = s.bound < 2.0 ? 0 : static_cast<u64>(std::floor(s.bound));
  if (top > SpfTable::kMaxLimit) throw RangeError("corollary bound exceeds the table range");
  const auto classes = reduced_classes(q);
  for (u64 a : classes) s.witnesses[a] = std::nullopt;
  if (top >= 2) {
    const SpfTable table(std::max<u64>(top, 2));
    std::size_t missing = classes.size();
    for (u64 n = 2; n <= top && missing > 0; ++n) {
      if (std::gcd(n, q) != 1) continue;
      auto& slot = s.witnesses[n % q];
      if (slot) continue;
      if (qualifies(table.factorize(n), Qualifier::almost_prime, s.z)) {
        slot = n;
        --missing;
      }
    }
  }
  for (const auto& [a, n] : s.witnesses) s.covered += n ? 1 : 0;
  return s;
}

CensusResult prime_variant_scan(u64 q, double X, u64 L, const SpfTable& table) {
  return exceptional_measure(q, X, L, 0.0, 0.0, table, Qualifier::prime);
}

SquarefullMeasure squarefull_measure(u64 q, double X, u64 L, double z, const SpfTable& table) {
  const auto none = exceptional_measure(q, X, L, z, 0.0, table, Qualifier::square_above_z);
  SquarefullMeasure out;
  for (const auto& [a, m] : none.measure) out.measure += X - m;
  out.envelope = 3.0 * static_cast<double>(L) * X / z;
  out.ok = out.measure <= out.envelope;
  return out;
}

}  // namespace sievelab
