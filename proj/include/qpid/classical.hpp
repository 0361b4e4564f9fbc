#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpid {

// Variable subsets of (T, A, B) as a bitmask.
enum VarMask : unsigned {
  kVarT = 1u,
  kVarA = 2u,
  kVarB = 4u,
};

inline constexpr double kProbZero = 1e-15;  // below this, treated as exact 0

/// Joint distribution P(t, a, b) over finite alphabets.
struct ProbabilityTable {
  int nt = 0, na = 0, nb = 0;
  std::vector<double> p;  // indexed (t * na + a) * nb + b

  ProbabilityTable() = default;
  ProbabilityTable(int t, int a, int b)
      : nt(t), na(a), nb(b), p(static_cast<std::size_t>(t) * a * b, 0.0) {}

  double& at(int t, int a, int b) {
    return p[(static_cast<std::size_t>(t) * na + a) * nb + b];
  }
  [[nodiscard]] double at(int t, int a, int b) const {
    return p[(static_cast<std::size_t>(t) * na + a) * nb + b];
  }

  void validate() const {
    double sum = 0;
    for (double x : p) {
      if (x < 0) throw std::invalid_argument("ProbabilityTable: negative entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("ProbabilityTable: probabilities sum to " +
                                  std::to_string(sum));
  }

  [[nodiscard]] double marginal_a(int a) const {
    double s = 0;
    for (int t = 0; t < nt; ++t)
      for (int b = 0; b < nb; ++b) s += at(t, a, b);
    return s;
  }
  [[nodiscard]] double marginal_b(int b) const {
    double s = 0;
    for (int t = 0; t < nt; ++t)
      for (int a = 0; a < na; ++a) s += at(t, a, b);
    return s;
  }
  [[nodiscard]] double marginal_ab(int a, int b) const {
    double s = 0;
    for (int t = 0; t < nt; ++t) s += at(t, a, b);
    return s;
  }

  [[nodiscard]] std::vector<double> conditional_t_given_a(int a) const {
    const double pa = marginal_a(a);
    if (pa <= kProbZero)
      throw std::invalid_argument("conditional on zero-probability symbol a");
    std::vector<double> c(nt, 0.0);
    for (int t = 0; t < nt; ++t) {
      double s = 0;
      for (int b = 0; b < nb; ++b) s += at(t, a, b);
      c[t] = s / pa;
    }
    return c;
  }
  [[nodiscard]] std::vector<double> conditional_t_given_b(int b) const {
    const double pb = marginal_b(b);
    if (pb <= kProbZero)
      throw std::invalid_argument("conditional on zero-probability symbol b");
    std::vector<double> c(nt, 0.0);
    for (int t = 0; t < nt; ++t) {
      double s = 0;
      for (int a = 0; a < na; ++a) s += at(t, a, b);
      c[t] = s / pb;
    }
    return c;
  }
};

/// Classical decomposition bundle, all in bits.
struct PIDResult {
  double i_ta = 0, i_tb = 0, i_tab = 0;
  double b0 = 0, b1 = 0, b = 0;
  double unique_a = 0, unique_b = 0, redundant = 0, synergy = 0;
};

inline double shannon_entropy(const ProbabilityTable& table, unsigned subset) {
  if (subset == 0)
    throw std::invalid_argument("shannon_entropy: empty variable set");
  // Accumulate the marginal over the selected variables.
  const int snt = (subset & kVarT) ? table.nt : 1;
  const int sna = (subset & kVarA) ? table.na : 1;
  const int snb = (subset & kVarB) ? table.nb : 1;
  std::vector<double> m(static_cast<std::size_t>(snt) * sna * snb, 0.0);
  for (int t = 0; t < table.nt; ++t)
    for (int a = 0; a < table.na; ++a)
      for (int b = 0; b < table.nb; ++b) {
        const int it = (subset & kVarT) ? t : 0;
        const int ia = (subset & kVarA) ? a : 0;
        const int ib = (subset & kVarB) ? b : 0;
        m[(static_cast<std::size_t>(it) * sna + ia) * snb + ib] +=
            table.at(t, a, b);
      }
  double h = 0;
  for (double x : m)
    if (x > kProbZero) h -= x * std::log2(x);
  return h;
}

inline double mutual_information(const ProbabilityTable& table, unsigned x,
                                 unsigned y) {
  if (x == 0 || y == 0)
    throw std::invalid_argument("mutual_information: empty variable set");
  if ((x & y) != 0)
    throw std::invalid_argument("mutual_information: overlapping variable sets");
  return shannon_entropy(table, x) + shannon_entropy(table, y) -
         shannon_entropy(table, x | y);
}

/// Z_ab: Bhattacharyya overlap of P(t|a) and P(t|b).
inline double bhattacharyya_overlap(const ProbabilityTable& table, int a,
                                    int b) {
  const auto pa = table.conditional_t_given_a(a);
  const auto pb = table.conditional_t_given_b(b);
  double z = 0;
  for (int t = 0; t < table.nt; ++t)
    if (pa[t] > kProbZero && pb[t] > kProbZero)
      z += std::sqrt(pa[t]) * std::sqrt(pb[t]);
  return z;
}

/// Logarithmically pooled distribution P(t|a)^{1/2} P(t|b)^{1/2} / Z_ab.
inline std::vector<double> pooled_distribution(const ProbabilityTable& table,
                                               int a, int b) {
  const auto pa = table.conditional_t_given_a(a);
  const auto pb = table.conditional_t_given_b(b);
  const double z = bhattacharyya_overlap(table, a, b);
  std::vector<double> pool(table.nt, 0.0);
  for (int t = 0; t < table.nt; ++t)
    if (pa[t] > kProbZero && pb[t] > kProbZero)
      pool[t] = std::sqrt(pa[t]) * std::sqrt(pb[t]) / z;
  return pool;
}

inline PIDResult pid_decompose(const ProbabilityTable& table) {
  table.validate();
  PIDResult r;
  r.i_ta = mutual_information(table, kVarT, kVarA);
  r.i_tb = mutual_information(table, kVarT, kVarB);
  r.i_tab = mutual_information(table, kVarT, kVarA | kVarB);
  // B1 averages -log2 Z_ab over P(a,b); zero-weight symbol pairs are skipped.
  double b1 = 0;
  for (int a = 0; a < table.na; ++a)
    for (int b = 0; b < table.nb; ++b) {
      const double pab = table.marginal_ab(a, b);
      if (pab <= kProbZero) continue;
      b1 -= pab * std::log2(bhattacharyya_overlap(table, a, b));
    }
  r.b1 = b1;
  // H(T|A) - H(T|B) = I(T;B) - I(T;A)
  r.b0 = 0.5 * std::abs(r.i_ta - r.i_tb);
  r.b = std::max(r.b0, r.b1);
  r.unique_a = r.b + 0.5 * (r.i_ta - r.i_tb);
  r.unique_b = r.b + 0.5 * (r.i_tb - r.i_ta);
  r.redundant = r.i_ta - r.unique_a;
  r.synergy = r.i_tab - r.unique_a - r.unique_b - r.redundant;
  return r;
}

/// I(T;A,B) - I(T;A) - I(T;B); equals synergy minus redundancy.
inline double interaction_gap(const ProbabilityTable& table) {
  return mutual_information(table, kVarT, kVarA | kVarB) -
         mutual_information(table, kVarT, kVarA) -
         mutual_information(table, kVarT, kVarB);
}

/// The "triadic" distribution: parity structure, no unique information.
inline ProbabilityTable triadic_table() {
  ProbabilityTable t(4, 4, 4);
  const std::array<std::array<int, 3>, 8> rows{{{0, 0, 0},
                                                {0, 2, 2},
                                                {2, 0, 2},
                                                {2, 2, 0},
                                                {1, 1, 1},
                                                {1, 3, 3},
                                                {3, 1, 3},
                                                {3, 3, 1}}};
  for (const auto& r : rows) t.at(r[0], r[1], r[2]) = 1.0 / 8.0;
  return t;
}

/// The "dyadic" distribution: one unique bit from each of A and B.
inline ProbabilityTable dyadic_table() {
  ProbabilityTable t(4, 4, 4);
  const std::array<std::array<int, 3>, 8> rows{{{0, 0, 0},
                                                {0, 2, 1},
                                                {1, 0, 2},
                                                {1, 2, 3},
                                                {2, 1, 0},
                                                {2, 3, 1},
                                                {3, 1, 2},
                                                {3, 3, 3}}};
  for (const auto& r : rows) t.at(r[0], r[1], r[2]) = 1.0 / 8.0;
  return t;
}

/// Reads columns t,a,b,p (header required). Alphabet sizes are inferred from
/// the largest symbol seen.
inline ProbabilityTable table_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("table_from_csv: empty input");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  auto hdr = split(line);
  if (hdr.size() != 4 || hdr[0] != "t" || hdr[1] != "a" || hdr[2] != "b" ||
      hdr[3] != "p")
    throw std::invalid_argument("table_from_csv: expected header t,a,b,p");
  std::vector<std::array<int, 3>> syms;
  std::vector<double> probs;
  int nt = 0, na = 0, nb = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line);
    if (f.size() != 4)
      throw std::invalid_argument("table_from_csv: malformed row: " + line);
    const int t = std::stoi(f[0]), a = std::stoi(f[1]), b = std::stoi(f[2]);
    if (t < 0 || a < 0 || b < 0)
      throw std::invalid_argument("table_from_csv: negative symbol");
    syms.push_back({t, a, b});
    probs.push_back(std::stod(f[3]));
    nt = std::max(nt, t + 1);
    na = std::max(na, a + 1);
    nb = std::max(nb, b + 1);
  }
  ProbabilityTable table(nt, na, nb);
  for (std::size_t i = 0; i < syms.size(); ++i)
    table.at(syms[i][0], syms[i][1], syms[i][2]) += probs[i];
  table.validate();
  return table;
}

inline ProbabilityTable table_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("table_from_csv: cannot open " + path);
  return table_from_csv(in);
}

}  // namespace qpid
