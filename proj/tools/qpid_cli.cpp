// Experiment front end: classical tables, motivating states, scrambling
// sweeps, Darwinism scans and the pooling Monte-Carlo, with seeded
// reproducible CSV output.

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qpid/branch.hpp"
#include "qpid/classical.hpp"
#include "qpid/qpid.hpp"
#include "qpid/states.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal representation.
std::string fmt(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

struct CsvWriter {
  std::ostream& out;

  void comment(const std::string& s) { out << "# " << s << "\n"; }
  void preamble(std::uint64_t seed, const std::string& cmd) {
    out << "# qpid v" << kVersion << " seed=" << seed << " cmd=" << cmd
        << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

struct SeriesPlot {
  std::string x_label;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  bool scatter = false;
};

// Decorative SVG output; never part of any result contract.
void write_svg(const std::string& path, const SeriesPlot& p) {
  const double w = 640, h = 480, ml = 60, mr = 20, mt = 20, mb = 45;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (double v : p.x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const auto& [name, ys] : p.series)
    for (double v : ys) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto py = [&](double v) {
    return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb);
  };
  const char* colors[] = {"#000000", "#cc0000", "#00882b", "#bb00bb",
                          "#0044cc"};
  std::ofstream f(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  f << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
    << "\" text-anchor=\"middle\" font-size=\"13\">" << p.x_label
    << "</text>\n";
  int ci = 0;
  for (const auto& [name, ys] : p.series) {
    const char* c = colors[ci % 5];
    if (p.scatter) {
      for (std::size_t i = 0; i < ys.size(); ++i)
        f << "<circle cx=\"" << px(p.x[i]) << "\" cy=\"" << py(ys[i])
          << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    } else {
      f << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
      for (std::size_t i = 0; i < ys.size(); ++i)
        f << px(p.x[i]) << "," << py(ys[i]) << " ";
      f << "\"/>\n";
    }
    f << "<text x=\"" << w - mr - 130 << "\" y=\"" << mt + 16 + 16 * ci
      << "\" font-size=\"13\" fill=\"" << c << "\">" << name << "</text>\n";
    ++ci;
  }
  f << "</svg>\n";
}

std::vector<std::string> pid_columns() {
  return {"i_ta",     "i_tb",     "i_tab",    "b0",      "b1",
          "b",        "unique_a", "unique_b", "redundant", "synergy"};
}

std::vector<std::string> pid_cells(const qpid::PIDResult& r) {
  return {fmt(r.i_ta), fmt(r.i_tb),     fmt(r.i_tab),    fmt(r.b0),
          fmt(r.b1),   fmt(r.b),        fmt(r.unique_a), fmt(r.unique_b),
          fmt(r.redundant), fmt(r.synergy)};
}

std::vector<std::string> qpid_cells(const qpid::QPIDResult& r) {
  return {fmt(r.i_ta),     fmt(r.i_tb),      fmt(r.i_tab),
          fmt(r.bq0),      fmt(r.bq1),       fmt(r.bq),
          fmt(r.unique_a), fmt(r.unique_b),  fmt(r.redundant),
          fmt(r.synergy),  fmt(r.tri_information)};
}

std::vector<std::string> qpid_columns() {
  return {"i_ta", "i_tb", "i_tab",    "bq0",      "bq1",      "bq",
          "unique_a",     "unique_b", "redundant", "synergy",
          "tri_information"};
}

struct DivisorSplit {
  long d_a, d_b;
  std::vector<int> a_factors;
};

// Distinct ways to split the factor multiset between A and B, one per D_A.
std::vector<DivisorSplit> enumerate_splits(const std::vector<int>& factors) {
  if (factors.empty())
    throw CLI::ValidationError("scramble", "factor list is empty");
  std::map<long, DivisorSplit> by_da;
  const std::size_t n = factors.size();
  long total = 1;
  for (int f : factors) total *= f;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    DivisorSplit s;
    s.d_a = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        s.d_a *= factors[i];
        s.a_factors.push_back(factors[i]);
      }
    s.d_b = total / s.d_a;
    by_da.emplace(s.d_a, s);
  }
  std::vector<DivisorSplit> out;
  for (auto& [da, s] : by_da) out.push_back(s);
  return out;  // sorted by D_A, hence by x = log2(D_A/D_B)/2
}

struct Options {
  std::uint64_t seed = 20240817;
  std::string variant_name = "star";
  std::string out_path;
  std::string plot_path;

  [[nodiscard]] qpid::Variant variant() const {
    return variant_name == "plain" ? qpid::Variant::plain
                                   : qpid::Variant::star;
  }
};

int run_tables(const Options& opt, const std::string& dist,
               const std::string& input, std::ostream& os) {
  CsvWriter csv{os};
  csv.preamble(opt.seed, "tables dist=" + dist +
                             (input.empty() ? "" : " input=" + input));
  auto cols = pid_columns();
  cols.insert(cols.begin(), "dist");
  csv.row(cols);
  auto emit = [&](const std::string& name, const qpid::ProbabilityTable& t) {
    auto r = qpid::pid_decompose(t);
    auto cells = pid_cells(r);
    cells.insert(cells.begin(), name);
    csv.row(cells);
  };
  if (!input.empty()) {
    emit("csv:" + input, qpid::table_from_csv_file(input));
  } else if (dist == "triadic") {
    emit("triadic", qpid::triadic_table());
  } else if (dist == "dyadic") {
    emit("dyadic", qpid::dyadic_table());
  } else {
    emit("triadic", qpid::triadic_table());
    emit("dyadic", qpid::dyadic_table());
  }
  return 0;
}

int run_motivating(const Options& opt, std::ostream& os) {
  CsvWriter csv{os};
  csv.preamble(opt.seed, std::string("motivating variant=") +
                             opt.variant_name);
  auto cols = qpid_columns();
  cols.insert(cols.begin(), "state");
  csv.row(cols);
  const auto v = opt.variant();
  auto emit = [&](const std::string& name, const qpid::ProbabilityTable& t) {
    auto psi = qpid::superposition_from_table(t);
    auto r = qpid::qpid_decompose(psi.density(), v);
    auto cells = qpid_cells(r);
    cells.insert(cells.begin(), name);
    csv.row(cells);
  };
  emit("psi1", qpid::triadic_table());
  emit("psi2", qpid::dyadic_table());
  return 0;
}

int run_scramble(const Options& opt, const std::vector<int>& factors, int d_t,
                 int draws, std::ostream& os) {
  if (d_t < 1) throw CLI::ValidationError("scramble", "dt must be >= 1");
  if (draws < 1) throw CLI::ValidationError("scramble", "draws must be >= 1");
  std::ostringstream cmd;
  cmd << "scramble dt=" << d_t << " draws=" << draws << " factors=";
  for (std::size_t i = 0; i < factors.size(); ++i)
    cmd << (i ? "," : "") << factors[i];
  cmd << " variant=" << opt.variant_name;
  CsvWriter csv{os};
  csv.preamble(opt.seed, cmd.str());
  csv.row({"x", "d_a", "d_b", "draw", "i_ta", "i_tb", "i_tab", "unique_a",
           "unique_b", "bq0", "bq1"});
  const auto splits = enumerate_splits(factors);
  const qpid::RandomSource root(opt.seed);
  SeriesPlot plot;
  plot.x_label = "log2(D_A/D_B)/2";
  std::vector<double> pita, pitb, pua, pub;
  for (std::size_t pi = 0; pi < splits.size(); ++pi) {
    const auto& s = splits[pi];
    const double x =
        0.5 * std::log2(static_cast<double>(s.d_a) / s.d_b);
    for (int draw = 0; draw < draws; ++draw) {
      auto rng = root.derive(pi * 1000003ull + draw);
      qpid::HilbertLayout ab({static_cast<int>(s.d_a),
                              static_cast<int>(s.d_b)},
                             {"A", "B"});
      auto psi = qpid::scrambled_state(d_t, ab, rng);
      auto r = qpid::qpid_decompose(psi.density(), opt.variant());
      csv.row({fmt(x), std::to_string(s.d_a), std::to_string(s.d_b),
               std::to_string(draw), fmt(r.i_ta), fmt(r.i_tb), fmt(r.i_tab),
               fmt(r.unique_a), fmt(r.unique_b), fmt(r.bq0), fmt(r.bq1)});
      if (draw == 0) {
        plot.x.push_back(x);
        pita.push_back(r.i_ta);
        pitb.push_back(r.i_tb);
        pua.push_back(r.unique_a);
        pub.push_back(r.unique_b);
      }
    }
  }
  if (!opt.plot_path.empty()) {
    plot.series = {{"unique_a", pua},
                   {"unique_b", pub},
                   {"I(T;A)", pita},
                   {"I(T;B)", pitb}};
    write_svg(opt.plot_path, plot);
  }
  return 0;
}

int run_darwinism(const Options& opt, int n, double s, double p,
                  const std::string& engine, std::ostream& os) {
  if (n < 1) throw CLI::ValidationError("darwinism", "n must be >= 1");
  if (engine == "dense" && n > 12)
    throw CLI::ValidationError("darwinism",
                               "dense engine is limited to n <= 12");
  std::ostringstream cmd;
  cmd << "darwinism n=" << n << " s=" << fmt(s) << " p=" << fmt(p)
      << " engine=" << engine << " variant=" << opt.variant_name;
  CsvWriter csv{os};
  csv.preamble(opt.seed, cmd.str());
  csv.row({"m_a", "i_ta", "unique_a", "bq0", "bq1"});
  SeriesPlot plot;
  plot.x_label = "m_A";
  std::vector<double> pita, pua;
  for (int m_a = 1; m_a <= n; ++m_a) {
    auto state = qpid::darwinism_state(p, s, m_a, n - m_a);
    qpid::QPIDResult r;
    if (engine == "dense")
      r = qpid::qpid_decompose(qpid::branch_state_dense(state).density(),
                               opt.variant());
    else
      r = qpid::qpid_via_branches(state, opt.variant());
    csv.row({std::to_string(m_a), fmt(r.i_ta), fmt(r.unique_a), fmt(r.bq0),
             fmt(r.bq1)});
    plot.x.push_back(m_a);
    pita.push_back(r.i_ta);
    pua.push_back(r.unique_a);
  }
  if (!opt.plot_path.empty()) {
    plot.series = {{"I(T;A)", pita}, {"unique_a", pua}};
    write_svg(opt.plot_path, plot);
  }
  return 0;
}

int run_pooling(const Options& opt, const std::string& system,
                const std::string& kind, int samples, std::ostream& os) {
  if (samples < 1)
    throw CLI::ValidationError("pooling", "samples must be >= 1");
  const int d = system == "qutrit" ? 3 : 2;
  qpid::HilbertLayout layout({d, d, d}, {"T", "A", "B"});
  std::ostringstream cmd;
  cmd << "pooling system=" << system << " kind=" << kind
      << " samples=" << samples << " variant=" << opt.variant_name;
  CsvWriter csv{os};
  csv.preamble(opt.seed, cmd.str());
  csv.row({"sample", "bq0", "bq1"});
  const qpid::RandomSource root(opt.seed);
  SeriesPlot plot;
  plot.x_label = "bq0";
  plot.scatter = true;
  std::vector<double> ys;
  int not_better = 0;
  for (int i = 0; i < samples; ++i) {
    auto rng = root.derive(static_cast<std::uint64_t>(i));
    qpid::DensityOperator rho =
        (kind == "pure")
            ? qpid::random_pure(layout, rng).density()
            : qpid::random_mixed(layout, layout.total_dim(), rng);
    auto b = qpid::quantum_bonus(rho, opt.variant());
    if (b.bq1 <= b.bq0) ++not_better;
    csv.row({std::to_string(i), fmt(b.bq0), fmt(b.bq1)});
    plot.x.push_back(b.bq0);
    ys.push_back(b.bq1);
  }
  const double frac = static_cast<double>(not_better) / samples;
  csv.comment("fraction_bq1_le_bq0=" + fmt(frac));
  if (!opt.plot_path.empty()) {
    plot.series = {{"bq1", ys}};
    write_svg(opt.plot_path, plot);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum partial information decomposition"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  app.add_option("--variant", opt.variant_name, "Z operator variant")
      ->check(CLI::IsMember({"star", "plain"}))
      ->capture_default_str();
  app.add_option("--out", opt.out_path, "CSV output path (default stdout)");
  app.add_option("--plot", opt.plot_path, "optional SVG plot path");

  auto* tables = app.add_subcommand("tables", "classical PID of built-in or CSV tables");
  tables->fallthrough();
  std::string dist = "both", input;
  tables->add_option("--dist", dist, "which built-in distribution")
      ->check(CLI::IsMember({"triadic", "dyadic", "both"}));
  tables->add_option("--input", input, "CSV table with columns t,a,b,p");

  auto* motivating =
      app.add_subcommand("motivating", "QPID of the two motivating pure states");
  motivating->fallthrough();

  auto* scramble = app.add_subcommand("scramble", "scrambling sweep over dimension splits");
  scramble->fallthrough();
  std::vector<int> factors;
  int d_t = 4, draws = 1;
  bool full = false;
  scramble->add_option("--factors", factors,
                       "subsystem dimension factors of D_AB")
      ->delimiter(',');
  scramble->add_option("--dt", d_t, "reference dimension D_T")
      ->capture_default_str();
  scramble->add_option("--draws", draws, "random draws per sweep point")
      ->capture_default_str();
  scramble->add_flag("--full", full, "use the full-scale factor set 2,2,3,3,5,5");

  auto* darwinism = app.add_subcommand("darwinism", "environment-fragment sweep");
  darwinism->fallthrough();
  int n = 100;
  double s = 0.85, p = 0.5;
  std::string engine = "branch";
  darwinism->add_option("--n", n, "total environment qubits")
      ->capture_default_str();
  darwinism->add_option("--s", s, "branch overlap per qubit")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  darwinism->add_option("--p", p, "weight of the first branch")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  darwinism->add_option("--engine", engine, "evaluation engine")
      ->check(CLI::IsMember({"branch", "dense"}))
      ->capture_default_str();

  auto* pooling = app.add_subcommand("pooling", "pooling-bonus Monte-Carlo");
  pooling->fallthrough();
  std::string system = "qubit", kind = "mixed";
  int samples = 1000;
  pooling->add_option("--system", system, "local dimension")
      ->check(CLI::IsMember({"qubit", "qutrit"}))
      ->capture_default_str();
  pooling->add_option("--kind", kind, "state ensemble")
      ->check(CLI::IsMember({"pure", "mixed"}))
      ->capture_default_str();
  pooling->add_option("--samples", samples, "sample count")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    std::ofstream file;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open " << opt.out_path << "\n";
        return 2;
      }
    }
    std::ostream& os = opt.out_path.empty() ? std::cout : file;

    if (tables->parsed()) return run_tables(opt, dist, input, os);
    if (motivating->parsed()) return run_motivating(opt, os);
    if (scramble->parsed()) {
      if (factors.empty())
        factors = full ? std::vector<int>{2, 2, 3, 3, 5, 5}
                       : std::vector<int>{2, 2, 3, 3};
      if (full && factors.size() >= 6)
        std::cerr << "warning: full-scale sweep; expect minutes per point\n";
      return run_scramble(opt, factors, d_t, draws, os);
    }
    if (darwinism->parsed()) return run_darwinism(opt, n, s, p, engine, os);
    if (pooling->parsed()) return run_pooling(opt, system, kind, samples, os);
  } catch (const qpid::SupportLeakError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const qpid::NotPsdError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
