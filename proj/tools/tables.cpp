#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "wtensor/baselines.hpp"
#include "wtensor/copositivity.hpp"
#include "wtensor/eigen_sos.hpp"
#include "wtensor/error.hpp"
#include "wtensor/generators.hpp"
#include "wtensor/hypergraph.hpp"
#include "wtensor/parallel.hpp"

namespace wtensor::cli {

namespace {

struct TextTable {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      width[c] = header[c].size();
      for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << (c ? "  " : "") << std::string(width[c] - cells[c].size(), ' ') << cells[c];
      }
      out << "\n";
    };
    out << title << "\n";
    line(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
    for (const auto& r : rows) line(r);
  }

  void write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
      out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int scaled_cap(int explicit_cap, int desk_cap, double scale) {
  if (explicit_cap > 0) return explicit_cap;
  return std::max(1, static_cast<int>(std::lround(desk_cap * scale)));
}

void add_timing_header(TextTable& t, bool on) {
  if (!on) return;
  for (const char* h : {"compile s", "solve s", "verify s"}) t.header.push_back(h);
}

void add_timing_cells(std::vector<std::string>& row, bool on, const PhaseTimings& tm) {
  if (!on) return;
  for (double v : {tm.compile, tm.solve, tm.verify}) row.push_back(fmt("%.3f", v));
}

/// Fills rows[i] with make_row(i) on the shared thread pool; a failing row
/// reports its error instead of aborting the sweep.
void fill_rows(TextTable& t, int count, const std::function<std::vector<std::string>(int)>& make_row) {
  t.rows.assign(count, {});
  parallel_for(count, threads_from_env(), [&](int i) {
    try {
      t.rows[i] = make_row(i);
    } catch (const std::exception& e) {
      std::vector<std::string> row(t.header.size(), "-");
      row.back() = std::string("error: ") + e.what();
      t.rows[i] = std::move(row);
    }
  });
}

TextTable table_product(const TableOptions& o) {
  const int cap = scaled_cap(o.max_n, 200, o.scale);
  std::vector<int> ns;
  for (int n : {8, 16, 32, 64, 128, 200, 500, 1000, 2000}) {
    if (n <= cap) ns.push_back(n);
  }
  TextTable t;
  t.title = "Table 1: product-block tensors, largest H-eigenvalue n+1 (Block method)";
  t.header = {"n", "True lambda", "Est. lambda", "|error|", "blocks"};
  add_timing_header(t, o.timings);
  EigConfig cfg;
  cfg.method = Method::Block;
  fill_rows(t, static_cast<int>(ns.size()), [&](int i) {
    const int n = ns[i];
    const auto r = max_h_eigenvalue(gen_product_block_tensor(n), cfg);
    std::vector<std::string> row = {std::to_string(n), fmt("%.6f", n + 1.0), fmt("%.6f", r.lambda),
                                    fmt("%.1e", std::abs(r.lambda - (n + 1))), std::to_string(r.psd_blocks)};
    add_timing_cells(row, o.timings, r.timings);
    return row;
  });
  return t;
}

TextTable table_star(const TableOptions& o) {
  const int cap = scaled_cap(o.max_k, 10, o.scale);
  const int m = o.m > 0 ? o.m : 4;
  std::vector<int> ks;
  for (int k : {2, 5, 10, 20, 50, 100, 200, 500}) {
    if (k <= cap) ks.push_back(k);
  }
  TextTable t;
  t.title = "Table 2: Laplacian of the hyper-star, m = " + std::to_string(m) + " (Block method)";
  t.header = {"k", "n", "True lambda", "Est. lambda", "|error|"};
  add_timing_header(t, o.timings);
  EigConfig cfg;
  cfg.method = Method::Block;
  fill_rows(t, static_cast<int>(ks.size()), [&](int i) {
    const int k = ks[i];
    const auto g = gen_hyper_star(m, k);
    const auto r = max_h_eigenvalue(laplacian_w_decomposition(g), cfg);
    const double truth = hyper_star_lambda(m, k);
    std::vector<std::string> row = {std::to_string(k), std::to_string(g.num_vertices()), fmt("%.6f", truth),
                                    fmt("%.6f", r.lambda), fmt("%.1e", std::abs(r.lambda - truth))};
    add_timing_cells(row, o.timings, r.timings);
    return row;
  });
  return t;
}

TextTable table_path(const TableOptions& o) {
  const int cap = scaled_cap(o.max_k, 100, o.scale);
  std::vector<std::pair<int, int>> cases;
  for (int m : {4, 6}) {
    if (o.m > 0 && m != o.m) continue;
    for (int k : {10, 50, 100, 200}) {
      if (k <= cap) cases.emplace_back(m, k);
    }
  }
  TextTable t;
  t.title = "Table 3: hyper-paths, Laplacian (Block SDP) vs signless Laplacian (NQZ)";
  t.header = {"m", "k", "n", "SDP lambda", "NQZ lambda", "|diff|", "NQZ iters"};
  add_timing_header(t, o.timings);
  EigConfig cfg;
  cfg.method = Method::Block;
  fill_rows(t, static_cast<int>(cases.size()), [&](int i) {
    const auto [m, k] = cases[i];
    const auto g = gen_hyper_path(m, k);
    const auto r = max_h_eigenvalue(laplacian_w_decomposition(g), cfg);
    const auto q = nqz(signless_laplacian(g));
    std::vector<std::string> row = {std::to_string(m), std::to_string(k), std::to_string(g.num_vertices()),
                                    fmt("%.6f", r.lambda), fmt("%.6f", q.lambda),
                                    fmt("%.1e", std::abs(r.lambda - q.lambda)),
                                    std::to_string(q.iterations) + (q.converged ? "" : "*")};
    add_timing_cells(row, o.timings, r.timings);
    return row;
  });
  return t;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad --M-grid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "--M-grid is empty");
  return grid;
}

TextTable table_copositive(const TableOptions& o) {
  const int m = o.m > 0 ? o.m : 3;
  const int trials = scaled_cap(o.trials, 40, o.scale);
  const std::vector<double> grid = parse_grid(o.grid);
  const int n = o.s * o.k;
  // Trial j uses seed + j for every M, so rows differ only in the diagonal.
  const int jobs = static_cast<int>(grid.size()) * trials;
  std::vector<int> verdict(jobs, -1);
  parallel_for(jobs, threads_from_env(), [&](int job) {
    const double M = grid[job / trials];
    const auto seed = o.seed + static_cast<std::uint64_t>(job % trials);
    try {
      const auto v = is_copositive(gen_random_extended_z(m, n, o.s, o.k, M, seed));
      verdict[job] = v.verdict == Verdict::Copositive ? 1 : 0;
    } catch (const std::exception&) {
      verdict[job] = -1;
    }
  });
  TextTable t;
  t.title = "Table 4: random extended Z-tensors, m = " + std::to_string(m) + ", n = " + std::to_string(n) +
            " (s = " + std::to_string(o.s) + " blocks of " + std::to_string(o.k) + ")";
  t.header = {"M", "copositive", "failed", "trials", "percent"};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    int yes = 0, failed = 0;
    for (int j = 0; j < trials; ++j) {
      const int v = verdict[g * trials + j];
      yes += v == 1;
      failed += v < 0;
    }
    t.rows.push_back({fmt("%g", grid[g]), std::to_string(yes), std::to_string(failed), std::to_string(trials),
                      fmt("%.1f%%", 100.0 * yes / trials)});
  }
  return t;
}

}  // namespace

int cmd_table(const TableOptions& o) {
  if (!(o.scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "--scale must be positive");
  TextTable t;
  switch (o.which) {
    case 1: t = table_product(o); break;
    case 2: t = table_star(o); break;
    case 3: t = table_path(o); break;
    case 4: t = table_copositive(o); break;
    default: throw Error(ErrorCode::InvalidArgument, "tables are numbered 1 to 4");
  }
  t.print(std::cout);
  if (!o.csv.empty()) t.write_csv(o.csv);
  return kOk;
}

}  // namespace wtensor::cli
