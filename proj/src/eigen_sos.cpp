#include "wtensor/eigen_sos.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "wtensor/error.hpp"

namespace wtensor {

namespace {

constexpr double kResidualFactor = 1e-6;
constexpr double kGramEigFloor = -1e-7;
constexpr double kCouplingSlack = 1e-7;

MultiIndex merge(const MultiIndex& a, const MultiIndex& b, int dim) {
  std::vector<int> raw(a.indices().begin(), a.indices().end());
  raw.insert(raw.end(), b.indices().begin(), b.indices().end());
  return MultiIndex::canonicalize(raw, dim);
}

/// Coefficients of basis^T G basis, keyed by local multi-index.
std::map<MultiIndex, double> gram_polynomial(const MonomialBasis& basis, const Eigen::MatrixXd& g) {
  std::map<MultiIndex, double> out;
  const int k = static_cast<int>(basis.variables.size());
  for (std::size_t p = 0; p < basis.size(); ++p) {
    for (std::size_t q = p; q < basis.size(); ++q) {
      double v = (p == q ? 1.0 : 2.0) * g(p, q);
      out[merge(basis.monomials[p], basis.monomials[q], k)] += v;
    }
  }
  return out;
}

struct Residual {
  double max_abs = 0.0;
  double max_coeff = 0.0;
};

/// Compares a Gram polynomial with a target polynomial over the same local variables.
void accumulate_residual(const std::map<MultiIndex, double>& gram, const std::map<MultiIndex, double>& target,
                         Residual& r) {
  for (const auto& [a, v] : target) r.max_coeff = std::max(r.max_coeff, std::abs(v));
  for (const auto& [a, v] : gram) {
    auto it = target.find(a);
    double want = it == target.end() ? 0.0 : it->second;
    r.max_abs = std::max(r.max_abs, std::abs(v - want));
  }
  for (const auto& [a, v] : target) {
    if (!gram.count(a)) r.max_abs = std::max(r.max_abs, std::abs(v));
  }
}

double min_eig(const Eigen::MatrixXd& g) {
  if (g.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::map<MultiIndex, double> local_terms(const SymmetricTensor& t, double scale) {
  std::map<MultiIndex, double> out;
  for (const auto& term : t.terms()) out[term.index] += scale * term.coeff;
  return out;
}

/// Adds the Gram rows sum_{p<=q, B_p+B_q=alpha} G_pq - sum_i shift_i [alpha = m e_i] = rhs(alpha).
/// `shift` maps a local variable to the free variable it subtracts (or -1).
void add_gram_rows(sdp::Problem& prob, int block, const MonomialBasis& basis, const SymmetricTensor& sub,
                   const std::vector<int>& shift) {
  const int k = static_cast<int>(basis.variables.size());
  std::map<MultiIndex, sdp::LinearForm> rows;
  for (std::size_t p = 0; p < basis.size(); ++p) {
    for (std::size_t q = p; q < basis.size(); ++q) {
      rows[merge(basis.monomials[p], basis.monomials[q], k)].add_psd(block, static_cast<int>(p),
                                                                       static_cast<int>(q), 1.0);
    }
  }
  for (const auto& term : sub.terms()) {
    if (!rows.count(term.index)) throw Error(ErrorCode::InvalidArgument, "tensor term outside the Gram basis");
  }
  for (auto& [alpha, form] : rows) {
    if (alpha.is_diagonal()) {
      int local = alpha[0];
      if (shift[local - 1] >= 0) form.add_free(shift[local - 1], -1.0);
    }
    prob.add_row(std::move(form), -sub.coeff(alpha));
  }
}

}  // namespace

std::size_t basis_size(int num_vars, int degree) {
  // C(k + d - 1, d) computed incrementally; exact for the sizes used here.
  double c = 1.0;
  for (int j = 1; j <= degree; ++j) c = c * (num_vars + j - 1) / j;
  return static_cast<std::size_t>(std::llround(c));
}

std::vector<int> MonomialBasis::global(std::size_t k) const {
  std::vector<int> out;
  for (int local : monomials[k].indices()) out.push_back(variables[local - 1]);
  return out;
}

MonomialBasis monomial_basis(std::vector<int> variables, int degree) {
  MonomialBasis b;
  b.variables = std::move(variables);
  b.degree = degree;
  const int k = static_cast<int>(b.variables.size());
  if (k == 0) return b;
  b.monomials.reserve(basis_size(k, degree));
  std::vector<int> cur(degree, 1);
  // Nondecreasing tuples in lexicographic order: x1^d, x1^{d-1} x2, ..., xk^d.
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == degree) {
      b.monomials.push_back(MultiIndex::canonicalize(cur, k));
      return;
    }
    for (int v = lo; v <= k; ++v) {
      cur[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 1);
  return b;
}

double amgm_threshold(const std::vector<double>& b, const std::vector<int>& a) {
  if (b.size() != a.size()) throw Error(ErrorCode::DimMismatch, "amgm_threshold: b and a differ in length");
  int total = 0;
  for (int e : a) {
    if (e < 0) throw Error(ErrorCode::InvalidArgument, "amgm_threshold: negative exponent");
    total += e;
  }
  if (total % 2 != 0) throw Error(ErrorCode::ExponentSumOdd, "exponents sum to " + std::to_string(total));
  if (total == 0) throw Error(ErrorCode::InvalidArgument, "amgm_threshold: empty monomial");
  double log_mu = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (b[i] < 0) throw Error(ErrorCode::InvalidArgument, "amgm_threshold: negative diagonal coefficient");
    if (b[i] == 0) return 0.0;
    log_mu += static_cast<double>(a[i]) / total * std::log(b[i] / a[i]);
  }
  return total * std::exp(log_mu);
}

bool amgm_nonnegative(const std::vector<double>& b, const std::vector<int>& a, double mu, double slack) {
  for (double v : b) {
    if (v < -slack) return false;
  }
  std::vector<double> clamped(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) clamped[i] = std::max(b[i], 0.0);
  double mu0 = amgm_threshold(clamped, a);
  bool all_even = std::all_of(a.begin(), a.end(), [](int e) { return e % 2 == 0; });
  return (all_even ? mu : std::abs(mu)) <= mu0 + slack;
}

SingleTermShape block_closed_form(const SymmetricTensor& sub) {
  SingleTermShape s;
  int mixed = 0;
  for (const auto& term : sub.terms()) {
    if (term.index.is_diagonal()) continue;
    ++mixed;
    s.mixed = term.index;
    s.coeff = term.coeff;
  }
  if (mixed != 1) {
    throw Error(ErrorCode::NotSingleTerm, "block has " + std::to_string(mixed) + " mixed terms");
  }
  s.exponents.assign(sub.dim(), 0);
  for (auto [i, e] : s.mixed.exponents()) s.exponents[i - 1] = e;
  s.unit_exponents = std::all_of(s.exponents.begin(), s.exponents.end(), [](int e) { return e <= 1; });
  s.all_even = std::all_of(s.exponents.begin(), s.exponents.end(), [](int e) { return e % 2 == 0; });
  return s;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Full: return "full";
    case Method::Block: return "block";
    case Method::ClosedForm: return "closed-form";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "full") return Method::Full;
  if (s == "block") return Method::Block;
  if (s == "closed-form" || s == "closedform") return Method::ClosedForm;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

// ---------------------------------------------------------------------------
// Compilation

CompiledProblem compile_full(const SymmetricTensor& t) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "order " + std::to_string(t.order()));
  CompiledProblem cp;
  const int n = t.dim();
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  CompiledProblem::BlockMap bm;
  bm.gamma = all;
  bm.basis = monomial_basis(all, t.order() / 2);
  bm.psd_block = cp.problem.add_psd_block(static_cast<int>(bm.basis.size()));
  cp.t_var = cp.problem.add_free();
  cp.problem.objective.add_free(cp.t_var, 1.0);
  add_gram_rows(cp.problem, bm.psd_block, bm.basis, t, std::vector<int>(n, cp.t_var));
  cp.blocks.push_back(std::move(bm));
  return cp;
}

namespace {

/// Geometric-mean tree for sum_{i in S} u_i x_i^m - c x_S >= 0 with |S| = m and
/// u_i = rho_i - a_ii: prod u_i >= (|c| / m)^m, built from 2x2 PSD blocks.
/// Leaves past |S| are pinned to |c| / m so the tree has a power-of-two width.
void add_gm_tree(sdp::Problem& prob, const std::vector<int>& rho_vars, const std::vector<double>& diag, double c) {
  const int m = static_cast<int>(rho_vars.size());
  const double r = std::abs(c) / m;
  struct Node {
    int rho = -1;       // leaf: rho variable
    double diag = 0.0;  // leaf: subtracted diagonal
    int block = -1;     // inner node: value is X_block(0, 1)
  };
  std::vector<Node> level;
  int width = 1;
  while (width < m) width *= 2;
  for (int j = 0; j < width; ++j) {
    Node nd;
    if (j < m) {
      nd.rho = rho_vars[j];
      nd.diag = diag[j];
    }
    level.push_back(nd);
  }
  auto link = [&](int block, int pos, const Node& child) {
    sdp::LinearForm f;
    f.add_psd(block, pos, pos, 1.0);
    if (child.block >= 0) {
      f.add_psd(child.block, 0, 1, -0.5);
      prob.add_row(std::move(f), 0.0);
    } else if (child.rho >= 0) {
      f.add_free(child.rho, -1.0);
      prob.add_row(std::move(f), -child.diag);
    } else {
      prob.add_row(std::move(f), r);
    }
  };
  while (level.size() > 1) {
    std::vector<Node> next;
    for (std::size_t j = 0; j + 1 < level.size(); j += 2) {
      Node parent;
      parent.block = prob.add_psd_block(2);
      link(parent.block, 0, level[j]);
      link(parent.block, 1, level[j + 1]);
      next.push_back(parent);
    }
    level = std::move(next);
  }
  sdp::LinearForm root;
  root.add_psd(level[0].block, 0, 1, 0.5);
  prob.add_row(std::move(root), r);
}

}  // namespace

CompiledProblem compile_block(const WDecomposition& w, bool closed_form) {
  if (w.order % 2 != 0) throw Error(ErrorCode::OddOrder, "order " + std::to_string(w.order));
  CompiledProblem cp;
  cp.block_mode = true;
  auto& prob = cp.problem;
  cp.t_var = prob.add_free();
  prob.objective.add_free(cp.t_var, 1.0);
  const int m = w.order;
  // rho variables per global index, for the coupling rows.
  std::vector<std::vector<int>> rho_of(w.global_dim);

  for (const auto& blk : w.blocks) {
    CompiledProblem::BlockMap bm;
    bm.gamma = blk.gamma;
    const int k = static_cast<int>(blk.gamma.size());
    std::vector<int> shift(k);
    for (int j = 0; j < k; ++j) {
      shift[j] = prob.add_free();
      bm.rho.emplace_back(blk.gamma[j], shift[j]);
      rho_of[blk.gamma[j] - 1].push_back(shift[j]);
    }
    const bool diagonal_only = blk.subtensor.num_mixed_terms() == 0;
    std::optional<SingleTermShape> shape;
    if (closed_form && blk.kind == BlockKind::SingleMixedTerm) {
      shape = block_closed_form(blk.subtensor);
      if (!shape->unit_exponents) shape.reset();
    }

    if (diagonal_only || shape) {
      // Variables outside any mixed term only need rho_i >= a_ii.
      std::vector<char> in_mixed(k, 0);
      if (shape) {
        for (int j = 0; j < k; ++j) in_mixed[j] = shape->exponents[j] > 0;
      }
      bm.kind = diagonal_only ? CertificateKind::Diagonal : CertificateKind::AmGm;
      std::vector<int> pure;
      for (int j = 0; j < k; ++j) {
        if (in_mixed[j]) continue;
        int s = prob.add_nonneg();
        bm.diag_nonneg.push_back(s);
        pure.push_back(j + 1);
        sdp::LinearForm f;
        f.add_nonneg(s, 1.0).add_free(shift[j], -1.0);
        prob.add_row(std::move(f), -blk.subtensor.diagonal(j + 1));
      }
      if (diagonal_only) {
        MonomialBasis diag_basis;
        diag_basis.variables = blk.gamma;
        diag_basis.degree = m / 2;
        for (int j : pure) diag_basis.monomials.push_back(MultiIndex::diagonal(j, m / 2));
        bm.basis = std::move(diag_basis);
      } else {
        std::vector<int> rho_vars;
        std::vector<double> diag;
        for (int j = 0; j < k; ++j) {
          if (!in_mixed[j]) continue;
          rho_vars.push_back(shift[j]);
          diag.push_back(blk.subtensor.diagonal(j + 1));
        }
        add_gm_tree(prob, rho_vars, diag, shape->coeff);
      }
    } else {
      bm.kind = CertificateKind::Gram;
      bm.basis = monomial_basis(blk.gamma, m / 2);
      bm.psd_block = prob.add_psd_block(static_cast<int>(bm.basis.size()));
      add_gram_rows(prob, bm.psd_block, bm.basis, blk.subtensor, shift);
    }
    cp.blocks.push_back(std::move(bm));
  }

  for (int i = 0; i < w.global_dim; ++i) {
    sdp::LinearForm f;
    for (int v : rho_of[i]) f.add_free(v, 1.0);
    f.add_nonneg(prob.add_nonneg(), 1.0).add_free(cp.t_var, -1.0);
    prob.add_row(std::move(f), 0.0);
  }
  return cp;
}

SosCertificate extract_certificate(const CompiledProblem& cp, const sdp::Solution& sol) {
  SosCertificate cert;
  cert.block_mode = cp.block_mode;
  cert.t = sol.x_free[cp.t_var];
  for (const auto& bm : cp.blocks) {
    CertificateBlock cb;
    cb.gamma = bm.gamma;
    cb.kind = bm.kind;
    cb.basis = bm.basis;
    if (bm.kind == CertificateKind::Gram) {
      cb.gram = sol.X[bm.psd_block];
    } else if (bm.kind == CertificateKind::Diagonal) {
      const int k = static_cast<int>(bm.diag_nonneg.size());
      cb.gram = Eigen::MatrixXd::Zero(k, k);
      for (int j = 0; j < k; ++j) cb.gram(j, j) = sol.x_nonneg[bm.diag_nonneg[j]];
    }
    if (cp.block_mode) {
      for (auto [global, var] : bm.rho) cb.rho.emplace_back(global, sol.x_free[var]);
    }
    cert.blocks.push_back(std::move(cb));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void finish(VerifyReport& r, double amgm_slack_ok) {
  std::ostringstream why;
  if (r.max_residual > r.residual_limit) why << "coefficient residual " << fmt(r.max_residual) << "; ";
  if (r.min_gram_eig < kGramEigFloor) why << "Gram eigenvalue " << fmt(r.min_gram_eig) << "; ";
  if (r.coupling_violation > kCouplingSlack) why << "coupling violation " << fmt(r.coupling_violation) << "; ";
  if (amgm_slack_ok < 0) why << "AM-GM margin " << fmt(r.amgm_margin) << "; ";
  r.detail = why.str();
  r.passed = r.detail.empty();
}

}  // namespace

VerifyReport verify_certificate(const SosCertificate& cert, const SymmetricTensor& target) {
  VerifyReport r;
  if (cert.block_mode || cert.blocks.size() != 1 || cert.blocks[0].kind != CertificateKind::Gram) {
    r.detail = "not a full-mode certificate";
    return r;
  }
  const auto& cb = cert.blocks[0];
  auto want = local_terms(target, -1.0);
  for (int i = 1; i <= target.dim(); ++i) want[MultiIndex::diagonal(i, target.order())] += cert.t;
  Residual res;
  accumulate_residual(gram_polynomial(cb.basis, cb.gram), want, res);
  r.max_residual = res.max_abs;
  r.residual_limit = kResidualFactor * (1.0 + res.max_coeff);
  r.min_gram_eig = min_eig(cb.gram);
  finish(r, 0.0);
  return r;
}

VerifyReport verify_certificate(const SosCertificate& cert, const WDecomposition& target) {
  VerifyReport r;
  if (!cert.block_mode || cert.blocks.size() != target.size()) {
    r.detail = "certificate does not match the decomposition";
    return r;
  }
  const int m = target.order;
  Residual res;
  double amgm_worst = 0.0;
  bool have_amgm = false;
  std::vector<double> rho_sum(target.global_dim, 0.0);
  r.min_gram_eig = 0.0;
  bool first_gram = true;
  for (std::size_t l = 0; l < cert.blocks.size(); ++l) {
    const auto& cb = cert.blocks[l];
    const auto& blk = target.blocks[l];
    if (cb.gamma != blk.gamma || cb.rho.size() != blk.gamma.size()) {
      r.detail = "block " + std::to_string(l) + " does not match the decomposition";
      return r;
    }
    auto want = local_terms(blk.subtensor, -1.0);
    for (std::size_t j = 0; j < cb.rho.size(); ++j) {
      want[MultiIndex::diagonal(static_cast<int>(j) + 1, m)] += cb.rho[j].second;
      rho_sum[cb.rho[j].first - 1] += cb.rho[j].second;
    }
    if (cb.kind == CertificateKind::AmGm) {
      have_amgm = true;
      auto shape = block_closed_form(blk.subtensor);
      const int k = static_cast<int>(blk.gamma.size());
      std::vector<double> b(k);
      for (int j = 0; j < k; ++j) {
        b[j] = want[MultiIndex::diagonal(j + 1, m)];
        res.max_coeff = std::max(res.max_coeff, std::abs(b[j]));
        if (shape.exponents[j] == 0) res.max_abs = std::max(res.max_abs, std::max(0.0, -b[j]));
      }
      res.max_coeff = std::max(res.max_coeff, std::abs(shape.coeff));
      std::vector<double> clamped(k);
      for (int j = 0; j < k; ++j) clamped[j] = std::max(b[j], 0.0);
      double mu0 = amgm_threshold(clamped, shape.exponents);
      double mu = shape.all_even ? shape.coeff : std::abs(shape.coeff);
      double margin = (mu0 - mu) / (1.0 + std::abs(shape.coeff));
      amgm_worst = std::min(amgm_worst, margin);
      continue;
    }
    std::map<MultiIndex, double> have;
    if (cb.kind == CertificateKind::Diagonal) {
      for (std::size_t p = 0; p < cb.basis.size(); ++p) {
        int j = cb.basis.monomials[p][0];
        have[MultiIndex::diagonal(j, m)] += cb.gram(p, p);
      }
    } else {
      have = gram_polynomial(cb.basis, cb.gram);
    }
    accumulate_residual(have, want, res);
    double e = min_eig(cb.gram);
    r.min_gram_eig = first_gram ? e : std::min(r.min_gram_eig, e);
    first_gram = false;
  }
  r.max_residual = res.max_abs;
  r.residual_limit = kResidualFactor * (1.0 + res.max_coeff);
  r.coupling_violation = -1e300;
  for (double s : rho_sum) r.coupling_violation = std::max(r.coupling_violation, s - cert.t);
  r.amgm_margin = have_amgm ? amgm_worst : 0.0;
  finish(r, r.amgm_margin < -kResidualFactor ? -1.0 : 0.0);
  return r;
}

nlohmann::json certificate_to_json(const SosCertificate& cert) {
  using nlohmann::json;
  json blocks = json::array();
  for (const auto& cb : cert.blocks) {
    json b;
    b["gamma"] = cb.gamma;
    b["kind"] = cb.kind == CertificateKind::Gram ? "gram" : cb.kind == CertificateKind::Diagonal ? "diagonal" : "amgm";
    json basis = json::array();
    for (std::size_t k = 0; k < cb.basis.size(); ++k) basis.push_back(cb.basis.global(k));
    b["basis"] = basis;
    json gram = json::array();
    for (int i = 0; i < cb.gram.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < cb.gram.cols(); ++j) row.push_back(cb.gram(i, j));
      gram.push_back(row);
    }
    b["gram"] = gram;
    json rho = json::object();
    for (auto [i, v] : cb.rho) rho[std::to_string(i)] = v;
    b["rho"] = rho;
    blocks.push_back(b);
  }
  const auto& r = cert.report;
  return json{{"t", cert.t},
              {"mode", cert.block_mode ? "block" : "full"},
              {"blocks", blocks},
              {"residual",
               {{"max_coefficient", r.max_residual},
                {"limit", r.residual_limit},
                {"min_gram_eigenvalue", r.min_gram_eig},
                {"coupling_violation", r.coupling_violation},
                {"amgm_margin", r.amgm_margin},
                {"passed", r.passed}}}};
}

// ---------------------------------------------------------------------------
// Driver

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

EigResult run(const std::function<CompiledProblem()>& compile, Method method, const EigConfig& cfg,
              const std::function<VerifyReport(const SosCertificate&)>& verify) {
  auto clock = std::chrono::steady_clock::now();
  const CompiledProblem cp = compile();
  const double compile_seconds = seconds_since(clock);
  clock = std::chrono::steady_clock::now();
  sdp::Config sc;
  sc.tol = cfg.tol;
  sc.max_iter = cfg.max_iter;
  sc.verbose = cfg.verbose;
  auto sol = sdp::solve(cp.problem, sc);
  if (sol.status != sdp::Status::Solved) {
    throw Error(ErrorCode::SolverFailure,
                std::string("SDP solver returned ") + sdp::to_string(sol.status) + ": " + sol.message);
  }
  EigResult res;
  res.timings.compile = compile_seconds;
  res.timings.solve = seconds_since(clock);
  res.method = method;
  res.status = sol.status;
  res.solver_message = sol.message;
  res.iterations = sol.iterations;
  res.primal_residual = sol.primal_residual;
  res.dual_residual = sol.dual_residual;
  res.gap = sol.gap;
  res.psd_blocks = cp.problem.psd_sizes.size();
  res.rows = cp.problem.rows.size();
  res.certificate = extract_certificate(cp, sol);
  clock = std::chrono::steady_clock::now();
  res.certificate.report = verify(res.certificate);
  res.timings.verify = seconds_since(clock);
  if (!res.certificate.report.passed) {
    throw Error(ErrorCode::SolverFailure, "certificate check failed: " + res.certificate.report.detail);
  }
  res.lambda = res.certificate.t;
  return res;
}

EigResult run_full(const SymmetricTensor& t, const EigConfig& cfg) {
  return run([&] { return compile_full(t); }, Method::Full, cfg,
             [&](const SosCertificate& c) { return verify_certificate(c, t); });
}

EigResult run_block(const WDecomposition& w, Method method, const EigConfig& cfg) {
  return run([&] { return compile_block(w, method == Method::ClosedForm); }, method, cfg,
             [&](const SosCertificate& c) { return verify_certificate(c, w); });
}

}  // namespace

EigResult max_h_eigenvalue(const SymmetricTensor& t, const EigConfig& cfg, const WDecomposition* decomposition) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "order " + std::to_string(t.order()) + " is odd");
  if (cfg.method == Method::Full) return run_full(t, cfg);

  std::optional<WDecomposition> detected;
  auto get_w = [&]() -> const WDecomposition* {
    if (decomposition) return decomposition;
    if (!detected) detected = detect(t);
    return detected ? &*detected : nullptr;
  };

  if (cfg.method == Method::Auto) {
    if (basis_size(t.dim(), t.order() / 2) <= cfg.auto_threshold) return run_full(t, cfg);
    const WDecomposition* w = get_w();
    if (!w) return run_full(t, cfg);
    return run_block(*w, Method::Block, cfg);
  }
  const WDecomposition* w = get_w();
  if (!w) throw Error(ErrorCode::NoDecomposition, "no W-decomposition supplied and none detected");
  if (w->global_dim != t.dim() || w->order != t.order()) {
    throw Error(ErrorCode::DimMismatch, "decomposition does not match the tensor shape");
  }
  return run_block(*w, cfg.method, cfg);
}

EigResult max_h_eigenvalue(const WDecomposition& w, const EigConfig& cfg) {
  if (w.order % 2 != 0) throw Error(ErrorCode::OddOrder, "order " + std::to_string(w.order) + " is odd");
  if (cfg.method == Method::Full) return run_full(w.assemble(), cfg);
  if (cfg.method == Method::Auto && basis_size(w.global_dim, w.order / 2) <= cfg.auto_threshold) {
    return run_full(w.assemble(), cfg);
  }
  return run_block(w, cfg.method == Method::ClosedForm ? Method::ClosedForm : Method::Block, cfg);
}

}  // namespace wtensor
