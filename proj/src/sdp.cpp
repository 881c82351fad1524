#include "wtensor/sdp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "wtensor/error.hpp"

namespace wtensor::sdp {

LinearForm& LinearForm::add_psd(int block, int i, int j, double v) {
  psd.push_back({block, std::min(i, j), std::max(i, j), v});
  return *this;
}

LinearForm& LinearForm::add_nonneg(int k, double v) {
  nonneg.emplace_back(k, v);
  return *this;
}

LinearForm& LinearForm::add_free(int k, double v) {
  free.emplace_back(k, v);
  return *this;
}

int Problem::add_psd_block(int size) {
  psd_sizes.push_back(size);
  return static_cast<int>(psd_sizes.size()) - 1;
}

int Problem::add_nonneg(int count) {
  nonneg_dim += count;
  return nonneg_dim - count;
}

int Problem::add_free(int count) {
  free_dim += count;
  return free_dim - count;
}

int Problem::add_row(LinearForm form, double b) {
  rows.push_back(std::move(form));
  rhs.push_back(b);
  return static_cast<int>(rows.size()) - 1;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Solved: return "Solved";
    case Status::PrimalInfeasible: return "PrimalInfeasible";
    case Status::DualInfeasible: return "DualInfeasible";
    case Status::IterationLimit: return "IterationLimit";
    case Status::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ent {
  int i, j;  // i <= j
  double v;
};

struct RowBlock {
  int block;
  std::vector<Ent> ents;
};

struct Row {
  std::vector<RowBlock> psd;  // sorted by block
  std::vector<std::pair<int, double>> nn, fr;
};

// Merges duplicates and sorts the pieces of a linear form.
Row canonical_row(const LinearForm& f, const Problem& p) {
  std::map<std::pair<int, std::pair<int, int>>, double> psd;
  for (const auto& e : f.psd) {
    if (e.block < 0 || e.block >= static_cast<int>(p.psd_sizes.size())) {
      throw Error(ErrorCode::InvalidArgument, "PSD block index out of range");
    }
    const int n = p.psd_sizes[e.block];
    const int i = std::min(e.i, e.j), j = std::max(e.i, e.j);
    if (i < 0 || j >= n) throw Error(ErrorCode::InvalidArgument, "PSD entry outside its block");
    psd[{e.block, {i, j}}] += e.value;
  }
  auto merge = [](const std::vector<std::pair<int, double>>& v, int dim, const char* what) {
    std::map<int, double> acc;
    for (const auto& [k, val] : v) {
      if (k < 0 || k >= dim) throw Error(ErrorCode::InvalidArgument, std::string(what) + " index out of range");
      acc[k] += val;
    }
    std::vector<std::pair<int, double>> out;
    for (const auto& [k, val] : acc) {
      if (val != 0.0) out.emplace_back(k, val);
    }
    return out;
  };
  Row r;
  for (const auto& [key, v] : psd) {
    if (v == 0.0) continue;
    if (r.psd.empty() || r.psd.back().block != key.first) r.psd.push_back({key.first, {}});
    r.psd.back().ents.push_back({key.second.first, key.second.second, v});
  }
  r.nn = merge(f.nonneg, p.nonneg_dim, "nonnegative");
  r.fr = merge(f.free, p.free_dim, "free");
  return r;
}

double row_norm_sq(const Row& r) {
  double s = 0.0;
  for (const auto& rb : r.psd) {
    for (const auto& e : rb.ents) s += (e.i == e.j ? 1.0 : 2.0) * e.v * e.v;
  }
  for (const auto& [k, v] : r.nn) s += v * v;
  for (const auto& [k, v] : r.fr) s += v * v;
  return s;
}

void scale_row(Row& r, double s) {
  for (auto& rb : r.psd) {
    for (auto& e : rb.ents) e.v *= s;
  }
  for (auto& [k, v] : r.nn) v *= s;
  for (auto& [k, v] : r.fr) v *= s;
}

// The row-normalized working problem.
struct Work {
  std::vector<int> n;
  int nn = 0, nf = 0;
  std::vector<Row> rows;
  VectorXd b;
  std::vector<MatrixXd> C;
  VectorXd cn, cf;
  std::vector<std::vector<std::pair<int, int>>> block_rows;  // (row, position in row.psd)
  int m() const { return static_cast<int>(rows.size()); }
  int nblocks() const { return static_cast<int>(n.size()); }
};

struct Point {
  std::vector<MatrixXd> X, Z;
  VectorXd x, z, xf, y;
};

VectorXd apply_A(const Work& w, const std::vector<MatrixXd>& X, const VectorXd& x, const VectorXd& xf) {
  VectorXd out = VectorXd::Zero(w.m());
  for (int a = 0; a < w.m(); ++a) {
    const Row& r = w.rows[a];
    double s = 0.0;
    for (const auto& rb : r.psd) {
      const MatrixXd& Xk = X[rb.block];
      for (const auto& e : rb.ents) s += (e.i == e.j ? 1.0 : 2.0) * e.v * Xk(e.i, e.j);
    }
    for (const auto& [k, v] : r.nn) s += v * x[k];
    for (const auto& [k, v] : r.fr) s += v * xf[k];
    out[a] = s;
  }
  return out;
}

void apply_At(const Work& w, const VectorXd& y, std::vector<MatrixXd>& S, VectorXd& sn, VectorXd& sf) {
  S.resize(w.nblocks());
  for (int k = 0; k < w.nblocks(); ++k) S[k] = MatrixXd::Zero(w.n[k], w.n[k]);
  sn = VectorXd::Zero(w.nn);
  sf = VectorXd::Zero(w.nf);
  for (int a = 0; a < w.m(); ++a) {
    const double ya = y[a];
    if (ya == 0.0) continue;
    const Row& r = w.rows[a];
    for (const auto& rb : r.psd) {
      MatrixXd& Sk = S[rb.block];
      for (const auto& e : rb.ents) {
        Sk(e.i, e.j) += ya * e.v;
        if (e.i != e.j) Sk(e.j, e.i) += ya * e.v;
      }
    }
    for (const auto& [k, v] : r.nn) sn[k] += ya * v;
    for (const auto& [k, v] : r.fr) sf[k] += ya * v;
  }
}

double inner(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

void symmetrize(MatrixXd& a) { a = 0.5 * (a + a.transpose()).eval(); }

struct NtScaling {
  MatrixXd G, Gi, W;
  VectorXd lam;
};

bool nt_scaling(const MatrixXd& X, const MatrixXd& Z, NtScaling& out) {
  Eigen::LLT<MatrixXd> lx(X), lz(Z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  const MatrixXd L = lx.matrixL();
  const MatrixXd R = lz.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(R.transpose() * L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd s = svd.singularValues();
  if (s.minCoeff() <= 0.0 || !std::isfinite(s.maxCoeff())) return false;
  const MatrixXd& V = svd.matrixV();
  const VectorXd s_isqrt = s.cwiseSqrt().cwiseInverse();
  out.G = (L * V) * s_isqrt.asDiagonal();
  // Gi = diag(sqrt(s)) V^T L^{-1}
  const MatrixXd LinvT_V = L.transpose().triangularView<Eigen::Upper>().solve(V);
  out.Gi = s.cwiseSqrt().asDiagonal() * LinvT_V.transpose();
  out.W = out.G * out.G.transpose();
  out.lam = s;
  return true;
}

// Largest alpha with lam + alpha * d (scaled direction) still PSD.
double max_step_psd(const VectorXd& lam, const MatrixXd& d_scaled) {
  const int n = static_cast<int>(lam.size());
  MatrixXd T(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) T(i, j) = d_scaled(i, j) / std::sqrt(lam[i] * lam[j]);
  }
  symmetrize(T);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  }
  return a;
}

// Schur complement system  [M  Af; Af^T 0] [dy; dxf] = [h; rdf]
// with M split into independent dense components.
class Kkt {
 public:
  Kkt(const Work& w) : w_(w) { build_components(); }

  bool factor(const std::vector<NtScaling>& nt, const VectorXd& E) {
    for (auto& c : comps_) {
      if (!factor_component(c, nt, E)) return false;
    }
    if (w_.nf > 0) {
      MatrixXd S = MatrixXd::Zero(w_.nf, w_.nf);
      for (const auto& c : comps_) {
        if (c.fcols.empty()) continue;
        const MatrixXd block = c.Af.transpose() * c.MinvAf;
        for (std::size_t p = 0; p < c.fcols.size(); ++p) {
          for (std::size_t q = 0; q < c.fcols.size(); ++q) S(c.fcols[p], c.fcols[q]) += block(p, q);
        }
      }
      if (!regularized_llt(S, s_scale_, s_llt_)) return false;
    }
    return true;
  }

  void solve(const VectorXd& h, const VectorXd& rdf, VectorXd& dy, VectorXd& dxf) const {
    solve_regularized(h, rdf, dy, dxf);
    const double hn = std::max(h.lpNorm<Eigen::Infinity>(), rdf.size() ? rdf.lpNorm<Eigen::Infinity>() : 0.0);
    double last = kInf;
    // Refinement against the unregularized system; stops once it no longer helps.
    for (int it = 0; it < 20; ++it) {
      VectorXd r1, r2;
      residual(h, rdf, dy, dxf, r1, r2);
      const double rn = std::max(r1.lpNorm<Eigen::Infinity>(), r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0);
      if (rn <= 1e-15 * (1.0 + hn) || rn > 0.5 * last) break;
      last = rn;
      VectorXd ey, ef;
      solve_regularized(r1, r2, ey, ef);
      dy += ey;
      if (w_.nf > 0) dxf += ef;
    }
  }

 private:
  struct Component {
    std::vector<int> rows;
    std::vector<int> blocks;
    std::vector<int> nonneg;
    std::vector<int> fcols;
    MatrixXd Af;      // rows x fcols
    MatrixXd M;       // unregularized
    VectorXd scale;   // Jacobi equilibration
    Eigen::LLT<MatrixXd> llt;
    MatrixXd MinvAf;
  };

  void build_components() {
    const int m = w_.m();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (const auto& br : w_.block_rows) {
      for (std::size_t k = 1; k < br.size(); ++k) unite(br[0].first, br[k].first);
    }
    std::vector<int> first_nn(w_.nn, -1);
    nn_rows_.assign(w_.nn, {});
    for (int a = 0; a < m; ++a) {
      for (const auto& [k, v] : w_.rows[a].nn) {
        nn_rows_[k].emplace_back(a, v);
        if (first_nn[k] < 0) {
          first_nn[k] = a;
        } else {
          unite(first_nn[k], a);
        }
      }
    }
    std::map<int, int> root_to_comp;
    comp_of_.assign(m, -1);
    local_.assign(m, -1);
    for (int a = 0; a < m; ++a) {
      const int r = find(a);
      auto it = root_to_comp.find(r);
      if (it == root_to_comp.end()) {
        it = root_to_comp.emplace(r, static_cast<int>(comps_.size())).first;
        comps_.emplace_back();
      }
      Component& c = comps_[it->second];
      comp_of_[a] = it->second;
      local_[a] = static_cast<int>(c.rows.size());
      c.rows.push_back(a);
    }
    for (int k = 0; k < w_.nblocks(); ++k) {
      if (!w_.block_rows[k].empty()) comps_[comp_of_[w_.block_rows[k][0].first]].blocks.push_back(k);
    }
    for (int k = 0; k < w_.nn; ++k) {
      if (first_nn[k] >= 0) comps_[comp_of_[first_nn[k]]].nonneg.push_back(k);
    }
    for (auto& c : comps_) {
      std::vector<int> cols;
      for (int a : c.rows) {
        for (const auto& [k, v] : w_.rows[a].fr) cols.push_back(k);
      }
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      c.fcols = cols;
      c.Af = MatrixXd::Zero(c.rows.size(), cols.size());
      for (std::size_t la = 0; la < c.rows.size(); ++la) {
        for (const auto& [k, v] : w_.rows[c.rows[la]].fr) {
          const auto pos = std::lower_bound(cols.begin(), cols.end(), k) - cols.begin();
          c.Af(la, pos) += v;
        }
      }
    }
  }

  bool factor_component(Component& c, const std::vector<NtScaling>& nt, const VectorXd& E) {
    const int sz = static_cast<int>(c.rows.size());
    MatrixXd& M = c.M;
    M = MatrixXd::Zero(sz, sz);
    for (int k : c.blocks) {
      const MatrixXd& W = nt[k].W;
      const auto& br = w_.block_rows[k];
      for (std::size_t ia = 0; ia < br.size(); ++ia) {
        const auto& ea = w_.rows[br[ia].first].psd[br[ia].second].ents;
        const int la = local_[br[ia].first];
        for (std::size_t ib = ia; ib < br.size(); ++ib) {
          const auto& eb = w_.rows[br[ib].first].psd[br[ib].second].ents;
          double s = 0.0;
          for (const auto& e : ea) {
            const double fe = (e.i == e.j ? 1.0 : 2.0) * e.v;
            for (const auto& f : eb) {
              const double t = f.i != f.j ? W(e.i, f.i) * W(e.j, f.j) + W(e.i, f.j) * W(e.j, f.i)
                                          : W(e.i, f.i) * W(e.j, f.i);
              s += fe * f.v * t;
            }
          }
          const int lb = local_[br[ib].first];
          M(la, lb) += s;
          if (la != lb) M(lb, la) += s;
        }
      }
    }
    for (int k : c.nonneg) {
      for (const auto& [ra, va] : nn_rows_[k]) {
        for (const auto& [rb, vb] : nn_rows_[k]) M(local_[ra], local_[rb]) += va * vb * E[k];
      }
    }
    if (!regularized_llt(M, c.scale, c.llt)) return false;
    if (!c.fcols.empty()) c.MinvAf = apply_inverse(c, c.Af);
    return true;
  }

  // Factors D M D + delta I with D the inverse square-root diagonal of M.
  static bool regularized_llt(const MatrixXd& M, VectorXd& scale, Eigen::LLT<MatrixXd>& llt) {
    const Eigen::Index n = M.rows();
    scale.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) scale[i] = M(i, i) > 0.0 ? 1.0 / std::sqrt(M(i, i)) : 1.0;
    for (double delta = 1e-13; delta <= 1e-3; delta *= 10.0) {
      MatrixXd H = scale.asDiagonal() * M * scale.asDiagonal();
      H.diagonal().array() += delta;
      llt.compute(H);
      if (llt.info() == Eigen::Success) return true;
    }
    return false;
  }

  static MatrixXd apply_inverse(const Component& c, const MatrixXd& rhs) {
    MatrixXd t = c.scale.asDiagonal() * rhs;
    c.llt.solveInPlace(t);
    return c.scale.asDiagonal() * t;
  }

  void solve_regularized(const VectorXd& h, const VectorXd& rdf, VectorXd& dy, VectorXd& dxf) const {
    dy = VectorXd::Zero(w_.m());
    std::vector<VectorXd> t(comps_.size());
    for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
      const auto& c = comps_[ci];
      VectorXd hc(c.rows.size());
      for (std::size_t la = 0; la < c.rows.size(); ++la) hc[la] = h[c.rows[la]];
      t[ci] = apply_inverse(c, hc);
    }
    if (w_.nf > 0) {
      VectorXd rs = -rdf;
      for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
        const auto& c = comps_[ci];
        if (c.fcols.empty()) continue;
        const VectorXd contrib = c.Af.transpose() * t[ci];
        for (std::size_t p = 0; p < c.fcols.size(); ++p) rs[c.fcols[p]] += contrib[p];
      }
      VectorXd u = s_scale_.asDiagonal() * rs;
      s_llt_.solveInPlace(u);
      dxf = s_scale_.asDiagonal() * u;
    } else {
      dxf.resize(0);
    }
    for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
      const auto& c = comps_[ci];
      VectorXd v = t[ci];
      if (!c.fcols.empty()) {
        VectorXd local(c.fcols.size());
        for (std::size_t p = 0; p < c.fcols.size(); ++p) local[p] = dxf[c.fcols[p]];
        v -= c.MinvAf * local;
      }
      for (std::size_t la = 0; la < c.rows.size(); ++la) dy[c.rows[la]] = v[la];
    }
  }

  void residual(const VectorXd& h, const VectorXd& rdf, const VectorXd& dy, const VectorXd& dxf, VectorXd& r1,
                VectorXd& r2) const {
    r1 = h;
    r2 = rdf;
    for (const auto& c : comps_) {
      VectorXd yc(c.rows.size());
      for (std::size_t la = 0; la < c.rows.size(); ++la) yc[la] = dy[c.rows[la]];
      VectorXd my = c.M * yc;
      if (!c.fcols.empty()) {
        VectorXd local(c.fcols.size());
        for (std::size_t p = 0; p < c.fcols.size(); ++p) local[p] = dxf[c.fcols[p]];
        my += c.Af * local;
        const VectorXd aty = c.Af.transpose() * yc;
        for (std::size_t p = 0; p < c.fcols.size(); ++p) r2[c.fcols[p]] -= aty[p];
      }
      for (std::size_t la = 0; la < c.rows.size(); ++la) r1[c.rows[la]] -= my[la];
    }
  }

  const Work& w_;
  std::vector<Component> comps_;
  std::vector<int> comp_of_, local_;
  std::vector<std::vector<std::pair<int, double>>> nn_rows_;  // nonneg column -> (row, coefficient)
  VectorXd s_scale_;
  Eigen::LLT<MatrixXd> s_llt_;
};

// Column key for the private-column test: PSD entries, then nonneg, then free.
struct ColumnIndex {
  std::vector<long long> offset;
  long long nn_base = 0, fr_base = 0, total = 0;
  explicit ColumnIndex(const Problem& p) {
    long long o = 0;
    for (int n : p.psd_sizes) {
      offset.push_back(o);
      o += static_cast<long long>(n) * n;
    }
    nn_base = o;
    fr_base = o + p.nonneg_dim;
    total = fr_base + p.free_dim;
  }
  long long psd(int block, int i, int j, int n) const { return offset[block] + static_cast<long long>(i) * n + j; }
};

// Drops numerically dependent rows. Returns false on an inconsistent system.
bool presolve(const Problem& p, std::vector<Row>& rows, VectorXd& b, std::vector<int>& kept,
              std::vector<int>& dropped, std::string& msg) {
  const int m = static_cast<int>(rows.size());
  ColumnIndex cols(p);
  std::map<long long, int> count;
  auto for_each_col = [&](const Row& r, auto&& fn) {
    for (const auto& rb : r.psd) {
      for (const auto& e : rb.ents) fn(cols.psd(rb.block, e.i, e.j, p.psd_sizes[rb.block]), (e.i == e.j ? 1.0 : 2.0) * e.v);
    }
    for (const auto& [k, v] : r.nn) fn(cols.nn_base + k, v);
    for (const auto& [k, v] : r.fr) fn(cols.fr_base + k, v);
  };
  for (const auto& r : rows) for_each_col(r, [&](long long c, double) { ++count[c]; });

  std::vector<int> suspect;
  std::vector<char> keep(m, 1);
  for (int a = 0; a < m; ++a) {
    bool has_private = false;
    for_each_col(rows[a], [&](long long c, double) { has_private = has_private || count[c] == 1; });
    if (rows[a].psd.empty() && rows[a].nn.empty() && rows[a].fr.empty()) {
      if (std::abs(b[a]) > 0.0) {
        msg = "row " + std::to_string(a) + " is 0 = nonzero";
        return false;
      }
      keep[a] = 0;
      continue;
    }
    if (!has_private) suspect.push_back(a);
  }

  if (suspect.size() > 1) {
    std::map<long long, int> local_col;
    for (int a : suspect) for_each_col(rows[a], [&](long long c, double) { local_col.emplace(c, 0); });
    int nc = 0;
    for (auto& [c, idx] : local_col) idx = nc++;
    MatrixXd At = MatrixXd::Zero(nc, suspect.size());
    for (std::size_t s = 0; s < suspect.size(); ++s) {
      for_each_col(rows[suspect[s]], [&](long long c, double v) { At(local_col[c], s) += v; });
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(At);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(suspect.size())) {
      const auto& perm = qr.colsPermutation().indices();
      std::vector<int> basis, extra;
      for (Eigen::Index k = 0; k < perm.size(); ++k) (k < rank ? basis : extra).push_back(perm[k]);
      std::sort(basis.begin(), basis.end());
      MatrixXd B(nc, basis.size());
      VectorXd bb(basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        B.col(k) = At.col(basis[k]);
        bb[k] = b[suspect[basis[k]]];
      }
      Eigen::HouseholderQR<MatrixXd> bqr(B);
      for (int e : extra) {
        const VectorXd coef = bqr.solve(At.col(e));
        const double predicted = coef.dot(bb);
        const double actual = b[suspect[e]];
        if (std::abs(predicted - actual) > 1e-8 * (1.0 + std::abs(actual))) {
          msg = "dependent row " + std::to_string(suspect[e]) + " contradicts the others";
          return false;
        }
        keep[suspect[e]] = 0;
      }
    }
  }
  for (int a = 0; a < m; ++a) (keep[a] ? kept : dropped).push_back(a);
  return true;
}

struct Residuals {
  VectorXd rp;
  std::vector<MatrixXd> Rd;
  VectorXd rdn, rdf;
  double rel_p = 0, rel_d = 0, gap = 0, pobj = 0, dobj = 0, mu = 0;
};

}  // namespace

Solution solve(const Problem& problem, const Config& config) {
  Solution sol;
  const int nb = static_cast<int>(problem.psd_sizes.size());
  for (int n : problem.psd_sizes) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "PSD block sizes must be positive");
  }
  if (problem.rhs.size() != problem.rows.size()) {
    throw Error(ErrorCode::InvalidArgument, "one right-hand side per row is required");
  }
  const int m_in = problem.num_rows();

  // Canonical rows, then presolve.
  std::vector<Row> all_rows;
  all_rows.reserve(m_in);
  for (const auto& f : problem.rows) all_rows.push_back(canonical_row(f, problem));
  VectorXd b_all = Eigen::Map<const VectorXd>(problem.rhs.data(), m_in);
  std::vector<int> kept, dropped;
  auto fill_shapes = [&] {
    sol.X.clear();
    sol.Z.clear();
    for (int n : problem.psd_sizes) {
      sol.X.push_back(MatrixXd::Zero(n, n));
      sol.Z.push_back(MatrixXd::Zero(n, n));
    }
    sol.x_nonneg = VectorXd::Zero(problem.nonneg_dim);
    sol.z_nonneg = VectorXd::Zero(problem.nonneg_dim);
    sol.x_free = VectorXd::Zero(problem.free_dim);
    sol.y = VectorXd::Zero(m_in);
  };
  if (!presolve(problem, all_rows, b_all, kept, dropped, sol.message)) {
    fill_shapes();
    sol.status = Status::PrimalInfeasible;
    return sol;
  }
  sol.dropped_rows = dropped;

  Work w;
  w.n = problem.psd_sizes;
  w.nn = problem.nonneg_dim;
  w.nf = problem.free_dim;
  std::vector<double> row_scale;
  w.b.resize(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    Row r = all_rows[kept[k]];
    const double s = 1.0 / std::sqrt(row_norm_sq(r));
    scale_row(r, s);
    row_scale.push_back(s);
    w.b[k] = b_all[kept[k]] * s;
    w.rows.push_back(std::move(r));
  }
  const Row obj = canonical_row(problem.objective, problem);
  const double obj_norm = std::sqrt(row_norm_sq(obj));
  const double gamma = obj_norm > 0.0 ? obj_norm : 1.0;
  w.C.resize(nb);
  for (int k = 0; k < nb; ++k) w.C[k] = MatrixXd::Zero(w.n[k], w.n[k]);
  w.cn = VectorXd::Zero(w.nn);
  w.cf = VectorXd::Zero(w.nf);
  for (const auto& rb : obj.psd) {
    for (const auto& e : rb.ents) {
      w.C[rb.block](e.i, e.j) += e.v / gamma;
      if (e.i != e.j) w.C[rb.block](e.j, e.i) += e.v / gamma;
    }
  }
  for (const auto& [k, v] : obj.nn) w.cn[k] += v / gamma;
  for (const auto& [k, v] : obj.fr) w.cf[k] += v / gamma;
  w.block_rows.assign(nb, {});
  for (int a = 0; a < w.m(); ++a) {
    for (std::size_t p = 0; p < w.rows[a].psd.size(); ++p) {
      w.block_rows[w.rows[a].psd[p].block].emplace_back(a, static_cast<int>(p));
    }
  }

  const double b_inf = w.b.size() ? w.b.lpNorm<Eigen::Infinity>() : 0.0;
  double c_inf = w.cn.size() ? w.cn.lpNorm<Eigen::Infinity>() : 0.0;
  c_inf = std::max(c_inf, w.cf.size() ? w.cf.lpNorm<Eigen::Infinity>() : 0.0);
  for (const auto& Ck : w.C) c_inf = std::max(c_inf, Ck.cwiseAbs().maxCoeff());
  double nu = w.nn;
  for (int n : w.n) nu += n;
  nu = std::max(nu, 1.0);

  // Interior start.
  Point pt;
  const double tau_p = 1.0 + b_inf, tau_d = 1.0 + c_inf;
  for (int k = 0; k < nb; ++k) {
    pt.X.push_back(tau_p * MatrixXd::Identity(w.n[k], w.n[k]));
    pt.Z.push_back(tau_d * MatrixXd::Identity(w.n[k], w.n[k]));
  }
  pt.x = VectorXd::Constant(w.nn, tau_p);
  pt.z = VectorXd::Constant(w.nn, tau_d);
  pt.xf = VectorXd::Zero(w.nf);
  pt.y = VectorXd::Zero(w.m());

  auto residuals = [&](const Point& p) {
    Residuals r;
    r.rp = w.b - apply_A(w, p.X, p.x, p.xf);
    std::vector<MatrixXd> S;
    VectorXd sn, sf;
    apply_At(w, p.y, S, sn, sf);
    r.Rd.resize(nb);
    double dmax = 0.0, comp = 0.0;
    r.pobj = 0.0;
    for (int k = 0; k < nb; ++k) {
      r.Rd[k] = w.C[k] - S[k] - p.Z[k];
      dmax = std::max(dmax, r.Rd[k].cwiseAbs().maxCoeff());
      comp += inner(p.X[k], p.Z[k]);
      r.pobj += inner(w.C[k], p.X[k]);
    }
    r.rdn = w.cn - sn - p.z;
    r.rdf = w.cf - sf;
    if (w.nn) dmax = std::max(dmax, r.rdn.lpNorm<Eigen::Infinity>());
    if (w.nf) dmax = std::max(dmax, r.rdf.lpNorm<Eigen::Infinity>());
    comp += p.x.dot(p.z);
    r.pobj += w.cn.dot(p.x) + w.cf.dot(p.xf);
    r.dobj = w.b.dot(p.y);
    r.mu = comp / nu;
    r.rel_p = (w.m() ? r.rp.lpNorm<Eigen::Infinity>() : 0.0) / (1.0 + b_inf);
    r.rel_d = dmax / (1.0 + c_inf);
    r.gap = std::abs(r.pobj - r.dobj) / (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
    return r;
  };

  auto finish = [&](Status status, const Residuals& r, int iters) {
    fill_shapes();
    sol.status = status;
    sol.iterations = iters;
    sol.primal_residual = r.rel_p;
    sol.dual_residual = r.rel_d;
    sol.gap = r.gap;
    for (int k = 0; k < nb; ++k) {
      sol.X[k] = pt.X[k];
      sol.Z[k] = gamma * pt.Z[k];
    }
    sol.x_nonneg = pt.x;
    sol.z_nonneg = gamma * pt.z;
    sol.x_free = pt.xf;
    for (std::size_t k = 0; k < kept.size(); ++k) sol.y[kept[k]] = gamma * pt.y[k] * row_scale[k];
    // Objectives in original units.
    double pobj = 0.0;
    for (const auto& rb : obj.psd) {
      for (const auto& e : rb.ents) pobj += (e.i == e.j ? 1.0 : 2.0) * e.v * sol.X[rb.block](e.i, e.j);
    }
    for (const auto& [k, v] : obj.nn) pobj += v * sol.x_nonneg[k];
    for (const auto& [k, v] : obj.fr) pobj += v * sol.x_free[k];
    sol.primal_objective = pobj;
    sol.dual_objective = b_all.dot(sol.y);
    return sol;
  };

  // Numerical breakdown close to the optimum: keep the last iterate.
  auto breakdown = [&](const char* why, const Residuals& r, int iters) {
    const double loose = config.reduced_accuracy * config.tol;
    if (r.rel_p <= loose && r.rel_d <= loose && r.gap <= loose) {
      sol.message = std::string("reduced accuracy (") + why + ")";
      return finish(Status::Solved, r, iters);
    }
    sol.message = why;
    return finish(Status::NumericalTrouble, r, iters);
  };

  Kkt kkt(w);
  std::vector<NtScaling> nt(nb);
  double best_merit = kInf;
  int stagnant = 0;
  Residuals res;
  for (int iter = 0;; ++iter) {
    res = residuals(pt);
    const double merit = std::max({res.rel_p, res.rel_d, res.gap});
    if (config.verbose) {
      std::fprintf(stderr, "%3d  pobj %+.10e  dobj %+.10e  rp %.2e  rd %.2e  gap %.2e  mu %.2e\n", iter,
                   res.pobj * gamma, res.dobj * gamma, res.rel_p, res.rel_d, res.gap, res.mu);
    }
    if (res.rel_p <= config.tol && res.rel_d <= config.tol && res.gap <= config.tol) {
      return finish(Status::Solved, res, iter);
    }
    if (res.dobj > 1e10 * (1.0 + b_inf) && res.rel_d <= 1e-6) {
      sol.message = "dual objective diverges";
      return finish(Status::PrimalInfeasible, res, iter);
    }
    if (-res.pobj > 1e10 * (1.0 + c_inf) && res.rel_p <= 1e-6) {
      sol.message = "primal objective diverges";
      return finish(Status::DualInfeasible, res, iter);
    }
    if (merit < 0.9 * best_merit) {
      best_merit = merit;
      stagnant = 0;
    } else if (++stagnant >= 30) {
      if (std::max({res.rel_p, res.rel_d, res.gap}) <= config.reduced_accuracy * config.tol) {
        return breakdown("no progress in 30 iterations", res, iter);
      }
      sol.message = "no progress in 30 iterations";
      Status st = Status::NumericalTrouble;
      if (res.rel_p > config.tol && res.rel_d <= std::sqrt(config.tol)) st = Status::PrimalInfeasible;
      if (res.rel_d > config.tol && res.rel_p <= std::sqrt(config.tol)) st = Status::DualInfeasible;
      return finish(st, res, iter);
    }
    if (iter >= config.max_iter) return finish(Status::IterationLimit, res, iter);

    // Scaling and factorization.
    bool ok = true;
    for (int k = 0; k < nb && ok; ++k) ok = nt_scaling(pt.X[k], pt.Z[k], nt[k]);
    VectorXd E = w.nn ? VectorXd(pt.x.cwiseQuotient(pt.z)) : VectorXd();
    if (ok) ok = kkt.factor(nt, E);
    if (!ok) return breakdown("lost positive definiteness", res, iter);

    std::vector<MatrixXd> WRdW(nb);
    for (int k = 0; k < nb; ++k) WRdW[k] = nt[k].W * res.Rd[k] * nt[k].W;

    struct Direction {
      std::vector<MatrixXd> dX, dZ;
      VectorXd dx, dz, dxf, dy;
      double ap = 0, ad = 0;
    };
    auto direction = [&](const std::vector<MatrixXd>& Rc, const VectorXd& rc_lp) {
      Direction d;
      std::vector<MatrixXd> T(nb);
      for (int k = 0; k < nb; ++k) T[k] = Rc[k] - WRdW[k];
      VectorXd tlp = w.nn ? VectorXd(rc_lp - E.cwiseProduct(res.rdn)) : VectorXd();
      VectorXd h = res.rp - apply_A(w, T, tlp, VectorXd::Zero(w.nf));
      kkt.solve(h, res.rdf, d.dy, d.dxf);
      std::vector<MatrixXd> S;
      VectorXd sn, sf;
      apply_At(w, d.dy, S, sn, sf);
      d.dX.resize(nb);
      d.dZ.resize(nb);
      d.ap = d.ad = kInf;
      for (int k = 0; k < nb; ++k) {
        d.dZ[k] = res.Rd[k] - S[k];
        symmetrize(d.dZ[k]);
        d.dX[k] = Rc[k] - nt[k].W * d.dZ[k] * nt[k].W;
        symmetrize(d.dX[k]);
        d.ap = std::min(d.ap, max_step_psd(nt[k].lam, nt[k].Gi * d.dX[k] * nt[k].Gi.transpose()));
        d.ad = std::min(d.ad, max_step_psd(nt[k].lam, nt[k].G.transpose() * d.dZ[k] * nt[k].G));
      }
      if (w.nn) {
        d.dz = res.rdn - sn;
        d.dx = rc_lp - E.cwiseProduct(d.dz);
        d.ap = std::min(d.ap, max_step_lp(pt.x, d.dx));
        d.ad = std::min(d.ad, max_step_lp(pt.z, d.dz));
      }
      return d;
    };

    // Predictor.
    std::vector<MatrixXd> Rc(nb);
    for (int k = 0; k < nb; ++k) Rc[k] = -pt.X[k];
    VectorXd rc_lp = w.nn ? VectorXd(-pt.x) : VectorXd();
    Direction aff = direction(Rc, rc_lp);
    const double ap_a = std::min(1.0, aff.ap), ad_a = std::min(1.0, aff.ad);
    double comp_aff = 0.0;
    for (int k = 0; k < nb; ++k) comp_aff += inner(pt.X[k] + ap_a * aff.dX[k], pt.Z[k] + ad_a * aff.dZ[k]);
    if (w.nn) comp_aff += (pt.x + ap_a * aff.dx).dot(pt.z + ad_a * aff.dz);
    const double mu_aff = std::max(comp_aff, 0.0) / nu;
    const double sigma = std::clamp(std::pow(mu_aff / res.mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (int k = 0; k < nb; ++k) {
      const auto& s = nt[k];
      const MatrixXd dXs = s.Gi * aff.dX[k] * s.Gi.transpose();
      const MatrixXd dZs = s.G.transpose() * aff.dZ[k] * s.G;
      MatrixXd rhs = -(dXs * dZs + dZs * dXs);
      const int n = w.n[k];
      for (int i = 0; i < n; ++i) rhs(i, i) += 2.0 * sigma * res.mu - 2.0 * s.lam[i] * s.lam[i];
      MatrixXd D(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) D(i, j) = rhs(i, j) / (s.lam[i] + s.lam[j]);
      }
      symmetrize(D);
      Rc[k] = s.G * D * s.G.transpose();
    }
    if (w.nn) {
      rc_lp = (VectorXd::Constant(w.nn, sigma * res.mu) - pt.x.cwiseProduct(pt.z) - aff.dx.cwiseProduct(aff.dz))
                  .cwiseQuotient(pt.z);
    }
    Direction dir = direction(Rc, rc_lp);
    const double ap = std::min(1.0, 0.99 * dir.ap), ad = std::min(1.0, 0.99 * dir.ad);
    if (!(ap > 0.0) || !(ad > 0.0) || !std::isfinite(ap + ad)) return breakdown("zero step length", res, iter);
    for (int k = 0; k < nb; ++k) {
      pt.X[k] += ap * dir.dX[k];
      pt.Z[k] += ad * dir.dZ[k];
      symmetrize(pt.X[k]);
      symmetrize(pt.Z[k]);
    }
    if (w.nn) {
      pt.x += ap * dir.dx;
      pt.z += ad * dir.dz;
    }
    if (w.nf) pt.xf += ap * dir.dxf;
    pt.y += ad * dir.dy;
    if (config.verbose) std::fprintf(stderr, "     sigma %.3e  alpha_p %.4f  alpha_d %.4f\n", sigma, ap, ad);
  }
}

// Dump format:
//   wtensor-sdp 1
//   psd <count> <size_1> ... <size_count>
//   nonneg <dim>
//   free <dim>
//   rows <m>
//   rhs <row> <value>            (rows 1..m; omitted when zero)
//   <row> <col> <block> <i> <j> <value>
// row 0 is the objective. block 1..P are PSD (i <= j, 1-based), P+1 is the
// nonnegative block and P+2 the free block (i = j = coordinate). col is the
// 1-based position in the layout: PSD upper triangles row by row, then
// nonnegative, then free coordinates.
void write_problem(std::ostream& out, const Problem& p) {
  const int nb = static_cast<int>(p.psd_sizes.size());
  std::vector<long long> tri_offset;
  long long off = 0;
  for (int n : p.psd_sizes) {
    tri_offset.push_back(off);
    off += static_cast<long long>(n) * (n + 1) / 2;
  }
  const long long nn_off = off, fr_off = off + p.nonneg_dim;
  auto col_of = [&](int block, int i, int j) {
    const long long n = p.psd_sizes[block];
    return tri_offset[block] + i * n - static_cast<long long>(i) * (i - 1) / 2 + (j - i) + 1;
  };
  out << "wtensor-sdp 1\n";
  out << "psd " << nb;
  for (int n : p.psd_sizes) out << ' ' << n;
  out << "\nnonneg " << p.nonneg_dim << "\nfree " << p.free_dim << "\nrows " << p.num_rows() << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (int r = 0; r < p.num_rows(); ++r) {
    if (p.rhs[r] != 0.0) out << "rhs " << r + 1 << ' ' << num(p.rhs[r]) << '\n';
  }
  auto emit = [&](int row, const LinearForm& f) {
    for (const auto& e : f.psd) {
      const int i = std::min(e.i, e.j), j = std::max(e.i, e.j);
      out << row << ' ' << col_of(e.block, i, j) << ' ' << e.block + 1 << ' ' << i + 1 << ' ' << j + 1 << ' '
          << num(e.value) << '\n';
    }
    for (const auto& [k, v] : f.nonneg) {
      out << row << ' ' << nn_off + k + 1 << ' ' << nb + 1 << ' ' << k + 1 << ' ' << k + 1 << ' ' << num(v) << '\n';
    }
    for (const auto& [k, v] : f.free) {
      out << row << ' ' << fr_off + k + 1 << ' ' << nb + 2 << ' ' << k + 1 << ' ' << k + 1 << ' ' << num(v) << '\n';
    }
  };
  emit(0, p.objective);
  for (int r = 0; r < p.num_rows(); ++r) emit(r + 1, p.rows[r]);
}

Problem read_problem(std::istream& in) {
  Problem p;
  std::string line, word;
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ParseError, "SDP dump: " + why); };
  if (!std::getline(in, line) || line.rfind("wtensor-sdp 1", 0) != 0) fail("missing header");
  int m = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (std::isalpha(static_cast<unsigned char>(line[0]))) {
      ls >> word;
      if (word == "psd") {
        int count = 0;
        ls >> count;
        p.psd_sizes.resize(count);
        for (int& s : p.psd_sizes) ls >> s;
      } else if (word == "nonneg") {
        ls >> p.nonneg_dim;
      } else if (word == "free") {
        ls >> p.free_dim;
      } else if (word == "rows") {
        ls >> m;
        p.rows.assign(m, {});
        p.rhs.assign(m, 0.0);
      } else if (word == "rhs") {
        int r = 0;
        double v = 0;
        ls >> r >> v;
        if (r < 1 || r > m) fail("rhs row out of range");
        p.rhs[r - 1] = v;
      } else {
        fail("unknown keyword " + word);
      }
      if (ls.fail()) fail("bad line: " + line);
      continue;
    }
    long long col = 0;
    int row = 0, block = 0, i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> row >> col >> block >> i >> j >> v)) fail("bad entry: " + line);
    if (m < 0 || row < 0 || row > m) fail("row out of range");
    LinearForm& f = row == 0 ? p.objective : p.rows[row - 1];
    const int nb = static_cast<int>(p.psd_sizes.size());
    if (block >= 1 && block <= nb) {
      f.add_psd(block - 1, i - 1, j - 1, v);
    } else if (block == nb + 1) {
      f.add_nonneg(i - 1, v);
    } else if (block == nb + 2) {
      f.add_free(i - 1, v);
    } else {
      fail("block out of range");
    }
  }
  if (m < 0) fail("missing rows line");
  return p;
}

}  // namespace wtensor::sdp
