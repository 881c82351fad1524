#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wtensor/sdp.hpp"
#include "wtensor/symmetric_tensor.hpp"
#include "wtensor/w_structure.hpp"

namespace wtensor {

/// All monomials of degree `degree` in the variables `variables`, in
/// graded-lex order (x1^2, x1 x2, x2^2, ...). Each monomial is stored as a
/// sorted tuple of local coordinates 1..|variables|.
struct MonomialBasis {
  std::vector<int> variables;
  int degree = 0;
  std::vector<MultiIndex> monomials;

  std::size_t size() const { return monomials.size(); }
  /// Global index tuple of monomial k, e.g. {1, 1} for x1^2.
  std::vector<int> global(std::size_t k) const;
};

MonomialBasis monomial_basis(std::vector<int> variables, int degree);

/// Size of a degree-d basis in k variables, C(k + d - 1, d).
std::size_t basis_size(int num_vars, int degree);

/// AM-GM threshold mu0 = 2d prod_{a_i != 0} (b_i / a_i)^{a_i / 2d}.
double amgm_threshold(const std::vector<double>& b, const std::vector<int>& a);
/// Whether sum_i b_i x_i^{2d} - mu x^a is nonnegative: mu <= mu0 when every a_i is
/// even, |mu| <= mu0 otherwise. Requires b >= 0.
bool amgm_nonnegative(const std::vector<double>& b, const std::vector<int>& a, double mu, double slack = 0.0);

/// Shape of a single-mixed-term block, used to decide whether the PSD block can
/// be replaced by a geometric-mean constraint.
struct SingleTermShape {
  MultiIndex mixed;             ///< local multi-index of the mixed term
  double coeff = 0.0;           ///< its coefficient
  std::vector<int> exponents;   ///< per local variable
  bool unit_exponents = false;  ///< every exponent is 0 or 1
  bool all_even = false;
};
SingleTermShape block_closed_form(const SymmetricTensor& sub);

enum class Method { Auto, Full, Block, ClosedForm };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class CertificateKind { Gram, Diagonal, AmGm };

struct CertificateBlock {
  std::vector<int> gamma;
  CertificateKind kind = CertificateKind::Gram;
  MonomialBasis basis;
  Eigen::MatrixXd gram;                     ///< Gram or diagonal-Gram matrix (empty for AmGm)
  std::vector<std::pair<int, double>> rho;  ///< (global index, shift); empty in full mode
};

struct VerifyReport {
  bool passed = false;
  double max_residual = 0.0;     ///< worst coefficient mismatch
  double residual_limit = 0.0;   ///< 1e-6 (1 + max |coeff|)
  double min_gram_eig = 0.0;     ///< smallest Gram eigenvalue over all blocks
  double coupling_violation = 0.0;  ///< max_i sum_l rho_i^l - t (block mode)
  double amgm_margin = 0.0;      ///< min over AM-GM blocks of mu0 - |mu|, relative
  std::string detail;
};

struct SosCertificate {
  double t = 0.0;
  bool block_mode = false;
  std::vector<CertificateBlock> blocks;
  VerifyReport report;
};

/// Target: t sum_i x_i^m - T x^m is SOS.
VerifyReport verify_certificate(const SosCertificate& cert, const SymmetricTensor& target);
/// Target: each -A_l + sum_i rho_i^l x_i^m is SOS and sum_l rho_i^l <= t.
VerifyReport verify_certificate(const SosCertificate& cert, const WDecomposition& target);

nlohmann::json certificate_to_json(const SosCertificate& cert);

/// An SDP together with the bookkeeping needed to read a certificate back.
struct CompiledProblem {
  struct BlockMap {
    std::vector<int> gamma;
    CertificateKind kind = CertificateKind::Gram;
    MonomialBasis basis;
    int psd_block = -1;               ///< Gram blocks
    std::vector<int> diag_nonneg;     ///< Diagonal blocks: one nonneg variable per basis entry
    std::vector<std::pair<int, int>> rho;  ///< (global index, free variable)
  };
  sdp::Problem problem;
  int t_var = -1;
  bool block_mode = false;
  std::vector<BlockMap> blocks;
};

CompiledProblem compile_full(const SymmetricTensor& t);
/// `closed_form` swaps eligible single-mixed-term blocks for geometric-mean trees.
CompiledProblem compile_block(const WDecomposition& w, bool closed_form = false);

SosCertificate extract_certificate(const CompiledProblem& cp, const sdp::Solution& sol);

struct EigConfig {
  Method method = Method::Auto;
  double tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
  /// Auto switches to Block once the full Gram dimension exceeds this.
  std::size_t auto_threshold = 200;
};

/// Wall-clock seconds per phase.
struct PhaseTimings {
  double compile = 0.0;
  double solve = 0.0;
  double verify = 0.0;
};

struct EigResult {
  double lambda = 0.0;
  Method method = Method::Full;  ///< the method actually used
  SosCertificate certificate;
  sdp::Status status = sdp::Status::Solved;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::size_t psd_blocks = 0;
  std::size_t rows = 0;
  std::string solver_message;  ///< non-empty when the solver stopped at reduced accuracy
  PhaseTimings timings;
};

/// Maximum H-eigenvalue of an even-order tensor. Block and ClosedForm use
/// `decomposition` when given and otherwise try detect().
EigResult max_h_eigenvalue(const SymmetricTensor& t, const EigConfig& cfg = {},
                           const WDecomposition* decomposition = nullptr);
EigResult max_h_eigenvalue(const WDecomposition& w, const EigConfig& cfg = {});

}  // namespace wtensor
